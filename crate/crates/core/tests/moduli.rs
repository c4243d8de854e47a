//! Triples, quadruples and their tangent spaces.

mod common;

use std::sync::Arc;

use common::rng;
use num::Zero;
use quiverlab_core::framed::{FramedModule, FramedSetting};
use quiverlab_core::hecke::{hecke_up, random_walk};
use quiverlab_core::moduli::{
    alpha_kernel_check, chain_check, equivalent, make_triple, quad_from_two_quots, quad_from_two_subs, quad_tangent,
    triple_tangent, QuadruplePoint, TriplePoint, ALPHA_X_SIGN,
};
use quiverlab_core::piq::{ext_complex, LoopModule};
use quiverlab_core::random::random_coords;
use quiverlab_core::{q, Quiver, Rational};
use rand_chacha::ChaCha8Rng;

fn ext1(s: &FramedSetting, x: &LoopModule, b: &FramedModule) -> usize {
    ext_complex(&s.loop_cb(x).unwrap(), &b.to_cb()).unwrap().dims()[1]
}

fn nonzero_coords(n: usize, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    loop {
        let c = random_coords(n, rng);
        if c.iter().any(|v| !v.is_zero()) {
            return c;
        }
    }
}

/// Triples obtained by repeating a walk's last label twice from each visited point.
fn triples(s: &Arc<FramedSetting>, seed: u64) -> Vec<TriplePoint> {
    let mut r = rng(seed);
    let walk = random_walk(s, 3, &mut r).unwrap();
    let mut out = Vec::new();
    for p in walk.pairs() {
        let x = p.x.clone();
        let b0 = p.b1.clone();
        let n1 = ext1(s, &x, &b0);
        let c1 = nonzero_coords(n1, &mut r);
        let p01 = hecke_up(&b0, &x, &c1).unwrap();
        let n2 = ext1(s, &x, &p01.b2);
        if n2 == 0 {
            continue;
        }
        out.push(make_triple(&b0, &x, &c1, &nonzero_coords(n2, &mut r)).unwrap());
    }
    out
}

fn settings() -> Vec<Arc<FramedSetting>> {
    vec![
        FramedSetting::new(Quiver::jordan(), vec![1]).unwrap(),
        FramedSetting::new(Quiver::jordan(), vec![2]).unwrap(),
        FramedSetting::new(Quiver::a2(), vec![2, 1]).unwrap(),
        FramedSetting::new(Quiver::loops(2), vec![1]).unwrap(),
    ]
}

#[test]
fn triple_examples() {
    let x = LoopModule::new(0, vec![q(1), q(1)]);
    let s1 = FramedSetting::new(Quiver::jordan(), vec![1]).unwrap();
    let t = make_triple(&FramedModule::empty(s1), &x, &[q(1)], &[q(1), q(0)]).unwrap();
    let tt = triple_tangent(&t).unwrap();
    // Jordan, w = 1, v¹ = 1: 2 + 2 - 1.
    assert_eq!(tt.dim(), 3);
    assert_eq!(tt.expected_dim(), 3);

    let s2 = FramedSetting::new(Quiver::jordan(), vec![2]).unwrap();
    let t = make_triple(&FramedModule::empty(s2), &x, &[q(0), q(1)], &[q(1), q(1), q(1)]).unwrap();
    let tt = triple_tangent(&t).unwrap();
    assert_eq!(tt.dim(), tt.t12.t1() + 1);

    let a2 = FramedSetting::new(Quiver::a2(), vec![2, 0]).unwrap();
    let y = LoopModule::new(0, vec![]);
    let t = make_triple(&FramedModule::empty(a2.clone()), &y, &[q(1), q(0)], &[q(1)]).unwrap();
    let tt = triple_tangent(&t).unwrap();
    assert_eq!(tt.dim() as i64, a2.expected_dim(&[1, 0]).unwrap() - 1);
}

#[test]
fn triple_construction_errors() {
    let s = FramedSetting::new(Quiver::jordan(), vec![1]).unwrap();
    let x = LoopModule::new(0, vec![q(1), q(1)]);
    let e = FramedModule::empty(s.clone());
    assert!(matches!(make_triple(&e, &x, &[q(1)], &[q(0), q(0)]), Err(quiverlab_core::Error::SplitClass)));
    let y = LoopModule::new(0, vec![q(2), q(1)]);
    let p01 = hecke_up(&e, &x, &[q(1)]).unwrap();
    let n = ext1(&s, &y, &p01.b2);
    let p12 = hecke_up(&p01.b2, &y, &vec![q(1); n]).unwrap();
    assert!(TriplePoint::new(p01, p12).is_err());
}

#[test]
fn triple_dimensions_alpha_kernels_and_chains() {
    let mut count = 0;
    for s in settings() {
        for seed in 0..2 {
            for t in triples(&s, 50 + seed) {
                let tt = triple_tangent(&t).unwrap();
                assert_eq!(tt.dim() as i64, tt.expected_dim());
                let a = alpha_kernel_check(&t).unwrap();
                assert!(a.alpha_nonzero());
                assert!(a.first_kernel_ok());
                assert!(a.second_kernel_ok(), "{a:?}");
                // Under dt(a,b) = tr b - tr a the two values are ∓α_x.
                let neg: Vec<Rational> = a.alpha_x.iter().map(|v| -v).collect();
                assert_eq!(a.dt_values[0], neg);
                assert_eq!(a.dt_values[1], a.alpha_x);
                // Any multiple of α spans the same line.
                let scaled: Vec<Rational> = a.alpha.iter().map(|v| v * q(-7)).collect();
                assert!(a.first_kernel.contains(&scaled));
                let chain = chain_check(&t.modules(), &[t.x().clone(), LoopModule::new(t.x().k, t.x().x.iter().map(|v| v + q(1)).collect())]).unwrap();
                assert!(chain.ok(), "{chain:?}");
                count += 1;
            }
        }
    }
    assert!(count >= 10, "only {count} triples");
    assert_eq!(ALPHA_X_SIGN, -1);
}

#[test]
fn diagonal_quadruples_add_one_normal_direction() {
    for s in settings() {
        for t in triples(&s, 60) {
            let qp = QuadruplePoint::diagonal(&t);
            qp.validate().unwrap();
            assert!(qp.is_diagonal());
            let qt = quad_tangent(&qp).unwrap();
            assert_eq!(qt.normal.as_ref().unwrap().dim(), 1);
            assert_eq!(qt.dim(), triple_tangent(&t).unwrap().dim() + 1);
        }
    }
}

#[test]
fn jordan_off_diagonal_example() {
    let s = FramedSetting::new(Quiver::jordan(), vec![1]).unwrap();
    let e = FramedModule::empty(s);
    let x = LoopModule::new(0, vec![q(1), q(0)]);
    let y = LoopModule::new(0, vec![q(0), q(1)]);
    let p01 = hecke_up(&e, &x, &[q(1)]).unwrap();
    let p01p = hecke_up(&e, &y, &[q(1)]).unwrap();
    let qp = quad_from_two_quots(&p01, &p01p).unwrap();
    assert!(qp.trace_condition());
    // Two distinct points: B² is diagonalizable with eigenvalues from x and y.
    assert_eq!(qp.b2().v(), &[2]);
    assert_eq!(qp.b2().b()[0].trace(), q(1));
    assert_eq!(qp.b2().b()[1].trace(), q(1));
    let qt = quad_tangent(&qp).unwrap();
    assert!(!qt.diagonal);
    assert_eq!(qt.dim() as i64, qt.off_diagonal_expected());
    assert_eq!(qt.dim(), 4);
    assert_eq!(qt.injectivity_kernel, Some(0));
    // The same quotient twice is the diagonal and is refused here.
    assert!(quad_from_two_quots(&p01, &p01).is_err());
}

#[test]
fn off_diagonal_quadruples_and_round_trips() {
    let mut r = rng(70);
    let mut count = 0;
    for s in settings() {
        let q_ = s.base().clone();
        let walk = random_walk(&s, 3, &mut r).unwrap();
        for b0 in walk.points() {
            for k in 0..q_.vertex_count() {
                let x = quiverlab_core::random::random_loop(&q_, k, &mut r);
                let y = if q_.g(k) > 0 && count % 2 == 0 { x.clone() } else { quiverlab_core::random::random_loop(&q_, k, &mut r) };
                let (nx, ny) = (ext1(&s, &x, b0), ext1(&s, &y, b0));
                if nx == 0 || ny == 0 || (x == y && nx < 2) {
                    continue;
                }
                let p01 = hecke_up(b0, &x, &nonzero_coords(nx, &mut r)).unwrap();
                let mut c = nonzero_coords(ny, &mut r);
                let p01p = loop {
                    let p = hecke_up(b0, &y, &c).unwrap();
                    if !p.equivalent(&p01).unwrap() {
                        break p;
                    }
                    c = nonzero_coords(ny, &mut r);
                };
                let qp = quad_from_two_quots(&p01, &p01p).unwrap();
                assert!(qp.trace_condition());
                let qt = quad_tangent(&qp).unwrap();
                assert!(!qt.diagonal);
                assert_eq!(qt.dim() as i64, qt.off_diagonal_expected());
                assert_eq!(qt.injectivity_kernel, Some(0));
                let back = quad_from_two_subs(&qp.p12, &qp.p1p2).unwrap();
                assert!(equivalent(back.b0(), b0).unwrap());
                assert!(back.p01.equivalent(&p01).unwrap());
                let again = quad_from_two_quots(&back.p01, &back.p01p).unwrap();
                assert!(equivalent(again.b2(), qp.b2()).unwrap());
                assert!(quad_from_two_subs(&qp.p12, &qp.p12).is_err());
                count += 1;
            }
        }
    }
    assert!(count >= 5, "only {count} quadruples");
}
