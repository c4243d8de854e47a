//! Framed modules: moment map, stability, the framed deformation complex
//! and the universal complex, on points produced by seeded Hecke walks.

mod common;

use std::sync::Arc;

use common::rng;
use num::Zero;
use quiverlab_core::framed::{
    find_inclusion, framed_ext, gauge_equivalence, moment_residual, universal_complex, FramedModule, FramedSetting,
};
use quiverlab_core::hecke::random_walk;
use quiverlab_core::linalg::dot;
use quiverlab_core::piq::{ext_complex, LoopModule};
use quiverlab_core::random::{random_gauge, random_loop};
use quiverlab_core::{q, Error, Matrix, Quiver};

fn settings() -> Vec<Arc<FramedSetting>> {
    vec![
        FramedSetting::new(Quiver::jordan(), vec![1]).unwrap(),
        FramedSetting::new(Quiver::jordan(), vec![2]).unwrap(),
        FramedSetting::new(Quiver::a2(), vec![1, 1]).unwrap(),
        FramedSetting::new(Quiver::a2(), vec![2, 0]).unwrap(),
        FramedSetting::new(Quiver::loops(2), vec![1]).unwrap(),
    ]
}

fn walk_points(s: &Arc<FramedSetting>, seed: u64, steps: usize) -> Vec<FramedModule> {
    let w = random_walk(s, steps, &mut rng(seed)).unwrap();
    w.points().into_iter().cloned().collect()
}

#[test]
fn moment_residual_and_admission() {
    let s = FramedSetting::new(Quiver::jordan(), vec![1]).unwrap();
    let b = vec![Matrix::from_i64(1, 1, &[2]), Matrix::from_i64(1, 1, &[7])];
    let i = vec![Matrix::from_i64(1, 1, &[3])];
    let j = vec![Matrix::from_i64(1, 1, &[5])];
    let r = moment_residual(&s, &[1], &b, &i, &j).unwrap();
    assert_eq!(r[0], Matrix::from_i64(1, 1, &[15]));
    assert!(matches!(
        FramedModule::new(s.clone(), vec![1], b.clone(), i, j.clone()),
        Err(Error::MomentNonzero { vertex: 0 })
    ));
    assert!(FramedModule::new(s.clone(), vec![1], b.clone(), vec![Matrix::zeros(1, 1)], j).is_ok());
    assert!(matches!(
        moment_residual(&s, &[1], &b, &[Matrix::zeros(2, 1)], &[Matrix::zeros(1, 1)]),
        Err(Error::Shape(_))
    ));
}

#[test]
fn crawley_boevey_round_trip_and_relation() {
    for s in settings() {
        for b in walk_points(&s, 1, 4) {
            let cb = b.to_cb();
            assert!(cb.is_valid());
            assert_eq!(FramedModule::from_cb(s.clone(), &cb).unwrap(), b);
        }
    }
}

#[test]
fn walk_points_are_stable_and_gauge_orbits_too() {
    let mut r = rng(5);
    for s in settings() {
        for b in walk_points(&s, 2, 4) {
            assert!(b.is_stable());
            let g = random_gauge(b.v(), &mut r);
            let c = b.conjugate(&g).unwrap();
            assert!(c.is_stable());
            let found = gauge_equivalence(&b, &c).unwrap().expect("conjugate is equivalent");
            assert_eq!(found, g);
        }
    }
}

#[test]
fn tangent_dimension_is_twice_vw_minus_euler_form() {
    for s in settings() {
        for b in walk_points(&s, 3, 4) {
            let d = framed_ext(&b, &b).unwrap();
            assert_eq!(d.t_dim() as i64, s.expected_dim(b.v()).unwrap());
            // T agrees with Ext¹ over the Crawley-Boevey quiver.
            assert_eq!(d.t_dim(), d.cb.dims()[1]);
            assert_eq!(d.ext_dims_via_t(), d.cb.dims());
        }
    }
}

#[test]
fn jordan_single_framing_gives_twice_v() {
    let s = FramedSetting::new(Quiver::jordan(), vec![1]).unwrap();
    for seed in 0..3 {
        for b in walk_points(&s, 10 + seed, 4) {
            assert_eq!(framed_ext(&b, &b).unwrap().t_dim(), 2 * b.v()[0]);
        }
    }
}

#[test]
fn stability_forces_injective_sigma_and_surjective_tau() {
    for s in settings() {
        let pts = walk_points(&s, 4, 3);
        let more = walk_points(&s, 5, 3);
        for b1 in &pts {
            for b2 in &more {
                let d = framed_ext(b1, b2).unwrap();
                assert!(d.sigma_injective());
                assert!(d.tau_surjective());
                // s² ∘ s¹ = 0, and the framed Euler bookkeeping.
                assert!(dot(&d.s2, &d.s1).is_zero());
                let rank = d.sigma.rows() as i64 - 2 * d.sigma.cols() as i64;
                let v1w = quiverlab_core::Quiver::dot(b1.v(), s.w()) + Quiver::dot(b2.v(), s.w());
                assert_eq!(rank, -s.base().euler_form(b1.v(), b2.v()).unwrap() + v1w);
                assert_eq!(d.t_dim() as i64, rank);
            }
        }
    }
}

#[test]
fn unstable_data_is_detected() {
    let s = FramedSetting::new(Quiver::jordan(), vec![1]).unwrap();
    let b = FramedModule::new(
        s,
        vec![2],
        vec![Matrix::from_i64(2, 2, &[1, 0, 0, 2]), Matrix::zeros(2, 2)],
        vec![Matrix::zeros(2, 1)],
        vec![Matrix::from_i64(1, 2, &[1, 0])],
    )
    .unwrap();
    // e₂ is an eigenvector of B killed by j.
    assert!(!b.is_stable());
    let d = b.destabilizing_subspace();
    assert_eq!(d[0].vectors(), &[vec![q(0), q(1)]]);
    assert!(matches!(
        universal_complex(&LoopModule::new(0, vec![q(0), q(0)]), &b),
        Err(Error::Unstable)
    ));
}

#[test]
fn inclusions_from_the_empty_module() {
    for s in settings() {
        let e = FramedModule::empty(s.clone());
        for b in walk_points(&s, 6, 3) {
            let d = framed_ext(&e, &b).unwrap();
            assert_eq!(d.cb.dims()[0], 1);
            let z = find_inclusion(&e, &b).unwrap().unwrap();
            assert!(z.iter().all(|m| m.cols() == 0));
            if b.v().iter().any(|&v| v > 0) {
                assert!(find_inclusion(&b, &e).unwrap().is_none());
            }
        }
    }
}

#[test]
fn universal_complex_computes_ext_against_loop_modules() {
    let mut r = rng(7);
    for s in settings() {
        let q = s.base().clone();
        for b in walk_points(&s, 8, 3) {
            for k in 0..q.vertex_count() {
                let x = random_loop(&q, k, &mut r);
                let u = universal_complex(&x, &b).unwrap();
                let ext = ext_complex(&s.loop_cb(&x).unwrap(), &b.to_cb()).unwrap();
                assert_eq!(u.kernel_dim(), ext.dims()[1]);
                assert_eq!(u.coker_dim, ext.dims()[2]);
                for v in u.kernel.vectors() {
                    assert!(ext.ext(1).coords(&u.lift(v)).is_some());
                }
                if b.v().iter().all(|&d| d == 0) {
                    assert!(u.u.is_zero());
                    assert_eq!(u.kernel_dim(), s.w()[k]);
                }
            }
        }
    }
}
