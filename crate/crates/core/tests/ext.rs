//! The Ext complex of Π-modules: matrices against a Kronecker-product
//! oracle, Euler characteristics against the Euler form, and the algebraic
//! properties of the composition product.

mod common;

use std::sync::Arc;

use common::{random_pair, rng, sigma_oracle, tau_oracle, test_quivers};
use quiverlab_core::graded::total_trace;
use quiverlab_core::piq::{
    build_extension, duality_holds, ext_complex, extension_class, identity_rep, les_check, omega_pairing, theta,
    LoopModule, Rep,
};
use quiverlab_core::random::{random_coords, random_gauge, random_module};
use quiverlab_core::{q, Matrix, PiQModule, Quiver};

#[test]
fn complex_matrices_match_kronecker_oracle() {
    let mut r = rng(11);
    for quiver in test_quivers() {
        for _ in 0..6 {
            let (g, h) = random_pair(&quiver, 4, &mut r);
            let d = ext_complex(&g, &h).unwrap();
            assert_eq!(d.sigma(), &sigma_oracle(&g, &h));
            assert_eq!(d.tau(), &tau_oracle(&g, &h));
            assert!(d.tau().mul(d.sigma()).is_zero());
        }
    }
}

#[test]
fn euler_characteristic_is_the_euler_form() {
    let mut r = rng(12);
    for quiver in test_quivers() {
        for _ in 0..8 {
            let (g, h) = random_pair(&quiver, 5, &mut r);
            let d = ext_complex(&g, &h).unwrap();
            assert_eq!(d.euler_characteristic(), quiver.euler_form(g.dims(), h.dims()).unwrap());
        }
    }
}

#[test]
fn loop_module_examples() {
    let jordan = Arc::new(Quiver::jordan());
    let x = LoopModule::new(0, vec![q(1), q(2)]).module(jordan.clone()).unwrap();
    let y = LoopModule::new(0, vec![q(2), q(2)]).module(jordan.clone()).unwrap();
    assert_eq!(ext_complex(&x, &x).unwrap().dims(), [1, 2, 1]);
    assert_eq!(ext_complex(&x, &y).unwrap().dims(), [0, 0, 0]);
    // Two loops: Euler characteristic 2 - 2g = -2 on a single loop module.
    let two = Arc::new(Quiver::loops(2));
    let z = LoopModule::new(0, vec![q(0), q(1), q(0), q(0)]).module(two).unwrap();
    assert_eq!(ext_complex(&z, &z).unwrap().dims(), [1, 4, 1]);
}

#[test]
fn relation_violations_are_rejected() {
    let jordan = Arc::new(Quiver::jordan());
    let bad = PiQModule::new(
        jordan.clone(),
        vec![2],
        vec![Matrix::from_i64(2, 2, &[0, 1, 0, 0]), Matrix::from_i64(2, 2, &[0, 0, 1, 0])],
    )
    .unwrap();
    let good = PiQModule::zero_action(jordan, vec![1]);
    assert!(ext_complex(&bad, &good).is_err());
    assert!(ext_complex(&good, &bad).is_err());
}

#[test]
fn duality_and_pairings() {
    let mut r = rng(13);
    for quiver in test_quivers() {
        for _ in 0..5 {
            let (g, h) = random_pair(&quiver, 4, &mut r);
            let gh = ext_complex(&g, &h).unwrap();
            let hg = ext_complex(&h, &g).unwrap();
            assert!(duality_holds(&gh, &hg));
            // Ext^l(G,H) pairs perfectly with Ext^{2-l}(H,G).
            for l in 0..3 {
                let p = omega_pairing(&gh, &hg, l).unwrap();
                assert_eq!(p.rows(), p.cols());
                assert_eq!(p.rank(), p.rows());
            }
            // Graded antisymmetry in degree one.
            let a = omega_pairing(&gh, &hg, 1).unwrap();
            let b = omega_pairing(&hg, &gh, 1).unwrap();
            assert_eq!(a, b.transpose().neg());
        }
    }
}

#[test]
fn omega_on_self_ext_is_symplectic() {
    let mut r = rng(14);
    for quiver in test_quivers() {
        for _ in 0..5 {
            let (g, _) = random_pair(&quiver, 4, &mut r);
            let gg = ext_complex(&g, &g).unwrap();
            let o = omega_pairing(&gg, &gg, 1).unwrap();
            assert_eq!(o, o.transpose().neg());
            assert_eq!(o.rank(), o.rows());
        }
    }
}

#[test]
fn theta_is_well_defined_on_classes() {
    let mut r = rng(15);
    for quiver in test_quivers() {
        for _ in 0..4 {
            let (g, h) = random_pair(&quiver, 4, &mut r);
            let gh = ext_complex(&g, &h).unwrap();
            let hg = ext_complex(&h, &g).unwrap();
            let gg = ext_complex(&g, &g).unwrap();
            if gh.dims()[1] == 0 || hg.dims()[1] == 0 {
                continue;
            }
            let a = gh.rep(1, &random_coords(gh.dims()[1], &mut r));
            let b = hg.rep(1, &random_coords(hg.dims()[1], &mut r));
            // Shift a by a coboundary σ(ξ).
            let xi: Vec<_> = (0..gh.vertex_layout().total()).map(|i| q((i % 3) as i64 - 1)).collect();
            let shift = gh.edge_layout().unflatten(&gh.sigma().mul_vec(&xi));
            let a2 = Rep::Ext1(a.blocks().iter().zip(&shift).map(|(x, y)| x.add(y)).collect());
            let c1 = theta(&quiver, g.dims(), g.dims(), &a, &b).unwrap();
            let c2 = theta(&quiver, g.dims(), g.dims(), &a2, &b).unwrap();
            let diff = Rep::Ext2(c1.blocks().iter().zip(c2.blocks()).map(|(x, y)| x.sub(y)).collect());
            assert!(gg.is_zero_class(&diff));
            assert_eq!(total_trace(c1.blocks()), total_trace(c2.blocks()));
        }
    }
}

#[test]
fn identity_acts_trivially() {
    let mut r = rng(16);
    let quiver = Arc::new(Quiver::jordan());
    let (g, h) = random_pair(&quiver, 4, &mut r);
    let gh = ext_complex(&g, &h).unwrap();
    for a in gh.basis_reps(1) {
        let left = theta(&quiver, g.dims(), h.dims(), &identity_rep(g.dims()), &a).unwrap();
        let right = theta(&quiver, g.dims(), h.dims(), &a, &identity_rep(h.dims())).unwrap();
        assert_eq!(left, a);
        assert_eq!(right, a);
    }
    assert!(theta(&quiver, g.dims(), g.dims(), &a_ext2(&gh), &a_ext2(&gh)).is_err());
}

fn a_ext2(d: &quiverlab_core::ExtData) -> Rep {
    Rep::Ext2(d.vertex_layout().zero_blocks())
}

#[test]
fn ext_dimensions_are_gauge_invariant() {
    let mut r = rng(17);
    for quiver in test_quivers() {
        let (g, h) = random_pair(&quiver, 4, &mut r);
        let g2 = g.conjugate(&random_gauge(g.dims(), &mut r)).unwrap();
        let h2 = h.conjugate(&random_gauge(h.dims(), &mut r)).unwrap();
        assert_eq!(ext_complex(&g, &h).unwrap().dims(), ext_complex(&g2, &h2).unwrap().dims());
    }
}

#[test]
fn ext_dimensions_do_not_depend_on_the_sign_choice() {
    let mut r = rng(18);
    let base = Quiver::from_edges(2, &[(0, 0), (0, 1), (1, 1)]);
    let twisted = base.clone().with_signs(vec![-1, 1, -1]).unwrap();
    let (q1, q2) = (Arc::new(base), Arc::new(twisted));
    for _ in 0..4 {
        let (g, h) = random_pair(&q1, 4, &mut r);
        // Rescale original edges by ε₂/ε₁ so the relation is preserved.
        let move_to = |m: &PiQModule| {
            let b: Vec<Matrix> = m
                .action()
                .iter()
                .enumerate()
                .map(|(e, x)| {
                    let s = q1.eps(e) * q2.eps(e);
                    if e % 2 == 0 && s < 0 {
                        x.neg()
                    } else {
                        x.clone()
                    }
                })
                .collect();
            PiQModule::new(q2.clone(), m.dims().to_vec(), b).unwrap()
        };
        let (g2, h2) = (move_to(&g), move_to(&h));
        assert!(g2.is_valid() && h2.is_valid());
        assert_eq!(ext_complex(&g, &h).unwrap().dims(), ext_complex(&g2, &h2).unwrap().dims());
    }
}

#[test]
fn extensions_round_trip_and_les_is_exact() {
    let mut r = rng(19);
    for quiver in test_quivers() {
        let mut tested = 0;
        for _ in 0..20 {
            let (g, k) = random_pair(&quiver, 3, &mut r);
            let kg = ext_complex(&k, &g).unwrap();
            if kg.dims()[1] == 0 {
                continue;
            }
            let c = kg.rep(1, &random_coords(kg.dims()[1], &mut r));
            let ses = build_extension(&g, &k, c.blocks()).unwrap();
            assert!(ses.h.is_valid());
            assert_eq!(extension_class(&ses).unwrap(), c.blocks().to_vec());
            let l = random_module(&quiver, &quiverlab_core::random::random_dims(quiver.vertex_count(), 2, &mut r), &mut r);
            let report = les_check(&ses, &l).unwrap();
            assert!(report.exact(), "{report:?}");
            tested += 1;
            if tested == 3 {
                break;
            }
        }
        assert!(tested > 0);
    }
}

#[test]
fn non_closed_cocycles_are_rejected() {
    let jordan = Arc::new(Quiver::jordan());
    let x = LoopModule::new(0, vec![q(0), q(0)]).module(jordan.clone()).unwrap();
    let n = PiQModule::new(jordan, vec![2], vec![Matrix::from_i64(2, 2, &[0, 1, 0, 0]), Matrix::zeros(2, 2)]).unwrap();
    // τ(x, n)(J) = B₀ J₁ - B₁ J₀ = (1, 0)ᵀ ≠ 0.
    let bad = vec![Matrix::from_i64(2, 1, &[0, 0]), Matrix::from_i64(2, 1, &[0, 1])];
    assert!(matches!(build_extension(&n, &x, &bad), Err(quiverlab_core::Error::NotClosed)));
    let good = vec![Matrix::from_i64(2, 1, &[0, 1]), Matrix::from_i64(2, 1, &[1, 0])];
    assert!(build_extension(&n, &x, &good).unwrap().h.is_valid());
}
