//! Identities of the local derived blow-up model.

use quiverlab_ktheory::identities::{
    blowup_context, koszul_class, probe_virtual_blowup, verify_canonical_pushforward, verify_discrepancy, verify_vanishing,
    verify_virtual_blowup, CheckKind, VirtualBlowup,
};
use quiverlab_ktheory::{push_poly, Error};

#[test]
fn vanishing_holds_in_range_and_fails_outside() {
    let mut failed_probes = 0;
    for v in 2..=4usize {
        for w in 1..v {
            let lo = -((v - w) as i32);
            for l in (lo - 1)..=1 {
                let r = verify_vanishing(v, w, l).unwrap();
                let inside = lo < l && l <= 0;
                assert_eq!(r.kind == CheckKind::Theorem, inside);
                if inside {
                    assert!(r.holds, "{r:?}");
                    assert_eq!(r.truncation, Some(v - 1));
                } else if !r.holds {
                    failed_probes += 1;
                }
            }
        }
    }
    assert!(failed_probes > 0);
    assert!(!verify_vanishing(2, 1, -1).unwrap().holds);
}

#[test]
fn discrepancy_and_canonical_pushforward() {
    for v in 1..=4usize {
        for w in 1..=v {
            let d = verify_discrepancy(v, w).unwrap();
            assert!(d.holds, "{d:?}");
            if w < v {
                let g = verify_canonical_pushforward(v, w).unwrap();
                assert!(g.holds, "{g:?}");
            } else {
                assert!(matches!(verify_canonical_pushforward(v, w), Err(Error::Hypothesis(_))));
            }
        }
    }
}

#[test]
fn canonical_pushforward_is_vanishing_at_the_discrepancy_twist() {
    // K_Bl = K_Y u^{w-v+1}, so pushing it is the vanishing identity at l = w - v + 1.
    let (v, w) = (4, 2);
    let ctx = blowup_context(v, w).unwrap();
    let l = w as i32 - v as i32 + 1;
    let (bl, _) = quiverlab_ktheory::identities::blowup_structure_class(&ctx).unwrap();
    let (lw, _) = koszul_class(&ctx, &ctx.bundle("W").unwrap()).unwrap();
    assert_eq!(push_poly(&ctx, &(&ctx.u(l).unwrap() * &bl)).unwrap(), lw);
}

#[test]
fn virtual_blowup_in_the_theorem_range() {
    for (v, n) in [(1, 1), (1, 2), (2, 2), (2, 3), (3, 3), (1, 3), (3, 4)] {
        let reports = verify_virtual_blowup(v, n).unwrap();
        assert!(reports.iter().all(|r| r.holds && r.kind == CheckKind::Theorem), "{reports:#?}");
        assert_eq!(reports.iter().filter(|r| r.identity == "filtration-step").count(), usize::from(v == n));
    }
}

#[test]
fn virtual_blowup_with_one_less_dimension_is_the_vanishing_identity() {
    // r = -1: the sum is empty and the push equals [Y] = λ_{-1}(V).
    for v in 1..=3 {
        let vb = VirtualBlowup::new(v, v + 1).unwrap();
        assert_eq!(vb.blowup_push().unwrap(), vb.y);
        assert_eq!(vb.formula().unwrap(), vb.y);
    }
}

#[test]
fn positive_r_is_outside_the_hypothesis() {
    assert!(matches!(verify_virtual_blowup(2, 1), Err(Error::Hypothesis(_))));
    for (v, n) in [(2, 1), (3, 1), (3, 2)] {
        let reports = probe_virtual_blowup(v, n).unwrap();
        assert!(reports.iter().all(|r| r.kind == CheckKind::Conjectural));
        assert!(reports.iter().all(|r| r.acceptable()));
    }
}

#[test]
fn literal_dual_convention_breaks_the_rank_one_case() {
    // With g_* = λ_{-1}(N^∨) instead of λ_{-1}(N) the formula already fails for v = n = 1.
    let vb = VirtualBlowup::new(1, 1).unwrap();
    let ctx = &vb.ctx;
    let (ln_dual, _) = koszul_class(ctx, &ctx.bundle("N").unwrap().dual()).unwrap();
    let (ln, _) = koszul_class(ctx, &ctx.bundle("N").unwrap()).unwrap();
    let term = vb.term(0).unwrap();
    let bare = {
        let det_ratio = &ctx.det("V").unwrap() * &ctx.det_inv("N").unwrap();
        -&det_ratio
    };
    assert_eq!(term, &bare * &ln);
    let literal = &vb.y + &(&bare * &ln_dual);
    assert_ne!(literal, vb.blowup_push().unwrap());
    assert_eq!(vb.formula().unwrap(), vb.blowup_push().unwrap());
}

#[test]
fn positive_r_probes_hold_in_the_sampled_range() {
    for (v, n) in [(2, 1), (3, 1), (3, 2), (4, 2), (4, 3)] {
        for r in probe_virtual_blowup(v, n).unwrap() {
            assert!(r.holds, "{r:?}");
        }
    }
}
