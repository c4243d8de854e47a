//! The projective bundle `P(V) → Y` of rank `v`, with `u = O(1)` subject to
//! `∏(u − α_i) = 0`. Every class has a unique representative of `u`-degree in
//! `[0, v)` and the pushforward sends `u^l ↦ h_l(α)` on that window.

use std::collections::BTreeMap;

use crate::context::{KClass, RootContext};
use crate::error::{Error, Result};
use crate::laurent::Laurent;

/// The relation polynomial `∏(u − α_i)`.
pub fn relation(ctx: &RootContext) -> Result<Laurent> {
    let (g, _) = ctx.hyperplane()?;
    let u = ctx.u(1)?;
    let mut acc = ctx.one();
    for i in 0..g.rank {
        acc = &acc * &(&u - &ctx.root(&g.name, i, 1)?);
    }
    Ok(acc)
}

/// Reduce a polynomial to its representative with `u`-exponents in `[0, v)`.
pub fn canonicalize(ctx: &RootContext, p: &Laurent) -> Result<Laurent> {
    let (g, ui) = ctx.hyperplane()?;
    let v = g.rank as i32;
    let name = g.name.clone();
    let e: Vec<Laurent> = (0..=g.rank).map(|k| ctx.e(&name, k)).collect::<Result<_>>()?;
    let det_inv = ctx.det_inv(&name)?;
    // u^v = Σ_{k≥1} (−1)^{k+1} e_k u^{v−k}
    let top: Vec<(i32, Laurent)> = (1..=g.rank)
        .map(|k| (v - k as i32, if k % 2 == 1 { e[k].clone() } else { -&e[k] }))
        .collect();
    // u^{-1} = (−1)^{v+1} e_v^{-1} Σ_{k<v} (−1)^k e_k u^{v−1−k}
    let sign_v = if g.rank % 2 == 0 { -1 } else { 1 };
    let bottom: Vec<(i32, Laurent)> = (0..g.rank)
        .map(|k| {
            let s = if k % 2 == 0 { sign_v } else { -sign_v };
            (v - 1 - k as i32, (&e[k] * &det_inv).scale(&s.into()))
        })
        .collect();

    let mut by_deg: BTreeMap<i32, Laurent> = p.collect_in(ui);
    let add = |m: &mut BTreeMap<i32, Laurent>, d: i32, c: Laurent| {
        let slot = m.entry(d).or_insert_with(|| ctx.zero());
        *slot = &*slot + &c;
    };
    // Highest degrees first: every substitution strictly lowers the degree.
    while let Some((&d, _)) = by_deg.iter().next_back().filter(|(&d, _)| d >= v) {
        let c = by_deg.remove(&d).expect("key was just observed");
        for (shift, coeff) in &top {
            add(&mut by_deg, d - v + shift, &c * coeff);
        }
    }
    // Then the lowest: u^d = u^{d+1} · u^{-1} lands in [d + 1, d + v].
    while let Some((&d, _)) = by_deg.iter().next().filter(|(&d, _)| d < 0) {
        let c = by_deg.remove(&d).expect("key was just observed");
        for (shift, coeff) in &bottom {
            add(&mut by_deg, d + 1 + shift, &c * coeff);
        }
    }
    let mut out = ctx.zero();
    for (d, c) in by_deg {
        out = &out + &(&c * &ctx.u(d)?);
    }
    Ok(out)
}

/// Pushforward `π_*` of a polynomial: canonicalize, then `u^l ↦ h_l(α)`.
pub fn push_poly(ctx: &RootContext, p: &Laurent) -> Result<Laurent> {
    let (g, ui) = ctx.hyperplane()?;
    let name = g.name.clone();
    let c = canonicalize(ctx, p)?;
    let mut out = ctx.zero();
    for (d, coeff) in c.collect_in(ui) {
        if d < 0 || d >= g.rank as i32 {
            return Err(Error::NotReduced);
        }
        out = &out + &(&coeff * &ctx.h(&name, d as usize, false)?);
    }
    Ok(out)
}

/// Pushforward of a class along `P(V) → Y`; the result does not involve `u`.
pub fn pb_pushforward(class: &KClass) -> Result<KClass> {
    let ctx = class.context();
    let out = push_poly(ctx, class.poly())?;
    ctx.class(out)
}

/// Pushforward of a class that must belong to `ctx`.
pub fn pushforward_in(ctx: &std::sync::Arc<RootContext>, class: &KClass) -> Result<KClass> {
    if !std::sync::Arc::ptr_eq(ctx, class.context()) {
        return Err(Error::ContextMismatch);
    }
    pb_pushforward(class)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn ctx(v: usize) -> Arc<RootContext> {
        RootContext::builder().bundle("V", "a", v).projectivize("V").build().unwrap()
    }

    #[test]
    fn examples_rank_two() {
        let c = ctx(2);
        let push = |p: Laurent| push_poly(&c, &p).unwrap();
        assert_eq!(push(c.one()), c.one());
        assert_eq!(push(c.u(1).unwrap()), c.e("V", 1).unwrap());
        assert_eq!(push(c.u(-1).unwrap()), c.zero());
        assert_eq!(push(c.u(-2).unwrap()), -&c.det_inv("V").unwrap());
        assert!(canonicalize(&c, &relation(&c).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn canonical_window() {
        let c = ctx(3);
        let (_, ui) = c.hyperplane().unwrap();
        for l in -7..9 {
            let r = canonicalize(&c, &c.u(l).unwrap()).unwrap();
            assert!(r.collect_in(ui).keys().all(|&d| (0..3).contains(&d)), "l = {l}");
            if (0..3).contains(&l) {
                assert_eq!(r, c.u(l).unwrap());
            }
        }
    }

    #[test]
    fn no_hyperplane() {
        let c = RootContext::builder().bundle("V", "a", 2).build().unwrap();
        assert_eq!(push_poly(&c, &c.one()).unwrap_err(), Error::NoHyperplane);
        let other = ctx(2);
        let cls = other.class(other.one()).unwrap();
        assert_eq!(pushforward_in(&ctx(2), &cls).unwrap_err(), Error::ContextMismatch);
    }
}
