//! Identity checks in the split local model of the derived blow-up.
//!
//! Two contexts are used. `blowup_context(v, w)` has bundles `V` (roots
//! `a`), `W` (roots `b`), a symbol `kZ` for the canonical class of the base
//! and the hyperplane class `u` on `P(V)`; the blow-up is the derived zero
//! locus with structure class `λ_{-1}(V̄)·λ_{-1}(W(-1))`. The context
//! `virtual_context(v, n)` has `V` (roots `a`) and `N` (roots `c`) with `u`
//! on `P(N)`; the base `Y` has class `λ_{-1}(V)` and `g_*` is multiplication
//! by `λ_{-1}(N)`.

use std::sync::Arc;

use num::BigInt;

use crate::context::{RootContext, Virtual};
use crate::error::{Error, Result};
use crate::laurent::Laurent;
use crate::projective::push_poly;

/// How a check relates to the theorem it exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckKind {
    /// Parameters inside the hypotheses: the identity must hold.
    Theorem,
    /// Parameters deliberately outside the hypotheses; failure is expected
    /// and informative.
    Probe,
    /// A regime the theorem does not cover; the outcome is recorded only.
    Conjectural,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub identity: &'static str,
    pub params: Vec<(&'static str, i64)>,
    pub kind: CheckKind,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
    /// Degree at which λ-series of virtual bundles were truncated, if any were used.
    pub truncation: Option<usize>,
}

impl IdentityReport {
    fn new(
        identity: &'static str,
        params: Vec<(&'static str, i64)>,
        kind: CheckKind,
        ctx: &RootContext,
        lhs: &Laurent,
        rhs: &Laurent,
        truncation: Option<usize>,
    ) -> Self {
        IdentityReport {
            identity,
            params,
            kind,
            lhs: ctx.display(lhs),
            rhs: ctx.display(rhs),
            holds: lhs == rhs,
            truncation,
        }
    }

    /// True when the outcome is the one the theorem predicts: holds inside
    /// the hypotheses, anything for probes and conjectural regimes.
    pub fn acceptable(&self) -> bool {
        self.kind != CheckKind::Theorem || self.holds
    }
}

pub fn blowup_context(v: usize, w: usize) -> Result<Arc<RootContext>> {
    RootContext::builder().bundle("V", "a", v).bundle("W", "b", w).symbol("kZ").projectivize("V").build()
}

pub fn virtual_context(v: usize, n: usize) -> Result<Arc<RootContext>> {
    RootContext::builder().bundle("V", "a", v).bundle("N", "c", n).projectivize("N").build()
}

fn rank_at_least_one(pairs: &[(&str, usize)]) -> Result<()> {
    match pairs.iter().find(|(_, r)| *r == 0) {
        Some((name, _)) => Err(Error::Context(format!("rank of `{name}` must be at least 1"))),
        None => Ok(()),
    }
}

/// `Ē = π*E − O(1)` on the projectivization of `E`.
pub fn tautological_quotient(ctx: &RootContext) -> Result<Virtual> {
    let (g, _) = ctx.hyperplane()?;
    Ok(ctx.bundle(&g.name)?.sub(&ctx.line(ctx.u(1)?)?))
}

/// `λ^k` of a bundle expression.
pub fn lambda_class(ctx: &RootContext, e: &Virtual, k: usize) -> Laurent {
    e.lambda(ctx.nvars(), k)
}

/// `λ_{-1}(E)`, the class of the derived zero locus of a section of `E^∨`,
/// together with the truncation degree used.
pub fn koszul_class(ctx: &RootContext, e: &Virtual) -> Result<(Laurent, usize)> {
    e.lambda_minus1(ctx.nvars())
}

/// The value of `π_* O(l)` on `P(V)` predicted by the Serre table:
/// `h_l(α)` for `l ≥ 0`, zero for `-v < l < 0`, and
/// `(-1)^{v-1} det(V)^{-1} h_{-l-v}(α^{-1})` for `l ≤ -v`.
pub fn serre_table(ctx: &RootContext, l: i32) -> Result<Laurent> {
    let (g, _) = ctx.hyperplane()?;
    let v = g.rank as i32;
    let name = g.name.clone();
    if l >= 0 {
        ctx.h(&name, l as usize, false)
    } else if l > -v {
        Ok(ctx.zero())
    } else {
        let sign = if v % 2 == 1 { 1 } else { -1 };
        Ok((&ctx.det_inv(&name)? * &ctx.h(&name, (-l - v) as usize, true)?).scale(&BigInt::from(sign)))
    }
}

/// `π_* O(l)` against the Serre table on `P(V)` with `rank V = v`.
pub fn verify_serre(v: usize, l: i32) -> Result<IdentityReport> {
    rank_at_least_one(&[("V", v)])?;
    let ctx = RootContext::builder().bundle("V", "a", v).projectivize("V").build()?;
    let lhs = push_poly(&ctx, &ctx.u(l)?)?;
    let rhs = serre_table(&ctx, l)?;
    Ok(IdentityReport::new("serre-table", vec![("v", v as i64), ("l", l as i64)], CheckKind::Theorem, &ctx, &lhs, &rhs, None))
}

/// `π_*(λ^k(V̄)·u^{-l}) = (-1)^k δ_{kl}` for `0 ≤ k, l < v`.
pub fn verify_dual_basis(v: usize, k: usize, l: usize) -> Result<IdentityReport> {
    rank_at_least_one(&[("V", v)])?;
    if k >= v || l >= v {
        return Err(Error::Hypothesis(format!("need 0 <= k, l < v, got k = {k}, l = {l}, v = {v}")));
    }
    let ctx = RootContext::builder().bundle("V", "a", v).projectivize("V").build()?;
    let vbar = tautological_quotient(&ctx)?;
    let lhs = push_poly(&ctx, &(&lambda_class(&ctx, &vbar, k) * &ctx.u(-(l as i32))?))?;
    let rhs = if k == l { ctx.constant(if k % 2 == 0 { 1 } else { -1 }) } else { ctx.zero() };
    Ok(IdentityReport::new(
        "dual-basis",
        vec![("v", v as i64), ("k", k as i64), ("l", l as i64)],
        CheckKind::Theorem,
        &ctx,
        &lhs,
        &rhs,
        Some(k),
    ))
}

/// Structure class of the blow-up, `λ_{-1}(V̄)·λ_{-1}(W(-1))`, and the
/// truncation degree used for `λ_{-1}(V̄)`.
pub fn blowup_structure_class(ctx: &RootContext) -> Result<(Laurent, usize)> {
    let vbar = tautological_quotient(ctx)?;
    let (kv, trunc) = koszul_class(ctx, &vbar)?;
    let w_twist = ctx.bundle("W")?.twist(&ctx.u(-1)?);
    let (kw, _) = koszul_class(ctx, &w_twist)?;
    Ok((&kv * &kw, trunc))
}

/// `pr_*(O_Bl(l)) = O_Y`, i.e. `π_*(u^l λ_{-1}(V̄) λ_{-1}(W(-1))) = λ_{-1}(W)`.
/// Inside `-(v-w) < l ≤ 0` this is a theorem; other `l` are probes.
pub fn verify_vanishing(v: usize, w: usize, l: i32) -> Result<IdentityReport> {
    rank_at_least_one(&[("V", v), ("W", w)])?;
    if w >= v {
        return Err(Error::Hypothesis(format!("need w < v, got v = {v}, w = {w}")));
    }
    let ctx = blowup_context(v, w)?;
    let (bl, trunc) = blowup_structure_class(&ctx)?;
    let lhs = push_poly(&ctx, &(&ctx.u(l)? * &bl))?;
    let (rhs, _) = koszul_class(&ctx, &ctx.bundle("W")?)?;
    let inside = -((v - w) as i32) < l && l <= 0;
    Ok(IdentityReport::new(
        "vanishing",
        vec![("v", v as i64), ("w", w as i64), ("l", l as i64)],
        if inside { CheckKind::Theorem } else { CheckKind::Probe },
        &ctx,
        &lhs,
        &rhs,
        Some(trunc),
    ))
}

/// Canonical class of the blow-up from the adjunction chain:
/// `K_P = K_Z · det V · u^{-v}`, then twisting by the inverse determinants
/// of the two Koszul bundles `V̄` and `W(-1)`.
pub fn blowup_canonical_class(ctx: &RootContext) -> Result<Laurent> {
    let (g, _) = ctx.hyperplane()?;
    let v = g.rank as i32;
    let n = ctx.nvars();
    let k_p = &(&ctx.symbol("kZ")? * &ctx.det("V")?) * &ctx.u(-v)?;
    let vbar = tautological_quotient(ctx)?;
    let w_twist = ctx.bundle("W")?.twist(&ctx.u(-1)?);
    let normal_det = &vbar.det(n) * &w_twist.det(n);
    Ok(&k_p * &normal_det.monomial_inverse().expect("determinants are monomials"))
}

/// `K_Bl = pr^* K_Y · u^{w-v+1}` with `K_Y = K_Z · det(W)^{-1}`.
pub fn verify_discrepancy(v: usize, w: usize) -> Result<IdentityReport> {
    rank_at_least_one(&[("V", v), ("W", w)])?;
    let ctx = blowup_context(v, w)?;
    let lhs = blowup_canonical_class(&ctx)?;
    let exponent = w as i32 - v as i32 + 1;
    let k_y = &ctx.symbol("kZ")? * &ctx.det_inv("W")?;
    let rhs = &k_y * &ctx.u(exponent)?;
    Ok(IdentityReport::new(
        "discrepancy",
        vec![("v", v as i64), ("w", w as i64), ("u-exponent", exponent as i64)],
        CheckKind::Theorem,
        &ctx,
        &lhs,
        &rhs,
        None,
    ))
}

/// `pr_* K_Bl = K_Y`: push of `K_Bl · [O_Bl]` equals `K_Z det(W)^{-1} λ_{-1}(W)`.
pub fn verify_canonical_pushforward(v: usize, w: usize) -> Result<IdentityReport> {
    rank_at_least_one(&[("V", v), ("W", w)])?;
    if w >= v {
        return Err(Error::Hypothesis(format!("need w < v, got v = {v}, w = {w}")));
    }
    let ctx = blowup_context(v, w)?;
    let (bl, trunc) = blowup_structure_class(&ctx)?;
    let lhs = push_poly(&ctx, &(&blowup_canonical_class(&ctx)? * &bl))?;
    let (lw, _) = koszul_class(&ctx, &ctx.bundle("W")?)?;
    let rhs = &(&ctx.symbol("kZ")? * &ctx.det_inv("W")?) * &lw;
    Ok(IdentityReport::new(
        "canonical-pushforward",
        vec![("v", v as i64), ("w", w as i64)],
        CheckKind::Theorem,
        &ctx,
        &lhs,
        &rhs,
        Some(trunc),
    ))
}

/// Classes of the virtual blow-up formula in `virtual_context(v, n)`.
pub struct VirtualBlowup {
    pub ctx: Arc<RootContext>,
    pub v: usize,
    pub n: usize,
    /// `r = v - n`.
    pub r: i64,
    /// `[Y] = λ_{-1}(V)`.
    pub y: Laurent,
    /// `λ_{-1}(N̄)` on `P(N)`.
    pub section: Laurent,
    /// Truncation degree used for `λ_{-1}(N̄)`.
    pub truncation: usize,
}

impl VirtualBlowup {
    pub fn new(v: usize, n: usize) -> Result<Self> {
        rank_at_least_one(&[("V", v), ("N", n)])?;
        let ctx = virtual_context(v, n)?;
        let (y, _) = koszul_class(&ctx, &ctx.bundle("V")?)?;
        let (section, truncation) = koszul_class(&ctx, &tautological_quotient(&ctx)?)?;
        Ok(VirtualBlowup {
            ctx,
            v,
            n,
            r: v as i64 - n as i64,
            y,
            section,
            truncation,
        })
    }

    /// `g_*`: multiplication by `λ_{-1}(N)`.
    pub fn g_push(&self, x: &Laurent) -> Result<Laurent> {
        let (ln, _) = koszul_class(&self.ctx, &self.ctx.bundle("N")?)?;
        Ok(x * &ln)
    }

    /// Pushforward of the blow-up structure class, `π_*(λ_{-1}(N̄)·λ_{-1}(V(-1)))`.
    pub fn blowup_push(&self) -> Result<Laurent> {
        let (kv, _) = koszul_class(&self.ctx, &self.ctx.bundle("V")?.twist(&self.ctx.u(-1)?))?;
        push_poly(&self.ctx, &(&self.section * &kv))
    }

    /// The correction term `(-1)^{1-a} g_*(det(C_f)^{-1} λ^{a+r}(C_f^∨[1]))`
    /// with `[C_f] = N − V`, so `C_f^∨[1] = V^∨ − N^∨`.
    pub fn term(&self, a: i64) -> Result<Laurent> {
        let deg = a + self.r;
        if deg < 0 {
            return Ok(self.ctx.zero());
        }
        let ctx = &self.ctx;
        let cf = ctx.bundle("N")?.sub(&ctx.bundle("V")?);
        let det_inv = cf.det(ctx.nvars()).monomial_inverse().expect("determinants are monomials");
        let shifted = cf.dual().shift(1);
        let lam = lambda_class(ctx, &shifted, deg as usize);
        let sign = if (1 - a).rem_euclid(2) == 0 { 1 } else { -1 };
        Ok(self.g_push(&(&det_inv * &lam))?.scale(&BigInt::from(sign)))
    }

    /// `[Y] + Σ_{a=-r}^{0} term(a)`.
    pub fn formula(&self) -> Result<Laurent> {
        let mut acc = self.y.clone();
        for a in -self.r..=0 {
            acc = &acc + &self.term(a)?;
        }
        Ok(acc)
    }

    /// Class on `P(N)` whose pushforward against `λ_{-1}(N̄)` is `D^a`:
    /// `Σ_{m=a}^{0} (-1)^m λ^{-m}V + Σ_{m=-v}^{a-1} (-1)^m λ^{-m}V · u^{m-a}`.
    pub fn filtration_class(&self, a: i64) -> Result<Laurent> {
        let ctx = &self.ctx;
        let lam = |m: i64| -> Result<Laurent> {
            let e = ctx.e("V", (-m) as usize)?;
            Ok(if m.rem_euclid(2) == 0 { e } else { -&e })
        };
        let mut acc = ctx.zero();
        for m in a..=0 {
            acc = &acc + &lam(m)?;
        }
        for m in -(self.v as i64)..a {
            acc = &acc + &(&lam(m)? * &ctx.u((m - a) as i32)?);
        }
        Ok(acc)
    }

    /// `D^a = π_*(λ_{-1}(N̄) · filtration_class(a))`.
    pub fn filtration_step(&self, a: i64) -> Result<Laurent> {
        push_poly(&self.ctx, &(&self.section * &self.filtration_class(a)?))
    }

    fn report(&self, identity: &'static str, extra: Vec<(&'static str, i64)>, kind: CheckKind, lhs: &Laurent, rhs: &Laurent) -> IdentityReport {
        let mut params = vec![("v", self.v as i64), ("n", self.n as i64), ("r", self.r)];
        params.extend(extra);
        IdentityReport::new(identity, params, kind, &self.ctx, lhs, rhs, Some(self.truncation))
    }

    /// Endpoint and step checks of the filtration:
    /// `D^{-r-1} = [Y]`, `D^0 = π_*[Bl]`, and `D^a − D^{a-1} = term(a)` for `-r ≤ a ≤ 0`.
    pub fn filtration_reports(&self, kind: CheckKind) -> Result<Vec<IdentityReport>> {
        let mut out = Vec::new();
        let bottom = -self.r - 1;
        out.push(self.report("filtration-bottom", vec![("a", bottom)], kind, &self.filtration_step(bottom)?, &self.y));
        out.push(self.report("filtration-top", vec![("a", 0)], kind, &self.filtration_step(0)?, &self.blowup_push()?));
        for a in -self.r..=0 {
            let step = &self.filtration_step(a)? - &self.filtration_step(a - 1)?;
            out.push(self.report("filtration-step", vec![("a", a)], kind, &step, &self.term(a)?));
        }
        Ok(out)
    }
}

/// The virtual-class pushforward formula for `r = v − n ≤ 0`, followed by
/// the filtration checks.
pub fn verify_virtual_blowup(v: usize, n: usize) -> Result<Vec<IdentityReport>> {
    if v > n {
        return Err(Error::Hypothesis(format!("need r = v - n <= 0, got v = {v}, n = {n}")));
    }
    virtual_blowup_reports(v, n, CheckKind::Theorem)
}

/// The same checks for `r > 0`, which the theorem does not cover.
pub fn probe_virtual_blowup(v: usize, n: usize) -> Result<Vec<IdentityReport>> {
    virtual_blowup_reports(v, n, if v > n { CheckKind::Conjectural } else { CheckKind::Theorem })
}

fn virtual_blowup_reports(v: usize, n: usize, kind: CheckKind) -> Result<Vec<IdentityReport>> {
    let vb = VirtualBlowup::new(v, n)?;
    let mut out = vec![vb.report("virtual-blowup", vec![], kind, &vb.blowup_push()?, &vb.formula()?)];
    out.extend(vb.filtration_reports(kind)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_and_koszul_examples() {
        let ctx = blowup_context(2, 2).unwrap();
        let vbar = tautological_quotient(&ctx).unwrap();
        assert_eq!(lambda_class(&ctx, &vbar, 0), ctx.one());
        assert_eq!(lambda_class(&ctx, &vbar, 1), &ctx.e("V", 1).unwrap() - &ctx.u(1).unwrap());
        assert_eq!(lambda_class(&ctx, &ctx.bundle("V").unwrap(), 2), ctx.det("V").unwrap());
        let b1 = ctx.root("W", 0, 1).unwrap();
        let b2 = ctx.root("W", 1, 1).unwrap();
        let one = ctx.one();
        let line = ctx.line(b1.clone()).unwrap();
        assert_eq!(koszul_class(&ctx, &line).unwrap().0, &one - &b1);
        assert_eq!(koszul_class(&ctx, &ctx.bundle("W").unwrap()).unwrap().0, (&one - &b1) * (&one - &b2));
        let ui = ctx.u(-1).unwrap();
        let tw = ctx.bundle("W").unwrap().twist(&ui);
        assert_eq!(koszul_class(&ctx, &tw).unwrap().0, (&one - &(&b1 * &ui)) * (&one - &(&b2 * &ui)));
    }

    #[test]
    fn dual_basis_examples() {
        assert!(verify_dual_basis(1, 0, 0).unwrap().holds);
        let r = verify_dual_basis(2, 1, 1).unwrap();
        assert!(r.holds);
        assert_eq!(r.lhs, "-1");
        let r = verify_dual_basis(3, 1, 0).unwrap();
        assert!(r.holds);
        assert_eq!(r.lhs, "0");
        assert!(verify_dual_basis(2, 2, 0).is_err());
    }

    #[test]
    fn vanishing_examples() {
        assert!(verify_vanishing(2, 1, 0).unwrap().holds);
        assert!(verify_vanishing(3, 1, 0).unwrap().holds);
        assert!(verify_vanishing(3, 1, -1).unwrap().holds);
        let probe = verify_vanishing(2, 1, -1).unwrap();
        assert_eq!(probe.kind, CheckKind::Probe);
        assert!(!probe.holds);
        assert!(probe.acceptable());
        assert!(verify_vanishing(2, 2, 0).is_err());
    }

    #[test]
    fn discrepancy_examples() {
        for (v, w, e) in [(2, 1, 0), (3, 1, -1), (2, 2, 1)] {
            let r = verify_discrepancy(v, w).unwrap();
            assert!(r.holds, "{r:?}");
            assert!(r.params.contains(&("u-exponent", e)));
        }
        assert!(verify_canonical_pushforward(3, 1).unwrap().holds);
    }

    #[test]
    fn virtual_blowup_examples() {
        let vb = VirtualBlowup::new(1, 1).unwrap();
        assert_eq!(vb.r, 0);
        assert!(verify_virtual_blowup(1, 1).unwrap().iter().all(|r| r.holds));
        // r = -1: empty sum, push equals [Y].
        let vb = VirtualBlowup::new(1, 2).unwrap();
        assert_eq!(vb.formula().unwrap(), vb.y);
        assert_eq!(vb.blowup_push().unwrap(), vb.y);
        assert!(matches!(verify_virtual_blowup(2, 1), Err(Error::Hypothesis(_))));
        assert!(probe_virtual_blowup(2, 1).unwrap().iter().all(|r| r.kind == CheckKind::Conjectural));
    }
}
