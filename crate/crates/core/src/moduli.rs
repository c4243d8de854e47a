//! Triple and quadruple chains of Hecke modifications at one vertex.
//!
//! A triple is `𝓑⁰ ⊂_x 𝓑¹ ⊂_x 𝓑²`; a quadruple is a commuting square
//! `𝓑⁰ ⊂_x 𝓑¹ ⊂_y 𝓑²`, `𝓑⁰ ⊂_y 𝓑¹′ ⊂_x 𝓑²` with `x, y` at the same vertex.
//! Tangent spaces are computed as fibre products of Hecke tangent spaces.

use num::Zero;

use crate::error::{Error, Result};
use crate::framed::{gauge_equivalence, FramedModule};
use crate::hecke::{hecke_tangent, pull_matrix, push_matrix, HeckePair, HeckeTangent};
use crate::linalg::{Matrix, Rational, Subspace};
use crate::piq::{
    ext_complex_unchecked, hom_space, theta, ExtData, LoopModule, PiQModule, Rep,
};

/// Linear system over a direct sum of coordinate groups, assembled row block by row block.
struct System {
    widths: Vec<usize>,
    rows: Vec<Matrix>,
}

impl System {
    fn new(widths: Vec<usize>) -> Self {
        System { widths, rows: Vec::new() }
    }

    fn total(&self) -> usize {
        self.widths.iter().sum()
    }

    /// Add the equations `Σ m_g · v_g = 0` for the listed groups.
    fn push(&mut self, parts: &[(usize, Matrix)]) {
        let r = parts.first().map_or(0, |(_, m)| m.rows());
        let mut row = Matrix::zeros(r, self.total());
        for (g, m) in parts {
            assert_eq!(m.rows(), r, "equation blocks must have equal height");
            assert_eq!(m.cols(), self.widths[*g], "equation block has the wrong width");
            let off: usize = self.widths[..*g].iter().sum();
            let cur = row.block(0, off, r, m.cols()).add(m);
            row.set_block(0, off, &cur);
        }
        self.rows.push(row);
    }

    fn matrix(&self) -> Matrix {
        let refs: Vec<&Matrix> = self.rows.iter().collect();
        Matrix::vstack(self.total(), &refs)
    }

    fn solutions(&self) -> Subspace {
        self.matrix().kernel()
    }
}

/// Column blocks `(first, second)` of a matrix on `Ext¹(𝓑¹) ⊕ Ext¹(𝓑²)`.
fn split_cols(m: &Matrix, t1: usize) -> (Matrix, Matrix) {
    let first: Vec<usize> = (0..t1).collect();
    let second: Vec<usize> = (t1..m.cols()).collect();
    (m.select_cols(&first), m.select_cols(&second))
}

/// `𝓑⁰ ⊂_x 𝓑¹ ⊂_x 𝓑²`.
#[derive(Clone, Debug)]
pub struct TriplePoint {
    pub p01: HeckePair,
    pub p12: HeckePair,
}

impl TriplePoint {
    pub fn new(p01: HeckePair, p12: HeckePair) -> Result<Self> {
        if p01.x != p12.x {
            return Err(Error::Invalid("the two modifications carry different loop labels".into()));
        }
        if p01.b2 != p12.b1 {
            return Err(Error::Invalid("the two modifications do not share the middle module".into()));
        }
        Ok(TriplePoint { p01, p12 })
    }

    pub fn x(&self) -> &LoopModule {
        &self.p01.x
    }

    pub fn modules(&self) -> [&FramedModule; 3] {
        [&self.p01.b1, &self.p01.b2, &self.p12.b2]
    }
}

/// Two successive modifications by the same `x`.
pub fn make_triple(b0: &FramedModule, x: &LoopModule, cls1: &[Rational], cls2: &[Rational]) -> Result<TriplePoint> {
    let p01 = crate::hecke::hecke_up(b0, x, cls1)?;
    let p12 = crate::hecke::hecke_up(&p01.b2, x, cls2)?;
    TriplePoint::new(p01, p12)
}

/// Tangent data of a triple.
#[derive(Clone, Debug)]
pub struct TripleTangent {
    pub t01: HeckeTangent,
    pub t12: HeckeTangent,
    /// Solutions `(b⁰, b¹, b²)` of the fibre-product system.
    pub space: Subspace,
}

impl TripleTangent {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `dim T(𝓑¹,𝓑¹) + 2 g_k - 1`.
    pub fn expected_dim(&self) -> i64 {
        let g = self.t01.ext11.quiver().g(self.t01.k) as i64;
        self.t12.t1() as i64 + 2 * g - 1
    }
}

/// Solve for `(b⁰,b¹,b²)` with `(b⁰,b¹) ∈ T₀₁`, `(b¹,b²) ∈ T₁₂` and equal `dt`.
pub fn triple_tangent(t: &TriplePoint) -> Result<TripleTangent> {
    let t01 = hecke_tangent(&t.p01)?;
    let t12 = hecke_tangent(&t.p12)?;
    let (n0, n1, n2) = (t01.t1(), t12.t1(), t12.t2());
    let mut sys = System::new(vec![n0, n1, n2]);
    let (c0, c1) = split_cols(&t01.constraint, n0);
    sys.push(&[(0, c0), (1, c1)]);
    let (c1, c2) = split_cols(&t12.constraint, n1);
    sys.push(&[(1, c1), (2, c2)]);
    let (d0, d1) = split_cols(&t01.dt, n0);
    let (e1, e2) = split_cols(&t12.dt, n1);
    sys.push(&[(0, d0), (1, d1), (1, e1.neg()), (2, e2.neg())]);
    Ok(TripleTangent {
        space: sys.solutions(),
        t01,
        t12,
    })
}

/// Results of the two kernel computations at a triple.
#[derive(Clone, Debug)]
pub struct AlphaReport {
    /// Class coordinates of `α_{G¹}` in `Ext¹(𝓑¹,𝓑¹)`.
    pub alpha: Vec<Rational>,
    /// `α_x` as loop coordinates in `L_k`.
    pub alpha_x: Vec<Rational>,
    /// Kernel of `a ↦ ([a ζ₀₁], [ζ₁₂ a])`.
    pub first_kernel: Subspace,
    /// Annihilator of the image of `T₀₁ ⊕ T₁₂ → Ext¹(𝓑¹) ⊕ L_k`.
    pub second_kernel: Subspace,
    /// `dt₁₂(α, 0)` and `dt₀₁(0, α)`.
    pub dt_values: [Vec<Rational>; 2],
}

/// Sign of `α_x` in the vector `(α_{G¹}, ±α_x)` spanning the annihilator.
pub const ALPHA_X_SIGN: i64 = -1;

impl AlphaReport {
    pub fn alpha_nonzero(&self) -> bool {
        self.alpha.iter().any(|v| !v.is_zero())
    }

    pub fn first_kernel_ok(&self) -> bool {
        self.first_kernel.dim() == 1 && self.first_kernel.contains(&self.alpha)
    }

    /// The annihilator is the line through `(α_{G¹}, ALPHA_X_SIGN · α_x)`.
    pub fn second_kernel_ok(&self) -> bool {
        let s = Rational::from_integer(ALPHA_X_SIGN.into());
        let v: Vec<Rational> = self.alpha.iter().cloned().chain(self.alpha_x.iter().map(|a| a * &s)).collect();
        self.second_kernel.dim() == 1 && self.second_kernel.contains(&v)
    }

    pub fn ok(&self) -> bool {
        self.alpha_nonzero() && self.first_kernel_ok() && self.second_kernel_ok()
    }
}

/// Compute `α_{G¹} = θ(ζ_{G¹x} ⊗ ζ_{xG¹})`, `α_x = θ(ζ_{xG¹} ⊗ ζ_{G¹x})` and both kernels.
pub fn alpha_kernel_check(t: &TriplePoint) -> Result<AlphaReport> {
    let tt = triple_tangent(t)?;
    let q = t.p01.setting().cb().clone();
    let x = t.x();
    let k = x.k;
    let b1 = t.p01.b2.to_cb();
    let xm = t.p01.setting().loop_cb(x)?;
    let proj = Rep::Hom(t.p01.quotient_map());
    let class = Rep::Ext1(t.p12.class()?);
    let alpha_rep = theta(&q, b1.dims(), b1.dims(), &proj, &class)?;
    let alpha_x_rep = theta(&q, xm.dims(), xm.dims(), &class, &proj)?;
    let ext11 = &tt.t12.ext11;
    let alpha = ext11.coords(&alpha_rep)?;
    let alpha_x: Vec<Rational> = q
        .doubled_loops_at(k)
        .iter()
        .map(|&l| alpha_x_rep.blocks()[l].trace())
        .collect();

    let pull = pull_matrix(ext11, &tt.t01.ext12, &t.p01.zeta_cb())?;
    let push = push_matrix(ext11, &tt.t12.ext12, &t.p12.zeta_cb())?;
    let first_kernel = Matrix::vstack(ext11.dims()[1], &[&pull, &push]).kernel();

    let n0 = tt.t01.t1();
    let n1 = tt.t12.t1();
    let s01 = tt.t01.space.matrix();
    let s12 = tt.t12.space.matrix();
    let mid01: Vec<usize> = (n0..n0 + n1).collect();
    let mid12: Vec<usize> = (0..n1).collect();
    let top = Matrix::hstack(n1, &[&s01.select_rows(&mid01), &s12.select_rows(&mid12).neg()]);
    let lk = tt.t01.dt.rows();
    let bottom = Matrix::hstack(lk, &[&tt.t01.dt.mul(&s01), &tt.t12.dt.mul(&s12).neg()]);
    let f = Matrix::vstack(top.cols(), &[&top, &bottom]);
    let omega = crate::piq::omega_pairing(ext11, ext11, 1)?;
    let form = Matrix::block_diag(&[&omega, &LoopModule::loop_form(t.p01.setting().base(), k)]);
    let second_kernel = f.transpose().mul(&form).kernel();

    let zeros = |n: usize| std::iter::repeat(Rational::zero()).take(n);
    let dt12 = tt.t12.dt.mul_vec(&alpha.iter().cloned().chain(zeros(tt.t12.t2())).collect::<Vec<_>>());
    let dt01 = tt.t01.dt.mul_vec(&zeros(n0).chain(alpha.iter().cloned()).collect::<Vec<_>>());
    Ok(AlphaReport {
        alpha,
        alpha_x,
        first_kernel,
        second_kernel,
        dt_values: [dt12, dt01],
    })
}

/// Conditions on a chain `𝓑⁰ ⊂ 𝓑¹ ⊂ 𝓑²`: loop modules do not map into any
/// member, and `Hom(𝓑ᵃ, 𝓑ᵇ)` is one-dimensional for `a ≤ b` and zero for `a > b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainReport {
    /// `dim Hom(y, 𝓑ᵐ)` for each probe `y` and member `m`.
    pub probe_homs: Vec<usize>,
    /// `dim Hom(𝓑ᵃ, 𝓑ᵇ)`, indexed `[a][b]`.
    pub homs: Vec<Vec<usize>>,
}

impl ChainReport {
    pub fn ok(&self) -> bool {
        self.probe_homs.iter().all(|&d| d == 0)
            && self
                .homs
                .iter()
                .enumerate()
                .all(|(a, row)| row.iter().enumerate().all(|(b, &d)| d == usize::from(a <= b)))
    }
}

pub fn chain_check(chain: &[&FramedModule], probes: &[LoopModule]) -> Result<ChainReport> {
    let cbs: Vec<PiQModule> = chain.iter().map(|b| b.to_cb()).collect();
    let setting = chain
        .first()
        .ok_or_else(|| Error::Invalid("empty chain".into()))?
        .setting()
        .clone();
    let mut probe_homs = Vec::new();
    for y in probes {
        let ym = setting.loop_cb(y)?;
        for m in &cbs {
            probe_homs.push(hom_space(&ym, m)?.len());
        }
    }
    let homs = cbs
        .iter()
        .map(|a| cbs.iter().map(|b| hom_space(a, b).map(|h| h.len())).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    Ok(ChainReport { probe_homs, homs })
}

/// A commuting square `𝓑⁰ ⊂_x 𝓑¹ ⊂_y 𝓑²`, `𝓑⁰ ⊂_y 𝓑¹′ ⊂_x 𝓑²`.
#[derive(Clone, Debug)]
pub struct QuadruplePoint {
    /// `𝓑⁰ ⊂_x 𝓑¹`.
    pub p01: HeckePair,
    /// `𝓑¹ ⊂_y 𝓑²`.
    pub p12: HeckePair,
    /// `𝓑⁰ ⊂_y 𝓑¹′`.
    pub p01p: HeckePair,
    /// `𝓑¹′ ⊂_x 𝓑²`.
    pub p1p2: HeckePair,
}

impl QuadruplePoint {
    pub fn new(p01: HeckePair, p12: HeckePair, p01p: HeckePair, p1p2: HeckePair) -> Result<Self> {
        let qp = QuadruplePoint { p01, p12, p01p, p1p2 };
        qp.validate()?;
        Ok(qp)
    }

    /// The diagonal quadruple `𝓑¹′ = 𝓑¹` over a triple.
    pub fn diagonal(t: &TriplePoint) -> Self {
        QuadruplePoint {
            p01: t.p01.clone(),
            p12: t.p12.clone(),
            p01p: t.p01.clone(),
            p1p2: t.p12.clone(),
        }
    }

    pub fn x(&self) -> &LoopModule {
        &self.p01.x
    }

    pub fn y(&self) -> &LoopModule {
        &self.p12.x
    }

    pub fn b0(&self) -> &FramedModule {
        &self.p01.b1
    }

    pub fn b1(&self) -> &FramedModule {
        &self.p01.b2
    }

    pub fn b1p(&self) -> &FramedModule {
        &self.p01p.b2
    }

    pub fn b2(&self) -> &FramedModule {
        &self.p12.b2
    }

    /// Matching modules and labels, a commuting square, and the trace condition.
    pub fn validate(&self) -> Result<()> {
        let (x, y) = (self.x(), self.y());
        if x.k != y.k {
            return Err(Error::Invalid("labels of a quadruple live at one vertex".into()));
        }
        if self.p1p2.x != *x || self.p01p.x != *y {
            return Err(Error::Invalid("quadruple labels do not match".into()));
        }
        if self.p01p.b1 != *self.b0() || self.p12.b1 != *self.b1() || self.p1p2.b1 != *self.b1p() || self.p1p2.b2 != *self.b2() {
            return Err(Error::Invalid("quadruple modules do not match".into()));
        }
        for p in [&self.p01, &self.p12, &self.p01p, &self.p1p2] {
            p.validate()?;
        }
        let square_commutes = (0..self.p01.zeta.len()).all(|v| {
            self.p12.zeta[v].mul(&self.p01.zeta[v]) == self.p1p2.zeta[v].mul(&self.p01p.zeta[v])
        });
        if !square_commutes {
            return Err(Error::Invalid("quadruple square does not commute".into()));
        }
        if !self.trace_condition() {
            return Err(Error::Invalid("trace condition fails".into()));
        }
        Ok(())
    }

    /// `tr_k(B¹) - tr_k(B⁰) = tr_k(B²) - tr_k(B¹′)` on every loop at `k`.
    pub fn trace_condition(&self) -> bool {
        let k = self.x().k;
        let t = |b: &FramedModule| b.loop_traces(k);
        let (t0, t1, t1p, t2) = (t(self.b0()), t(self.b1()), t(self.b1p()), t(self.b2()));
        (0..t0.len()).all(|l| &t1[l] - &t0[l] == &t2[l] - &t1p[l])
    }

    /// True when `𝓑¹` and `𝓑¹′` are the same submodule of `𝓑²`.
    pub fn is_diagonal(&self) -> bool {
        (0..self.p12.zeta.len()).all(|v| {
            let a = Subspace::span(self.p12.zeta[v].rows(), &self.p12.zeta[v].col_vectors());
            let b = Subspace::span(self.p1p2.zeta[v].rows(), &self.p1p2.zeta[v].col_vectors());
            a.same_as(&b)
        })
    }
}

/// Build `𝓑⁰ = 𝓑¹ ∩ 𝓑¹′` from two distinct submodules `𝓑¹ ⊂_y 𝓑²`, `𝓑¹′ ⊂_x 𝓑²`.
pub fn quad_from_two_subs(p12: &HeckePair, p1p2: &HeckePair) -> Result<QuadruplePoint> {
    if p12.b2 != p1p2.b2 {
        return Err(Error::Invalid("submodules of different modules".into()));
    }
    let s = p12.setting().clone();
    let n = s.infinity();
    let (z, zp) = (p12.zeta_cb(), p1p2.zeta_cb());
    let diag = (0..n).all(|v| {
        let a = Subspace::span(z[v].rows(), &z[v].col_vectors());
        let b = Subspace::span(zp[v].rows(), &zp[v].col_vectors());
        a.same_as(&b)
    });
    if diag {
        return Err(Error::Invalid("the two submodules coincide; use the triple construction".into()));
    }
    let sum = p12.b1.to_cb().direct_sum(&p1p2.b1.to_cb());
    let mut basis = Vec::with_capacity(n + 1);
    for v in 0..n {
        let m = Matrix::hstack(z[v].rows(), &[&z[v], &zp[v]]);
        basis.push(m.kernel().matrix());
    }
    basis.push(Matrix::from_i64(2, 1, &[1, -1]));
    let (b0_cb, incl) = sum.submodule(&basis)?;
    let b0 = FramedModule::from_cb(s.clone(), &b0_cb)?;
    let mut zeta01 = Vec::with_capacity(n);
    let mut zeta01p = Vec::with_capacity(n);
    for (v, m) in incl.iter().take(n).enumerate() {
        let d1 = p12.b1.v()[v];
        let d1p = p1p2.b1.v()[v];
        zeta01.push(m.block(0, 0, d1, m.cols()));
        zeta01p.push(m.block(d1, 0, d1p, m.cols()).neg());
    }
    let p01 = HeckePair {
        b1: b0.clone(),
        b2: p12.b1.clone(),
        x: p1p2.x.clone(),
        zeta: zeta01,
    };
    let p01p = HeckePair {
        b1: b0,
        b2: p1p2.b1.clone(),
        x: p12.x.clone(),
        zeta: zeta01p,
    };
    QuadruplePoint::new(p01, p12.clone(), p01p, p1p2.clone())
}

/// Build `𝓑² = (𝓑¹ ⊕ 𝓑¹′) / 𝓑⁰` from two distinct modifications
/// `𝓑⁰ ⊂_x 𝓑¹`, `𝓑⁰ ⊂_y 𝓑¹′`.
pub fn quad_from_two_quots(p01: &HeckePair, p01p: &HeckePair) -> Result<QuadruplePoint> {
    if p01.b1 != p01p.b1 {
        return Err(Error::Invalid("modifications of different modules".into()));
    }
    let s = p01.setting().clone();
    let n = s.infinity();
    let same_line = p01.x == p01p.x && {
        let ext = ext_complex_unchecked(&s.loop_cb(&p01.x)?, &p01.b1.to_cb());
        let a = ext.coords(&Rep::Ext1(p01.class()?))?;
        let b = ext.coords(&Rep::Ext1(p01p.class()?))?;
        Matrix::from_cols(a.len(), &[a, b]).rank() < 2
    };
    if same_line {
        return Err(Error::Invalid("the two modifications coincide; use the triple construction".into()));
    }
    let sum = p01.b2.to_cb().direct_sum(&p01p.b2.to_cb());
    let (z, zp) = (p01.zeta_cb(), p01p.zeta_cb());
    let basis: Vec<Matrix> = (0..=n)
        .map(|v| Matrix::vstack(z[v].cols(), &[&z[v], &zp[v].neg()]))
        .collect();
    let (quot, proj) = sum.quotient(&basis)?;
    // Rescale the framing vertex so that both maps into the quotient are the identity there.
    let scale = proj[n].get(0, 0).clone();
    if scale.is_zero() {
        return Err(Error::Invalid("framing line collapses in the quotient".into()));
    }
    let mut gauge: Vec<Matrix> = quot.dims().iter().map(|&d| Matrix::identity(d)).collect();
    gauge[n] = Matrix::from_vec(1, 1, vec![scale.recip()]);
    let b2_cb = quot.conjugate(&gauge)?;
    let b2 = FramedModule::from_cb(s.clone(), &b2_cb)?;
    let mut zeta12 = Vec::with_capacity(n);
    let mut zeta1p2 = Vec::with_capacity(n);
    for v in 0..n {
        let d1 = p01.b2.v()[v];
        let d1p = p01p.b2.v()[v];
        let p = &proj[v];
        zeta12.push(p.block(0, 0, p.rows(), d1));
        zeta1p2.push(p.block(0, d1, p.rows(), d1p));
    }
    let p12 = HeckePair {
        b1: p01.b2.clone(),
        b2: b2.clone(),
        x: p01p.x.clone(),
        zeta: zeta12,
    };
    let p1p2 = HeckePair {
        b1: p01p.b2.clone(),
        b2,
        x: p01.x.clone(),
        zeta: zeta1p2,
    };
    QuadruplePoint::new(p01.clone(), p12, p01p.clone(), p1p2)
}

/// Tangent data of a quadruple.
#[derive(Clone, Debug)]
pub struct QuadTangent {
    pub pairs: [HeckeTangent; 4],
    /// Solutions `(b⁰, b¹, b¹′, b²)`.
    pub space: Subspace,
    pub diagonal: bool,
    /// On the diagonal: `N = {b : (b,0) ∈ T₁₂, (0,b) ∈ T₀₁}`.
    pub normal: Option<Subspace>,
    /// Off the diagonal: dimension of the kernel from [`injectivity_kernel_dim`] (expected zero).
    pub injectivity_kernel: Option<usize>,
}

impl QuadTangent {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `dim T(𝓑¹,𝓑¹) + 2 g_k`.
    pub fn off_diagonal_expected(&self) -> i64 {
        let t = &self.pairs[1];
        t.t1() as i64 + 2 * t.ext11.quiver().g(t.k) as i64
    }
}

/// Solve conditions (1)-(3): the four pairs are tangent, and
/// `dt₀₁(b⁰,b¹) = dt₁′₂(b¹′,b²)`, `dt₀₁′(b⁰,b¹′) = dt₁₂(b¹,b²)`.
pub fn quad_tangent(qp: &QuadruplePoint) -> Result<QuadTangent> {
    let t01 = hecke_tangent(&qp.p01)?;
    let t12 = hecke_tangent(&qp.p12)?;
    let t01p = hecke_tangent(&qp.p01p)?;
    let t1p2 = hecke_tangent(&qp.p1p2)?;
    let (n0, n1, n1p, n2) = (t01.t1(), t12.t1(), t1p2.t1(), t12.t2());
    let mut sys = System::new(vec![n0, n1, n1p, n2]);
    for (t, a, b) in [(&t01, 0, 1), (&t12, 1, 3), (&t01p, 0, 2), (&t1p2, 2, 3)] {
        let (ca, cb) = split_cols(&t.constraint, t.t1());
        sys.push(&[(a, ca), (b, cb)]);
    }
    for (ta, a0, a1, tb, b0, b1) in [(&t01, 0, 1, &t1p2, 2, 3), (&t01p, 0, 2, &t12, 1, 3)] {
        let (d0, d1) = split_cols(&ta.dt, ta.t1());
        let (e0, e1) = split_cols(&tb.dt, tb.t1());
        sys.push(&[(a0, d0), (a1, d1), (b0, e0.neg()), (b1, e1.neg())]);
    }
    let space = sys.solutions();
    let diagonal = qp.is_diagonal();
    let (normal, injectivity_kernel) = if diagonal {
        (Some(normal_space(&t01, &t12)), None)
    } else {
        (None, Some(injectivity_kernel_dim(qp)?))
    };
    Ok(QuadTangent {
        pairs: [t01, t12, t01p, t1p2],
        space,
        diagonal,
        normal,
        injectivity_kernel,
    })
}

/// `{b ∈ Ext¹(𝓑¹,𝓑¹) : (b,0) ∈ T₁₂ and (0,b) ∈ T₀₁}`.
fn normal_space(t01: &HeckeTangent, t12: &HeckeTangent) -> Subspace {
    let (a12, _) = split_cols(&t12.constraint, t12.t1());
    let (_, b01) = split_cols(&t01.constraint, t01.t1());
    Matrix::vstack(a12.cols(), &[&a12, &b01]).kernel()
}

/// Dimension of the kernel of
/// `Ext¹(𝓑², 𝓑¹) ⊕ Ext¹(𝓑², 𝓑¹′) → Ext¹(𝓑¹,𝓑¹) ⊕ Ext¹(𝓑¹′,𝓑¹′) ⊕ Ext¹(𝓑²,𝓑²)`,
/// `(a, a′) ↦ (a ζ₁₂, a′ ζ₁′₂, ζ₁₂ a + ζ₁′₂ a′)`.
pub fn injectivity_kernel_dim(qp: &QuadruplePoint) -> Result<usize> {
    let q = qp.p12.setting().cb().clone();
    let b1 = qp.b1().to_cb();
    let b1p = qp.b1p().to_cb();
    let b2 = qp.b2().to_cb();
    let e21 = ext_complex_unchecked(&b2, &b1);
    let e21p = ext_complex_unchecked(&b2, &b1p);
    let e11 = ext_complex_unchecked(&b1, &b1);
    let e1p1p = ext_complex_unchecked(&b1p, &b1p);
    let e22 = ext_complex_unchecked(&b2, &b2);
    let z = Rep::Hom(qp.p12.zeta_cb());
    let zp = Rep::Hom(qp.p1p2.zeta_cb());
    // a ↦ a ζ lands in Ext¹(𝓑¹,𝓑¹); a ↦ ζ a lands in Ext¹(𝓑²,𝓑²).
    let pre = |e: &ExtData, tgt: &ExtData, zz: &Rep, dims: &[usize]| {
        e.induced_matrix(1, tgt, 1, |a| theta(&q, dims, dims, zz, a))
    };
    let post = |e: &ExtData, zz: &Rep| e.induced_matrix(1, &e22, 1, |a| theta(&q, b2.dims(), b2.dims(), a, zz));
    let m11 = pre(&e21, &e11, &z, b1.dims())?;
    let m1p = pre(&e21p, &e1p1p, &zp, b1p.dims())?;
    let m2a = post(&e21, &z)?;
    let m2b = post(&e21p, &zp)?;
    let n = e21.dims()[1] + e21p.dims()[1];
    let top = Matrix::block_diag(&[&m11, &m1p]);
    let bottom = Matrix::hstack(m2a.rows(), &[&m2a, &m2b]);
    let full = Matrix::vstack(n, &[&top, &bottom]);
    Ok(full.kernel().dim())
}

/// True when two framed modules are gauge equivalent.
pub fn equivalent(a: &FramedModule, b: &FramedModule) -> Result<bool> {
    Ok(gauge_equivalence(a, b)?.is_some())
}
