//! Simple Hecke correspondences `𝓑¹ ⊂_x 𝓑²` and their tangent spaces.
//!
//! A pair consists of stable framed modules with `v² = v¹ + δ_k` and an
//! inclusion `ζ: 𝓑¹ → 𝓑²` whose cokernel is the loop module `x`. All Ext
//! groups are taken over the Crawley-Boevey quiver, where the inclusion is
//! `(ζ, 1)`.

use std::sync::Arc;

use num::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::framed::{find_inclusion, gauge_equivalence, FramedModule, FramedSetting};
use crate::linalg::{Matrix, Rational, Subspace};
use crate::piq::{build_extension, ext_complex_unchecked, extension_class, theta, ExtData, LoopModule, Rep, ShortExact};
use crate::random::{random_coords, random_loop};

/// `𝓑¹ ⊂_x 𝓑²` with its inclusion.
#[derive(Clone, Debug)]
pub struct HeckePair {
    pub b1: FramedModule,
    pub b2: FramedModule,
    pub x: LoopModule,
    /// The inclusion `V¹ → V²`, one block per vertex of the base quiver.
    pub zeta: Vec<Matrix>,
}

/// Sign convention for the symplectic form on `Ext¹(𝓑¹) ⊕ Ext¹(𝓑²) ⊕ L_k`
/// under which the Hecke tangent space is Lagrangian.
pub const LAGRANGIAN_SIGNS: [i64; 3] = [1, -1, 1];

impl HeckePair {
    pub fn setting(&self) -> &Arc<FramedSetting> {
        self.b1.setting()
    }

    /// The inclusion over the Crawley-Boevey quiver, identity at `∞`.
    pub fn zeta_cb(&self) -> Vec<Matrix> {
        let mut z = self.zeta.clone();
        z.push(Matrix::identity(1));
        z
    }

    /// Check stability, the module-map property and that the cokernel is `x`.
    pub fn validate(&self) -> Result<()> {
        if !self.b1.is_stable() || !self.b2.is_stable() {
            return Err(Error::Unstable);
        }
        let s = self.setting();
        let k = self.x.k;
        let expected: Vec<usize> = self
            .b1
            .v()
            .iter()
            .enumerate()
            .map(|(i, &d)| d + usize::from(i == k))
            .collect();
        if self.b2.v() != &expected[..] {
            return Err(Error::Invalid("dimension vectors differ by more than one vertex".into()));
        }
        let g = self.b1.to_cb();
        let h = self.b2.to_cb();
        let z = self.zeta_cb();
        let sigma = crate::piq::sigma_apply(&g, &h, &z);
        if !crate::graded::blocks_are_zero(&sigma) {
            return Err(Error::Invalid("inclusion is not a module map".into()));
        }
        if z.iter().any(|m| m.rank() != m.cols()) {
            return Err(Error::Invalid("inclusion is not injective".into()));
        }
        let basis: Vec<Matrix> = z.clone();
        let (quot, _) = h.quotient(&basis)?;
        if quot != s.loop_cb(&self.x)? {
            return Err(Error::Invalid("cokernel of the inclusion is not the loop module x".into()));
        }
        Ok(())
    }

    /// Two pairs are equivalent when gauge transformations `h: 𝓑¹ → 𝓑¹′` and
    /// `g: 𝓑² → 𝓑²′` satisfy `g ζ = ζ′ h`.
    pub fn equivalent(&self, other: &HeckePair) -> Result<bool> {
        if self.x != other.x {
            return Ok(false);
        }
        let (Some(h), Some(g)) = (gauge_equivalence(&self.b1, &other.b1)?, gauge_equivalence(&self.b2, &other.b2)?) else {
            return Ok(false);
        };
        Ok((0..g.len()).all(|v| g[v].mul(&self.zeta[v]) == other.zeta[v].mul(&h[v])))
    }

    /// The quotient map `𝓑² → x` over the Crawley-Boevey quiver; its only
    /// nonzero block is a left null vector of `ζ_k`.
    pub fn quotient_map(&self) -> Vec<Matrix> {
        let k = self.x.k;
        let mut blocks: Vec<Matrix> = self
            .b2
            .v()
            .iter()
            .enumerate()
            .map(|(i, &d)| Matrix::zeros(usize::from(i == k), d))
            .collect();
        let null = self.zeta[k].transpose().kernel();
        debug_assert_eq!(null.dim(), 1, "cokernel of a Hecke inclusion is one-dimensional");
        blocks[k] = Matrix::from_rows(&[null.vectors()[0].clone()]);
        blocks.push(Matrix::zeros(0, 1));
        blocks
    }

    /// The class of `0 → 𝓑¹ → 𝓑² → x → 0` as a cocycle in `E(x, 𝓑¹)`.
    pub fn class(&self) -> Result<Vec<Matrix>> {
        let ses = ShortExact {
            g: self.b1.to_cb(),
            h: self.b2.to_cb(),
            k: self.setting().loop_cb(&self.x)?,
            incl: self.zeta_cb(),
            proj: self.quotient_map(),
        };
        extension_class(&ses)
    }

    /// Recover the pair from two stable framed modules with `𝓑¹ ⊂ 𝓑²`.
    pub fn from_modules(b1: FramedModule, b2: FramedModule) -> Result<Self> {
        let zeta = find_inclusion(&b1, &b2)?.ok_or_else(|| Error::Invalid("no inclusion between the modules".into()))?;
        let diff: Vec<usize> = b2.v().iter().zip(b1.v()).map(|(a, b)| a.wrapping_sub(*b)).collect();
        let k = match diff.iter().enumerate().filter(|(_, &d)| d != 0).collect::<Vec<_>>()[..] {
            [(k, &1)] => k,
            _ => return Err(Error::Invalid("dimension vectors do not differ by a simple root".into())),
        };
        let x_vals: Vec<Rational> = b2
            .loop_traces(k)
            .iter()
            .zip(b1.loop_traces(k))
            .map(|(a, b)| a - b)
            .collect();
        let pair = HeckePair {
            b1,
            b2,
            x: LoopModule::new(k, x_vals),
            zeta,
        };
        pair.validate()?;
        Ok(pair)
    }
}

/// `𝓑² = ` the extension of `x` by `𝓑¹` with class `coords` in `Ext¹(x, 𝓑¹)`.
/// The new basis vector is the last one at vertex `k`.
pub fn hecke_up(b1: &FramedModule, x: &LoopModule, coords: &[Rational]) -> Result<HeckePair> {
    let s = b1.setting().clone();
    let g = b1.to_cb();
    let xm = s.loop_cb(x)?;
    let ext = ext_complex_unchecked(&xm, &g);
    if coords.len() != ext.dims()[1] {
        return Err(Error::DimMismatch {
            expected: ext.dims()[1],
            got: coords.len(),
        });
    }
    if coords.iter().all(Zero::is_zero) {
        return Err(Error::SplitClass);
    }
    let c = ext.rep(1, coords);
    let ses = build_extension(&g, &xm, c.blocks())?;
    let b2 = FramedModule::from_cb(s.clone(), &ses.h)?;
    if !b2.is_stable() {
        return Err(Error::Unstable);
    }
    let n = s.infinity();
    Ok(HeckePair {
        b1: b1.clone(),
        b2,
        x: x.clone(),
        zeta: ses.incl[..n].to_vec(),
    })
}

/// `𝓑¹ = ker φ` for `φ ∈ Hom(𝓑², x)` given by coordinates in the chosen
/// basis of that Hom space.
pub fn hecke_down(b2: &FramedModule, x: &LoopModule, coords: &[Rational]) -> Result<HeckePair> {
    let s = b2.setting().clone();
    let h = b2.to_cb();
    let xm = s.loop_cb(x)?;
    let ext = ext_complex_unchecked(&h, &xm);
    if coords.len() != ext.dims()[0] {
        return Err(Error::DimMismatch {
            expected: ext.dims()[0],
            got: coords.len(),
        });
    }
    let phi = ext.rep(0, coords);
    let k = x.k;
    if phi.blocks()[k].is_zero() {
        return Err(Error::NotSurjective);
    }
    let basis: Vec<Matrix> = phi
        .blocks()
        .iter()
        .zip(h.dims())
        .map(|(p, &d)| if p.rows() == 0 { Matrix::identity(d) } else { p.kernel().matrix() })
        .collect();
    let (sub, incl) = h.submodule(&basis)?;
    let b1 = FramedModule::from_cb(s.clone(), &sub)?;
    if !b1.is_stable() {
        return Err(Error::Unstable);
    }
    let n = s.infinity();
    Ok(HeckePair {
        b1,
        b2: b2.clone(),
        x: x.clone(),
        zeta: incl[..n].to_vec(),
    })
}

/// The tangent space of a simple Hecke correspondence.
#[derive(Clone, Debug)]
pub struct HeckeTangent {
    /// `Ext¹(𝓑¹, 𝓑¹)`.
    pub ext11: ExtData,
    /// `Ext¹(𝓑², 𝓑²)`.
    pub ext22: ExtData,
    /// `Ext¹(𝓑¹, 𝓑²)`.
    pub ext12: ExtData,
    /// Matrix of `(a, b) ↦ [ζ a - b ζ]`, columns indexed by `Ext¹(𝓑¹) ⊕ Ext¹(𝓑²)`.
    pub constraint: Matrix,
    /// The tangent space: `{(a,b) : [ζ a] = [b ζ]}` in class coordinates.
    pub space: Subspace,
    /// Matrix of `dt`, from `Ext¹(𝓑¹) ⊕ Ext¹(𝓑²)` to `L_k`.
    pub dt: Matrix,
    pub k: usize,
}

impl HeckeTangent {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn t1(&self) -> usize {
        self.ext11.dims()[1]
    }

    pub fn t2(&self) -> usize {
        self.ext22.dims()[1]
    }

    /// Split a coordinate vector of `Ext¹(𝓑¹) ⊕ Ext¹(𝓑²)` into its parts.
    pub fn split<'a>(&self, v: &'a [Rational]) -> (&'a [Rational], &'a [Rational]) {
        v.split_at(self.t1())
    }

    pub fn contains(&self, a: &[Rational], b: &[Rational]) -> bool {
        let v: Vec<Rational> = a.iter().chain(b).cloned().collect();
        self.space.contains(&v)
    }

    /// Gram matrix of `s₁Ω¹ ⊕ s₂Ω² ⊕ s₃ω_k` on the graph of `dt` over the tangent space.
    pub fn lagrangian_gram(&self, signs: [i64; 3]) -> Result<Matrix> {
        let q = self.ext11.quiver().clone();
        let o1 = crate::piq::omega_pairing(&self.ext11, &self.ext11, 1)?;
        let o2 = crate::piq::omega_pairing(&self.ext22, &self.ext22, 1)?;
        let w = LoopModule::loop_form(&q, self.k);
        let sc = |s: i64| Rational::from_integer(s.into());
        let form = Matrix::block_diag(&[&o1.scale(&sc(signs[0])), &o2.scale(&sc(signs[1]))]);
        let t = self.space.matrix();
        let dtt = self.dt.mul(&t);
        Ok(t
            .transpose()
            .mul(&form)
            .mul(&t)
            .add(&dtt.transpose().mul(&w.scale(&sc(signs[2]))).mul(&dtt)))
    }

    /// True when the tangent space has half the dimension of
    /// `Ext¹(𝓑¹) ⊕ Ext¹(𝓑²) ⊕ L_k` and is isotropic for [`LAGRANGIAN_SIGNS`].
    pub fn is_lagrangian(&self) -> Result<bool> {
        let total = self.t1() + self.t2() + self.dt.rows();
        Ok(2 * self.dim() == total && self.lagrangian_gram(LAGRANGIAN_SIGNS)?.is_zero())
    }
}

/// Matrix of `a ↦ [ζ ∘ a]` from `Ext¹(𝓑¹,𝓑¹)` to `Ext¹(𝓑¹,𝓑²)`.
pub fn push_matrix(ext11: &ExtData, ext12: &ExtData, zeta_cb: &[Matrix]) -> Result<Matrix> {
    let q = ext11.quiver().clone();
    let z = Rep::Hom(zeta_cb.to_vec());
    let src = ext11.source_dims().to_vec();
    let dst = ext12.target_dims().to_vec();
    ext11.induced_matrix(1, ext12, 1, |a| theta(&q, &src, &dst, a, &z))
}

/// Matrix of `b ↦ [b ∘ ζ]` from `Ext¹(𝓑²,𝓑²)` to `Ext¹(𝓑¹,𝓑²)`.
pub fn pull_matrix(ext22: &ExtData, ext12: &ExtData, zeta_cb: &[Matrix]) -> Result<Matrix> {
    let q = ext22.quiver().clone();
    let z = Rep::Hom(zeta_cb.to_vec());
    let src = ext12.source_dims().to_vec();
    let dst = ext22.target_dims().to_vec();
    ext22.induced_matrix(1, ext12, 1, |b| theta(&q, &src, &dst, &z, b))
}

/// Traces of the loop blocks at `k` of each basis class, as an `L_k x dim Ext¹` matrix.
pub fn loop_trace_matrix(ext: &ExtData, k: usize) -> Matrix {
    let q = ext.quiver().clone();
    let loops = q.doubled_loops_at(k);
    let cols: Vec<Vec<Rational>> = ext
        .basis_reps(1)
        .iter()
        .map(|r| loops.iter().map(|&l| r.blocks()[l].trace()).collect())
        .collect();
    Matrix::from_cols(loops.len(), &cols)
}

/// `dt(a, b) = tr(b_l) - tr(a_l)` on each doubled loop `l` at `k`, on representatives.
pub fn dt_of(q: &crate::quiver::Quiver, a: &Rep, b: &Rep, k: usize) -> Vec<Rational> {
    q.doubled_loops_at(k)
        .iter()
        .map(|&l| b.blocks()[l].trace() - a.blocks()[l].trace())
        .collect()
}

/// Compute the tangent space of a Hecke pair.
pub fn hecke_tangent(pair: &HeckePair) -> Result<HeckeTangent> {
    let g = pair.b1.to_cb();
    let h = pair.b2.to_cb();
    let ext11 = ext_complex_unchecked(&g, &g);
    let ext22 = ext_complex_unchecked(&h, &h);
    let ext12 = ext_complex_unchecked(&g, &h);
    let z = pair.zeta_cb();
    let push = push_matrix(&ext11, &ext12, &z)?;
    let pull = pull_matrix(&ext22, &ext12, &z)?;
    let constraint = Matrix::hstack(ext12.dims()[1], &[&push, &pull.neg()]);
    let space = constraint.kernel();
    let k = pair.x.k;
    let dt = Matrix::hstack(
        2 * pair.setting().base().g(k),
        &[&loop_trace_matrix(&ext11, k).neg(), &loop_trace_matrix(&ext22, k)],
    );
    Ok(HeckeTangent {
        ext11,
        ext22,
        ext12,
        constraint,
        space,
        dt,
        k,
    })
}

/// One step of a random walk.
#[derive(Clone, Debug)]
pub enum WalkStep {
    /// A Hecke modification `𝓑 ⊂_x 𝓑'`.
    Up(Box<HeckePair>),
    /// `Ext¹(x, 𝓑) = 0`, so no modification by `x` exists.
    Skipped { x: LoopModule },
}

/// A seeded sequence of Hecke modifications starting from the empty module.
#[derive(Clone, Debug)]
pub struct Walk {
    pub steps: Vec<WalkStep>,
}

impl Walk {
    /// The stable points visited, starting with the empty module.
    pub fn points(&self) -> Vec<&FramedModule> {
        let mut out = Vec::new();
        for s in &self.steps {
            if let WalkStep::Up(p) = s {
                if out.is_empty() {
                    out.push(&p.b1);
                }
                out.push(&p.b2);
            }
        }
        out
    }

    pub fn pairs(&self) -> impl Iterator<Item = &HeckePair> {
        self.steps.iter().filter_map(|s| match s {
            WalkStep::Up(p) => Some(p.as_ref()),
            WalkStep::Skipped { .. } => None,
        })
    }

    pub fn skipped(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, WalkStep::Skipped { .. })).count()
    }
}

/// Take `steps` attempted modifications from the empty module, each by a
/// loop module at a random vertex with labels drawn from a small palette,
/// using a random nonzero class.
pub fn random_walk<R: Rng>(setting: &Arc<FramedSetting>, steps: usize, rng: &mut R) -> Result<Walk> {
    let q = setting.base().clone();
    let mut current = FramedModule::empty(setting.clone());
    let mut palette: Vec<LoopModule> = Vec::new();
    let mut out = Vec::with_capacity(steps);
    let vertices: Vec<usize> = (0..q.vertex_count()).collect();
    for _ in 0..steps {
        let k = *vertices.choose(rng).expect("quiver has vertices");
        let reuse: Vec<&LoopModule> = palette.iter().filter(|l| l.k == k).collect();
        let x = if !reuse.is_empty() && rng.gen_bool(0.6) {
            (*reuse.choose(rng).expect("nonempty")).clone()
        } else {
            let l = random_loop(&q, k, rng);
            palette.push(l.clone());
            l
        };
        let dim = ext_complex_unchecked(&setting.loop_cb(&x)?, &current.to_cb()).dims()[1];
        if dim == 0 {
            out.push(WalkStep::Skipped { x });
            continue;
        }
        let coords = loop {
            let c = random_coords(dim, rng);
            if c.iter().any(|v| !v.is_zero()) {
                break c;
            }
        };
        let pair = hecke_up(&current, &x, &coords)?;
        current = pair.b2.clone();
        out.push(WalkStep::Up(Box::new(pair)));
    }
    Ok(Walk { steps: out })
}
