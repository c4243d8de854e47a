//! Framed quiver data `(B, i, j)` and its Ext theory.
//!
//! A framed module over `Q` with framing `w` is stored directly as
//! `(B, i, j)`, and converted on demand into a module over the
//! Crawley-Boevey quiver `Q_w` whose extra vertex carries a one-dimensional
//! space: `i` supplies the arrows `∞ → k` (one column per arrow) and `j` the
//! reversed arrows (one row per arrow). The preprojective relation of that
//! module is exactly the moment map equation `ε B B + i j = 0`.

use std::sync::Arc;

use num::Zero;

use crate::error::{Error, Result};
use crate::graded::{compose_ee_eps, Layout};
use crate::linalg::{Cokernel, Matrix, Rational, Subspace};
use crate::piq::{ext_complex_unchecked, ExtData, LoopModule, PiQModule, Subquotient};
use crate::quiver::Quiver;

/// A quiver with a framing vector and its Crawley-Boevey quiver.
#[derive(Debug, PartialEq)]
pub struct FramedSetting {
    base: Arc<Quiver>,
    w: Vec<usize>,
    cb: Arc<Quiver>,
}

impl FramedSetting {
    pub fn new(base: Quiver, w: Vec<usize>) -> Result<Arc<Self>> {
        let cb = Arc::new(base.crawley_boevey(&w)?);
        Ok(Arc::new(FramedSetting {
            base: Arc::new(base),
            w,
            cb,
        }))
    }

    pub fn base(&self) -> &Arc<Quiver> {
        &self.base
    }

    pub fn cb(&self) -> &Arc<Quiver> {
        &self.cb
    }

    pub fn w(&self) -> &[usize] {
        &self.w
    }

    /// Index of the framing vertex in the Crawley-Boevey quiver.
    pub fn infinity(&self) -> usize {
        self.base.vertex_count()
    }

    /// `dim 𝔐(v,w) = 2 v•w - ⟨v,v⟩`.
    pub fn expected_dim(&self, v: &[usize]) -> Result<i64> {
        Ok(2 * Quiver::dot(v, &self.w) - self.base.euler_form(v, v)?)
    }

    /// Loop module `x` viewed over the Crawley-Boevey quiver (zero at `∞`).
    pub fn loop_cb(&self, x: &LoopModule) -> Result<PiQModule> {
        x.module(self.cb.clone())
    }
}

/// A framed module `(B, i, j)` with `ε B B + i j = 0`.
#[derive(Clone, Debug)]
pub struct FramedModule {
    setting: Arc<FramedSetting>,
    v: Vec<usize>,
    b: Vec<Matrix>,
    i: Vec<Matrix>,
    j: Vec<Matrix>,
}

impl PartialEq for FramedModule {
    fn eq(&self, other: &Self) -> bool {
        *self.setting == *other.setting && self.v == other.v && self.b == other.b && self.i == other.i && self.j == other.j
    }
}

fn check_shapes(setting: &FramedSetting, v: &[usize], b: &[Matrix], i: &[Matrix], j: &[Matrix]) -> Result<()> {
    let q = &setting.base;
    if v.len() != q.vertex_count() {
        return Err(Error::DimMismatch {
            expected: q.vertex_count(),
            got: v.len(),
        });
    }
    if !Layout::edge(q, v, v).shapes_match(b) {
        return Err(Error::Shape("B does not match the graded dimension".into()));
    }
    let w = &setting.w;
    if i.len() != v.len() || i.iter().enumerate().any(|(k, m)| m.shape() != (v[k], w[k])) {
        return Err(Error::Shape("i must have blocks of shape v_k x w_k".into()));
    }
    if j.len() != v.len() || j.iter().enumerate().any(|(k, m)| m.shape() != (w[k], v[k])) {
        return Err(Error::Shape("j must have blocks of shape w_k x v_k".into()));
    }
    Ok(())
}

/// `μ(B,i,j) = ε B B + i j`, after checking shapes.
pub fn moment_residual(
    setting: &FramedSetting,
    v: &[usize],
    b: &[Matrix],
    i: &[Matrix],
    j: &[Matrix],
) -> Result<Vec<Matrix>> {
    check_shapes(setting, v, b, i, j)?;
    let ebb = compose_ee_eps(&setting.base, b, b, v, v);
    Ok(ebb.iter().enumerate().map(|(k, m)| m.add(&i[k].mul(&j[k]))).collect())
}

impl FramedModule {
    /// Admit `(B,i,j)` as a framed module; fails on shape errors or a nonzero
    /// moment residual.
    pub fn new(setting: Arc<FramedSetting>, v: Vec<usize>, b: Vec<Matrix>, i: Vec<Matrix>, j: Vec<Matrix>) -> Result<Self> {
        let res = moment_residual(&setting, &v, &b, &i, &j)?;
        if let Some(vertex) = res.iter().position(|m| !m.is_zero()) {
            return Err(Error::MomentNonzero { vertex });
        }
        Ok(FramedModule { setting, v, b, i, j })
    }

    /// The framed module on the zero space.
    pub fn empty(setting: Arc<FramedSetting>) -> Self {
        let n = setting.base.vertex_count();
        let v = vec![0; n];
        let b = Layout::edge(&setting.base, &v, &v).zero_blocks();
        let i = setting.w.iter().map(|&w| Matrix::zeros(0, w)).collect();
        let j = setting.w.iter().map(|&w| Matrix::zeros(w, 0)).collect();
        FramedModule { setting, v, b, i, j }
    }

    pub fn setting(&self) -> &Arc<FramedSetting> {
        &self.setting
    }

    pub fn v(&self) -> &[usize] {
        &self.v
    }

    pub fn b(&self) -> &[Matrix] {
        &self.b
    }

    pub fn i(&self) -> &[Matrix] {
        &self.i
    }

    pub fn j(&self) -> &[Matrix] {
        &self.j
    }

    /// The corresponding module over the Crawley-Boevey quiver.
    pub fn to_cb(&self) -> PiQModule {
        let s = &self.setting;
        let cb = &s.cb;
        let inf = s.infinity();
        let mut dims = self.v.clone();
        dims.push(1);
        let mut blocks = self.b.clone();
        let fr = cb.framing().expect("framed setting carries framing data");
        let mut framing_blocks = vec![None; cb.doubled_count() - blocks.len()];
        for (k, arrows) in fr.arrows.iter().enumerate() {
            for (t, &e) in arrows.iter().enumerate() {
                let idx = 2 * (e - fr.base_edges);
                framing_blocks[idx] = Some(self.i[k].select_cols(&[t]));
                framing_blocks[idx + 1] = Some(self.j[k].select_rows(&[t]));
            }
        }
        blocks.extend(framing_blocks.into_iter().map(|m| m.expect("every framing arrow is filled")));
        debug_assert_eq!(dims.len(), inf + 1);
        PiQModule::new(cb.clone(), dims, blocks).expect("framed data has consistent shapes")
    }

    /// Read a module over the Crawley-Boevey quiver with `dim V_∞ = 1` back as framed data.
    pub fn from_cb(setting: Arc<FramedSetting>, m: &PiQModule) -> Result<Self> {
        let inf = setting.infinity();
        if m.dims().len() != inf + 1 || m.dims()[inf] != 1 {
            return Err(Error::Invalid("module must have a one-dimensional framing vertex".into()));
        }
        let fr = setting.cb.framing().expect("framed setting carries framing data");
        let v = m.dims()[..inf].to_vec();
        let b = m.action()[..2 * fr.base_edges].to_vec();
        let mut i = Vec::with_capacity(inf);
        let mut j = Vec::with_capacity(inf);
        for (k, arrows) in fr.arrows.iter().enumerate() {
            let cols: Vec<Vec<Rational>> = arrows.iter().map(|&e| m.action()[2 * e].col(0)).collect();
            let rows: Vec<Vec<Rational>> = arrows.iter().map(|&e| m.action()[2 * e + 1].row(0).to_vec()).collect();
            i.push(Matrix::from_cols(v[k], &cols));
            j.push(if rows.is_empty() { Matrix::zeros(0, v[k]) } else { Matrix::from_rows(&rows) });
        }
        FramedModule::new(setting, v, b, i, j)
    }

    /// Conjugate by an invertible graded map: `(g B g⁻¹, g i, j g⁻¹)`.
    pub fn conjugate(&self, g: &[Matrix]) -> Result<Self> {
        let q = &self.setting.base;
        let inv: Vec<Matrix> = g
            .iter()
            .map(|m| m.inverse().ok_or_else(|| Error::Invalid("gauge transformation is not invertible".into())))
            .collect::<Result<_>>()?;
        let b = (0..self.b.len()).map(|h| g[q.head(h)].mul(&self.b[h]).mul(&inv[q.tail(h)])).collect();
        let i = self.i.iter().enumerate().map(|(k, m)| g[k].mul(m)).collect();
        let j = self.j.iter().enumerate().map(|(k, m)| m.mul(&inv[k])).collect();
        FramedModule::new(self.setting.clone(), self.v.clone(), b, i, j)
    }

    /// True when no nonzero `B`-invariant graded subspace lies in `ker j`.
    pub fn is_stable(&self) -> bool {
        self.destabilizing_subspace().iter().all(|s| s.dim() == 0)
    }

    /// The largest `B`-invariant graded subspace contained in `ker j`,
    /// found by shrinking `S = ker j` until `B_h S_{tail h} ⊂ S_{head h}`.
    pub fn destabilizing_subspace(&self) -> Vec<Subspace> {
        let q = &self.setting.base;
        let mut s: Vec<Subspace> = self.j.iter().map(Matrix::kernel).collect();
        loop {
            let mut changed = false;
            for h in 0..q.doubled_count() {
                let (t, hd) = (q.tail(h), q.head(h));
                let allowed = s[hd].preimage(&self.b[h]);
                let next = s[t].intersect(&allowed);
                if next.dim() < s[t].dim() {
                    s[t] = next;
                    changed = true;
                }
            }
            if !changed {
                return s;
            }
        }
    }

    /// Trace of `B` on each doubled loop at `k`.
    pub fn loop_traces(&self, k: usize) -> Vec<Rational> {
        self.setting.base.doubled_loops_at(k).iter().map(|&h| self.b[h].trace()).collect()
    }
}

/// The framed deformation complex of a pair and its cohomology.
///
/// The middle term is `E(V¹,V²) ⊕ I(W,V²) ⊕ I(V¹,W)`, identified with the
/// edge space of the Crawley-Boevey pair; the outer terms are `I(V¹,V²)`.
#[derive(Clone, Debug)]
pub struct FramedExtData {
    /// The Ext complex of the associated Crawley-Boevey modules.
    pub cb: ExtData,
    /// Framed `σ`: columns of the Crawley-Boevey `σ` away from the framing vertex.
    pub sigma: Matrix,
    /// Framed `τ`: rows of the Crawley-Boevey `τ` away from the framing vertex.
    pub tau: Matrix,
    /// `T = ker τ / im σ`.
    pub t: Subquotient,
    /// The vector `s¹ = (0, -i², j¹)` in the middle term.
    pub s1: Vec<Rational>,
    /// The covector `s²`: the framing-vertex component of the Crawley-Boevey `τ`.
    pub s2: Vec<Rational>,
}

impl FramedExtData {
    pub fn t_dim(&self) -> usize {
        self.t.dim()
    }

    pub fn sigma_injective(&self) -> bool {
        self.sigma.rank() == self.sigma.cols()
    }

    pub fn tau_surjective(&self) -> bool {
        self.tau.rank() == self.tau.rows()
    }

    /// Ext dimensions read off from `s¹: ℂ → T` and `s²: T → ℂ`:
    /// `Ext⁰ = ker s¹`, `Ext¹ = ker s² / im s¹`, `Ext² = coker s²`.
    pub fn ext_dims_via_t(&self) -> [usize; 3] {
        let s1_zero = self.t.is_zero_class(&self.s1);
        let s2_zero = self.t.reps().iter().all(|r| crate::linalg::dot(&self.s2, r).is_zero());
        let e0 = usize::from(s1_zero);
        let e2 = usize::from(s2_zero);
        let im_s1 = 1 - e0;
        let ker_s2 = self.t.dim() - (1 - e2);
        [e0, ker_s2 - im_s1, e2]
    }

    /// Euler characteristic of the framed complex, `dim I - dim middle + dim I`.
    pub fn euler_characteristic(&self) -> i64 {
        let i = self.sigma.cols() as i64;
        2 * i - self.sigma.rows() as i64
    }
}

/// Framed deformation complex of `(𝓑¹, 𝓑²)`.
pub fn framed_ext(b1: &FramedModule, b2: &FramedModule) -> Result<FramedExtData> {
    if *b1.setting != *b2.setting {
        return Err(Error::Invalid("framed modules over different settings".into()));
    }
    let cb = ext_complex_unchecked(&b1.to_cb(), &b2.to_cb());
    let il = cb.vertex_layout();
    let inf_col = il.total() - 1;
    let keep_cols: Vec<usize> = (0..inf_col).collect();
    let sigma = cb.sigma().select_cols(&keep_cols);
    let tau = cb.tau().select_rows(&keep_cols);
    let s1: Vec<Rational> = cb.sigma().col(inf_col).iter().map(|x| -x.clone()).collect();
    let s2 = cb.tau().row(inf_col).to_vec();
    let (k, _) = tau.kernel_and_image();
    let t = Subquotient::new(k, sigma.image());
    Ok(FramedExtData {
        cb,
        sigma,
        tau,
        t,
        s1,
        s2,
    })
}

/// The inclusion `ζ: V¹ → V²` with `ζ B¹ = B² ζ`, `ζ i¹ = i²`, `j² ζ = j¹`,
/// if one exists. Fails when a solution exists but is not unique or not
/// injective, which cannot happen for stable modules.
pub fn find_inclusion(b1: &FramedModule, b2: &FramedModule) -> Result<Option<Vec<Matrix>>> {
    let data = framed_ext(b1, b2)?;
    let hom = data.cb.ext(0).reps().to_vec();
    let last = data.cb.vertex_layout().total() - 1;
    let Some(v) = hom.iter().find(|v| !v[last].is_zero()) else {
        return Ok(None);
    };
    if !data.sigma_injective() {
        return Err(Error::Invalid("inclusion is not unique".into()));
    }
    let scale = v[last].recip();
    let v: Vec<Rational> = v.iter().map(|x| x * &scale).collect();
    let blocks = data.cb.vertex_layout().unflatten(&v);
    let zeta: Vec<Matrix> = blocks[..last_vertex(b1)].to_vec();
    if zeta.iter().any(|z| z.rank() != z.cols()) {
        return Err(Error::Invalid("inclusion is not injective".into()));
    }
    Ok(Some(zeta))
}

fn last_vertex(b: &FramedModule) -> usize {
    b.setting.infinity()
}

/// An invertible `g` with `g · 𝓑¹ = 𝓑²`, if the two framed modules are
/// gauge equivalent. Both modules are expected to be stable.
pub fn gauge_equivalence(b1: &FramedModule, b2: &FramedModule) -> Result<Option<Vec<Matrix>>> {
    if b1.v != b2.v {
        return Ok(None);
    }
    Ok(find_inclusion(b1, b2)?.filter(|z| z.iter().all(|m| m.inverse().is_some())))
}

/// The universal complex at a loop module: `U = coker σ(x,𝓑)` and the map
/// `u: U → I(x,𝓑)` induced by `τ(x,𝓑)`.
#[derive(Clone, Debug)]
pub struct UniversalComplexData {
    pub ext: ExtData,
    /// Projection of the middle term onto `U` (complement coordinates).
    pub u_space: Cokernel,
    /// `u` as a matrix from `U` coordinates to `I(x,𝓑)`.
    pub u: Matrix,
    /// Kernel of `u` in `U` coordinates.
    pub kernel: Subspace,
    pub coker_dim: usize,
}

impl UniversalComplexData {
    pub fn kernel_dim(&self) -> usize {
        self.kernel.dim()
    }

    /// Lift a kernel vector of `u` to an Ext¹ cocycle in the middle term.
    pub fn lift(&self, coords: &[Rational]) -> Vec<Rational> {
        self.u_space.lift(coords)
    }
}

/// Build the universal complex of `x` against a stable framed module.
pub fn universal_complex(x: &LoopModule, b: &FramedModule) -> Result<UniversalComplexData> {
    if !b.is_stable() {
        return Err(Error::Unstable);
    }
    let xm = b.setting.loop_cb(x)?;
    let ext = ext_complex_unchecked(&xm, &b.to_cb());
    if ext.sigma().rank() != ext.sigma().cols() {
        return Err(Error::Invalid("sigma(x, B) is not injective".into()));
    }
    let u_space = ext.sigma().cokernel();
    let section = Matrix::identity(u_space.ambient).select_cols(&u_space.complement);
    let u = ext.tau().mul(&section);
    let (kernel, image) = u.kernel_and_image();
    let coker_dim = u.rows() - image.dim();
    Ok(UniversalComplexData {
        ext,
        u_space,
        u,
        kernel,
        coker_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::blocks_are_zero;
    use crate::linalg::q;

    fn jordan(w: usize) -> Arc<FramedSetting> {
        FramedSetting::new(Quiver::jordan(), vec![w]).unwrap()
    }

    fn point(setting: &Arc<FramedSetting>, a: i64, b: i64) -> FramedModule {
        FramedModule::new(
            setting.clone(),
            vec![1],
            vec![Matrix::from_i64(1, 1, &[a]), Matrix::from_i64(1, 1, &[b])],
            vec![Matrix::zeros(1, 1)],
            vec![Matrix::from_i64(1, 1, &[1])],
        )
        .unwrap()
    }

    #[test]
    fn moment_residual_examples() {
        let s = jordan(1);
        let b = vec![Matrix::from_i64(1, 1, &[3]), Matrix::from_i64(1, 1, &[5])];
        let r = moment_residual(&s, &[1], &b, &[Matrix::zeros(1, 1)], &[Matrix::from_i64(1, 1, &[1])]).unwrap();
        assert!(blocks_are_zero(&r));
        let r = moment_residual(&s, &[1], &b, &[Matrix::from_i64(1, 1, &[1])], &[Matrix::from_i64(1, 1, &[1])]).unwrap();
        assert_eq!(r[0], Matrix::from_i64(1, 1, &[1]));
        assert!(FramedModule::new(s.clone(), vec![1], b, vec![Matrix::from_i64(1, 1, &[1])], vec![Matrix::from_i64(1, 1, &[1])]).is_err());
        assert!(FramedModule::empty(s).is_stable());
    }

    #[test]
    fn stability_examples() {
        let s = jordan(1);
        assert!(point(&s, 3, 5).is_stable());
        let unstable = FramedModule::new(
            s.clone(),
            vec![1],
            vec![Matrix::from_i64(1, 1, &[3]), Matrix::from_i64(1, 1, &[5])],
            vec![Matrix::zeros(1, 1)],
            vec![Matrix::zeros(1, 1)],
        )
        .unwrap();
        assert!(!unstable.is_stable());
        // Nilpotent B_e with invariant line e_1; j kills exactly that line.
        let nil = FramedModule::new(
            s,
            vec![2],
            vec![Matrix::from_i64(2, 2, &[0, 1, 0, 0]), Matrix::zeros(2, 2)],
            vec![Matrix::zeros(2, 1)],
            vec![Matrix::from_i64(1, 2, &[0, 1])],
        )
        .unwrap();
        assert!(!nil.is_stable());
        assert_eq!(nil.destabilizing_subspace()[0].dim(), 1);
    }

    #[test]
    fn cb_round_trip() {
        let s = FramedSetting::new(Quiver::a2(), vec![2, 1]).unwrap();
        let f = FramedModule::empty(s.clone());
        let back = FramedModule::from_cb(s, &f.to_cb()).unwrap();
        assert_eq!(f, back);
    }

    #[test]
    fn tangent_of_a_point() {
        let s = jordan(1);
        let p = point(&s, 3, 5);
        let d = framed_ext(&p, &p).unwrap();
        assert_eq!(d.t_dim(), 2);
        assert_eq!(s.expected_dim(&[1]).unwrap(), 2);
        assert_eq!(d.cb.dims(), [1, 2, 1]);
        assert_eq!(d.ext_dims_via_t(), [1, 2, 1]);
        assert_eq!(find_inclusion(&p, &p).unwrap().unwrap(), vec![Matrix::identity(1)]);
        assert!(find_inclusion(&p, &point(&s, 3, 4)).unwrap().is_none());
    }

    #[test]
    fn universal_complex_at_the_empty_module() {
        let s = jordan(2);
        let u = universal_complex(&LoopModule::new(0, vec![q(1), q(4)]), &FramedModule::empty(s)).unwrap();
        assert!(u.u.is_zero());
        assert_eq!(u.kernel_dim(), 2);
        assert_eq!(u.coker_dim, 0);
    }
}
