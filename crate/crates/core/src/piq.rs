//! Modules over the preprojective algebra and their Ext calculus.
//!
//! `Ext^•(G,H)` is the cohomology of the three-term complex
//! `I(G,H) --σ--> E(G,H) --τ--> I(G,H)` with
//! `σ(ζ) = B_H ζ - ζ B_G` and `τ(J) = ε B_H J + ε J B_G`.

use std::sync::{Arc, OnceLock};

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::graded::{
    add_blocks, blocks_are_zero, compose_ee_eps, compose_ei, compose_ie, compose_ii, identity_blocks, scale_blocks,
    sub_blocks, total_trace, Layout,
};
use crate::linalg::{is_zero_vec, Cokernel, Matrix, Rational, Subspace};
use crate::quiver::Quiver;

/// A finite-dimensional module over the preprojective algebra: a graded
/// space with one matrix per doubled edge satisfying `ε B B = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiQModule {
    quiver: Arc<Quiver>,
    dims: Vec<usize>,
    b: Vec<Matrix>,
}

impl PiQModule {
    /// Wrap data after checking block shapes. The preprojective relation is
    /// not enforced here; see [`PiQModule::is_valid`].
    pub fn new(quiver: Arc<Quiver>, dims: Vec<usize>, b: Vec<Matrix>) -> Result<Self> {
        if dims.len() != quiver.vertex_count() {
            return Err(Error::DimMismatch {
                expected: quiver.vertex_count(),
                got: dims.len(),
            });
        }
        let layout = Layout::edge(&quiver, &dims, &dims);
        if !layout.shapes_match(&b) {
            return Err(Error::Shape("edge matrices do not match the graded dimension".into()));
        }
        Ok(PiQModule { quiver, dims, b })
    }

    /// The module with all arrows acting by zero.
    pub fn zero_action(quiver: Arc<Quiver>, dims: Vec<usize>) -> Self {
        let b = Layout::edge(&quiver, &dims, &dims).zero_blocks();
        PiQModule { quiver, dims, b }
    }

    /// One-dimensional module at `k` with loop coordinates `x`, indexed by
    /// [`Quiver::doubled_loops_at`].
    pub fn loop_module(quiver: Arc<Quiver>, k: usize, x: &[Rational]) -> Result<Self> {
        let loops = quiver.doubled_loops_at(k);
        if x.len() != loops.len() {
            return Err(Error::Invalid(format!(
                "loop module at vertex {k} needs {} coordinates, got {}",
                loops.len(),
                x.len()
            )));
        }
        let dims = quiver.delta(k);
        let mut m = Self::zero_action(quiver, dims);
        for (h, xi) in loops.iter().zip(x) {
            m.b[*h] = Matrix::from_vec(1, 1, vec![xi.clone()]);
        }
        Ok(m)
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn action(&self) -> &[Matrix] {
        &self.b
    }

    /// `ε B B ∈ I(H,H)`.
    pub fn relation(&self) -> Vec<Matrix> {
        compose_ee_eps(&self.quiver, &self.b, &self.b, &self.dims, &self.dims)
    }

    /// True when the preprojective relation holds at every vertex.
    pub fn is_valid(&self) -> bool {
        blocks_are_zero(&self.relation())
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        match self.relation().iter().position(|m| !m.is_zero()) {
            Some(vertex) => Err(Error::RelationViolated { vertex }),
            None => Ok(()),
        }
    }

    /// Trace of the action on each doubled loop at `k`.
    pub fn loop_traces(&self, k: usize) -> Vec<Rational> {
        self.quiver.doubled_loops_at(k).iter().map(|&h| self.b[h].trace()).collect()
    }

    pub fn direct_sum(&self, other: &PiQModule) -> PiQModule {
        assert!(same_quiver(self, other), "direct sum over different quivers");
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let b = self.b.iter().zip(&other.b).map(|(x, y)| Matrix::block_diag(&[x, y])).collect();
        PiQModule {
            quiver: self.quiver.clone(),
            dims,
            b,
        }
    }

    /// `g B g⁻¹` for an invertible graded map `g`.
    pub fn conjugate(&self, g: &[Matrix]) -> Result<PiQModule> {
        let inv: Vec<Matrix> = g
            .iter()
            .map(|m| m.inverse().ok_or_else(|| Error::Invalid("gauge transformation is not invertible".into())))
            .collect::<Result<_>>()?;
        let b = (0..self.b.len())
            .map(|h| g[self.quiver.head(h)].mul(&self.b[h]).mul(&inv[self.quiver.tail(h)]))
            .collect();
        Ok(PiQModule {
            quiver: self.quiver.clone(),
            dims: self.dims.clone(),
            b,
        })
    }

    /// The submodule spanned by the columns of `basis[k]` at each vertex,
    /// with its inclusion map. Fails when the span is not invariant or the
    /// columns are dependent.
    pub fn submodule(&self, basis: &[Matrix]) -> Result<(PiQModule, Vec<Matrix>)> {
        let lefts: Vec<Matrix> = basis
            .iter()
            .map(|s| s.left_inverse().ok_or_else(|| Error::Invalid("submodule basis is dependent".into())))
            .collect::<Result<_>>()?;
        let q = &self.quiver;
        let mut b = Vec::with_capacity(self.b.len());
        for h in 0..self.b.len() {
            let image = self.b[h].mul(&basis[q.tail(h)]);
            let coords = lefts[q.head(h)].mul(&image);
            if basis[q.head(h)].mul(&coords) != image {
                return Err(Error::Invalid("subspace is not invariant under the action".into()));
            }
            b.push(coords);
        }
        let dims = basis.iter().map(Matrix::cols).collect();
        Ok((
            PiQModule {
                quiver: self.quiver.clone(),
                dims,
                b,
            },
            basis.to_vec(),
        ))
    }

    /// Quotient by the (invariant) span of `basis`, with the projection map.
    pub fn quotient(&self, basis: &[Matrix]) -> Result<(PiQModule, Vec<Matrix>)> {
        let q = &self.quiver;
        let subspaces: Vec<Subspace> = basis
            .iter()
            .zip(&self.dims)
            .map(|(s, &d)| Subspace::span(d, &s.col_vectors()))
            .collect();
        for h in 0..self.b.len() {
            let moved = subspaces[q.tail(h)].map(&self.b[h]);
            if !moved.is_subspace_of(&subspaces[q.head(h)]) {
                return Err(Error::Invalid("subspace is not invariant under the action".into()));
            }
        }
        let cokernels: Vec<Cokernel> = subspaces.iter().map(Cokernel::of_subspace).collect();
        let sections: Vec<Matrix> = cokernels
            .iter()
            .map(|c| Matrix::identity(c.ambient).select_cols(&c.complement))
            .collect();
        let b = (0..self.b.len())
            .map(|h| cokernels[q.head(h)].projection.mul(&self.b[h]).mul(&sections[q.tail(h)]))
            .collect();
        let dims = cokernels.iter().map(Cokernel::dim).collect();
        let proj = cokernels.iter().map(|c| c.projection.clone()).collect();
        Ok((
            PiQModule {
                quiver: self.quiver.clone(),
                dims,
                b,
            },
            proj,
        ))
    }
}

/// A one-dimensional module at vertex `k`, described by its loop coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LoopModule {
    pub k: usize,
    /// One coordinate per doubled loop at `k`, in [`Quiver::doubled_loops_at`] order.
    pub x: Vec<Rational>,
}

impl LoopModule {
    pub fn new(k: usize, x: Vec<Rational>) -> Self {
        LoopModule { k, x }
    }

    /// The loop module over `quiver`. Extra vertices of `quiver` (such as a
    /// framing vertex) get dimension zero.
    pub fn module(&self, quiver: Arc<Quiver>) -> Result<PiQModule> {
        PiQModule::loop_module(quiver, self.k, &self.x)
    }

    /// `ω_k(x¹, x²) = Σ_l ε(l) x¹_l x²_{l̄}` as a matrix in loop coordinates.
    pub fn loop_form(quiver: &Quiver, k: usize) -> Matrix {
        let loops = quiver.doubled_loops_at(k);
        let mut m = Matrix::zeros(loops.len(), loops.len());
        for (a, &l) in loops.iter().enumerate() {
            let b = loops.iter().position(|&h| h == Quiver::bar(l)).expect("loops come in pairs");
            m.set(a, b, Rational::from_integer(quiver.eps(l).into()));
        }
        m
    }
}

/// True when the preprojective relation holds at every vertex.
pub fn check_module(m: &PiQModule) -> bool {
    m.is_valid()
}

pub(crate) fn same_quiver(a: &PiQModule, b: &PiQModule) -> bool {
    Arc::ptr_eq(&a.quiver, &b.quiver) || *a.quiver == *b.quiver
}

/// `σ(G,H)(ζ) = B_H ζ - ζ B_G`, evaluated blockwise.
pub fn sigma_apply(g: &PiQModule, h: &PiQModule, zeta: &[Matrix]) -> Vec<Matrix> {
    let q = &g.quiver;
    sub_blocks(&compose_ei(q, &h.b, zeta), &compose_ie(q, zeta, &g.b))
}

/// `τ(G,H)(J) = ε B_H J + ε J B_G`, evaluated blockwise.
pub fn tau_apply(g: &PiQModule, h: &PiQModule, j: &[Matrix]) -> Vec<Matrix> {
    let q = &g.quiver;
    add_blocks(
        &compose_ee_eps(q, &h.b, j, &g.dims, &h.dims),
        &compose_ee_eps(q, j, &g.b, &g.dims, &h.dims),
    )
}

/// Matrix of `σ(G,H)` in flattened coordinates (rows: `E(G,H)`, columns: `I(G,H)`).
fn sigma_matrix(q: &Quiver, g: &PiQModule, h: &PiQModule, il: &Layout, el: &Layout) -> Matrix {
    let mut m = Matrix::zeros(el.total(), il.total());
    for e in 0..q.doubled_count() {
        let (t, s) = (q.tail(e), q.head(e));
        // B_H,e ζ_t : unit ζ_t = E_rc contributes B_H,e[i, r] at (i, c).
        for r in 0..h.dims[t] {
            for c in 0..g.dims[t] {
                let col = il.index(t, r, c);
                for i in 0..h.dims[s] {
                    let x = h.b[e].get(i, r);
                    if !x.is_zero() {
                        *m.entry_mut(el.index(e, i, c), col) += x;
                    }
                }
            }
        }
        // -ζ_s B_G,e : unit ζ_s = E_rc contributes -B_G,e[c, j] at (r, j).
        for r in 0..h.dims[s] {
            for c in 0..g.dims[s] {
                let col = il.index(s, r, c);
                for j in 0..g.dims[t] {
                    let x = g.b[e].get(c, j);
                    if !x.is_zero() {
                        *m.entry_mut(el.index(e, r, j), col) -= x;
                    }
                }
            }
        }
    }
    m
}

/// Matrix of `τ(G,H)` in flattened coordinates (rows: `I(G,H)`, columns: `E(G,H)`).
fn tau_matrix(q: &Quiver, g: &PiQModule, h: &PiQModule, il: &Layout, el: &Layout) -> Matrix {
    let mut m = Matrix::zeros(il.total(), el.total());
    for e in 0..q.doubled_count() {
        let (t, s) = (q.tail(e), q.head(e));
        let eb = Quiver::bar(e);
        let (eps_e, eps_bar) = (q.eps(e), q.eps(eb));
        for r in 0..h.dims[s] {
            for c in 0..g.dims[t] {
                let col = el.index(e, r, c);
                // ε(ē) B_H,ē J_e lands at vertex t: entry (i, c) gets B_H,ē[i, r].
                for i in 0..h.dims[t] {
                    let x = h.b[eb].get(i, r);
                    if !x.is_zero() {
                        let cell = m.entry_mut(il.index(t, i, c), col);
                        if eps_bar > 0 {
                            *cell += x;
                        } else {
                            *cell -= x;
                        }
                    }
                }
                // ε(e) J_e B_G,ē lands at vertex s: entry (r, j) gets B_G,ē[c, j].
                for j in 0..g.dims[s] {
                    let x = g.b[eb].get(c, j);
                    if !x.is_zero() {
                        let cell = m.entry_mut(il.index(s, r, j), col);
                        if eps_e > 0 {
                            *cell += x;
                        } else {
                            *cell -= x;
                        }
                    }
                }
            }
        }
    }
    m
}

/// A subquotient `Z / B` of a coordinate space, with `B ⊂ Z`.
///
/// Class representatives are chosen from a basis of `Z` by the pivot rule
/// applied to `[basis(B) | basis(Z)]`; class coordinates are read off with a
/// left inverse of `[basis(B) | reps]`.
#[derive(Clone, Debug)]
pub struct Subquotient {
    cycles: Subspace,
    boundaries: Subspace,
    cache: OnceLock<(Vec<Vec<Rational>>, Matrix, Matrix)>,
}

impl Subquotient {
    pub fn new(cycles: Subspace, boundaries: Subspace) -> Self {
        Subquotient {
            cycles,
            boundaries,
            cache: OnceLock::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.cycles.dim() - self.boundaries.dim()
    }

    pub fn ambient(&self) -> usize {
        self.cycles.ambient()
    }

    pub fn cycles(&self) -> &Subspace {
        &self.cycles
    }

    pub fn boundaries(&self) -> &Subspace {
        &self.boundaries
    }

    fn data(&self) -> &(Vec<Vec<Rational>>, Matrix, Matrix) {
        self.cache.get_or_init(|| {
            let n = self.ambient();
            let nb = self.boundaries.dim();
            let bm = self.boundaries.matrix();
            let zm = self.cycles.matrix();
            let pivots = Matrix::hstack(n, &[&bm, &zm]).rref().pivots;
            let reps: Vec<Vec<Rational>> =
                pivots.iter().filter(|&&p| p >= nb).map(|&p| self.cycles.vectors()[p - nb].clone()).collect();
            let mut all = self.boundaries.vectors().to_vec();
            all.extend(reps.iter().cloned());
            let full = Matrix::from_cols(n, &all);
            let left = full.left_inverse().expect("boundaries and representatives are independent");
            (reps, full, left)
        })
    }

    /// Chosen representatives of a basis of the subquotient.
    pub fn reps(&self) -> &[Vec<Rational>] {
        &self.data().0
    }

    /// Class coordinates of `v`, or `None` when `v` is not a cycle.
    pub fn coords(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        let (_, full, left) = self.data();
        let y = left.mul_vec(v);
        if full.mul_vec(&y) != v {
            return None;
        }
        Some(y[self.boundaries.dim()..].to_vec())
    }

    /// Representative of the class with the given coordinates.
    pub fn rep(&self, coords: &[Rational]) -> Vec<Rational> {
        let reps = self.reps();
        assert_eq!(coords.len(), reps.len(), "class coordinates have the wrong length");
        let mut v = vec![Rational::zero(); self.ambient()];
        for (c, r) in coords.iter().zip(reps) {
            if c.is_zero() {
                continue;
            }
            for (vi, ri) in v.iter_mut().zip(r) {
                *vi += c * ri;
            }
        }
        v
    }

    pub fn is_zero_class(&self, v: &[Rational]) -> bool {
        is_zero_vec(v) || self.boundaries.contains(v)
    }
}

/// A homogeneous representative of an Ext class: degree 0 and 2 live in
/// `I(G,H)`, degree 1 in `E(G,H)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Rep {
    Hom(Vec<Matrix>),
    Ext1(Vec<Matrix>),
    Ext2(Vec<Matrix>),
}

impl Rep {
    pub fn degree(&self) -> usize {
        match self {
            Rep::Hom(_) => 0,
            Rep::Ext1(_) => 1,
            Rep::Ext2(_) => 2,
        }
    }

    pub fn blocks(&self) -> &[Matrix] {
        match self {
            Rep::Hom(b) | Rep::Ext1(b) | Rep::Ext2(b) => b,
        }
    }

    pub fn of_degree(deg: usize, blocks: Vec<Matrix>) -> Rep {
        match deg {
            0 => Rep::Hom(blocks),
            1 => Rep::Ext1(blocks),
            _ => Rep::Ext2(blocks),
        }
    }

    pub fn scaled(&self, s: &Rational) -> Rep {
        Rep::of_degree(self.degree(), scale_blocks(self.blocks(), s))
    }
}

/// Yoneda-type composition `θ: Ext^i(G,H) ⊗ Ext^j(H,K) → Ext^{i+j}(G,K)` on
/// representatives. `g_dims` and `k_dims` are the dimensions of `G` and `K`.
pub fn theta(q: &Quiver, g_dims: &[usize], k_dims: &[usize], a: &Rep, b: &Rep) -> Result<Rep> {
    Ok(match (a, b) {
        (Rep::Hom(z1), Rep::Hom(z2)) => Rep::Hom(compose_ii(z2, z1)),
        (Rep::Hom(z), Rep::Ext1(j)) => Rep::Ext1(compose_ei(q, j, z)),
        (Rep::Ext1(j), Rep::Hom(z)) => Rep::Ext1(compose_ie(q, z, j)),
        (Rep::Hom(z), Rep::Ext2(c)) => Rep::Ext2(compose_ii(c, z)),
        (Rep::Ext2(c), Rep::Hom(z)) => Rep::Ext2(compose_ii(z, c)),
        (Rep::Ext1(j1), Rep::Ext1(j2)) => {
            Rep::Ext2(scale_blocks(&compose_ee_eps(q, j2, j1, g_dims, k_dims), &-Rational::one()))
        }
        _ => return Err(Error::DegreeTooLarge(a.degree() + b.degree())),
    })
}

/// The Ext complex of a pair of modules with chosen bases of its cohomology.
#[derive(Clone, Debug)]
pub struct ExtData {
    quiver: Arc<Quiver>,
    g_dims: Vec<usize>,
    h_dims: Vec<usize>,
    ilayout: Layout,
    elayout: Layout,
    sigma: Matrix,
    tau: Matrix,
    ext: [Subquotient; 3],
}

/// Build the Ext complex of `(G, H)`.
pub fn ext_complex(g: &PiQModule, h: &PiQModule) -> Result<ExtData> {
    if !same_quiver(g, h) {
        return Err(Error::Invalid("modules over different quivers".into()));
    }
    g.ensure_valid()?;
    h.ensure_valid()?;
    Ok(ext_complex_unchecked(g, h))
}

pub(crate) fn ext_complex_unchecked(g: &PiQModule, h: &PiQModule) -> ExtData {
    let q = g.quiver.clone();
    let il = Layout::vertex(&g.dims, &h.dims);
    let el = Layout::edge(&q, &g.dims, &h.dims);
    let sigma = sigma_matrix(&q, g, h, &il, &el);
    let tau = tau_matrix(&q, g, h, &il, &el);
    let (sigma_ker, sigma_im) = sigma.kernel_and_image();
    let (tau_ker, tau_im) = tau.kernel_and_image();
    let ext0 = Subquotient::new(sigma_ker, Subspace::zero(il.total()));
    let ext1 = Subquotient::new(tau_ker, sigma_im);
    let ext2 = Subquotient::new(Subspace::full(il.total()), tau_im);
    ExtData {
        quiver: q,
        g_dims: g.dims.clone(),
        h_dims: h.dims.clone(),
        ilayout: il,
        elayout: el,
        sigma,
        tau,
        ext: [ext0, ext1, ext2],
    }
}

impl ExtData {
    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn source_dims(&self) -> &[usize] {
        &self.g_dims
    }

    pub fn target_dims(&self) -> &[usize] {
        &self.h_dims
    }

    pub fn sigma(&self) -> &Matrix {
        &self.sigma
    }

    pub fn tau(&self) -> &Matrix {
        &self.tau
    }

    pub fn vertex_layout(&self) -> &Layout {
        &self.ilayout
    }

    pub fn edge_layout(&self) -> &Layout {
        &self.elayout
    }

    pub fn layout(&self, deg: usize) -> &Layout {
        if deg == 1 {
            &self.elayout
        } else {
            &self.ilayout
        }
    }

    pub fn ext(&self, deg: usize) -> &Subquotient {
        &self.ext[deg]
    }

    /// `(dim Ext⁰, dim Ext¹, dim Ext²)`.
    pub fn dims(&self) -> [usize; 3] {
        [self.ext[0].dim(), self.ext[1].dim(), self.ext[2].dim()]
    }

    /// `dim Ext⁰ - dim Ext¹ + dim Ext²`.
    pub fn euler_characteristic(&self) -> i64 {
        let [a, b, c] = self.dims();
        a as i64 - b as i64 + c as i64
    }

    /// Representative of the class with coordinates `coords` in degree `deg`.
    pub fn rep(&self, deg: usize, coords: &[Rational]) -> Rep {
        let v = self.ext[deg].rep(coords);
        Rep::of_degree(deg, self.layout(deg).unflatten(&v))
    }

    /// Representatives of the chosen basis in degree `deg`.
    pub fn basis_reps(&self, deg: usize) -> Vec<Rep> {
        self.ext[deg]
            .reps()
            .iter()
            .map(|v| Rep::of_degree(deg, self.layout(deg).unflatten(v)))
            .collect()
    }

    pub fn flatten(&self, r: &Rep) -> Vec<Rational> {
        self.layout(r.degree()).flatten(r.blocks())
    }

    /// Class coordinates of a representative; fails when it is not a cocycle.
    pub fn coords(&self, r: &Rep) -> Result<Vec<Rational>> {
        self.ext[r.degree()].coords(&self.flatten(r)).ok_or(Error::NotClosed)
    }

    pub fn is_zero_class(&self, r: &Rep) -> bool {
        self.ext[r.degree()].is_zero_class(&self.flatten(r))
    }

    /// Matrix of a linear map from `Ext^deg(self)` into `Ext^{target_deg}(target)`,
    /// given on representatives.
    pub fn induced_matrix(
        &self,
        deg: usize,
        target: &ExtData,
        target_deg: usize,
        f: impl Fn(&Rep) -> Result<Rep>,
    ) -> Result<Matrix> {
        let cols: Vec<Vec<Rational>> = self
            .basis_reps(deg)
            .iter()
            .map(|r| {
                let img = f(r)?;
                debug_assert_eq!(img.degree(), target_deg);
                target.coords(&img)
            })
            .collect::<Result<_>>()?;
        Ok(Matrix::from_cols(target.dims()[target_deg], &cols))
    }
}

/// A basis of `Hom(G,H)`, the kernel of `σ(G,H)`.
pub fn hom_space(g: &PiQModule, h: &PiQModule) -> Result<Vec<Vec<Matrix>>> {
    let data = ext_complex(g, h)?;
    Ok(data
        .ext(0)
        .reps()
        .iter()
        .map(|v| data.vertex_layout().unflatten(v))
        .collect())
}

/// Pairing matrix `tr θ(a ⊗ b)` between `Ext^l(G,H)` (rows) and
/// `Ext^{2-l}(H,G)` (columns).
pub fn omega_pairing(gh: &ExtData, hg: &ExtData, l: usize) -> Result<Matrix> {
    if l > 2 {
        return Err(Error::DegreeTooLarge(l));
    }
    let q = gh.quiver.clone();
    let a = gh.basis_reps(l);
    let b = hg.basis_reps(2 - l);
    let mut m = Matrix::zeros(a.len(), b.len());
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            let c = theta(&q, &gh.g_dims, &gh.g_dims, ai, bj)?;
            m.set(i, j, total_trace(c.blocks()));
        }
    }
    Ok(m)
}

/// True when `tr(τ(G,H)(J) ξ) = tr(ε J σ(H,G)(ξ))` for all `J ∈ E(G,H)`,
/// `ξ ∈ I(H,G)`, checked as a matrix identity over the coordinate bases.
pub fn duality_holds(gh: &ExtData, hg: &ExtData) -> bool {
    let q = &gh.quiver;
    // Trace pairing between I(G,H) and I(H,G): entry (r,c) of block k meets (c,r).
    let il = &gh.ilayout;
    let il2 = &hg.ilayout;
    let mut pi = Matrix::zeros(il.total(), il2.total());
    for k in 0..il.blocks() {
        let (r_n, c_n) = il.shape(k);
        for r in 0..r_n {
            for c in 0..c_n {
                pi.set(il.index(k, r, c), il2.index(k, c, r), Rational::one());
            }
        }
    }
    // tr(ε J X) = Σ_h ε(h) tr(J_h X_h̄) between E(G,H) and E(H,G).
    let el = &gh.elayout;
    let el2 = &hg.elayout;
    let mut pe = Matrix::zeros(el.total(), el2.total());
    for h in 0..el.blocks() {
        let hb = Quiver::bar(h);
        let (r_n, c_n) = el.shape(h);
        let s = Rational::from_integer(q.eps(h).into());
        for r in 0..r_n {
            for c in 0..c_n {
                pe.set(el.index(h, r, c), el2.index(hb, c, r), s.clone());
            }
        }
    }
    gh.tau.transpose().mul(&pi) == pe.mul(&hg.sigma)
}

/// A short exact sequence `0 → G → H → K → 0` of modules.
#[derive(Clone, Debug)]
pub struct ShortExact {
    pub g: PiQModule,
    pub h: PiQModule,
    pub k: PiQModule,
    /// Inclusion `G → H`.
    pub incl: Vec<Matrix>,
    /// Projection `H → K`.
    pub proj: Vec<Matrix>,
}

impl ShortExact {
    /// Check that both maps are module maps, the inclusion is injective, the
    /// projection surjective, and the sequence exact in the middle.
    pub fn validate(&self) -> Result<()> {
        for m in [&self.g, &self.h, &self.k] {
            m.ensure_valid()?;
        }
        if !blocks_are_zero(&sigma_apply(&self.g, &self.h, &self.incl))
            || !blocks_are_zero(&sigma_apply(&self.h, &self.k, &self.proj))
        {
            return Err(Error::Invalid("sequence maps are not module maps".into()));
        }
        for v in 0..self.g.dims.len() {
            let (i, p) = (&self.incl[v], &self.proj[v]);
            if i.rank() != i.cols() || p.rank() != p.rows() || !p.mul(i).is_zero() {
                return Err(Error::Invalid(format!("sequence is not exact at vertex {v}")));
            }
            if self.g.dims[v] + self.k.dims[v] != self.h.dims[v] {
                return Err(Error::Invalid(format!("dimensions do not add up at vertex {v}")));
            }
        }
        Ok(())
    }
}

/// The extension of `K` by `G` defined by a cocycle `c ∈ E(K,G)`:
/// `H = G ⊕ K` with action `[[B_G, c], [0, B_K]]`.
pub fn build_extension(g: &PiQModule, k: &PiQModule, c: &[Matrix]) -> Result<ShortExact> {
    if !same_quiver(g, k) {
        return Err(Error::Invalid("modules over different quivers".into()));
    }
    g.ensure_valid()?;
    k.ensure_valid()?;
    let q = g.quiver.clone();
    if !Layout::edge(&q, &k.dims, &g.dims).shapes_match(c) {
        return Err(Error::Shape("extension cocycle has the wrong block shapes".into()));
    }
    if !blocks_are_zero(&tau_apply(k, g, c)) {
        return Err(Error::NotClosed);
    }
    let dims: Vec<usize> = g.dims.iter().zip(&k.dims).map(|(a, b)| a + b).collect();
    let mut b = Vec::with_capacity(q.doubled_count());
    for e in 0..q.doubled_count() {
        let (t, s) = (q.tail(e), q.head(e));
        let mut m = Matrix::zeros(dims[s], dims[t]);
        m.set_block(0, 0, &g.b[e]);
        m.set_block(0, g.dims[t], &c[e]);
        m.set_block(g.dims[s], g.dims[t], &k.b[e]);
        b.push(m);
    }
    let h = PiQModule {
        quiver: q.clone(),
        dims: dims.clone(),
        b,
    };
    let incl = (0..dims.len())
        .map(|v| Matrix::vstack(g.dims[v], &[&Matrix::identity(g.dims[v]), &Matrix::zeros(k.dims[v], g.dims[v])]))
        .collect();
    let proj = (0..dims.len())
        .map(|v| Matrix::hstack(k.dims[v], &[&Matrix::zeros(k.dims[v], g.dims[v]), &Matrix::identity(k.dims[v])]))
        .collect();
    Ok(ShortExact {
        g: g.clone(),
        h,
        k: k.clone(),
        incl,
        proj,
    })
}

/// A cocycle in `E(K,G)` representing the class of the sequence; for
/// sequences produced by [`build_extension`] it is the input cocycle.
pub fn extension_class(ses: &ShortExact) -> Result<Vec<Matrix>> {
    ses.validate()?;
    let q = ses.g.quiver.clone();
    let retraction: Vec<Matrix> = ses
        .incl
        .iter()
        .map(|m| m.left_inverse().expect("validated inclusion is injective"))
        .collect();
    let section: Vec<Matrix> = ses
        .proj
        .iter()
        .map(|m| m.right_inverse().expect("validated projection is surjective"))
        .collect();
    let defect = sigma_apply(&ses.h, &ses.g, &retraction);
    Ok((0..q.doubled_count())
        .map(|e| defect[e].mul(&section[q.tail(e)]).neg())
        .collect())
}

/// Exactness data at one term of a long exact sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LesNode {
    pub label: String,
    pub dim: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub composite_zero: bool,
}

impl LesNode {
    pub fn exact(&self) -> bool {
        self.composite_zero && self.rank_in + self.rank_out == self.dim
    }
}

/// Exactness report for the two long exact sequences of a short exact
/// sequence against a test module `L`.
#[derive(Clone, Debug)]
pub struct LesReport {
    /// `Ext^•(L, G) → Ext^•(L, H) → Ext^•(L, K) → Ext^{•+1}(L, G)`.
    pub covariant: Vec<LesNode>,
    /// `Ext^•(K, L) → Ext^•(H, L) → Ext^•(G, L) → Ext^{•+1}(K, L)`.
    pub contravariant: Vec<LesNode>,
    /// Image of the identity of `Ext⁰(G,G)` under the connecting map, when `L = G`.
    pub connecting_maps: Vec<Matrix>,
}

impl LesReport {
    pub fn exact(&self) -> bool {
        self.covariant.iter().chain(&self.contravariant).all(LesNode::exact)
    }
}

fn chain_nodes(labels: Vec<String>, dims: Vec<usize>, maps: &[Matrix]) -> Vec<LesNode> {
    let n = dims.len();
    (0..n)
        .map(|i| {
            let rank_in = if i == 0 { 0 } else { maps[i - 1].rank() };
            let rank_out = if i + 1 == n { 0 } else { maps[i].rank() };
            let composite_zero = i == 0 || i + 1 == n || maps[i].mul(&maps[i - 1]).is_zero();
            LesNode {
                label: labels[i].clone(),
                dim: dims[i],
                rank_in,
                rank_out,
                composite_zero,
            }
        })
        .collect()
}

/// Verify exactness of both long exact sequences at all nine terms.
pub fn les_check(ses: &ShortExact, l: &PiQModule) -> Result<LesReport> {
    ses.validate()?;
    let q = ses.g.quiver.clone();
    let c = Rep::Ext1(extension_class(ses)?);
    let zgh = Rep::Hom(ses.incl.clone());
    let zhk = Rep::Hom(ses.proj.clone());
    let (g, h, k) = (&ses.g, &ses.h, &ses.k);

    let lg = ext_complex(l, g)?;
    let lh = ext_complex(l, h)?;
    let lk = ext_complex(l, k)?;
    let mut cov_maps = Vec::new();
    let mut cov_labels = Vec::new();
    let mut cov_dims = Vec::new();
    for i in 0..3 {
        cov_labels.extend([format!("Ext{i}(L,G)"), format!("Ext{i}(L,H)"), format!("Ext{i}(L,K)")]);
        cov_dims.extend([lg.dims()[i], lh.dims()[i], lk.dims()[i]]);
        cov_maps.push(lg.induced_matrix(i, &lh, i, |a| theta(&q, &l.dims, &h.dims, a, &zgh))?);
        cov_maps.push(lh.induced_matrix(i, &lk, i, |a| theta(&q, &l.dims, &k.dims, a, &zhk))?);
        if i < 2 {
            cov_maps.push(lk.induced_matrix(i, &lg, i + 1, |a| theta(&q, &l.dims, &g.dims, a, &c))?);
        }
    }

    let kl = ext_complex(k, l)?;
    let hl = ext_complex(h, l)?;
    let gl = ext_complex(g, l)?;
    let mut con_maps = Vec::new();
    let mut con_labels = Vec::new();
    let mut con_dims = Vec::new();
    for i in 0..3 {
        con_labels.extend([format!("Ext{i}(K,L)"), format!("Ext{i}(H,L)"), format!("Ext{i}(G,L)")]);
        con_dims.extend([kl.dims()[i], hl.dims()[i], gl.dims()[i]]);
        con_maps.push(kl.induced_matrix(i, &hl, i, |b| theta(&q, &h.dims, &l.dims, &zhk, b))?);
        con_maps.push(hl.induced_matrix(i, &gl, i, |b| theta(&q, &g.dims, &l.dims, &zgh, b))?);
        if i < 2 {
            con_maps.push(gl.induced_matrix(i, &kl, i + 1, |b| theta(&q, &k.dims, &l.dims, &c, b))?);
        }
    }
    let connecting_maps = vec![cov_maps[2].clone(), cov_maps[5].clone(), con_maps[2].clone(), con_maps[5].clone()];
    Ok(LesReport {
        covariant: chain_nodes(cov_labels, cov_dims, &cov_maps),
        contravariant: chain_nodes(con_labels, con_dims, &con_maps),
        connecting_maps,
    })
}

/// The identity of `Ext⁰(G,G)` as a representative.
pub fn identity_rep(dims: &[usize]) -> Rep {
    Rep::Hom(identity_blocks(dims))
}
