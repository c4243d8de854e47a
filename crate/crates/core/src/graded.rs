//! Vertex-graded (`I(G,H)`) and edge-graded (`E(G,H)`) linear maps.
//!
//! A graded map is stored as a list of blocks. In `I(G,H)` block `k` is a
//! `dim H_k x dim G_k` matrix; in `E(G,H)` block `h` is a
//! `dim H_{head h} x dim G_{tail h}` matrix. Flattened coordinates
//! concatenate the blocks, each in row-major order.

use num::Zero;

use crate::linalg::{Matrix, Rational};
use crate::quiver::Quiver;

/// Offsets and shapes of the blocks of a graded space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    shapes: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    total: usize,
}

impl Layout {
    fn from_shapes(shapes: Vec<(usize, usize)>) -> Self {
        let mut offsets = Vec::with_capacity(shapes.len());
        let mut total = 0;
        for &(r, c) in &shapes {
            offsets.push(total);
            total += r * c;
        }
        Layout {
            shapes,
            offsets,
            total,
        }
    }

    /// Layout of `I(G,H)`.
    pub fn vertex(src: &[usize], dst: &[usize]) -> Self {
        assert_eq!(src.len(), dst.len(), "vertex layout: dimension vectors differ in length");
        Self::from_shapes(src.iter().zip(dst).map(|(&g, &h)| (h, g)).collect())
    }

    /// Layout of `E(G,H)`.
    pub fn edge(q: &Quiver, src: &[usize], dst: &[usize]) -> Self {
        Self::from_shapes(
            (0..q.doubled_count())
                .map(|h| (dst[q.head(h)], src[q.tail(h)]))
                .collect(),
        )
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn blocks(&self) -> usize {
        self.shapes.len()
    }

    pub fn shape(&self, b: usize) -> (usize, usize) {
        self.shapes[b]
    }

    pub fn offset(&self, b: usize) -> usize {
        self.offsets[b]
    }

    /// Flat index of entry `(r, c)` of block `b`.
    pub fn index(&self, b: usize, r: usize, c: usize) -> usize {
        self.offsets[b] + r * self.shapes[b].1 + c
    }

    pub fn zero_blocks(&self) -> Vec<Matrix> {
        self.shapes.iter().map(|&(r, c)| Matrix::zeros(r, c)).collect()
    }

    pub fn flatten(&self, blocks: &[Matrix]) -> Vec<Rational> {
        assert_eq!(blocks.len(), self.shapes.len(), "flatten: block count mismatch");
        let mut v = Vec::with_capacity(self.total);
        for (b, m) in blocks.iter().enumerate() {
            assert_eq!(m.shape(), self.shapes[b], "flatten: block {b} has the wrong shape");
            v.extend(m.data().iter().cloned());
        }
        v
    }

    pub fn unflatten(&self, v: &[Rational]) -> Vec<Matrix> {
        assert_eq!(v.len(), self.total, "unflatten: vector has the wrong length");
        self.shapes
            .iter()
            .zip(&self.offsets)
            .map(|(&(r, c), &o)| Matrix::from_vec(r, c, v[o..o + r * c].to_vec()))
            .collect()
    }

    pub fn shapes_match(&self, blocks: &[Matrix]) -> bool {
        blocks.len() == self.shapes.len() && blocks.iter().zip(&self.shapes).all(|(m, &s)| m.shape() == s)
    }
}

/// `(a b)_k = a_k b_k` for `a ∈ I(H,K)`, `b ∈ I(G,H)`.
pub fn compose_ii(a: &[Matrix], b: &[Matrix]) -> Vec<Matrix> {
    a.iter().zip(b).map(|(x, y)| x.mul(y)).collect()
}

/// `(c z)_h = c_h z_{tail h}` for `c ∈ E(H,K)`, `z ∈ I(G,H)`.
pub fn compose_ei(q: &Quiver, c: &[Matrix], z: &[Matrix]) -> Vec<Matrix> {
    c.iter().enumerate().map(|(h, ch)| ch.mul(&z[q.tail(h)])).collect()
}

/// `(z c)_h = z_{head h} c_h` for `z ∈ I(H,K)`, `c ∈ E(G,H)`.
pub fn compose_ie(q: &Quiver, z: &[Matrix], c: &[Matrix]) -> Vec<Matrix> {
    c.iter().enumerate().map(|(h, ch)| z[q.head(h)].mul(ch)).collect()
}

/// `(ε c b)_k = Σ_{head h = k} ε(h) c_h b_{h̄}` for `c ∈ E(H,K)`, `b ∈ E(G,H)`;
/// the result lies in `I(G,K)`.
pub fn compose_ee_eps(q: &Quiver, c: &[Matrix], b: &[Matrix], g_dims: &[usize], k_dims: &[usize]) -> Vec<Matrix> {
    let mut out: Vec<Matrix> = g_dims.iter().zip(k_dims).map(|(&g, &k)| Matrix::zeros(k, g)).collect();
    for h in 0..q.doubled_count() {
        let k = q.head(h);
        let prod = c[h].mul(&b[Quiver::bar(h)]);
        if prod.is_zero() {
            continue;
        }
        out[k] = if q.eps(h) > 0 { out[k].add(&prod) } else { out[k].sub(&prod) };
    }
    out
}

pub fn add_blocks(a: &[Matrix], b: &[Matrix]) -> Vec<Matrix> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn sub_blocks(a: &[Matrix], b: &[Matrix]) -> Vec<Matrix> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn scale_blocks(a: &[Matrix], s: &Rational) -> Vec<Matrix> {
    a.iter().map(|x| x.scale(s)).collect()
}

pub fn blocks_are_zero(a: &[Matrix]) -> bool {
    a.iter().all(Matrix::is_zero)
}

/// Sum of the traces of the blocks of an element of `I(G,G)`.
pub fn total_trace(a: &[Matrix]) -> Rational {
    a.iter().fold(Rational::zero(), |acc, m| acc + m.trace())
}

pub fn identity_blocks(dims: &[usize]) -> Vec<Matrix> {
    dims.iter().map(|&d| Matrix::identity(d)).collect()
}
