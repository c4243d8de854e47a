//! Dense matrices over the rationals with exact arithmetic.
//!
//! Every basis returned by this module is derived from a reduced row echelon
//! form computed with a fixed pivoting rule (first nonzero entry in row order),
//! so repeated runs on equal inputs return equal bases.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

/// Exact rational scalar used throughout the crate.
pub type Rational = BigRational;

/// Integer as a rational.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The fraction `n / d`. Panics when `d == 0`.
pub fn qq(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parse `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Render as `"p/q"` (or `"p"` for integers).
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Dot product of two equal-length vectors.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    assert_eq!(a.len(), b.len(), "dot: length mismatch");
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Row-major dense rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Result of row reduction: the reduced matrix and its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Build from row-major data. Panics on a length mismatch.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        Matrix { rows, cols, data }
    }

    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Self {
        Self::from_vec(rows, cols, data.iter().map(|&x| q(x)).collect())
    }

    /// Build from a list of rows; all rows must share a length.
    pub fn from_rows(rows: &[Vec<Rational>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().cloned());
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Build from column vectors of a common length `rows`.
    pub fn from_cols(rows: usize, cols: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (c, v) in cols.iter().enumerate() {
            assert_eq!(v.len(), rows, "column has the wrong length");
            for (r, x) in v.iter().enumerate() {
                m.data[r * m.cols + c] = x.clone();
            }
        }
        m
    }

    pub fn column_vector(v: &[Rational]) -> Self {
        Self::from_vec(v.len(), 1, v.to_vec())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[Rational] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: Rational) {
        self.data[r * self.cols + c] = x;
    }

    pub fn entry_mut(&mut self, r: usize, c: usize) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn col_vectors(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn trace(&self) -> Rational {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, other.rows,
            "matrix product shape mismatch: {:?} * {:?}",
            self.shape(),
            other.shape()
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.data[r * other.cols + c] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows).map(|r| dot(self.row(r), v)).collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "matrix difference shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, s: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// Place matrices side by side. All must share a row count `rows`.
    pub fn hstack(rows: usize, parts: &[&Matrix]) -> Matrix {
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut off = 0;
        for p in parts {
            assert_eq!(p.rows, rows, "hstack row mismatch");
            out.set_block(0, off, p);
            off += p.cols;
        }
        out
    }

    /// Stack matrices vertically. All must share a column count `cols`.
    pub fn vstack(cols: usize, parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut out = Self::zeros(rows, cols);
        let mut off = 0;
        for p in parts {
            assert_eq!(p.cols, cols, "vstack column mismatch");
            out.set_block(off, 0, p);
            off += p.rows;
        }
        out
    }

    pub fn block_diag(parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for p in parts {
            out.set_block(r, c, p);
            r += p.rows;
            c += p.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.data[(r0 + r) * self.cols + c0 + c] = block.get(r, c).clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "block out of range");
        Self::from_fn(rows, cols, |r, c| self.get(r0 + r, c0 + c).clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        Self::from_fn(self.rows, idx.len(), |r, c| self.get(r, idx[c]).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Self::from_fn(idx.len(), self.cols, |r, c| self.get(idx[r], c).clone())
    }

    /// Reduced row echelon form. The pivot of each step is the first row
    /// (from the current one downward) with a nonzero entry in the column.
    pub fn rref(&self) -> Rref {
        let mut a: Vec<Vec<Rational>> = (0..self.rows).map(|r| self.row(r).to_vec()).collect();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for c in 0..self.cols {
            if prow == self.rows {
                break;
            }
            let Some(sel) = (prow..self.rows).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(prow, sel);
            let inv = a[prow][c].recip();
            if !inv.is_one() {
                for x in a[prow][c..].iter_mut() {
                    if !x.is_zero() {
                        *x *= &inv;
                    }
                }
            }
            let pivot_row = std::mem::take(&mut a[prow]);
            let support: Vec<usize> = (c..self.cols).filter(|&j| !pivot_row[j].is_zero()).collect();
            for (r, row) in a.iter_mut().enumerate() {
                if r == prow || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for &j in &support {
                    row[j] -= &f * &pivot_row[j];
                }
            }
            a[prow] = pivot_row;
            pivots.push(c);
            prow += 1;
        }
        let data = a.into_iter().flatten().collect();
        Rref {
            reduced: Matrix {
                rows: self.rows,
                cols: self.cols,
                data,
            },
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Null space `{x : self * x = 0}`.
    pub fn kernel(&self) -> Subspace {
        self.kernel_from(&self.rref())
    }

    /// Kernel and column space from a single row reduction.
    pub fn kernel_and_image(&self) -> (Subspace, Subspace) {
        let rref = self.rref();
        let image = Subspace::from_independent(self.rows, rref.pivots.iter().map(|&c| self.col(c)).collect());
        (self.kernel_from(&rref), image)
    }

    fn kernel_from(&self, rref: &Rref) -> Subspace {
        let Rref { reduced, pivots } = rref;
        let mut is_pivot = vec![false; self.cols];
        for &p in pivots {
            is_pivot[p] = true;
        }
        let mut vecs = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -reduced.get(i, f).clone();
            }
            vecs.push(v);
        }
        Subspace::from_independent(self.cols, vecs)
    }

    /// Column space, spanned by the pivot columns of `self`.
    pub fn image(&self) -> Subspace {
        let pivots = self.rref().pivots;
        Subspace::from_independent(self.rows, pivots.iter().map(|&c| self.col(c)).collect())
    }

    /// Cokernel `target / image`, realized by a complement of standard basis
    /// vectors and a projection onto complement coordinates.
    pub fn cokernel(&self) -> Cokernel {
        Cokernel::of_subspace(&self.image())
    }

    /// Some solution of `self * x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows, "solve: right-hand side has the wrong length");
        let aug = Matrix::hstack(self.rows, &[self, &Matrix::column_vector(b)]);
        let Rref { reduced, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = reduced.get(i, self.cols).clone();
        }
        Some(x)
    }

    /// A matrix `L` with `L * self = I`, when `self` has full column rank.
    pub fn left_inverse(&self) -> Option<Matrix> {
        let aug = Matrix::hstack(self.rows, &[self, &Matrix::identity(self.rows)]);
        let Rref { reduced, pivots } = aug.rref();
        if pivots.len() < self.cols || pivots[..self.cols].iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some(reduced.block(0, self.cols, self.cols, self.rows))
    }

    /// A matrix `R` with `self * R = I`, when `self` has full row rank.
    pub fn right_inverse(&self) -> Option<Matrix> {
        self.transpose().left_inverse().map(|l| l.transpose())
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        self.left_inverse()
    }

    /// Largest absolute numerator or denominator, in bits. Used to keep
    /// randomly generated data small.
    pub fn max_bits(&self) -> u64 {
        self.data
            .iter()
            .map(|x| x.numer().abs().bits().max(x.denom().bits()))
            .max()
            .unwrap_or(0)
    }
}

/// A subspace of `Q^n` given by a basis of column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_independent(
            ambient,
            (0..ambient)
                .map(|i| {
                    let mut v = vec![Rational::zero(); ambient];
                    v[i] = Rational::one();
                    v
                })
                .collect(),
        )
    }

    /// Wrap vectors already known to be independent.
    pub(crate) fn from_independent(ambient: usize, basis: Vec<Vec<Rational>>) -> Self {
        debug_assert!(basis.iter().all(|v| v.len() == ambient));
        Subspace { ambient, basis }
    }

    /// Span of arbitrary vectors (a basis is extracted).
    pub fn span(ambient: usize, vectors: &[Vec<Rational>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        Matrix::from_cols(ambient, vectors).image()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    /// Basis as the columns of an `ambient x dim` matrix.
    pub fn matrix(&self) -> Matrix {
        Matrix::from_cols(self.ambient, &self.basis)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        if is_zero_vec(v) {
            return true;
        }
        self.coordinates(v).is_some()
    }

    /// Coordinates of `v` in this basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(v.len(), self.ambient, "vector has the wrong length");
        self.matrix().solve(v)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(other)
    }

    /// `self + other`.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, &all)
    }

    /// `self ∩ other`, computed from the kernel of `[A | -B]`.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "intersect: ambient mismatch");
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.ambient);
        }
        let a = self.matrix();
        let b = other.matrix().neg();
        let k = Matrix::hstack(self.ambient, &[&a, &b]).kernel();
        let vecs: Vec<Vec<Rational>> = k
            .vectors()
            .iter()
            .map(|x| a.mul_vec(&x[..self.dim()]))
            .collect();
        // The A-parts of independent kernel vectors are independent because A
        // has independent columns.
        Subspace::from_independent(self.ambient, vecs)
    }

    /// Image of the subspace under a linear map.
    pub fn map(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient, "map: shape mismatch");
        let imgs: Vec<Vec<Rational>> = self.basis.iter().map(|v| m.mul_vec(v)).collect();
        Subspace::span(m.rows(), &imgs)
    }

    /// Preimage `{x : m x ∈ self}`.
    pub fn preimage(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.rows(), self.ambient, "preimage: shape mismatch");
        // x with m x = S y  <=>  [m | -S] (x, y) = 0.
        let s = self.matrix().neg();
        let k = Matrix::hstack(self.ambient, &[m, &s]).kernel();
        let xs: Vec<Vec<Rational>> = k.vectors().iter().map(|v| v[..m.cols()].to_vec()).collect();
        Subspace::span(m.cols(), &xs)
    }
}

/// A complement `C` of a subspace `S` of `Q^n`, made of standard basis
/// vectors, together with the projection `Q^n -> Q^dim(C)` along `S`.
#[derive(Clone, Debug)]
pub struct Cokernel {
    pub ambient: usize,
    /// Indices of the standard basis vectors spanning the complement.
    pub complement: Vec<usize>,
    /// `dim C x n` matrix: coordinates along the complement, killing `S`.
    pub projection: Matrix,
}

impl Cokernel {
    pub fn of_subspace(s: &Subspace) -> Cokernel {
        let n = s.ambient();
        let sm = s.matrix();
        let aug = Matrix::hstack(n, &[&sm, &Matrix::identity(n)]);
        let pivots = aug.rref().pivots;
        let complement: Vec<usize> = pivots.iter().filter(|&&p| p >= s.dim()).map(|&p| p - s.dim()).collect();
        let cm = Matrix::identity(n).select_cols(&complement);
        let full = Matrix::hstack(n, &[&sm, &cm]);
        let inv = full.inverse().expect("subspace plus complement spans the ambient space");
        let projection = inv.block(s.dim(), 0, complement.len(), n);
        Cokernel {
            ambient: n,
            complement,
            projection,
        }
    }

    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    pub fn project(&self, v: &[Rational]) -> Vec<Rational> {
        self.projection.mul_vec(v)
    }

    /// The standard-basis representative of a class given in complement coordinates.
    pub fn lift(&self, coords: &[Rational]) -> Vec<Rational> {
        assert_eq!(coords.len(), self.dim());
        let mut v = vec![Rational::zero(); self.ambient];
        for (c, &i) in coords.iter().zip(&self.complement) {
            v[i] = c.clone();
        }
        v
    }
}
