//! Quivers, their doubles, sign functions and the Euler form.

use crate::error::{Error, Result};

/// A finite quiver together with a sign `ε` on its double.
///
/// Doubled edges are indexed so that `2e` is the original edge `e` and
/// `2e + 1` its reverse; `bar(h) = h ^ 1`. For a doubled edge `h`,
/// [`Quiver::tail`] is the vertex `h` starts at and [`Quiver::head`] the
/// vertex it ends at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    names: Vec<String>,
    edges: Vec<(usize, usize)>,
    signs: Vec<i8>,
    framing: Option<Framing>,
}

/// Bookkeeping for a Crawley-Boevey quiver built by [`Quiver::crawley_boevey`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Framing {
    /// Number of vertices of the original quiver; the framing vertex has this index.
    pub base_vertices: usize,
    /// Number of edges of the original quiver; framing arrows follow them.
    pub base_edges: usize,
    /// The framing vector.
    pub w: Vec<usize>,
    /// For each original vertex, the indices of the framing arrows ending there.
    pub arrows: Vec<Vec<usize>>,
}

impl Quiver {
    /// Quiver with the given vertex names and `(source, target)` edges, signs +1.
    pub fn new(names: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = names.len();
        if let Some(&(s, t)) = edges.iter().find(|&&(s, t)| s >= n || t >= n) {
            return Err(Error::Invalid(format!("edge ({s},{t}) refers to a missing vertex")));
        }
        let signs = vec![1; edges.len()];
        Ok(Quiver {
            names,
            edges,
            signs,
            framing: None,
        })
    }

    /// Quiver on `n` anonymous vertices.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        Self::new((0..n).map(|i| i.to_string()).collect(), edges.to_vec()).expect("valid edges")
    }

    /// One vertex with one loop.
    pub fn jordan() -> Self {
        Self::loops(1)
    }

    /// One vertex with `g` loops.
    pub fn loops(g: usize) -> Self {
        Self::from_edges(1, &vec![(0, 0); g])
    }

    /// Two vertices joined by one edge.
    pub fn a2() -> Self {
        Self::from_edges(2, &[(0, 1)])
    }

    /// Replace the sign of each original edge (`ε(e) = signs[e]`, `ε(ē) = -signs[e]`).
    pub fn with_signs(mut self, signs: Vec<i8>) -> Result<Self> {
        if signs.len() != self.edges.len() || signs.iter().any(|s| s.abs() != 1) {
            return Err(Error::Invalid("signs must be ±1, one per edge".into()));
        }
        self.signs = signs;
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn framing(&self) -> Option<&Framing> {
        self.framing.as_ref()
    }

    /// Number of edges of the double quiver.
    pub fn doubled_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn bar(h: usize) -> usize {
        h ^ 1
    }

    /// Start vertex of the doubled edge `h`.
    pub fn tail(&self, h: usize) -> usize {
        let (s, t) = self.edges[h / 2];
        if h % 2 == 0 {
            s
        } else {
            t
        }
    }

    /// End vertex of the doubled edge `h`.
    pub fn head(&self, h: usize) -> usize {
        let (s, t) = self.edges[h / 2];
        if h % 2 == 0 {
            t
        } else {
            s
        }
    }

    /// `ε(h) ∈ {1, -1}`.
    pub fn eps(&self, h: usize) -> i64 {
        let s = i64::from(self.signs[h / 2]);
        if h % 2 == 0 {
            s
        } else {
            -s
        }
    }

    /// Number of loops at `k`.
    pub fn g(&self, k: usize) -> usize {
        self.edges.iter().filter(|&&(s, t)| s == k && t == k).count()
    }

    /// Doubled loops at `k`, in increasing index order (both `e` and `ē` for each loop).
    pub fn doubled_loops_at(&self, k: usize) -> Vec<usize> {
        (0..self.doubled_count())
            .filter(|&h| self.tail(h) == k && self.head(h) == k)
            .collect()
    }

    /// `v1 • v2 = Σ_k v1_k v2_k`.
    pub fn dot(v1: &[usize], v2: &[usize]) -> i64 {
        v1.iter().zip(v2).map(|(&a, &b)| (a * b) as i64).sum()
    }

    fn check_dims(&self, v: &[usize]) -> Result<()> {
        if v.len() != self.vertex_count() {
            return Err(Error::DimMismatch {
                expected: self.vertex_count(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// `⟨v1, v2⟩ = -Σ_{h in the double} v1_{tail h} v2_{head h} + 2 v1 • v2`.
    pub fn euler_form(&self, v1: &[usize], v2: &[usize]) -> Result<i64> {
        self.check_dims(v1)?;
        self.check_dims(v2)?;
        let cross: i64 = (0..self.doubled_count())
            .map(|h| (v1[self.tail(h)] * v2[self.head(h)]) as i64)
            .sum();
        Ok(2 * Self::dot(v1, v2) - cross)
    }

    /// The unit dimension vector at `k`.
    pub fn delta(&self, k: usize) -> Vec<usize> {
        let mut d = vec![0; self.vertex_count()];
        d[k] = 1;
        d
    }

    /// Add a vertex `∞` (last index) and `w_i` arrows `∞ → i`, each with sign +1.
    pub fn crawley_boevey(&self, w: &[usize]) -> Result<Quiver> {
        self.check_dims(w)?;
        let n = self.vertex_count();
        let mut names = self.names.clone();
        names.push("inf".to_string());
        let mut edges = self.edges.clone();
        let mut signs = self.signs.clone();
        let mut arrows = vec![Vec::new(); n];
        for (i, &wi) in w.iter().enumerate() {
            for _ in 0..wi {
                arrows[i].push(edges.len());
                edges.push((n, i));
                signs.push(1);
            }
        }
        Ok(Quiver {
            names,
            edges,
            signs,
            framing: Some(Framing {
                base_vertices: n,
                base_edges: self.edges.len(),
                w: w.to_vec(),
                arrows,
            }),
        })
    }

    /// A short human-readable description of the sign convention.
    pub fn sign_label(&self) -> String {
        let s: Vec<&str> = self.signs.iter().map(|&s| if s > 0 { "+" } else { "-" }).collect();
        format!("eps(original)=[{}], eps(reverse)=-eps(original)", s.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_form_examples() {
        assert_eq!(Quiver::jordan().euler_form(&[1], &[1]).unwrap(), 0);
        assert_eq!(Quiver::loops(0).euler_form(&[1], &[1]).unwrap(), 2);
        assert_eq!(Quiver::a2().euler_form(&[0, 0], &[3, 5]).unwrap(), 0);
        assert!(Quiver::a2().euler_form(&[1], &[1, 1]).is_err());
    }

    #[test]
    fn dot_examples() {
        assert_eq!(Quiver::dot(&[1, 2], &[3, 4]), 11);
        assert_eq!(Quiver::dot(&[0, 0], &[3, 4]), 0);
    }

    #[test]
    fn crawley_boevey_counts() {
        let cb = Quiver::jordan().crawley_boevey(&[1]).unwrap();
        assert_eq!(cb.vertex_count(), 2);
        assert_eq!(cb.edges().len(), 2);
        let cb = Quiver::a2().crawley_boevey(&[2, 0]).unwrap();
        assert_eq!(cb.edges().len(), 3);
        assert_eq!(cb.eps(2 * 1), 1);
        assert_eq!(cb.eps(2 * 1 + 1), -1);
        let cb = Quiver::a2().crawley_boevey(&[0, 0]).unwrap();
        assert_eq!(cb.vertex_count(), 3);
        assert_eq!(cb.edges(), Quiver::a2().edges());
    }

    #[test]
    fn eps_is_an_involution_sign() {
        let q = Quiver::from_edges(3, &[(0, 1), (1, 2), (2, 2)]).with_signs(vec![1, -1, 1]).unwrap();
        for h in 0..q.doubled_count() {
            assert_eq!(q.eps(h) + q.eps(Quiver::bar(h)), 0);
            assert_eq!(q.tail(h), q.head(Quiver::bar(h)));
        }
        assert_eq!(q.g(2), 1);
        assert_eq!(q.doubled_loops_at(2), vec![4, 5]);
    }
}
