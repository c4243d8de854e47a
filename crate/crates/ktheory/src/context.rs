//! Formal Chern roots, symmetric classes, and virtual bundles.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::laurent::Laurent;

/// A named bundle whose K-class is the sum of its formal roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootGroup {
    pub name: String,
    pub prefix: String,
    pub rank: usize,
    pub offset: usize,
}

/// The variables of a computation: root groups, optional scalar symbols
/// (for example a canonical class of the base), and at most one hyperplane
/// class `u = O(1)` on the projectivization of one of the groups.
#[derive(Debug, PartialEq, Eq)]
pub struct RootContext {
    groups: Vec<RootGroup>,
    names: Vec<String>,
    hyperplane: Option<(usize, usize)>,
}

#[derive(Default)]
pub struct RootContextBuilder {
    groups: Vec<(String, String, usize)>,
    symbols: Vec<String>,
    projectivize: Option<String>,
}

impl RootContextBuilder {
    /// Add a bundle `name` of the given rank with roots `prefix1, prefix2, ...`.
    pub fn bundle(mut self, name: &str, prefix: &str, rank: usize) -> Self {
        self.groups.push((name.to_string(), prefix.to_string(), rank));
        self
    }

    /// Add an invertible scalar symbol, modelled as a rank one group.
    pub fn symbol(mut self, name: &str) -> Self {
        self.symbols.push(name.to_string());
        self
    }

    /// Work on the projectivization of `name`; adds the variable `u`.
    pub fn projectivize(mut self, name: &str) -> Self {
        self.projectivize = Some(name.to_string());
        self
    }

    pub fn build(self) -> Result<Arc<RootContext>> {
        let mut groups = Vec::new();
        let mut names = Vec::new();
        let mut push = |name: &str, prefix: &str, rank: usize, single: bool| -> Result<()> {
            if groups.iter().any(|g: &RootGroup| g.name == name) {
                return Err(Error::Context(format!("duplicate bundle `{name}`")));
            }
            let offset = names.len();
            for i in 0..rank {
                names.push(if single { prefix.to_string() } else { format!("{prefix}{}", i + 1) });
            }
            groups.push(RootGroup {
                name: name.to_string(),
                prefix: prefix.to_string(),
                rank,
                offset,
            });
            Ok(())
        };
        for (name, prefix, rank) in &self.groups {
            push(name, prefix, *rank, false)?;
        }
        for s in &self.symbols {
            push(s, s, 1, true)?;
        }
        let hyperplane = match &self.projectivize {
            None => None,
            Some(p) => {
                let g = groups.iter().position(|g| &g.name == p).ok_or_else(|| Error::UnknownBundle(p.clone()))?;
                if groups[g].rank == 0 {
                    return Err(Error::Context("cannot projectivize a rank zero bundle".into()));
                }
                if names.iter().any(|n| n == "u") {
                    return Err(Error::Context("the name `u` is reserved for the hyperplane class".into()));
                }
                names.push("u".into());
                Some((g, names.len() - 1))
            }
        };
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = names.iter().find(|n| !seen.insert(n.as_str())) {
            return Err(Error::Context(format!("duplicate variable `{dup}`")));
        }
        Ok(Arc::new(RootContext { groups, names, hyperplane }))
    }
}

impl RootContext {
    pub fn builder() -> RootContextBuilder {
        RootContextBuilder::default()
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn groups(&self) -> &[RootGroup] {
        &self.groups
    }

    pub fn group(&self, name: &str) -> Result<&RootGroup> {
        self.groups.iter().find(|g| g.name == name).ok_or_else(|| Error::UnknownBundle(name.to_string()))
    }

    /// The projectivized group and the index of `u`.
    pub fn hyperplane(&self) -> Result<(&RootGroup, usize)> {
        let (g, u) = self.hyperplane.ok_or(Error::NoHyperplane)?;
        Ok((&self.groups[g], u))
    }

    pub fn zero(&self) -> Laurent {
        Laurent::zero(self.nvars())
    }

    pub fn one(&self) -> Laurent {
        Laurent::one(self.nvars())
    }

    pub fn constant(&self, c: i64) -> Laurent {
        Laurent::constant(self.nvars(), c)
    }

    /// `u^p`.
    pub fn u(&self, p: i32) -> Result<Laurent> {
        let (_, u) = self.hyperplane()?;
        Ok(Laurent::var_pow(self.nvars(), u, p))
    }

    /// Root `i` (zero based) of `group`, raised to `p`.
    pub fn root(&self, group: &str, i: usize, p: i32) -> Result<Laurent> {
        let g = self.group(group)?;
        if i >= g.rank {
            return Err(Error::Context(format!("`{group}` has rank {}", g.rank)));
        }
        Ok(Laurent::var_pow(self.nvars(), g.offset + i, p))
    }

    /// The scalar symbol `name`.
    pub fn symbol(&self, name: &str) -> Result<Laurent> {
        self.root(name, 0, 1)
    }

    fn roots_pow(&self, group: &str, p: i32) -> Result<Vec<Laurent>> {
        let g = self.group(group)?;
        (0..g.rank).map(|i| self.root(group, i, p)).collect()
    }

    /// Elementary symmetric polynomial `e_k` in the roots (or inverse roots when `p = -1`).
    fn elementary(&self, group: &str, k: usize, p: i32) -> Result<Laurent> {
        let roots = self.roots_pow(group, p)?;
        // Row of the product ∏(1 + r t), kept up to degree k.
        let mut e = vec![self.one()];
        for r in &roots {
            let mut next = e.clone();
            next.push(self.zero());
            for d in 1..next.len() {
                next[d] = &next[d] + &(&e[d - 1] * r);
            }
            e = next;
        }
        Ok(e.get(k).cloned().unwrap_or_else(|| self.zero()))
    }

    pub fn e(&self, group: &str, k: usize) -> Result<Laurent> {
        self.elementary(group, k, 1)
    }

    /// Complete homogeneous symmetric polynomial `h_k` in the roots, or in
    /// the inverse roots when `inverse` is set.
    pub fn h(&self, group: &str, k: usize, inverse: bool) -> Result<Laurent> {
        let roots = self.roots_pow(group, if inverse { -1 } else { 1 })?;
        // h_k(r_1..r_m) = Σ_j r_m^j h_{k-j}(r_1..r_{m-1}).
        let mut h: Vec<Laurent> = (0..=k).map(|d| if d == 0 { self.one() } else { self.zero() }).collect();
        for r in &roots {
            for d in 1..=k {
                h[d] = &h[d] + &(&h[d - 1] * r);
            }
        }
        Ok(h[k].clone())
    }

    /// `det` of the group: the product of its roots.
    pub fn det(&self, group: &str) -> Result<Laurent> {
        let g = self.group(group)?;
        self.elementary(group, g.rank, 1)
    }

    pub fn det_inv(&self, group: &str) -> Result<Laurent> {
        let g = self.group(group)?;
        self.elementary(group, g.rank, -1)
    }

    /// The group as a virtual bundle.
    pub fn bundle(&self, group: &str) -> Result<Virtual> {
        Ok(Virtual {
            plus: self.roots_pow(group, 1)?,
            minus: Vec::new(),
        })
    }

    /// The line bundle with class `mono` (a monomial).
    pub fn line(&self, mono: Laurent) -> Result<Virtual> {
        if mono.monomial_inverse().is_none() {
            return Err(Error::Context("a line bundle class must be a unit monomial".into()));
        }
        Ok(Virtual {
            plus: vec![mono],
            minus: Vec::new(),
        })
    }

    /// Wrap a polynomial as a class, checking symmetry in every root group.
    pub fn class(self: &Arc<Self>, poly: Laurent) -> Result<KClass> {
        if poly.nvars() != self.nvars() {
            return Err(Error::ContextMismatch);
        }
        for g in &self.groups {
            for i in 1..g.rank {
                if poly.swap_vars(g.offset + i - 1, g.offset + i) != poly {
                    return Err(Error::NotSymmetric(g.name.clone()));
                }
            }
        }
        Ok(KClass { ctx: self.clone(), poly })
    }

    pub fn display(&self, poly: &Laurent) -> String {
        poly.display(&self.names)
    }
}

/// A K-theory class: a Laurent polynomial symmetric in each root group.
#[derive(Clone, Debug)]
pub struct KClass {
    ctx: Arc<RootContext>,
    poly: Laurent,
}

impl PartialEq for KClass {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) && self.poly == other.poly
    }
}

impl KClass {
    pub fn context(&self) -> &Arc<RootContext> {
        &self.ctx
    }

    pub fn poly(&self) -> &Laurent {
        &self.poly
    }

    pub fn into_poly(self) -> Laurent {
        self.poly
    }

    fn same(&self, other: &KClass) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn add(&self, other: &KClass) -> Result<KClass> {
        self.same(other)?;
        Ok(KClass {
            ctx: self.ctx.clone(),
            poly: &self.poly + &other.poly,
        })
    }

    pub fn sub(&self, other: &KClass) -> Result<KClass> {
        self.same(other)?;
        Ok(KClass {
            ctx: self.ctx.clone(),
            poly: &self.poly - &other.poly,
        })
    }

    pub fn mul(&self, other: &KClass) -> Result<KClass> {
        self.same(other)?;
        Ok(KClass {
            ctx: self.ctx.clone(),
            poly: &self.poly * &other.poly,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
}

impl std::fmt::Display for KClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.ctx.display(&self.poly))
    }
}

/// A virtual bundle `Σ L_plus − Σ L_minus` of line bundles given by monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Virtual {
    pub plus: Vec<Laurent>,
    pub minus: Vec<Laurent>,
}

impl Virtual {
    pub fn rank(&self) -> i64 {
        self.plus.len() as i64 - self.minus.len() as i64
    }

    pub fn add(&self, other: &Virtual) -> Virtual {
        Virtual {
            plus: self.plus.iter().chain(&other.plus).cloned().collect(),
            minus: self.minus.iter().chain(&other.minus).cloned().collect(),
        }
    }

    pub fn neg(&self) -> Virtual {
        Virtual {
            plus: self.minus.clone(),
            minus: self.plus.clone(),
        }
    }

    pub fn sub(&self, other: &Virtual) -> Virtual {
        self.add(&other.neg())
    }

    /// Tensor with a line bundle.
    pub fn twist(&self, line: &Laurent) -> Virtual {
        Virtual {
            plus: self.plus.iter().map(|m| m * line).collect(),
            minus: self.minus.iter().map(|m| m * line).collect(),
        }
    }

    pub fn dual(&self) -> Virtual {
        let inv = |v: &Vec<Laurent>| v.iter().map(|m| m.monomial_inverse().expect("line classes are monomials")).collect();
        Virtual {
            plus: inv(&self.plus),
            minus: inv(&self.minus),
        }
    }

    /// Homological shift `[n]`, which multiplies the class by `(-1)^n`.
    pub fn shift(&self, n: i32) -> Virtual {
        if n.rem_euclid(2) == 1 {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// The class of the virtual bundle itself.
    pub fn class(&self, nvars: usize) -> Laurent {
        let mut acc = Laurent::zero(nvars);
        for m in &self.plus {
            acc = &acc + m;
        }
        for m in &self.minus {
            acc = &acc - m;
        }
        acc
    }

    pub fn det(&self, nvars: usize) -> Laurent {
        let mut acc = Laurent::one(nvars);
        for m in &self.plus {
            acc = &acc * m;
        }
        for m in &self.minus {
            acc = &acc * &m.monomial_inverse().expect("line classes are monomials");
        }
        acc
    }

    /// `λ^0, ..., λ^n` from the series `λ_t = ∏(1 + L t) / ∏(1 + M t)`,
    /// truncated at degree `n`.
    pub fn lambda_series(&self, nvars: usize, n: usize) -> Vec<Laurent> {
        let mut s: Vec<Laurent> = (0..=n).map(|d| if d == 0 { Laurent::one(nvars) } else { Laurent::zero(nvars) }).collect();
        for m in &self.plus {
            for d in (1..=n).rev() {
                s[d] = &s[d] + &(&s[d - 1] * m);
            }
        }
        // Division by (1 + M t): s ← s · Σ (−M t)^j.
        for m in &self.minus {
            for d in 1..=n {
                s[d] = &s[d] - &(&s[d - 1] * m);
            }
        }
        s
    }

    pub fn lambda(&self, nvars: usize, k: usize) -> Laurent {
        self.lambda_series(nvars, k).pop().expect("series has k + 1 terms")
    }

    /// `λ_{-1} = Σ_{k ≤ rank} (-1)^k λ^k`. For a genuine bundle of that rank
    /// the higher terms vanish, possibly only modulo relations of the
    /// ambient ring; the truncation degree is returned alongside.
    pub fn lambda_minus1(&self, nvars: usize) -> Result<(Laurent, usize)> {
        let r = self.rank();
        if r < 0 {
            return Err(Error::NegativeRank(r));
        }
        let r = r as usize;
        let s = self.lambda_series(nvars, r);
        let mut acc = Laurent::zero(nvars);
        for (k, t) in s.iter().enumerate() {
            acc = if k % 2 == 0 { &acc + t } else { &acc - t };
        }
        Ok((acc, r))
    }
}
