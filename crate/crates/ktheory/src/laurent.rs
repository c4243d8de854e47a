//! Laurent polynomials with integer coefficients in a fixed number of variables.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, One, Signed, Zero};

/// `Σ c_m x^m` over exponent vectors `m ∈ ℤ^n`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Laurent {
    nvars: usize,
    terms: BTreeMap<Vec<i32>, BigInt>,
}

impl Laurent {
    pub fn zero(nvars: usize) -> Self {
        Laurent {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    pub fn monomial(exps: Vec<i32>, c: impl Into<BigInt>) -> Self {
        let nvars = exps.len();
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Laurent { nvars, terms }
    }

    /// `x_i^p`.
    pub fn var_pow(nvars: usize, i: usize, p: i32) -> Self {
        let mut e = vec![0; nvars];
        e[i] = p;
        Self::monomial(e, 1)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::var_pow(nvars, i, 1)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single term, if this is a monomial.
    pub fn as_monomial(&self) -> Option<(&Vec<i32>, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn add_term(&mut self, e: Vec<i32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Laurent {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplicative inverse of a monomial.
    pub fn monomial_inverse(&self) -> Option<Self> {
        let (e, c) = self.as_monomial()?;
        if !c.abs().is_one() {
            return None;
        }
        Some(Self::monomial(e.iter().map(|x| -x).collect(), c.clone()))
    }

    /// Exchange variables `i` and `j`.
    pub fn swap_vars(&self, i: usize, j: usize) -> Self {
        Laurent {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e.swap(i, j);
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Substitute `x_i ↦ x_i^{-1}` for every `i` in `vars`.
    pub fn invert_vars(&self, vars: &[usize]) -> Self {
        Laurent {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    for &i in vars {
                        e[i] = -e[i];
                    }
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Group by the exponent of `x_i`: `Σ_m x_i^m · c_m` with `c_m` free of `x_i`.
    pub fn collect_in(&self, i: usize) -> BTreeMap<i32, Laurent> {
        let mut out: BTreeMap<i32, Laurent> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let m = std::mem::replace(&mut rest[i], 0);
            out.entry(m).or_insert_with(|| Laurent::zero(self.nvars)).add_term(rest, c.clone());
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    pub fn depends_on(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e[i] != 0)
    }

    /// Human-readable form using the given variable names.
    pub fn display(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p != 0)
                .map(|(i, &p)| if p == 1 { names[i].clone() } else { format!("{}^{}", names[i], p) })
                .collect();
            if vars.is_empty() {
                let _ = write!(s, "{a}");
            } else {
                if !a.is_one() {
                    let _ = write!(s, "{a}*");
                }
                s.push_str(&vars.join("*"));
            }
        }
        s
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        self + &(-rhs)
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = Laurent::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<i32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Laurent {
            type Output = Laurent;
            fn $m(self, rhs: Laurent) -> Laurent {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Laurent> for Laurent {
            type Output = Laurent;
            fn $m(self, rhs: &Laurent) -> Laurent {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        -&self
    }
}
