//! Seeded generation of modules by iterated extensions.
//!
//! Rejection sampling on `ε B B = 0` almost never succeeds, so modules are
//! grown one vertex at a time: each step extends the current module by a
//! loop module (or the other way round) along a random Ext¹ class.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::linalg::{q, Matrix, Rational};
use crate::piq::{build_extension, ext_complex, LoopModule, PiQModule};
use crate::quiver::Quiver;

/// Small random integer in `[-range, range]`.
pub fn small_int<R: Rng>(rng: &mut R, range: i64) -> Rational {
    q(rng.gen_range(-range..=range))
}

/// Random loop coordinates at `k`, drawn from a small palette so that
/// repeated labels (and hence nonzero Ext groups) occur often.
pub fn random_loop<R: Rng>(quiver: &Quiver, k: usize, rng: &mut R) -> LoopModule {
    let n = quiver.doubled_loops_at(k).len();
    LoopModule::new(k, (0..n).map(|_| small_int(rng, 1)).collect())
}

/// Random invertible matrix with integer inverse (product of unit triangular factors).
pub fn random_unimodular<R: Rng>(n: usize, rng: &mut R) -> Matrix {
    let lower = Matrix::from_fn(n, n, |r, c| match r.cmp(&c) {
        std::cmp::Ordering::Equal => q(1),
        std::cmp::Ordering::Greater => small_int(rng, 1),
        std::cmp::Ordering::Less => q(0),
    });
    let upper = Matrix::from_fn(n, n, |r, c| match r.cmp(&c) {
        std::cmp::Ordering::Equal => q(1),
        std::cmp::Ordering::Less => small_int(rng, 1),
        std::cmp::Ordering::Greater => q(0),
    });
    lower.mul(&upper)
}

/// Random gauge transformation for the given graded dimension.
pub fn random_gauge<R: Rng>(dims: &[usize], rng: &mut R) -> Vec<Matrix> {
    dims.iter().map(|&d| random_unimodular(d, rng)).collect()
}

/// A random coordinate vector with small integer entries.
pub fn random_coords<R: Rng>(n: usize, rng: &mut R) -> Vec<Rational> {
    (0..n).map(|_| small_int(rng, 2)).collect()
}

/// Grow a module of graded dimension `dims` by iterated extensions with
/// loop modules, then conjugate by a random gauge transformation.
pub fn random_module<R: Rng>(quiver: &Arc<Quiver>, dims: &[usize], rng: &mut R) -> PiQModule {
    let mut steps: Vec<usize> = dims.iter().enumerate().flat_map(|(k, &d)| std::iter::repeat(k).take(d)).collect();
    steps.shuffle(rng);
    let mut palette: Vec<LoopModule> = Vec::new();
    let mut m = PiQModule::zero_action(quiver.clone(), vec![0; quiver.vertex_count()]);
    for k in steps {
        let reuse: Vec<&LoopModule> = palette.iter().filter(|l| l.k == k).collect();
        let label = if !reuse.is_empty() && rng.gen_bool(0.6) {
            (*reuse.choose(rng).expect("nonempty")).clone()
        } else {
            let l = random_loop(quiver, k, rng);
            palette.push(l.clone());
            l
        };
        let x = label.module(quiver.clone()).expect("loop coordinates match the quiver");
        let sub_first = rng.gen_bool(0.5);
        let (g, kq) = if sub_first { (m.clone(), x) } else { (x, m.clone()) };
        let data = ext_complex(&kq, &g).expect("generated modules are valid");
        let coords = random_coords(data.dims()[1], rng);
        let c = data.rep(1, &coords);
        m = build_extension(&g, &kq, c.blocks()).expect("Ext¹ representatives are cocycles").h;
    }
    m.conjugate(&random_gauge(dims, rng)).expect("unimodular gauge is invertible")
}

/// Random graded dimension with entries in `0..=max`, not all zero.
pub fn random_dims<R: Rng>(n: usize, max: usize, rng: &mut R) -> Vec<usize> {
    loop {
        let d: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=max)).collect();
        if d.iter().any(|&x| x > 0) {
            return d;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_modules_satisfy_the_relation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for quiver in [Quiver::jordan(), Quiver::a2(), Quiver::loops(2)] {
            let quiver = Arc::new(quiver);
            let dims = random_dims(quiver.vertex_count(), 3, &mut rng);
            let m = random_module(&quiver, &dims, &mut rng);
            assert!(m.is_valid());
            assert_eq!(m.dims(), &dims[..]);
        }
    }

    #[test]
    fn unimodular_has_integer_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_unimodular(4, &mut rng);
        let inv = g.inverse().unwrap();
        assert!(inv.data().iter().all(|x| x.is_integer()));
    }
}
