#![allow(dead_code)]

use std::sync::Arc;

use quiverlab_core::random::{random_dims, random_module};
use quiverlab_core::{Matrix, PiQModule, Quiver, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn test_quivers() -> Vec<Arc<Quiver>> {
    vec![Arc::new(Quiver::jordan()), Arc::new(Quiver::a2()), Arc::new(Quiver::loops(2))]
}

/// A pair of random modules over `quiver` with total dimension at most `max_total`.
pub fn random_pair(quiver: &Arc<Quiver>, max_total: usize, rng: &mut ChaCha8Rng) -> (PiQModule, PiQModule) {
    let pick = |rng: &mut ChaCha8Rng| loop {
        let d = random_dims(quiver.vertex_count(), max_total, rng);
        if d.iter().sum::<usize>() <= max_total {
            return random_module(quiver, &d, rng);
        }
    };
    let g = pick(rng);
    let h = pick(rng);
    (g, h)
}

/// `A ⊗ B` (Kronecker product).
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    Matrix::from_fn(a.rows() * b.rows(), a.cols() * b.cols(), |r, c| {
        a.get(r / b.rows(), c / b.cols()) * b.get(r % b.rows(), c % b.cols())
    })
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(sizes.len());
    let mut acc = 0;
    for s in sizes {
        out.push(acc);
        acc += s;
    }
    out
}

fn add_block(m: &mut Matrix, r0: usize, c0: usize, b: &Matrix, sign: i64) {
    for r in 0..b.rows() {
        for c in 0..b.cols() {
            let v = b.get(r, c) * Rational::from_integer(sign.into());
            *m.entry_mut(r0 + r, c0 + c) += v;
        }
    }
}

/// `σ(G,H)` assembled from Kronecker products with row-major vectorization:
/// `vec(A X B) = (A ⊗ Bᵀ) vec(X)`.
pub fn sigma_oracle(g: &PiQModule, h: &PiQModule) -> Matrix {
    let q = g.quiver();
    let (gd, hd) = (g.dims(), h.dims());
    let isz: Vec<usize> = (0..gd.len()).map(|k| hd[k] * gd[k]).collect();
    let esz: Vec<usize> = (0..q.doubled_count()).map(|e| hd[q.head(e)] * gd[q.tail(e)]).collect();
    let (io, eo) = (offsets(&isz), offsets(&esz));
    let mut m = Matrix::zeros(esz.iter().sum(), isz.iter().sum());
    for e in 0..q.doubled_count() {
        let (t, s) = (q.tail(e), q.head(e));
        add_block(&mut m, eo[e], io[t], &kron(&h.action()[e], &Matrix::identity(gd[t])), 1);
        add_block(&mut m, eo[e], io[s], &kron(&Matrix::identity(hd[s]), &g.action()[e].transpose()), -1);
    }
    m
}

/// `τ(G,H)` assembled the same way.
pub fn tau_oracle(g: &PiQModule, h: &PiQModule) -> Matrix {
    let q = g.quiver();
    let (gd, hd) = (g.dims(), h.dims());
    let isz: Vec<usize> = (0..gd.len()).map(|k| hd[k] * gd[k]).collect();
    let esz: Vec<usize> = (0..q.doubled_count()).map(|e| hd[q.head(e)] * gd[q.tail(e)]).collect();
    let (io, eo) = (offsets(&isz), offsets(&esz));
    let mut m = Matrix::zeros(isz.iter().sum(), esz.iter().sum());
    for e in 0..q.doubled_count() {
        let eb = Quiver::bar(e);
        let (t, s) = (q.tail(e), q.head(e));
        // ε(ē) B_H,ē J_e at vertex t, and ε(e) J_e B_G,ē at vertex s.
        add_block(&mut m, io[t], eo[e], &kron(&h.action()[eb], &Matrix::identity(gd[t])), q.eps(eb));
        add_block(&mut m, io[s], eo[e], &kron(&Matrix::identity(hd[s]), &g.action()[eb].transpose()), q.eps(e));
    }
    m
}
