#![allow(dead_code)]

use jqdiscord::qmath::{identity2, kron, sigma_x, sigma_y, sigma_z};
use jqdiscord::{ComplexMatrix, DensityMatrix, C64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// X-shaped state with random populations and coherences inside the positivity bounds.
pub fn random_x_state(rng: &mut impl Rng) -> DensityMatrix {
    let mut p: [f64; 4] = std::array::from_fn(|_| rng.random_range(0.01..1.0));
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= total);
    let coherence = |rng: &mut dyn rand::RngCore, a: f64, b: f64| {
        let r = (a * b).sqrt() * rng.random_range(0.0..0.999);
        C64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
    };
    let z14 = coherence(rng, p[0], p[3]);
    let z23 = coherence(rng, p[1], p[2]);
    let mut m = ComplexMatrix::from_diagonal(&p).unwrap();
    m.set(0, 3, z14);
    m.set(3, 0, z14.conj());
    m.set(1, 2, z23);
    m.set(2, 1, z23.conj());
    DensityMatrix::new(m).unwrap()
}

/// Full-rank state `G G† + δ I`, normalized, with `G` uniform in the unit complex square.
pub fn random_full_rank_state(rng: &mut impl Rng) -> DensityMatrix {
    let data = (0..16)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let g = ComplexMatrix::from_row_major(4, data).unwrap();
    let m = &(&g * &g.adjoint()) + &ComplexMatrix::identity(4).unwrap().scale_real(0.05);
    DensityMatrix::from_unnormalized(m).unwrap()
}

/// Random SU(2) element `cos|n| I + i sin|n| n̂·σ`.
pub fn random_qubit_unitary(rng: &mut impl Rng) -> ComplexMatrix {
    let n: [f64; 3] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
    let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    let (s, c) = norm.sin_cos();
    let gen = &(&sigma_x().scale_real(n[0] / norm) + &sigma_y().scale_real(n[1] / norm))
        + &sigma_z().scale_real(n[2] / norm);
    &identity2().scale_real(c) + &gen.scale(C64::new(0.0, s))
}

/// `(U₁⊗U₂) ρ (U₁⊗U₂)†`.
pub fn local_rotate(rho: &DensityMatrix, u1: &ComplexMatrix, u2: &ComplexMatrix) -> DensityMatrix {
    let u = kron(u1, u2).unwrap();
    let m = &(&u * rho.matrix()) * &u.adjoint();
    DensityMatrix::from_unnormalized(m).unwrap()
}
