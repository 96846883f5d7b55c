//! Entropic and entanglement measures for two-qubit states.
//!
//! Quantum discord is the mutual information minus the classical correlation,
//! the latter being the largest information about the unmeasured qubit that a
//! rank-one projective measurement on the other qubit can extract. The
//! measurement is parametrized by the Bloch angles of its first projector
//! `Π₁ = |m⟩⟨m|`, `|m⟩ = cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`, and the maximum is
//! found by a coarse grid scan polished with Nelder–Mead.
//!
//! All entropies are in bits.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::optimize::{nelder_mead, NelderMeadOptions};
use crate::qmath::{
    clamp_nonnegative, hermitian_eigen, kron, matrix_sqrt, partial_trace, sigma_y, ComplexMatrix,
    Subsystem, C64,
};
use crate::state::DensityMatrix;

/// Discord values in `(−DISCORD_CLAMP, 0)` are round-off and reported as zero.
pub const DISCORD_CLAMP: f64 = 1e-9;
/// Outcomes with probability at or below this contribute nothing to the conditional entropy.
pub const OUTCOME_CUTOFF: f64 = 1e-14;
/// Largest magnitude allowed outside the diagonal and anti-diagonal of an X state.
pub const X_STATE_TOL: f64 = 1e-13;

const SEED_THETA: usize = 33;
const SEED_PHI: usize = 64;
const MAX_POLISHED_SEEDS: usize = 3;
const NM_OPTIONS: NelderMeadOptions = NelderMeadOptions {
    initial_step: PI / 64.0,
    diameter_tol: 1e-9,
    max_evaluations: 500,
};

/// Rank-one projective measurement on one qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement {
    /// Polar angle in `[0, π]`.
    pub theta: f64,
    /// Azimuth in `[0, 2π)`.
    pub phi: f64,
    pub side: Subsystem,
}

impl Measurement {
    /// Builds a measurement from arbitrary angles, folding them into the canonical ranges.
    pub fn new(theta: f64, phi: f64, side: Subsystem) -> Self {
        let two_pi = 2.0 * PI;
        let mut theta = theta.rem_euclid(two_pi);
        let mut phi = phi;
        if theta > PI {
            theta = two_pi - theta;
            phi += PI;
        }
        let mut phi = phi.rem_euclid(two_pi);
        if phi >= two_pi {
            phi = 0.0;
        }
        Self { theta, phi, side }
    }

    /// Entries `(Π₁₀₀, Π₁₀₁, Π₁₁₁)` of the first projector; `Π₁₁₀ = conj(Π₁₀₁)`.
    fn projector_entries(&self) -> (f64, C64, f64) {
        let (s, c) = (self.theta / 2.0).sin_cos();
        let off = C64::from_polar(c * s, -self.phi);
        (c * c, off, s * s)
    }

    /// First projector `|m⟩⟨m|` as a 2×2 matrix.
    pub fn projector(&self) -> ComplexMatrix {
        let (p00, p01, p11) = self.projector_entries();
        ComplexMatrix::from_row_major(
            2,
            vec![C64::new(p00, 0.0), p01, p01.conj(), C64::new(p11, 0.0)],
        )
        .unwrap()
    }

    /// Bloch vector of `|m⟩`.
    pub fn bloch(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// All correlation measures of one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationReport {
    pub mutual_information: f64,
    pub classical_correlation: f64,
    pub discord: f64,
    pub concurrence: f64,
    pub eof: f64,
    pub optimal_measurement: Measurement,
    pub optimizer_evaluations: usize,
}

fn xlog2x(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// Shannon entropy of a probability vector (entries clamped at the round-off threshold).
fn entropy_of(eigenvalues: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &l in eigenvalues {
        let l = clamp_nonnegative(l).map_err(|_| {
            Error::NotAState(format!("eigenvalue {l:.3e} below zero"))
        })?;
        s -= xlog2x(l);
    }
    Ok(s.max(0.0))
}

pub fn binary_entropy(p: f64) -> f64 {
    -xlog2x(p) - xlog2x(1.0 - p)
}

/// Von Neumann entropy `−tr ρ log₂ ρ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let spec = hermitian_eigen(rho.matrix())?;
    entropy_of(&spec.eigenvalues)
}

/// Eigenvalues of a Hermitian 2×2 `[[a, b], [b*, d]]`.
fn eigen2(a: f64, b: C64, d: f64) -> (f64, f64) {
    let mean = 0.5 * (a + d);
    let half_diff = 0.5 * (a - d);
    let r = (half_diff * half_diff + b.norm_sqr()).sqrt();
    (mean + r, mean - r)
}

/// `−Σ μ log₂(μ/p)` over the eigenvalues of an unnormalized 2×2 block of trace `p`.
fn weighted_entropy2(a: f64, b: C64, d: f64) -> f64 {
    let p = a + d;
    if p <= OUTCOME_CUTOFF {
        return 0.0;
    }
    let (hi, lo) = eigen2(a, b, d);
    let mut s = 0.0;
    for mu in [hi, lo] {
        if mu > 0.0 {
            s -= mu * (mu / p).log2();
        }
    }
    s.max(0.0)
}

/// Reduced states of both qubits.
fn reduced(rho: &DensityMatrix) -> (ComplexMatrix, ComplexMatrix) {
    (
        partial_trace(rho.matrix(), Subsystem::First).unwrap(),
        partial_trace(rho.matrix(), Subsystem::Second).unwrap(),
    )
}

/// `I(ρ) = S(ρᵃ) + S(ρᵇ) − S(ρ)`.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    check_two_qubit(rho)?;
    let (a, b) = reduced(rho);
    let sa = entropy_of(&hermitian_eigen(&a)?.eigenvalues)?;
    let sb = entropy_of(&hermitian_eigen(&b)?.eigenvalues)?;
    let s = von_neumann_entropy(rho)?;
    let i = sa + sb - s;
    if i < -1e-10 {
        return Err(Error::Consistency(format!("negative mutual information {i:.3e}")));
    }
    Ok(i.max(0.0))
}

fn check_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::InvalidDimension(format!(
            "two-qubit state expected, got {}x{}",
            rho.dim(),
            rho.dim()
        )));
    }
    Ok(())
}

/// Conditional entropy evaluator with the state's entries unpacked once.
struct ConditionalEntropy<'a> {
    rho: &'a ComplexMatrix,
    side: Subsystem,
    /// Reduced state of the unmeasured qubit.
    rest: [C64; 4],
}

impl<'a> ConditionalEntropy<'a> {
    fn new(rho: &'a DensityMatrix, side: Subsystem) -> Self {
        let rest_m = partial_trace(rho.matrix(), side.other()).unwrap();
        let rest = [rest_m.get(0, 0), rest_m.get(0, 1), rest_m.get(1, 0), rest_m.get(1, 1)];
        Self {
            rho: rho.matrix(),
            side,
            rest,
        }
    }

    /// Element of ρ with the measured qubit index `m` and the other qubit index `u`.
    #[inline]
    fn at(&self, m_row: usize, u_row: usize, m_col: usize, u_col: usize) -> C64 {
        match self.side {
            Subsystem::First => self.rho.get(2 * m_row + u_row, 2 * m_col + u_col),
            Subsystem::Second => self.rho.get(2 * u_row + m_row, 2 * u_col + m_col),
        }
    }

    /// `Σ_k p_k S(ρ_{rest|k})`.
    fn eval(&self, theta: f64, phi: f64) -> f64 {
        let m = Measurement::new(theta, phi, self.side);
        let (p00, p01, p11) = m.projector_entries();
        let p10 = p01.conj();
        // σ₁[u, u'] = tr_m[(Π₁ ⊗ I) ρ]_{u u'} = Σ_{x,y} Π₁[x, y] ρ[(y, u), (x, u')]
        let mut s1 = [C64::new(0.0, 0.0); 4];
        for (u, uc, slot) in [(0, 0, 0), (0, 1, 1), (1, 0, 2), (1, 1, 3)] {
            s1[slot] = self.at(0, u, 0, uc) * p00
                + self.at(1, u, 0, uc) * p01
                + self.at(0, u, 1, uc) * p10
                + self.at(1, u, 1, uc) * p11;
        }
        let s2 = [
            self.rest[0] - s1[0],
            self.rest[1] - s1[1],
            self.rest[2] - s1[2],
            self.rest[3] - s1[3],
        ];
        let h1 = weighted_entropy2(s1[0].re, 0.5 * (s1[1] + s1[2].conj()), s1[3].re);
        let h2 = weighted_entropy2(s2[0].re, 0.5 * (s2[1] + s2[2].conj()), s2[3].re);
        h1 + h2
    }
}

/// `S(ρ|{Π_k}) = Σ_k p_k S(ρ_{rest|k})` for the given measurement.
pub fn conditional_entropy(rho: &DensityMatrix, m: &Measurement) -> Result<f64> {
    check_two_qubit(rho)?;
    Ok(ConditionalEntropy::new(rho, m.side).eval(m.theta, m.phi))
}

/// Minimum angular separation (as a chord between ±Bloch vectors) for seeds to count as distinct.
const SEED_SEPARATION: f64 = 0.25;

fn same_measurement(a: &Measurement, b: &Measurement) -> bool {
    let (na, nb) = (a.bloch(), b.bloch());
    let plus: f64 = (0..3).map(|i| (na[i] - nb[i]).powi(2)).sum::<f64>().sqrt();
    let minus: f64 = (0..3).map(|i| (na[i] + nb[i]).powi(2)).sum::<f64>().sqrt();
    plus.min(minus) < SEED_SEPARATION
}

struct Optimum {
    conditional_entropy: f64,
    measurement: Measurement,
    evaluations: usize,
}

fn minimize_conditional_entropy(rho: &DensityMatrix, side: Subsystem) -> Optimum {
    let ce = ConditionalEntropy::new(rho, side);
    let nt = SEED_THETA;
    let np = SEED_PHI;
    let theta = |i: usize| i as f64 * PI / (nt - 1) as f64;
    let phi = |j: usize| 2.0 * PI * j as f64 / np as f64;

    let mut grid = vec![0.0; nt * np];
    for i in 0..nt {
        for j in 0..np {
            grid[i * np + j] = ce.eval(theta(i), phi(j));
        }
    }
    let mut evaluations = nt * np;

    // grid local minima (φ wraps; θ rows are clipped at the poles)
    let mut minima: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..nt {
        for j in 0..np {
            let v = grid[i * np + j];
            let mut is_min = true;
            'nb: for di in [-1i64, 0, 1] {
                let ii = i as i64 + di;
                if ii < 0 || ii >= nt as i64 {
                    continue;
                }
                for dj in [-1i64, 0, 1] {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let jj = (j as i64 + dj).rem_euclid(np as i64) as usize;
                    if grid[ii as usize * np + jj] < v {
                        is_min = false;
                        break 'nb;
                    }
                }
            }
            if is_min {
                minima.push((v, i, j));
            }
        }
    }
    minima.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut seeds: Vec<Measurement> = Vec::new();
    for &(_, i, j) in &minima {
        let m = Measurement::new(theta(i), phi(j), side);
        if seeds.iter().all(|s| !same_measurement(s, &m)) {
            seeds.push(m);
            if seeds.len() == MAX_POLISHED_SEEDS {
                break;
            }
        }
    }

    let (v0, i0, j0) = minima[0];
    let mut best = Optimum {
        conditional_entropy: v0,
        measurement: Measurement::new(theta(i0), phi(j0), side),
        evaluations: 0,
    };
    for seed in seeds {
        let r = nelder_mead(|x: &[f64; 2]| ce.eval(x[0], x[1]), [seed.theta, seed.phi], NM_OPTIONS);
        evaluations += r.evaluations;
        if r.value < best.conditional_entropy {
            best.conditional_entropy = r.value;
            best.measurement = Measurement::new(r.x[0], r.x[1], side);
        }
    }
    best.evaluations = evaluations;
    best
}

fn unmeasured_entropy(rho: &DensityMatrix, side: Subsystem) -> Result<f64> {
    let rest = partial_trace(rho.matrix(), side.other())?;
    entropy_of(&hermitian_eigen(&rest)?.eigenvalues)
}

/// Maximal classical correlation `max_Π [S(ρ_rest) − S(ρ|{Π_k})]` over projective
/// measurements on `side`, the maximizing measurement, and the evaluation count.
pub fn classical_correlation(
    rho: &DensityMatrix,
    side: Subsystem,
) -> Result<(f64, Measurement, usize)> {
    check_two_qubit(rho)?;
    let s_rest = unmeasured_entropy(rho, side)?;
    let opt = minimize_conditional_entropy(rho, side);
    let j = (s_rest - opt.conditional_entropy).max(0.0);
    Ok((j, opt.measurement, opt.evaluations))
}

/// Quantum discord with the measurement on `side`, plus concurrence and EoF.
pub fn quantum_discord(rho: &DensityMatrix, side: Subsystem) -> Result<CorrelationReport> {
    let mutual = mutual_information(rho)?;
    let (mut classical, measurement, evaluations) = classical_correlation(rho, side)?;
    if classical - mutual > DISCORD_CLAMP {
        return Err(Error::Consistency(format!(
            "classical correlation {classical} exceeds mutual information {mutual}"
        )));
    }
    classical = classical.min(mutual);
    let c = concurrence(rho)?;
    Ok(CorrelationReport {
        mutual_information: mutual,
        classical_correlation: classical,
        discord: mutual - classical,
        concurrence: c,
        eof: eof_from_concurrence(c),
        optimal_measurement: measurement,
        optimizer_evaluations: evaluations,
    })
}

/// Discord with the maximization replaced by an exhaustive `(θ, φ)` grid search over
/// `θ_i = iπ/(n_theta−1)`, `φ_j = 2πj/n_phi`. Never below the true discord.
pub fn discord_grid_oracle(
    rho: &DensityMatrix,
    side: Subsystem,
    n_theta: usize,
    n_phi: usize,
) -> Result<f64> {
    if n_theta < 2 || n_phi < 2 {
        return Err(Error::InvalidParameter(format!(
            "grid needs at least 2x2 points, got {n_theta}x{n_phi}"
        )));
    }
    let mutual = mutual_information(rho)?;
    let s_rest = unmeasured_entropy(rho, side)?;
    let ce = ConditionalEntropy::new(rho, side);
    let min_ce = (0..n_theta)
        .into_par_iter()
        .map(|i| {
            let theta = i as f64 * PI / (n_theta - 1) as f64;
            (0..n_phi)
                .map(|j| ce.eval(theta, 2.0 * PI * j as f64 / n_phi as f64))
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min);
    let classical = (s_rest - min_ce).max(0.0).min(mutual);
    Ok(mutual - classical)
}

fn is_x_state(m: &ComplexMatrix) -> bool {
    (0..4).all(|r| {
        (0..4).all(|c| r == c || r + c == 3 || m.get(r, c).norm() <= X_STATE_TOL)
    })
}

/// Closed-form concurrence `2·max(0, |ρ₁₄| − √(ρ₂₂ρ₃₃), |ρ₂₃| − √(ρ₁₁ρ₄₄))` for X states.
/// `None` when the state has weight outside the X pattern.
pub fn concurrence_x_state(rho: &DensityMatrix) -> Option<f64> {
    let m = rho.matrix();
    if m.dim() != 4 || !is_x_state(m) {
        return None;
    }
    let d: Vec<f64> = m.real_diagonal().iter().map(|&x| x.max(0.0)).collect();
    let a = m.get(0, 3).norm() - (d[1] * d[2]).sqrt();
    let b = m.get(1, 2).norm() - (d[0] * d[3]).sqrt();
    Some((2.0 * a.max(b).max(0.0)).min(1.0))
}

/// Concurrence from the eigenvalues of the Hermitian `√ρ·ρ̃·√ρ`, `ρ̃ = (σ_y⊗σ_y)ρ*(σ_y⊗σ_y)`.
pub fn concurrence_general(rho: &DensityMatrix) -> Result<f64> {
    check_two_qubit(rho)?;
    let yy = kron(&sigma_y(), &sigma_y())?;
    let flipped = &(&yy * &rho.matrix().conj()) * &yy;
    let root = matrix_sqrt(rho.matrix())?;
    let m = &(&root * &flipped) * &root;
    let m = (&m + &m.adjoint()).scale_real(0.5);
    let spec = hermitian_eigen(&m)?;
    let mut lambdas = spec
        .eigenvalues
        .iter()
        .map(|&mu| clamp_nonnegative(mu).map(f64::sqrt))
        .collect::<Result<Vec<f64>>>()?;
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(c.clamp(0.0, 1.0))
}

/// Wootters concurrence; the X-state closed form is used whenever it applies.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    check_two_qubit(rho)?;
    match concurrence_x_state(rho) {
        Some(c) => Ok(c),
        None => concurrence_general(rho),
    }
}

/// `E = H((1 + √(1 − C²))/2)`.
pub fn eof_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    if c == 0.0 {
        return 0.0;
    }
    let tau = (1.0 + (1.0 - c * c).max(0.0).sqrt()) / 2.0;
    binary_entropy(tau).clamp(0.0, 1.0)
}

/// Entanglement of formation in bits.
pub fn eof(rho: &DensityMatrix) -> Result<f64> {
    Ok(eof_from_concurrence(concurrence(rho)?))
}

/// Discord of the ground state of `ε(σ_z⊗I + I⊗σ_z) + J σ_x⊗σ_x`:
/// `−u log₂u − v log₂v` with `u = (2ε+λ)²/ζ`, `v = J²/ζ`, `ζ = J² + (2ε+λ)²`.
pub fn ground_state_discord_analytic(eps: f64, j: f64) -> Result<f64> {
    if eps == 0.0 && j == 0.0 {
        return Err(Error::InvalidParameter(
            "ground state is degenerate at ε = J = 0".into(),
        ));
    }
    if !eps.is_finite() || !j.is_finite() {
        return Err(Error::InvalidParameter("non-finite ε or J".into()));
    }
    if j == 0.0 {
        return Ok(0.0);
    }
    let lambda = (4.0 * eps * eps + j * j).sqrt();
    let a = 2.0 * eps + lambda;
    let zeta = j * j + a * a;
    let u = a * a / zeta;
    let v = j * j / zeta;
    Ok((-xlog2x(u) - xlog2x(v)).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::{build_hamiltonian, ground_state, gibbs_state, EffectiveParams, ThermalSpec};
    use crate::qmath::identity2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bell_phi_plus() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&[C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0)])
            .unwrap()
    }

    fn product(a: &ComplexMatrix, b: &ComplexMatrix) -> DensityMatrix {
        DensityMatrix::new(kron(a, b).unwrap()).unwrap()
    }

    fn qubit_state(x: f64, y: f64, z: f64) -> ComplexMatrix {
        ComplexMatrix::from_row_major(
            2,
            vec![
                C64::new((1.0 + z) / 2.0, 0.0),
                C64::new(x / 2.0, -y / 2.0),
                C64::new(x / 2.0, y / 2.0),
                C64::new((1.0 - z) / 2.0, 0.0),
            ],
        )
        .unwrap()
    }

    /// Conditional entropy from the explicit 4×4 sandwich `(Π_k⊗I)ρ(Π_k⊗I)`.
    fn sandwich_conditional_entropy(rho: &DensityMatrix, m: &Measurement) -> f64 {
        let p1 = m.projector();
        let p2 = &identity2() - &p1;
        let mut total = 0.0;
        for p in [p1, p2] {
            let op = match m.side {
                Subsystem::First => kron(&p, &identity2()).unwrap(),
                Subsystem::Second => kron(&identity2(), &p).unwrap(),
            };
            let post = &(&op * rho.matrix()) * &op;
            let pk = post.trace().re;
            if pk <= 1e-14 {
                continue;
            }
            let rest = partial_trace(&post.scale_real(1.0 / pk), m.side.other()).unwrap();
            let spec = hermitian_eigen(&rest).unwrap();
            let s: f64 = spec
                .eigenvalues
                .iter()
                .filter(|&&l| l > 0.0)
                .map(|&l| -l * l.log2())
                .sum();
            total += pk * s;
        }
        total
    }

    fn random_state(rng: &mut ChaCha8Rng) -> DensityMatrix {
        let g: Vec<C64> = (0..16)
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let g = ComplexMatrix::from_row_major(4, g).unwrap();
        DensityMatrix::from_unnormalized(&g * &g.adjoint()).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert!(von_neumann_entropy(&bell_phi_plus()).unwrap().abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(4).unwrap();
        assert!((von_neumann_entropy(&mixed).unwrap() - 2.0).abs() < 1e-14);
        let half = DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.5, 0.5, 0.0, 0.0]).unwrap())
            .unwrap();
        assert!((von_neumann_entropy(&half).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn mutual_information_examples() {
        let a = qubit_state(0.2, -0.1, 0.4);
        let b = qubit_state(-0.3, 0.5, 0.1);
        assert!(mutual_information(&product(&a, &b)).unwrap().abs() < 1e-12);
        assert!((mutual_information(&bell_phi_plus()).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_of_thermal_state_by_spectrum() {
        // ε = 1, J = 2, T = 0.5. Each entropy from eigenvalues computed independently:
        // global spectrum from the Hamiltonian's block eigenvalues, reduced states are diagonal
        // because ρ is an X state.
        let eps: f64 = 1.0;
        let j: f64 = 2.0;
        let beta = 2.0;
        let lambda = (4.0 * eps * eps + j * j).sqrt();
        let energies = [-lambda, lambda, -j, j];
        let w: Vec<f64> = energies.iter().map(|e| (-beta * e).exp()).collect();
        let z: f64 = w.iter().sum();
        let s_global: f64 = w.iter().map(|x| -(x / z) * (x / z).log2()).sum();
        let rho = gibbs_state(
            &build_hamiltonian(&EffectiveParams::symmetric(eps, j)),
            ThermalSpec::new(0.5).unwrap(),
        )
        .unwrap();
        let d = rho.matrix().real_diagonal();
        let pa = d[0] + d[1];
        let pb = d[0] + d[2];
        let expected = binary_entropy(pa) + binary_entropy(pb) - s_global;
        assert!((mutual_information(&rho).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn conditional_entropy_examples() {
        let a = qubit_state(0.2, -0.1, 0.4);
        let b = qubit_state(-0.3, 0.5, 0.1);
        let prod = product(&a, &b);
        let sb = von_neumann_entropy(&DensityMatrix::new(b.clone()).unwrap()).unwrap();
        for (t, p) in [(0.0, 0.0), (1.0, 2.0), (2.5, 5.0)] {
            let m = Measurement::new(t, p, Subsystem::First);
            assert!((conditional_entropy(&prod, &m).unwrap() - sb).abs() < 1e-12);
        }
        let m = Measurement::new(0.0, 0.0, Subsystem::First);
        assert!(conditional_entropy(&bell_phi_plus(), &m).unwrap().abs() < 1e-12);

        let rho = gibbs_state(
            &build_hamiltonian(&EffectiveParams::symmetric(0.0, 1.0)),
            ThermalSpec::new(0.5).unwrap(),
        )
        .unwrap();
        let m = Measurement::new(PI / 2.0, 0.0, Subsystem::First);
        let fast = conditional_entropy(&rho, &m).unwrap();
        assert!((fast - sandwich_conditional_entropy(&rho, &m)).abs() < 1e-12);
    }

    #[test]
    fn conditional_entropy_matches_sandwich_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..200 {
            let rho = random_state(&mut rng);
            for side in [Subsystem::First, Subsystem::Second] {
                let m = Measurement::new(
                    rng.random_range(0.0..PI),
                    rng.random_range(0.0..2.0 * PI),
                    side,
                );
                let fast = conditional_entropy(&rho, &m).unwrap();
                let slow = sandwich_conditional_entropy(&rho, &m);
                assert!((fast - slow).abs() < 1e-12, "{fast} vs {slow}");
            }
        }
    }

    #[test]
    fn measurement_folding() {
        let m = Measurement::new(-0.3, 0.2, Subsystem::First);
        assert!((m.theta - 0.3).abs() < 1e-15);
        assert!((m.phi - (0.2 + PI)).abs() < 1e-15);
        let m = Measurement::new(2.0 * PI + 0.1, -0.1, Subsystem::Second);
        assert!((m.theta - 0.1).abs() < 1e-14);
        assert!((m.phi - (2.0 * PI - 0.1)).abs() < 1e-14);
        // the folded projector is the same operator
        let a = Measurement { theta: -0.3, phi: 0.2, side: Subsystem::First }.projector();
        let b = Measurement::new(-0.3, 0.2, Subsystem::First).projector();
        assert!(crate::qmath::frobenius_distance(&a, &b).unwrap() < 1e-15);
    }

    #[test]
    fn classical_correlation_examples() {
        let prod = product(&qubit_state(0.1, 0.2, 0.3), &qubit_state(0.0, -0.4, 0.2));
        assert!(classical_correlation(&prod, Subsystem::First).unwrap().0.abs() < 1e-12);
        let (j, _, evals) = classical_correlation(&bell_phi_plus(), Subsystem::First).unwrap();
        assert!((j - 1.0).abs() < 1e-12);
        assert!(evals > SEED_THETA * SEED_PHI);
    }

    #[test]
    fn discord_examples() {
        let r = quantum_discord(&bell_phi_plus(), Subsystem::First).unwrap();
        assert!((r.discord - 1.0).abs() < 1e-10);
        assert!((r.concurrence - 1.0).abs() < 1e-10);
        assert!((r.eof - 1.0).abs() < 1e-10);

        let cc = DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.4, 0.1, 0.2, 0.3]).unwrap())
            .unwrap();
        let r = quantum_discord(&cc, Subsystem::First).unwrap();
        assert!(r.discord.abs() < 1e-9);
        assert!((r.discord - (r.mutual_information - r.classical_correlation)).abs() < 1e-12);
    }

    #[test]
    fn grid_oracle_examples() {
        let d = discord_grid_oracle(&bell_phi_plus(), Subsystem::First, 181, 360).unwrap();
        assert!((d - 1.0).abs() < 1e-6);
        let prod = product(&qubit_state(0.1, 0.2, 0.3), &qubit_state(0.0, -0.4, 0.2));
        assert!(discord_grid_oracle(&prod, Subsystem::Second, 5, 7).unwrap().abs() < 1e-9);
        assert!(discord_grid_oracle(&prod, Subsystem::First, 1, 7).is_err());
    }

    #[test]
    fn concurrence_examples() {
        assert!((concurrence(&bell_phi_plus()).unwrap() - 1.0).abs() < 1e-12);
        assert!((concurrence_general(&bell_phi_plus()).unwrap() - 1.0).abs() < 1e-7);
        let mixed = DensityMatrix::maximally_mixed(4).unwrap();
        assert_eq!(concurrence(&mixed).unwrap(), 0.0);
        assert!(concurrence_general(&mixed).unwrap() < 1e-12);
    }

    #[test]
    fn werner_concurrence_both_paths() {
        let bell = bell_phi_plus();
        let id = ComplexMatrix::identity(4).unwrap().scale_real(0.25);
        for k in 0..=20 {
            let p = k as f64 / 20.0;
            let w = DensityMatrix::new(&bell.matrix().scale_real(p) + &id.scale_real(1.0 - p))
                .unwrap();
            let expected = ((3.0 * p - 1.0) / 2.0).max(0.0);
            let x = concurrence_x_state(&w).unwrap();
            assert!((x - expected).abs() < 1e-12);
            if p < 1.0 {
                // full rank: the square-root path is well conditioned
                let g = concurrence_general(&w).unwrap();
                assert!((g - x).abs() < 1e-10, "p={p}: {g} vs {x}");
            }
        }
    }

    #[test]
    fn eof_examples() {
        assert_eq!(eof_from_concurrence(0.0), 0.0);
        assert!((eof_from_concurrence(1.0) - 1.0).abs() < 1e-15);
        let expected = -0.9 * 0.9f64.log2() - 0.1 * 0.1f64.log2();
        assert!((eof_from_concurrence(0.6) - expected).abs() < 1e-14);
    }

    #[test]
    fn analytic_ground_discord_examples() {
        assert!((ground_state_discord_analytic(0.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(ground_state_discord_analytic(1.0, 0.0).unwrap(), 0.0);
        assert_eq!(ground_state_discord_analytic(-1.0, 0.0).unwrap(), 0.0);
        assert!(matches!(
            ground_state_discord_analytic(0.0, 0.0),
            Err(Error::InvalidParameter(_))
        ));
        let d50 = ground_state_discord_analytic(1.0, 50.0).unwrap();
        assert!((d50 - 0.9988).abs() < 5e-4, "{d50}");
    }

    #[test]
    fn analytic_matches_ground_state_discord() {
        for ratio in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 25.0, 50.0] {
            for eps in [1.0, -0.7] {
                let j = ratio * eps;
                let rho = ground_state(&build_hamiltonian(&EffectiveParams::symmetric(eps, j)))
                    .unwrap();
                let numeric = quantum_discord(&rho, Subsystem::First).unwrap().discord;
                let analytic = ground_state_discord_analytic(eps, j).unwrap();
                assert!((numeric - analytic).abs() < 5e-5, "{ratio}: {numeric} vs {analytic}");
            }
        }
    }

    #[test]
    fn degenerate_ground_mixture_has_no_discord() {
        // ε = 0: uniform mixture over the two-dimensional ground space, (I − σx⊗σx)/4
        let rho = ground_state(&build_hamiltonian(&EffectiveParams::symmetric(0.0, 1.0))).unwrap();
        let r = quantum_discord(&rho, Subsystem::First).unwrap();
        assert!(r.discord < 1e-9);
        assert_eq!(r.concurrence, 0.0);
        assert!((r.mutual_information - 1.0).abs() < 1e-12);
    }
}
