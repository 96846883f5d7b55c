//! Dense complex linear algebra for one- and two-qubit operators.
//!
//! Everything here works on 2×2 or 4×4 matrices in the computational basis
//! `|00⟩, |01⟩, |10⟩, |11⟩` (first qubit is the most significant index).
//! Hermitian eigenproblems are solved with a cyclic complex Jacobi method,
//! which at these sizes converges in a handful of sweeps and is fully
//! deterministic.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Relative tolerance on the anti-Hermitian part accepted by [`hermitian_eigen`].
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Jacobi stops once the off-diagonal norm falls below this fraction of ‖A‖_F.
const JACOBI_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;
/// Eigenvalues in `[-NEG_CLAMP, 0)` are treated as round-off and clamped to zero.
pub const NEG_CLAMP: f64 = 1e-12;

/// Which qubit of a two-qubit register an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    First,
    Second,
}

impl Subsystem {
    pub fn other(self) -> Self {
        match self {
            Subsystem::First => Subsystem::Second,
            Subsystem::Second => Subsystem::First,
        }
    }
}

/// Square complex matrix of dimension 2 or 4, stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(Error::InvalidDimension(format!(
            "expected 2 or 4, got {dim}"
        )))
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            data: vec![ZERO; dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        Ok(m)
    }

    /// Builds a matrix from `dim²` row-major entries.
    pub fn from_row_major(dim: usize, data: Vec<C64>) -> Result<Self> {
        check_dim(dim)?;
        if data.len() != dim * dim {
            return Err(Error::InvalidDimension(format!(
                "{} entries for a {dim}x{dim} matrix",
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_row_major(dim: usize, data: &[f64]) -> Result<Self> {
        Self::from_row_major(dim, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * m.dim + i] = C64::new(d, 0.0);
        }
        Ok(m)
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) state vector.
    pub fn outer(psi: &[C64]) -> Result<Self> {
        let mut m = Self::zeros(psi.len())?;
        let n = m.dim;
        for r in 0..n {
            for c in 0..n {
                m.data[r * n + c] = psi[r] * psi[c].conj();
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for r in 0..n {
            for c in 0..n {
                out.data[c * n + r] = self.data[r * n + c].conj();
            }
        }
        out
    }

    /// Entrywise complex conjugate (ρ* in the computational basis).
    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, k: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * k).collect(),
        }
    }

    pub fn scale_real(&self, k: f64) -> Self {
        self.scale(C64::new(k, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ‖A − A†‖_F.
    pub fn anti_hermitian_norm(&self) -> f64 {
        let n = self.dim;
        let mut acc = 0.0;
        for r in 0..n {
            for c in 0..n {
                acc += (self.get(r, c) - self.get(c, r).conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        self.anti_hermitian_norm() <= rel_tol * self.frobenius_norm().max(1.0)
    }

    /// Diagonal entries as reals (imaginary parts discarded).
    pub fn real_diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i).re).collect()
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        same_dim(self, rhs)?;
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    out[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        Ok(Self { dim: n, data: out })
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        same_dim(self, rhs)?;
        Ok(self.zip_with(rhs, |a, b| a + b))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        same_dim(self, rhs)?;
        Ok(self.zip_with(rhs, |a, b| a - b))
    }

    /// Commutator `[A, B] = AB − BA`.
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        self.try_mul(rhs)?.try_sub(&rhs.try_mul(self)?)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

fn same_dim(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.dim != b.dim {
        return Err(Error::InvalidDimension(format!(
            "{}x{} vs {}x{}",
            a.dim, a.dim, b.dim, b.dim
        )));
    }
    Ok(())
}

// Operator impls panic on dimension mismatch; use the `try_*` forms when
// dimensions are not known statically.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.try_mul(rhs).expect("matrix dimension mismatch")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        self.try_add(rhs).expect("matrix dimension mismatch")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        self.try_sub(rhs).expect("matrix dimension mismatch")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for c in 0..self.dim {
                let z = self.get(r, c);
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub fn identity2() -> ComplexMatrix {
    ComplexMatrix::identity(2).unwrap()
}

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_real_row_major(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_row_major(
        2,
        vec![ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO],
    )
    .unwrap()
}

/// Pauli Z with `σ_z|0⟩ = +|0⟩`.
pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_real_row_major(2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
}

/// Kronecker product of two single-qubit operators.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim != 2 || b.dim != 2 {
        return Err(Error::InvalidDimension(format!(
            "kron expects two 2x2 operands, got {}x{} and {}x{}",
            a.dim, a.dim, b.dim, b.dim
        )));
    }
    let mut out = ComplexMatrix::zeros(4)?;
    for i in 0..2 {
        for j in 0..2 {
            let aij = a.get(i, j);
            for k in 0..2 {
                for l in 0..2 {
                    out.set(2 * i + k, 2 * j + l, aij * b.get(k, l));
                }
            }
        }
    }
    Ok(out)
}

/// Reduced state of the `keep` qubit of a 4×4 operator.
pub fn partial_trace(rho: &ComplexMatrix, keep: Subsystem) -> Result<ComplexMatrix> {
    if rho.dim != 4 {
        return Err(Error::InvalidDimension(format!(
            "partial trace expects a 4x4 operator, got {}x{}",
            rho.dim, rho.dim
        )));
    }
    let mut out = ComplexMatrix::zeros(2)?;
    for r in 0..2 {
        for c in 0..2 {
            let z = match keep {
                Subsystem::First => rho.get(2 * r, 2 * c) + rho.get(2 * r + 1, 2 * c + 1),
                Subsystem::Second => rho.get(r, c) + rho.get(2 + r, 2 + c),
            };
            out.set(r, c, z);
        }
    }
    Ok(out)
}

pub fn frobenius_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    Ok(a.try_sub(b)?.frobenius_norm())
}

/// Eigendecomposition `A = V·diag(λ)·V†` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    /// `V·diag(f(λ))·V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvectors.dim;
        let v = &self.eigenvectors;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n).unwrap();
        for r in 0..n {
            for c in 0..n {
                let mut acc = ZERO;
                for k in 0..n {
                    acc += v.get(r, k) * v.get(c, k).conj() * fl[k];
                }
                out.set(r, c, acc);
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| l)
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        let n = self.eigenvectors.dim;
        (0..n).map(|r| self.eigenvectors.get(r, k)).collect()
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim;
    let mut acc = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                acc += a.get(r, c).norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Cyclic Jacobi eigendecomposition of a Hermitian 2×2 or 4×4 matrix.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<Spectrum> {
    let n = a.dim;
    let anti = a.anti_hermitian_norm();
    if anti > HERMITIAN_TOL * a.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian(anti));
    }
    // work on the exactly Hermitian part
    let mut m = a.adjoint();
    for (x, y) in m.data.iter_mut().zip(&a.data) {
        *x = (*x + *y) * 0.5;
    }
    let mut v = ComplexMatrix::identity(n)?;
    let scale = m.frobenius_norm();
    let target = JACOBI_TOL * scale;

    let mut converged = off_diagonal_norm(&m) <= target;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence(sweeps));
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                jacobi_rotate(&mut m, &mut v, p, q);
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&m) <= target;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag = m.real_diagonal();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n)?;
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            eigenvectors.set(r, dst, v.get(r, src));
        }
    }
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// One Jacobi step annihilating `m[p][q]`: `m ← U†mU`, `v ← vU`.
fn jacobi_rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = m.dim;
    let apq = m.get(p, q);
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let phase = apq / g;
    let app = m.get(p, p).re;
    let aqq = m.get(q, q).re;
    let tau = (aqq - app) / (2.0 * g);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // U_pp = c, U_pq = s·e^{iα}, U_qp = −s·e^{−iα}, U_qq = c
    let u_pq = phase * s;
    let u_qp = -phase.conj() * s;

    for k in 0..n {
        let akp = m.get(k, p);
        let akq = m.get(k, q);
        m.set(k, p, akp * c + akq * u_qp);
        m.set(k, q, akp * u_pq + akq * c);
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * c + vkq * u_qp);
        v.set(k, q, vkp * u_pq + vkq * c);
    }
    for k in 0..n {
        let apk = m.get(p, k);
        let aqk = m.get(q, k);
        m.set(p, k, apk * c + aqk * u_qp.conj());
        m.set(q, k, apk * u_pq.conj() + aqk * c);
    }
    m.set(p, q, ZERO);
    m.set(q, p, ZERO);
    let dp = m.get(p, p).re;
    let dq = m.get(q, q).re;
    m.set(p, p, C64::new(dp, 0.0));
    m.set(q, q, C64::new(dq, 0.0));
}

/// `V·diag(f(λ))·V†` for Hermitian `a`. Fails if `f` is non-finite at any eigenvalue.
pub fn matrix_function(a: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let spec = hermitian_eigen(a)?;
    for &l in &spec.eigenvalues {
        let y = f(l);
        if !y.is_finite() {
            return Err(Error::Domain(format!(
                "function undefined at eigenvalue {l:.6e}"
            )));
        }
    }
    Ok(spec.reconstruct_with(f))
}

/// Clamps round-off negatives in `[-NEG_CLAMP, 0)` to zero.
pub fn clamp_nonnegative(x: f64) -> Result<f64> {
    if x >= 0.0 {
        Ok(x)
    } else if x >= -NEG_CLAMP {
        Ok(0.0)
    } else {
        Err(Error::Domain(format!("negative eigenvalue {x:.6e}")))
    }
}

/// Principal square root of a positive semidefinite Hermitian matrix.
pub fn matrix_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spec = hermitian_eigen(a)?;
    for &l in &spec.eigenvalues {
        clamp_nonnegative(l)?;
    }
    Ok(spec.reconstruct_with(|l| l.max(0.0).sqrt()))
}

/// Cosine of `π·x`, with exact zeros at half-integers and exact sign flip under `x → x + 1`.
pub fn cos_pi(x: f64) -> f64 {
    let mut r = x.rem_euclid(2.0);
    let mut sign = 1.0;
    if r >= 1.0 {
        r -= 1.0;
        sign = -1.0;
    }
    // r ∈ [0, 1): cos(πr) = sin(π(½ − r))
    sign * (std::f64::consts::PI * (0.5 - r)).sin()
}

pub fn sin_pi(x: f64) -> f64 {
    cos_pi(x - 0.5)
}
