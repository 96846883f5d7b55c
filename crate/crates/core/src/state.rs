use crate::error::{Error, Result};
use crate::qmath::{hermitian_eigen, ComplexMatrix, NEG_CLAMP};

/// Trace deviation tolerated when validating a state.
pub const TRACE_TOL: f64 = 1e-10;

/// A validated density matrix: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_hermitian(1e-10) {
            return Err(Error::NotAState(format!(
                "not Hermitian (anti-Hermitian norm {:.3e})",
                m.anti_hermitian_norm()
            )));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::NotAState(format!("trace {tr} != 1")));
        }
        let spec = hermitian_eigen(&m)?;
        if let Some(&lo) = spec.eigenvalues.first() {
            if lo < -NEG_CLAMP {
                return Err(Error::NotAState(format!("negative eigenvalue {lo:.3e}")));
            }
        }
        Ok(Self(m))
    }

    /// Normalizes a positive semidefinite operator by its trace.
    pub fn from_unnormalized(m: ComplexMatrix) -> Result<Self> {
        let tr = m.trace().re;
        if !(tr > 0.0) || !tr.is_finite() {
            return Err(Error::NotAState(format!("trace {tr} is not positive")));
        }
        Self::new(m.scale_real(1.0 / tr))
    }

    /// `|ψ⟩⟨ψ|/⟨ψ|ψ⟩`.
    pub fn pure(psi: &[crate::qmath::C64]) -> Result<Self> {
        Self::from_unnormalized(ComplexMatrix::outer(psi)?)
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Ok(Self(ComplexMatrix::identity(dim)?.scale_real(1.0 / dim as f64)))
    }

    /// Wraps a matrix already known to be a state (e.g. built from a spectrum).
    pub(crate) fn from_trusted(m: ComplexMatrix) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// tr(ρ²).
    pub fn purity(&self) -> f64 {
        (self.0.try_mul(&self.0).expect("square")).trace().re
    }
}

impl AsRef<ComplexMatrix> for DensityMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.0
    }
}
