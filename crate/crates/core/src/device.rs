//! Charge-qubit circuit model.
//!
//! Two Cooper-pair boxes share a common inductance `L`. Each box is biased by a
//! gate voltage through capacitance `C` and coupled to its reservoir through two
//! dc SQUIDs threaded by a local flux `Φ_X`. In the two-level (charge) basis
//! `|0⟩ = |n⟩, |1⟩ = |n+1⟩` the circuit reduces to
//!
//! ```text
//! H = Σ_k [ε_k σ_z(k) − Ē_Jk σ_x(k)] + J₁₂ σ_x(1) σ_x(2)
//! ```
//!
//! All energies are stored in kelvin (E / k_B), so `β = 1/T` with `T` in kelvin.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{
    cos_pi, hermitian_eigen, identity2, kron, sigma_x, sigma_z, sin_pi, ComplexMatrix, Subsystem,
    C64,
};
use crate::state::DensityMatrix;

/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602176634e-19;
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380649e-23;
/// Superconducting flux quantum h/2e, Wb.
pub const FLUX_QUANTUM: f64 = 2.067833848e-15;

/// Physical controls and circuit constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeviceParams {
    /// Shared inductance, H.
    pub l_h: f64,
    /// Gate capacitance, F.
    pub c_f: f64,
    /// Junction capacitance, F.
    pub c_j0_f: f64,
    /// Single-SQUID Josephson energy, K.
    pub e_j0_k: f64,
    /// Cooper-pair number offset.
    pub n: i64,
    /// Gate voltages, V.
    pub v_x1_v: f64,
    pub v_x2_v: f64,
    /// Fluxes in units of Φ₀.
    pub phi_e: f64,
    pub phi_x1: f64,
    pub phi_x2: f64,
    /// Proportionality constant of the intrabit coupling.
    pub xi: f64,
}

impl Default for DeviceParams {
    fn default() -> Self {
        Self {
            l_h: 30e-9,
            c_f: 1e-6,
            c_j0_f: 1e-5,
            e_j0_k: 0.02,
            n: 0,
            v_x1_v: 20e-6,
            v_x2_v: 20e-6,
            phi_e: 0.5,
            phi_x1: 0.0,
            phi_x2: 0.0,
            xi: 1.0,
        }
    }
}

impl DeviceParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.l_h,
            self.c_f,
            self.c_j0_f,
            self.e_j0_k,
            self.v_x1_v,
            self.v_x2_v,
            self.phi_e,
            self.phi_x1,
            self.phi_x2,
            self.xi,
        ];
        if finite.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("non-finite device parameter".into()));
        }
        if self.l_h <= 0.0 {
            return Err(Error::InvalidParameter(format!("L = {} must be > 0", self.l_h)));
        }
        if self.c_f <= 0.0 || self.c_j0_f <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "capacitances must be > 0 (C = {}, C_J0 = {})",
                self.c_f, self.c_j0_f
            )));
        }
        if self.e_j0_k < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "E_J0 = {} must be >= 0",
                self.e_j0_k
            )));
        }
        Ok(())
    }

    fn voltage(&self, which: Subsystem) -> f64 {
        match which {
            Subsystem::First => self.v_x1_v,
            Subsystem::Second => self.v_x2_v,
        }
    }

    fn phi_x(&self, which: Subsystem) -> f64 {
        match which {
            Subsystem::First => self.phi_x1,
            Subsystem::Second => self.phi_x2,
        }
    }

    /// Sets both gate voltages.
    pub fn with_voltage(mut self, v: f64) -> Self {
        self.v_x1_v = v;
        self.v_x2_v = v;
        self
    }

    /// Sets both local SQUID fluxes.
    pub fn with_phi_x(mut self, phi: f64) -> Self {
        self.phi_x1 = phi;
        self.phi_x2 = phi;
        self
    }

    /// Effective Hamiltonian coefficients for these controls.
    pub fn effective(&self) -> Result<EffectiveParams> {
        self.validate()?;
        Ok(EffectiveParams {
            eps1: epsilon_from_voltage(self, Subsystem::First)?,
            eps2: epsilon_from_voltage(self, Subsystem::Second)?,
            ej1: intrabit_coupling(self, Subsystem::First),
            ej2: intrabit_coupling(self, Subsystem::Second),
            j12: interbit_coupling(self),
        })
    }
}

/// Hamiltonian coefficients, all in kelvin.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EffectiveParams {
    #[serde(rename = "eps1_k")]
    pub eps1: f64,
    #[serde(rename = "eps2_k")]
    pub eps2: f64,
    #[serde(rename = "ej1_k")]
    pub ej1: f64,
    #[serde(rename = "ej2_k")]
    pub ej2: f64,
    #[serde(rename = "j12_k")]
    pub j12: f64,
}

impl EffectiveParams {
    /// `ε₁ = ε₂ = eps`, `Ē_J = 0`, `J₁₂ = j`: the Ising-like regime reached at `Φ_e = Φ₀/2`.
    pub fn symmetric(eps: f64, j: f64) -> Self {
        Self {
            eps1: eps,
            eps2: eps,
            ej1: 0.0,
            ej2: 0.0,
            j12: j,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if [self.eps1, self.eps2, self.ej1, self.ej2, self.j12]
            .iter()
            .all(|x| x.is_finite())
        {
            Ok(())
        } else {
            Err(Error::InvalidParameter("non-finite Hamiltonian coefficient".into()))
        }
    }

    /// True when `closed_form_thermal` applies.
    pub fn is_symmetric_ising(&self) -> bool {
        self.ej1 == 0.0 && self.ej2 == 0.0 && self.eps1 == self.eps2
    }
}

/// Temperature in kelvin; `0` selects the ground-space projector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThermalSpec {
    pub temperature_k: f64,
}

impl Default for ThermalSpec {
    fn default() -> Self {
        Self { temperature_k: 0.0 }
    }
}

impl ThermalSpec {
    pub fn new(temperature_k: f64) -> Result<Self> {
        let spec = Self { temperature_k };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.temperature_k.is_nan() || self.temperature_k < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "temperature {} K must be >= 0",
                self.temperature_k
            )));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.temperature_k == 0.0
    }
}

/// `E_c = 2e²/(C + C_J0)` in kelvin.
pub fn charge_energy(p: &DeviceParams) -> Result<f64> {
    let total = p.c_f + p.c_j0_f;
    if !(total > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "total capacitance {total} F must be > 0"
        )));
    }
    Ok(2.0 * ELEMENTARY_CHARGE * ELEMENTARY_CHARGE / total / BOLTZMANN)
}

/// `ε = [C·V_X/e − (2n+1)]·E_c/2` in kelvin.
pub fn epsilon_from_voltage(p: &DeviceParams, which: Subsystem) -> Result<f64> {
    let ec = charge_energy(p)?;
    let bracket = p.c_f * p.voltage(which) / ELEMENTARY_CHARGE - (2 * p.n + 1) as f64;
    Ok(bracket * ec / 2.0)
}

/// `Ē_J = ξ·2E_J0·cos(πΦ_X/Φ₀)·cos(πΦ_e/Φ₀)` in kelvin; exactly zero at `Φ_e = Φ₀/2`.
pub fn intrabit_coupling(p: &DeviceParams, which: Subsystem) -> f64 {
    p.xi * 2.0 * p.e_j0_k * cos_pi(p.phi_x(which)) * cos_pi(p.phi_e)
}

/// Inductive coupling `J₁₂ = −π²L·E_J1·E_J2·sin²(πΦ_e/Φ₀)/Φ₀²` in kelvin,
/// with `E_Jk = 2E_J0·cos(πΦ_Xk/Φ₀)`.
pub fn interbit_coupling(p: &DeviceParams) -> f64 {
    let ej0 = p.e_j0_k * BOLTZMANN;
    let prefactor = 4.0 * ej0 * ej0 * std::f64::consts::PI.powi(2) * p.l_h
        / (FLUX_QUANTUM * FLUX_QUANTUM);
    let s = sin_pi(p.phi_e);
    -prefactor * cos_pi(p.phi_x1) * cos_pi(p.phi_x2) * s * s / BOLTZMANN
}

/// Two-qubit Hamiltonian in the basis `|00⟩, |01⟩, |10⟩, |11⟩`.
pub fn build_hamiltonian(eff: &EffectiveParams) -> ComplexMatrix {
    let i = identity2();
    let x = sigma_x();
    let z = sigma_z();
    let zi = kron(&z, &i).unwrap();
    let iz = kron(&i, &z).unwrap();
    let xi = kron(&x, &i).unwrap();
    let ix = kron(&i, &x).unwrap();
    let xx = kron(&x, &x).unwrap();
    let mut h = ComplexMatrix::zeros(4).unwrap();
    for (op, k) in [
        (&zi, eff.eps1),
        (&iz, eff.eps2),
        (&xi, -eff.ej1),
        (&ix, -eff.ej2),
        (&xx, eff.j12),
    ] {
        h = &h + &op.scale_real(k);
    }
    h
}

/// Relative width of the window treated as the ground eigenspace at `T = 0`.
const GROUND_SPACE_TOL: f64 = 1e-10;

/// Thermal state `exp(−H/T)/Z`; at `T = 0` the uniform mixture over the ground eigenspace.
pub fn gibbs_state(h: &ComplexMatrix, spec: ThermalSpec) -> Result<DensityMatrix> {
    spec.validate()?;
    let spectrum = hermitian_eigen(h)?;
    let e0 = spectrum.eigenvalues[0];
    let weights: Vec<f64> = if spec.is_zero() {
        let window = GROUND_SPACE_TOL * h.frobenius_norm();
        spectrum
            .eigenvalues
            .iter()
            .map(|&e| if e - e0 <= window { 1.0 } else { 0.0 })
            .collect()
    } else {
        let beta = 1.0 / spec.temperature_k;
        spectrum
            .eigenvalues
            .iter()
            .map(|&e| (-(e - e0) * beta).exp())
            .collect()
    };
    let z: f64 = weights.iter().sum();
    let n = h.dim();
    let v = &spectrum.eigenvectors;
    let mut out = ComplexMatrix::zeros(n)?;
    for r in 0..n {
        for c in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for (k, &w) in weights.iter().enumerate() {
                if w != 0.0 {
                    acc += v.get(r, k) * v.get(c, k).conj() * (w / z);
                }
            }
            out.set(r, c, acc);
        }
    }
    Ok(DensityMatrix::from_trusted(out))
}

/// Ground state (or ground-space mixture) of the Hamiltonian.
pub fn ground_state(h: &ComplexMatrix) -> Result<DensityMatrix> {
    gibbs_state(h, ThermalSpec { temperature_k: 0.0 })
}

/// `(cosh(x), sinh(x))` both scaled by `e^{−m}`.
fn scaled_hyperbolic(x: f64, m: f64) -> (f64, f64) {
    let a = (x - m).exp();
    let b = (-x - m).exp();
    ((a + b) / 2.0, (a - b) / 2.0)
}

/// Closed-form thermal state of `H = ε(σ_z⊗I + I⊗σ_z) + J σ_x⊗σ_x`.
///
/// Uses the normalization `α = J²λ²` with `λ = √(4ε² + J²)`; this is the value
/// for which the closed form equals `exp(−H/T)/Z` exactly. The often-quoted
/// `α = J⁴ − 12ε⁴` does not reproduce the Gibbs state.
pub fn closed_form_thermal(eff: &EffectiveParams, t: f64) -> Result<DensityMatrix> {
    if !eff.is_symmetric_ising() {
        return Err(Error::UnsupportedRegime(
            "closed form needs Ē_J1 = Ē_J2 = 0 and ε₁ = ε₂; use gibbs_state".into(),
        ));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::UnsupportedRegime(format!(
            "closed form needs 0 < T < ∞ (got {t}); use gibbs_state"
        )));
    }
    let j = eff.j12;
    if j == 0.0 {
        return Err(Error::UnsupportedRegime(
            "closed form is singular at J₁₂ = 0; use gibbs_state".into(),
        ));
    }
    let eps = eff.eps1;
    let beta = 1.0 / t;
    let lambda = (4.0 * eps * eps + j * j).sqrt();
    // everything below is scaled by e^{-m}; the scale cancels in ρ = (...)/Z
    let m = beta * lambda.max(j.abs());
    let (ch_l, sh_l) = scaled_hyperbolic(beta * lambda, m);
    let (ch_j, sh_j) = scaled_hyperbolic(beta * j, m);

    let w_minus = j * j * (lambda * lambda * ch_l - 2.0 * eps * lambda * sh_l);
    let w_plus = j * j * (lambda * lambda * ch_l + 2.0 * eps * lambda * sh_l);
    let alpha = j * j * lambda * lambda;
    let gamma = j * j * j * lambda * sh_l;
    let z = 2.0 * ch_l + 2.0 * ch_j;

    let mut rho = ComplexMatrix::zeros(4)?;
    let re = |x: f64| C64::new(x, 0.0);
    rho.set(0, 0, re(w_minus / (alpha * z)));
    rho.set(3, 3, re(w_plus / (alpha * z)));
    rho.set(1, 1, re(ch_j / z));
    rho.set(2, 2, re(ch_j / z));
    rho.set(1, 2, re(-sh_j / z));
    rho.set(2, 1, re(-sh_j / z));
    rho.set(0, 3, re(-gamma / (alpha * z)));
    rho.set(3, 0, re(-gamma / (alpha * z)));
    Ok(DensityMatrix::from_trusted(rho))
}

/// Thermal state of the Hamiltonian built from `eff`.
pub fn thermal_state(eff: &EffectiveParams, spec: ThermalSpec) -> Result<DensityMatrix> {
    eff.validate()?;
    gibbs_state(&build_hamiltonian(eff), spec)
}
