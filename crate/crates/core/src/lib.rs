//! Thermal quantum discord and entanglement in a two-qubit Josephson
//! charge-qubit circuit.
//!
//! - [`qmath`]: 2×2 / 4×4 complex linear algebra (Jacobi eigensolver, partial trace).
//! - [`device`]: circuit controls → Hamiltonian coefficients, Gibbs and ground states.
//! - [`correlations`]: entropies, discord, concurrence, entanglement of formation.
//! - [`sweep`]: parameter sweeps, figure presets and critical-point searches.
//! - [`cli`]: the `jqdiscord` command-line front end.

pub mod cli;
pub mod correlations;
pub mod device;
pub mod error;
pub mod optimize;
pub mod qmath;
pub mod state;
pub mod sweep;

pub use correlations::{
    classical_correlation, concurrence, conditional_entropy, discord_grid_oracle, eof,
    ground_state_discord_analytic, mutual_information, quantum_discord, von_neumann_entropy,
    CorrelationReport, Measurement,
};
pub use device::{
    build_hamiltonian, closed_form_thermal, gibbs_state, thermal_state, DeviceParams,
    EffectiveParams, ThermalSpec,
};
pub use error::{Error, Result};
pub use qmath::{ComplexMatrix, Subsystem, C64};
pub use state::DensityMatrix;
