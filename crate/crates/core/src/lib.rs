//! Dissipative quantal interferometry with non-Hermitian Hamiltonians.
//!
//! States are generalized density operators `rho = sum_k w_k |alpha_k><beta_k|`
//! over a biorthonormal basis and evolve as `rho -> L rho R^†` with
//! `i dL/dt = H L`, `i dR/dt = H^† R`. On top of that sit a Mach-Zehnder
//! pipeline with complex relative phase and visibility, the complex
//! mixed-state geometric phase with its gauge freedom, and a dissipative
//! one-qubit geometric phase gate.
//!
//! Everything is generic over the real scalar (`f32` or `f64`); the
//! aliases at the crate root fix it to `f64`.

pub mod algebra;
pub mod biortho;
pub mod error;
pub mod gate;
pub mod geometric;
pub mod interferometer;
pub mod propagator;
pub mod scalar;

pub use algebra::{gates, ComplexMatrix, TimeGrid, Vector};
pub use biortho::{
    assemble_density, binormalize, decompose_density, evolve_density, GeneralizedDensityOperator, GeneralizedProjector,
    Tolerances,
};
pub use error::{Error, Result};
pub use gate::{
    gate_report, geometric_phase_closed, ideal_gate, input_state, omega_expansion, phase_visibility_closed,
    phi_expansion, robustness_order, solid_angle, GateParams, GateReport, Quantity,
};
pub use geometric::{
    connection, connection_in_gauge, cyclic_pure_phase, gauge_transform, geometric_phase, geometric_phase_path,
    parallel_defect, parallel_factors, ConnectionIntegral, CyclicPhase, GaugeFunction,
};
pub use interferometer::{
    channel0_block_trace, channel0_intensity, output_state, polar_interference, polar_interference_sweep,
    relative_phase_visibility, relative_phase_visibility_along, scalar_intensity, standard_intensity, AbsorberSetting,
    ArmConfiguration, InterferenceResult,
};
pub use propagator::{
    binorm_defect, default_grid, evolve, evolve_constant, evolve_with_tolerance, ConstantHamiltonian, FnHamiltonian,
    Hamiltonian, PropagatorPair,
};
pub use scalar::{cplx, Real};

pub type Complex64 = num_complex::Complex<f64>;
pub type Matrix = ComplexMatrix<f64>;
pub type Grid = TimeGrid<f64>;
pub type DensityOperator = GeneralizedDensityOperator<f64>;
pub type Propagators = PropagatorPair<f64>;
pub type Gate = GateParams<f64>;
pub type Gauge = GaugeFunction<f64>;
