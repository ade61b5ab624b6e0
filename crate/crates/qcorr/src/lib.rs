//! Correlation measures for two-qubit XXZ spin chains with Dzyaloshinskii–Moriya
//! coupling.
//!
//! The crate computes four correlation measures for two-qubit states:
//!
//! * **Concurrence** `C` — the Wootters entanglement measure.
//! * **Classical correlation** `CC` — the maximum over projective measurements
//!   on one qubit of the information gained about the other.
//! * **Quantum discord** `QD` — mutual information minus classical correlation.
//! * **Geometric discord** `2·D_G` — twice the Hilbert–Schmidt distance to the
//!   closest zero-discord state, normalised so a Bell state scores 1.
//!
//! These are evaluated both for arbitrary density matrices (via exact
//! diagonalisation and measurement optimisation in [`measures`]) and through
//! closed-form expressions specialised to the two-site XXZ chain with DM
//! coupling and an applied field (in [`closedform`]), covering the Gibbs
//! thermal state and intrinsic-dephasing dynamics from Bell initial states.
//!
//! Supporting layers: [`qmat`] holds the dense complex-matrix kernel
//! (Kronecker products, partial traces, Hermitian eigensolver), [`model`]
//! builds the Hamiltonian and its states, [`sweep`] evaluates parameter grids
//! for plotting, [`verify`] cross-checks the closed forms against the
//! generic numerical route, and [`cli`] backs the `qcorr` binary.

pub mod cli;
pub mod closedform;
pub mod measures;
pub mod model;
mod optim;
pub mod qmat;
pub mod sweep;
pub mod verify;

pub use closedform::{
    dynamics_psi1, dynamics_psi2, thermal_cc_qd, thermal_concurrence, thermal_gmd, thermal_point,
    ClosedFormError, Psi1Form, Psi1Point, Psi2Point, ThermalIntermediates, ThermalPoint,
};
pub use measures::{
    bloch_decompose, classical_correlation, concurrence, concurrence_x, conditional_entropy,
    correlation_set, entropy, gmd, gmd_bruteforce, mutual_information, quantum_discord,
    BlochDecomposition, CorrelationSet, MeasureError, MeasurementOptimum, ProjectiveMeasurement,
};
pub use model::{
    analytic_eigensystem, bell_state, build_hamiltonian, gibbs_state, ground_state, milburn_evolve,
    BellState, EvolutionSpec, ModelError, SpinParams, ThermalSpec,
};
pub use qmat::{
    func_of_hermitian, hermitian_eig, kron, partial_trace, pauli_x, pauli_y, pauli_z,
    ComplexMatrix, DensityMatrix, HermitianEigensystem, QmatError, Subsystem, C64,
};
pub use sweep::{
    figure_names, figure_preset, run_sweep, Axis, AxisParam, Engine, FigurePanel, FigurePreset,
    Mode, Quantity, SweepError, SweepResult, SweepRow, SweepSpec,
};
pub use verify::{
    standard_report, verify_cases, verify_point, PointReport, QuantityCheck, VerifyCase,
    VerifyOutcome, VerifyReport,
};
