//! Two-site XXZ spin chain with Dzyaloshinskii–Moriya coupling and an applied
//! magnetic field, plus the states this crate studies on it.
//!
//! In the product basis `{|00>, |01>, |10>, |11>}` (first qubit owns the most
//! significant bit) the Hamiltonian is
//!
//! ```text
//!     [ (Jz + 2B)/2      0           0          0       ]
//!     [      0        -Jz/2       J - iD        0       ]
//!     [      0        J + iD      -Jz/2         0       ]
//!     [      0           0           0      (Jz - 2B)/2 ]
//! ```
//!
//! where `J` is the planar exchange, `Jz` the axial anisotropy, `B` the
//! uniform field, and `D` the z-axis DM coupling strength. Its spectrum is
//! known in closed form: `|00>` and `|11>` are eigenvectors with energies
//! `(Jz ± 2B)/2`, and the one-excitation block is diagonalised by
//! `(|01> ± e^{i chi} |10>)/sqrt(2)` with energies `-Jz/2 ± mu`, where
//! `mu = sqrt(J^2 + D^2)` and `e^{i chi} = (J + iD)/mu`.

use crate::qmat::{ComplexMatrix, DensityMatrix, HermitianEigensystem, QmatError, C64};
use thiserror::Error;

/// Relative degeneracy window used when collecting the ground manifold.
const GROUND_DEGENERACY_TOL: f64 = 1e-9;

/// Errors from model construction and evolution.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("temperature must be positive and finite, got {0}")]
    NonPositiveTemperature(f64),
    #[error("decoherence rate must be non-negative and finite, got {0}")]
    NegativeRate(f64),
    #[error("time must be non-negative and finite, got {0}")]
    NegativeTime(f64),
    #[error(transparent)]
    Mat(#[from] QmatError),
}

/// Couplings of the two-site chain: planar exchange `j`, axial anisotropy
/// `j_z`, uniform field `b`, and DM strength `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinParams {
    pub j: f64,
    pub j_z: f64,
    pub b: f64,
    pub d: f64,
}

impl SpinParams {
    pub fn new(j: f64, j_z: f64, b: f64, d: f64) -> Self {
        Self { j, j_z, b, d }
    }

    /// Effective planar coupling `mu = sqrt(j^2 + d^2)`.
    pub fn mu(&self) -> f64 {
        self.j.hypot(self.d)
    }
}

/// A validated positive temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalSpec {
    temperature: f64,
}

impl ThermalSpec {
    pub fn new(temperature: f64) -> Result<Self, ModelError> {
        if !temperature.is_finite() || temperature <= 0.0 {
            return Err(ModelError::NonPositiveTemperature(temperature));
        }
        Ok(Self { temperature })
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }
}

/// A validated dephasing evolution: intrinsic-decoherence rate `gamma >= 0`
/// and elapsed time `t >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionSpec {
    gamma: f64,
    t: f64,
}

impl EvolutionSpec {
    pub fn new(gamma: f64, t: f64) -> Result<Self, ModelError> {
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(ModelError::NegativeRate(gamma));
        }
        if !t.is_finite() || t < 0.0 {
            return Err(ModelError::NegativeTime(t));
        }
        Ok(Self { gamma, t })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn t(&self) -> f64 {
        self.t
    }
}

/// The two Bell states used as dynamical initial conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellState {
    /// `(|01> + |10>)/sqrt(2)` — the one-excitation triplet state.
    Psi1,
    /// `(|00> + |11>)/sqrt(2)` — the zero/two-excitation state.
    Psi2,
}

impl BellState {
    /// The state as a ket in the product basis.
    pub fn ket(&self) -> Vec<C64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let z = C64::new(0.0, 0.0);
        let a = C64::new(s, 0.0);
        match self {
            BellState::Psi1 => vec![z, a, a, z],
            BellState::Psi2 => vec![a, z, z, a],
        }
    }
}

/// Density matrix of a Bell state.
pub fn bell_state(which: BellState) -> DensityMatrix {
    DensityMatrix::from_pure(&which.ket()).expect("Bell kets are unit vectors")
}

/// Assembles the 4x4 Hamiltonian in the product basis.
pub fn build_hamiltonian(p: &SpinParams) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(4);
    h.set(0, 0, C64::new(0.5 * (p.j_z + 2.0 * p.b), 0.0));
    h.set(1, 1, C64::new(-0.5 * p.j_z, 0.0));
    h.set(2, 2, C64::new(-0.5 * p.j_z, 0.0));
    h.set(3, 3, C64::new(0.5 * (p.j_z - 2.0 * p.b), 0.0));
    h.set(1, 2, C64::new(p.j, -p.d));
    h.set(2, 1, C64::new(p.j, p.d));
    h
}

/// Closed-form eigensystem of the Hamiltonian, in the same layout as
/// [`hermitian_eig`](crate::qmat::hermitian_eig): ascending eigenvalues with
/// matching eigenvector columns.
///
/// When `mu = 0` the one-excitation block is already diagonal and the product
/// states `|01>`, `|10>` are returned for the degenerate pair.
pub fn analytic_eigensystem(p: &SpinParams) -> HermitianEigensystem {
    let mu = p.mu();
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);

    let e00 = 0.5 * (p.j_z + 2.0 * p.b);
    let e11 = 0.5 * (p.j_z - 2.0 * p.b);
    let e_minus = -0.5 * p.j_z - mu;
    let e_plus = -0.5 * p.j_z + mu;

    let mut pairs: Vec<(f64, [C64; 4])> = vec![
        (e00, [one, z, z, z]),
        (e11, [z, z, z, one]),
    ];
    if mu == 0.0 {
        pairs.push((e_minus, [z, one, z, z]));
        pairs.push((e_plus, [z, z, one, z]));
    } else {
        // e^{i chi} = (J + iD)/mu rotates |10> into phase with |01>.
        let phase = C64::new(p.j, p.d) / mu;
        pairs.push((e_minus, [z, s, -phase * s, z]));
        pairs.push((e_plus, [z, s, phase * s, z]));
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite energies"));

    let mut vectors = ComplexMatrix::zeros(4);
    let mut eigenvalues = Vec::with_capacity(4);
    for (k, (energy, vec)) in pairs.iter().enumerate() {
        eigenvalues.push(*energy);
        for (row, &amp) in vec.iter().enumerate() {
            vectors.set(row, k, amp);
        }
    }
    HermitianEigensystem {
        eigenvalues,
        eigenvectors: vectors,
    }
}

/// Gibbs state `exp(-H/T) / Z` at temperature `T`.
///
/// Built from the analytic eigensystem with energies shifted by the ground
/// energy before exponentiation, so arbitrarily low temperatures neither
/// overflow nor underflow: weights are `exp(-(E_m - E_min)/T)`.
pub fn gibbs_state(p: &SpinParams, thermal: &ThermalSpec) -> DensityMatrix {
    let eig = analytic_eigensystem(p);
    let e_min = eig.eigenvalues[0];
    let t = thermal.temperature();
    let weights: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&e| (-(e - e_min) / t).exp())
        .collect();
    mixture_over_columns(&eig, &weights)
}

/// Ground state: the normalised projector onto the lowest-energy eigenspace.
///
/// With a degenerate minimum this is the equal-weight mixture over the
/// degenerate manifold — the zero-temperature limit of the Gibbs state.
pub fn ground_state(p: &SpinParams) -> DensityMatrix {
    let eig = analytic_eigensystem(p);
    let e_min = eig.eigenvalues[0];
    let scale = eig
        .eigenvalues
        .iter()
        .fold(1.0f64, |acc, &e| acc.max(e.abs()));
    let tol = GROUND_DEGENERACY_TOL * scale;
    let weights: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&e| if e - e_min <= tol { 1.0 } else { 0.0 })
        .collect();
    mixture_over_columns(&eig, &weights)
}

/// Normalised mixture `sum_k w_k |v_k><v_k| / sum_k w_k` over eigenvector columns.
fn mixture_over_columns(eig: &HermitianEigensystem, weights: &[f64]) -> DensityMatrix {
    let n = eig.eigenvectors.dim();
    let total: f64 = weights.iter().sum();
    let mut m = ComplexMatrix::zeros(n);
    for (k, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let wn = w / total;
        for i in 0..n {
            let vik = eig.eigenvectors.get(i, k);
            for j in 0..n {
                let add = vik * eig.eigenvectors.get(j, k).conj() * wn;
                m.set(i, j, m.get(i, j) + add);
            }
        }
    }
    DensityMatrix::new_unchecked(m)
}

/// Evolves a state under the intrinsic-decoherence master equation.
///
/// In the Hamiltonian eigenbasis the coherences decay and rotate as
/// `rho_mn(t) = exp(-gamma t (E_m - E_n)^2 / 2) * exp(-i (E_m - E_n) t) * rho_mn(0)`,
/// while populations are exactly conserved. At `gamma = 0` this is ordinary
/// unitary evolution.
pub fn milburn_evolve(
    p: &SpinParams,
    initial: &DensityMatrix,
    ev: &EvolutionSpec,
) -> Result<DensityMatrix, ModelError> {
    if initial.dim() != 4 {
        return Err(ModelError::Mat(QmatError::BadDimension {
            got: initial.dim(),
            expected: "4",
        }));
    }
    let eig = analytic_eigensystem(p);
    let v = &eig.eigenvectors;
    // Coefficients of the state in the energy eigenbasis.
    let mut coeff = v.adjoint().matmul(initial.matrix()).matmul(v);
    for m in 0..4 {
        for n in 0..4 {
            let de = eig.eigenvalues[m] - eig.eigenvalues[n];
            let damp = (-0.5 * ev.gamma() * ev.t() * de * de).exp();
            let factor = C64::from_polar(damp, -de * ev.t());
            coeff.set(m, n, coeff.get(m, n) * factor);
        }
    }
    let evolved = v.matmul(&coeff).matmul(&v.adjoint());
    Ok(DensityMatrix::new_unchecked(evolved))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{func_of_hermitian, hermitian_eig, partial_trace, Subsystem};

    const TIGHT: f64 = 1e-12;
    const EIG_TOL: f64 = 1e-10;

    fn residual(h: &ComplexMatrix, eig: &HermitianEigensystem) -> f64 {
        // max_k || H v_k - E_k v_k ||_inf
        let mut worst: f64 = 0.0;
        for k in 0..4 {
            let v = eig.eigenvector(k);
            for i in 0..4 {
                let mut hv = C64::new(0.0, 0.0);
                for j in 0..4 {
                    hv += h.get(i, j) * v[j];
                }
                worst = worst.max((hv - v[i] * eig.eigenvalues[k]).norm());
            }
        }
        worst
    }

    #[test]
    fn spectrum_matches_known_values() {
        let p = SpinParams::new(1.0, -0.5, 0.0, 0.0);
        let eig = analytic_eigensystem(&p);
        let expected = [-0.75, -0.25, -0.25, 1.25];
        for (got, want) in eig.eigenvalues.iter().zip(expected) {
            assert!((got - want).abs() < TIGHT);
        }
    }

    #[test]
    fn analytic_eigensystem_agrees_with_jacobi() {
        let p = SpinParams::new(1.0, 0.5, 0.3, 0.4);
        let h = build_hamiltonian(&p);
        let numeric = hermitian_eig(&h).unwrap();
        let analytic = analytic_eigensystem(&p);
        for (a, b) in analytic.eigenvalues.iter().zip(&numeric.eigenvalues) {
            assert!((a - b).abs() < EIG_TOL);
        }
        assert!(residual(&h, &analytic) < EIG_TOL);
        // Columns are orthonormal.
        let gram = analytic
            .eigenvectors
            .adjoint()
            .matmul(&analytic.eigenvectors);
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(4)) < TIGHT);
    }

    #[test]
    fn analytic_eigensystem_handles_degenerate_block() {
        let p = SpinParams::new(0.0, 0.7, 0.2, 0.0);
        let h = build_hamiltonian(&p);
        let analytic = analytic_eigensystem(&p);
        assert!(residual(&h, &analytic) < TIGHT);
    }

    #[test]
    fn gibbs_matches_matrix_exponential_route() {
        let cases = [
            (SpinParams::new(1.0, 0.5, 0.3, 0.4), 1.0),
            (SpinParams::new(0.3, -1.0, 2.0, 1.0), 0.05),
            (SpinParams::new(-1.0, 1.0, 0.0, 2.0), 5.0),
        ];
        for (p, temp) in cases {
            let thermal = ThermalSpec::new(temp).unwrap();
            let rho = gibbs_state(&p, &thermal);
            // Independent route: exponentiate the full Hamiltonian, shifting by
            // the ground energy for stability, then normalise by the trace.
            let h = build_hamiltonian(&p);
            let e_min = hermitian_eig(&h).unwrap().eigenvalues[0];
            let unnorm = func_of_hermitian(&h, |e| (-(e - e_min) / temp).exp()).unwrap();
            let z = unnorm.trace().re;
            let expected = unnorm.scale(C64::new(1.0 / z, 0.0));
            assert!(rho.matrix().max_abs_diff(&expected) < TIGHT);
        }
    }

    #[test]
    fn gibbs_survives_extreme_temperatures() {
        let p = SpinParams::new(1.0, 1.0, 2.0, 0.0);
        let cold = gibbs_state(&p, &ThermalSpec::new(1e-8).unwrap());
        assert!((cold.matrix().trace().re - 1.0).abs() < TIGHT);
        assert!(cold.purity() <= 1.0 + TIGHT);
        let hot = gibbs_state(&p, &ThermalSpec::new(1e8).unwrap());
        // Infinite temperature tends to the maximally mixed state.
        let quarter = ComplexMatrix::identity(4).scale(C64::new(0.25, 0.0));
        assert!(hot.matrix().max_abs_diff(&quarter) < 1e-7);
    }

    #[test]
    fn ground_state_handles_unique_and_degenerate_minima() {
        // mu = 1, Jz = 0: unique singlet-like minimum at energy -1.
        let p = SpinParams::new(1.0, 0.0, 0.0, 0.0);
        let rho = ground_state(&p);
        assert!((rho.purity() - 1.0).abs() < TIGHT);
        let h = build_hamiltonian(&p);
        // The state must commute with H and have energy -1.
        let energy = h.matmul(rho.matrix()).trace().re;
        assert!((energy + 1.0).abs() < TIGHT);

        // J = D = 0, Jz > 0: the two product states |01>, |10> tie.
        let p = SpinParams::new(0.0, 1.0, 0.0, 0.0);
        let rho = ground_state(&p);
        assert!((rho.purity() - 0.5).abs() < TIGHT);
        for (i, want) in [0.0, 0.5, 0.5, 0.0].iter().enumerate() {
            assert!((rho.matrix().get(i, i).re - want).abs() < TIGHT);
        }
    }

    #[test]
    fn bell_states_are_the_expected_kets() {
        let rho1 = bell_state(BellState::Psi1);
        assert!((rho1.matrix().get(1, 2).re - 0.5).abs() < TIGHT);
        assert!((rho1.matrix().get(0, 0).norm()) < TIGHT);
        let rho2 = bell_state(BellState::Psi2);
        assert!((rho2.matrix().get(0, 3).re - 0.5).abs() < TIGHT);
        assert!((rho2.purity() - 1.0).abs() < TIGHT);
        // Both are maximally entangled: reduced states are maximally mixed.
        for rho in [rho1, rho2] {
            let red = partial_trace(&rho, Subsystem::A).unwrap();
            let half = ComplexMatrix::identity(2).scale(C64::new(0.5, 0.0));
            assert!(red.matrix().max_abs_diff(&half) < TIGHT);
        }
    }

    #[test]
    fn milburn_damps_coherence_with_known_factor() {
        let p = SpinParams::new(1.0, 0.5, 1.0, 0.4);
        let ev = EvolutionSpec::new(1.0, 1.0).unwrap();
        let rho = milburn_evolve(&p, &bell_state(BellState::Psi2), &ev).unwrap();
        // |00> and |11> are exact eigenvectors split by 2B = 2, so the Bell
        // coherence 1/2 picks up exp(-2) * exp(-2i).
        let expected = C64::from_polar(0.5 * (-2.0f64).exp(), -2.0);
        assert!((rho.matrix().get(0, 3) - expected).norm() < TIGHT);
        // Populations of the computational basis are untouched here.
        assert!((rho.matrix().get(0, 0).re - 0.5).abs() < TIGHT);
        assert!((rho.matrix().get(3, 3).re - 0.5).abs() < TIGHT);
    }

    #[test]
    fn milburn_at_zero_gamma_is_unitary() {
        let p = SpinParams::new(1.0, -0.5, 0.7, 0.9);
        let rho0 = bell_state(BellState::Psi1);
        for &t in &[0.0, 0.3, 1.7, 5.0] {
            let ev = EvolutionSpec::new(0.0, t).unwrap();
            let rho = milburn_evolve(&p, &rho0, &ev).unwrap();
            assert!((rho.purity() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn milburn_preserves_energy_populations() {
        let p = SpinParams::new(0.8, 0.3, 0.6, 1.1);
        let rho0 = bell_state(BellState::Psi1);
        let eig = analytic_eigensystem(&p);
        let pops = |rho: &DensityMatrix| -> Vec<f64> {
            let c = eig
                .eigenvectors
                .adjoint()
                .matmul(rho.matrix())
                .matmul(&eig.eigenvectors);
            (0..4).map(|k| c.get(k, k).re).collect()
        };
        let before = pops(&rho0);
        let ev = EvolutionSpec::new(0.7, 2.3).unwrap();
        let after = pops(&milburn_evolve(&p, &rho0, &ev).unwrap());
        for (a, b) in before.iter().zip(&after) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn milburn_at_time_zero_is_identity() {
        let p = SpinParams::new(1.0, 0.5, 0.3, 0.4);
        let rho0 = gibbs_state(&p, &ThermalSpec::new(0.7).unwrap());
        let ev = EvolutionSpec::new(3.0, 0.0).unwrap();
        let rho = milburn_evolve(&p, &rho0, &ev).unwrap();
        assert!(rho.matrix().max_abs_diff(rho0.matrix()) < TIGHT);
    }

    #[test]
    fn specs_reject_invalid_parameters() {
        assert!(ThermalSpec::new(0.0).is_err());
        assert!(ThermalSpec::new(-1.0).is_err());
        assert!(ThermalSpec::new(f64::NAN).is_err());
        assert!(EvolutionSpec::new(-0.1, 1.0).is_err());
        assert!(EvolutionSpec::new(1.0, -0.1).is_err());
        assert!(EvolutionSpec::new(f64::INFINITY, 1.0).is_err());
        assert!(ThermalSpec::new(0.5).is_ok());
        assert!(EvolutionSpec::new(0.0, 0.0).is_ok());
    }
}
