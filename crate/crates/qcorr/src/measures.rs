//! Correlation measures for arbitrary two-qubit density matrices.
//!
//! Everything here is generic: no structure beyond hermiticity and positivity
//! is assumed, so these routines serve as the numerical reference against
//! which the model-specific closed forms are validated.
//!
//! Conventions: entropies are in bits (base-2 logarithms); projective
//! measurements act on the second qubit (B), and conditional entropies are
//! those of the first qubit (A) given the outcome.

use crate::optim::{minimize_over_measurements, AngularMinimum};
use crate::qmat::{
    hermitian_eig, kron, partial_trace, pauli_x, pauli_y, pauli_z, psd_sqrt, ComplexMatrix,
    DensityMatrix, QmatError, Subsystem, C64,
};
use serde::Serialize;
use thiserror::Error;

/// Largest off-pattern magnitude tolerated by the X-state fast path.
const X_PATTERN_TOL: f64 = 1e-10;
/// Probability below which a measurement outcome is treated as never occurring.
const OUTCOME_FLOOR: f64 = 1e-15;
/// How negative a correlation value may get (numerical noise) before being an error.
const NEGATIVE_VALUE_TOL: f64 = 1e-9;

/// Errors from correlation-measure evaluation.
#[derive(Debug, Error)]
pub enum MeasureError {
    #[error(transparent)]
    Mat(#[from] QmatError),
    #[error("state is not X-shaped: off-pattern magnitude {defect:.3e} exceeds {tol:.3e}")]
    NotXState { defect: f64, tol: f64 },
    #[error("{name} evaluated to {value:.3e}, more negative than -{NEGATIVE_VALUE_TOL:.0e}")]
    NegativeValue { name: &'static str, value: f64 },
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<(), MeasureError> {
    if rho.dim() != 4 {
        return Err(QmatError::BadDimension {
            got: rho.dim(),
            expected: "4",
        }
        .into());
    }
    Ok(())
}

/// Binary entropy `H2(p) = -p log2 p - (1-p) log2 (1-p)` in bits, with the
/// endpoints (and slight excursions past them from rounding) giving zero.
pub(crate) fn binary_entropy(p: f64) -> f64 {
    let mut s = 0.0;
    for q in [p, 1.0 - p] {
        if q > 0.0 {
            s -= q * q.log2();
        }
    }
    if s.is_nan() {
        0.0
    } else {
        s.max(0.0)
    }
}

/// Shannon entropy in bits of a nonnegative vector that sums to one;
/// entries at or below zero contribute nothing.
pub(crate) fn entropy_of_probs(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Von Neumann entropy in bits.
pub fn entropy(rho: &DensityMatrix) -> Result<f64, MeasureError> {
    let eig = hermitian_eig(rho.matrix())?;
    Ok(entropy_of_probs(&eig.eigenvalues))
}

/// Quantum mutual information `I = S(A) + S(B) - S(AB)` in bits.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64, MeasureError> {
    let (sa, sb, sab) = subsystem_entropies(rho)?;
    Ok(sa + sb - sab)
}

fn subsystem_entropies(rho: &DensityMatrix) -> Result<(f64, f64, f64), MeasureError> {
    require_two_qubits(rho)?;
    let sa = entropy(&partial_trace(rho, Subsystem::A)?)?;
    let sb = entropy(&partial_trace(rho, Subsystem::B)?)?;
    let sab = entropy(rho)?;
    Ok((sa, sb, sab))
}

/// A projective measurement basis on one qubit.
///
/// The two basis kets are
/// `|v0> = cos(theta)|0> + e^{i phi} sin(theta)|1>` and
/// `|v1> = e^{-i phi} sin(theta)|0> - cos(theta)|1>`;
/// `theta in [0, pi/2]`, `phi in [0, 2 pi)` covers every basis once.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProjectiveMeasurement {
    pub theta: f64,
    pub phi: f64,
}

impl ProjectiveMeasurement {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    /// The two orthonormal basis kets.
    pub fn basis(&self) -> [[C64; 2]; 2] {
        let c = self.theta.cos();
        let s = self.theta.sin();
        let e = C64::from_polar(1.0, self.phi);
        [
            [C64::new(c, 0.0), e * s],
            [e.conj() * s, C64::new(-c, 0.0)],
        ]
    }
}

/// Unnormalised post-measurement block for outcome `k`:
/// `W_k[i][j] = <i, v_k| rho |j, v_k>`. Its trace is the outcome probability
/// and `W_k / tr W_k` is the conditional state of qubit A.
fn outcome_block(m: &ComplexMatrix, v: &[C64; 2]) -> [[C64; 2]; 2] {
    let mut w = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..2 {
                let va = v[a].conj();
                for b in 0..2 {
                    acc += va * m.get(2 * i + a, 2 * j + b) * v[b];
                }
            }
            w[i][j] = acc;
        }
    }
    w
}

/// Eigenvalues of a 2x2 Hermitian block, ascending.
fn block_eigenvalues(w: &[[C64; 2]; 2]) -> (f64, f64) {
    let a = w[0][0].re;
    let b = w[1][1].re;
    let mid = 0.5 * (a + b);
    let rad = (0.5 * (a - b)).hypot(w[0][1].norm());
    (mid - rad, mid + rad)
}

/// Conditional entropy of qubit A after projectively measuring qubit B,
/// without any optimisation: `sum_k p_k S(rho_{A|k})` in bits.
pub fn conditional_entropy(
    rho: &DensityMatrix,
    m: &ProjectiveMeasurement,
) -> Result<f64, MeasureError> {
    require_two_qubits(rho)?;
    Ok(conditional_entropy_raw(rho.matrix(), m.theta, m.phi))
}

/// Allocation-free core of [`conditional_entropy`]; assumes a 4x4 state.
fn conditional_entropy_raw(m: &ComplexMatrix, theta: f64, phi: f64) -> f64 {
    let basis = ProjectiveMeasurement::new(theta, phi).basis();
    let mut total = 0.0;
    for v in &basis {
        let w = outcome_block(m, v);
        let p = w[0][0].re + w[1][1].re;
        if p <= OUTCOME_FLOOR {
            continue;
        }
        let (lo, hi) = block_eigenvalues(&w);
        // p * S(W/p) accumulated without forming the normalised state.
        for lam in [lo, hi] {
            if lam > 0.0 {
                total -= lam * (lam / p).log2();
            }
        }
    }
    total
}

/// Measurement minimising the conditional entropy of A given a projective
/// measurement on B.
fn optimal_measurement(rho: &DensityMatrix) -> Result<AngularMinimum, MeasureError> {
    require_two_qubits(rho)?;
    let m = rho.matrix();
    Ok(minimize_over_measurements(|theta, phi| {
        conditional_entropy_raw(m, theta, phi)
    }))
}

/// The value of an optimised correlation measure together with the
/// measurement achieving it and the minimal conditional entropy.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MeasurementOptimum {
    /// The measure itself (classical correlation or quantum discord).
    pub value: f64,
    /// The minimising projective measurement on qubit B.
    pub measurement: ProjectiveMeasurement,
    /// `min over measurements of sum_k p_k S(rho_{A|k})`, in bits.
    pub conditional_entropy: f64,
}

/// Classical correlation `CC = S(A) - min_M sum_k p_k S(rho_{A|k})` in bits.
pub fn classical_correlation(rho: &DensityMatrix) -> Result<MeasurementOptimum, MeasureError> {
    let sa = entropy(&partial_trace(rho, Subsystem::A)?)?;
    let opt = optimal_measurement(rho)?;
    Ok(MeasurementOptimum {
        value: sa - opt.value,
        measurement: ProjectiveMeasurement::new(opt.theta, opt.phi),
        conditional_entropy: opt.value,
    })
}

/// Quantum discord `QD = S(B) - S(AB) + min_M sum_k p_k S(rho_{A|k})` in
/// bits; equivalently mutual information minus classical correlation.
pub fn quantum_discord(rho: &DensityMatrix) -> Result<MeasurementOptimum, MeasureError> {
    let (_, sb, sab) = subsystem_entropies(rho)?;
    let opt = optimal_measurement(rho)?;
    Ok(MeasurementOptimum {
        value: sb - sab + opt.value,
        measurement: ProjectiveMeasurement::new(opt.theta, opt.phi),
        conditional_entropy: opt.value,
    })
}

/// Wootters concurrence of an arbitrary two-qubit state.
///
/// Uses the Hermitian form: the eigenvalues of
/// `M = sqrt(rho) (sy ⊗ sy) rho* (sy ⊗ sy) sqrt(rho)` are the squares of the
/// usual singular values, and `C = max(0, l1 - l2 - l3 - l4)` on their square
/// roots in decreasing order. Diagonalising a Hermitian matrix avoids the
/// ill-conditioned non-Hermitian product.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64, MeasureError> {
    require_two_qubits(rho)?;
    let yy = kron(&pauli_y(), &pauli_y());
    let flipped = yy.matmul(&rho.matrix().conj()).matmul(&yy);
    let root = psd_sqrt(rho.matrix())?;
    let m = root.matmul(&flipped).matmul(&root);
    let eig = hermitian_eig(&m)?;
    let mut lams: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&x| x.max(0.0).sqrt())
        .collect();
    lams.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    Ok((lams[0] - lams[1] - lams[2] - lams[3]).max(0.0))
}

/// Concurrence of an X-shaped state (nonzero entries only on the diagonal and
/// anti-diagonal), via the two-branch formula
/// `C = 2 max(0, |rho_03| - sqrt(rho_11 rho_22), |rho_12| - sqrt(rho_00 rho_33))`.
///
/// Rejects states whose off-pattern entries exceed a small tolerance rather
/// than silently ignoring them.
pub fn concurrence_x(rho: &DensityMatrix) -> Result<f64, MeasureError> {
    require_two_qubits(rho)?;
    let m = rho.matrix();
    let mut defect: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let on_pattern = i == j || i + j == 3;
            if !on_pattern {
                defect = defect.max(m.get(i, j).norm());
            }
        }
    }
    if defect > X_PATTERN_TOL {
        return Err(MeasureError::NotXState {
            defect,
            tol: X_PATTERN_TOL,
        });
    }
    let d: Vec<f64> = (0..4).map(|i| m.get(i, i).re.max(0.0)).collect();
    let outer = m.get(0, 3).norm() - (d[1] * d[2]).sqrt();
    let inner = m.get(1, 2).norm() - (d[0] * d[3]).sqrt();
    Ok((2.0 * outer.max(inner)).max(0.0))
}

/// Bloch-vector decomposition of a two-qubit state:
/// `rho = (I + x·s ⊗ I + I ⊗ y·s + sum_ij T_ij s_i ⊗ s_j) / 4`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BlochDecomposition {
    /// Bloch vector of qubit A.
    pub x: [f64; 3],
    /// Bloch vector of qubit B.
    pub y: [f64; 3],
    /// Correlation matrix `T_ij = <s_i ⊗ s_j>`.
    pub t: [[f64; 3]; 3],
}

/// Computes the Bloch vectors and correlation matrix of a two-qubit state.
pub fn bloch_decompose(rho: &DensityMatrix) -> Result<BlochDecomposition, MeasureError> {
    require_two_qubits(rho)?;
    let paulis = [pauli_x(), pauli_y(), pauli_z()];
    let id = ComplexMatrix::identity(2);
    let expect = |op: &ComplexMatrix| -> f64 { op.matmul(rho.matrix()).trace().re };
    let mut out = BlochDecomposition {
        x: [0.0; 3],
        y: [0.0; 3],
        t: [[0.0; 3]; 3],
    };
    for (i, si) in paulis.iter().enumerate() {
        out.x[i] = expect(&kron(si, &id));
        out.y[i] = expect(&kron(&id, si));
        for (j, sj) in paulis.iter().enumerate() {
            out.t[i][j] = expect(&kron(si, sj));
        }
    }
    Ok(out)
}

/// Largest eigenvalue of a symmetric 3x3 matrix, by the trigonometric
/// closed form for the characteristic cubic.
fn sym3_max_eigenvalue(k: &[[f64; 3]; 3]) -> f64 {
    let p1 = k[0][1] * k[0][1] + k[0][2] * k[0][2] + k[1][2] * k[1][2];
    if p1 == 0.0 {
        return k[0][0].max(k[1][1]).max(k[2][2]);
    }
    let q = (k[0][0] + k[1][1] + k[2][2]) / 3.0;
    let p2 = (k[0][0] - q).powi(2) + (k[1][1] - q).powi(2) + (k[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let b = |i: usize, j: usize| -> f64 {
        let shift = if i == j { q } else { 0.0 };
        (k[i][j] - shift) / p
    };
    let det_b = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1))
        - b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0))
        + b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
    let r = (det_b / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    q + 2.0 * p * phi.cos()
}

/// Normalised geometric discord `2 D_G` of a two-qubit state, where `D_G` is
/// the squared Hilbert–Schmidt distance to the nearest state left invariant
/// by some projective measurement on qubit B. The factor of two scales a Bell
/// state to 1.
///
/// Computed from the Bloch decomposition:
/// `2 D_G = (|y|^2 + |T|_F^2 - k_max) / 2` with `k_max` the largest
/// eigenvalue of `y y^T + T^T T`.
pub fn gmd(rho: &DensityMatrix) -> Result<f64, MeasureError> {
    let bloch = bloch_decompose(rho)?;
    let y_sq: f64 = bloch.y.iter().map(|v| v * v).sum();
    let t_sq: f64 = bloch.t.iter().flatten().map(|v| v * v).sum();
    let mut k = [[0.0f64; 3]; 3];
    for a in 0..3 {
        for bcol in 0..3 {
            let mut acc = bloch.y[a] * bloch.y[bcol];
            for i in 0..3 {
                acc += bloch.t[i][a] * bloch.t[i][bcol];
            }
            k[a][bcol] = acc;
        }
    }
    let k_max = sym3_max_eigenvalue(&k);
    Ok((0.5 * (y_sq + t_sq - k_max)).max(0.0))
}

/// Normalised geometric discord by direct minimisation over projective
/// measurements on qubit B, with no Bloch-space shortcut:
/// `2 min_M ( tr rho^2 - sum_k tr W_k^2 )` where `W_k` are the unnormalised
/// post-measurement blocks. Serves as an independent cross-check of [`gmd`].
pub fn gmd_bruteforce(rho: &DensityMatrix) -> Result<f64, MeasureError> {
    require_two_qubits(rho)?;
    let m = rho.matrix();
    let purity = rho.purity();
    let best = minimize_over_measurements(|theta, phi| {
        let basis = ProjectiveMeasurement::new(theta, phi).basis();
        let mut kept = 0.0;
        for v in &basis {
            let w = outcome_block(m, v);
            kept += w[0][0].norm_sqr()
                + w[1][1].norm_sqr()
                + 2.0 * w[0][1].norm_sqr();
        }
        purity - kept
    });
    Ok((2.0 * best.value).max(0.0))
}

/// The four correlation measures of a state, all in their normalised forms.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CorrelationSet {
    /// Wootters concurrence `C`.
    pub concurrence: f64,
    /// Classical correlation `CC` in bits.
    pub classical: f64,
    /// Quantum discord `QD` in bits.
    pub discord: f64,
    /// Normalised geometric discord `2 D_G`.
    pub geometric: f64,
}

impl CorrelationSet {
    /// Wraps raw values, clamping tiny negatives (rounding noise) to zero and
    /// rejecting anything more negative than `1e-9`.
    pub fn try_new(
        concurrence: f64,
        classical: f64,
        discord: f64,
        geometric: f64,
    ) -> Result<Self, MeasureError> {
        let clamp = |name: &'static str, value: f64| -> Result<f64, MeasureError> {
            if value < -NEGATIVE_VALUE_TOL {
                Err(MeasureError::NegativeValue { name, value })
            } else {
                Ok(value.max(0.0))
            }
        };
        Ok(Self {
            concurrence: clamp("concurrence", concurrence)?,
            classical: clamp("classical correlation", classical)?,
            discord: clamp("quantum discord", discord)?,
            geometric: clamp("geometric discord", geometric)?,
        })
    }
}

/// Evaluates all four measures of a state through the generic numerical
/// route, sharing the eigendecompositions and the single measurement
/// optimisation between classical correlation and discord.
pub fn correlation_set(rho: &DensityMatrix) -> Result<CorrelationSet, MeasureError> {
    let c = concurrence(rho)?;
    let (sa, sb, sab) = subsystem_entropies(rho)?;
    let opt = optimal_measurement(rho)?;
    let cc = sa - opt.value;
    let qd = sb - sab + opt.value;
    let g = gmd(rho)?;
    CorrelationSet::try_new(c, cc, qd, g)
}
