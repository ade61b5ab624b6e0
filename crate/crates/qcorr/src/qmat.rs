//! Dense complex-matrix kernel for small Hermitian problems.
//!
//! Everything in this crate works with 2x2 and 4x4 matrices, so the kernel
//! favours simplicity and numerical robustness over asymptotic performance:
//! matrices are row-major `Vec<C64>`, and the eigensolver is a cyclic complex
//! Jacobi iteration, which is exhaustively accurate at these sizes.

use num_complex::Complex64;
use thiserror::Error;

/// Complex double-precision scalar used throughout the crate.
pub type C64 = Complex64;

/// Strict hermiticity tolerance for density matrices built internally.
pub(crate) const DM_HERMITICITY_TOL: f64 = 1e-12;
/// Strict trace tolerance for density matrices built internally.
pub(crate) const DM_TRACE_TOL: f64 = 1e-12;
/// How negative an eigenvalue may be before a state is rejected as non-positive.
pub(crate) const DM_EIG_TOL: f64 = 1e-10;
/// Looser tolerance applied to states loaded from external sources before repair.
pub(crate) const DM_EXTERNAL_TOL: f64 = 1e-8;
/// Relative hermiticity defect accepted by the eigensolver (it symmetrises internally).
const EIG_HERMITICITY_TOL: f64 = 1e-10;
/// Relative off-diagonal norm at which the Jacobi iteration is considered converged.
const JACOBI_OFF_TOL: f64 = 1e-15;
/// Hard cap on Jacobi sweeps; 4x4 Hermitian problems converge in well under ten.
const JACOBI_MAX_SWEEPS: usize = 100;

/// Errors from matrix construction, validation, and eigensolving.
#[derive(Debug, Error)]
pub enum QmatError {
    #[error("unsupported dimension {got}, expected {expected}")]
    BadDimension { got: usize, expected: &'static str },
    #[error("entry count {len} does not form a {dim}x{dim} matrix")]
    BadEntryCount { dim: usize, len: usize },
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { defect: f64, tol: f64 },
    #[error("eigensolver did not converge within {JACOBI_MAX_SWEEPS} sweeps")]
    NoConvergence,
    #[error("matrix function is undefined at eigenvalue {0:.6e}")]
    UndefinedAt(f64),
    #[error("trace {trace:.6} differs from 1 by more than {tol:.3e}")]
    BadTrace { trace: f64, tol: f64 },
    #[error("state has eigenvalue {eig:.3e} below -{tol:.3e}")]
    NotPositive { eig: f64, tol: f64 },
    #[error("cannot normalise a zero or non-finite vector")]
    ZeroKet,
}

/// Square complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    /// Zero matrix of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    /// Identity matrix of the given dimension.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    /// Builds a matrix from row-major entries; the length must be `dim * dim`.
    pub fn from_vec(dim: usize, entries: Vec<C64>) -> Result<Self, QmatError> {
        if entries.len() != dim * dim {
            return Err(QmatError::BadEntryCount {
                dim,
                len: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    /// Builds a matrix from rows of `(re, im)` pairs; handy in tests.
    pub fn from_rows(rows: &[Vec<(f64, f64)>]) -> Result<Self, QmatError> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(QmatError::BadEntryCount {
                    dim,
                    len: row.len(),
                });
            }
            entries.extend(row.iter().map(|&(re, im)| C64::new(re, im)));
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.entries[row * self.dim + col] = value;
    }

    /// Matrix product `self * other`. Panics if dimensions differ.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        out
    }

    /// Entrywise sum. Panics if dimensions differ.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "add dimension mismatch");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            dim: self.dim,
            entries,
        }
    }

    /// Entrywise difference. Panics if dimensions differ.
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "sub dimension mismatch");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            dim: self.dim,
            entries,
        }
    }

    /// Scalar multiple.
    pub fn scale(&self, k: C64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * k).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        out
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a.conj()).collect(),
        }
    }

    /// Transpose without conjugation.
    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j];
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entrywise deviation from hermiticity, `max |a_ij - conj(a_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut defect: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                defect = defect.max(d);
            }
        }
        defect
    }

    /// Largest entrywise absolute difference between two matrices.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn all_finite(&self) -> bool {
        self.entries
            .iter()
            .all(|a| a.re.is_finite() && a.im.is_finite())
    }

    /// Replaces the matrix by its Hermitian part `(A + A^dag) / 2`.
    fn hermitize(&mut self) {
        let n = self.dim;
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (self.get(i, j) + self.get(j, i).conj());
                self.set(i, j, avg);
                self.set(j, i, avg.conj());
            }
        }
        for i in 0..n {
            let d = self.get(i, i);
            self.set(i, i, C64::new(d.re, 0.0));
        }
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (row, col): (usize, usize)) -> &C64 {
        &self.entries[row * self.dim + col]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (row, col): (usize, usize)) -> &mut C64 {
        &mut self.entries[row * self.dim + col]
    }
}

/// Pauli X.
pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[vec![(0.0, 0.0), (1.0, 0.0)], vec![(1.0, 0.0), (0.0, 0.0)]])
        .expect("static 2x2")
}

/// Pauli Y.
pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[vec![(0.0, 0.0), (0.0, -1.0)], vec![(0.0, 1.0), (0.0, 0.0)]])
        .expect("static 2x2")
}

/// Pauli Z.
pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[vec![(1.0, 0.0), (0.0, 0.0)], vec![(0.0, 0.0), (-1.0, 0.0)]])
        .expect("static 2x2")
}

/// Kronecker product of square matrices; an `m x m` and `n x n` input give `mn x mn`.
///
/// Entry `((i,k),(j,l))` of the product is `a[i,j] * b[k,l]`, with the first
/// factor owning the slow (most significant) index.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let m = a.dim();
    let n = b.dim();
    let mut out = ComplexMatrix::zeros(m * n);
    for i in 0..m {
        for j in 0..m {
            let aij = a.get(i, j);
            for k in 0..n {
                for l in 0..n {
                    out.set(i * n + k, j * n + l, aij * b.get(k, l));
                }
            }
        }
    }
    out
}

/// Which qubit of a two-qubit state to keep when tracing out the other.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    /// First (left) qubit.
    A,
    /// Second (right) qubit.
    B,
}

/// Reduced state of one qubit of a two-qubit density matrix.
pub fn partial_trace(rho: &DensityMatrix, keep: Subsystem) -> Result<DensityMatrix, QmatError> {
    let m = rho.matrix();
    if m.dim() != 4 {
        return Err(QmatError::BadDimension {
            got: m.dim(),
            expected: "4",
        });
    }
    let mut out = ComplexMatrix::zeros(2);
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = C64::new(0.0, 0.0);
            for t in 0..2 {
                let (r, c) = match keep {
                    Subsystem::A => (2 * i + t, 2 * j + t),
                    Subsystem::B => (2 * t + i, 2 * t + j),
                };
                acc += m.get(r, c);
            }
            out.set(i, j, acc);
        }
    }
    Ok(DensityMatrix::new_unchecked(out))
}

/// Result of diagonalising a Hermitian matrix.
///
/// `eigenvalues` are ascending; column `k` of `eigenvectors` is the unit
/// eigenvector paired with `eigenvalues[k]`.
#[derive(Debug, Clone)]
pub struct HermitianEigensystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigensystem {
    /// Eigenvector paired with `eigenvalues[k]`, as a column vector.
    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        let n = self.eigenvectors.dim();
        (0..n).map(|i| self.eigenvectors.get(i, k)).collect()
    }
}

/// Diagonalises a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// The input may carry a small anti-Hermitian defect (it is symmetrised
/// before iterating); a defect beyond `1e-10` relative to the matrix scale is
/// rejected so silently wrong inputs cannot masquerade as Hermitian.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEigensystem, QmatError> {
    if !a.all_finite() {
        return Err(QmatError::NonFinite);
    }
    let scale = a.frobenius_norm().max(1.0);
    let defect = a.hermiticity_defect();
    let tol = EIG_HERMITICITY_TOL * scale;
    if defect > tol {
        return Err(QmatError::NotHermitian { defect, tol });
    }

    let n = a.dim();
    let mut w = a.clone();
    w.hermitize();
    let mut v = ComplexMatrix::identity(n);
    let fro = w.frobenius_norm();
    if fro == 0.0 {
        return Ok(HermitianEigensystem {
            eigenvalues: vec![0.0; n],
            eigenvectors: v,
        });
    }

    let off_norm = |m: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m.get(i, j).norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_norm(&w) <= JACOBI_OFF_TOL * fro {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = w.get(p, q);
                let abs = apq.norm();
                if abs == 0.0 {
                    continue;
                }
                // Plane rotation in the (p, q) plane chosen to zero w[p][q].
                // With b = |w_pq| e^{i phi} and tau = (w_qq - w_pp) / (2 |w_pq|),
                // the tangent solves t^2 - 2 tau t - 1 = 0; the smaller root
                // keeps the rotation angle below pi/4 for stability.
                let phase = apq / abs;
                let tau = (w.get(q, q).re - w.get(p, p).re) / (2.0 * abs);
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                let mut r = ComplexMatrix::identity(n);
                r.set(p, p, C64::new(c, 0.0));
                r.set(p, q, -phase * s);
                r.set(q, p, phase.conj() * s);
                r.set(q, q, C64::new(c, 0.0));

                w = r.adjoint().matmul(&w).matmul(&r);
                v = v.matmul(&r);
            }
        }
    }
    if !converged && off_norm(&w) > JACOBI_OFF_TOL * fro {
        return Err(QmatError::NoConvergence);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        w.get(i, i)
            .re
            .partial_cmp(&w.get(j, j).re)
            .expect("eigenvalues are finite")
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| w.get(i, i).re).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors.set(row, dst, v.get(row, src));
        }
    }
    Ok(HermitianEigensystem {
        eigenvalues,
        eigenvectors: vectors,
    })
}

/// Applies a real function to a Hermitian matrix through its spectrum:
/// `f(A) = sum_k f(lambda_k) v_k v_k^dag`.
///
/// Fails with [`QmatError::UndefinedAt`] if `f` returns a non-finite value at
/// any eigenvalue.
pub fn func_of_hermitian(
    a: &ComplexMatrix,
    f: impl Fn(f64) -> f64,
) -> Result<ComplexMatrix, QmatError> {
    let eig = hermitian_eig(a)?;
    let n = a.dim();
    let mut out = ComplexMatrix::zeros(n);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        let flam = f(lambda);
        if !flam.is_finite() {
            return Err(QmatError::UndefinedAt(lambda));
        }
        if flam == 0.0 {
            continue;
        }
        for i in 0..n {
            let vik = eig.eigenvectors.get(i, k);
            for j in 0..n {
                let add = vik * eig.eigenvectors.get(j, k).conj() * flam;
                out.set(i, j, out.get(i, j) + add);
            }
        }
    }
    Ok(out)
}

/// Positive-semidefinite square root, clamping slightly negative eigenvalues
/// (numerical noise) to zero before taking the square root.
pub(crate) fn psd_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix, QmatError> {
    func_of_hermitian(a, |x| x.max(0.0).sqrt())
}

/// A validated quantum state: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Strict constructor for states produced by trusted numerics.
    ///
    /// Requires hermiticity and unit trace to `1e-12` and eigenvalues no more
    /// negative than `-1e-10`; the stored matrix is symmetrised so downstream
    /// consumers see an exactly Hermitian operator.
    pub fn new(matrix: ComplexMatrix) -> Result<Self, QmatError> {
        if !matrix.all_finite() {
            return Err(QmatError::NonFinite);
        }
        let defect = matrix.hermiticity_defect();
        if defect > DM_HERMITICITY_TOL {
            return Err(QmatError::NotHermitian {
                defect,
                tol: DM_HERMITICITY_TOL,
            });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > DM_TRACE_TOL || trace.im.abs() > DM_TRACE_TOL {
            return Err(QmatError::BadTrace {
                trace: trace.re,
                tol: DM_TRACE_TOL,
            });
        }
        let mut m = matrix;
        m.hermitize();
        let eig = hermitian_eig(&m)?;
        if let Some(&low) = eig.eigenvalues.first() {
            if low < -DM_EIG_TOL {
                return Err(QmatError::NotPositive {
                    eig: low,
                    tol: DM_EIG_TOL,
                });
            }
        }
        Ok(Self { matrix: m })
    }

    /// Wraps a matrix known-valid by construction; only checked in debug builds.
    pub(crate) fn new_unchecked(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.all_finite(), "non-finite density matrix");
        debug_assert!(
            matrix.hermiticity_defect() <= 1e-9,
            "non-Hermitian density matrix, defect {}",
            matrix.hermiticity_defect()
        );
        debug_assert!(
            (matrix.trace().re - 1.0).abs() <= 1e-9,
            "density matrix trace {} != 1",
            matrix.trace().re
        );
        let mut m = matrix;
        m.hermitize();
        Self { matrix: m }
    }

    /// Projector onto a pure state; the ket is normalised first.
    pub fn from_pure(ket: &[C64]) -> Result<Self, QmatError> {
        let norm_sqr: f64 = ket.iter().map(|c| c.norm_sqr()).sum();
        if !norm_sqr.is_finite() || norm_sqr <= 0.0 {
            return Err(QmatError::ZeroKet);
        }
        let n = ket.len();
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, ket[i] * ket[j].conj() / norm_sqr);
            }
        }
        Ok(Self { matrix: m })
    }

    /// Lenient constructor for states read from files or other tools.
    ///
    /// Accepts hermiticity/trace/positivity defects up to `1e-8`, then repairs
    /// them: the matrix is symmetrised, negative eigenvalues are clamped to
    /// zero, and the spectrum is renormalised to unit trace.
    pub fn from_external(matrix: ComplexMatrix) -> Result<Self, QmatError> {
        if !matrix.all_finite() {
            return Err(QmatError::NonFinite);
        }
        let scale = matrix.frobenius_norm().max(1.0);
        let defect = matrix.hermiticity_defect();
        let tol = DM_EXTERNAL_TOL * scale;
        if defect > tol {
            return Err(QmatError::NotHermitian { defect, tol });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > DM_EXTERNAL_TOL || trace.im.abs() > DM_EXTERNAL_TOL {
            return Err(QmatError::BadTrace {
                trace: trace.re,
                tol: DM_EXTERNAL_TOL,
            });
        }
        let mut m = matrix;
        m.hermitize();
        let eig = hermitian_eig(&m)?;
        if let Some(&low) = eig.eigenvalues.first() {
            if low < -DM_EXTERNAL_TOL {
                return Err(QmatError::NotPositive {
                    eig: low,
                    tol: DM_EXTERNAL_TOL,
                });
            }
        }
        let clamped: Vec<f64> = eig.eigenvalues.iter().map(|&x| x.max(0.0)).collect();
        let total: f64 = clamped.iter().sum();
        if total <= 0.0 {
            return Err(QmatError::NotPositive {
                eig: 0.0,
                tol: DM_EXTERNAL_TOL,
            });
        }
        let n = m.dim();
        let mut repaired = ComplexMatrix::zeros(n);
        for (k, &lambda) in clamped.iter().enumerate() {
            let weight = lambda / total;
            if weight == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = eig.eigenvectors.get(i, k);
                for j in 0..n {
                    let add = vik * eig.eigenvectors.get(j, k).conj() * weight;
                    repaired.set(i, j, repaired.get(i, j) + add);
                }
            }
        }
        repaired.hermitize();
        Ok(Self { matrix: repaired })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Purity `Tr(rho^2)`; for a Hermitian matrix this is the squared
    /// Frobenius norm, so no product is formed.
    pub fn purity(&self) -> f64 {
        self.matrix
            .entries()
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
    }
}
