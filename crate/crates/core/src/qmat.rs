//! Dense complex linear algebra for one- and two-qubit operators.
//!
//! Only 2×2 and 4×4 matrices are supported. Qubit 1 is the left (most
//! significant) tensor factor, so `|ab⟩` has index `2a + b`.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Maximum `|M - M†|` entry accepted for a density matrix.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Maximum `|M - M†|` entry accepted by the eigensolver.
pub const EIGEN_HERMITIAN_TOL: f64 = 1e-10;
/// Slack allowed below zero for the smallest eigenvalue of a state.
pub const PSD_SLACK: f64 = 1e-10;
/// Slack allowed above one for the trace of a state.
pub const TRACE_SLACK: f64 = 1e-12;
/// `|Tr ρ - 1|` below which a state counts as normalized.
pub const NORMALIZED_TOL: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Which qubit of the pair an operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Qubit {
    /// Alice's qubit, the left tensor factor.
    One,
    /// Bob's qubit, the right tensor factor.
    Two,
}

impl Qubit {
    pub const BOTH: [Qubit; 2] = [Qubit::One, Qubit::Two];

    pub fn index(self) -> usize {
        match self {
            Qubit::One => 1,
            Qubit::Two => 2,
        }
    }

    pub fn other(self) -> Qubit {
        match self {
            Qubit::One => Qubit::Two,
            Qubit::Two => Qubit::One,
        }
    }
}

impl TryFrom<usize> for Qubit {
    type Error = Error;

    fn try_from(index: usize) -> Result<Self> {
        match index {
            1 => Ok(Qubit::One),
            2 => Ok(Qubit::Two),
            other => Err(Error::InvalidQubit(other)),
        }
    }
}

/// Square complex matrix of dimension 2 or 4, stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Build from row-major entries. Rejects non-square shapes, unsupported
    /// dimensions and non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows != cols || !(rows == 2 || rows == 4) {
            return Err(Error::DimensionMismatch { expected: "2x2 or 4x4".into(), actual: format!("{rows}x{cols}") });
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries", rows * cols),
                actual: format!("{} entries", data.len()),
            });
        }
        if let Some(k) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite { row: k / rows, col: k % rows });
        }
        Ok(Self { dim: rows, data })
    }

    pub fn from_rows<const N: usize>(rows: [[C64; N]; N]) -> Result<Self> {
        Self::new(N, N, rows.iter().flatten().copied().collect())
    }

    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Result<Self> {
        Self::new(N, N, rows.iter().flatten().map(|&x| c(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim == 2 || dim == 4, "unsupported dimension {dim}");
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn diag(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn real_diag(entries: &[f64]) -> Self {
        let entries: Vec<C64> = entries.iter().map(|&x| c(x, 0.0)).collect();
        Self::diag(&entries)
    }

    /// `|v⟩⟨v|` for a 2- or 4-component vector.
    pub fn outer(v: &[C64]) -> Self {
        let mut m = Self::zeros(v.len());
        for i in 0..v.len() {
            for j in 0..v.len() {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn pauli_x() -> Self {
        Self::from_real_rows([[0.0, 1.0], [1.0, 0.0]]).unwrap()
    }

    pub fn pauli_y() -> Self {
        Self::from_rows([[ZERO, c(0.0, -1.0)], [c(0.0, 1.0), ZERO]]).unwrap()
    }

    pub fn pauli_z() -> Self {
        Self::from_real_rows([[1.0, 0.0], [0.0, -1.0]]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] = self[(j, i)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] = self[(j, i)];
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    /// `self · rho · self†`.
    pub fn conjugate(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        &(self * rho) * &self.adjoint()
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        (0..self.dim).map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum()).collect()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sum");
        ComplexMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in difference");
        ComplexMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  {}", row.join("  "))?;
        }
        write!(f, "]")
    }
}

/// Kronecker product of two 2×2 matrices.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim != 2 || b.dim != 2 {
        return Err(Error::DimensionMismatch {
            expected: "2x2 ⊗ 2x2".into(),
            actual: format!("{0}x{0} ⊗ {1}x{1}", a.dim, b.dim),
        });
    }
    let mut out = ComplexMatrix::zeros(4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// Lift a single-qubit operator to the two-qubit space.
pub fn embed(op: &ComplexMatrix, qubit: Qubit) -> Result<ComplexMatrix> {
    let id = ComplexMatrix::identity(2);
    match qubit {
        Qubit::One => kron(op, &id),
        Qubit::Two => kron(&id, op),
    }
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Real eigenvalues, sorted descending.
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the same order as `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.vectors.dim).map(|i| self.vectors[(i, k)]).collect()
    }

    /// `V · diag(λ) · V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let lambda = ComplexMatrix::real_diag(&self.values);
        &(&self.vectors * &lambda) * &self.vectors.adjoint()
    }
}

/// Eigenvalues of a Hermitian matrix, sorted descending.
pub fn hermitian_eigs(m: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(m).map(|e| e.values)
}

/// Cyclic Jacobi eigensolver for small Hermitian matrices.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a diagonal
/// unitary, then applies a real Givens rotation that zeroes it.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let deviation = m.hermitian_deviation();
    if deviation > EIGEN_HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let n = m.dim;
    let mut a = m.clone();
    // symmetrize away rounding noise before rotating
    for i in 0..n {
        a[(i, i)] = c(a[(i, i)].re, 0.0);
        for j in i + 1..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_sq();

    for _sweep in 0..64 {
        let off: f64 = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| a[(i, j)].norm_sqr()).sum();
        if off <= scale * 1e-34 || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let b = a[(p, q)];
                let b_abs = b.norm();
                if b_abs == 0.0 || b_abs * b_abs <= scale * 1e-40 {
                    continue;
                }
                let phase = b / b_abs; // e^{iφ}
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * b_abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                // G acts on the (p, q) plane:
                //   G_pp = c, G_pq = s, G_qp = -s e^{-iφ}, G_qq = c e^{-iφ}
                let gpp = c(cs, 0.0);
                let gpq = c(sn, 0.0);
                let gqp = -phase.conj() * sn;
                let gqq = phase.conj() * cs;
                // A <- A G (columns p, q)
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * gpp + akq * gqp;
                    a[(k, q)] = akp * gpq + akq * gqq;
                }
                // A <- G† A (rows p, q)
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
                    a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = c(a[(p, p)].re, 0.0);
                a[(q, q)] = c(a[(q, q)].re, 0.0);
                // V <- V G
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * gpp + vkq * gqp;
                    v[(k, q)] = vkp * gpq + vkq * gqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, col)] = v[(k, src)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// A validated (possibly unnormalized) density matrix.
///
/// Post-selected states keep their branch weight in the trace, so any trace in
/// `(0, 1]` is accepted.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    normalized: bool,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if mat.data.iter().all(|z| *z == ZERO) {
            return Err(Error::Annihilated);
        }
        let deviation = mat.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = mat.trace().re;
        if !(trace > 0.0 && trace <= 1.0 + TRACE_SLACK) {
            return Err(Error::BadTrace { trace });
        }
        let min_eigenvalue = *hermitian_eigs(&mat)?.last().unwrap();
        if min_eigenvalue < -PSD_SLACK {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        let normalized = (trace - 1.0).abs() <= NORMALIZED_TOL;
        Ok(Self { mat, normalized })
    }

    /// `|ψ⟩⟨ψ|` for a normalized state vector.
    pub fn pure(amplitudes: &[C64]) -> Result<Self> {
        Self::new(ComplexMatrix::outer(amplitudes))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::new(ComplexMatrix::identity(dim).scale(1.0 / dim as f64)).unwrap()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// The state divided by its trace.
    pub fn normalize(&self) -> DensityMatrix {
        if self.normalized {
            return self.clone();
        }
        let mat = self.mat.scale(1.0 / self.trace());
        DensityMatrix { mat, normalized: true }
    }

    /// `alpha·self + (1 - alpha)·other`.
    pub fn mix(&self, other: &DensityMatrix, alpha: f64) -> Result<DensityMatrix> {
        crate::error::check_unit("alpha", alpha)?;
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: format!("{0}x{0}", self.dim()),
                actual: format!("{0}x{0}", other.dim()),
            });
        }
        DensityMatrix::new(&self.mat.scale(alpha) + &other.mat.scale(1.0 - alpha))
    }

    /// `op · ρ · op†` without re-running the full validation.
    ///
    /// Only used with operators whose action keeps the result a valid state
    /// (Kraus operators and their partial sums); a zero result is reported as
    /// [`Error::Annihilated`].
    pub(crate) fn conjugated_by(&self, op: &ComplexMatrix) -> Result<DensityMatrix> {
        Self::from_trusted(op.conjugate(&self.mat))
    }

    pub(crate) fn from_trusted(mat: ComplexMatrix) -> Result<DensityMatrix> {
        let trace = mat.trace().re;
        if trace <= 0.0 || mat.data.iter().all(|z| *z == ZERO) {
            return Err(Error::Annihilated);
        }
        let normalized = (trace - 1.0).abs() <= NORMALIZED_TOL;
        Ok(DensityMatrix { mat, normalized })
    }
}

/// Reduced state of the qubit `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: Qubit) -> Result<DensityMatrix> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: "4x4".into(), actual: format!("{0}x{0}", rho.dim()) });
    }
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(2);
    for i in 0..2 {
        for j in 0..2 {
            out[(i, j)] = (0..2)
                .map(|k| match keep {
                    Qubit::One => m[(2 * i + k, 2 * j + k)],
                    Qubit::Two => m[(2 * k + i, 2 * k + j)],
                })
                .sum();
        }
    }
    DensityMatrix::from_trusted(out)
}

/// Standard two-qubit basis vectors and Bell states.
pub mod states {
    use super::{c, C64};
    use std::f64::consts::FRAC_1_SQRT_2;

    pub fn basis(index: usize) -> [C64; 4] {
        let mut v = [c(0.0, 0.0); 4];
        v[index] = c(1.0, 0.0);
        v
    }

    /// `(|00⟩ + |11⟩)/√2`
    pub fn psi_plus() -> [C64; 4] {
        [c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0)]
    }

    /// `(|00⟩ - |11⟩)/√2`
    pub fn psi_minus() -> [C64; 4] {
        [c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-FRAC_1_SQRT_2, 0.0)]
    }

    /// `(|01⟩ + |10⟩)/√2`
    pub fn phi_plus() -> [C64; 4] {
        [c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0)]
    }

    /// `(|01⟩ - |10⟩)/√2`
    pub fn phi_minus() -> [C64; 4] {
        [c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0), c(0.0, 0.0)]
    }
}
