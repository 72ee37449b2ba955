//! Dense complex matrices and the [`Unitary`] newtype.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Amplitude = Complex64;
pub type Matrix = DMatrix<Complex64>;

/// Tolerance used when validating that a matrix is unitary.
pub const UNITARITY_TOL: f64 = 1e-8;
/// Default tolerance for equality assertions.
pub const EQ_TOL: f64 = 1e-10;

/// Entries smaller than this are skipped when fixing a global phase.
const PHASE_PIVOT: f64 = 1e-8;

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Largest entrywise deviation of `m·m†` from the identity.
pub fn unitarity_deviation(m: &Matrix) -> f64 {
    let prod = m * m.adjoint();
    let n = m.nrows();
    let mut worst = 0.0f64;
    for r in 0..n {
        for col in 0..n {
            let target = if r == col { 1.0 } else { 0.0 };
            worst = worst.max((prod[(r, col)] - target).norm());
        }
    }
    worst
}

pub fn max_entry_diff(a: &Matrix, b: &Matrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub(crate) fn log2_exact(dim: usize) -> Option<usize> {
    (dim.is_power_of_two()).then(|| dim.trailing_zeros() as usize)
}

/// A dense unitary on `k` qubits. Row/column index `i` encodes the ket whose
/// first wire is the most significant bit.
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary {
    num_qubits: usize,
    matrix: Matrix,
}

impl Unitary {
    /// Validates shape and unitarity (tolerance [`UNITARITY_TOL`]).
    pub fn new(matrix: Matrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                left: matrix.nrows(),
                right: matrix.ncols(),
            });
        }
        let num_qubits = log2_exact(matrix.nrows()).ok_or(Error::NotPowerOfTwo(matrix.nrows()))?;
        if matrix
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let deviation = unitarity_deviation(&matrix);
        if deviation > UNITARITY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { num_qubits, matrix })
    }

    /// Row-major constructor.
    pub fn from_rows(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: entries.len(),
                right: dim * dim,
            });
        }
        Self::new(Matrix::from_row_slice(dim, dim, entries))
    }

    /// Real row-major constructor, handy for permutation-like gates.
    pub fn from_real_rows(dim: usize, entries: &[f64]) -> Result<Self> {
        let cs: Vec<Complex64> = entries.iter().map(|&x| c(x, 0.0)).collect();
        Self::from_rows(dim, &cs)
    }

    pub(crate) fn from_matrix_unchecked(matrix: Matrix) -> Self {
        let num_qubits = log2_exact(matrix.nrows()).expect("power-of-two dimension");
        Self { num_qubits, matrix }
    }

    pub fn identity(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        Self {
            num_qubits,
            matrix: Matrix::identity(dim, dim),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            num_qubits: self.num_qubits,
            matrix: self.matrix.adjoint(),
        }
    }

    /// Matrix product `self · rhs` (apply `rhs` first).
    pub fn mul(&self, rhs: &Unitary) -> Result<Self> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: rhs.dim(),
            });
        }
        Ok(Self {
            num_qubits: self.num_qubits,
            matrix: &self.matrix * &rhs.matrix,
        })
    }

    /// Tensor product with `self` on the leading (more significant) wires.
    pub fn kron(&self, rhs: &Unitary) -> Self {
        Self {
            num_qubits: self.num_qubits + rhs.num_qubits,
            matrix: self.matrix.kronecker(&rhs.matrix),
        }
    }

    pub fn scaled(&self, phase: Complex64) -> Self {
        Self {
            num_qubits: self.num_qubits,
            matrix: self.matrix.map(|z| z * phase),
        }
    }

    pub fn max_entry_diff(&self, other: &Unitary) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(max_entry_diff(&self.matrix, &other.matrix))
    }

    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&self.matrix)
    }

    /// Checks `self ≈ λ·other` for a unit-modulus λ fixed by the first entry
    /// of `other` (row-major) whose magnitude exceeds 1e-8. Returns `Some(λ)`
    /// when `max|self − λ·other| < tol`.
    pub fn equal_up_to_global_phase(&self, other: &Unitary, tol: f64) -> Result<Option<Complex64>> {
        let phase = self.global_phase_against(other)?;
        let residual = max_entry_diff(&self.matrix, &other.matrix.map(|z| z * phase));
        Ok((residual < tol).then_some(phase))
    }

    /// The λ used by [`Self::equal_up_to_global_phase`], without the tolerance test.
    pub fn global_phase_against(&self, other: &Unitary) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        let dim = self.dim();
        for r in 0..dim {
            for col in 0..dim {
                let pivot = other.matrix[(r, col)];
                if pivot.norm() > PHASE_PIVOT {
                    let ratio = self.matrix[(r, col)] / pivot;
                    let norm = ratio.norm();
                    return Ok(if norm > 0.0 {
                        ratio / norm
                    } else {
                        c(1.0, 0.0)
                    });
                }
            }
        }
        Err(Error::Numerical(
            "reference matrix has no nonzero entry".into(),
        ))
    }

    /// Eigendecomposition `U = Q·diag(λ)·Q†` via complex Schur form, which is
    /// diagonal for normal matrices.
    pub fn eigen(&self) -> Result<(Matrix, Vec<Complex64>)> {
        let (q, t) = self.matrix.clone().schur().unpack();
        let dim = self.dim();
        let mut off = 0.0f64;
        for r in 0..dim {
            for col in 0..dim {
                if r != col {
                    off = off.max(t[(r, col)].norm());
                }
            }
        }
        if off > 1e-8 {
            return Err(Error::Numerical(format!(
                "Schur form not diagonal (off-diagonal {off:.3e})"
            )));
        }
        Ok((q, (0..dim).map(|i| t[(i, i)]).collect()))
    }

    /// Applies `f` to each eigenvalue: `Q·diag(f(λ))·Q†`.
    pub fn map_spectrum(&self, f: impl Fn(Complex64) -> Complex64) -> Result<Matrix> {
        let (q, values) = self.eigen()?;
        let diag = Matrix::from_diagonal(&nalgebra::DVector::from_iterator(
            values.len(),
            values.into_iter().map(f),
        ));
        Ok(&q * diag * q.adjoint())
    }

    /// Principal square root: eigenphases halved from the branch (−π, π].
    pub fn principal_sqrt(&self) -> Result<Unitary> {
        let m = self.map_spectrum(|z| Complex64::from_polar(1.0, principal_arg(z) / 2.0))?;
        Unitary::new(m)
    }
}

/// Argument in (−π, π]; values within 1e-9 of −π snap to π.
pub fn principal_arg(z: Complex64) -> f64 {
    let a = z.arg();
    if a <= -std::f64::consts::PI + 1e-9 {
        std::f64::consts::PI
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor() -> Unitary {
        Unitary::from_real_rows(
            4,
            &[
                1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0.,
            ],
        )
        .unwrap()
    }

    #[test]
    fn rejects_non_unitary() {
        let err = Unitary::from_real_rows(2, &[1., 1., 0., 1.]).unwrap_err();
        assert!(matches!(err, Error::NotUnitary { .. }));
        assert!(matches!(
            Unitary::from_real_rows(3, &[1.0; 9]),
            Err(Error::NotPowerOfTwo(3))
        ));
    }

    #[test]
    fn global_phase_identity_and_sign() {
        let u = xor();
        assert_eq!(
            u.equal_up_to_global_phase(&u, EQ_TOL).unwrap(),
            Some(c(1.0, 0.0))
        );
        let minus = u.scaled(c(-1.0, 0.0));
        let phase = u.equal_up_to_global_phase(&minus, EQ_TOL).unwrap().unwrap();
        assert!((phase - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn global_phase_dimension_mismatch() {
        assert!(xor()
            .equal_up_to_global_phase(&Unitary::identity(1), EQ_TOL)
            .is_err());
    }

    #[test]
    fn sqrt_of_not_squares_back() {
        let not = Unitary::from_real_rows(2, &[0., 1., 1., 0.]).unwrap();
        let v = not.principal_sqrt().unwrap();
        assert!(v.mul(&v).unwrap().max_entry_diff(&not).unwrap() < 1e-12);
    }
}
