use num_complex::Complex64;

use super::{hermitian_eigendecomposition, ComplexMatrix};
use crate::error::{Error, Result};

/// A validated density matrix: Hermitian, unit trace, positive semidefinite,
/// each to within `tolerance`. The spectrum is computed once at construction.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    tolerance: f64,
    spectrum: Vec<f64>,
}

impl DensityMatrix {
    pub const DEFAULT_TOLERANCE: f64 = 1e-10;

    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, Self::DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tolerance: f64) -> Result<Self> {
        let herm = matrix.hermiticity_error();
        if herm > tolerance {
            return Err(Error::NotHermitian(herm));
        }
        let tr = matrix.trace();
        if (tr - 1.0).norm() > tolerance {
            return Err(Error::InvalidTrace(tr.re));
        }
        let spectrum = hermitian_eigendecomposition(&matrix)?.eigenvalues;
        let min = *spectrum.last().expect("non-empty spectrum");
        if min < -tolerance {
            return Err(Error::NotPositive(min));
        }
        Ok(Self {
            matrix,
            tolerance,
            spectrum,
        })
    }

    /// `|ψ><ψ| / <ψ|ψ>`.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm_sqr: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm_sqr <= 0.0 || !norm_sqr.is_finite() {
            return Err(Error::InvalidParameter("state vector has zero norm".into()));
        }
        Self::new(ComplexMatrix::outer(psi)?.scale(Complex64::new(1.0 / norm_sqr, 0.0)))
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(ComplexMatrix::from_diagonal(&vec![1.0 / dim as f64; dim])?)
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    #[inline]
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Eigenvalues in descending order, exactly as returned by the eigensolver.
    pub fn raw_spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    /// Eigenvalues in descending order with round-off negatives set to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.spectrum.iter().map(|&x| x.max(0.0)).collect()
    }

    pub fn purity(&self) -> f64 {
        self.matrix.entries().iter().map(|z| z.norm_sqr()).sum()
    }
}

impl PartialEq for DensityMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

/// Which qubit of a two-qubit state to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Reduced state of one qubit of a two-qubit density matrix.
pub fn partial_trace(rho: &DensityMatrix, keep: Subsystem) -> Result<DensityMatrix> {
    let m = rho.matrix();
    if m.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: m.dim(),
        });
    }
    let mut out = ComplexMatrix::zeros(2)?;
    for i in 0..2 {
        for j in 0..2 {
            out[(i, j)] = match keep {
                Subsystem::A => m[(2 * i, 2 * j)] + m[(2 * i + 1, 2 * j + 1)],
                Subsystem::B => m[(i, j)] + m[(2 + i, 2 + j)],
            };
        }
    }
    DensityMatrix::with_tolerance(out, rho.tolerance())
}

/// Tolerance on the unitarity of the conjugating matrix.
pub const UNITARY_TOLERANCE: f64 = 1e-10;

/// `U ρ U†`.
pub fn conjugate_by(rho: &DensityMatrix, u: &ComplexMatrix) -> Result<DensityMatrix> {
    if u.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: u.dim(),
        });
    }
    let err = u.unitarity_error();
    if err > UNITARY_TOLERANCE {
        return Err(Error::NotUnitary(err));
    }
    let out = &(u * rho.matrix()) * &u.adjoint();
    DensityMatrix::with_tolerance(out, rho.tolerance())
}
