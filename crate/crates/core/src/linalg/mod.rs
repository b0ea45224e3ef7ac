//! Fixed-size complex linear algebra for one- and two-qubit operators.

mod basis;
mod density;
mod eigen;
mod matrix;

pub(crate) use basis::unitary_rows;
pub use basis::{basis_to_unitary, MeasurementBasis};
pub use density::{conjugate_by, partial_trace, DensityMatrix, Subsystem, UNITARY_TOLERANCE};
pub use eigen::{
    hermitian_eigendecomposition, HermitianEigenSystem, HERMITIAN_INPUT_TOLERANCE, MAX_SWEEPS,
    OFF_DIAGONAL_TOLERANCE,
};
pub use matrix::{tensor_product, ComplexMatrix};
