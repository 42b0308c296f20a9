//! Dense complex-matrix kernel: Hermitian eigendecomposition, SVD and polar
//! decomposition, unitary completion, Kronecker products and partial traces.

mod complete;
mod eig;
mod matrix;
mod svd;

pub use complete::{complete_to_unitary, gram_defect};
pub use eig::{hermitian_eig, HermitianEigen};
pub use matrix::{
    frobenius_distance, inner, kron, norm, partial_trace_ancilla, ComplexMatrix, Tolerances, C64,
};
pub(crate) use matrix::{I, ONE, ZERO};
pub use svd::{polar_decompose, svd, Polar, Svd};
