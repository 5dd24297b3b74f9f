//! Scalars over R, C and H and the Euclidean space M_F(N) of Hermitian matrices.

mod hermitian;
mod json;
mod matrix;
mod scalar;

pub use hermitian::{
    orthogonal_basis_on, random_hermitian, random_hermitian_coefficients, standard_basis,
    BasisLabel, HermitianMatrix, HERMITIAN_TOL,
};
pub use json::{hermitian_from_json, MatrixJson};
pub use matrix::{axpy_right, outer, unit_vector, vec_inner, vec_norm, Matrix};
pub use scalar::{Field, Scalar};
