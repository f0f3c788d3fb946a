//! Exact rational and Gaussian-rational linear algebra with a floating point fallback.

mod matrix;
mod normal;
mod poly;
mod scalar;
mod spectrum;

pub use matrix::{dot, CMatrix, Echelon, LinearSolution, Matrix, QMatrix};
pub use normal::{normal_block_diagonalize, NormalForm};
pub use poly::{char_poly, Poly};
pub use scalar::{scalar_from_json, CScalar, Field, Scalar};
pub use spectrum::{
    numeric_roots, spectrum, QuadraticFactor, RationalEigenvalue, ResidualFactor, SpectrumReport,
};
#[allow(unused_imports)]
pub(crate) use spectrum::{partition_from_ranks, sort_pairs, split_square_free};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("cannot parse number `{0}`")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not normal: entry ({i},{j}) of [M, M^T] is {value}")]
    NotNormal { i: usize, j: usize, value: String },
    #[error("numeric residual {residual:e} exceeds tolerance {tolerance:e}")]
    Tolerance { residual: f64, tolerance: f64 },
}

/// Solves `A x = b`, returning a particular solution and kernel basis, or a
/// certificate `y` with `y A = 0` and `y b != 0`.
pub fn solve_linear<T: Field>(a: &Matrix<T>, b: &[T]) -> LinearSolution<T> {
    a.solve(b)
}

/// Exact rank.
pub fn rank<T: Field>(a: &Matrix<T>) -> usize {
    a.rank()
}

/// Exact determinant.
pub fn det<T: Field>(a: &Matrix<T>) -> T {
    a.det()
}

/// Exact kernel basis.
pub fn kernel<T: Field>(a: &Matrix<T>) -> Vec<Vec<T>> {
    a.kernel()
}
