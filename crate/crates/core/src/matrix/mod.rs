//! Dense matrices over any coefficient ring: determinant, echelon form,
//! rank, kernel, inverses, closure, characteristic polynomial and linear
//! solving.

mod dense;
mod exact;
mod field;

pub use dense::Matrix;
pub use exact::{adjugate, char_poly, determinant, echelon_form, rank, Echelon};
pub use field::{closure, gen_inverse, inverse, kernel, rref, solve, Entry, LinearSolution};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("rows of a matrix literal must have equal length")]
    Ragged,
    #[error("matrix must be square")]
    NonSquare,
    #[error("matrix is singular")]
    Singular,
    #[error("linear system has no solution")]
    Inconsistent,
    #[error("order {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("division failed: {0}")]
    Arith(String),
    #[error("computation cancelled")]
    Cancelled,
}
