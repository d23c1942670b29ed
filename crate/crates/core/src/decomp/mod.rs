//! Matrix decompositions: exact LSU, LSUWMdet and Bruhat over integral
//! domains; QR, SVD and Cholesky over the reals; Strassen–Winograd products.

mod lsu;
mod real;
mod strassen;

pub use lsu::{bruhat, lsu, lsuwmdet, pseudo_inverse, Bruhat, Lsu, LsuWm, WeightedPermutation};
pub use real::{cholesky, qr, svd, Cholesky, Qr, Svd};
pub use strassen::{strassen_winograd, CUTOFF};
