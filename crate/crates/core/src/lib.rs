//! Computer-algebra kernel: exact and floating arithmetic, iterative means,
//! polynomials, Gröbner bases, exact matrix algebra and decompositions, and
//! the interpreter for the command language that drives them.

pub mod arith;
pub mod cancel;
pub mod decomp;
pub mod groebner;
pub mod lang;
pub mod matrix;
pub mod means;
pub mod poly;
pub mod render;
