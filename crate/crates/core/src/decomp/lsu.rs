use crate::arith::{ExactDiv, Ring};
use crate::matrix::{inverse, Entry, Matrix, MatrixError};

/// Partial permutation matrix with weights `1/den`, kept as denominators so
/// that the factor stays in the base domain.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPermutation<T> {
    rows: usize,
    cols: usize,
    /// `(row, col, den)` for each nonzero entry `1/den`.
    entries: Vec<(usize, usize, T)>,
}

impl<T: Ring> WeightedPermutation<T> {
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[(usize, usize, T)] {
        &self.entries
    }

    /// The matrix itself over a field containing the domain.
    pub fn to_matrix<F: Entry + From<T>>(&self) -> Matrix<F> {
        let mut s = Matrix::zeros(self.rows, self.cols);
        for (i, j, d) in &self.entries {
            s[(*i, *j)] = F::from(d.clone())
                .inv()
                .expect("pivot products are nonzero");
        }
        s
    }

    /// Transposed pattern with reciprocal weights; the inverse when square
    /// and of full rank, a {1,2}-inverse in general. Entries lie in the domain.
    pub fn pseudo_inverse(&self) -> Matrix<T> {
        let mut s = Matrix::zeros(self.cols, self.rows);
        for (i, j, d) in &self.entries {
            s[(*j, *i)] = d.clone();
        }
        s
    }

    /// Reverse the row order, as multiplication by the exchange matrix on the left.
    pub fn flip_rows(&self) -> WeightedPermutation<T> {
        WeightedPermutation {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|(i, j, d)| (self.rows - 1 - i, *j, d.clone()))
                .collect(),
        }
    }
}

/// `A = L·S·U` with `L` lower and `U` upper triangular over the domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Lsu<T> {
    pub l: Matrix<T>,
    pub s: WeightedPermutation<T>,
    pub u: Matrix<T>,
    /// Pivot positions `(row, col)`, rows increasing.
    pub pivots: Vec<(usize, usize)>,
    /// Determinant of the nonsingular block on the pivot rows and columns.
    pub det: T,
}

/// Fraction-free LSU decomposition.
///
/// Rows are processed top to bottom and the pivot of each row is its leftmost
/// nonzero entry in the current reduced matrix, so no row exchanges occur.
/// With `d_0 = 1` and pivots `d_1, …, d_r`, the `k`-th weight of `S` is
/// `1/(d_{k-1}·d_k)`; unused rows of `L` and columns of `U` are unit.
pub fn lsu<T: ExactDiv>(a: &Matrix<T>) -> Lsu<T> {
    let (m, n) = a.shape();
    let mut work = a.clone();
    let mut l = Matrix::identity(m);
    let mut u = Matrix::identity(n);
    let mut entries = Vec::new();
    let mut pivots = Vec::new();
    let mut prev = T::one();
    for i in 0..m {
        let Some(j) = (0..n).find(|&c| !work[(i, c)].is_zero()) else {
            continue;
        };
        let p = work[(i, j)].clone();
        for r in i..m {
            l[(r, i)] = work[(r, j)].clone();
        }
        for c in 0..n {
            u[(j, c)] = work[(i, c)].clone();
        }
        entries.push((i, j, prev.clone() * p.clone()));
        pivots.push((i, j));
        for r in i + 1..m {
            let f = work[(r, j)].clone();
            for c in 0..n {
                let v = p.clone() * work[(r, c)].clone() - f.clone() * work[(i, c)].clone();
                work[(r, c)] = v
                    .known_quotient(&prev)
                    .expect("fraction-free elimination divides exactly");
            }
        }
        prev = p;
    }
    Lsu {
        l,
        s: WeightedPermutation {
            rows: m,
            cols: n,
            entries,
        },
        u,
        pivots,
        det: prev,
    }
}

/// LSU together with `W`, `M` and `det` such that `W·S·M = det²·A⁻`, where
/// `A⁻ = U⁻¹·S⁺·L⁻¹` satisfies `A·A⁻·A = A` and `A⁻·A·A⁻ = A⁻`.
#[derive(Debug, Clone, PartialEq)]
pub struct LsuWm<T, F> {
    pub lsu: Lsu<T>,
    pub w: Matrix<F>,
    pub m: Matrix<F>,
}

impl<T, F> LsuWm<T, F> {
    pub fn det(&self) -> &T {
        &self.lsu.det
    }
}

fn lift<T: Ring, F: From<T>>(a: &Matrix<T>) -> Matrix<F> {
    a.map(|x| F::from(x.clone()))
}

fn triangular_inverse<F: Entry>(a: &Matrix<F>) -> Matrix<F> {
    inverse(a).expect("triangular factor has a nonzero diagonal")
}

pub fn lsuwmdet<T: ExactDiv, F: Entry + From<T>>(a: &Matrix<T>) -> LsuWm<T, F> {
    let lsu = lsu(a);
    let d = F::from(lsu.det.clone());
    let s_plus: Matrix<F> = lift(&lsu.s.pseudo_inverse());
    let u_inv = triangular_inverse(&lift::<T, F>(&lsu.u));
    let l_inv = triangular_inverse(&lift::<T, F>(&lsu.l));
    let w = u_inv.mul(&s_plus).expect("shapes agree").scale(&d);
    let m = s_plus.mul(&l_inv).expect("shapes agree").scale(&d);
    LsuWm { lsu, w, m }
}

/// A {1,2}-inverse `U⁻¹·S⁺·L⁻¹`, equal to `A⁻¹` for nonsingular `A`.
pub fn pseudo_inverse<T: ExactDiv, F: Entry + From<T>>(a: &Matrix<T>) -> Matrix<F> {
    let lsu = lsu(a);
    let s_plus: Matrix<F> = lift(&lsu.s.pseudo_inverse());
    let u_inv = triangular_inverse(&lift::<T, F>(&lsu.u));
    let l_inv = triangular_inverse(&lift::<T, F>(&lsu.l));
    u_inv
        .mul(&s_plus)
        .and_then(|x| x.mul(&l_inv))
        .expect("shapes agree")
}

/// `A = V·D·U` with `V`, `U` upper triangular and `D` a weighted permutation.
#[derive(Debug, Clone, PartialEq)]
pub struct Bruhat<T> {
    pub v: Matrix<T>,
    pub d: WeightedPermutation<T>,
    pub u: Matrix<T>,
}

/// Bruhat decomposition from the LSU decomposition of the row-reversed matrix:
/// if `J·A = L·S·U` then `A = (J·L·J)·(J·S)·U`.
pub fn bruhat<T: ExactDiv>(a: &Matrix<T>) -> Result<Bruhat<T>, MatrixError> {
    if !a.is_square() {
        return Err(MatrixError::NonSquare);
    }
    let f = lsu(&a.flip_rows());
    Ok(Bruhat {
        v: f.l.flip_rows().flip_cols(),
        d: f.s.flip_rows(),
        u: f.u,
    })
}
