use super::{Matrix, MatrixError};
use crate::arith::{Field, Scalar};

/// Field element usable in Gauss–Jordan elimination. Floating kinds report a
/// magnitude so elimination can use partial pivoting and a zero tolerance.
pub trait Entry: Field {
    /// `None` in exact domains, where the first nonzero entry is the pivot.
    fn magnitude(&self) -> Option<f64> {
        None
    }
}

impl Entry for f64 {
    fn magnitude(&self) -> Option<f64> {
        Some(self.abs())
    }
}

impl Entry for Scalar {
    fn magnitude(&self) -> Option<f64> {
        self.is_float().then(|| self.to_f64().abs())
    }
}

fn div<T: Field>(a: &T, b: &T) -> T {
    a.div(b).expect("pivot is nonzero")
}

/// Relative zero threshold for floating matrices.
const FLOAT_TOL: f64 = 1e-12;

fn scale_of<T: Entry>(a: &Matrix<T>) -> f64 {
    a.entries()
        .filter_map(Entry::magnitude)
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE)
}

fn negligible<T: Entry>(x: &T, scale: f64) -> bool {
    match x.magnitude() {
        Some(m) => m <= FLOAT_TOL * scale,
        None => x.is_zero(),
    }
}

/// Reduced row echelon form and pivot columns.
pub fn rref<T: Entry>(a: &Matrix<T>) -> (Matrix<T>, Vec<usize>) {
    let (rows, cols) = a.shape();
    let scale = scale_of(a);
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let candidates = (r..rows).filter(|&i| !negligible(&m[(i, c)], scale));
        let p = if m[(r, c)].magnitude().is_some() {
            candidates.max_by(|&i, &j| {
                let (a, b) = (
                    m[(i, c)].magnitude().unwrap(),
                    m[(j, c)].magnitude().unwrap(),
                );
                a.total_cmp(&b)
            })
        } else {
            candidates.min()
        };
        let Some(p) = p else {
            for i in r..rows {
                m[(i, c)] = T::zero();
            }
            continue;
        };
        m.swap_rows(p, r);
        let pivot = m[(r, c)].clone();
        for j in c..cols {
            m[(r, j)] = div(&m[(r, j)], &pivot);
        }
        for i in 0..rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let f = m[(i, c)].clone();
            for j in c..cols {
                let v = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                m[(i, j)] = v;
            }
            m[(i, c)] = T::zero();
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

/// Basis of the right null space as columns (`cols × (cols − rank)`).
pub fn kernel<T: Entry>(a: &Matrix<T>) -> Matrix<T> {
    let (r, pivots) = rref(a);
    let n = a.cols();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut k = Matrix::zeros(n, free.len());
    for (col, &f) in free.iter().enumerate() {
        k[(f, col)] = T::one();
        for (row, &p) in pivots.iter().enumerate() {
            k[(p, col)] = -r[(row, f)].clone();
        }
    }
    k
}

pub fn inverse<T: Entry>(a: &Matrix<T>) -> Result<Matrix<T>, MatrixError> {
    if !a.is_square() {
        return Err(MatrixError::NonSquare);
    }
    let n = a.rows();
    let aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            a[(i, j)].clone()
        } else if j - n == i {
            T::one()
        } else {
            T::zero()
        }
    });
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(MatrixError::Singular);
    }
    Ok(r.submatrix(0, n, n, n))
}

/// `(I − A)⁻¹`, the sum `I + A + A² + ⋯` in the classical algebras.
pub fn closure<T: Entry>(a: &Matrix<T>) -> Result<Matrix<T>, MatrixError> {
    if !a.is_square() {
        return Err(MatrixError::NonSquare);
    }
    inverse(&Matrix::identity(a.rows()).sub(a)?)
}

/// Moore–Penrose inverse from the full-rank factorization `A = B·C`, with
/// `B` the pivot columns of `A` and `C` the nonzero rows of its reduced
/// echelon form: `A⁺ = Cᵀ(CCᵀ)⁻¹(BᵀB)⁻¹Bᵀ`.
pub fn gen_inverse<T: Entry>(a: &Matrix<T>) -> Result<Matrix<T>, MatrixError> {
    let (r, pivots) = rref(a);
    let k = pivots.len();
    if k == 0 {
        return Ok(Matrix::zeros(a.cols(), a.rows()));
    }
    let b = a.select_columns(&pivots);
    let c = r.submatrix(0, 0, k, a.cols());
    let ct = c.transpose();
    let bt = b.transpose();
    let cct = inverse(&c.mul(&ct)?)?;
    let btb = inverse(&bt.mul(&b)?)?;
    ct.mul(&cct)?.mul(&btb)?.mul(&bt)
}

/// Solution set of `A·X = B`: a particular solution plus a kernel basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSolution<T> {
    pub particular: Matrix<T>,
    pub kernel: Matrix<T>,
}

impl<T> LinearSolution<T> {
    pub fn is_unique(&self) -> bool {
        self.kernel.cols() == 0
    }
}

pub fn solve<T: Entry>(a: &Matrix<T>, b: &Matrix<T>) -> Result<LinearSolution<T>, MatrixError> {
    if a.rows() != b.rows() {
        return Err(MatrixError::DimensionMismatch {
            expected: (a.rows(), b.cols()),
            found: b.shape(),
        });
    }
    let (n, m, k) = (a.rows(), a.cols(), b.cols());
    let aug = Matrix::from_fn(n, m + k, |i, j| {
        if j < m {
            a[(i, j)].clone()
        } else {
            b[(i, j - m)].clone()
        }
    });
    let (r, pivots) = rref(&aug);
    if pivots.iter().any(|&p| p >= m) {
        return Err(MatrixError::Inconsistent);
    }
    let mut x = Matrix::zeros(m, k);
    for (row, &p) in pivots.iter().enumerate() {
        for j in 0..k {
            x[(p, j)] = r[(row, m + j)].clone();
        }
    }
    Ok(LinearSolution {
        particular: x,
        kernel: kernel(a),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[(i64, i64)]]) -> Matrix<Scalar> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&(n, d)| Scalar::ratio(n, d).unwrap())
                        .collect()
                })
                .collect(),
        )
        .unwrap()
    }

    fn z(rows: &[&[i64]]) -> Matrix<Scalar> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn inverse_examples() {
        let a = z(&[&[1, 2], &[3, 1]]);
        let want = q(&[&[(-1, 5), (2, 5)], &[(3, 5), (-1, 5)]]);
        assert_eq!(inverse(&a).unwrap(), want);
        assert_eq!(inverse(&z(&[&[1, 1], &[1, 1]])), Err(MatrixError::Singular));
        let i = Matrix::<Scalar>::identity(3);
        assert_eq!(inverse(&i).unwrap(), i);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel(&z(&[&[1, 2], &[3, 1]])).cols(), 0);
        let k = kernel(&z(&[&[1, 1], &[1, 1]]));
        assert_eq!(k, z(&[&[-1], &[1]]));
        assert_eq!(kernel(&z(&[&[0, 0], &[0, 0]])), Matrix::identity(2));
    }

    #[test]
    fn closure_examples() {
        assert_eq!(
            closure(&z(&[&[0, 0], &[0, 0]])).unwrap(),
            Matrix::identity(2)
        );
        assert_eq!(closure(&q(&[&[(1, 2)]])).unwrap(), z(&[&[2]]));
        assert_eq!(closure(&z(&[&[1]])), Err(MatrixError::Singular));
    }

    #[test]
    fn gen_inverse_examples() {
        let a = z(&[&[1, 2], &[3, 1]]);
        assert_eq!(gen_inverse(&a).unwrap(), inverse(&a).unwrap());
        let p = z(&[&[1, 0], &[0, 0]]);
        assert_eq!(gen_inverse(&p).unwrap(), p);
        let ones = z(&[&[1, 1], &[1, 1]]);
        assert_eq!(
            gen_inverse(&ones).unwrap(),
            q(&[&[(1, 4), (1, 4)], &[(1, 4), (1, 4)]])
        );
    }

    #[test]
    fn linear_solve() {
        let a = z(&[&[1, 2], &[3, 1]]);
        let b = z(&[&[5], &[5]]);
        let s = solve(&a, &b).unwrap();
        assert!(s.is_unique());
        assert_eq!(s.particular, z(&[&[1], &[2]]));
        let inconsistent = solve(&z(&[&[1, 1], &[1, 1]]), &z(&[&[1], &[2]]));
        assert_eq!(inconsistent, Err(MatrixError::Inconsistent));
        let under = solve(&z(&[&[1, 1]]), &z(&[&[2]])).unwrap();
        assert_eq!(under.kernel.cols(), 1);
    }

    #[test]
    fn float_pivoting() {
        let a: Matrix<f64> = Matrix::from_rows(vec![vec![1e-20, 1.0], vec![1.0, 1.0]]).unwrap();
        let inv = inverse(&a).unwrap();
        let prod = a.mul(&inv).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((prod[(i, j)] - want).abs() < 1e-12);
            }
        }
    }
}
