use super::{Matrix, MatrixError};
use crate::arith::ExactDiv;

fn exact<T: ExactDiv>(a: &T, b: &T) -> T {
    a.known_quotient(b)
        .expect("fraction-free elimination divides exactly")
}

/// Determinant by Bareiss elimination with row swaps.
pub fn determinant<T: ExactDiv>(a: &Matrix<T>) -> Result<T, MatrixError> {
    if !a.is_square() {
        return Err(MatrixError::NonSquare);
    }
    let n = a.rows();
    if n == 0 {
        return Ok(T::one());
    }
    let mut m = a.clone();
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[(i, k)].is_zero()) else {
            return Ok(T::zero());
        };
        if p != k {
            m.swap_rows(p, k);
            negate = !negate;
        }
        let pivot = m[(k, k)].clone();
        for i in k + 1..n {
            let f = m[(i, k)].clone();
            for j in k + 1..n {
                let v = pivot.clone() * m[(i, j)].clone() - f.clone() * m[(k, j)].clone();
                m[(i, j)] = exact(&v, &prev);
            }
            m[(i, k)] = T::zero();
        }
        prev = pivot;
    }
    let d = m[(n - 1, n - 1)].clone();
    Ok(if negate { -d } else { d })
}

/// Fraction-free row echelon form and its pivot positions.
#[derive(Debug, Clone)]
pub struct Echelon<T> {
    pub matrix: Matrix<T>,
    /// `(row, column)` of each pivot, rows increasing.
    pub pivots: Vec<(usize, usize)>,
}

/// Row echelon form over an integral domain; entries stay in the domain.
///
/// Pivots are taken as the first nonzero entry scanning each column from the
/// current row down.
pub fn echelon_form<T: ExactDiv>(a: &Matrix<T>) -> Echelon<T> {
    let (rows, cols) = a.shape();
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut prev = T::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        m.swap_rows(p, r);
        let pivot = m[(r, c)].clone();
        for i in r + 1..rows {
            let f = m[(i, c)].clone();
            for j in c + 1..cols {
                let v = pivot.clone() * m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                m[(i, j)] = exact(&v, &prev);
            }
            m[(i, c)] = T::zero();
        }
        prev = pivot;
        pivots.push((r, c));
        r += 1;
    }
    Echelon { matrix: m, pivots }
}

pub fn rank<T: ExactDiv>(a: &Matrix<T>) -> usize {
    echelon_form(a).pivots.len()
}

/// Classical adjugate (transposed cofactor matrix); no division of entries.
pub fn adjugate<T: ExactDiv>(a: &Matrix<T>) -> Result<Matrix<T>, MatrixError> {
    if !a.is_square() {
        return Err(MatrixError::NonSquare);
    }
    let n = a.rows();
    if n == 1 {
        return Ok(Matrix::identity(1));
    }
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
            let minor = a.select_rows(&rows).select_columns(&cols);
            let d = determinant(&minor)?;
            out[(i, j)] = if (i + j) % 2 == 1 { -d } else { d };
        }
    }
    Ok(out)
}

/// `det(x·I − A)` where `x` is the indeterminate supplied by the caller.
pub fn char_poly<T: ExactDiv>(a: &Matrix<T>, x: &T) -> Result<T, MatrixError> {
    if !a.is_square() {
        return Err(MatrixError::NonSquare);
    }
    let n = a.rows();
    let m = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            x.clone() - a[(i, j)].clone()
        } else {
            -a[(i, j)].clone()
        }
    });
    determinant(&m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Scalar;

    fn z(rows: &[&[i64]]) -> Matrix<Scalar> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(
            determinant(&z(&[&[1, 2], &[3, 1]])).unwrap(),
            Scalar::from(-5)
        );
        assert_eq!(
            determinant(&Matrix::<Scalar>::identity(4)).unwrap(),
            Scalar::from(1)
        );
        assert_eq!(
            determinant(&z(&[&[0, 1], &[1, 0]])).unwrap(),
            Scalar::from(-1)
        );
        assert_eq!(
            determinant(&z(&[&[1, 1], &[1, 1]])).unwrap(),
            Scalar::from(0)
        );
        assert_eq!(determinant(&z(&[&[1, 2]])), Err(MatrixError::NonSquare));
    }

    #[test]
    fn echelon_examples() {
        assert_eq!(
            echelon_form(&z(&[&[1, 2], &[3, 1]])).matrix,
            z(&[&[1, 2], &[0, -5]])
        );
        assert_eq!(
            echelon_form(&z(&[&[0, 1], &[1, 0]])).matrix,
            z(&[&[1, 0], &[0, 1]])
        );
        let zero = z(&[&[0, 0], &[0, 0]]);
        assert_eq!(echelon_form(&zero).matrix, zero);
        assert_eq!(rank(&z(&[&[1, 1], &[1, 1]])), 1);
        assert_eq!(rank(&z(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]])), 0);
        assert_eq!(rank(&z(&[&[1, 2], &[3, 1]])), 2);
    }

    #[test]
    fn adjugate_examples() {
        assert_eq!(
            adjugate(&z(&[&[1, 2], &[3, 1]])).unwrap(),
            z(&[&[1, -2], &[-3, 1]])
        );
        let i3 = Matrix::<Scalar>::identity(3);
        assert_eq!(adjugate(&i3).unwrap(), i3);
    }
}
