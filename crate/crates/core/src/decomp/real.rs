//! Orthogonal and Cholesky factorizations of real matrices.

use super::strassen::strassen_winograd;
use crate::matrix::{Matrix, MatrixError};

fn max_abs(a: &Matrix<f64>) -> f64 {
    a.entries().fold(0.0, |m, x| m.max(x.abs()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Determinant by Gaussian elimination with partial pivoting.
fn det_f64(a: &Matrix<f64>) -> f64 {
    let n = a.rows();
    let mut m = a.clone();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| m[(i, k)].abs().total_cmp(&m[(j, k)].abs()))
            .unwrap();
        if m[(p, k)] == 0.0 {
            return 0.0;
        }
        if p != k {
            m.swap_rows(p, k);
            det = -det;
        }
        det *= m[(k, k)];
        for i in k + 1..n {
            let f = m[(i, k)] / m[(k, k)];
            for j in k..n {
                let v = m[(k, j)];
                m[(i, j)] -= f * v;
            }
        }
    }
    det
}

/// Unit vector orthogonal to every vector in `basis`.
fn complement(basis: &[Vec<f64>], dim: usize) -> Vec<f64> {
    let mut best: Option<(f64, Vec<f64>)> = None;
    for e in 0..dim {
        let mut v = vec![0.0; dim];
        v[e] = 1.0;
        for _ in 0..2 {
            for q in basis {
                let c = dot(q, &v);
                v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        let nv = norm(&v);
        if best.as_ref().is_none_or(|(b, _)| nv > *b) {
            best = Some((nv, v));
        }
    }
    let (nv, v) = best.expect("dimension is positive");
    v.into_iter().map(|x| x / nv).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Qr {
    pub q: Matrix<f64>,
    pub r: Matrix<f64>,
}

/// Block-recursive Gram–Schmidt QR for square matrices of order `2^k`.
///
/// `R` has a nonnegative diagonal except possibly its last entry, whose sign
/// is chosen so that `det Q = +1`.
pub fn qr(a: &Matrix<f64>) -> Result<Qr, MatrixError> {
    if !a.is_square() {
        return Err(MatrixError::NonSquare);
    }
    let n = a.rows();
    if !n.is_power_of_two() {
        return Err(MatrixError::NotPowerOfTwo(n));
    }
    let cols: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();
    let mut basis = Vec::with_capacity(n);
    let tol = 1e-14 * max_abs(a).max(f64::MIN_POSITIVE) * n as f64;
    let r = gram_schmidt(cols, &mut basis, tol);
    let mut q = Matrix::from_fn(n, n, |i, j| basis[j][i]);
    let mut r = r;
    if det_f64(&q) < 0.0 {
        for i in 0..n {
            q[(i, n - 1)] = -q[(i, n - 1)];
        }
        for j in 0..n {
            r[(n - 1, j)] = -r[(n - 1, j)];
        }
    }
    Ok(Qr { q, r })
}

/// Orthonormalizes `cols` (already orthogonal to `basis`), appending to
/// `basis`, and returns the corresponding upper-triangular block of `R`.
fn gram_schmidt(cols: Vec<Vec<f64>>, basis: &mut Vec<Vec<f64>>, tol: f64) -> Matrix<f64> {
    let k = cols.len();
    if k == 1 {
        let v = &cols[0];
        let nv = norm(v);
        if nv <= tol {
            let dim = v.len();
            basis.push(complement(basis, dim));
            return Matrix::from_fn(1, 1, |_, _| 0.0);
        }
        basis.push(v.iter().map(|x| x / nv).collect());
        return Matrix::from_fn(1, 1, |_, _| nv);
    }
    let h = k / 2;
    let start = basis.len();
    let mut right = cols[h..].to_vec();
    let r11 = gram_schmidt(cols[..h].to_vec(), basis, tol);
    let mut r12 = Matrix::from_fn(h, k - h, |_, _| 0.0);
    // Two projection passes for numerical orthogonality.
    for _ in 0..2 {
        for (j, v) in right.iter_mut().enumerate() {
            for (i, q) in basis[start..start + h].iter().enumerate() {
                let c = dot(q, v);
                r12[(i, j)] += c;
                v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
    }
    let r22 = gram_schmidt(right, basis, tol);
    Matrix::from_fn(k, k, |i, j| match (i < h, j < h) {
        (true, true) => r11[(i, j)],
        (true, false) => r12[(i, j - h)],
        (false, true) => 0.0,
        (false, false) => r22[(i - h, j - h)],
    })
}

/// `A = U·D·V` with `U`, `V` orthogonal and `D` diagonal; the rows of `V`
/// are the right singular vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Svd {
    pub u: Matrix<f64>,
    pub d: Matrix<f64>,
    pub v: Matrix<f64>,
}

impl Svd {
    pub fn singular_values(&self) -> Vec<f64> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)])
            .collect()
    }
}

const JACOBI_SWEEPS: usize = 80;

/// Singular value decomposition by one-sided Jacobi rotations. Singular
/// values are sorted in decreasing order.
pub fn svd(a: &Matrix<f64>) -> Svd {
    let (m, n) = a.shape();
    if m < n {
        let t = svd(&a.transpose());
        return Svd {
            u: t.v.transpose(),
            d: t.d.transpose(),
            v: t.u.transpose(),
        };
    }
    let mut w: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for _ in 0..JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = dot(&w[p], &w[p]);
                let beta = dot(&w[q], &w[q]);
                let gamma = dot(&w[p], &w[q]);
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for cols in [&mut w, &mut v] {
                    for i in 0..cols[p].len() {
                        let (x, y) = (cols[p][i], cols[q][i]);
                        cols[p][i] = c * x - s * y;
                        cols[q][i] = s * x + c * y;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let sigma: Vec<f64> = w.iter().map(|c| norm(c)).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));
    let tol = 1e-14
        * sigma
            .iter()
            .cloned()
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE)
        * m as f64;
    let mut ucols: Vec<Vec<f64>> = Vec::with_capacity(m);
    for &j in &order {
        if sigma[j] > tol {
            ucols.push(w[j].iter().map(|x| x / sigma[j]).collect());
        } else {
            ucols.push(complement(&ucols, m));
        }
    }
    while ucols.len() < m {
        ucols.push(complement(&ucols, m));
    }
    let u = Matrix::from_fn(m, m, |i, j| ucols[j][i]);
    let d = Matrix::from_fn(m, n, |i, j| if i == j { sigma[order[i]] } else { 0.0 });
    let vt = Matrix::from_fn(n, n, |i, j| v[order[i]][j]);
    Svd { u, d, v: vt }
}

/// `A = L·Lᵀ` and `S·L = I`, both factors lower triangular.
#[derive(Debug, Clone, PartialEq)]
pub struct Cholesky {
    pub l: Matrix<f64>,
    pub s: Matrix<f64>,
}

/// Block-recursive Cholesky factorization that also produces `L⁻¹`. With
/// `fast` the block products use Strassen–Winograd multiplication.
pub fn cholesky(a: &Matrix<f64>, fast: bool) -> Result<Cholesky, MatrixError> {
    if !a.is_square() {
        return Err(MatrixError::NonSquare);
    }
    let scale = max_abs(a);
    let n = a.rows();
    for i in 0..n {
        for j in 0..i {
            if (a[(i, j)] - a[(j, i)]).abs() > 1e-12 * scale {
                return Err(MatrixError::NotSymmetric);
            }
        }
    }
    let mul = |x: &Matrix<f64>, y: &Matrix<f64>| {
        if fast {
            strassen_winograd(x, y).expect("block shapes agree")
        } else {
            x.mul(y).expect("block shapes agree")
        }
    };
    let (l, s) = chol_rec(a, &mul)?;
    Ok(Cholesky { l, s })
}

fn chol_rec(
    a: &Matrix<f64>,
    mul: &impl Fn(&Matrix<f64>, &Matrix<f64>) -> Matrix<f64>,
) -> Result<(Matrix<f64>, Matrix<f64>), MatrixError> {
    let n = a.rows();
    if n == 1 {
        let x = a[(0, 0)];
        if x.is_nan() || x <= 0.0 || !x.is_finite() {
            return Err(MatrixError::NotPositiveDefinite);
        }
        let l = x.sqrt();
        return Ok((
            Matrix::from_fn(1, 1, |_, _| l),
            Matrix::from_fn(1, 1, |_, _| 1.0 / l),
        ));
    }
    let h = n / 2;
    let k = n - h;
    let a11 = a.submatrix(0, 0, h, h);
    let a21 = a.submatrix(h, 0, k, h);
    let a22 = a.submatrix(h, h, k, k);
    let (l11, s11) = chol_rec(&a11, mul)?;
    let l21 = mul(&a21, &s11.transpose());
    let schur = a22.sub(&mul(&l21, &l21.transpose())).expect("equal blocks");
    let (l22, s22) = chol_rec(&schur, mul)?;
    let s21 = mul(&mul(&s22, &l21), &s11).neg();
    let join = |d1: &Matrix<f64>, off: &Matrix<f64>, d2: &Matrix<f64>| {
        Matrix::from_fn(n, n, |i, j| match (i < h, j < h) {
            (true, true) => d1[(i, j)],
            (true, false) => 0.0,
            (false, true) => off[(i - h, j)],
            (false, false) => d2[(i - h, j - h)],
        })
    };
    Ok((join(&l11, &l21, &l22), join(&s11, &s21, &s22)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fm(rows: &[&[f64]]) -> Matrix<f64> {
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn close(a: &Matrix<f64>, b: &Matrix<f64>, tol: f64) -> bool {
        a.shape() == b.shape()
            && a.entries()
                .zip(b.entries())
                .all(|(x, y)| (x - y).abs() <= tol)
    }

    fn rounded(a: &Matrix<f64>, places: i32) -> Matrix<f64> {
        let f = 10f64.powi(places);
        a.map(|x| (x * f).round() / f)
    }

    #[test]
    fn qr_example_and_restrictions() {
        let a = fm(&[&[1.0, 2.0], &[3.0, 1.0]]);
        let f = qr(&a).unwrap();
        assert_eq!(rounded(&f.q, 2), fm(&[&[0.32, -0.95], &[0.95, 0.32]]));
        assert_eq!(rounded(&f.r, 2), fm(&[&[3.16, 1.58], &[0.0, -1.58]]));
        assert!(close(&f.q.mul(&f.r).unwrap(), &a, 1e-12));
        let i4 = Matrix::<f64>::identity(4);
        let f = qr(&i4).unwrap();
        assert!(close(&f.q, &i4, 1e-15) && close(&f.r, &i4, 1e-15));
        assert_eq!(
            qr(&Matrix::<f64>::identity(3)),
            Err(MatrixError::NotPowerOfTwo(3))
        );
    }

    #[test]
    fn qr_of_singular_matrix() {
        let a = fm(&[
            &[1.0, 2.0, 0.0, 1.0],
            &[2.0, 4.0, 0.0, 1.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[1.0, 2.0, 0.0, 3.0],
        ]);
        let f = qr(&a).unwrap();
        let qtq = f.q.transpose().mul(&f.q).unwrap();
        assert!(close(&qtq, &Matrix::identity(4), 1e-12));
        assert!(close(&f.q.mul(&f.r).unwrap(), &a, 1e-12));
        assert!(f.r.is_upper_triangular());
    }

    #[test]
    fn svd_example() {
        let a = fm(&[&[2.0, 3.0], &[1.0, 0.0]]);
        let f = svd(&a);
        let sv = f.singular_values();
        let exact = [
            (7.0 + 2.0 * 10f64.sqrt()).sqrt(),
            (7.0 - 2.0 * 10f64.sqrt()).sqrt(),
        ];
        assert!((sv[0] - exact[0]).abs() < 1e-12 && (sv[1] - exact[1]).abs() < 1e-12);
        assert!(close(&f.u.mul(&f.d).unwrap().mul(&f.v).unwrap(), &a, 1e-12));
        let d = fm(&[&[5.0, 0.0], &[0.0, 2.0]]);
        assert_eq!(svd(&d).singular_values(), vec![5.0, 2.0]);
    }

    #[test]
    fn svd_rectangular() {
        let a = fm(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]]);
        for m in [a.clone(), a.transpose()] {
            let f = svd(&m);
            assert!(close(&f.u.mul(&f.d).unwrap().mul(&f.v).unwrap(), &m, 1e-12));
            let (r, c) = m.shape();
            assert!(close(
                &f.u.transpose().mul(&f.u).unwrap(),
                &Matrix::identity(r),
                1e-12
            ));
            assert!(close(
                &f.v.transpose().mul(&f.v).unwrap(),
                &Matrix::identity(c),
                1e-12
            ));
        }
    }

    #[test]
    fn cholesky_example() {
        let a = fm(&[&[3.0, 2.0], &[2.0, 4.0]]);
        let f = cholesky(&a, false).unwrap();
        assert_eq!(rounded(&f.l, 2), fm(&[&[1.73, 0.0], &[1.15, 1.63]]));
        assert_eq!(rounded(&f.s, 2), fm(&[&[0.58, 0.0], &[-0.41, 0.61]]));
        assert!(close(&f.s.mul(&f.l).unwrap(), &Matrix::identity(2), 1e-14));
        assert_eq!(
            cholesky(&fm(&[&[1.0, 2.0], &[0.0, 1.0]]), false),
            Err(MatrixError::NotSymmetric)
        );
        assert_eq!(
            cholesky(&fm(&[&[1.0, 2.0], &[2.0, 1.0]]), false),
            Err(MatrixError::NotPositiveDefinite)
        );
    }
}
