use crate::arith::Ring;
use crate::matrix::{Matrix, MatrixError};

/// Blocks at or below this order are multiplied classically.
pub const CUTOFF: usize = 32;

fn quarters<T: Ring>(a: &Matrix<T>, h: usize) -> [Matrix<T>; 4] {
    [
        a.submatrix(0, 0, h, h),
        a.submatrix(0, h, h, h),
        a.submatrix(h, 0, h, h),
        a.submatrix(h, h, h, h),
    ]
}

fn assemble<T: Ring>(c: [Matrix<T>; 4], h: usize) -> Matrix<T> {
    Matrix::from_fn(2 * h, 2 * h, |i, j| {
        let (bi, bj) = (i / h, j / h);
        c[2 * bi + bj][(i % h, j % h)].clone()
    })
}

/// Product by the Winograd form of Strassen's algorithm (seven block
/// products, fifteen block additions). Operands are zero-padded to a common
/// power-of-two order and the product is cropped.
pub fn strassen_winograd<T: Ring>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>, MatrixError> {
    if a.cols() != b.rows() {
        return Err(MatrixError::DimensionMismatch {
            expected: (a.cols(), b.cols()),
            found: b.shape(),
        });
    }
    let n = a
        .rows()
        .max(a.cols())
        .max(b.cols())
        .max(1)
        .next_power_of_two();
    if n <= CUTOFF {
        return a.mul(b);
    }
    let c = recurse(&a.padded(n, n), &b.padded(n, n));
    Ok(c.submatrix(0, 0, a.rows(), b.cols()))
}

fn recurse<T: Ring>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let n = a.rows();
    if n <= CUTOFF {
        return a.mul(b).expect("square blocks");
    }
    let h = n / 2;
    let [a11, a12, a21, a22] = quarters(a, h);
    let [b11, b12, b21, b22] = quarters(b, h);
    let add = |x: &Matrix<T>, y: &Matrix<T>| x.add(y).expect("equal blocks");
    let sub = |x: &Matrix<T>, y: &Matrix<T>| x.sub(y).expect("equal blocks");

    let s1 = add(&a21, &a22);
    let s2 = sub(&s1, &a11);
    let s3 = sub(&a11, &a21);
    let s4 = sub(&a12, &s2);
    let t1 = sub(&b12, &b11);
    let t2 = sub(&b22, &t1);
    let t3 = sub(&b22, &b12);
    let t4 = sub(&t2, &b21);

    let p1 = recurse(&a11, &b11);
    let p2 = recurse(&a12, &b21);
    let p3 = recurse(&s4, &b22);
    let p4 = recurse(&a22, &t4);
    let p5 = recurse(&s1, &t1);
    let p6 = recurse(&s2, &t2);
    let p7 = recurse(&s3, &t3);

    let u2 = add(&p1, &p6);
    let u3 = add(&u2, &p7);
    let u4 = add(&u2, &p5);
    let c11 = add(&p1, &p2);
    let c12 = add(&u4, &p3);
    let c21 = sub(&u3, &p4);
    let c22 = add(&u3, &p5);
    assemble([c11, c12, c21, c22], h)
}
