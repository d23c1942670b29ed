use super::{Poly, PolyError};
use crate::arith::{ExactDiv, Ring};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SylvesterKind {
    /// `(n+m)×(n+m)`: `m` shifted rows of `f`, then `n` shifted rows of `g`.
    First,
    /// `2n×2n`: shifted pairs `(f, g)` with `g` aligned to the right of `f`.
    Second,
}

/// Coefficients in `v`, highest degree first.
fn dense_desc(p: &Poly, v: usize) -> Vec<Poly> {
    let mut c = p.coeffs_in(v);
    c.reverse();
    c
}

/// Sylvester matrix of `f` and `g` viewed as polynomials in `v`.
pub fn sylvester(
    f: &Poly,
    g: &Poly,
    v: usize,
    kind: SylvesterKind,
) -> Result<Matrix<Poly>, PolyError> {
    if f.is_zero() || g.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let fc = dense_desc(f, v);
    let gc = dense_desc(g, v);
    let n = fc.len() - 1;
    let m = gc.len() - 1;
    match kind {
        SylvesterKind::First => {
            let size = n + m;
            let mut s = Matrix::zeros(size, size);
            for r in 0..m {
                for (k, c) in fc.iter().enumerate() {
                    s[(r, r + k)] = c.clone();
                }
            }
            for r in 0..n {
                for (k, c) in gc.iter().enumerate() {
                    s[(m + r, r + k)] = c.clone();
                }
            }
            Ok(s)
        }
        SylvesterKind::Second => {
            if n < m {
                return Err(PolyError::DegreeOrder);
            }
            let size = 2 * n;
            let mut s = Matrix::zeros(size, size);
            for pair in 0..n {
                for (k, c) in fc.iter().enumerate() {
                    s[(2 * pair, pair + k)] = c.clone();
                }
                for (k, c) in gc.iter().enumerate() {
                    s[(2 * pair + 1, pair + n - m + k)] = c.clone();
                }
            }
            Ok(s)
        }
    }
}

fn exact(a: &Poly, b: &Poly) -> Poly {
    a.known_quotient(b).expect("subresultant division is exact")
}

/// Resultant with respect to `v` by the subresultant algorithm; agrees with
/// the determinant of the first-kind Sylvester matrix.
pub fn resultant(f: &Poly, g: &Poly, v: usize) -> Result<Poly, PolyError> {
    if f.is_zero() || g.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let deg = |p: &Poly| p.degree_in(v).unwrap_or(0);
    let (mut a, mut b) = (f.clone(), g.clone());
    let mut negate = false;
    if deg(&a) < deg(&b) {
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            negate = true;
        }
        std::mem::swap(&mut a, &mut b);
    }
    let sign = |p: Poly, neg: bool| if neg { -p } else { p };
    if deg(&b) == 0 {
        return Ok(sign(b.pow(deg(&a)), negate));
    }
    let mut g_ = Poly::one();
    let mut h = Poly::one();
    loop {
        let (da, db) = (deg(&a), deg(&b));
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            negate = !negate;
        }
        let r = a.pseudo_rem_in(&b, v);
        a = b;
        b = exact(&r, &(&g_ * &h.pow(delta)));
        g_ = a.lc_in(v);
        h = if delta == 0 {
            h
        } else {
            exact(&g_.pow(delta), &h.pow(delta - 1))
        };
        if b.is_zero() {
            return Ok(Poly::zero());
        }
        if deg(&b) == 0 {
            break;
        }
    }
    let da = deg(&a);
    let out = exact(&b.lc_in(v).pow(da), &h.pow(da - 1));
    Ok(sign(out, negate))
}

/// `(−1)^(d(d−1)/2) / f_d · resultant(f, f′)`; the division is exact.
pub fn discriminant(f: &Poly, v: usize) -> Result<Poly, PolyError> {
    let d = f.degree_in(v).ok_or(PolyError::ZeroPolynomial)?;
    if d == 0 {
        return Err(PolyError::ZeroPolynomial);
    }
    let r = resultant(f, &f.derivative(v), v)?;
    let q = r
        .known_quotient(&f.lc_in(v))
        .ok_or(PolyError::InexactDivision)?;
    Ok(if (d * (d - 1) / 2) % 2 == 1 { -q } else { q })
}
