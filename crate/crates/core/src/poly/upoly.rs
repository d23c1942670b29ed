//! Dense univariate polynomials over Q for root isolation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Monomial, Poly};
use crate::arith::Scalar;

/// Coefficients from degree 0 upward; no trailing zeros.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct QPoly(pub Vec<BigRational>);

impl QPoly {
    fn trimmed(mut v: Vec<BigRational>) -> QPoly {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        QPoly(v)
    }

    /// `None` if a coefficient is not exact or another variable occurs.
    pub fn from_poly(p: &Poly, v: usize) -> Option<QPoly> {
        if !p.is_univariate_in(v) {
            return None;
        }
        let n = p.degree_in(v).map_or(0, |d| d as usize + 1);
        let mut c = vec![BigRational::zero(); n];
        for (m, a) in p.terms() {
            c[m.exp(v) as usize] = match a {
                Scalar::F64(f) => BigRational::from_float(*f)?,
                Scalar::Big(b) => BigRational::from_float(b.to_f64())?,
                other => other.as_rational()?,
            };
        }
        Some(QPoly::trimmed(c))
    }

    pub fn to_poly(&self, v: usize) -> Poly {
        Poly::from_terms(
            self.0
                .iter()
                .enumerate()
                .map(|(k, c)| (Monomial::var(v, k as u32), Scalar::from_rational(c.clone()))),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &BigRational) -> i32 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::trimmed(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        let mut r = self.0.clone();
        let dd = d.degree();
        let lc = d.0.last().expect("nonzero divisor").clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1;
            let f = &r[k] / &lc;
            for (i, c) in d.0.iter().enumerate() {
                r[k - dd + i] -= &f * c;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        QPoly::trimmed(r)
    }

    pub fn neg(&self) -> QPoly {
        QPoly(self.0.iter().map(|c| -c).collect())
    }

    /// Bound `B` with every real root in `(-B, B)`.
    pub fn root_bound(&self) -> BigRational {
        let lc = self.0.last().expect("nonzero").abs();
        let m = self.0[..self.0.len() - 1]
            .iter()
            .map(|c| c.abs() / &lc)
            .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
        m + BigRational::one() + BigRational::one()
    }
}

/// Sturm sequence of a squarefree polynomial.
pub(crate) struct Sturm(Vec<QPoly>);

impl Sturm {
    pub fn new(p: &QPoly) -> Sturm {
        let mut seq = vec![p.clone(), p.derivative()];
        while !seq.last().unwrap().is_zero() && seq.last().unwrap().degree() > 0 {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq.retain(|q| !q.is_zero());
        Sturm(seq)
    }

    fn variations(&self, x: &BigRational) -> usize {
        let mut last = 0;
        let mut count = 0;
        for q in &self.0 {
            let s = q.sign_at(x);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Number of distinct roots in `(a, b]`.
    pub fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

/// Disjoint open intervals `(lo, hi)` with rational endpoints, each holding
/// exactly one root of the squarefree `p`; endpoints are never roots.
pub(crate) fn isolate_roots(p: &QPoly) -> Vec<(BigRational, BigRational)> {
    if p.degree() == 0 {
        return Vec::new();
    }
    let sturm = Sturm::new(p);
    let b = p.root_bound();
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    let two = BigRational::from_integer(BigInt::from(2));
    while let Some((lo, hi)) = stack.pop() {
        let n = sturm.count(&lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push((lo, hi));
            continue;
        }
        let mut mid = (&lo + &hi) / &two;
        while p.sign_at(&mid) == 0 {
            mid = (&lo + &mid) / &two;
        }
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Halve the isolating interval of the unique root of `p` in `(lo, hi)`.
pub(crate) fn refine(p: &QPoly, sturm: &Sturm, lo: &mut BigRational, hi: &mut BigRational) {
    let mid = (&*lo + &*hi) / BigRational::from_integer(BigInt::from(2));
    if p.sign_at(&mid) == 0 {
        *lo = mid.clone();
        *hi = mid;
        return;
    }
    if sturm.count(lo, &mid) == 1 {
        *hi = mid;
    } else {
        *lo = mid;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> QPoly {
        QPoly::trimmed(
            v.iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    #[test]
    fn sturm_counts_roots() {
        // x^2 - 2
        let p = q(&[-2, 0, 1]);
        let s = Sturm::new(&p);
        let r = |n: i64| BigRational::from_integer(n.into());
        assert_eq!(s.count(&r(-10), &r(10)), 2);
        assert_eq!(s.count(&r(0), &r(10)), 1);
        let iso = isolate_roots(&p);
        assert_eq!(iso.len(), 2);
        assert!(iso[0].1 <= iso[1].0);
    }

    #[test]
    fn remainder() {
        let a = q(&[-1, 0, 0, 1]);
        let b = q(&[-1, 1]);
        assert!(a.rem(&b).is_zero());
    }
}
