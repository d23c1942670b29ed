//! Buchberger's algorithm for reduced Gröbner bases.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{ArithError, ExactDiv, Ring, Scalar};
use crate::cancel::{CancelToken, Cancelled};
use crate::poly::{Monomial, Poly};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroebnerError {
    #[error("no generators given")]
    EmptyInput,
    #[error("S-polynomial of a zero polynomial")]
    ZeroPolynomial,
    #[error("Gröbner bases need exact coefficients")]
    InexactCoefficients,
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Cancelled(#[from] Cancelled),
}

/// Term order on exponent vectors. Variables declared later are greater.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    /// Pure lexicographic; eliminates the greatest variable first.
    #[default]
    Lex,
    /// Graded reverse lexicographic.
    DegRevLex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp_lex(b),
            MonomialOrder::DegRevLex => a.degree().cmp(&b.degree()).then_with(|| {
                let n = a.exps().len().max(b.exps().len());
                for v in 0..n {
                    match a.exp(v).cmp(&b.exp(v)) {
                        Ordering::Equal => continue,
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }),
        }
    }

    pub fn leading_term(self, f: &Poly) -> Option<(&Monomial, &Scalar)> {
        match self {
            MonomialOrder::Lex => f.leading_term(),
            _ => f.terms().max_by(|a, b| self.cmp(a.0, b.0)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdealBasis {
    pub generators: Vec<Poly>,
    pub reduced: bool,
}

fn make_monic(f: &Poly, ord: MonomialOrder) -> Result<Poly, ArithError> {
    match ord.leading_term(f) {
        Some((_, c)) if !c.is_one() => {
            let inv = c.try_inv()?;
            Ok(f.scale(&inv))
        }
        _ => Ok(f.clone()),
    }
}

pub fn s_polynomial(f: &Poly, g: &Poly, ord: MonomialOrder) -> Result<Poly, GroebnerError> {
    let (mf, cf) = ord.leading_term(f).ok_or(GroebnerError::ZeroPolynomial)?;
    let (mg, cg) = ord.leading_term(g).ok_or(GroebnerError::ZeroPolynomial)?;
    let l = mf.lcm(mg);
    let a = f.mul_monomial(&mf.quotient_of(&l).expect("lcm"), &cf.try_inv()?);
    let b = g.mul_monomial(&mg.quotient_of(&l).expect("lcm"), &cg.try_inv()?);
    Ok(&a - &b)
}

/// Full reduction of `f` modulo `basis`: no term of the result is divisible
/// by a leading monomial of the basis.
pub fn reduce(f: &Poly, basis: &[Poly], ord: MonomialOrder) -> Result<Poly, GroebnerError> {
    let leads: Vec<(Monomial, Scalar)> = basis
        .iter()
        .filter_map(|g| ord.leading_term(g).map(|(m, c)| (m.clone(), c.clone())))
        .collect();
    let basis: Vec<&Poly> = basis.iter().filter(|g| !g.is_zero()).collect();
    let mut p = f.clone();
    let mut rest = Vec::new();
    while let Some((m, c)) = ord.leading_term(&p).map(|(m, c)| (m.clone(), c.clone())) {
        match leads.iter().position(|(lm, _)| lm.divides(&m)) {
            Some(i) => {
                let (lm, lc) = &leads[i];
                let q = c.checked_div(lc)?;
                p = &p - &basis[i].mul_monomial(&lm.quotient_of(&m).expect("divides"), &q);
            }
            None => {
                p = &p - &Poly::monomial(m.clone(), c.clone());
                rest.push((m, c));
            }
        }
    }
    Ok(Poly::from_terms(rest))
}

fn lead(f: &Poly, ord: MonomialOrder) -> Monomial {
    ord.leading_term(f).expect("nonzero").0.clone()
}

fn int_lc(f: &Poly, ord: MonomialOrder) -> BigInt {
    ord.leading_term(f)
        .and_then(|(_, c)| c.as_integer().cloned())
        .expect("integral generator")
}

fn divide_content(p: &mut Poly, rest: &mut Poly) {
    let g = p
        .coefficients()
        .chain(rest.coefficients())
        .filter_map(Scalar::as_integer)
        .fold(BigInt::zero(), |g, c| g.gcd(c));
    if g > BigInt::one() {
        let g = Scalar::Int(g);
        let div = |c: &Scalar| c.exact_div(&g).expect("content divides");
        *p = p.map_coeffs(div);
        *rest = rest.map_coeffs(div);
    }
}

/// Integer S-polynomial, a positive rational multiple of [`s_polynomial`].
fn s_poly_integral(f: &Poly, g: &Poly, ord: MonomialOrder) -> Poly {
    let (mf, mg) = (lead(f, ord), lead(g, ord));
    let (cf, cg) = (int_lc(f, ord), int_lc(g, ord));
    let d = cf.gcd(&cg);
    let l = mf.lcm(&mg);
    let a = f.mul_monomial(&mf.quotient_of(&l).expect("lcm"), &Scalar::Int(&cg / &d));
    let b = g.mul_monomial(&mg.quotient_of(&l).expect("lcm"), &Scalar::Int(&cf / &d));
    &a - &b
}

/// Fraction-free full reduction over Z; the result is a nonzero rational
/// multiple of the reduction over Q.
fn reduce_integral(f: &Poly, basis: &[Poly], ord: MonomialOrder) -> Poly {
    let leads: Vec<(Monomial, BigInt)> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| (lead(g, ord), int_lc(g, ord)))
        .collect();
    let basis: Vec<&Poly> = basis.iter().filter(|g| !g.is_zero()).collect();
    let mut p = f.clone();
    let mut rest = Poly::zero();
    while let Some((m, c)) = ord.leading_term(&p).map(|(m, c)| (m.clone(), c.clone())) {
        match leads.iter().position(|(lm, _)| lm.divides(&m)) {
            Some(i) => {
                let (lm, a) = &leads[i];
                let c = c.as_integer().expect("integral").clone();
                let d = a.gcd(&c);
                let scale = Scalar::Int(a / &d);
                let q = lm.quotient_of(&m).expect("divides");
                p = &p.scale(&scale) - &basis[i].mul_monomial(&q, &Scalar::Int(&c / &d));
                rest = rest.scale(&scale);
                divide_content(&mut p, &mut rest);
            }
            None => {
                let t = Poly::monomial(m, c);
                p = &p - &t;
                rest = &rest + &t;
            }
        }
    }
    rest
}

/// Reduced Gröbner basis by Buchberger's algorithm with the normal selection
/// strategy and the coprime and chain criteria.
///
/// Integer and rational inputs are computed over Q and returned as primitive
/// integer polynomials with positive leading coefficient; residue inputs are
/// returned monic.
pub fn groebner_basis(
    input: &[Poly],
    ord: MonomialOrder,
    cancel: &CancelToken,
) -> Result<IdealBasis, GroebnerError> {
    if input.is_empty() {
        return Err(GroebnerError::EmptyInput);
    }
    if input.iter().any(Poly::has_float) {
        return Err(GroebnerError::InexactCoefficients);
    }
    let residues = input.iter().any(Poly::has_residue);
    let normalize = |f: &Poly| -> Result<Poly, GroebnerError> {
        if residues {
            Ok(make_monic(f, ord)?)
        } else {
            Ok(normalize_integer(f, ord))
        }
    };
    let reduce_by = |f: &Poly, basis: &[Poly]| -> Result<Poly, GroebnerError> {
        if residues {
            reduce(f, basis, ord)
        } else {
            Ok(reduce_integral(f, basis, ord))
        }
    };
    let mut g: Vec<Poly> = Vec::new();
    for f in input.iter().filter(|f| !f.is_zero()) {
        g.push(normalize(f)?);
    }
    if g.is_empty() {
        return Ok(IdealBasis {
            generators: vec![Poly::zero()],
            reduced: true,
        });
    }
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..g.len() {
        for i in 0..j {
            pending.insert((i, j));
        }
    }
    while !pending.is_empty() {
        cancel.check()?;
        let &(i, j) = pending
            .iter()
            .min_by(|a, b| {
                let la = lead(&g[a.0], ord).lcm(&lead(&g[a.1], ord));
                let lb = lead(&g[b.0], ord).lcm(&lead(&g[b.1], ord));
                la.degree()
                    .cmp(&lb.degree())
                    .then_with(|| ord.cmp(&la, &lb))
                    .then_with(|| a.cmp(b))
            })
            .expect("nonempty");
        pending.remove(&(i, j));
        let (mi, mj) = (lead(&g[i], ord), lead(&g[j], ord));
        if mi.is_coprime(&mj) {
            continue;
        }
        let l = mi.lcm(&mj);
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let chain = (0..g.len()).any(|k| {
            k != i
                && k != j
                && lead(&g[k], ord).divides(&l)
                && !pending.contains(&key(i, k))
                && !pending.contains(&key(j, k))
        });
        if chain {
            continue;
        }
        let s = if residues {
            s_polynomial(&g[i], &g[j], ord)?
        } else {
            s_poly_integral(&g[i], &g[j], ord)
        };
        let r = reduce_by(&s, &g)?;
        if r.is_zero() {
            continue;
        }
        let r = normalize(&r)?;
        let n = g.len();
        g.push(r);
        for k in 0..n {
            pending.insert((k, n));
        }
    }

    // Minimal basis: drop generators whose leading monomial is divisible by another's.
    let mut keep: Vec<Poly> = Vec::new();
    for (idx, f) in g.iter().enumerate() {
        let m = lead(f, ord);
        let redundant = g.iter().enumerate().any(|(k, h)| {
            let hm = lead(h, ord);
            k != idx && hm.divides(&m) && (hm != m || k < idx)
        });
        if !redundant {
            keep.push(f.clone());
        }
    }
    // Interreduce.
    for idx in 0..keep.len() {
        cancel.check()?;
        let others: Vec<Poly> = keep
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != idx)
            .map(|(_, h)| h.clone())
            .collect();
        let r = reduce_by(&keep[idx], &others)?;
        keep[idx] = normalize(&r)?;
    }
    let mut generators = keep;
    generators.sort_by(|a, b| ord.cmp(&lead(b, ord), &lead(a, ord)));
    Ok(IdealBasis {
        generators,
        reduced: true,
    })
}

/// Primitive integer multiple with positive leading coefficient under `ord`.
fn normalize_integer(f: &Poly, ord: MonomialOrder) -> Poly {
    let (p, _) = f.to_primitive_integer();
    match ord.leading_term(&p) {
        Some((_, c)) if c.is_negative() => -p,
        _ => p,
    }
}

/// Every S-polynomial of `basis` reduces to zero.
pub fn is_groebner_basis(basis: &[Poly], ord: MonomialOrder) -> Result<bool, GroebnerError> {
    for j in 0..basis.len() {
        for i in 0..j {
            let s = s_polynomial(&basis[i], &basis[j], ord)?;
            if !reduce(&s, basis, ord)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::testutil::*;
    use crate::render::{Render, Style};

    fn show(g: &IdealBasis, vars: &[&str]) -> Vec<String> {
        let names = names(vars);
        let st = Style::new(&names, 2);
        g.generators.iter().map(|f| f.text(&st)).collect()
    }

    #[test]
    fn two_circle_system() {
        // Variables [y, x]; x is declared last and therefore greatest.
        let f = p(&[(1, &[0, 2]), (1, &[2, 0]), (-1, &[])]);
        let g = p(&[(2, &[0, 2]), (1, &[1, 1]), (1, &[2, 0]), (-1, &[])]);
        let b = groebner_basis(&[f, g], MonomialOrder::Lex, &CancelToken::never()).unwrap();
        assert_eq!(show(&b, &["y", "x"]), vec!["x-2*y^3+2*y", "2*y^4-3*y^2+1"]);
        assert!(is_groebner_basis(&b.generators, MonomialOrder::Lex).unwrap());
    }

    #[test]
    fn s_polynomial_examples() {
        let f = p(&[(1, &[0, 2]), (1, &[2, 0]), (-1, &[])]);
        let g = p(&[(2, &[0, 2]), (1, &[1, 1]), (1, &[2, 0]), (-1, &[])]);
        assert!(s_polynomial(&f, &f, MonomialOrder::Lex).unwrap().is_zero());
        let s = s_polynomial(&f, &g, MonomialOrder::Lex).unwrap();
        let expected =
            p(&[(1, &[1, 1]), (-1, &[2, 0]), (1, &[])]).scale(&Scalar::ratio(-1, 2).unwrap());
        assert_eq!(s, expected);
        let x = p(&[(1, &[1])]);
        let y = p(&[(1, &[0, 1])]);
        let s = s_polynomial(&x, &y, MonomialOrder::Lex).unwrap();
        assert!(reduce(&s, &[x, y], MonomialOrder::Lex).unwrap().is_zero());
    }

    #[test]
    fn reduction_examples() {
        let x2 = p(&[(1, &[2])]);
        let x = p(&[(1, &[1])]);
        assert!(reduce(&x2, std::slice::from_ref(&x2), MonomialOrder::Lex)
            .unwrap()
            .is_zero());
        assert!(reduce(&x2, std::slice::from_ref(&x), MonomialOrder::Lex)
            .unwrap()
            .is_zero());
        let f = p(&[(1, &[2, 1]), (1, &[])]);
        assert_eq!(
            reduce(&f, &[x2], MonomialOrder::Lex).unwrap(),
            p(&[(1, &[])])
        );
    }

    #[test]
    fn trivial_ideals() {
        let t = CancelToken::never();
        let x = p(&[(1, &[1])]);
        let b = groebner_basis(std::slice::from_ref(&x), MonomialOrder::Lex, &t).unwrap();
        assert_eq!(b.generators, vec![x]);
        let a = p(&[(1, &[1]), (-1, &[])]);
        let c = p(&[(1, &[1]), (1, &[])]);
        let b = groebner_basis(&[a, c], MonomialOrder::Lex, &t).unwrap();
        assert_eq!(b.generators, vec![p(&[(1, &[])])]);
        assert_eq!(
            groebner_basis(&[], MonomialOrder::Lex, &t),
            Err(GroebnerError::EmptyInput)
        );
    }

    #[test]
    fn residue_coefficients_are_monic() {
        use crate::arith::ModInt;
        let m = |c: i64| Scalar::Mod(ModInt::new(c as i128, 5));
        let f = Poly::from_terms([(Monomial::var(0, 2), m(2)), (Monomial::one(), m(3))]);
        let g = Poly::from_terms([(Monomial::var(0, 1), m(3)), (Monomial::one(), m(1))]);
        let b = groebner_basis(&[f, g], MonomialOrder::Lex, &CancelToken::never()).unwrap();
        for h in &b.generators {
            assert_eq!(MonomialOrder::Lex.leading_term(h).unwrap().1, &m(1));
        }
    }

    #[test]
    fn cancellation_is_observed() {
        let f = p(&[(1, &[0, 2]), (1, &[2, 0]), (-1, &[])]);
        let g = p(&[(2, &[0, 2]), (1, &[1, 1]), (1, &[2, 0]), (-1, &[])]);
        let t = CancelToken::with_timeout(std::time::Duration::ZERO);
        assert_eq!(
            groebner_basis(&[f, g], MonomialOrder::Lex, &t),
            Err(GroebnerError::Cancelled(Cancelled))
        );
    }

    #[test]
    fn grevlex_orders_by_degree_first() {
        let a = Monomial::from_exps(vec![0, 3]);
        let b = Monomial::from_exps(vec![2, 2]);
        assert_eq!(MonomialOrder::DegRevLex.cmp(&a, &b), Ordering::Less);
        let c = Monomial::from_exps(vec![1, 1, 0]);
        let d = Monomial::from_exps(vec![0, 2, 0]);
        assert_eq!(MonomialOrder::DegRevLex.cmp(&c, &d), Ordering::Less);
    }
}
