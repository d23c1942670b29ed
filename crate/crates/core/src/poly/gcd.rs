use num_integer::Integer;

use super::{Poly, PolyError};
use crate::arith::{ExactDiv, Ring, Scalar};

/// Coefficient growth observed along a subresultant remainder sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GcdStats {
    pub steps: usize,
    pub max_bits: u64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Integer coefficients: content is kept, leading coefficient positive.
    Integer,
    /// Field coefficients: monic results.
    Field,
}

/// Greatest common divisor.
///
/// Integer polynomials keep their numeric content and get a positive leading
/// coefficient; rational, residue and float polynomials are made monic.
/// Multivariate inputs are handled recursively by content and primitive part
/// with respect to the highest variable.
pub fn gcd(f: &Poly, g: &Poly) -> Result<Poly, PolyError> {
    gcd_with_stats(f, g).map(|(d, _)| d)
}

pub fn gcd_with_stats(f: &Poly, g: &Poly) -> Result<(Poly, GcdStats), PolyError> {
    if f.is_zero() && g.is_zero() {
        return Err(PolyError::BothZero);
    }
    let mut stats = GcdStats::default();
    if f.has_float() || g.has_float() {
        return Ok((float_gcd(f, g)?, stats));
    }
    if f.has_residue() || g.has_residue() {
        let d = rec_gcd(f, g, Mode::Field, &mut stats);
        return Ok((d.monic()?, stats));
    }
    if f.is_integral() && g.is_integral() {
        let d = rec_gcd(f, g, Mode::Integer, &mut stats);
        return Ok((d, stats));
    }
    let (fi, _) = f.to_primitive_integer();
    let (gi, _) = g.to_primitive_integer();
    let d = rec_gcd(&fi, &gi, Mode::Integer, &mut stats);
    Ok((d.monic()?, stats))
}

/// Gcd made monic, as over the fraction field.
pub fn monic_gcd(f: &Poly, g: &Poly) -> Result<Poly, PolyError> {
    gcd(f, g)?.monic()
}

fn normalize(p: Poly, mode: Mode) -> Poly {
    if p.is_zero() {
        return p;
    }
    match mode {
        Mode::Integer if p.leading_coeff().is_negative() => -p,
        Mode::Integer => p,
        Mode::Field => p.monic().expect("nonzero"),
    }
}

fn rec_gcd(f: &Poly, g: &Poly, mode: Mode, stats: &mut GcdStats) -> Poly {
    if f.is_zero() {
        return normalize(g.clone(), mode);
    }
    if g.is_zero() {
        return normalize(f.clone(), mode);
    }
    if let (Some(a), Some(b)) = (f.as_constant(), g.as_constant()) {
        return match (mode, a, b) {
            (Mode::Integer, Scalar::Int(a), Scalar::Int(b)) => {
                Poly::constant(Scalar::Int(a.gcd(&b)))
            }
            _ => Poly::constant(Scalar::one()),
        };
    }
    let v = f.max_var().max(g.max_var()).expect("nonconstant");
    if f.is_free_of(v) {
        return rec_gcd(f, &content_rec(g, v, mode, stats), mode, stats);
    }
    if g.is_free_of(v) {
        return rec_gcd(&content_rec(f, v, mode, stats), g, mode, stats);
    }
    let cf = content_rec(f, v, mode, stats);
    let cg = content_rec(g, v, mode, stats);
    let c = rec_gcd(&cf, &cg, mode, stats);
    let pf = f.exact_div(&cf).expect("content divides");
    let pg = g.exact_div(&cg).expect("content divides");
    let h = subresultant_prs(pf, pg, v, mode, stats);
    let h = if h.is_free_of(v) {
        Poly::one()
    } else {
        let ch = content_rec(&h, v, mode, stats);
        h.exact_div(&ch).expect("content divides")
    };
    normalize(&c * &h, mode)
}

fn content_rec(f: &Poly, v: usize, mode: Mode, stats: &mut GcdStats) -> Poly {
    let mut acc = Poly::zero();
    for c in f.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        acc = rec_gcd(&acc, &c, mode, stats);
        if acc.as_constant().is_some_and(|k| k.is_one()) {
            break;
        }
    }
    // Match the sign of the leading coefficient so f / content stays normalized.
    if mode == Mode::Integer && f.leading_coeff().is_negative() {
        acc = -acc;
    }
    acc
}

/// Content of `f` with respect to `v`: gcd of its coefficients in `v`.
pub fn content_in(f: &Poly, v: usize) -> Poly {
    let mode = if f.is_integral() {
        Mode::Integer
    } else {
        Mode::Field
    };
    content_rec(f, v, mode, &mut GcdStats::default())
}

pub fn primitive_part_in(f: &Poly, v: usize) -> Poly {
    if f.is_zero() {
        return Poly::zero();
    }
    let c = content_in(f, v);
    f.exact_div(&c).expect("content divides")
}

/// Subresultant remainder sequence of two primitive polynomials in `v`;
/// returns the last nonzero element (or 1 when the gcd is trivial).
fn subresultant_prs(mut a: Poly, mut b: Poly, v: usize, mode: Mode, stats: &mut GcdStats) -> Poly {
    let deg = |p: &Poly| p.degree_in(v).unwrap_or(0);
    if deg(&a) < deg(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    let mut g = Poly::one();
    let mut h = Poly::one();
    loop {
        let delta = deg(&a) - deg(&b);
        let r = a.pseudo_rem_in(&b, v);
        stats.steps += 1;
        if r.is_zero() {
            return b;
        }
        if r.is_free_of(v) {
            return Poly::one();
        }
        a = b;
        let divisor = &g * &h.pow(delta);
        b = r
            .exact_div(&divisor)
            .expect("subresultant division is exact");
        if mode == Mode::Integer {
            stats.max_bits = stats.max_bits.max(b.max_coeff_bits());
        }
        g = a.lc_in(v);
        h = if delta == 0 {
            h
        } else {
            g.pow(delta).exact_div(&h.pow(delta - 1)).expect("exact")
        };
    }
}

fn float_gcd(f: &Poly, g: &Poly) -> Result<Poly, PolyError> {
    let v = f.max_var().max(g.max_var());
    let Some(v) = v else {
        return Ok(Poly::one());
    };
    if !f.is_univariate_in(v) || !g.is_univariate_in(v) {
        return Err(PolyError::UnsupportedDomain(
            "floating multivariate coefficients",
        ));
    }
    let tol = 1e-9 * f.max_norm().max(g.max_norm()).max(1.0);
    let chop = |p: Poly| {
        p.map_coeffs(|c| {
            if c.to_f64().abs() <= tol {
                Scalar::zero()
            } else {
                c.clone()
            }
        })
    };
    let (mut a, mut b) = (chop(f.clone()), chop(g.clone()));
    while !b.is_zero() {
        let (_, r) = a.div_rem_in(&b, v)?;
        a = b;
        b = chop(r);
    }
    a.monic()
}

/// Bézout coefficients: returns `(d, u, w)` with `u·f + w·g = d`.
///
/// The computation runs over the fraction field. For integer inputs `d` is
/// the integer gcd of [`gcd`] and `u`, `w` may have rational coefficients.
pub fn extended_gcd(f: &Poly, g: &Poly) -> Result<(Poly, Poly, Poly), PolyError> {
    if f.is_zero() && g.is_zero() {
        return Err(PolyError::BothZero);
    }
    let v = f.max_var().max(g.max_var());
    if let Some(v) = v {
        if !f.is_univariate_in(v) || !g.is_univariate_in(v) {
            return Err(PolyError::NotUnivariate);
        }
    }
    let v = v.unwrap_or(0);
    let target = gcd(f, g)?;
    let (mut r0, mut r1) = (f.clone(), g.clone());
    let (mut s0, mut s1) = (Poly::one(), Poly::zero());
    let (mut t0, mut t1) = (Poly::zero(), Poly::one());
    let float = f.has_float() || g.has_float();
    let tol = 1e-9 * f.max_norm().max(g.max_norm()).max(1.0);
    while !r1.is_zero() {
        let (q, mut r) = to_field(&r0).div_rem_in(&to_field(&r1), v)?;
        if float {
            r = r.map_coeffs(|c| {
                if c.to_f64().abs() <= tol {
                    Scalar::zero()
                } else {
                    c.clone()
                }
            });
        }
        let s = &s0 - &(&q * &s1);
        let t = &t0 - &(&q * &t1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    // r0 is an associate of the gcd; rescale to the normalized one.
    let k = target.leading_coeff().checked_div(&r0.leading_coeff())?;
    Ok((target, s0.scale(&k), t0.scale(&k)))
}

/// Promote integer coefficients so field division applies.
fn to_field(p: &Poly) -> Poly {
    p.map_coeffs(|c| match c {
        Scalar::Int(i) => Scalar::Rat(num_rational::BigRational::from_integer(i.clone())),
        other => other.clone(),
    })
}

/// Least common multiple `f·g / gcd(f, g)`, normalized like [`gcd`].
pub fn lcm(f: &Poly, g: &Poly) -> Result<Poly, PolyError> {
    if f.is_zero() && g.is_zero() {
        return Err(PolyError::BothZero);
    }
    if f.is_zero() || g.is_zero() {
        return Ok(Poly::zero());
    }
    let d = gcd(f, g)?;
    let prod = f * g;
    let l = prod.exact_div(&d).ok_or(PolyError::InexactDivision)?;
    let integral = f.is_integral() && g.is_integral();
    Ok(if integral {
        if l.leading_coeff().is_negative() {
            -l
        } else {
            l
        }
    } else {
        l.monic()?
    })
}
