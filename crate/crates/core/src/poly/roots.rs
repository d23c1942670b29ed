use std::cmp::Ordering;

use num_bigint::BigInt;
use num_complex::Complex64;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::upoly::QPoly;
use super::{gcd, Poly, PolyError};
use crate::arith::ExactDiv;
#[cfg(test)]
use crate::arith::Scalar;
use crate::render::{Render, Style};

/// Exact real root `a + b·√m`, or `±√(a + b·√m)` when nested.
#[derive(Debug, Clone, PartialEq)]
pub struct Surd {
    pub a: BigRational,
    pub b: BigRational,
    /// Squarefree radicand greater than one, or one when `b = 0`.
    pub m: BigInt,
    /// `Some(negative)` for `±√(a + b√m)`.
    pub nested: Option<bool>,
}

impl Surd {
    pub fn rational(a: BigRational) -> Surd {
        Surd {
            a,
            b: BigRational::zero(),
            m: BigInt::one(),
            nested: None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.nested.is_none() && self.b.is_zero()
    }

    fn inner_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let m = self.m.to_f64().unwrap_or(f64::NAN);
        a + b * m.sqrt()
    }

    pub fn to_f64(&self) -> f64 {
        let v = self.inner_f64();
        match self.nested {
            None => v,
            Some(false) => v.sqrt(),
            Some(true) => -v.sqrt(),
        }
    }

    /// `√(p/q)` simplified to `s·√m/q'` form, for rational `t > 0`.
    fn sqrt_of_rational(t: &BigRational, negative: bool) -> Surd {
        let n = t.numer() * t.denom();
        let (s, m) = split_square(&n);
        let mut b = BigRational::new(s, t.denom().clone());
        if negative {
            b = -b;
        }
        if m.is_one() {
            Surd::rational(b)
        } else {
            Surd {
                a: BigRational::zero(),
                b,
                m,
                nested: None,
            }
        }
    }

    /// Exact check `f(self) = 0` by arithmetic in `Q(√m)` and `Q(√m)(√t)`.
    pub(crate) fn is_root_of(&self, f: &QPoly) -> bool {
        let m = BigRational::from_integer(self.m.clone());
        match self.nested {
            None => {
                let x = Quad(self.a.clone(), self.b.clone());
                f.0.iter()
                    .rev()
                    .fold(Quad::zero(), |acc, c| acc.mul(&x, &m).add_rat(c))
                    .is_zero()
            }
            Some(neg) => {
                // Elements u + w·√t, with t = a + b√m.
                let t = Quad(self.a.clone(), self.b.clone());
                let w0 = if neg {
                    -BigRational::one()
                } else {
                    BigRational::one()
                };
                let x = (Quad::zero(), Quad(w0, BigRational::zero()));
                let mut acc = (Quad::zero(), Quad::zero());
                for c in f.0.iter().rev() {
                    let u = acc.0.mul(&x.0, &m).add(&acc.1.mul(&x.1, &m).mul(&t, &m));
                    let w = acc.0.mul(&x.1, &m).add(&acc.1.mul(&x.0, &m));
                    acc = (u.add_rat(c), w);
                }
                acc.0.is_zero() && acc.1.is_zero()
            }
        }
    }

    fn inner_text(&self, latex: bool) -> String {
        let mut parts = Vec::new();
        if !self.a.is_zero() || self.b.is_zero() {
            parts.push(rat_text(&self.a, latex));
        }
        if !self.b.is_zero() {
            let sign = if self.b.is_negative() { "-" } else { "" };
            let p = self.b.numer().abs();
            let q = self.b.denom();
            let root = if latex {
                format!("\\sqrt{{{}}}", self.m)
            } else {
                format!("√{}", self.m)
            };
            let coef = if p.is_one() {
                String::new()
            } else {
                p.to_string()
            };
            let num = format!("{coef}{root}");
            let term = if q.is_one() {
                num
            } else if latex {
                format!("\\frac{{{num}}}{{{q}}}")
            } else {
                format!("{num}/{q}")
            };
            parts.push(format!("{sign}{term}"));
        }
        crate::render::join_terms(parts)
    }

    fn render(&self, latex: bool) -> String {
        match self.nested {
            None => self.inner_text(latex),
            Some(neg) => {
                let sign = if neg { "-" } else { "" };
                if latex {
                    format!("{sign}\\sqrt{{{}}}", self.inner_text(true))
                } else {
                    format!("{sign}√({})", self.inner_text(false))
                }
            }
        }
    }
}

fn rat_text(r: &BigRational, latex: bool) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    if latex {
        let sign = if r.is_negative() { "-" } else { "" };
        format!("{sign}\\frac{{{}}}{{{}}}", r.numer().abs(), r.denom())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Element `x + y·√m` of a real quadratic field.
#[derive(Clone)]
struct Quad(BigRational, BigRational);

impl Quad {
    fn zero() -> Quad {
        Quad(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero() && self.1.is_zero()
    }
    fn add(&self, o: &Quad) -> Quad {
        Quad(&self.0 + &o.0, &self.1 + &o.1)
    }
    fn add_rat(&self, c: &BigRational) -> Quad {
        Quad(&self.0 + c, self.1.clone())
    }
    fn mul(&self, o: &Quad, m: &BigRational) -> Quad {
        Quad(
            &self.0 * &o.0 + &self.1 * &o.1 * m,
            &self.0 * &o.1 + &self.1 * &o.0,
        )
    }
}

/// `n = s²·m` with `m` squarefree as far as trial division up to 10⁶ shows.
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    let mut rest = n.abs();
    let mut s = BigInt::one();
    let mut m = BigInt::one();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(1_000_000);
    while &p * &p <= rest && p <= limit {
        let mut e = 0;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= &p;
        }
        if e % 2 == 1 {
            m *= &p;
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    let r = rest.sqrt();
    if &r * &r == rest {
        s *= r;
    } else {
        m *= rest;
    }
    (s, m)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Root {
    Exact(Surd),
    Float(f64),
}

impl Root {
    pub fn to_f64(&self) -> f64 {
        match self {
            Root::Exact(s) => s.to_f64(),
            Root::Float(f) => *f,
        }
    }
}

/// Real roots with multiplicity, ascending; complex roots are only counted.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<(Root, u32)>,
    pub complex_omitted: u32,
}

impl RootSet {
    /// Roots repeated by multiplicity.
    pub fn expanded(&self) -> Vec<Root> {
        self.roots
            .iter()
            .flat_map(|(r, k)| std::iter::repeat_n(r.clone(), *k as usize))
            .collect()
    }

    fn sort(&mut self) {
        self.roots.sort_by(|a, b| {
            a.0.to_f64()
                .partial_cmp(&b.0.to_f64())
                .unwrap_or(Ordering::Equal)
        });
    }
}

impl Render for Root {
    fn text(&self, st: &Style) -> String {
        match self {
            Root::Exact(s) => s.render(false),
            Root::Float(f) => crate::arith::format_f64(*f, st.floatpos),
        }
    }
    fn latex(&self, st: &Style) -> String {
        match self {
            Root::Exact(s) => s.render(true),
            Root::Float(f) => crate::arith::format_f64(*f, st.floatpos),
        }
    }
}

impl Render for RootSet {
    fn text(&self, st: &Style) -> String {
        let items: Vec<String> = self.expanded().iter().map(|r| r.text(st)).collect();
        format!("[{}]", items.join(", "))
    }
    fn latex(&self, st: &Style) -> String {
        let items: Vec<String> = self.expanded().iter().map(|r| r.latex(st)).collect();
        format!("\\left[{}\\right]", items.join(", "))
    }
}

/// Real roots of a univariate polynomial in `v`.
///
/// Exact coefficients give exact roots: rational roots, quadratic factors
/// and biquadratic factors are solved in radicals and anything else reports
/// [`PolyError::UnsolvableInRadicals`]. Float coefficients give numeric roots.
pub fn solve_univariate(f: &Poly, v: usize) -> Result<RootSet, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if !f.is_univariate_in(v) {
        return Err(PolyError::NotUnivariate);
    }
    if f.has_residue() {
        return Err(PolyError::UnsupportedDomain("a prime field"));
    }
    if f.has_float() {
        return numeric_roots(f, v);
    }
    exact_roots(f, v)
}

fn numeric_roots(f: &Poly, v: usize) -> Result<RootSet, PolyError> {
    let n = f.degree_in(v).unwrap_or(0) as usize;
    let mut c = vec![0.0; n + 1];
    for (m, a) in f.terms() {
        c[m.exp(v) as usize] = a.to_f64();
    }
    let mut set = RootSet {
        roots: Vec::new(),
        complex_omitted: 0,
    };
    let zeros = c.iter().take_while(|x| **x == 0.0).count();
    if zeros > 0 {
        set.roots.push((Root::Float(0.0), zeros as u32));
    }
    let c = &c[zeros..];
    for z in durand_kerner(c) {
        if z.im.abs() <= 1e-7 * z.norm().max(1.0) {
            set.roots.push((Root::Float(polish(c, z.re)), 1));
        } else {
            set.complex_omitted += 1;
        }
    }
    set.sort();
    Ok(set)
}

fn horner(c: &[f64], x: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for a in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + a;
    }
    (p, dp)
}

fn polish(c: &[f64], mut x: f64) -> f64 {
    for _ in 0..8 {
        let (p, dp) = horner(c, x);
        if dp == 0.0 || p == 0.0 {
            break;
        }
        let step = p / dp;
        x -= step;
        if step.abs() <= 1e-16 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

/// All complex roots of `c[0] + c[1]x + ⋯` by simultaneous iteration.
fn durand_kerner(c: &[f64]) -> Vec<Complex64> {
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lc = c[n];
    let monic: Vec<Complex64> = c.iter().map(|a| Complex64::new(a / lc, 0.0)).collect();
    let radius = 1.0 + monic[..n].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let seed = Complex64::from_polar(1.0, 0.4);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| seed.powu(k as u32) * radius.clamp(0.9, 2.0))
        .collect();
    let eval = |x: Complex64| {
        monic
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, a| acc * x + a)
    };
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                den = Complex64::new(1e-12, 0.0);
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm() / z[i].norm().max(1.0));
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

/// Yun's squarefree decomposition of a primitive integer polynomial.
fn squarefree_factors(f: &Poly, v: usize) -> Result<Vec<(Poly, u32)>, PolyError> {
    let mut out = Vec::new();
    let df = f.derivative(v);
    if df.is_zero() {
        return Ok(out);
    }
    let b = gcd(f, &df)?;
    let mut c = f.exact_div(&b).ok_or(PolyError::InexactDivision)?;
    let mut d = &df.exact_div(&b).ok_or(PolyError::InexactDivision)? - &c.derivative(v);
    let mut i = 1;
    while !c.is_constant() {
        let a = gcd(&c, &d)?;
        c = c.exact_div(&a).ok_or(PolyError::InexactDivision)?;
        d = &d.exact_div(&a).ok_or(PolyError::InexactDivision)? - &c.derivative(v);
        if !a.is_constant() {
            out.push((a, i));
        }
        i += 1;
    }
    Ok(out)
}

fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n.bits() > 40 {
        return None;
    }
    let n = n.to_u64()?;
    let mut ds = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            ds.push(BigInt::from(d));
            if d * d != n {
                ds.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(ds)
}

/// Candidate rational roots of an integer polynomial (coefficients low first).
pub(crate) fn rational_candidates(q: &QPoly) -> Vec<BigRational> {
    let a0 = q.0[0].numer().clone();
    let an = q.0.last().unwrap().numer().clone();
    match (small_divisors(&a0), small_divisors(&an)) {
        (Some(ps), Some(qs)) => {
            let mut out = Vec::new();
            for p in &ps {
                for d in &qs {
                    let r = BigRational::new(p.clone(), d.clone());
                    if !out.contains(&r) {
                        out.push(r.clone());
                        out.push(-r);
                    }
                }
            }
            out
        }
        _ => {
            // Large coefficients: round numeric roots to nearby fractions.
            let c: Vec<f64> = q.0.iter().map(|x| x.to_f64().unwrap_or(0.0)).collect();
            durand_kerner(&c)
                .into_iter()
                .filter(|z| z.im.abs() < 1e-6 * z.norm().max(1.0))
                .filter_map(|z| {
                    let r = BigRational::from_float(z.re)?;
                    Some(limit_denominator(&r, &an))
                })
                .collect()
        }
    }
}

fn limit_denominator(r: &BigRational, max_den: &BigInt) -> BigRational {
    // Continued-fraction convergents until the denominator exceeds max_den.
    let (mut p0, mut q0, mut p1, mut q1) =
        (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let mut x = r.clone();
    loop {
        let a = x.floor().to_integer();
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if q2.abs() > max_den.abs() {
            break;
        }
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let frac = &x - BigRational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        x = frac.recip();
    }
    if q1.is_zero() {
        r.round()
    } else {
        BigRational::new(p1, q1)
    }
}

fn exact_roots(f: &Poly, v: usize) -> Result<RootSet, PolyError> {
    let mut set = RootSet {
        roots: Vec::new(),
        complex_omitted: 0,
    };
    if f.is_constant() {
        return Ok(set);
    }
    let (prim, _) = f.to_primitive_integer();
    for (factor, mult) in squarefree_factors(&prim, v)? {
        solve_squarefree(&factor, v, mult, &mut set)?;
    }
    set.sort();
    Ok(set)
}

fn solve_squarefree(f: &Poly, v: usize, mult: u32, set: &mut RootSet) -> Result<(), PolyError> {
    let mut q = QPoly::from_poly(f, v).ok_or(PolyError::NotUnivariate)?;
    if q.0[0].is_zero() {
        set.roots
            .push((Root::Exact(Surd::rational(BigRational::zero())), mult));
        q = QPoly(q.0[1..].to_vec());
    }
    if q.degree() > 0 {
        for r in rational_candidates(&q) {
            if q.degree() == 0 {
                break;
            }
            if q.eval(&r).is_zero() {
                set.roots
                    .push((Root::Exact(Surd::rational(r.clone())), mult));
                q = divide_linear(&q, &r);
            }
        }
    }
    let c = &q.0;
    match q.degree() {
        0 => Ok(()),
        2 => {
            match quadratic_all(&c[2], &c[1], &c[0]) {
                Some(rs) => set
                    .roots
                    .extend(rs.into_iter().map(|s| (Root::Exact(s), mult))),
                None => set.complex_omitted += 2 * mult,
            }
            Ok(())
        }
        4 if c[1].is_zero() && c[3].is_zero() => {
            let ts = quadratic_all(&c[4], &c[2], &c[0]);
            let Some(ts) = ts else {
                set.complex_omitted += 4 * mult;
                return Ok(());
            };
            for t in ts {
                if t.to_f64() < 0.0 {
                    set.complex_omitted += 2 * mult;
                    continue;
                }
                for neg in [true, false] {
                    let root = if t.is_rational() {
                        Surd::sqrt_of_rational(&t.a, neg)
                    } else {
                        Surd {
                            nested: Some(neg),
                            ..t.clone()
                        }
                    };
                    set.roots.push((Root::Exact(root), mult));
                }
            }
            Ok(())
        }
        d => Err(PolyError::UnsolvableInRadicals(format!(
            "irreducible factor of degree {d}"
        ))),
    }
}

pub(crate) fn divide_linear(q: &QPoly, r: &BigRational) -> QPoly {
    // Synthetic division by (x − r).
    let n = q.0.len();
    let mut out = vec![BigRational::zero(); n - 1];
    let mut carry = BigRational::zero();
    for k in (1..n).rev() {
        carry = &carry * r + &q.0[k];
        out[k - 1] = carry.clone();
    }
    QPoly(out)
}

/// Both roots of `a t² + b t + c` as surds, or `None` when they are complex.
fn quadratic_all(a: &BigRational, b: &BigRational, c: &BigRational) -> Option<Vec<Surd>> {
    let disc = b * b - BigRational::from_integer(4.into()) * a * c;
    if disc.is_negative() {
        return None;
    }
    let two_a = a * BigRational::from_integer(2.into());
    let center = -b / &two_a;
    let n = disc.numer() * disc.denom();
    let (s, m) = split_square(&n);
    let half = BigRational::new(s, disc.denom().clone()) / &two_a;
    if m.is_one() {
        return Some(vec![
            Surd::rational(&center - &half),
            Surd::rational(&center + &half),
        ]);
    }
    Some(vec![
        Surd {
            a: center.clone(),
            b: -half.clone(),
            m: m.clone(),
            nested: None,
        },
        Surd {
            a: center,
            b: half,
            m,
            nested: None,
        },
    ])
}
