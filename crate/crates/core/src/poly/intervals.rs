use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::roots::{divide_linear, rational_candidates, solve_univariate, Root, Surd};
use super::upoly::{isolate_roots, refine, QPoly, Sturm};
use super::{gcd, Poly, PolyError};
use crate::arith::{ExactDiv, Scalar};
use crate::render::{Render, Style};

/// Comparison of a polynomial against zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl Relation {
    pub fn holds(self, sign: i32) -> bool {
        match self {
            Relation::Lt => sign < 0,
            Relation::Le => sign <= 0,
            Relation::Gt => sign > 0,
            Relation::Ge => sign >= 0,
            Relation::Eq => sign == 0,
            Relation::Ne => sign != 0,
        }
    }
}

/// Irrational real root of a squarefree polynomial, isolated in `(lo, hi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Algebraic {
    poly: QPoly,
    lo: BigRational,
    hi: BigRational,
    exact: Option<Surd>,
}

impl Algebraic {
    fn refine(&mut self) {
        let sturm = Sturm::new(&self.poly);
        refine(&self.poly, &sturm, &mut self.lo, &mut self.hi);
    }

    fn approx(&self) -> f64 {
        match &self.exact {
            Some(s) => s.to_f64(),
            None => {
                let mut a = self.clone();
                let tol = BigRational::new(BigInt::one(), BigInt::from(1u64 << 60));
                while &a.hi - &a.lo > tol {
                    a.refine();
                }
                rat_f64(&((&a.lo + &a.hi) / BigRational::from_integer(2.into())))
            }
        }
    }

    /// Order of a rational `x` relative to this root.
    fn cmp_rational(&self, x: &BigRational) -> Ordering {
        let mut a = self.clone();
        loop {
            if *x <= a.lo {
                return Ordering::Less;
            }
            if *x >= a.hi {
                return Ordering::Greater;
            }
            a.refine();
        }
    }
}

fn rat_f64(r: &BigRational) -> f64 {
    Scalar::from_rational(r.clone()).to_f64()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    Rational(BigRational),
    Algebraic(Box<Algebraic>),
}

impl Point {
    fn left(&self) -> &BigRational {
        match self {
            Point::Rational(r) => r,
            Point::Algebraic(a) => &a.lo,
        }
    }

    fn right(&self) -> &BigRational {
        match self {
            Point::Rational(r) => r,
            Point::Algebraic(a) => &a.hi,
        }
    }

    fn cmp_rational(&self, x: &BigRational) -> Ordering {
        match self {
            Point::Rational(r) => x.cmp(r),
            Point::Algebraic(a) => a.cmp_rational(x),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Point::Rational(r) => rat_f64(r),
            Point::Algebraic(a) => a.approx(),
        }
    }

    fn render(&self, st: &Style, numeric: bool, latex: bool) -> String {
        if numeric {
            return crate::arith::format_f64(self.to_f64(), st.floatpos);
        }
        match self {
            Point::Rational(r) => {
                let s = Scalar::from_rational(r.clone());
                if latex {
                    s.latex(st)
                } else {
                    s.text(st)
                }
            }
            Point::Algebraic(a) => match &a.exact {
                Some(s) => {
                    let r = Root::Exact(s.clone());
                    if latex {
                        r.latex(st)
                    } else {
                        r.text(st)
                    }
                }
                None => crate::arith::format_f64(a.approx(), st.floatpos),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Bound {
    Unbounded,
    Open(Point),
    Closed(Point),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub lo: Bound,
    pub hi: Bound,
}

impl Interval {
    fn contains(&self, x: &BigRational) -> bool {
        let above = match &self.lo {
            Bound::Unbounded => true,
            Bound::Open(p) => p.cmp_rational(x) == Ordering::Greater,
            Bound::Closed(p) => p.cmp_rational(x) != Ordering::Less,
        };
        let below = match &self.hi {
            Bound::Unbounded => true,
            Bound::Open(p) => p.cmp_rational(x) == Ordering::Less,
            Bound::Closed(p) => p.cmp_rational(x) != Ordering::Greater,
        };
        above && below
    }

    fn render(&self, st: &Style, numeric: bool, latex: bool) -> String {
        let (ninf, pinf) = if latex {
            ("-\\infty", "\\infty")
        } else {
            ("-∞", "∞")
        };
        if let (Bound::Closed(a), Bound::Closed(b)) = (&self.lo, &self.hi) {
            if a == b {
                let p = a.render(st, numeric, latex);
                return if latex {
                    format!("\\{{{p}\\}}")
                } else {
                    format!("{{{p}}}")
                };
            }
        }
        let (open, lo) = match &self.lo {
            Bound::Unbounded => ("(", ninf.to_string()),
            Bound::Open(p) => ("(", p.render(st, numeric, latex)),
            Bound::Closed(p) => ("[", p.render(st, numeric, latex)),
        };
        let (close, hi) = match &self.hi {
            Bound::Unbounded => (")", pinf.to_string()),
            Bound::Open(p) => (")", p.render(st, numeric, latex)),
            Bound::Closed(p) => ("]", p.render(st, numeric, latex)),
        };
        format!("{open}{lo}, {hi}{close}")
    }
}

/// Finite union of disjoint intervals, sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSet {
    pub intervals: Vec<Interval>,
    /// Endpoints are rendered as decimals (floating domains).
    pub numeric: bool,
}

impl IntervalSet {
    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.intervals.iter().any(|i| i.contains(x))
    }

    fn render(&self, st: &Style, latex: bool) -> String {
        if self.intervals.is_empty() {
            return if latex {
                "\\emptyset".into()
            } else {
                "∅".into()
            };
        }
        let sep = if latex { " \\cup " } else { " ∪ " };
        self.intervals
            .iter()
            .map(|i| i.render(st, self.numeric, latex))
            .collect::<Vec<_>>()
            .join(sep)
    }
}

impl Render for IntervalSet {
    fn text(&self, st: &Style) -> String {
        self.render(st, false)
    }
    fn latex(&self, st: &Style) -> String {
        self.render(st, true)
    }
}

fn qgcd(a: &QPoly, b: &QPoly) -> Result<QPoly, PolyError> {
    let g = gcd(&a.to_poly(0), &b.to_poly(0))?;
    Ok(QPoly::from_poly(&g, 0).expect("univariate"))
}

fn squarefree(q: &QPoly) -> Result<QPoly, PolyError> {
    if q.degree() == 0 {
        return Ok(q.clone());
    }
    let p = q.to_poly(0);
    let g = gcd(&p, &p.derivative(0))?;
    let s = p.exact_div(&g).ok_or(PolyError::InexactDivision)?;
    Ok(QPoly::from_poly(&s, 0).expect("univariate"))
}

/// Sign of `q` at the algebraic number `a`; may shrink the isolating interval.
fn sign_at_algebraic(q: &QPoly, a: &mut Algebraic) -> Result<i32, PolyError> {
    if q.degree() == 0 {
        return Ok(q.sign_at(&BigRational::zero()));
    }
    let g = qgcd(q, &a.poly)?;
    if g.degree() > 0 && Sturm::new(&g).count(&a.lo, &a.hi) > 0 {
        return Ok(0);
    }
    let sq = squarefree(q)?;
    let sturm = Sturm::new(&sq);
    loop {
        let s = q.sign_at(&a.lo);
        if s != 0 && sturm.count(&a.lo, &a.hi) == 0 {
            return Ok(s);
        }
        a.refine();
    }
}

/// Solution set of a conjunction `p_i REL_i 0` in one variable.
pub fn solve_inequalities(constraints: &[(Poly, Relation)]) -> Result<IntervalSet, PolyError> {
    let mut vars: Vec<usize> = constraints
        .iter()
        .flat_map(|(p, _)| p.variables())
        .collect();
    vars.sort_unstable();
    vars.dedup();
    if vars.len() > 1 {
        return Err(PolyError::MixedVariables);
    }
    let v = vars.first().copied().unwrap_or(0);
    if constraints.iter().any(|(p, _)| p.has_residue()) {
        return Err(PolyError::UnsupportedDomain("a prime field"));
    }
    let numeric = constraints.iter().any(|(p, _)| p.has_float());
    let qs: Vec<(QPoly, Relation)> = constraints
        .iter()
        .map(|(p, r)| {
            QPoly::from_poly(p, v)
                .map(|q| (q, *r))
                .ok_or(PolyError::NonFiniteCoefficient)
        })
        .collect::<Result<_, _>>()?;

    let mut product = QPoly(vec![BigRational::one()]);
    for (q, _) in &qs {
        if q.degree() > 0 {
            let p = &product.to_poly(0) * &q.to_poly(0);
            product = QPoly::from_poly(&p, 0).expect("univariate");
        }
    }
    let (prim, _) = product.to_poly(0).to_primitive_integer();
    let mut rest = squarefree(&QPoly::from_poly(&prim, 0).expect("univariate"))?;

    let mut points = Vec::new();
    if rest.degree() > 0 {
        if rest.0[0].is_zero() {
            points.push(Point::Rational(BigRational::zero()));
            rest = QPoly(rest.0[1..].to_vec());
        }
        if rest.degree() > 0 {
            for r in rational_candidates(&rest) {
                if rest.degree() == 0 {
                    break;
                }
                if rest.eval(&r).is_zero() {
                    points.push(Point::Rational(r.clone()));
                    rest = divide_linear(&rest, &r);
                }
            }
        }
    }
    if rest.degree() > 0 {
        let surds: Vec<Surd> = solve_univariate(&rest.to_poly(0), 0)
            .map(|set| {
                set.roots
                    .into_iter()
                    .filter_map(|(r, _)| match r {
                        Root::Exact(s) if s.is_root_of(&rest) => Some(s),
                        Root::Exact(_) => None,
                        Root::Float(_) => None,
                    })
                    .collect()
            })
            .unwrap_or_default();
        for (lo, hi) in isolate_roots(&rest) {
            let exact = surds
                .iter()
                .find(|s| BigRational::from_float(s.to_f64()).is_some_and(|x| x > lo && x < hi))
                .cloned();
            points.push(Point::Algebraic(Box::new(Algebraic {
                poly: rest.clone(),
                lo,
                hi,
                exact,
            })));
        }
    }
    let rationals: Vec<BigRational> = points
        .iter()
        .filter_map(|p| match p {
            Point::Rational(r) => Some(r.clone()),
            Point::Algebraic(_) => None,
        })
        .collect();
    for p in &mut points {
        if let Point::Algebraic(a) = p {
            while rationals.iter().any(|r| *r >= a.lo && *r <= a.hi) {
                a.refine();
            }
        }
    }
    points.sort_by(|a, b| {
        a.left()
            .cmp(b.left())
            .then_with(|| matches!(a, Point::Algebraic(_)).cmp(&matches!(b, Point::Algebraic(_))))
    });
    separate(&mut points);

    let holds_at = |x: &BigRational| qs.iter().all(|(q, r)| r.holds(q.sign_at(x)));
    let two = BigRational::from_integer(BigInt::from(2));
    let one = BigRational::one();
    // Region truth values: gap 0, point 0, gap 1, ..., point k-1, gap k.
    let mut truth = Vec::with_capacity(2 * points.len() + 1);
    if points.is_empty() {
        truth.push(holds_at(&BigRational::zero()));
    } else {
        truth.push(holds_at(&(points[0].left() - &one)));
        for i in 0..points.len() {
            let at_point = match &mut points[i] {
                Point::Rational(r) => holds_at(r),
                Point::Algebraic(a) => {
                    let mut ok = true;
                    for (q, rel) in &qs {
                        if !rel.holds(sign_at_algebraic(q, a)?) {
                            ok = false;
                            break;
                        }
                    }
                    ok
                }
            };
            truth.push(at_point);
            let next = if i + 1 < points.len() {
                (points[i].right() + points[i + 1].left()) / &two
            } else {
                points[i].right() + &one
            };
            truth.push(holds_at(&next));
        }
    }

    let mut intervals = Vec::new();
    let mut start: Option<Bound> = None;
    for (k, &t) in truth.iter().enumerate() {
        let is_point = k % 2 == 1;
        let point = || points[k / 2].clone();
        match (t, start.is_some()) {
            (true, false) => {
                start = Some(if k == 0 {
                    Bound::Unbounded
                } else if is_point {
                    Bound::Closed(point())
                } else {
                    Bound::Open(points[k / 2 - 1].clone())
                });
            }
            (false, true) => {
                let hi = if is_point {
                    Bound::Open(point())
                } else {
                    Bound::Closed(points[k / 2 - 1].clone())
                };
                intervals.push(Interval {
                    lo: start.take().unwrap(),
                    hi,
                });
            }
            _ => {}
        }
    }
    if let Some(lo) = start {
        intervals.push(Interval {
            lo,
            hi: Bound::Unbounded,
        });
    }
    Ok(IntervalSet { intervals, numeric })
}

/// Shrink isolating intervals until neighbouring points have disjoint closures.
fn separate(points: &mut [Point]) {
    for i in 0..points.len().saturating_sub(1) {
        while points[i].right() >= points[i + 1].left() {
            let (a, b) = points.split_at_mut(i + 1);
            let mut progressed = false;
            if let Point::Algebraic(x) = &mut a[i] {
                x.refine();
                progressed = true;
            }
            if let Point::Algebraic(y) = &mut b[0] {
                y.refine();
                progressed = true;
            }
            if !progressed {
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;

    fn txt(s: &IntervalSet) -> String {
        let vars = names(&["x"]);
        s.text(&Style::new(&vars, 2))
    }

    #[test]
    fn two_constraint_systems() {
        let a = p(&[(1, &[2]), (4, &[1]), (-5, &[])]);
        let b = p(&[(1, &[2]), (-2, &[1]), (-8, &[])]);
        let s = solve_inequalities(&[(a, Relation::Gt), (b, Relation::Lt)]).unwrap();
        assert_eq!(txt(&s), "(1, 4)");
        let x = p(&[(1, &[1])]);
        let x2 = p(&[(1, &[1]), (-2, &[])]);
        let s = solve_inequalities(&[(x, Relation::Lt), (x2, Relation::Gt)]).unwrap();
        assert_eq!(txt(&s), "∅");
        let sq = p(&[(1, &[2])]);
        assert_eq!(
            txt(&solve_inequalities(&[(sq.clone(), Relation::Ge)]).unwrap()),
            "(-∞, ∞)"
        );
        assert_eq!(
            txt(&solve_inequalities(&[(sq, Relation::Le)]).unwrap()),
            "{0}"
        );
    }

    #[test]
    fn irrational_endpoints_and_unions() {
        let f = p(&[(1, &[2]), (-2, &[])]);
        let s = solve_inequalities(&[(f.clone(), Relation::Ge)]).unwrap();
        assert_eq!(txt(&s), "(-∞, -√2] ∪ [√2, ∞)");
        let third = BigRational::new(3.into(), 2.into());
        assert!(!s.contains(&third.clone()) || rat_f64(&third) >= 2f64.sqrt());
        assert!(s.contains(&BigRational::from_integer(2.into())));
        assert!(!s.contains(&BigRational::from_integer(1.into())));
        let g = p(&[(1, &[3]), (-3, &[1]), (1, &[])]);
        let s = solve_inequalities(&[(g, Relation::Lt)]).unwrap();
        assert_eq!(s.intervals.len(), 2);
    }

    #[test]
    fn mixed_variables_rejected() {
        let a = p(&[(1, &[1])]);
        let b = p(&[(1, &[0, 1])]);
        assert_eq!(
            solve_inequalities(&[(a, Relation::Lt), (b, Relation::Gt)]),
            Err(PolyError::MixedVariables)
        );
    }
}
