use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::arith::{BigFloat, Domain, ExactDiv, Scalar};
use crate::matrix::{Entry, Matrix};
use crate::poly::{Frac, IntervalSet, Poly, Relation, RootSet};
use crate::render::{Render, Style};

use super::LangError;

/// Exact real constant that has no rational value, such as `π` or `√2`.
/// Kept symbolic in exact domains until `\value` evaluates it.
#[derive(Debug, Clone, PartialEq)]
pub enum Sym {
    Num(BigRational),
    Pi,
    Sqrt(Box<Sym>),
    Sin(Box<Sym>),
    Cos(Box<Sym>),
    Add(Box<Sym>, Box<Sym>),
    Sub(Box<Sym>, Box<Sym>),
    Mul(Box<Sym>, Box<Sym>),
    Div(Box<Sym>, Box<Sym>),
    Neg(Box<Sym>),
    Pow(Box<Sym>, i64),
}

impl Sym {
    pub fn eval(&self, prec: u32) -> Result<BigFloat, LangError> {
        let bad = |m: &str| LangError::Type(m.to_string());
        Ok(match self {
            Sym::Num(r) => BigFloat::from_ratio(r.numer(), r.denom(), prec)?,
            Sym::Pi => BigFloat::pi(prec),
            Sym::Sqrt(a) => a
                .eval(prec)?
                .sqrt()
                .ok_or_else(|| bad("square root of a negative number"))?,
            Sym::Sin(a) => a.eval(prec)?.sin(),
            Sym::Cos(a) => a.eval(prec)?.cos(),
            Sym::Add(a, b) => a.eval(prec)? + b.eval(prec)?,
            Sym::Sub(a, b) => a.eval(prec)? - b.eval(prec)?,
            Sym::Mul(a, b) => a.eval(prec)? * b.eval(prec)?,
            Sym::Div(a, b) => {
                let d = b.eval(prec)?;
                if d.is_zero() {
                    return Err(crate::arith::ArithError::DivisionByZero.into());
                }
                a.eval(prec)? / d
            }
            Sym::Neg(a) => -a.eval(prec)?,
            Sym::Pow(a, n) => {
                let base = a.eval(prec)?;
                let p = base.powi(n.unsigned_abs() as u32);
                if *n < 0 {
                    if p.is_zero() {
                        return Err(crate::arith::ArithError::DivisionByZero.into());
                    }
                    BigFloat::from_i64(1, prec) / p
                } else {
                    p
                }
            }
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Sym::Add(..) | Sym::Sub(..) => 1,
            Sym::Mul(..) | Sym::Div(..) => 2,
            Sym::Neg(_) => 3,
            Sym::Pow(..) => 4,
            Sym::Num(r) if !r.denom().is_one() || r.is_negative() => 2,
            _ => 5,
        }
    }

    fn child(&self, min: u8, latex: bool) -> String {
        let s = self.render(latex);
        if self.precedence() < min {
            if latex {
                format!("\\left({s}\\right)")
            } else {
                format!("({s})")
            }
        } else {
            s
        }
    }

    pub fn render(&self, latex: bool) -> String {
        match self {
            Sym::Num(r) => {
                if latex && !r.denom().is_one() {
                    let sign = if r.is_negative() { "-" } else { "" };
                    format!("{sign}\\frac{{{}}}{{{}}}", r.numer().abs(), r.denom())
                } else {
                    r.to_string()
                }
            }
            Sym::Pi => if latex { "\\pi" } else { "π" }.into(),
            Sym::Sqrt(a) => {
                if latex {
                    format!("\\sqrt{{{}}}", a.render(true))
                } else {
                    format!("√{}", a.child(5, false))
                }
            }
            Sym::Sin(a) => format!(
                "{}({})",
                if latex { "\\sin" } else { "sin" },
                a.render(latex)
            ),
            Sym::Cos(a) => format!(
                "{}({})",
                if latex { "\\cos" } else { "cos" },
                a.render(latex)
            ),
            Sym::Add(a, b) => format!("{}+{}", a.child(1, latex), b.child(2, latex)),
            Sym::Sub(a, b) => format!("{}-{}", a.child(1, latex), b.child(2, latex)),
            Sym::Mul(a, b) => {
                let op = if latex { " \\cdot " } else { "*" };
                format!("{}{op}{}", a.child(2, latex), b.child(3, latex))
            }
            Sym::Div(a, b) => {
                if latex {
                    format!("\\frac{{{}}}{{{}}}", a.render(true), b.render(true))
                } else {
                    format!("{}/{}", a.child(2, false), b.child(3, false))
                }
            }
            Sym::Neg(a) => format!("-{}", a.child(3, latex)),
            Sym::Pow(a, n) => {
                if latex {
                    format!("{}^{{{n}}}", a.child(5, true))
                } else {
                    format!("{}^{n}", a.child(5, false))
                }
            }
        }
    }
}

/// Matrix value; the element kind is the most general one among its entries.
#[derive(Debug, Clone, PartialEq)]
pub enum Mat {
    S(Matrix<Scalar>),
    P(Matrix<Poly>),
    F(Matrix<Frac>),
}

/// Ring element kinds a matrix can hold, with the field used for inverses.
pub(crate) trait Elem: ExactDiv + Render {
    type Field: Entry + From<Self> + Elem<Field = Self::Field>;
    fn wrap(m: Matrix<Self>) -> Mat;
    fn into_value(self) -> Value;
}

impl Elem for Scalar {
    type Field = Scalar;
    fn wrap(m: Matrix<Self>) -> Mat {
        Mat::S(m)
    }
    fn into_value(self) -> Value {
        Value::Scalar(self)
    }
}

impl Elem for Poly {
    type Field = Frac;
    fn wrap(m: Matrix<Self>) -> Mat {
        Mat::P(m)
    }
    fn into_value(self) -> Value {
        Value::Poly(self)
    }
}

impl Elem for Frac {
    type Field = Frac;
    fn wrap(m: Matrix<Self>) -> Mat {
        Mat::F(m)
    }
    fn into_value(self) -> Value {
        Value::Frac(self)
    }
}

/// Applies a generic expression to whichever matrix kind is present.
macro_rules! with_mat {
    ($m:expr, $a:ident => $body:expr) => {
        match $m {
            $crate::lang::value::Mat::S($a) => $body,
            $crate::lang::value::Mat::P($a) => $body,
            $crate::lang::value::Mat::F($a) => $body,
        }
    };
}
pub(crate) use with_mat;

impl Mat {
    pub fn shape(&self) -> (usize, usize) {
        with_mat!(self, a => a.shape())
    }

    pub fn level(&self) -> u8 {
        match self {
            Mat::S(_) => 0,
            Mat::P(_) => 1,
            Mat::F(_) => 2,
        }
    }

    pub fn to_polys(&self) -> Option<Matrix<Poly>> {
        match self {
            Mat::S(a) => Some(a.map(|x| Poly::constant(x.clone()))),
            Mat::P(a) => Some(a.clone()),
            Mat::F(_) => None,
        }
    }

    pub fn to_fracs(&self) -> Matrix<Frac> {
        match self {
            Mat::S(a) => a.map(|x| Frac::constant(x.clone())),
            Mat::P(a) => a.map(|x| Frac::from(x.clone())),
            Mat::F(a) => a.clone(),
        }
    }

    /// Converts to the kind with the given level (never lowers it).
    pub fn lift(&self, level: u8) -> Mat {
        match level.max(self.level()) {
            0 => self.clone(),
            1 => Mat::P(self.to_polys().expect("level at most one")),
            _ => Mat::F(self.to_fracs()),
        }
    }

    /// Lowers to the simplest kind holding every entry; constants are moved
    /// into the domain so zeros print like the other entries.
    pub fn simplify(self, d: &Domain) -> Mat {
        let fix = |s: Scalar| d.coerce(&s).unwrap_or(s);
        let m = match self {
            Mat::F(a) if a.entries().all(Frac::is_poly) => Mat::P(a.map(|x| x.num().clone())),
            other => other,
        };
        match m {
            Mat::P(a) => {
                if a.entries().all(Poly::is_constant) {
                    Mat::S(a.map(|x| fix(x.as_constant().expect("constant"))))
                } else {
                    Mat::P(a)
                }
            }
            Mat::S(a) => Mat::S(a.map(|x| fix(x.clone()))),
            f => f,
        }
    }

    pub fn to_f64(&self) -> Result<Matrix<f64>, LangError> {
        match self {
            Mat::S(a) if a.entries().all(|x| !matches!(x, Scalar::Mod(_))) => {
                Ok(a.map(Scalar::to_f64))
            }
            _ => Err(LangError::DomainMismatch(
                "this function needs a real numeric matrix".into(),
            )),
        }
    }

    pub fn transpose(&self) -> Mat {
        with_mat!(self, a => Elem::wrap(a.transpose()))
    }

    fn render(&self, st: &Style, latex: bool) -> String {
        with_mat!(self, a => render_matrix(a, st, latex))
    }
}

pub(crate) fn render_matrix<T: Render>(a: &Matrix<T>, st: &Style, latex: bool) -> String {
    let rows = a.rows();
    if latex {
        let cols = "c".repeat(a.cols().max(1));
        let body: Vec<String> = (0..rows)
            .map(|i| {
                let row: Vec<String> = a.row(i).iter().map(|x| x.latex(st)).collect();
                format!("{}\\\\", row.join(" & "))
            })
            .collect();
        format!(
            "\\left(\\begin{{array}}{{{cols}}}{}\\end{{array}}\\right)",
            body.join(" ")
        )
    } else {
        let body: Vec<String> = (0..rows)
            .map(|i| {
                let row: Vec<String> = a.row(i).iter().map(|x| x.text(st)).collect();
                format!("[{}]", row.join(", "))
            })
            .collect();
        format!("[{}]", body.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Scalar(Scalar),
    Poly(Poly),
    Frac(Frac),
    Sym(Sym),
    Matrix(Mat),
    List(Vec<Value>),
    /// Column vector, printed `[a, b]^T`.
    Column(Vec<Value>),
    Roots(RootSet),
    Intervals(IntervalSet),
    Relation(Box<Value>, Relation, Box<Value>),
}

pub(crate) fn relation_symbol(r: Relation) -> &'static str {
    match r {
        Relation::Lt => "<",
        Relation::Le => "<=",
        Relation::Gt => ">",
        Relation::Ge => ">=",
        Relation::Eq => "=",
        Relation::Ne => "!=",
    }
}

fn latex_relation(r: Relation) -> &'static str {
    match r {
        Relation::Le => "\\le",
        Relation::Ge => "\\ge",
        Relation::Ne => "\\ne",
        other => relation_symbol(other),
    }
}

impl Value {
    pub fn int(v: i64) -> Value {
        Value::Scalar(Scalar::int(v))
    }

    /// Brings polynomial and fraction results down to the simplest kind.
    pub fn simplify(self, d: &Domain) -> Value {
        match self {
            Value::Poly(p) => match p.as_constant() {
                Some(c) => Value::Scalar(d.coerce(&c).unwrap_or(c)),
                None => Value::Poly(p),
            },
            Value::Frac(f) if f.is_poly() => Value::Poly(f.num().clone()).simplify(d),
            Value::Matrix(m) => Value::Matrix(m.simplify(d)),
            Value::List(v) => Value::List(v.into_iter().map(|x| x.simplify(d)).collect()),
            Value::Column(v) => Value::Column(v.into_iter().map(|x| x.simplify(d)).collect()),
            other => other,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "number",
            Value::Poly(_) => "polynomial",
            Value::Frac(_) => "rational function",
            Value::Sym(_) => "symbolic constant",
            Value::Matrix(_) => "matrix",
            Value::List(_) => "list",
            Value::Column(_) => "vector",
            Value::Roots(_) => "root list",
            Value::Intervals(_) => "interval set",
            Value::Relation(..) => "relation",
        }
    }

    pub fn as_poly(&self) -> Option<Poly> {
        match self {
            Value::Scalar(s) => Some(Poly::constant(s.clone())),
            Value::Poly(p) => Some(p.clone()),
            Value::Frac(f) => f.as_poly().cloned(),
            _ => None,
        }
    }

    pub fn text(&self, st: &Style) -> String {
        self.render(st, false)
    }

    pub fn latex(&self, st: &Style) -> String {
        self.render(st, true)
    }

    fn render(&self, st: &Style, latex: bool) -> String {
        let r = |x: &dyn Render| if latex { x.latex(st) } else { x.text(st) };
        match self {
            Value::Scalar(s) => r(s),
            Value::Poly(p) => r(p),
            Value::Frac(f) => r(f),
            Value::Sym(s) => s.render(latex),
            Value::Matrix(m) => m.render(st, latex),
            Value::List(items) => {
                let parts: Vec<String> = items.iter().map(|v| v.render(st, latex)).collect();
                if latex {
                    format!("\\left[{}\\right]", parts.join(", "))
                } else {
                    format!("[{}]", parts.join(", "))
                }
            }
            Value::Column(items) => {
                let parts: Vec<String> = items.iter().map(|v| v.render(st, latex)).collect();
                if latex {
                    format!("\\left[{}\\right]^{{T}}", parts.join(", "))
                } else {
                    format!("[{}]^T", parts.join(", "))
                }
            }
            Value::Roots(rs) => r(rs),
            Value::Intervals(i) => r(i),
            Value::Relation(a, rel, b) => {
                let op = if latex {
                    latex_relation(*rel)
                } else {
                    relation_symbol(*rel)
                };
                format!("{} {op} {}", a.render(st, latex), b.render(st, latex))
            }
        }
    }
}

/// Exact rational square root, if there is one.
pub(crate) fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let root = |n: &BigInt| {
        let s = n.sqrt();
        (&s * &s == *n).then_some(s)
    };
    Some(BigRational::new(root(r.numer())?, root(r.denom())?))
}

impl From<Scalar> for Value {
    fn from(s: Scalar) -> Value {
        Value::Scalar(s)
    }
}
