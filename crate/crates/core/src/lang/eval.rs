use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{
    check_prime_modulus, BigFloat, Domain, DomainKind, ExactDiv, Ring, Scalar, DEFAULT_FLOATPOS,
    DEFAULT_MODULUS, MOD32_BOUND, MOD_BOUND,
};
use crate::cancel::CancelToken;
use crate::matrix::{inverse, Matrix};
use crate::poly::{Frac, Monomial, Poly, Relation};
use crate::render::Style;

use super::ast::{BinOp, CmpOp, Constant, Expr, ExprKind, Stmt};
use super::lexer::Span;
use super::parser::{parse_script, Statement};
use super::value::{with_mat, Elem, Mat, Sym, Value};
use super::LangError;

type Result<T> = std::result::Result<T, LangError>;

/// Largest accepted `FLOATPOS`.
pub const MAX_FLOATPOS: u32 = 2000;
/// Largest accepted integer exponent.
const MAX_EXPONENT: i64 = 1 << 20;
/// Cap on the bit length of an integer power, to keep `2^2^30` from hanging.
const MAX_POWER_BITS: u64 = 1 << 24;

/// Declared `SPACE`, environment constants and named values.
#[derive(Debug, Clone)]
pub struct Environment {
    domain: Option<Domain>,
    floatpos: u32,
    modulus: u64,
    modulus32: u64,
    bindings: BTreeMap<String, Value>,
}

impl Default for Environment {
    fn default() -> Self {
        Environment {
            domain: None,
            floatpos: DEFAULT_FLOATPOS,
            modulus: DEFAULT_MODULUS,
            modulus32: DEFAULT_MODULUS,
            bindings: BTreeMap::new(),
        }
    }
}

impl Environment {
    pub fn domain(&self) -> Option<&Domain> {
        self.domain.as_ref()
    }

    pub fn floatpos(&self) -> u32 {
        self.floatpos
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn modulus32(&self) -> u64 {
        self.modulus32
    }

    pub fn bindings(&self) -> impl Iterator<Item = (&str, &Value)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.bindings.get(name)
    }

    pub fn style(&self) -> Style<'_> {
        let vars = self.domain.as_ref().map_or(&[][..], |d| d.variables());
        Style::new(vars, self.floatpos)
    }

    fn build_domain(&self, kind: DomainKind, vars: Vec<String>) -> Result<Domain> {
        let d = Domain::new(kind, vars)?.with_floatpos(self.floatpos);
        Ok(match kind {
            DomainKind::Zp => d.with_modulus(self.modulus)?,
            DomainKind::Zp32 => d.with_modulus(self.modulus32)?,
            _ => d,
        })
    }

    /// Installs a new domain and carries over every binding that still makes
    /// sense there; the others are dropped.
    fn install(&mut self, new: Domain) {
        let map: Vec<Option<usize>> = match &self.domain {
            Some(old) => old.variables().iter().map(|v| new.var_index(v)).collect(),
            None => Vec::new(),
        };
        let old = std::mem::take(&mut self.bindings);
        self.bindings = old
            .into_iter()
            .filter_map(|(k, v)| transfer(&v, &map, &new).map(|v| (k, v)))
            .collect();
        self.domain = Some(new);
    }

    fn declare_space(&mut self, kind: &str, vars: &[String]) -> Result<()> {
        let kind: DomainKind = kind.parse()?;
        let d = self.build_domain(kind, vars.to_vec())?;
        self.install(d);
        Ok(())
    }

    fn set_constant(&mut self, c: Constant, v: u64) -> Result<()> {
        match c {
            Constant::FloatPos => {
                if v > MAX_FLOATPOS as u64 {
                    return Err(LangError::Type(format!(
                        "FLOATPOS must be at most {MAX_FLOATPOS}"
                    )));
                }
                self.floatpos = v as u32;
                if let Some(d) = self.domain.take() {
                    self.domain = Some(d.with_floatpos(self.floatpos));
                }
            }
            Constant::Mod => {
                self.modulus = check_prime_modulus(v, MOD_BOUND)?;
                self.rebuild_modular(DomainKind::Zp)?;
            }
            Constant::Mod32 => {
                self.modulus32 = check_prime_modulus(v, MOD32_BOUND)?;
                self.rebuild_modular(DomainKind::Zp32)?;
            }
        }
        Ok(())
    }

    fn rebuild_modular(&mut self, kind: DomainKind) -> Result<()> {
        if let Some(d) = &self.domain {
            if d.kind() == kind {
                let new = self.build_domain(kind, d.variables().to_vec())?;
                self.install(new);
            }
        }
        Ok(())
    }
}

fn remap_poly(p: &Poly, map: &[Option<usize>], d: &Domain) -> Option<Poly> {
    let mut terms = Vec::with_capacity(p.len());
    for (m, c) in p.terms() {
        let mut exps = vec![0u32; d.variables().len()];
        for (i, &e) in m.exps().iter().enumerate() {
            if e > 0 {
                exps[(*map.get(i)?)?] = e;
            }
        }
        terms.push((Monomial::from_exps(exps), d.coerce(c).ok()?));
    }
    Some(Poly::from_terms(terms))
}

fn transfer(v: &Value, map: &[Option<usize>], d: &Domain) -> Option<Value> {
    let list = |items: &[Value]| {
        items
            .iter()
            .map(|x| transfer(x, map, d))
            .collect::<Option<Vec<_>>>()
    };
    Some(match v {
        Value::Scalar(s) => Value::Scalar(d.coerce(s).ok()?),
        Value::Poly(p) => Value::Poly(remap_poly(p, map, d)?),
        Value::Frac(f) => {
            Value::Frac(Frac::new(remap_poly(f.num(), map, d)?, remap_poly(f.den(), map, d)?).ok()?)
        }
        Value::Sym(s) => {
            if d.kind().is_exact() {
                if d.kind().is_modular() {
                    return None;
                }
                Value::Sym(s.clone())
            } else {
                let b = s.eval(d.precision_bits()).ok()?;
                Value::Scalar(d.coerce(&Scalar::Big(b)).ok()?)
            }
        }
        Value::Matrix(m) => {
            let p = m.lift(1);
            let Mat::P(a) = &p else {
                let fr = m.to_fracs();
                let out = fr
                    .try_map(|f| {
                        Frac::new(
                            remap_poly(f.num(), map, d).ok_or(())?,
                            remap_poly(f.den(), map, d).ok_or(())?,
                        )
                        .map_err(|_| ())
                    })
                    .ok()?;
                return Some(Value::Matrix(Mat::F(out).simplify(d)));
            };
            let out = a.try_map(|x| remap_poly(x, map, d).ok_or(())).ok()?;
            Value::Matrix(Mat::P(out).simplify(d))
        }
        Value::List(items) => Value::List(list(items)?),
        Value::Column(items) => Value::Column(list(items)?),
        Value::Roots(_) | Value::Intervals(_) => v.clone(),
        Value::Relation(a, r, b) => Value::Relation(
            Box::new(transfer(a, map, d)?),
            *r,
            Box::new(transfer(b, map, d)?),
        ),
    })
}

/// Result of one statement.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub statement: String,
    pub span: Span,
    /// Plain-text rendering; empty for declarations.
    pub output: String,
    pub latex: String,
    pub error: Option<LangError>,
}

impl Outcome {
    pub fn ok(&self) -> bool {
        self.error.is_none()
    }
}

/// An interpreter session: one environment shared by successive scripts.
#[derive(Debug, Clone, Default)]
pub struct Session {
    env: Environment,
    cancel: CancelToken,
}

impl Session {
    pub fn new() -> Session {
        Session::default()
    }

    pub fn with_cancel(cancel: CancelToken) -> Session {
        Session {
            env: Environment::default(),
            cancel,
        }
    }

    pub fn set_cancel(&mut self, cancel: CancelToken) {
        self.cancel = cancel;
    }

    pub fn env(&self) -> &Environment {
        &self.env
    }

    pub fn reset(&mut self) {
        self.env = Environment::default();
    }

    pub fn run(&mut self, script: &str) -> Vec<Outcome> {
        self.run_with(script, |_| {})
    }

    /// Runs a script, reporting each outcome as soon as it is known.
    pub fn run_with(&mut self, script: &str, mut each: impl FnMut(&Outcome)) -> Vec<Outcome> {
        parse_script(script)
            .iter()
            .map(|st| {
                let out = self.execute(st);
                each(&out);
                out
            })
            .collect()
    }

    pub fn execute(&mut self, st: &Statement) -> Outcome {
        let result = match &st.parsed {
            Err(e) => Err(LangError::Syntax(e.clone())),
            Ok(_) if self.cancel.is_cancelled() => Err(LangError::Timeout),
            Ok(stmt) => self.exec(stmt),
        };
        let (output, latex, error) = match result {
            Ok(Some((text, latex))) => (text, latex, None),
            Ok(None) => (String::new(), String::new(), None),
            Err(e) => (String::new(), String::new(), Some(e)),
        };
        Outcome {
            statement: st.text.clone(),
            span: st.span,
            output,
            latex,
            error,
        }
    }

    /// Evaluates a single expression in the current environment.
    pub fn evaluate(&self, e: &Expr) -> Result<Value> {
        Eval {
            env: &self.env,
            cancel: &self.cancel,
        }
        .eval(e)
    }

    fn exec(&mut self, stmt: &Stmt) -> Result<Option<(String, String)>> {
        match stmt {
            Stmt::Space { kind, vars } => {
                self.env.declare_space(kind, vars)?;
                Ok(None)
            }
            Stmt::SetConstant(c, e) => {
                let v = self.constant_value(e)?;
                self.env.set_constant(*c, v)?;
                Ok(None)
            }
            Stmt::Assign(name, e) => {
                let d = self.env.domain.as_ref().ok_or(LangError::UndeclaredSpace)?;
                if d.var_index(name).is_some() {
                    return Err(LangError::Type(format!(
                        "`{name}` is a SPACE variable and cannot be assigned"
                    )));
                }
                let v = self.evaluate(e)?;
                let st = self.env.style();
                let out = (
                    format!("{name} = {}", v.text(&st)),
                    format!("{name} = {}", v.latex(&st)),
                );
                self.env.bindings.insert(name.clone(), v);
                Ok(Some(out))
            }
            Stmt::Expr(e) => {
                let v = self.evaluate(e)?;
                let st = self.env.style();
                Ok(Some((v.text(&st), v.latex(&st))))
            }
        }
    }

    /// Constants may be set before any `SPACE`, so plain literals are read
    /// directly.
    fn constant_value(&self, e: &Expr) -> Result<u64> {
        let bad = || LangError::Type("environment constants take a non-negative integer".into());
        if let ExprKind::Number(t) = &e.kind {
            return t.parse::<u64>().map_err(|_| bad());
        }
        match self.evaluate(e)? {
            Value::Scalar(s) => integer_of(&s)
                .and_then(|v| u64::try_from(v).ok())
                .ok_or_else(bad),
            _ => Err(bad()),
        }
    }
}

/// Integer value of a scalar that is integral, in any real kind.
pub(super) fn integer_of(s: &Scalar) -> Option<i64> {
    match s {
        Scalar::Int(i) => i.to_i64(),
        Scalar::F64(_) | Scalar::Big(_) => {
            let f = s.to_f64();
            (f.fract() == 0.0 && f.abs() < 9.0e15).then_some(f as i64)
        }
        _ => None,
    }
}

pub(super) struct Eval<'a> {
    pub env: &'a Environment,
    pub cancel: &'a CancelToken,
}

impl Eval<'_> {
    pub fn domain(&self) -> Result<&Domain> {
        self.env.domain.as_ref().ok_or(LangError::UndeclaredSpace)
    }

    pub fn eval(&self, e: &Expr) -> Result<Value> {
        if self.cancel.is_cancelled() {
            return Err(LangError::Timeout);
        }
        let d = self.domain()?;
        match &e.kind {
            ExprKind::Number(t) => Ok(Value::Scalar(d.parse_number(t)?)),
            ExprKind::Ident(name) => self.lookup(name),
            ExprKind::Call { name, args, bare } => self.call(name, args, *bare),
            ExprKind::Binary(BinOp::Pow, a, b) => {
                let base = self.eval(a)?;
                let exp = self.eval_exponent(b)?;
                power(d, base, exp)
            }
            ExprKind::Binary(op, a, b) => {
                let x = self.eval(a)?;
                let y = self.eval(b)?;
                binary(d, *op, x, y)
            }
            ExprKind::Neg(a) => negate(self.eval(a)?),
            ExprKind::Degrees(a) => {
                let v = self.eval(a)?;
                self.degrees(v)
            }
            ExprKind::Vector(items) => {
                let vals = items
                    .iter()
                    .map(|x| self.eval(x))
                    .collect::<Result<Vec<_>>>()?;
                vector(d, vals)
            }
            ExprKind::Compare(op, a, b) => {
                let x = self.eval(a)?;
                let y = self.eval(b)?;
                Ok(Value::Relation(Box::new(x), relation_of(*op), Box::new(y)))
            }
        }
    }

    fn lookup(&self, name: &str) -> Result<Value> {
        if let Some(v) = self.env.bindings.get(name) {
            return Ok(v.clone());
        }
        let d = self.domain()?;
        if let Some(i) = d.var_index(name) {
            let one = d.from_integer(BigInt::from(1));
            return Ok(Value::Poly(Poly::var(i).scale(&one)));
        }
        match Constant::from_name(name) {
            Some(Constant::FloatPos) => Ok(Value::int(self.env.floatpos as i64)),
            Some(Constant::Mod) => Ok(Value::int(self.env.modulus as i64)),
            Some(Constant::Mod32) => Ok(Value::int(self.env.modulus32 as i64)),
            None => Err(LangError::UnknownName(name.to_string())),
        }
    }

    /// Integer literals in exponents stay integers whatever the domain, so
    /// `x^2` works over `R64` and `Zp` alike.
    fn eval_exponent(&self, e: &Expr) -> Result<Value> {
        let lit = |t: &str| {
            t.bytes()
                .all(|b| b.is_ascii_digit())
                .then(|| t.parse::<BigInt>().ok())
                .flatten()
        };
        match &e.kind {
            ExprKind::Number(t) => {
                if let Some(n) = lit(t) {
                    return Ok(Value::Scalar(Scalar::Int(n)));
                }
            }
            ExprKind::Neg(inner) => {
                if let ExprKind::Number(t) = &inner.kind {
                    if let Some(n) = lit(t) {
                        return Ok(Value::Scalar(Scalar::Int(-n)));
                    }
                }
            }
            _ => {}
        }
        self.eval(e)
    }

    /// `v°`: numeric radians in floating domains, `v·π/180` kept exact
    /// otherwise.
    fn degrees(&self, v: Value) -> Result<Value> {
        let d = self.domain()?;
        if d.kind().is_float() {
            let pi = numeric_pi(d);
            let rad = binary(d, BinOp::Mul, v, Value::Scalar(pi))?;
            return binary(
                d,
                BinOp::Div,
                rad,
                Value::Scalar(d.from_integer(BigInt::from(180))),
            );
        }
        let factor = match v {
            Value::Scalar(s) => match s.as_rational() {
                Some(r) if !matches!(s, Scalar::Mod(_)) => {
                    Sym::Num(r / BigRational::from_integer(180.into()))
                }
                _ => {
                    return Err(LangError::DomainMismatch(
                        "degrees need a real number".into(),
                    ))
                }
            },
            Value::Sym(s) => Sym::Div(
                Box::new(s),
                Box::new(Sym::Num(BigRational::from_integer(180.into()))),
            ),
            other => {
                return Err(LangError::Type(format!(
                    "cannot convert a {} from degrees",
                    other.kind_name()
                )))
            }
        };
        Ok(sym_value(match factor {
            Sym::Num(r) if r.is_zero() => Sym::Num(r),
            Sym::Num(r) if r == BigRational::from_integer(1.into()) => Sym::Pi,
            f => Sym::Mul(Box::new(f), Box::new(Sym::Pi)),
        }))
    }
}

pub(super) fn numeric_pi(d: &Domain) -> Scalar {
    match d.kind() {
        DomainKind::R64 => Scalar::F64(std::f64::consts::PI),
        _ => Scalar::Big(BigFloat::pi(d.precision_bits())),
    }
}

fn relation_of(op: CmpOp) -> Relation {
    match op {
        CmpOp::Lt => Relation::Lt,
        CmpOp::Le => Relation::Le,
        CmpOp::Gt => Relation::Gt,
        CmpOp::Ge => Relation::Ge,
        CmpOp::Eq => Relation::Eq,
    }
}

/// A symbolic value that is actually rational collapses to a number.
pub(super) fn sym_value(s: Sym) -> Value {
    match s {
        Sym::Num(r) => Value::Scalar(Scalar::from_rational(r)),
        s => Value::Sym(s),
    }
}

/// Rows of equal length become a matrix; anything else stays a list.
fn vector(d: &Domain, vals: Vec<Value>) -> Result<Value> {
    let rows: Option<Vec<&Vec<Value>>> = vals
        .iter()
        .map(|v| match v {
            Value::List(r) if !r.is_empty() && r.iter().all(|x| ring_level(x).is_some()) => Some(r),
            _ => None,
        })
        .collect();
    let Some(rows) = rows.filter(|r| !r.is_empty()) else {
        return Ok(Value::List(vals));
    };
    let width = rows[0].len();
    if rows.iter().any(|r| r.len() != width) {
        return Ok(Value::List(vals));
    }
    let level = rows
        .iter()
        .flat_map(|r| r.iter())
        .filter_map(ring_level)
        .max()
        .unwrap_or(0);
    let flat: Vec<&Value> = rows.iter().flat_map(|r| r.iter()).collect();
    let m = match level {
        0 => Mat::S(Matrix::new(
            rows.len(),
            width,
            flat.iter().map(|v| to_scalar(v)).collect(),
        )?),
        1 => Mat::P(Matrix::new(
            rows.len(),
            width,
            flat.iter().map(|v| to_poly(v)).collect(),
        )?),
        _ => Mat::F(Matrix::new(
            rows.len(),
            width,
            flat.iter().map(|v| to_frac(v)).collect(),
        )?),
    };
    Ok(Value::Matrix(m.simplify(d)))
}

pub(super) fn ring_level(v: &Value) -> Option<u8> {
    match v {
        Value::Scalar(_) => Some(0),
        Value::Poly(_) => Some(1),
        Value::Frac(_) => Some(2),
        _ => None,
    }
}

fn to_scalar(v: &Value) -> Scalar {
    match v {
        Value::Scalar(s) => s.clone(),
        _ => unreachable!("level-zero values are scalars"),
    }
}

pub(super) fn to_poly(v: &Value) -> Poly {
    match v {
        Value::Scalar(s) => Poly::constant(s.clone()),
        Value::Poly(p) => p.clone(),
        _ => unreachable!("level-one values are polynomials"),
    }
}

pub(super) fn to_frac(v: &Value) -> Frac {
    match v {
        Value::Scalar(s) => Frac::constant(s.clone()),
        Value::Poly(p) => Frac::from(p.clone()),
        Value::Frac(f) => f.clone(),
        _ => unreachable!("ring values only"),
    }
}

fn flags(v: &Value) -> (bool, bool) {
    match v {
        Value::Scalar(s) => (matches!(s, Scalar::Mod(_)), s.is_float()),
        Value::Poly(p) => (p.has_residue(), p.has_float()),
        Value::Frac(f) => (
            f.num().has_residue() || f.den().has_residue(),
            f.num().has_float() || f.den().has_float(),
        ),
        _ => (false, false),
    }
}

fn check_mix(a: &Value, b: &Value) -> Result<()> {
    let (ra, fa) = flags(a);
    let (rb, fb) = flags(b);
    if (ra && fb) || (fa && rb) {
        return Err(LangError::DomainMismatch(
            "residues cannot be combined with floating values".into(),
        ));
    }
    Ok(())
}

fn op_error(op: BinOp, a: &Value, b: &Value) -> LangError {
    LangError::Type(format!(
        "cannot apply `{}` to a {} and a {}",
        op.symbol(),
        a.kind_name(),
        b.kind_name()
    ))
}

pub(super) fn negate(v: Value) -> Result<Value> {
    Ok(match v {
        Value::Scalar(s) => Value::Scalar(-s),
        Value::Poly(p) => Value::Poly(-p),
        Value::Frac(f) => Value::Frac(-f),
        Value::Sym(Sym::Neg(s)) => Value::Sym(*s),
        Value::Sym(s) => Value::Sym(Sym::Neg(Box::new(s))),
        Value::Matrix(m) => Value::Matrix(with_mat!(&m, a => Elem::wrap(a.neg()))),
        Value::List(items) => Value::List(items.into_iter().map(negate).collect::<Result<_>>()?),
        Value::Column(items) => {
            Value::Column(items.into_iter().map(negate).collect::<Result<_>>()?)
        }
        other => {
            return Err(LangError::Type(format!(
                "cannot negate a {}",
                other.kind_name()
            )))
        }
    })
}

pub(super) fn binary(d: &Domain, op: BinOp, a: Value, b: Value) -> Result<Value> {
    if op == BinOp::Pow {
        return power(d, a, b);
    }
    match (a, b) {
        (a @ (Value::Relation(..) | Value::Roots(_) | Value::Intervals(_)), b)
        | (a, b @ (Value::Relation(..) | Value::Roots(_) | Value::Intervals(_))) => {
            Err(op_error(op, &a, &b))
        }
        (a @ Value::Sym(_), b) | (a, b @ Value::Sym(_)) => sym_binary(d, op, a, b),
        (Value::Matrix(x), Value::Matrix(y)) => mat_mat(d, op, &x, &y),
        (Value::Matrix(m), r)
            if ring_level(&r).is_some() && matches!(op, BinOp::Mul | BinOp::Div) =>
        {
            mat_scalar(d, &m, r, op == BinOp::Div)
        }
        (r, Value::Matrix(m)) if ring_level(&r).is_some() && op == BinOp::Mul => {
            mat_scalar(d, &m, r, false)
        }
        (Value::List(x), Value::List(y)) if matches!(op, BinOp::Add | BinOp::Sub) => {
            Ok(Value::List(zip(d, op, x, y)?))
        }
        (Value::Column(x), Value::Column(y)) if matches!(op, BinOp::Add | BinOp::Sub) => {
            Ok(Value::Column(zip(d, op, x, y)?))
        }
        (Value::List(x), r)
            if ring_level(&r).is_some() && matches!(op, BinOp::Mul | BinOp::Div) =>
        {
            Ok(Value::List(map_items(d, op, x, &r, true)?))
        }
        (Value::Column(x), r)
            if ring_level(&r).is_some() && matches!(op, BinOp::Mul | BinOp::Div) =>
        {
            Ok(Value::Column(map_items(d, op, x, &r, true)?))
        }
        (r, Value::List(x)) if ring_level(&r).is_some() && op == BinOp::Mul => {
            Ok(Value::List(map_items(d, op, x, &r, false)?))
        }
        (r, Value::Column(x)) if ring_level(&r).is_some() && op == BinOp::Mul => {
            Ok(Value::Column(map_items(d, op, x, &r, false)?))
        }
        (a, b) if ring_level(&a).is_some() && ring_level(&b).is_some() => ring_op(d, op, a, b),
        (a, b) => Err(op_error(op, &a, &b)),
    }
}

fn zip(d: &Domain, op: BinOp, x: Vec<Value>, y: Vec<Value>) -> Result<Vec<Value>> {
    if x.len() != y.len() {
        return Err(LangError::Type(format!(
            "vector lengths differ: {} and {}",
            x.len(),
            y.len()
        )));
    }
    x.into_iter()
        .zip(y)
        .map(|(a, b)| binary(d, op, a, b))
        .collect()
}

fn map_items(
    d: &Domain,
    op: BinOp,
    items: Vec<Value>,
    r: &Value,
    item_first: bool,
) -> Result<Vec<Value>> {
    items
        .into_iter()
        .map(|x| {
            if item_first {
                binary(d, op, x, r.clone())
            } else {
                binary(d, op, r.clone(), x)
            }
        })
        .collect()
}

fn ring_op(d: &Domain, op: BinOp, a: Value, b: Value) -> Result<Value> {
    check_mix(&a, &b)?;
    let level = ring_level(&a).max(ring_level(&b)).unwrap_or(0);
    let v = match level {
        0 => {
            let (x, y) = (to_scalar(&a), to_scalar(&b));
            Value::Scalar(match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div => x.checked_div(&y)?,
                BinOp::Pow => unreachable!("handled by power"),
            })
        }
        1 => {
            let (x, y) = (to_poly(&a), to_poly(&b));
            match op {
                BinOp::Add => Value::Poly(&x + &y),
                BinOp::Sub => Value::Poly(&x - &y),
                BinOp::Mul => Value::Poly(&x * &y),
                BinOp::Div => divide_polys(d, x, y)?,
                BinOp::Pow => unreachable!("handled by power"),
            }
        }
        _ => {
            let (x, y) = (to_frac(&a), to_frac(&b));
            Value::Frac(match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div => x.checked_div(&y)?,
                BinOp::Pow => unreachable!("handled by power"),
            })
        }
    };
    Ok(v.simplify(d))
}

fn divide_polys(d: &Domain, x: Poly, y: Poly) -> Result<Value> {
    if let Some(c) = y.as_constant() {
        return Ok(Value::Poly(x.scale(&c.try_inv()?)));
    }
    let q = if d.kind() == DomainKind::Z {
        x.exact_div(&y)
    } else {
        x.known_quotient(&y)
    };
    if let Some(q) = q {
        return Ok(Value::Poly(q));
    }
    if x.has_float() || y.has_float() {
        return Err(LangError::DomainMismatch(
            "rational functions need exact coefficients".into(),
        ));
    }
    Ok(Value::Frac(Frac::new(x, y)?))
}

fn as_sym(v: &Value) -> Option<Sym> {
    match v {
        Value::Sym(s) => Some(s.clone()),
        Value::Scalar(s @ (Scalar::Int(_) | Scalar::Rat(_))) => s.as_rational().map(Sym::Num),
        _ => None,
    }
}

fn sym_binary(d: &Domain, op: BinOp, a: Value, b: Value) -> Result<Value> {
    if let (Some(x), Some(y)) = (as_sym(&a), as_sym(&b)) {
        let (x, y) = (Box::new(x), Box::new(y));
        return Ok(sym_value(match op {
            BinOp::Add => Sym::Add(x, y),
            BinOp::Sub => Sym::Sub(x, y),
            BinOp::Mul => Sym::Mul(x, y),
            BinOp::Div => Sym::Div(x, y),
            BinOp::Pow => unreachable!("handled by power"),
        }));
    }
    // Against a float the constant is evaluated at that float's precision.
    let prec = |v: &Value| match v {
        Value::Scalar(Scalar::F64(_)) => Some(53),
        Value::Scalar(Scalar::Big(b)) => Some(b.precision()),
        _ => None,
    };
    let numeric = |v: Value, p: u32, f64_kind: bool| -> Result<Value> {
        match v {
            Value::Sym(s) => {
                let x = s.eval(p)?;
                Ok(Value::Scalar(if f64_kind {
                    Scalar::F64(x.to_f64())
                } else {
                    Scalar::Big(x)
                }))
            }
            other => Ok(other),
        }
    };
    if let Some(p) = prec(&a).or(prec(&b)) {
        let f64_kind = matches!(a, Value::Scalar(Scalar::F64(_)))
            || matches!(b, Value::Scalar(Scalar::F64(_)));
        let a = numeric(a, p, f64_kind)?;
        let b = numeric(b, p, f64_kind)?;
        return binary(d, op, a, b);
    }
    Err(LangError::DomainMismatch(format!(
        "a symbolic constant cannot be combined with a {}; apply \\value first",
        if matches!(a, Value::Sym(_)) {
            b.kind_name()
        } else {
            a.kind_name()
        }
    )))
}

fn same_kind(x: &Mat, y: &Mat) -> (Mat, Mat) {
    let l = x.level().max(y.level());
    (x.lift(l), y.lift(l))
}

fn mat_mat(d: &Domain, op: BinOp, x: &Mat, y: &Mat) -> Result<Value> {
    let (x, y) = same_kind(x, y);
    let r = match (&x, &y, op) {
        (Mat::S(a), Mat::S(b), BinOp::Add) => Mat::S(a.add(b)?),
        (Mat::S(a), Mat::S(b), BinOp::Sub) => Mat::S(a.sub(b)?),
        (Mat::S(a), Mat::S(b), BinOp::Mul) => Mat::S(a.mul(b)?),
        (Mat::P(a), Mat::P(b), BinOp::Add) => Mat::P(a.add(b)?),
        (Mat::P(a), Mat::P(b), BinOp::Sub) => Mat::P(a.sub(b)?),
        (Mat::P(a), Mat::P(b), BinOp::Mul) => Mat::P(a.mul(b)?),
        (Mat::F(a), Mat::F(b), BinOp::Add) => Mat::F(a.add(b)?),
        (Mat::F(a), Mat::F(b), BinOp::Sub) => Mat::F(a.sub(b)?),
        (Mat::F(a), Mat::F(b), BinOp::Mul) => Mat::F(a.mul(b)?),
        _ => {
            return Err(LangError::Type(format!(
                "cannot apply `{}` to two matrices; use \\inverse for division",
                op.symbol()
            )))
        }
    };
    Ok(Value::Matrix(r.simplify(d)))
}

fn mat_scalar(d: &Domain, m: &Mat, r: Value, divide: bool) -> Result<Value> {
    let r = if divide {
        ring_op(d, BinOp::Div, Value::int(1), r)?
    } else {
        r
    };
    let level = m.level().max(ring_level(&r).unwrap_or(0));
    let out = match m.lift(level) {
        Mat::S(a) => Mat::S(a.scale(&to_scalar(&r))),
        Mat::P(a) => Mat::P(a.scale(&to_poly(&r))),
        Mat::F(a) => Mat::F(a.scale(&to_frac(&r))),
    };
    Ok(Value::Matrix(out.simplify(d)))
}

fn int_exponent(v: &Value) -> Option<i64> {
    match v {
        Value::Scalar(s) => integer_of(s),
        Value::Poly(p) => p.as_constant().as_ref().and_then(integer_of),
        _ => None,
    }
}

pub(super) fn field_matrix<T: Elem>(a: &Matrix<T>) -> Matrix<T::Field> {
    a.map(|x| T::Field::from(x.clone()))
}

fn mat_power<T: Elem>(a: &Matrix<T>, n: u32) -> Result<Matrix<T>> {
    if !a.is_square() {
        return Err(crate::matrix::MatrixError::NonSquare.into());
    }
    let mut acc = Matrix::<T>::identity(a.rows());
    let mut base = a.clone();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base)?;
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base)?;
        }
    }
    Ok(acc)
}

fn power(d: &Domain, base: Value, exp: Value) -> Result<Value> {
    let n = int_exponent(&exp);
    if let Some(n) = n {
        if n.abs() > MAX_EXPONENT {
            return Err(LangError::Type(format!("exponent {n} is too large")));
        }
    }
    match (base, n) {
        (Value::Matrix(m), Some(n)) => {
            let m = if n < 0 {
                with_mat!(&m, a => Elem::wrap(inverse(&field_matrix(a))?))
            } else {
                m
            };
            let k = n.unsigned_abs() as u32;
            let r = with_mat!(&m, a => Elem::wrap(mat_power(a, k)?));
            Ok(Value::Matrix(r.simplify(d)))
        }
        (Value::Sym(s), Some(n)) => Ok(match n {
            0 => Value::int(1),
            1 => Value::Sym(s),
            n => Value::Sym(Sym::Pow(Box::new(s), n)),
        }),
        (b, Some(n)) if ring_level(&b).is_some() => {
            if let Value::Scalar(s @ Scalar::Int(_)) = &b {
                if s.bit_length().saturating_mul(n.unsigned_abs()) > MAX_POWER_BITS {
                    return Err(LangError::Type("power is too large to compute".into()));
                }
            }
            let k = n.unsigned_abs() as u32;
            let v = match b {
                Value::Scalar(s) => {
                    let s = if n < 0 { s.try_inv()? } else { s };
                    Value::Scalar(s.pow(k))
                }
                Value::Poly(p) if n >= 0 => Value::Poly(p.pow(k)),
                Value::Poly(p) => Value::Frac(Frac::from(p).try_inv()?.pow(k)),
                Value::Frac(f) => {
                    let f = if n < 0 { f.try_inv()? } else { f };
                    Value::Frac(f.pow(k))
                }
                _ => unreachable!("ring values only"),
            };
            Ok(v.simplify(d))
        }
        (Value::Scalar(b), None) if b.is_float() => match exp {
            Value::Scalar(e) if e.is_float() || e.is_exact() && !matches!(e, Scalar::Mod(_)) => {
                let x = b.to_f64().powf(e.to_f64());
                if !x.is_finite() {
                    return Err(crate::arith::ArithError::NonFinite.into());
                }
                let r = match b {
                    Scalar::Big(_) => d.coerce(&Scalar::F64(x))?,
                    _ => Scalar::F64(x),
                };
                Ok(Value::Scalar(r))
            }
            other => Err(LangError::Type(format!(
                "cannot raise a number to a {}",
                other.kind_name()
            ))),
        },
        (b, None) => Err(LangError::Type(format!(
            "cannot raise a {} to a non-integer {}",
            b.kind_name(),
            exp.kind_name()
        ))),
        (b, Some(_)) => Err(LangError::Type(format!(
            "cannot raise a {} to a power",
            b.kind_name()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(script: &str) -> Vec<String> {
        let mut s = Session::new();
        s.run(script)
            .into_iter()
            .map(|o| match o.error {
                Some(e) => format!("error: {e}"),
                None => o.output,
            })
            .collect()
    }

    fn last(script: &str) -> String {
        run(script).pop().unwrap()
    }

    #[test]
    fn arithmetic_and_precedence() {
        assert_eq!(last("SPACE=Q[]; 1+1;"), "2");
        assert_eq!(last("SPACE=Z[]; 2^3^2;"), "512");
        assert_eq!(last("SPACE=Z[]; -2^2;"), "-4");
        assert_eq!(last("SPACE=Z[]; 7/2;"), "7/2");
        assert_eq!(last("SPACE=Z[]; 2^-2;"), "1/4");
        assert_eq!(last("SPACE=R64[]; 1/3;"), "0.33");
    }

    #[test]
    fn polynomials() {
        assert_eq!(last("SPACE=Z[x,y]; (x+y)^2;"), "y^2+2*y*x+x^2");
        assert_eq!(last("SPACE=Q[x]; (x^2-1)/(x-1);"), "x+1");
        assert_eq!(last("SPACE=Q[x]; 1/(x+1) + 1;"), "(x+2)/(x+1)");
        assert_eq!(last("SPACE=R64[x]; x^2/2;"), "0.50*x^2");
        assert_eq!(last("SPACE=Zp[x]; MOD=5; (x+3)*2;"), "2*x+1");
    }

    #[test]
    fn bindings_and_errors() {
        assert_eq!(
            run("SPACE=Z[x]; f = x+1; f*f;"),
            ["", "f = x+1", "x^2+2*x+1"]
        );
        assert_eq!(
            last("1+1;"),
            "error: SPACE must be declared before this statement"
        );
        assert_eq!(last("SPACE=Z[x]; y;"), "error: unknown name `y`");
        assert!(last("SPACE=Z[x]; 1/0;").starts_with("error"));
        assert!(last("SPACE=Z[x]; x = 2;").starts_with("error"));
    }

    #[test]
    fn space_change_transfers_bindings() {
        let out = run("SPACE=Z[x,y]; f = y^2+x; SPACE=Q[y,x,z]; f; SPACE=Q[x]; f;");
        assert_eq!(out[3], "x+y^2");
        assert_eq!(out[5], "error: unknown name `f`");
        assert_eq!(last("SPACE=Q[x]; a = 1/2; SPACE=R64[x]; a;"), "0.50");
    }

    #[test]
    fn matrices_and_lists() {
        assert_eq!(
            last("SPACE=Z[]; [[1,2],[3,4]]*[[1,0],[0,1]];"),
            "[[1, 2], [3, 4]]"
        );
        assert_eq!(last("SPACE=Q[]; [[2,0],[0,4]]^-1;"), "[[1/2, 0], [0, 1/4]]");
        assert_eq!(last("SPACE=Z[]; 2*[1,2];"), "[2, 4]");
        assert_eq!(last("SPACE=Z[]; [[1,2],[3]];"), "[[1, 2], [3]]");
        assert!(last("SPACE=Z[]; [[1,2]]+[[1,2,3]];").starts_with("error"));
    }

    #[test]
    fn constants_and_degrees() {
        assert_eq!(last("FLOATPOS=4; SPACE=R64[]; 1/3;"), "0.3333");
        assert_eq!(last("SPACE=R64[]; 180°;"), "3.14");
        assert_eq!(last("SPACE=Q[]; 30°;"), "1/6*π");
        assert!(last("MOD=10;").starts_with("error"));
    }

    #[test]
    fn syntax_errors_are_per_statement() {
        let out = run("SPACE=Z[]; 1+; 2;");
        assert!(out[1].starts_with("error: syntax error"));
        assert_eq!(out[2], "2");
    }

    #[test]
    fn cancelled_session_times_out() {
        let mut s = Session::with_cancel(CancelToken::with_timeout(std::time::Duration::ZERO));
        let out = s.run("SPACE=Z[]; 1;");
        assert!(out.iter().all(|o| o.error == Some(LangError::Timeout)));
    }
}
