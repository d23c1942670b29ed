use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{BigFloat, Domain, DomainKind, Scalar};
use crate::decomp::{bruhat, cholesky, lsu, lsuwmdet, pseudo_inverse, qr, svd};
use crate::groebner::{groebner_basis, MonomialOrder};
use crate::matrix::{
    adjugate, char_poly, closure, determinant, echelon_form, gen_inverse, inverse, kernel, rank,
    solve, Matrix,
};
use crate::means::{agm, ellipse_circumference, elliptic_e, elliptic_k, ghm, magm, KMethod};
use crate::poly::{
    discriminant, extended_gcd, gcd, lcm, resultant, solve_inequalities, solve_univariate,
    sylvester, Frac, Monomial, Poly, PolyError, Relation, SylvesterKind,
};

use super::ast::{Expr, ExprKind};
use super::eval::{
    binary, field_matrix, integer_of, numeric_pi, ring_level, to_frac, to_poly, Eval,
};
use super::value::{rational_sqrt, with_mat, Elem, Mat, Sym, Value};
use super::LangError;

type Result<T> = std::result::Result<T, LangError>;

fn arity(name: &str, args: &[Expr], expected: &'static str, ok: bool) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(LangError::ArityMismatch {
            name: name.to_string(),
            expected,
            found: args.len(),
        })
    }
}

fn type_error(name: &str, what: &str, v: &Value) -> LangError {
    LangError::Type(format!("\\{name} expects {what}, got a {}", v.kind_name()))
}

fn var_poly(d: &Domain, i: usize) -> Poly {
    Poly::var(i).scale(&d.from_integer(BigInt::from(1)))
}

fn last_var(d: &Domain, name: &str) -> Result<usize> {
    d.variables()
        .len()
        .checked_sub(1)
        .ok_or_else(|| LangError::Type(format!("\\{name} needs a variable in SPACE")))
}

/// Converts to a float scalar of the domain's kind (`f64` for `R64`, big
/// floats otherwise).
fn float_scalar(d: &Domain, x: f64) -> Scalar {
    match d.kind() {
        DomainKind::R => d.coerce(&Scalar::F64(x)).unwrap_or(Scalar::F64(x)),
        _ => Scalar::F64(x),
    }
}

fn f64_matrix(d: &Domain, a: &Matrix<f64>) -> Value {
    Value::Matrix(Mat::S(a.map(|&x| float_scalar(d, x))))
}

impl Eval<'_> {
    fn values(&self, args: &[Expr]) -> Result<Vec<Value>> {
        args.iter().map(|a| self.eval(a)).collect()
    }

    /// Arguments given either one by one or as a single list.
    fn flat_values(&self, args: &[Expr]) -> Result<Vec<Value>> {
        let mut vals = self.values(args)?;
        if vals.len() == 1 {
            if let Value::List(items) | Value::Column(items) = &vals[0] {
                return Ok(items.clone());
            }
        }
        if vals.len() == 1 {
            return Ok(vec![vals.remove(0)]);
        }
        Ok(vals)
    }

    fn poly_arg(&self, name: &str, e: &Expr) -> Result<Poly> {
        let v = self.eval(e)?;
        v.as_poly()
            .ok_or_else(|| type_error(name, "a polynomial", &v))
    }

    fn matrix_arg(&self, name: &str, e: &Expr) -> Result<Mat> {
        match self.eval(e)? {
            Value::Matrix(m) => Ok(m),
            v => Err(type_error(name, "a matrix", &v)),
        }
    }

    fn variable_arg(&self, name: &str, e: &Expr) -> Result<usize> {
        let d = self.domain()?;
        match &e.kind {
            ExprKind::Ident(v) => d
                .var_index(v)
                .ok_or_else(|| LangError::Poly(PolyError::UnknownVariable(v.clone()))),
            _ => Err(LangError::ArgumentForm(format!(
                "\\{name} expects a SPACE variable name"
            ))),
        }
    }

    fn var_or_last(&self, name: &str, args: &[Expr], at: usize) -> Result<usize> {
        match args.get(at) {
            Some(e) => self.variable_arg(name, e),
            None => last_var(self.domain()?, name),
        }
    }

    pub(super) fn call(&self, name: &str, args: &[Expr], bare: bool) -> Result<Value> {
        let d = self.domain()?;
        let n = args.len();
        if bare && name != "pi" {
            return Err(LangError::ArityMismatch {
                name: name.to_string(),
                expected: "some",
                found: 0,
            });
        }
        match name {
            "AGM" | "GHM" | "MAGM" => {
                arity(name, args, "2", n == 2)?;
                self.mean(name, args)
            }
            "ellipticK" | "ellipticE" => {
                arity(name, args, "1", n == 1)?;
                let v = self.eval(&args[0])?;
                self.real_fn(
                    &[v],
                    |x: &[f64], fp| {
                        Ok(if name == "ellipticK" {
                            elliptic_k(&x[0], KMethod::Agm, fp)?
                        } else {
                            elliptic_e(&x[0], fp)?
                        })
                    },
                    |x: &[BigFloat], fp| {
                        Ok(if name == "ellipticK" {
                            elliptic_k(&x[0], KMethod::Agm, fp)?
                        } else {
                            elliptic_e(&x[0], fp)?
                        })
                    },
                )
            }
            "ellipseCircumference" => {
                arity(name, args, "2", n == 2)?;
                let v = self.values(args)?;
                self.real_fn(
                    &v,
                    |x: &[f64], fp| Ok(ellipse_circumference(&x[0], &x[1], fp)?),
                    |x: &[BigFloat], fp| Ok(ellipse_circumference(&x[0], &x[1], fp)?),
                )
            }
            "pi" => {
                arity(name, args, "0", n == 0)?;
                Ok(if d.kind().is_float() {
                    Value::Scalar(numeric_pi(d))
                } else {
                    Value::Sym(Sym::Pi)
                })
            }
            "value" => {
                arity(name, args, "1", n == 1)?;
                let v = self.eval(&args[0])?;
                numeric(d, v)
            }
            "sqrt" => {
                arity(name, args, "1", n == 1)?;
                let v = self.eval(&args[0])?;
                sqrt(d, v)
            }
            "sin" | "cos" => {
                arity(name, args, "1", n == 1)?;
                let v = self.eval(&args[0])?;
                trig(d, name == "sin", v)
            }
            "D" => {
                arity(name, args, "1 or 2", n == 1 || n == 2)?;
                let v = self.eval(&args[0])?;
                let x = self.var_or_last(name, args, 1)?;
                derivative(d, name, v, x)
            }
            "GCD" | "LCM" => {
                arity(name, args, "2", n == 2)?;
                let f = self.poly_arg(name, &args[0])?;
                let g = self.poly_arg(name, &args[1])?;
                let r = if name == "GCD" {
                    gcd(&f, &g)?
                } else {
                    lcm(&f, &g)?
                };
                Ok(Value::Poly(r).simplify(d))
            }
            "extendedGCD" => {
                arity(name, args, "2", n == 2)?;
                let f = self.poly_arg(name, &args[0])?;
                let g = self.poly_arg(name, &args[1])?;
                let (g0, s, t) = extended_gcd(&f, &g)?;
                Ok(Value::List(vec![Value::Poly(g0), Value::Poly(s), Value::Poly(t)]).simplify(d))
            }
            "resultant" => {
                arity(name, args, "2 or 3", n == 2 || n == 3)?;
                let f = self.poly_arg(name, &args[0])?;
                let g = self.poly_arg(name, &args[1])?;
                let x = self.var_or_last(name, args, 2)?;
                Ok(Value::Poly(resultant(&f, &g, x)?).simplify(d))
            }
            "discriminant" => {
                arity(name, args, "1 or 2", n == 1 || n == 2)?;
                let f = self.poly_arg(name, &args[0])?;
                let x = self.var_or_last(name, args, 1)?;
                Ok(Value::Poly(discriminant(&f, x)?).simplify(d))
            }
            "sylvester" => {
                arity(name, args, "2 or 3", n == 2 || n == 3)?;
                let f = self.poly_arg(name, &args[0])?;
                let g = self.poly_arg(name, &args[1])?;
                let kind = match args.get(2) {
                    None => SylvesterKind::First,
                    Some(e) => match self.eval(e)? {
                        Value::Scalar(s) if integer_of(&s) == Some(0) => SylvesterKind::First,
                        Value::Scalar(s) if integer_of(&s) == Some(1) => SylvesterKind::Second,
                        _ => {
                            return Err(LangError::ArgumentForm(
                                "\\sylvester kind must be 0 or 1".into(),
                            ))
                        }
                    },
                };
                let x = last_var(d, name)?;
                Ok(Value::Matrix(
                    Mat::P(sylvester(&f, &g, x, kind)?).simplify(d),
                ))
            }
            "groebner" | "groebnerB" => {
                arity(name, args, "at least 1", n >= 1)?;
                let polys = self
                    .flat_values(args)?
                    .iter()
                    .map(|v| {
                        v.as_poly()
                            .ok_or_else(|| type_error(name, "polynomials", v))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let basis = groebner_basis(&polys, MonomialOrder::Lex, self.cancel)?;
                Ok(
                    Value::List(basis.generators.into_iter().map(Value::Poly).collect())
                        .simplify(d),
                )
            }
            "solve" => {
                arity(name, args, "1 or 2", n == 1 || n == 2)?;
                if n == 2 {
                    let m = self.matrix_arg(name, &args[0])?;
                    let b = self.eval(&args[1])?;
                    return solve_matrix(d, &m, b);
                }
                let v = self.eval(&args[0])?;
                solve_value(d, v)
            }
            "det"
            | "transpose"
            | "conjugate"
            | "adjoint"
            | "inverse"
            | "genInverse"
            | "pseudoInverse"
            | "closure"
            | "kernel"
            | "rank"
            | "toEchelonForm"
            | "charPolynom"
            | "BruhatDecomposition"
            | "LSU"
            | "LDU"
            | "LSUWMdet"
            | "LDUWMdet"
            | "QR"
            | "SVD" => {
                arity(name, args, "1", n == 1)?;
                let m = self.matrix_arg(name, &args[0])?;
                Ok(matrix_fn(d, name, &m)?.simplify(d))
            }
            "cholesky" => {
                arity(name, args, "1 or 2", n == 1 || n == 2)?;
                let m = self.matrix_arg(name, &args[0])?;
                let fast = match args.get(1) {
                    None => false,
                    Some(e) => match self.eval(e)? {
                        Value::Scalar(s) => !num_traits::Zero::is_zero(&s.to_f64()),
                        v => return Err(type_error(name, "a flag", &v)),
                    },
                };
                let c = cholesky(&m.to_f64()?, fast)?;
                Ok(Value::List(vec![f64_matrix(d, &c.l), f64_matrix(d, &c.s)]))
            }
            _ => Err(LangError::UnknownFunction(name.to_string())),
        }
    }

    /// The means accept only numbers and names as arguments.
    fn mean(&self, name: &str, args: &[Expr]) -> Result<Value> {
        for a in args {
            let simple = match &a.kind {
                ExprKind::Number(_) | ExprKind::Ident(_) => true,
                ExprKind::Neg(inner) => matches!(inner.kind, ExprKind::Number(_)),
                _ => false,
            };
            if !simple {
                return Err(LangError::ArgumentForm(format!(
                    "arguments of \\{name} must be numbers or variables, not `{a}`"
                )));
            }
        }
        let vals = self.values(args)?;
        let pick = |x: &[f64], fp| -> Result<f64> {
            Ok(match name {
                "AGM" => agm(&x[0], &x[1], fp)?,
                "GHM" => ghm(&x[0], &x[1], fp)?,
                _ => magm(&x[0], &x[1], fp)?,
            })
        };
        let pick_big = |x: &[BigFloat], fp| -> Result<BigFloat> {
            Ok(match name {
                "AGM" => agm(&x[0], &x[1], fp)?,
                "GHM" => ghm(&x[0], &x[1], fp)?,
                _ => magm(&x[0], &x[1], fp)?,
            })
        };
        self.real_fn(&vals, pick, pick_big)
    }

    /// Evaluates a real function in `f64` over `R64` and in big floats at
    /// `FLOATPOS` precision elsewhere.
    fn real_fn(
        &self,
        vals: &[Value],
        small: impl Fn(&[f64], u32) -> Result<f64>,
        big: impl Fn(&[BigFloat], u32) -> Result<BigFloat>,
    ) -> Result<Value> {
        let d = self.domain()?;
        let fp = self.env.floatpos();
        if d.kind() == DomainKind::R64 {
            let xs = vals.iter().map(to_f64).collect::<Result<Vec<_>>>()?;
            Ok(Value::Scalar(Scalar::F64(small(&xs, fp)?)))
        } else {
            let prec = d.precision_bits();
            let xs = vals
                .iter()
                .map(|v| to_big(v, prec))
                .collect::<Result<Vec<_>>>()?;
            Ok(Value::Scalar(Scalar::Big(big(&xs, fp)?)))
        }
    }
}

fn not_real(v: &Value) -> LangError {
    LangError::DomainMismatch(format!("expected a real number, got a {}", v.kind_name()))
}

fn to_f64(v: &Value) -> Result<f64> {
    match v {
        Value::Scalar(Scalar::Mod(_)) => Err(not_real(v)),
        Value::Scalar(s) => Ok(s.to_f64()),
        Value::Sym(s) => Ok(s.eval(64)?.to_f64()),
        Value::Poly(p) => p
            .as_constant()
            .map(|c| to_f64(&Value::Scalar(c)))
            .unwrap_or(Err(not_real(v))),
        _ => Err(not_real(v)),
    }
}

fn to_big(v: &Value, prec: u32) -> Result<BigFloat> {
    match v {
        Value::Scalar(s) => Ok(match s {
            Scalar::Int(i) => BigFloat::from_bigint(i, prec),
            Scalar::Rat(r) => BigFloat::from_ratio(r.numer(), r.denom(), prec)?,
            Scalar::F64(f) => BigFloat::from_f64(*f, prec)?,
            Scalar::Big(b) => b.with_precision(prec),
            Scalar::Mod(_) => return Err(not_real(v)),
        }),
        Value::Sym(s) => s.eval(prec),
        Value::Poly(p) => match p.as_constant() {
            Some(c) => to_big(&Value::Scalar(c), prec),
            None => Err(not_real(v)),
        },
        _ => Err(not_real(v)),
    }
}

/// Numeric form used by `\value`: symbolic constants and fractions become
/// floats of the domain's kind; integers and residues are kept.
fn numeric_scalar(d: &Domain, s: &Scalar) -> Scalar {
    match s {
        Scalar::Rat(r) => match d.kind() {
            DomainKind::R64 => Scalar::F64(s.to_f64()),
            _ => BigFloat::from_ratio(r.numer(), r.denom(), d.precision_bits())
                .map(Scalar::Big)
                .unwrap_or_else(|_| s.clone()),
        },
        other => other.clone(),
    }
}

fn numeric(d: &Domain, v: Value) -> Result<Value> {
    let list = |items: Vec<Value>| {
        items
            .into_iter()
            .map(|x| numeric(d, x))
            .collect::<Result<Vec<_>>>()
    };
    Ok(match v {
        Value::Scalar(s) => Value::Scalar(numeric_scalar(d, &s)),
        Value::Sym(s) => {
            let b = s.eval(d.precision_bits())?;
            Value::Scalar(match d.kind() {
                DomainKind::R64 => Scalar::F64(b.to_f64()),
                _ => Scalar::Big(b),
            })
        }
        Value::Poly(p) => Value::Poly(p.map_coeffs(|c| numeric_scalar(d, c))),
        Value::Frac(f) => Value::Frac(f.map_coeffs(|c| numeric_scalar(d, c))?),
        Value::Matrix(Mat::S(a)) => Value::Matrix(Mat::S(a.map(|c| numeric_scalar(d, c)))),
        Value::Matrix(Mat::P(a)) => {
            Value::Matrix(Mat::P(a.map(|p| p.map_coeffs(|c| numeric_scalar(d, c)))))
        }
        Value::Matrix(Mat::F(a)) => Value::Matrix(Mat::F(
            a.try_map(|f| f.map_coeffs(|c| numeric_scalar(d, c)))?,
        )),
        Value::List(items) => Value::List(list(items)?),
        Value::Column(items) => Value::Column(list(items)?),
        Value::Roots(rs) => Value::List(
            rs.expanded()
                .iter()
                .map(|r| Value::Scalar(float_scalar(d, r.to_f64())))
                .collect(),
        ),
        Value::Relation(a, r, b) => {
            Value::Relation(Box::new(numeric(d, *a)?), r, Box::new(numeric(d, *b)?))
        }
        other => other,
    })
}

fn sqrt(d: &Domain, v: Value) -> Result<Value> {
    let negative = || LangError::Type("square root of a negative number".into());
    match v {
        Value::Scalar(Scalar::F64(x)) => {
            if x < 0.0 {
                return Err(negative());
            }
            Ok(Value::Scalar(Scalar::F64(x.sqrt())))
        }
        Value::Scalar(Scalar::Big(b)) => {
            Ok(Value::Scalar(Scalar::Big(b.sqrt().ok_or_else(negative)?)))
        }
        Value::Scalar(s @ (Scalar::Int(_) | Scalar::Rat(_))) => {
            let r = s.as_rational().expect("exact real");
            if r.is_negative() {
                return Err(negative());
            }
            if d.kind().is_float() {
                return sqrt(d, Value::Scalar(d.coerce(&s)?));
            }
            Ok(match rational_sqrt(&r) {
                Some(q) => Value::Scalar(Scalar::from_rational(q)),
                None => Value::Sym(Sym::Sqrt(Box::new(Sym::Num(r)))),
            })
        }
        Value::Sym(s) => Ok(Value::Sym(Sym::Sqrt(Box::new(s)))),
        other => Err(type_error("sqrt", "a real number", &other)),
    }
}

fn trig(d: &Domain, sine: bool, v: Value) -> Result<Value> {
    let name = if sine { "sin" } else { "cos" };
    match v {
        Value::Scalar(Scalar::F64(x)) => Ok(Value::Scalar(Scalar::F64(if sine {
            x.sin()
        } else {
            x.cos()
        }))),
        Value::Scalar(Scalar::Big(b)) => Ok(Value::Scalar(Scalar::Big(if sine {
            b.sin()
        } else {
            b.cos()
        }))),
        Value::Scalar(s @ (Scalar::Int(_) | Scalar::Rat(_))) => {
            if d.kind().is_float() {
                return trig(d, sine, Value::Scalar(d.coerce(&s)?));
            }
            let r = s.as_rational().expect("exact real");
            if r.is_zero() {
                return Ok(Value::int(if sine { 0 } else { 1 }));
            }
            let arg = Box::new(Sym::Num(r));
            Ok(Value::Sym(if sine { Sym::Sin(arg) } else { Sym::Cos(arg) }))
        }
        Value::Sym(s) => {
            let arg = Box::new(s);
            Ok(Value::Sym(if sine { Sym::Sin(arg) } else { Sym::Cos(arg) }))
        }
        other => Err(type_error(name, "a real number", &other)),
    }
}

fn derivative(d: &Domain, name: &str, v: Value, x: usize) -> Result<Value> {
    Ok(match v {
        Value::Scalar(_) => Value::Scalar(d.from_integer(BigInt::zero())),
        Value::Poly(p) => Value::Poly(p.derivative(x)).simplify(d),
        Value::Frac(f) => {
            let (n, m) = (f.num(), f.den());
            let top = &(&n.derivative(x) * m) - &(n * &m.derivative(x));
            Value::Frac(Frac::new(top, m * m)?).simplify(d)
        }
        other => return Err(type_error(name, "a polynomial", &other)),
    })
}

fn columns<T: Elem>(a: &Matrix<T>) -> Vec<Value> {
    (0..a.cols())
        .map(|j| Value::Column(a.column(j).into_iter().map(Elem::into_value).collect()))
        .collect()
}

fn lsu_parts<T: Elem>(a: &Matrix<T>) -> Vec<Value> {
    let f = lsu(a);
    let s: Matrix<T::Field> = f.s.to_matrix();
    vec![
        Value::Matrix(Elem::wrap(f.l)),
        Value::Matrix(<T::Field as Elem>::wrap(s)),
        Value::Matrix(Elem::wrap(f.u)),
    ]
}

fn lsuwm_parts<T: Elem>(a: &Matrix<T>) -> Vec<Value> {
    let f = lsuwmdet::<T, T::Field>(a);
    let s: Matrix<T::Field> = f.lsu.s.to_matrix();
    let det = Matrix::new(1, 1, vec![f.lsu.det.clone()]).expect("1x1");
    vec![
        Value::Matrix(Elem::wrap(f.lsu.l)),
        Value::Matrix(<T::Field as Elem>::wrap(s)),
        Value::Matrix(Elem::wrap(f.lsu.u)),
        Value::Matrix(<T::Field as Elem>::wrap(f.w)),
        Value::Matrix(<T::Field as Elem>::wrap(f.m)),
        Value::Matrix(Elem::wrap(det)),
    ]
}

fn pinv<T: Elem>(a: &Matrix<T>) -> Mat {
    <T::Field as Elem>::wrap(pseudo_inverse::<T, T::Field>(a))
}

fn bruhat_parts<T: Elem>(a: &Matrix<T>) -> Result<Vec<Value>> {
    let f = bruhat(a)?;
    let dm: Matrix<T::Field> = f.d.to_matrix();
    Ok(vec![
        Value::Matrix(Elem::wrap(f.v)),
        Value::Matrix(<T::Field as Elem>::wrap(dm)),
        Value::Matrix(Elem::wrap(f.u)),
    ])
}

fn matrix_fn(d: &Domain, name: &str, m: &Mat) -> Result<Value> {
    Ok(match name {
        "det" => with_mat!(m, a => determinant(a)?.into_value()),
        "transpose" | "conjugate" => Value::Matrix(m.transpose()),
        "adjoint" => Value::Matrix(with_mat!(m, a => Elem::wrap(adjugate(a)?))),
        "inverse" => Value::Matrix(with_mat!(m, a => Elem::wrap(inverse(&field_matrix(a))?))),
        "genInverse" => {
            Value::Matrix(with_mat!(m, a => Elem::wrap(gen_inverse(&field_matrix(a))?)))
        }
        "closure" => Value::Matrix(with_mat!(m, a => Elem::wrap(closure(&field_matrix(a))?))),
        "pseudoInverse" => Value::Matrix(with_mat!(m, a => pinv(a))),
        "kernel" => Value::List(with_mat!(m, a => columns(&kernel(&field_matrix(a))))),
        "rank" => Value::int(with_mat!(m, a => rank(a)) as i64),
        "toEchelonForm" => Value::Matrix(with_mat!(m, a => Elem::wrap(echelon_form(a).matrix))),
        "charPolynom" => {
            let x = var_poly(d, last_var(d, name)?);
            match m {
                Mat::F(a) => Value::Frac(char_poly(a, &Frac::from(x))?),
                other => Value::Poly(char_poly(&other.to_polys().expect("not fractions"), &x)?),
            }
        }
        "LSU" | "LDU" => Value::List(with_mat!(m, a => lsu_parts(a))),
        "LSUWMdet" | "LDUWMdet" => Value::List(with_mat!(m, a => lsuwm_parts(a))),
        "BruhatDecomposition" => Value::List(with_mat!(m, a => bruhat_parts(a)?)),
        "QR" => {
            let f = qr(&m.to_f64()?)?;
            Value::List(vec![f64_matrix(d, &f.q), f64_matrix(d, &f.r)])
        }
        "SVD" => {
            let f = svd(&m.to_f64()?);
            Value::List(vec![
                f64_matrix(d, &f.u),
                f64_matrix(d, &f.d),
                f64_matrix(d, &f.v),
            ])
        }
        _ => unreachable!("dispatched above"),
    })
}

fn solve_generic<T: Elem>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Value> {
    let s = solve(&field_matrix(a), &field_matrix(b))?;
    let particular = Value::Column(
        s.particular
            .column(0)
            .into_iter()
            .map(Elem::into_value)
            .collect(),
    );
    if s.is_unique() {
        Ok(particular)
    } else {
        Ok(Value::List(vec![
            particular,
            Value::List(columns(&s.kernel)),
        ]))
    }
}

fn column_values(v: Value) -> Result<Vec<Value>> {
    match v {
        Value::List(items) | Value::Column(items) => Ok(items),
        Value::Matrix(m) if m.shape().1 == 1 => {
            Ok(with_mat!(&m, a => a.column(0).into_iter().map(Elem::into_value).collect()))
        }
        Value::Matrix(m) if m.shape().0 == 1 => {
            Ok(with_mat!(&m, a => a.row(0).iter().cloned().map(Elem::into_value).collect()))
        }
        other => Err(type_error("solve", "a right-hand side vector", &other)),
    }
}

fn solve_matrix(d: &Domain, m: &Mat, b: Value) -> Result<Value> {
    let items = column_values(b)?;
    if items.iter().any(|v| ring_level(v).is_none()) {
        return Err(LangError::Type(
            "right-hand side entries must be numbers or polynomials".into(),
        ));
    }
    let level = items
        .iter()
        .filter_map(ring_level)
        .max()
        .unwrap_or(0)
        .max(m.level());
    let bm = match level {
        0 => Mat::S(Matrix::column_vector(
            items
                .iter()
                .map(|v| to_poly(v).as_constant().expect("scalar"))
                .collect(),
        )),
        1 => Mat::P(Matrix::column_vector(items.iter().map(to_poly).collect())),
        _ => Mat::F(Matrix::column_vector(items.iter().map(to_frac).collect())),
    };
    let out = match (m.lift(level), bm) {
        (Mat::S(a), Mat::S(b)) => solve_generic(&a, &b)?,
        (Mat::P(a), Mat::P(b)) => solve_generic(&a, &b)?,
        (Mat::F(a), Mat::F(b)) => solve_generic(&a, &b)?,
        _ => unreachable!("lifted to one kind"),
    };
    Ok(out.simplify(d))
}

/// `lhs - rhs` of an equation or inequality.
fn relation_poly(d: &Domain, v: &Value) -> Result<Option<(Poly, Relation)>> {
    match v {
        Value::Relation(a, r, b) => {
            let diff = binary(d, super::ast::BinOp::Sub, (**a).clone(), (**b).clone())?;
            let p = diff
                .as_poly()
                .ok_or_else(|| LangError::Type("\\solve needs polynomial equations".into()))?;
            Ok(Some((p, *r)))
        }
        _ => Ok(v.as_poly().map(|p| (p, Relation::Eq))),
    }
}

fn single_var(p: &Poly) -> Result<usize> {
    match p.variables().as_slice() {
        [v] => Ok(*v),
        [] => Err(LangError::Type(
            "\\solve found no variable to solve for".into(),
        )),
        _ => Err(PolyError::NotUnivariate.into()),
    }
}

fn solve_value(d: &Domain, v: Value) -> Result<Value> {
    match v {
        Value::List(items) | Value::Column(items) => {
            let rels = items
                .iter()
                .map(|x| relation_poly(d, x)?.ok_or_else(|| type_error("solve", "equations", x)))
                .collect::<Result<Vec<_>>>()?;
            if rels.is_empty() {
                return Err(LangError::Type(
                    "\\solve needs at least one equation".into(),
                ));
            }
            let linear = rels
                .iter()
                .all(|(p, r)| *r == Relation::Eq && p.total_degree().unwrap_or(0) <= 1);
            if linear {
                return solve_linear(d, &rels);
            }
            if rels.iter().all(|(_, r)| *r == Relation::Eq) {
                return Err(LangError::Type(
                    "\\solve handles linear systems; use \\groebner for polynomial systems".into(),
                ));
            }
            Ok(Value::Intervals(solve_inequalities(&rels)?))
        }
        other => {
            let (p, r) = relation_poly(d, &other)?
                .ok_or_else(|| type_error("solve", "an equation", &other))?;
            if r == Relation::Eq {
                let x = single_var(&p)?;
                Ok(Value::Roots(solve_univariate(&p, x)?))
            } else {
                Ok(Value::Intervals(solve_inequalities(&[(p, r)])?))
            }
        }
    }
}

/// System of linear equations; unknowns are the variables that occur, in
/// SPACE order.
fn solve_linear(d: &Domain, rels: &[(Poly, Relation)]) -> Result<Value> {
    let mut vars: Vec<usize> = rels.iter().flat_map(|(p, _)| p.variables()).collect();
    vars.sort_unstable();
    vars.dedup();
    if vars.is_empty() {
        return Err(LangError::Type(
            "\\solve found no variable to solve for".into(),
        ));
    }
    let rows: Vec<Vec<Scalar>> = rels
        .iter()
        .map(|(p, _)| {
            vars.iter()
                .map(|&v| p.coeff(&Monomial::var(v, 1)))
                .collect()
        })
        .collect();
    let rhs: Vec<Scalar> = rels
        .iter()
        .map(|(p, _)| -p.coeff(&Monomial::one()))
        .collect();
    let a = Matrix::from_rows(rows)?;
    let b = Matrix::column_vector(rhs);
    let out = match solve_generic(&a, &b)? {
        Value::Column(items) => Value::List(items),
        Value::List(mut parts) => {
            if let Value::Column(items) = parts.remove(0) {
                parts.insert(0, Value::List(items));
            }
            Value::List(parts)
        }
        other => other,
    };
    Ok(out.simplify(d))
}
