use std::fmt;

use super::lexer::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => PREC_ADD,
            BinOp::Mul | BinOp::Div => PREC_MUL,
            BinOp::Pow => PREC_POW,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<CmpOp> {
        Some(match s {
            "<" => CmpOp::Lt,
            "<=" => CmpOp::Le,
            ">" => CmpOp::Gt,
            ">=" => CmpOp::Ge,
            "=" => CmpOp::Eq,
            _ => return None,
        })
    }
}

const PREC_CMP: u8 = 1;
const PREC_ADD: u8 = 2;
const PREC_MUL: u8 = 3;
const PREC_NEG: u8 = 4;
const PREC_POW: u8 = 5;
const PREC_ATOM: u8 = 7;

#[derive(Debug, Clone)]
pub enum ExprKind {
    /// Literal as written.
    Number(String),
    Ident(String),
    /// `\name(args)`; `bare` for a reference without brackets, like `\pi`.
    Call {
        name: String,
        args: Vec<Expr>,
        bare: bool,
    },
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    /// Postfix `°`.
    Degrees(Box<Expr>),
    /// `[a, b, …]`; nested vectors of equal length evaluate to a matrix.
    Vector(Vec<Expr>),
    /// Equation or inequality.
    Compare(CmpOp, Box<Expr>, Box<Expr>),
}

/// Expression node. Equality ignores spans, so reparsed programs compare
/// structurally.
#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Expr) -> bool {
        use ExprKind::*;
        match (&self.kind, &other.kind) {
            (Number(a), Number(b)) | (Ident(a), Ident(b)) => a == b,
            (
                Call {
                    name: a,
                    args: x,
                    bare: p,
                },
                Call {
                    name: b,
                    args: y,
                    bare: q,
                },
            ) => a == b && x == y && p == q,
            (Binary(o, a, b), Binary(p, c, d)) => o == p && a == c && b == d,
            (Neg(a), Neg(b)) | (Degrees(a), Degrees(b)) => a == b,
            (Vector(a), Vector(b)) => a == b,
            (Compare(o, a, b), Compare(p, c, d)) => o == p && a == c && b == d,
            _ => false,
        }
    }
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Expr {
        Expr { kind, span }
    }

    fn precedence(&self) -> u8 {
        match &self.kind {
            ExprKind::Binary(op, ..) => op.precedence(),
            ExprKind::Neg(_) => PREC_NEG,
            ExprKind::Compare(..) => PREC_CMP,
            _ => PREC_ATOM,
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Number(n) => f.write_str(n),
            ExprKind::Ident(n) => f.write_str(n),
            ExprKind::Call { name, args, bare } => {
                write!(f, "\\{name}")?;
                if !*bare {
                    f.write_str("(")?;
                    write_list(f, args)?;
                    f.write_str(")")?;
                }
                Ok(())
            }
            ExprKind::Binary(op, a, b) => {
                let p = op.precedence();
                // `^` is right associative, the others left associative.
                let (lmin, rmin) = if *op == BinOp::Pow {
                    (p + 1, p - 1)
                } else {
                    (p, p + 1)
                };
                a.write_child(f, lmin)?;
                f.write_str(op.symbol())?;
                b.write_child(f, rmin)
            }
            ExprKind::Neg(a) => {
                f.write_str("-")?;
                a.write_child(f, PREC_NEG)
            }
            ExprKind::Degrees(a) => {
                a.write_child(f, PREC_ATOM)?;
                f.write_str("°")
            }
            ExprKind::Vector(items) => {
                f.write_str("[")?;
                write_list(f, items)?;
                f.write_str("]")
            }
            ExprKind::Compare(op, a, b) => {
                a.write_child(f, PREC_ADD)?;
                write!(f, " {} ", op.symbol())?;
                b.write_child(f, PREC_ADD)
            }
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[Expr]) -> fmt::Result {
    for (i, e) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{e}")?;
    }
    Ok(())
}

/// Environment constants that may be assigned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constant {
    FloatPos,
    Mod,
    Mod32,
}

impl Constant {
    pub fn name(self) -> &'static str {
        match self {
            Constant::FloatPos => "FLOATPOS",
            Constant::Mod => "MOD",
            Constant::Mod32 => "MOD32",
        }
    }

    pub fn from_name(s: &str) -> Option<Constant> {
        Some(match s {
            "FLOATPOS" => Constant::FloatPos,
            "MOD" => Constant::Mod,
            "MOD32" => Constant::Mod32,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    /// `SPACE = KIND[v1, v2, …]`
    Space {
        kind: String,
        vars: Vec<String>,
    },
    /// `FLOATPOS = …`, `MOD = …`, `MOD32 = …`
    SetConstant(Constant, Expr),
    Assign(String, Expr),
    Expr(Expr),
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Space { kind, vars } => write!(f, "SPACE = {kind}[{}]", vars.join(", ")),
            Stmt::SetConstant(c, e) => write!(f, "{} = {e}", c.name()),
            Stmt::Assign(n, e) => write!(f, "{n} = {e}"),
            Stmt::Expr(e) => write!(f, "{e}"),
        }
    }
}
