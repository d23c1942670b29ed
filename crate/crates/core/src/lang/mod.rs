//! The command language: `SPACE` declarations, `\`-prefixed builtins,
//! matrix and vector literals, equations and inequalities.

pub mod ast;
mod builtins;
mod eval;
pub mod lexer;
pub mod parser;
pub mod value;

pub use eval::{Environment, Outcome, Session};
pub use lexer::{tokenize, Span, Token, TokenKind};
pub use parser::{parse_script, parse_statement, Statement, SyntaxError};
pub use value::{Mat, Sym, Value};

use thiserror::Error;

use crate::arith::ArithError;
use crate::groebner::GroebnerError;
use crate::matrix::MatrixError;
use crate::means::MeansError;
use crate::poly::PolyError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LangError {
    #[error("syntax error: {0}")]
    Syntax(SyntaxError),
    #[error("SPACE must be declared before this statement")]
    UndeclaredSpace,
    #[error("unknown function \\{0}")]
    UnknownFunction(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("\\{name} expects {expected} argument(s), got {found}")]
    ArityMismatch {
        name: String,
        expected: &'static str,
        found: usize,
    },
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("{0}")]
    ArgumentForm(String),
    #[error("{0}")]
    Type(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Means(#[from] MeansError),
    #[error(transparent)]
    Groebner(GroebnerError),
    #[error("evaluation timed out")]
    Timeout,
}

impl From<GroebnerError> for LangError {
    fn from(e: GroebnerError) -> LangError {
        match e {
            GroebnerError::Cancelled(_) => LangError::Timeout,
            other => LangError::Groebner(other),
        }
    }
}

impl LangError {
    /// Source position, for syntax errors.
    pub fn span(&self) -> Option<Span> {
        match self {
            LangError::Syntax(e) => Some(e.span),
            _ => None,
        }
    }
}
