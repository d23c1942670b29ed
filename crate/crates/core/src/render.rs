//! Text and LaTeX rendering shared by every value type.

use crate::arith::Scalar;

/// Names for variable indices and the number of decimals for floats.
#[derive(Debug, Clone, Copy)]
pub struct Style<'a> {
    pub vars: &'a [String],
    pub floatpos: u32,
}

impl<'a> Style<'a> {
    pub fn new(vars: &'a [String], floatpos: u32) -> Self {
        Style { vars, floatpos }
    }

    pub fn var_name(&self, i: usize) -> String {
        self.vars.get(i).cloned().unwrap_or_else(|| format!("v{i}"))
    }
}

pub trait Render {
    fn text(&self, st: &Style) -> String;
    fn latex(&self, st: &Style) -> String;
}

impl Render for Scalar {
    fn text(&self, st: &Style) -> String {
        self.format_places(st.floatpos)
    }

    fn latex(&self, st: &Style) -> String {
        match self {
            Scalar::Rat(r) => {
                let sign = if r.numer().sign() == num_bigint::Sign::Minus {
                    "-"
                } else {
                    ""
                };
                format!("{sign}\\frac{{{}}}{{{}}}", r.numer().magnitude(), r.denom())
            }
            other => other.format_places(st.floatpos),
        }
    }
}

/// Joins signed term strings: `["a", "-b", "c"]` becomes `a-b+c`.
pub(crate) fn join_terms(parts: impl IntoIterator<Item = String>) -> String {
    let mut out = String::new();
    for (i, p) in parts.into_iter().enumerate() {
        if i > 0 && !p.starts_with('-') {
            out.push('+');
        }
        out.push_str(&p);
    }
    out
}
