use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::bigfloat::{precision_for_places, BigFloat};
use super::modint::{check_prime_modulus, ModInt, DEFAULT_MODULUS, MOD32_BOUND, MOD_BOUND};
use super::scalar::Scalar;
use super::ArithError;

/// Default number of displayed decimals.
pub const DEFAULT_FLOATPOS: u32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DomainKind {
    Z,
    Q,
    Zp,
    Zp32,
    R64,
    R,
}

impl DomainKind {
    pub fn is_exact(self) -> bool {
        matches!(
            self,
            DomainKind::Z | DomainKind::Q | DomainKind::Zp | DomainKind::Zp32
        )
    }

    pub fn is_modular(self) -> bool {
        matches!(self, DomainKind::Zp | DomainKind::Zp32)
    }

    pub fn is_float(self) -> bool {
        matches!(self, DomainKind::R64 | DomainKind::R)
    }

    pub fn name(self) -> &'static str {
        match self {
            DomainKind::Z => "Z",
            DomainKind::Q => "Q",
            DomainKind::Zp => "Zp",
            DomainKind::Zp32 => "Zp32",
            DomainKind::R64 => "R64",
            DomainKind::R => "R",
        }
    }

    pub fn modulus_bound(self) -> u64 {
        match self {
            DomainKind::Zp32 => MOD32_BOUND,
            _ => MOD_BOUND,
        }
    }
}

impl FromStr for DomainKind {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "Z" => DomainKind::Z,
            "Q" => DomainKind::Q,
            "Zp" => DomainKind::Zp,
            "Zp32" => DomainKind::Zp32,
            "R64" => DomainKind::R64,
            "R" => DomainKind::R,
            other => return Err(ArithError::UnknownDomain(other.to_string())),
        })
    }
}

/// A coefficient space together with its ordered variable list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domain {
    kind: DomainKind,
    variables: Vec<String>,
    floatpos: u32,
    modulus: Option<u64>,
}

impl Domain {
    pub fn new(kind: DomainKind, variables: Vec<String>) -> Result<Domain, ArithError> {
        for (i, v) in variables.iter().enumerate() {
            if variables[..i].contains(v) {
                return Err(ArithError::DuplicateVariable(v.clone()));
            }
        }
        Ok(Domain {
            kind,
            variables,
            floatpos: DEFAULT_FLOATPOS,
            modulus: kind.is_modular().then_some(DEFAULT_MODULUS),
        })
    }

    /// Shorthand for tests and examples: `Domain::parse_decl("Z[a, b, x]")`.
    pub fn parse_decl(decl: &str) -> Result<Domain, ArithError> {
        let bad = || ArithError::Parse(decl.to_string());
        let open = decl.find('[').ok_or_else(bad)?;
        let close = decl.rfind(']').ok_or_else(bad)?;
        let kind: DomainKind = decl[..open].trim().parse()?;
        let vars = decl[open + 1..close]
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect();
        Domain::new(kind, vars)
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    pub fn floatpos(&self) -> u32 {
        self.floatpos
    }

    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }

    pub fn with_floatpos(mut self, floatpos: u32) -> Domain {
        self.floatpos = floatpos;
        self
    }

    pub fn with_modulus(mut self, p: u64) -> Result<Domain, ArithError> {
        if !self.kind.is_modular() {
            return Err(ArithError::IncompatibleDomains {
                from: "modulus".into(),
                to: self.kind.name().into(),
            });
        }
        self.modulus = Some(check_prime_modulus(p, self.kind.modulus_bound())?);
        Ok(self)
    }

    /// Binary precision used for `R` at the current `FLOATPOS`.
    pub fn precision_bits(&self) -> u32 {
        precision_for_places(self.floatpos)
    }

    pub fn from_integer(&self, v: BigInt) -> Scalar {
        self.coerce(&Scalar::Int(v))
            .expect("integers embed in every domain")
    }

    /// Number literal (`7`, `0.5`, `9.80665`, `1e-3`) read into this domain.
    /// Exact domains read decimals as exact rationals.
    pub fn parse_number(&self, text: &str) -> Result<Scalar, ArithError> {
        match self.kind {
            DomainKind::R64 => text
                .parse::<f64>()
                .map(Scalar::F64)
                .map_err(|_| ArithError::Parse(text.into())),
            DomainKind::R => Ok(Scalar::Big(BigFloat::parse(text, self.precision_bits())?)),
            _ => {
                let exact = parse_decimal_rational(text)?;
                self.coerce(&Scalar::from_rational(exact))
            }
        }
    }

    /// Moves a scalar into this domain along Z→Q→R64/R and Z/Q→Zp.
    pub fn coerce(&self, x: &Scalar) -> Result<Scalar, ArithError> {
        let incompatible = |from: &str| ArithError::IncompatibleDomains {
            from: from.into(),
            to: self.kind.name().into(),
        };
        match (self.kind, x) {
            (DomainKind::Z, Scalar::Int(_)) => Ok(x.clone()),
            (DomainKind::Z, Scalar::Rat(_)) => Err(incompatible("Q")),
            (DomainKind::Q, Scalar::Int(_) | Scalar::Rat(_)) => Ok(x.clone()),
            (DomainKind::Zp | DomainKind::Zp32, Scalar::Int(i)) => {
                let p = self.modulus.unwrap_or(DEFAULT_MODULUS);
                let m = BigInt::from(p);
                let r = ((i % &m) + &m) % &m;
                Ok(Scalar::Mod(ModInt::from_u64(
                    u64::try_from(r).expect("residue below modulus"),
                    p,
                )))
            }
            (DomainKind::Zp | DomainKind::Zp32, Scalar::Rat(r)) => {
                let n = self.coerce(&Scalar::Int(r.numer().clone()))?;
                let d = self.coerce(&Scalar::Int(r.denom().clone()))?;
                n.checked_div(&d)
            }
            (DomainKind::Zp | DomainKind::Zp32, Scalar::Mod(m))
                if Some(m.modulus()) == self.modulus =>
            {
                Ok(x.clone())
            }
            (DomainKind::R64, Scalar::Int(_) | Scalar::Rat(_) | Scalar::F64(_)) => {
                Ok(Scalar::F64(x.to_f64()))
            }
            (DomainKind::R64, Scalar::Big(b)) => Ok(Scalar::F64(b.to_f64())),
            (DomainKind::R, Scalar::Int(_) | Scalar::Rat(_) | Scalar::F64(_) | Scalar::Big(_)) => {
                let p = self.precision_bits();
                Ok(Scalar::Big(match x {
                    Scalar::Int(i) => BigFloat::from_bigint(i, p),
                    Scalar::Rat(r) => BigFloat::from_ratio(r.numer(), r.denom(), p)?,
                    Scalar::F64(f) => BigFloat::from_f64(*f, p)?,
                    Scalar::Big(b) => b.with_precision(p),
                    Scalar::Mod(_) => unreachable!(),
                }))
            }
            (_, Scalar::Mod(_)) => Err(incompatible("Zp")),
            (_, Scalar::F64(_) | Scalar::Big(_)) => Err(incompatible("R")),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.kind.name(), self.variables.join(", "))
    }
}

/// Exact value of a decimal literal.
pub fn parse_decimal_rational(text: &str) -> Result<BigRational, ArithError> {
    let bad = || ArithError::Parse(text.to_string());
    let s = text.trim();
    let (neg, s) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (body, exp10) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if (int_part.is_empty() && frac_part.is_empty())
        || !int_part
            .chars()
            .chain(frac_part.chars())
            .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let mut n: BigInt = format!("{int_part}{frac_part}")
        .parse()
        .map_err(|_| bad())?;
    if neg {
        n = -n;
    }
    let scale = exp10 - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        BigRational::from_integer(n * ten.pow(scale as u32))
    } else {
        BigRational::new(n, ten.pow((-scale) as u32))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coerce_examples() {
        let q = Domain::new(DomainKind::Q, vec![]).unwrap();
        let seven = q.coerce(&Scalar::int(7)).unwrap();
        assert_eq!(
            seven.as_rational().unwrap(),
            BigRational::from_integer(7.into())
        );

        let z5 = Domain::new(DomainKind::Zp32, vec![])
            .unwrap()
            .with_modulus(5)
            .unwrap();
        assert_eq!(z5.coerce(&Scalar::int(-3)).unwrap().to_string(), "2");

        let z7 = Domain::new(DomainKind::Zp32, vec![])
            .unwrap()
            .with_modulus(7)
            .unwrap();
        let third = Scalar::ratio(1, 3).unwrap();
        assert_eq!(z7.coerce(&third).unwrap().to_string(), "5");
    }

    #[test]
    fn no_demotion() {
        let q = Domain::new(DomainKind::Q, vec![]).unwrap();
        assert!(matches!(
            q.coerce(&Scalar::F64(0.5)),
            Err(ArithError::IncompatibleDomains { .. })
        ));
        let z = Domain::new(DomainKind::Z, vec![]).unwrap();
        assert!(z.coerce(&Scalar::ratio(1, 2).unwrap()).is_err());
    }

    #[test]
    fn declarations() {
        let d = Domain::parse_decl("Z[a, b, c, x]").unwrap();
        assert_eq!(d.variables().len(), 4);
        assert_eq!(d.var_index("x"), Some(3));
        assert!(Domain::parse_decl("Z[x, x]").is_err());
        let zp = Domain::parse_decl("Zp32[x]").unwrap();
        assert_eq!(zp.modulus(), Some(268_435_399));
        assert!(zp.clone().with_modulus(6).is_err());
        assert!(zp.with_modulus(2_147_483_659).is_err());
    }

    #[test]
    fn decimal_literals() {
        assert_eq!(
            parse_decimal_rational("0.5").unwrap(),
            BigRational::new(1.into(), 2.into())
        );
        assert_eq!(
            parse_decimal_rational("9.80665").unwrap(),
            BigRational::new(980665.into(), 100000.into())
        );
        assert!(parse_decimal_rational(".").is_err());
    }
}
