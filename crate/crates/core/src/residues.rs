//! Residue classes `a(n) = a + nZ` and finite systems of them.
//!
//! Residues and moduli are arbitrary-precision integers; reciprocal sums
//! are exact rationals. A class is stored canonically with
//! `0 <= a < n`, so two classes are equal exactly when they are equal as
//! subsets of the integers.
//!
//! Systems are plain finite lists (order preserved, duplicates allowed):
//! the covering multiplicity of a system counts class slots, not distinct
//! classes, so `{0(2), 0(2)}` covers every even integer twice.
//!
//! # Text format
//!
//! One class per line, `<a> mod <n>`, ASCII, whitespace separated. Blank
//! lines are skipped and lines starting with `#` are comments:
//!
//! ```text
//! # the classic five-modulus cover
//! 0 mod 2
//! 0 mod 3
//! 1 mod 4
//! 5 mod 6
//! 7 mod 12
//! ```
//!
//! A JSON alternative is accepted: `{"classes": [{"a": 0, "n": 2}, ...]}`
//! where `a` and `n` may be JSON integers or decimal strings (strings
//! admit values beyond 64 bits). Both parsers accept non-canonical
//! residues and canonicalize.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational type used for reciprocal sums.
pub type Rational = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ResidueError {
    #[error("modulus must be a positive integer")]
    NonPositiveModulus,
    #[error("a residue system needs at least one class")]
    EmptySystem,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// The arithmetic progression `a + nZ`, stored with `0 <= a < n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResidueClass {
    residue: BigInt,
    modulus: BigInt,
}

impl ResidueClass {
    /// Builds `a(n)`, canonicalizing `a` into `0..n`. Any integer
    /// representative is accepted; `n` must be positive.
    pub fn new(a: impl Into<BigInt>, n: impl Into<BigInt>) -> Result<Self, ResidueError> {
        let modulus = n.into();
        if !modulus.is_positive() {
            return Err(ResidueError::NonPositiveModulus);
        }
        let residue = a.into().mod_floor(&modulus);
        Ok(ResidueClass { residue, modulus })
    }

    pub fn residue(&self) -> &BigInt {
        &self.residue
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    /// Does this class contain `x`?
    pub fn covers(&self, x: &BigInt) -> bool {
        (x - &self.residue).mod_floor(&self.modulus).is_zero()
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.residue, self.modulus)
    }
}

/// A finite list of residue classes `a_1(n_1), ..., a_k(n_k)`, `k >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResidueSystem {
    classes: Vec<ResidueClass>,
}

impl ResidueSystem {
    pub fn new(classes: Vec<ResidueClass>) -> Result<Self, ResidueError> {
        if classes.is_empty() {
            return Err(ResidueError::EmptySystem);
        }
        Ok(ResidueSystem { classes })
    }

    /// Convenience constructor from `(a, n)` pairs.
    pub fn from_pairs(pairs: &[(i64, i64)]) -> Result<Self, ResidueError> {
        let classes = pairs
            .iter()
            .map(|&(a, n)| ResidueClass::new(a, n))
            .collect::<Result<Vec<_>, _>>()?;
        ResidueSystem::new(classes)
    }

    pub fn classes(&self) -> &[ResidueClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        // An invariant, not a query: construction rejects empty systems.
        false
    }

    /// Covering multiplicity `w(x)`: how many class slots contain `x`.
    pub fn multiplicity(&self, x: &BigInt) -> u64 {
        self.classes.iter().filter(|c| c.covers(x)).count() as u64
    }

    /// Least common multiple of the moduli; the covering multiplicity is
    /// periodic with this period.
    pub fn lcm_modulus(&self) -> BigInt {
        self.classes
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(&c.modulus))
    }

    /// Exact value of `1/n_1 + ... + 1/n_k`.
    pub fn reciprocal_sum(&self) -> Rational {
        self.classes
            .iter()
            .map(|c| Rational::new(BigInt::one(), c.modulus.clone()))
            .fold(Rational::zero(), |acc, r| acc + r)
    }

    /// Parses either the line-oriented text format or the JSON object
    /// format, sniffing by the first non-whitespace byte.
    pub fn parse(input: &str) -> Result<Self, ResidueError> {
        match input.trim_start().as_bytes().first() {
            Some(b'{') => Self::parse_json(input),
            _ => Self::parse_text(input),
        }
    }

    /// Parses the `<a> mod <n>` line format.
    pub fn parse_text(input: &str) -> Result<Self, ResidueError> {
        let mut classes = Vec::new();
        for (idx, raw) in input.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = trimmed.split_whitespace().collect();
            let (a, n) = match tokens.as_slice() {
                [a, kw, n] if kw.eq_ignore_ascii_case("mod") => (*a, *n),
                _ => {
                    return Err(ResidueError::Parse {
                        line,
                        msg: format!("expected `<a> mod <n>`, got `{trimmed}`"),
                    })
                }
            };
            let a = parse_bigint(a).ok_or_else(|| ResidueError::Parse {
                line,
                msg: format!("bad residue `{a}`"),
            })?;
            let n = parse_bigint(n).ok_or_else(|| ResidueError::Parse {
                line,
                msg: format!("bad modulus `{n}`"),
            })?;
            classes.push(ResidueClass::new(a, n).map_err(|e| ResidueError::Parse {
                line,
                msg: e.to_string(),
            })?);
        }
        ResidueSystem::new(classes)
    }

    /// Parses `{"classes": [{"a": ..., "n": ...}, ...]}`.
    pub fn parse_json(input: &str) -> Result<Self, ResidueError> {
        let parse_err = |msg: String| ResidueError::Parse { line: 0, msg };
        let value: serde_json::Value = serde_json::from_str(input)
            .map_err(|e| parse_err(format!("invalid JSON: {e}")))?;
        let classes_json = value
            .get("classes")
            .and_then(|v| v.as_array())
            .ok_or_else(|| parse_err("missing `classes` array".into()))?;
        let mut classes = Vec::new();
        for (i, entry) in classes_json.iter().enumerate() {
            let field = |name: &str| -> Result<BigInt, ResidueError> {
                let v = entry
                    .get(name)
                    .ok_or_else(|| parse_err(format!("class {i}: missing `{name}`")))?;
                json_bigint(v)
                    .ok_or_else(|| parse_err(format!("class {i}: `{name}` is not an integer")))
            };
            let a = field("a")?;
            let n = field("n")?;
            classes.push(
                ResidueClass::new(a, n).map_err(|e| parse_err(format!("class {i}: {e}")))?,
            );
        }
        ResidueSystem::new(classes)
    }
}

impl fmt::Display for ResidueSystem {
    /// Renders the text format (one `a mod n` line per class).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.classes.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

fn parse_bigint(token: &str) -> Option<BigInt> {
    BigInt::from_str(token).ok()
}

/// JSON integers and decimal strings both denote integers; strings are
/// the escape hatch for values beyond 64 bits.
fn json_bigint(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Some(BigInt::from(i))
            } else {
                n.as_u64().map(BigInt::from)
            }
        }
        serde_json::Value::String(s) => parse_bigint(s.trim()),
        _ => None,
    }
}
