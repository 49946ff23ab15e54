//! Whitelisted weights for the substitution and weighted-tail checks.
//!
//! The hypotheses "bₙ is subpolynomial" and "y g'(y) = o(y^p) for all p" cannot
//! be checked on arbitrary callbacks, so only closed forms known to satisfy
//! them are accepted.

use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Float, Rational};

use super::SeriesError;
use crate::mp::parse_rational;

/// Subpolynomial sequences `bₙ ≥ 0`: `bₙ / n^p → 0` for every `p > 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum SubpolyWeight {
    /// `bₙ = 1`.
    One,
    /// `bₙ = (log(n + shift))^k` with `shift ≥ 1`.
    LogPower { k: u32, shift: u32 },
    /// A bounded periodic pattern of non-negative rationals.
    Periodic(Vec<Rational>),
}

impl SubpolyWeight {
    pub fn eval(&self, n: usize, prec: u32) -> Float {
        match self {
            Self::One => Float::with_val(prec, 1u32),
            Self::LogPower { k, shift } => {
                let l = Float::with_val(prec, n as u64 + *shift as u64).ln();
                l.pow(*k)
            }
            Self::Periodic(values) => Float::with_val(prec, &values[n % values.len()]),
        }
    }
}

impl fmt::Display for SubpolyWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::One => write!(f, "1"),
            Self::LogPower { k: 1, shift } => write!(f, "log(n+{shift})"),
            Self::LogPower { k, shift } => write!(f, "log(n+{shift})^{k}"),
            Self::Periodic(v) => {
                let parts: Vec<String> = v.iter().map(|r| r.to_string()).collect();
                write!(f, "periodic:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for SubpolyWeight {
    type Err = SeriesError;

    /// Accepts `1`, `log(n+S)`, `log(n+S)^K` and `periodic:v0,v1,..`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let reject = || SeriesError::NotWhitelisted(s.to_string());
        if s == "1" {
            return Ok(Self::One);
        }
        if let Some(rest) = s.strip_prefix("periodic:") {
            let values = rest
                .split(',')
                .map(|v| parse_rational(v).map_err(|_| reject()))
                .collect::<Result<Vec<_>, _>>()?;
            if values.is_empty() || values.iter().any(|v| *v < 0) {
                return Err(reject());
            }
            return Ok(Self::Periodic(values));
        }
        if let Some(rest) = s.strip_prefix("log(n+") {
            let (shift, tail) = rest.split_once(')').ok_or_else(reject)?;
            let shift: u32 = shift.trim().parse().map_err(|_| reject())?;
            if shift == 0 {
                return Err(reject());
            }
            let k = match tail {
                "" => 1,
                t => t
                    .strip_prefix('^')
                    .and_then(|k| k.parse().ok())
                    .ok_or_else(reject)?,
            };
            return Ok(Self::LogPower { k, shift });
        }
        Err(reject())
    }
}

/// Slowly varying functions `g` with `y g'(y) = o(y^p)` for every `p > 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum SlowlyVarying {
    Constant(Rational),
    /// `(log y)^k`.
    LogPower(u32),
    /// `log log y`.
    LogLog,
}

impl SlowlyVarying {
    pub fn eval(&self, y: &Float, prec: u32) -> Float {
        match self {
            Self::Constant(c) => Float::with_val(prec, c),
            Self::LogPower(k) => Float::with_val(prec, y.ln_ref()).pow(*k),
            Self::LogLog => Float::with_val(prec, y.ln_ref()).ln(),
        }
    }

    /// First integer argument at which the function is finite.
    pub fn first_index(&self) -> usize {
        match self {
            Self::Constant(_) => 0,
            Self::LogPower(_) => 1,
            Self::LogLog => 2,
        }
    }
}

impl fmt::Display for SlowlyVarying {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => write!(f, "const:{c}"),
            Self::LogPower(1) => write!(f, "log"),
            Self::LogPower(k) => write!(f, "log^{k}"),
            Self::LogLog => write!(f, "loglog"),
        }
    }
}

impl FromStr for SlowlyVarying {
    type Err = SeriesError;

    /// Accepts `const:c`, `log`, `log^k` and `loglog`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let reject = || SeriesError::NotWhitelisted(s.to_string());
        match s {
            "log" => Ok(Self::LogPower(1)),
            "loglog" => Ok(Self::LogLog),
            _ => {
                if let Some(c) = s.strip_prefix("const:") {
                    return parse_rational(c).map(Self::Constant).map_err(|_| reject());
                }
                if let Some(k) = s.strip_prefix("log^") {
                    return k.parse().map(Self::LogPower).map_err(|_| reject());
                }
                Err(reject())
            }
        }
    }
}
