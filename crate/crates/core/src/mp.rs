//! Multiprecision helpers shared by the numerical modules.

use std::cmp::Ordering;

use rug::{Float, Integer, Rational};
use serde::Serializer;

/// Default working precision in bits.
pub const DEFAULT_PREC: u32 = 256;

/// Default guard bits used by truncation certificates.
pub const DEFAULT_GUARD_BITS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseNumberError {
    #[error("empty numeric string")]
    Empty,
    #[error("invalid number `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses `"p"`, `"p/q"`, `"1.25"`, `"-3e-2"` or `"1.5E4"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, ParseNumberError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseNumberError::Empty);
    }
    let invalid = || ParseNumberError::Invalid(s.to_string());
    if let Some((num, den)) = s.split_once('/') {
        let num: Integer = num.trim().parse().map_err(|_| invalid())?;
        let den: Integer = den.trim().parse().map_err(|_| invalid())?;
        if den == 0 {
            return Err(ParseNumberError::ZeroDenominator(s.to_string()));
        }
        return Ok(Rational::from((num, den)));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..].parse().map_err(|_| invalid())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(invalid());
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(invalid());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from(all_digits.parse::<Integer>().map_err(|_| invalid())?);
    let scale = exponent - frac_part.len() as i64;
    let ten_pow = Integer::from(Integer::u_pow_u(10, scale.unsigned_abs() as u32));
    if scale >= 0 {
        value *= ten_pow;
    } else {
        value /= ten_pow;
    }
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Parses a decimal string directly at the requested precision.
pub fn parse_float(s: &str, prec: u32) -> Result<Float, ParseNumberError> {
    let r = parse_rational(s)?;
    Ok(Float::with_val(prec, &r))
}

/// Number of significant decimal digits carried by `prec` bits.
pub fn decimal_digits(prec: u32) -> usize {
    ((prec as f64) * std::f64::consts::LOG10_2).floor().max(1.0) as usize
}

/// Deterministic decimal rendering at the float's own precision.
pub fn fmt_float(f: &Float) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    f.to_string_radix(10, Some(decimal_digits(f.prec())))
}

pub fn ser_float<S: Serializer>(f: &Float, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_float(f))
}

pub fn ser_float_vec<S: Serializer>(v: &[Float], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(fmt_float))
}

pub fn ser_opt_float<S: Serializer>(f: &Option<Float>, s: S) -> Result<S::Ok, S::Error> {
    match f {
        Some(f) => s.serialize_some(&fmt_float(f)),
        None => s.serialize_none(),
    }
}

pub fn ser_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// `2^{-bits}` at the given precision.
pub fn pow2_neg(bits: u32, prec: u32) -> Float {
    Float::with_val(prec, 1u32) >> bits
}

/// Euclidean norm of a vector of floats.
pub fn norm2(v: &[Float], prec: u32) -> Float {
    let mut acc = Float::with_val(prec, 0u32);
    for x in v {
        acc += Float::with_val(prec, x * x);
    }
    acc.sqrt()
}

/// Least squares `design · β ≈ y` through the normal equations, solved by
/// Gaussian elimination with partial pivoting at `prec` bits.
///
/// Returns `None` when the normal matrix is singular at working precision.
pub fn lstsq(design: &[Vec<Float>], y: &[Float], prec: u32) -> Option<Vec<Float>> {
    let k = design.first()?.len();
    if design.len() < k || design.len() != y.len() {
        return None;
    }
    let mut normal = vec![vec![Float::with_val(prec, 0u32); k + 1]; k];
    for (row, yi) in design.iter().zip(y) {
        for i in 0..k {
            for j in 0..k {
                normal[i][j] += Float::with_val(prec, &row[i] * &row[j]);
            }
            normal[i][k] += Float::with_val(prec, &row[i] * yi);
        }
    }
    solve_augmented(normal, prec)
}

/// Solves an augmented `k × (k+1)` system in place.
pub fn solve_augmented(mut m: Vec<Vec<Float>>, prec: u32) -> Option<Vec<Float>> {
    let k = m.len();
    for col in 0..k {
        let pivot = (col..k).max_by(|&a, &b| {
            Float::with_val(prec, m[a][col].abs_ref())
                .partial_cmp(&Float::with_val(prec, m[b][col].abs_ref()))
                .unwrap_or(Ordering::Equal)
        })?;
        if m[pivot][col].is_zero() {
            return None;
        }
        m.swap(col, pivot);
        for row in col + 1..k {
            let factor = Float::with_val(prec, &m[row][col] / &m[col][col]);
            for j in col..=k {
                let delta = Float::with_val(prec, &factor * &m[col][j]);
                m[row][j] -= delta;
            }
        }
    }
    let mut x = vec![Float::with_val(prec, 0u32); k];
    for row in (0..k).rev() {
        let mut acc = m[row][k].clone();
        for j in row + 1..k {
            acc -= Float::with_val(prec, &m[row][j] * &x[j]);
        }
        x[row] = Float::with_val(prec, &acc / &m[row][row]);
    }
    Some(x)
}

/// Ordinary least-squares line in double precision.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub rms_residual: f64,
    pub points: usize,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    Some(LinearFit {
        slope,
        intercept,
        rms_residual: (ss / nf).sqrt(),
        points: n,
    })
}

/// True if the sequence is strictly decreasing.
pub fn strictly_decreasing<T: PartialOrd>(v: &[T]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}
