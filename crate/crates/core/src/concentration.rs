//! Measuring how the summands of `I(x) = Σ aₙxⁿ` concentrate near `n ≈ f(x)`.
//!
//! The window is `n_±(x) = ⌊f(x)(1 ± C x^{-ν})⌋`. Head and tail masses outside
//! it are compared with `I(x)` along a grid of `x`, and the decay of those
//! ratios is fitted against `e^{-α x^β}`. Verdicts are trend classifications
//! on a finite grid and never certify an asymptotic statement.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::mp::{self, ser_float, ser_float_vec, ser_opt_float};
use crate::series::{
    evaluate, CoefficientOracle, FnOracle, SeriesError, SeriesEvaluation, SubpolyWeight,
    TruncationPolicy,
};

/// Ratios at or above this level are treated as pre-asymptotic in fits.
pub const FIT_RATIO_CEILING: f64 = 1e-2;
/// Fewest usable points for an `(α, β)` fit.
pub const MIN_FIT_POINTS: usize = 4;
/// Fewest grid points accepted by [`measure`].
pub const MIN_GRID_POINTS: usize = 4;
/// Largest RMS residual of `log(-log ratio)` accepted as an exponential fit.
pub const FIT_RMS_MAX: f64 = 0.25;
/// Exponents used by the `x^p · ratio → 0` trend test.
pub const DEFAULT_P_LIST: [u32; 4] = [1, 2, 4, 8];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConcentrationError {
    #[error("location polynomial needs degree at least 1 and a positive leading coefficient")]
    BadLocation,
    #[error("window parameters must be positive")]
    NonPositiveWindow,
    #[error(
        "grid must be strictly increasing and positive with at least {min} points, got {found}"
    )]
    BadGrid { min: usize, found: usize },
    #[error("every head and tail ratio vanishes: the window swallows the whole series")]
    Degenerate,
    #[error("invalid grid spec `{0}`; expected lo:hi:geomN or lo:hi:linN")]
    BadGridSpec(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Real polynomial `f(x) = Σ cᵢ xⁱ` with positive leading coefficient.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocationPolynomial {
    /// Ascending coefficients; the last one is positive.
    #[serde(serialize_with = "ser_float_vec")]
    coeffs: Vec<Float>,
}

impl LocationPolynomial {
    pub fn new(mut coeffs: Vec<Float>) -> Result<Self, ConcentrationError> {
        while coeffs.last().is_some_and(Float::is_zero) {
            coeffs.pop();
        }
        if coeffs.len() < 2 || *coeffs.last().expect("non-empty") <= 0 {
            return Err(ConcentrationError::BadLocation);
        }
        Ok(Self { coeffs })
    }

    /// `f(x) = c·x`.
    pub fn linear(c: Float) -> Self {
        Self::new(vec![Float::with_val(c.prec(), 0u32), c]).expect("positive slope required")
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `c_d`.
    pub fn leading(&self) -> &Float {
        self.coeffs.last().expect("non-empty")
    }

    pub fn coefficients(&self) -> &[Float] {
        &self.coeffs
    }

    /// Horner evaluation at `prec` bits.
    pub fn eval(&self, x: &Float, prec: u32) -> Float {
        let mut acc = Float::with_val(prec, 0u32);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }
}

impl fmt::Display for LocationPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let c = c.to_string_radix(10, Some(12));
            parts.push(match i {
                0 => c,
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// True iff `f` and `g` have equal degree and equal leading coefficient.
pub fn location_equivalence(f: &LocationPolynomial, g: &LocationPolynomial) -> bool {
    f.degree() == g.degree() && f.leading() == g.leading()
}

#[derive(Debug, Clone)]
pub struct ConcentrationConfig {
    pub location: LocationPolynomial,
    pub window_c: Float,
    pub window_nu: Float,
    pub claimed_alpha: Option<Float>,
    pub claimed_beta: Option<Float>,
    pub policy: TruncationPolicy,
    pub warnings: Vec<String>,
}

impl ConcentrationConfig {
    pub fn new(
        location: LocationPolynomial,
        window_c: Float,
        window_nu: Float,
        policy: TruncationPolicy,
    ) -> Result<Self, ConcentrationError> {
        if window_c <= 0 || window_nu <= 0 {
            return Err(ConcentrationError::NonPositiveWindow);
        }
        let mut warnings = Vec::new();
        if window_nu > location.degree() as u32 {
            warnings.push(format!(
                "window exponent {} exceeds deg f = {}; no series can concentrate in such a window",
                mp::fmt_float(&window_nu),
                location.degree()
            ));
        }
        Ok(Self {
            location,
            window_c,
            window_nu,
            claimed_alpha: None,
            claimed_beta: None,
            policy,
            warnings,
        })
    }

    pub fn prec(&self) -> u32 {
        self.policy.prec
    }

    /// `(n_-(x), n_+(x))` with exact floors of high-precision values.
    pub fn window(&self, x: &Float) -> (i64, i64) {
        let prec = self.prec();
        let fx = self.location.eval(x, prec);
        let shrink = Float::with_val(prec, x.pow(&Float::with_val(prec, -&self.window_nu)));
        let width = Float::with_val(prec, &self.window_c * &shrink);
        let lo = Float::with_val(prec, &fx * Float::with_val(prec, 1u32 - &width));
        let hi = Float::with_val(prec, &fx * Float::with_val(prec, 1u32 + &width));
        (floor_i64(&lo), floor_i64(&hi))
    }
}

fn floor_i64(v: &Float) -> i64 {
    v.to_integer_round(rug::float::Round::Down)
        .and_then(|(i, _)| i.to_i64())
        .expect("window bound fits in i64")
}

/// Result of [`window_transform`].
#[derive(Debug, Clone)]
pub struct WindowTransform {
    pub config: ConcentrationConfig,
    /// Whether concentration in the old window implies it in the new one
    /// (`C' ≥ C` and `0 < ν' ≤ ν`).
    pub inherited: bool,
}

pub fn window_transform(
    config: &ConcentrationConfig,
    new_c: Float,
    new_nu: Float,
) -> Result<WindowTransform, ConcentrationError> {
    if new_c <= 0 || new_nu <= 0 {
        return Err(ConcentrationError::NonPositiveWindow);
    }
    let inherited = new_c >= config.window_c && new_nu <= config.window_nu;
    let mut next = ConcentrationConfig::new(
        config.location.clone(),
        new_c,
        new_nu,
        config.policy.clone(),
    )?;
    next.claimed_alpha = config.claimed_alpha.clone();
    next.claimed_beta = config.claimed_beta.clone();
    Ok(WindowTransform {
        config: next,
        inherited,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GridRecord {
    #[serde(serialize_with = "ser_float")]
    pub x: Float,
    pub n_minus: i64,
    pub n_plus: i64,
    #[serde(serialize_with = "ser_float")]
    pub head_ratio: Float,
    #[serde(serialize_with = "ser_float")]
    pub tail_ratio: Float,
    pub peak_index: usize,
    pub peak_in_window: bool,
    #[serde(serialize_with = "ser_float")]
    pub truncation_bound: Float,
}

/// Head and tail ratios of one evaluation under `config`'s window.
pub fn window_record(ev: &SeriesEvaluation, config: &ConcentrationConfig) -> GridRecord {
    let prec = config.prec();
    let (n_minus, n_plus) = config.window(&ev.x);
    let head = Float::with_val(prec, ev.head_mass(n_minus) / &ev.total);
    let tail = Float::with_val(prec, ev.tail_mass(n_plus) / &ev.total);
    let peak = ev.peak_index as i64;
    GridRecord {
        x: ev.x.clone(),
        n_minus,
        n_plus,
        head_ratio: head,
        tail_ratio: tail,
        peak_index: ev.peak_index,
        peak_in_window: n_minus < peak && peak < n_plus,
        truncation_bound: ev.truncation_bound.clone(),
    }
}

/// Fit of `-log(ratio) ≈ α x^β` on points with `0 < ratio < 10⁻²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpFit {
    pub alpha: f64,
    pub beta: f64,
    pub rms_residual: f64,
    pub points: usize,
}

pub fn fit_exponential(xs: &[Float], ratios: &[Float]) -> Option<ExpFit> {
    let (lx, ly): (Vec<f64>, Vec<f64>) = xs
        .iter()
        .zip(ratios)
        .filter(|(_, r)| **r > 0 && **r < FIT_RATIO_CEILING)
        .map(|(x, r)| {
            let neg_log = -Float::with_val(r.prec(), r.ln_ref());
            (
                Float::with_val(x.prec(), x.ln_ref()).to_f64(),
                neg_log.ln().to_f64(),
            )
        })
        .unzip();
    if lx.len() < MIN_FIT_POINTS {
        return None;
    }
    let fit = mp::linear_fit(&lx, &ly)?;
    Some(ExpFit {
        alpha: fit.intercept.exp(),
        beta: fit.slope,
        rms_residual: fit.rms_residual,
        points: fit.points,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ConsistentWithExponential,
    ConsistentWithSuperpolynomialOnly,
    Inconsistent,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::ConsistentWithExponential => "consistent-with-exponential",
            Self::ConsistentWithSuperpolynomialOnly => "consistent-with-superpolynomial-only",
            Self::Inconsistent => "inconsistent",
            Self::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConcentrationReport {
    pub schema: &'static str,
    pub oracle: String,
    pub location: String,
    #[serde(serialize_with = "ser_float")]
    pub window_c: Float,
    #[serde(serialize_with = "ser_float")]
    pub window_nu: Float,
    pub records: Vec<GridRecord>,
    pub head_fit: Option<ExpFit>,
    pub tail_fit: Option<ExpFit>,
    #[serde(serialize_with = "ser_opt_float")]
    pub claimed_alpha: Option<Float>,
    #[serde(serialize_with = "ser_opt_float")]
    pub claimed_beta: Option<Float>,
    /// First grid point from which every peak lies strictly inside its window.
    #[serde(serialize_with = "ser_opt_float")]
    pub peak_window_onset: Option<Float>,
    pub verdict: Verdict,
    pub warnings: Vec<String>,
}

impl ConcentrationReport {
    pub fn head_ratios(&self) -> Vec<Float> {
        self.records.iter().map(|r| r.head_ratio.clone()).collect()
    }

    pub fn tail_ratios(&self) -> Vec<Float> {
        self.records.iter().map(|r| r.tail_ratio.clone()).collect()
    }

    /// CSV `x,n_minus,n_plus,head_ratio,tail_ratio` followed by `#` footer
    /// lines with the fits and the verdict.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,n_minus,n_plus,head_ratio,tail_ratio\n");
        for r in &self.records {
            writeln!(
                out,
                "{},{},{},{},{}",
                mp::fmt_float(&r.x),
                r.n_minus,
                r.n_plus,
                mp::fmt_float(&r.head_ratio),
                mp::fmt_float(&r.tail_ratio)
            )
            .expect("string write");
        }
        for (side, fit) in [("head", &self.head_fit), ("tail", &self.tail_fit)] {
            match fit {
                Some(f) => writeln!(
                    out,
                    "# {side}_fit alpha={:.6e} beta={:.6} rms={:.3e} points={}",
                    f.alpha, f.beta, f.rms_residual, f.points
                ),
                None => writeln!(out, "# {side}_fit none"),
            }
            .expect("string write");
        }
        writeln!(out, "# verdict {}", self.verdict).expect("string write");
        out
    }
}

fn check_grid(x_grid: &[Float], min: usize) -> Result<(), ConcentrationError> {
    let ok = x_grid.len() >= min
        && x_grid.iter().all(|x| *x > 0)
        && mp::strictly_decreasing(&x_grid.iter().rev().cloned().collect::<Vec<_>>());
    if ok {
        Ok(())
    } else {
        Err(ConcentrationError::BadGrid {
            min,
            found: x_grid.len(),
        })
    }
}

/// Evaluates the series at every grid point, in parallel, ordered by `x`.
pub fn evaluate_grid(
    oracle: &dyn CoefficientOracle,
    x_grid: &[Float],
    policy: &TruncationPolicy,
) -> Result<Vec<SeriesEvaluation>, SeriesError> {
    x_grid
        .par_iter()
        .map(|x| evaluate(oracle, x, policy))
        .collect()
}

/// `x^p · ratio` decreases along the grid (zeros count as decreasing).
fn scaled_decreasing(xs: &[Float], ratios: &[Float], p: u32) -> bool {
    let scaled: Vec<Float> = xs
        .iter()
        .zip(ratios)
        .map(|(x, r)| Float::with_val(r.prec(), x.pow(p)) * r)
        .collect();
    scaled
        .windows(2)
        .all(|w| w[1] < w[0] || (w[1].is_zero() && w[0].is_zero()))
}

fn classify(
    xs: &[Float],
    heads: &[Float],
    tails: &[Float],
    head_fit: &Option<ExpFit>,
    tail_fit: &Option<ExpFit>,
) -> Verdict {
    let ceiling = Float::with_val(64, FIT_RATIO_CEILING);
    let stuck = |r: &[Float]| {
        let last = r.last().expect("non-empty grid");
        *last >= ceiling && *last >= r[0]
    };
    if stuck(heads) || stuck(tails) {
        return Verdict::Inconsistent;
    }
    let vacuous = |r: &[Float]| r.iter().all(Float::is_zero);
    let exp_ok = |r: &[Float], fit: &Option<ExpFit>| {
        vacuous(r)
            || fit.is_some_and(|f| f.beta > 0.0 && f.alpha > 0.0 && f.rms_residual <= FIT_RMS_MAX)
    };
    let superpoly_ok = |r: &[Float]| DEFAULT_P_LIST.iter().all(|&p| scaled_decreasing(xs, r, p));
    if exp_ok(heads, head_fit) && exp_ok(tails, tail_fit) {
        Verdict::ConsistentWithExponential
    } else if superpoly_ok(heads) && superpoly_ok(tails) {
        Verdict::ConsistentWithSuperpolynomialOnly
    } else {
        Verdict::Inconclusive
    }
}

/// Measures head/tail ratios along `x_grid` and classifies the trend.
pub fn measure(
    oracle: &dyn CoefficientOracle,
    config: &ConcentrationConfig,
    x_grid: &[Float],
) -> Result<ConcentrationReport, ConcentrationError> {
    check_grid(x_grid, MIN_GRID_POINTS)?;
    let evals = evaluate_grid(oracle, x_grid, &config.policy)?;
    let records: Vec<GridRecord> = evals.iter().map(|ev| window_record(ev, config)).collect();
    if records
        .iter()
        .all(|r| r.head_ratio.is_zero() && r.tail_ratio.is_zero())
    {
        return Err(ConcentrationError::Degenerate);
    }
    let xs: Vec<Float> = records.iter().map(|r| r.x.clone()).collect();
    let heads: Vec<Float> = records.iter().map(|r| r.head_ratio.clone()).collect();
    let tails: Vec<Float> = records.iter().map(|r| r.tail_ratio.clone()).collect();
    let head_fit = fit_exponential(&xs, &heads);
    let tail_fit = fit_exponential(&xs, &tails);
    let verdict = classify(&xs, &heads, &tails, &head_fit, &tail_fit);
    let onset = (0..records.len())
        .find(|&i| records[i..].iter().all(|r| r.peak_in_window))
        .map(|i| records[i].x.clone());
    Ok(ConcentrationReport {
        schema: "v1",
        oracle: oracle.describe(),
        location: config.location.to_string(),
        window_c: config.window_c.clone(),
        window_nu: config.window_nu.clone(),
        records,
        head_fit,
        tail_fit,
        claimed_alpha: config.claimed_alpha.clone(),
        claimed_beta: config.claimed_beta.clone(),
        peak_window_onset: onset,
        verdict,
        warnings: config.warnings.clone(),
    })
}

/// Geometric grid of 8 points with ratio 2, starting at the first power of two
/// where the window spans at least 5 indices (`f(x)·C·x^{-ν} ≥ 5`).
pub fn default_grid(config: &ConcentrationConfig) -> Vec<Float> {
    let prec = config.prec();
    let mut x = Float::with_val(prec, 1u32) >> 10u32;
    for _ in 0..200 {
        let fx = config.location.eval(&x, prec);
        let span = fx
            * &config.window_c
            * Float::with_val(prec, (&x).pow(&Float::with_val(prec, -&config.window_nu)));
        if span >= 5 {
            break;
        }
        x *= 2u32;
    }
    (0..8)
        .map(|i| Float::with_val(prec, &x << i as u32))
        .collect()
}

/// `lo:hi:geomN` or `lo:hi:linN`, endpoints as decimal strings.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub lo: Rational,
    pub hi: Rational,
    pub points: usize,
    pub geometric: bool,
}

impl FromStr for GridSpec {
    type Err = ConcentrationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ConcentrationError::BadGridSpec(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, kind] = parts.as_slice() else {
            return Err(bad());
        };
        let lo = mp::parse_rational(lo).map_err(|_| bad())?;
        let hi = mp::parse_rational(hi).map_err(|_| bad())?;
        let (geometric, n) = if let Some(n) = kind.strip_prefix("geom") {
            (true, n)
        } else if let Some(n) = kind.strip_prefix("lin") {
            (false, n)
        } else {
            return Err(bad());
        };
        let points: usize = n.parse().map_err(|_| bad())?;
        if points < 2 || lo <= 0 || hi <= lo {
            return Err(bad());
        }
        Ok(Self {
            lo,
            hi,
            points,
            geometric,
        })
    }
}

impl GridSpec {
    pub fn points(&self, prec: u32) -> Vec<Float> {
        let lo = Float::with_val(prec, &self.lo);
        let hi = Float::with_val(prec, &self.hi);
        let steps = (self.points - 1) as u32;
        let mut out: Vec<Float> = (0..self.points as u32)
            .map(|i| {
                if self.geometric {
                    let ratio = Float::with_val(prec, &hi / &lo).root(steps);
                    Float::with_val(prec, &lo * ratio.pow(i))
                } else {
                    let step = Float::with_val(prec, &hi - &lo) / steps;
                    Float::with_val(prec, &lo + step * i)
                }
            })
            .collect();
        *out.last_mut().expect("at least two points") = hi;
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Lem0Record {
    #[serde(serialize_with = "ser_float")]
    pub x: Float,
    /// `log μ(x) / x^d`.
    pub log_mu_over_xd: f64,
    /// `log I(x) / x^d`.
    pub log_i_over_xd: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Lem0Diagnostics {
    pub records: Vec<Lem0Record>,
    pub mu_over_xd_limit: f64,
    pub log_i_over_xd_limit: f64,
    /// `c_d / d`.
    pub target_log_growth: f64,
    /// `(n, (aₙ Γ(n/d+1))^{1/n})` over nonzero coefficients.
    #[serde(serialize_with = "ser_root_gamma")]
    pub root_gamma: Vec<(usize, Float)>,
    pub root_gamma_limsup: f64,
    /// `(c_d / d)^{1/d}`.
    pub target_root_gamma: f64,
}

fn ser_root_gamma<S: serde::Serializer>(v: &[(usize, Float)], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|(n, r)| (n, mp::fmt_float(r))))
}

/// Fits `y = L + a·log(t)/t + b/t` and returns `L`; falls back to the last
/// value when there are too few points.
fn extrapolate(ts: &[f64], ys: &[f64], prec: u32) -> f64 {
    if ts.len() < 4 {
        return ys.last().copied().unwrap_or(f64::NAN);
    }
    let design: Vec<Vec<Float>> = ts
        .iter()
        .map(|&t| {
            vec![
                Float::with_val(prec, 1u32),
                Float::with_val(prec, t.ln() / t),
                Float::with_val(prec, 1.0 / t),
            ]
        })
        .collect();
    let y: Vec<Float> = ys.iter().map(|&v| Float::with_val(prec, v)).collect();
    mp::lstsq(&design, &y, prec).map_or(f64::NAN, |b| b[0].to_f64())
}

/// Growth diagnostics for `log I(x)`, `log μ(x)` and `(aₙ Γ(n/d+1))^{1/n}`.
///
/// The root-Gamma sequence runs over nonzero coefficients with
/// `1 ≤ n ≤ root_horizon`. With `d = 1` and an exact oracle, `aₙ·n!` is formed
/// exactly before taking roots.
pub fn lem0_diagnostics(
    oracle: &dyn CoefficientOracle,
    config: &ConcentrationConfig,
    x_grid: &[Float],
    root_horizon: usize,
) -> Result<Lem0Diagnostics, ConcentrationError> {
    check_grid(x_grid, 1)?;
    let prec = config.prec();
    let d = config.location.degree() as u32;
    let evals = evaluate_grid(oracle, x_grid, &config.policy)?;
    let records: Vec<Lem0Record> = evals
        .iter()
        .map(|ev| {
            let xd = Float::with_val(prec, (&ev.x).pow(d));
            Lem0Record {
                x: ev.x.clone(),
                log_mu_over_xd: (Float::with_val(prec, ev.peak_term.ln_ref()) / &xd).to_f64(),
                log_i_over_xd: (Float::with_val(prec, ev.total.ln_ref()) / &xd).to_f64(),
            }
        })
        .collect();
    let ts: Vec<f64> = records
        .iter()
        .map(|r| r.x.to_f64().powi(d as i32))
        .collect();
    let mu: Vec<f64> = records.iter().map(|r| r.log_mu_over_xd).collect();
    let li: Vec<f64> = records.iter().map(|r| r.log_i_over_xd).collect();

    let mut root_gamma = Vec::new();
    for n in 1..=root_horizon {
        let value = match (d, oracle.exact_coefficient(n)) {
            (1, Some(a)) => {
                if a == 0 {
                    continue;
                }
                let fact = Integer::from(Integer::factorial(n as u32));
                let prod = a * fact;
                if prod == 1 {
                    Float::with_val(prec, 1u32)
                } else {
                    Float::with_val(prec, &prod).root(n as u32)
                }
            }
            _ => {
                let Some(a) = oracle.coefficient(n, prec) else {
                    break;
                };
                if a.is_zero() {
                    continue;
                }
                let arg = Float::with_val(prec + 32, n as u64) / d + 1u32;
                let log = Float::with_val(prec, a.ln_ref()) + arg.ln_gamma();
                Float::with_val(prec, log / n as u32).exp()
            }
        };
        root_gamma.push((n, value));
    }
    let mut running = f64::NEG_INFINITY;
    let (rn, rv): (Vec<f64>, Vec<f64>) = root_gamma
        .iter()
        .map(|(n, v)| {
            running = running.max(Float::with_val(prec, v.ln_ref()).to_f64());
            (*n as f64, running)
        })
        .unzip();
    let half = rn.len() / 2;
    let root_gamma_limsup = extrapolate(&rn[half..], &rv[half..], prec).exp();

    let cd = config.location.leading().to_f64();
    Ok(Lem0Diagnostics {
        mu_over_xd_limit: extrapolate(&ts, &mu, prec),
        log_i_over_xd_limit: extrapolate(&ts, &li, prec),
        records,
        target_log_growth: cd / d as f64,
        root_gamma,
        root_gamma_limsup,
        target_root_gamma: (cd / d as f64).powf(1.0 / d as f64),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightedTailRow {
    #[serde(serialize_with = "ser_float")]
    pub x: Float,
    pub n_minus: i64,
    pub n_plus: i64,
    /// `Σ_{n ≤ n_-} bₙaₙxⁿ / I(x)`.
    #[serde(serialize_with = "ser_float")]
    pub head_ratio: Float,
    /// `Σ_{n ≥ n_+} bₙaₙxⁿ / I(x)`.
    #[serde(serialize_with = "ser_float")]
    pub tail_ratio: Float,
    /// `x^p · head_ratio` per `p`.
    pub scaled_head: Vec<f64>,
    pub scaled_tail: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightedTailReport {
    pub weight: String,
    pub p_list: Vec<u32>,
    pub rows: Vec<WeightedTailRow>,
    /// Per `p`: `x^p · head_ratio` strictly decreasing along the grid.
    pub head_decreasing: Vec<bool>,
    pub tail_decreasing: Vec<bool>,
}

/// Weighted head/tail ratios scaled by `x^p`.
pub fn weighted_tail_check(
    oracle: &dyn CoefficientOracle,
    weight: &SubpolyWeight,
    config: &ConcentrationConfig,
    x_grid: &[Float],
    p_list: &[u32],
) -> Result<WeightedTailReport, ConcentrationError> {
    check_grid(x_grid, 2)?;
    let prec = config.prec();
    let weighted =
        crate::series::ScaledOracle::new(oracle, weight.to_string(), |n, p| weight.eval(n, p));
    let plain = evaluate_grid(oracle, x_grid, &config.policy)?;
    let heavy = evaluate_grid(&weighted, x_grid, &config.policy)?;
    let mut rows = Vec::new();
    let mut heads = Vec::new();
    let mut tails = Vec::new();
    for (ev, wev) in plain.iter().zip(&heavy) {
        let (n_minus, n_plus) = config.window(&ev.x);
        let head = Float::with_val(prec, wev.head_mass(n_minus) / &ev.total);
        let tail = Float::with_val(prec, wev.tail_mass(n_plus) / &ev.total);
        let scale = |r: &Float| -> Vec<f64> {
            p_list
                .iter()
                .map(|&p| (Float::with_val(prec, (&ev.x).pow(p)) * r).to_f64())
                .collect()
        };
        rows.push(WeightedTailRow {
            x: ev.x.clone(),
            n_minus,
            n_plus,
            scaled_head: scale(&head),
            scaled_tail: scale(&tail),
            head_ratio: head.clone(),
            tail_ratio: tail.clone(),
        });
        heads.push(head);
        tails.push(tail);
    }
    let xs: Vec<Float> = x_grid.iter().map(|x| Float::with_val(prec, x)).collect();
    Ok(WeightedTailReport {
        weight: weight.to_string(),
        p_list: p_list.to_vec(),
        head_decreasing: p_list
            .iter()
            .map(|&p| scaled_decreasing(&xs, &heads, p))
            .collect(),
        tail_decreasing: p_list
            .iter()
            .map(|&p| scaled_decreasing(&xs, &tails, p))
            .collect(),
        rows,
    })
}

/// The two floor inequalities `κ⌊u⌋ ≤ ⌊κu⌋ < κ⌊u⌋ + κ` for `u ≥ 0`.
pub fn floor_multiplicity_holds(u: &Float, kappa: u32) -> bool {
    let fu = Float::with_val(u.prec(), u.floor_ref())
        .to_integer()
        .expect("finite");
    let ku = Float::with_val(u.prec() + 32, u * kappa)
        .floor()
        .to_integer()
        .expect("finite");
    let k_fu = Integer::from(&fu * kappa);
    ku >= k_fu && ku < k_fu + kappa
}

#[derive(Debug, Clone, Serialize)]
pub struct TailSumCheck {
    pub k: u32,
    pub power: u32,
    #[serde(serialize_with = "ser_float")]
    pub sum: Float,
    /// `2^{-K/2}`.
    #[serde(serialize_with = "ser_float")]
    pub bound: Float,
    pub holds: bool,
}

/// `Σ_{n>K} n^power 2^{-n}` against `2^{-K/2}`, summed with a certified tail.
pub fn half_exponent_tail_check(
    k: u32,
    power: u32,
    prec: u32,
) -> Result<TailSumCheck, SeriesError> {
    let oracle = FnOracle::new(format!("n^{power} for n > {k}"), move |n, p| {
        if n as u64 > k as u64 {
            Float::with_val(p, n as u64).pow(power)
        } else {
            Float::with_val(p, 0u32)
        }
    });
    let policy = TruncationPolicy {
        ratio_max: 0.75,
        ..TruncationPolicy::with_prec(prec)
    };
    let ev = evaluate(&oracle, &Float::with_val(prec, 0.5f64), &policy)?;
    let sum = Float::with_val(prec, &ev.total + &ev.truncation_bound);
    let bound = Float::with_val(prec, 1u32) >> (k / 2);
    let bound = if k % 2 == 1 {
        bound / Float::with_val(prec, 2u32).sqrt()
    } else {
        bound
    };
    Ok(TailSumCheck {
        k,
        power,
        holds: sum < bound,
        sum,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{ExponentialOracle, RationalTableOracle};

    fn f(v: f64) -> Float {
        Float::with_val(256, v)
    }

    fn exp_config(nu: f64) -> ConcentrationConfig {
        ConcentrationConfig::new(
            LocationPolynomial::linear(f(1.0)),
            f(1.0),
            f(nu),
            TruncationPolicy::default(),
        )
        .unwrap()
    }

    #[test]
    fn exponential_series_concentrates() {
        let grid: Vec<Float> = [50.0, 100.0, 200.0, 400.0].iter().map(|&v| f(v)).collect();
        let rep = measure(&ExponentialOracle, &exp_config(0.25), &grid).unwrap();
        let at100 = &rep.records[1];
        assert!(
            at100.head_ratio < 3e-3 && at100.tail_ratio < 3e-3,
            "{at100:?}"
        );
        assert_eq!(
            rep.verdict,
            Verdict::ConsistentWithExponential,
            "{}",
            rep.to_csv()
        );
        for fit in [rep.head_fit.unwrap(), rep.tail_fit.unwrap()] {
            assert!((0.3..=0.7).contains(&fit.beta), "{fit:?}");
        }
    }

    #[test]
    fn finite_series_is_inconsistent() {
        let grid: Vec<Float> = [50.0, 100.0, 200.0, 400.0].iter().map(|&v| f(v)).collect();
        let o = RationalTableOracle::polynomial(vec![Rational::from(1)]);
        let rep = measure(&o, &exp_config(0.25), &grid).unwrap();
        assert_eq!(rep.records[3].head_ratio, 1);
        assert_eq!(rep.verdict, Verdict::Inconsistent);
    }

    #[test]
    fn window_floors() {
        let c = exp_config(0.25);
        // 100 ± 100^{3/4} = 100 ± 31.62...
        assert_eq!(c.window(&f(100.0)), (68, 131));
    }

    #[test]
    fn window_transform_direction() {
        let base = ConcentrationConfig::new(
            LocationPolynomial::linear(f(1.0)),
            f(1.0),
            f(0.4),
            TruncationPolicy::default(),
        )
        .unwrap();
        assert!(window_transform(&base, f(2.0), f(0.25)).unwrap().inherited);
        assert!(window_transform(&base, f(1.0), f(0.4)).unwrap().inherited);
        let narrow = exp_config(0.25);
        assert!(!window_transform(&narrow, f(1.0), f(0.4)).unwrap().inherited);
        assert!(window_transform(&narrow, f(0.0), f(0.4)).is_err());
    }

    #[test]
    fn location_equivalence_examples() {
        let three_x = LocationPolynomial::linear(f(3.0));
        let shifted = LocationPolynomial::new(vec![f(7.0), f(3.0)]).unwrap();
        let two_x = LocationPolynomial::linear(f(2.0));
        assert!(location_equivalence(&three_x, &shifted));
        assert!(!location_equivalence(&three_x, &two_x));
        let sq = LocationPolynomial::new(vec![f(0.0), f(0.0), f(1.0)]).unwrap();
        let sq_plus = LocationPolynomial::new(vec![f(0.0), f(1.0), f(1.0)]).unwrap();
        assert!(location_equivalence(&sq, &sq_plus));
    }

    #[test]
    fn nu_above_degree_warns() {
        let c = exp_config(1.5);
        assert_eq!(c.warnings.len(), 1);
        assert!(LocationPolynomial::new(vec![f(1.0)]).is_err());
        assert!(LocationPolynomial::new(vec![f(1.0), f(-1.0)]).is_err());
    }

    #[test]
    fn grid_spec_parsing() {
        let g: GridSpec = "20:160:geom4".parse().unwrap();
        let pts: Vec<f64> = g.points(256).iter().map(Float::to_f64).collect();
        assert_eq!(pts, vec![20.0, 40.0, 80.0, 160.0]);
        let l: GridSpec = "1:4:lin4".parse().unwrap();
        let pts: Vec<f64> = l.points(64).iter().map(Float::to_f64).collect();
        assert_eq!(pts, vec![1.0, 2.0, 3.0, 4.0]);
        for bad in ["1:2", "2:1:geom3", "1:2:log3", "0:2:lin3", "1:2:geom1"] {
            assert!(bad.parse::<GridSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn bad_grids_are_rejected() {
        let c = exp_config(0.25);
        let short: Vec<Float> = [1.0, 2.0].iter().map(|&v| f(v)).collect();
        assert!(matches!(
            measure(&ExponentialOracle, &c, &short),
            Err(ConcentrationError::BadGrid { .. })
        ));
        let unsorted: Vec<Float> = [1.0, 3.0, 2.0, 4.0].iter().map(|&v| f(v)).collect();
        assert!(matches!(
            measure(&ExponentialOracle, &c, &unsorted),
            Err(ConcentrationError::BadGrid { .. })
        ));
    }

    #[test]
    fn default_grid_spans_window() {
        let c = exp_config(0.25);
        let g = default_grid(&c);
        assert_eq!(g.len(), 8);
        // x^{3/4} >= 5 first at x = 16
        assert_eq!(g[0], 16);
        assert_eq!(g[7], 2048);
    }

    #[test]
    fn floor_identities_simple() {
        for (u, k) in [(0.0, 3), (2.999, 3), (1.5, 2), (7.2, 5)] {
            assert!(floor_multiplicity_holds(&f(u), k));
        }
    }

    #[test]
    fn half_exponent_tail() {
        for k in [64, 128, 256] {
            let chk = half_exponent_tail_check(k, 3, 256).unwrap();
            assert!(chk.holds, "K = {k}");
        }
    }

    #[test]
    fn exp_oracle_lem0() {
        let c = exp_config(0.25);
        let grid = [f(50.0), f(100.0), f(200.0)];
        let d = lem0_diagnostics(&ExponentialOracle, &c, &grid, 60).unwrap();
        assert!((d.records[2].log_i_over_xd - 1.0).abs() < 0.05);
        assert!(d.root_gamma.iter().all(|(_, v)| *v == 1));
        assert_eq!(d.root_gamma.len(), 60);
    }
}
