//! Quantum period assembly, `T_{A,con}` estimation and certified evaluation of
//! absolutely monotonic power series.

mod oracle;
mod weights;

use std::collections::VecDeque;
use std::fmt::Write as _;

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::Serialize;

pub use oracle::{
    inverse_factorial, CoefficientOracle, ExponentialOracle, FnOracle, PeriodOracle,
    RationalTableOracle, ScaledOracle,
};
pub use weights::{SlowlyVarying, SubpolyWeight};

use crate::concentration::LocationPolynomial;
use crate::laurent::{detect_index, LaurentError, LaurentPolynomial, DEFAULT_INDEX_HORIZON};
use crate::mp::{self, ser_float};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeriesError {
    #[error("model is not convenient")]
    NotConvenient,
    #[error("need at least {needed} nonzero regularized coefficients, found {found}")]
    TooFewNonzero { needed: usize, found: usize },
    #[error("cannot certify truncation at n = {n}: {reason}")]
    Uncertified { n: usize, reason: String },
    #[error("evaluation point must be positive")]
    NonPositiveX,
    #[error("coefficient a_{n} is negative")]
    NegativeCoefficient { n: usize },
    #[error("series vanishes identically")]
    ZeroSeries,
    #[error("`{0}` is not in the whitelist of admissible weights")]
    NotWhitelisted(String),
    #[error("least-squares fit failed: {0}")]
    Fit(String),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// When to stop summing and how to bound what was left out.
///
/// Summation stops at the first nonzero term `n` such that `n` is past the
/// running argmax, the term is below `2^{-(prec+guard_bits)}` times the running
/// total, and the last `ratio_window` ratios between consecutive nonzero terms
/// are all below `ratio_max`. The omitted tail is then bounded by
/// `term·ρ/(1-ρ)` with `ρ` the largest of those ratios.
#[derive(Debug, Clone)]
pub struct TruncationPolicy {
    pub prec: u32,
    pub guard_bits: u32,
    pub ratio_window: usize,
    pub ratio_max: f64,
    pub max_terms: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            prec: mp::DEFAULT_PREC,
            guard_bits: mp::DEFAULT_GUARD_BITS,
            ratio_window: 8,
            ratio_max: 0.5,
            max_terms: 2_000_000,
        }
    }
}

impl TruncationPolicy {
    pub fn with_prec(prec: u32) -> Self {
        Self {
            prec,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// The oracle declared finite support and every nonzero term was summed.
    FiniteSupport,
    /// Eventually geometric decay bounded the omitted tail.
    GeometricTail,
}

/// A summed series `I(x) = Σ aₙ xⁿ` with prefix and suffix sums retained.
#[derive(Debug, Clone, Serialize)]
pub struct SeriesEvaluation {
    #[serde(serialize_with = "ser_float")]
    pub x: Float,
    /// Sum of the computed terms.
    #[serde(serialize_with = "ser_float")]
    pub total: Float,
    /// Largest `n` attaining `max aₙxⁿ`.
    pub peak_index: usize,
    /// `μ(x) = max aₙxⁿ`.
    #[serde(serialize_with = "ser_float")]
    pub peak_term: Float,
    /// Certified upper bound on the omitted terms `n ≥ n_terms`.
    #[serde(serialize_with = "ser_float")]
    pub truncation_bound: Float,
    pub n_terms: usize,
    pub certificate: Certificate,
    #[serde(skip)]
    terms: Vec<Float>,
    #[serde(skip)]
    prefix: Vec<Float>,
    #[serde(skip)]
    suffix: Vec<Float>,
}

impl SeriesEvaluation {
    /// `aₙxⁿ` for `n < n_terms`.
    pub fn terms(&self) -> &[Float] {
        &self.terms
    }

    /// `Σ_{n ≤ n̄} aₙxⁿ`; zero for negative `n̄`.
    pub fn head_mass(&self, n_bar: i64) -> Float {
        if n_bar < 0 {
            return Float::with_val(self.total.prec(), 0u32);
        }
        let k = (n_bar as usize + 1).min(self.n_terms);
        self.prefix[k].clone()
    }

    /// `Σ_{n ≥ n̄} aₙxⁿ` over the computed terms.
    pub fn tail_mass(&self, n_bar: i64) -> Float {
        let k = n_bar.max(0) as usize;
        if k >= self.n_terms {
            return Float::with_val(self.total.prec(), 0u32);
        }
        self.suffix[k].clone()
    }

    pub fn precision(&self) -> u32 {
        self.total.prec()
    }
}

/// Sums `Σ aₙ xⁿ` under `policy`.
pub fn evaluate(
    oracle: &dyn CoefficientOracle,
    x: &Float,
    policy: &TruncationPolicy,
) -> Result<SeriesEvaluation, SeriesError> {
    let prec = policy.prec;
    if *x <= 0 {
        return Err(SeriesError::NonPositiveX);
    }
    let x = Float::with_val(prec, x);
    let rel_cut = mp::pow2_neg(prec + policy.guard_bits, prec);
    let ratio_max = Float::with_val(prec, policy.ratio_max);
    let bound = oracle.support_bound();

    let mut terms: Vec<Float> = Vec::new();
    let mut total = Float::with_val(prec, 0u32);
    let mut peak_index = 0usize;
    let mut peak_term = Float::with_val(prec, 0u32);
    let mut last_nonzero: Option<Float> = None;
    let mut ratios: VecDeque<Float> = VecDeque::with_capacity(policy.ratio_window + 1);
    let mut tail = None;

    for n in 0.. {
        if bound.is_some_and(|b| n > b) {
            tail = Some((Float::with_val(prec, 0u32), Certificate::FiniteSupport));
            break;
        }
        if n >= policy.max_terms {
            return Err(SeriesError::Uncertified {
                n,
                reason: format!(
                    "term cap {} reached before the tail decayed",
                    policy.max_terms
                ),
            });
        }
        let a = oracle
            .coefficient(n, prec)
            .ok_or_else(|| SeriesError::Uncertified {
                n,
                reason: "coefficient oracle exhausted".into(),
            })?;
        if a < 0 {
            return Err(SeriesError::NegativeCoefficient { n });
        }
        let term = if a.is_zero() {
            a
        } else {
            a * Float::with_val(prec, (&x).pow(n as u64))
        };
        total += &term;
        if term >= peak_term && !term.is_zero() {
            peak_term = term.clone();
            peak_index = n;
        }
        if !term.is_zero() {
            if let Some(prev) = &last_nonzero {
                ratios.push_back(Float::with_val(prec, &term / prev));
                if ratios.len() > policy.ratio_window {
                    ratios.pop_front();
                }
            }
            let done = n > peak_index
                && ratios.len() == policy.ratio_window
                && ratios.iter().all(|r| *r < ratio_max)
                && term < Float::with_val(prec, &rel_cut * &total);
            last_nonzero = Some(term.clone());
            terms.push(term);
            if done {
                let rho = ratios
                    .iter()
                    .max_by(|a, b| a.partial_cmp(b).expect("finite ratios"))
                    .expect("non-empty window")
                    .clone();
                let one_minus = Float::with_val(prec, 1u32 - &rho);
                let last = last_nonzero.as_ref().expect("just set");
                let bound = Float::with_val(prec, last * &rho) / one_minus;
                tail = Some((bound, Certificate::GeometricTail));
                break;
            }
        } else {
            terms.push(term);
        }
    }
    let (truncation_bound, certificate) = tail.expect("loop exits with a certificate");
    if total.is_zero() {
        return Err(SeriesError::ZeroSeries);
    }
    let n_terms = terms.len();
    let mut prefix = Vec::with_capacity(n_terms + 1);
    let mut acc = Float::with_val(prec, 0u32);
    prefix.push(acc.clone());
    for t in &terms {
        acc += t;
        prefix.push(acc.clone());
    }
    let mut suffix = vec![Float::with_val(prec, 0u32); n_terms + 1];
    for k in (0..n_terms).rev() {
        suffix[k] = Float::with_val(prec, &suffix[k + 1] + &terms[k]);
    }
    Ok(SeriesEvaluation {
        x,
        total,
        peak_index,
        peak_term,
        truncation_bound,
        n_terms,
        certificate,
        terms,
        prefix,
        suffix,
    })
}

/// Exact quantum period coefficients `Gₙ = Cst(fⁿ)/n!`.
#[derive(Debug, Clone, Serialize)]
pub struct PeriodSequence {
    #[serde(serialize_with = "ser_rationals")]
    pub g_n: Vec<Rational>,
    /// `n!·Gₙ = Cst(fⁿ)`.
    #[serde(serialize_with = "ser_rationals")]
    pub regularized: Vec<Rational>,
    pub index_r: usize,
    /// How `index_r` was obtained; the detection is empirical.
    pub index_method: String,
    pub n_max: usize,
    pub source_model: String,
    pub warnings: Vec<String>,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

/// Builds `Gₙ` for `n ≤ n_max` and detects the index.
///
/// The index is read from a horizon of at least [`DEFAULT_INDEX_HORIZON`].
/// `G₁ ≠ 0` is allowed (models with a constant term) but reported as a warning.
pub fn quantum_period(f: &LaurentPolynomial, n_max: usize) -> Result<PeriodSequence, SeriesError> {
    if !f.is_convenient()? {
        return Err(SeriesError::NotConvenient);
    }
    let horizon = n_max.max(DEFAULT_INDEX_HORIZON);
    let cst = f.cst_sequence(horizon)?;
    let index_r = detect_index(&cst)?;
    let regularized = cst[..=n_max].to_vec();
    let mut fact = Integer::from(1);
    let g_n = regularized
        .iter()
        .enumerate()
        .map(|(n, c)| {
            if n > 0 {
                fact *= n as u32;
            }
            Rational::from(c / &fact)
        })
        .collect();
    let mut warnings = Vec::new();
    if cst.get(1).is_some_and(|c| *c != 0) {
        warnings.push(format!(
            "G_1 = {} is nonzero; the model has a constant term",
            cst[1]
        ));
    }
    Ok(PeriodSequence {
        g_n,
        regularized,
        index_r,
        index_method: format!("gcd of n <= {horizon} with Cst(f^n) != 0 (heuristic)"),
        n_max,
        source_model: f.to_string(),
        warnings,
    })
}

impl PeriodSequence {
    pub fn with_source(mut self, name: impl Into<String>) -> Self {
        self.source_model = name.into();
        self
    }

    /// The same sequence cut at `n_max`.
    pub fn truncated(&self, n_max: usize) -> Self {
        let n_max = n_max.min(self.n_max);
        Self {
            g_n: self.g_n[..=n_max].to_vec(),
            regularized: self.regularized[..=n_max].to_vec(),
            n_max,
            ..self.clone()
        }
    }

    /// Indices `n ≥ 1` with `Gₙ ≠ 0`.
    pub fn nonzero_indices(&self) -> Vec<usize> {
        (1..=self.n_max)
            .filter(|&n| self.regularized[n] != 0)
            .collect()
    }

    /// Root-test sequence `(n!Gₙ)^{1/n}` over nonzero indices.
    pub fn root_test(&self, prec: u32) -> Vec<(usize, Float)> {
        self.nonzero_indices()
            .into_iter()
            .map(|n| {
                let c = Float::with_val(prec, &self.regularized[n]);
                (n, c.root(n as u32))
            })
            .collect()
    }

    /// CSV with columns `n,G_n_num,G_n_den,n!G_n`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,G_n_num,G_n_den,n!G_n\n");
        for (n, (g, c)) in self.g_n.iter().zip(&self.regularized).enumerate() {
            writeln!(out, "{n},{},{},{c}", g.numer(), g.denom()).expect("string write");
        }
        out
    }
}

/// Estimate of `T_{A,con} = limsup (n!Gₙ)^{1/n}`.
#[derive(Debug, Clone, Serialize)]
pub struct TAConEstimate {
    /// The stride-ratio estimate, which converges faster.
    #[serde(serialize_with = "ser_float")]
    pub value: Float,
    #[serde(serialize_with = "ser_float")]
    pub root_estimate: Float,
    #[serde(serialize_with = "ser_float")]
    pub ratio_estimate: Float,
    /// `|root - ratio| / ratio`.
    pub relative_gap: f64,
    pub nonzero_terms: usize,
    /// First `n` used by the fits.
    pub fit_from: usize,
    pub warnings: Vec<String>,
}

/// Minimum number of nonzero regularized coefficients for [`estimate_t_a_con`].
pub const MIN_NONZERO_TERMS: usize = 10;

/// Extrapolates `limsup (n!Gₙ)^{1/n}` from the upper half of the sequence.
///
/// * Root fit: `log(cₙ)/n = L + a·log(n)/n + b/n + e/n²`.
/// * Ratio fit: `log(cₙ/c_{n-r})/r = L + b/n + e/n²`.
///
/// Both intercepts estimate `log T_{A,con}`; their disagreement is reported.
pub fn estimate_t_a_con(seq: &PeriodSequence) -> Result<TAConEstimate, SeriesError> {
    estimate_t_a_con_at(seq, mp::DEFAULT_PREC)
}

pub fn estimate_t_a_con_at(seq: &PeriodSequence, prec: u32) -> Result<TAConEstimate, SeriesError> {
    let nz = seq.nonzero_indices();
    if nz.len() < MIN_NONZERO_TERMS {
        return Err(SeriesError::TooFewNonzero {
            needed: MIN_NONZERO_TERMS,
            found: nz.len(),
        });
    }
    let r = seq.index_r;
    let fit_from = nz[nz.len() / 2];
    let ln = |n: usize| Float::with_val(prec, &seq.regularized[n]).ln();
    let one = || Float::with_val(prec, 1u32);

    let mut design = Vec::new();
    let mut ys = Vec::new();
    for &n in nz.iter().filter(|&&n| n >= fit_from) {
        let nf = Float::with_val(prec, n as u64);
        let inv = Float::with_val(prec, nf.recip_ref());
        let log_n_over_n = Float::with_val(prec, nf.ln_ref()) * &inv;
        let inv2 = Float::with_val(prec, &inv * &inv);
        ys.push(ln(n) * &inv);
        design.push(vec![one(), log_n_over_n, inv, inv2]);
    }
    let root = mp::lstsq(&design, &ys, prec)
        .ok_or_else(|| SeriesError::Fit("root-test design is singular".into()))?;

    let mut design = Vec::new();
    let mut ys = Vec::new();
    for &n in nz.iter().filter(|&&n| n >= fit_from && n >= r) {
        if seq.regularized[n - r] == 0 {
            continue;
        }
        let nf = Float::with_val(prec, n as u64);
        let inv = Float::with_val(prec, nf.recip_ref());
        let inv2 = Float::with_val(prec, &inv * &inv);
        ys.push((ln(n) - ln(n - r)) / r as u32);
        design.push(vec![one(), inv, inv2]);
    }
    let ratio = mp::lstsq(&design, &ys, prec)
        .ok_or_else(|| SeriesError::Fit("ratio-test design is singular".into()))?;

    let root_estimate = root[0].clone().exp();
    let ratio_estimate = ratio[0].clone().exp();
    let relative_gap =
        (Float::with_val(prec, &root_estimate - &ratio_estimate).abs() / &ratio_estimate).to_f64();
    let mut warnings = Vec::new();
    if ratio_estimate < 1e-6 {
        warnings.push("T_{A,con} estimate is tiny; the limsup may be zero".to_string());
    }
    Ok(TAConEstimate {
        value: ratio_estimate.clone(),
        root_estimate,
        ratio_estimate,
        relative_gap,
        nonzero_terms: nz.len(),
        fit_from,
        warnings,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SubstitutionRecord {
    #[serde(serialize_with = "ser_float")]
    pub x: Float,
    /// `|Σ aₙbₙg(n)xⁿ − g(f(x)) Σ aₙbₙxⁿ| / I(x)`, sums over `n ≥ n_start`.
    pub discrepancy: f64,
    #[serde(serialize_with = "ser_float")]
    pub g_at_location: Float,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubstitutionReport {
    pub weight: String,
    pub slowly_varying: String,
    pub n_start: usize,
    pub records: Vec<SubstitutionRecord>,
    /// Discrepancy strictly decreasing along the grid.
    pub decreasing: bool,
}

/// Compares `Σ aₙbₙg(n)xⁿ` with `g(f(x)) Σ aₙbₙxⁿ` relative to `I(x)`.
///
/// The weighted sum reuses the truncation point certified for `Σ aₙbₙxⁿ`;
/// since `g` grows slower than any power, the omitted part stays below
/// `g(n_terms)` times that certificate.
pub fn weighted_substitution_check(
    oracle: &dyn CoefficientOracle,
    weight: &SubpolyWeight,
    g: &SlowlyVarying,
    location: &LocationPolynomial,
    x_grid: &[Float],
    policy: &TruncationPolicy,
) -> Result<SubstitutionReport, SeriesError> {
    let prec = policy.prec;
    let n_start = g.first_index();
    let weighted = ScaledOracle::new(oracle, weight.to_string(), |n, p| weight.eval(n, p));
    let records = x_grid
        .par_iter()
        .map(|x| {
            let base = evaluate(oracle, x, policy)?;
            let ev = evaluate(&weighted, x, policy)?;
            let mut with_g = Float::with_val(prec, 0u32);
            for (n, t) in ev.terms().iter().enumerate().skip(n_start) {
                if !t.is_zero() {
                    let gn = g.eval(&Float::with_val(prec, n as u64), prec);
                    with_g += Float::with_val(prec, t * &gn);
                }
            }
            let g_at = g.eval(&location.eval(x, prec), prec);
            let plain = ev.tail_mass(n_start as i64);
            let diff = with_g - Float::with_val(prec, &g_at * &plain);
            let d = Float::with_val(prec, diff.abs() / &base.total);
            Ok(SubstitutionRecord {
                x: Float::with_val(prec, x),
                discrepancy: d.to_f64(),
                g_at_location: g_at,
            })
        })
        .collect::<Result<Vec<_>, SeriesError>>()?;
    let ds: Vec<f64> = records.iter().map(|r| r.discrepancy).collect();
    Ok(SubstitutionReport {
        weight: weight.to_string(),
        slowly_varying: g.to_string(),
        n_start,
        decreasing: mp::strictly_decreasing(&ds),
        records,
    })
}

/// CSV with columns `x,total,peak_index,head_mass,tail_mass`, where the head is
/// the mass strictly below the peak and the tail the mass strictly above it.
pub fn evaluations_to_csv(evals: &[SeriesEvaluation]) -> String {
    let mut out = String::from("x,total,peak_index,head_mass,tail_mass\n");
    for e in evals {
        let p = e.peak_index as i64;
        writeln!(
            out,
            "{},{},{},{},{}",
            mp::fmt_float(&e.x),
            mp::fmt_float(&e.total),
            e.peak_index,
            mp::fmt_float(&e.head_mass(p - 1)),
            mp::fmt_float(&e.tail_mass(p + 1)),
        )
        .expect("string write");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1() -> LaurentPolynomial {
        LaurentPolynomial::from_integer_terms(1, &[(&[1], 1), (&[-1], 1)]).unwrap()
    }

    fn p2() -> LaurentPolynomial {
        LaurentPolynomial::from_integer_terms(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[-1, -1], 1)])
            .unwrap()
    }

    #[test]
    fn exp_at_one_is_e() {
        let ev = evaluate(
            &ExponentialOracle,
            &Float::with_val(256, 1u32),
            &TruncationPolicy::default(),
        )
        .unwrap();
        let e = Float::with_val(256, 1u32).exp();
        let err = Float::with_val(256, &ev.total - &e).abs();
        assert!(err < mp::pow2_neg(200, 256));
        assert_eq!(ev.certificate, Certificate::GeometricTail);
        assert!(ev.truncation_bound < mp::pow2_neg(250, 256));
    }

    #[test]
    fn exp_peak_at_x() {
        let ev = evaluate(
            &ExponentialOracle,
            &Float::with_val(256, 100u32),
            &TruncationPolicy::default(),
        )
        .unwrap();
        // a_99 x^99 = a_100 x^100; ties resolve to the larger index
        assert_eq!(ev.peak_index, 100);
    }

    #[test]
    fn single_coefficient_series() {
        let o = RationalTableOracle::polynomial(vec![Rational::from(1)]);
        let ev = evaluate(
            &o,
            &Float::with_val(64, 5u32),
            &TruncationPolicy::with_prec(64),
        )
        .unwrap();
        assert_eq!(ev.total, 1);
        assert_eq!(ev.peak_index, 0);
        assert_eq!(ev.certificate, Certificate::FiniteSupport);
    }

    #[test]
    fn head_tail_partition() {
        let ev = evaluate(
            &ExponentialOracle,
            &Float::with_val(256, 30u32),
            &TruncationPolicy::default(),
        )
        .unwrap();
        for split in [-1i64, 0, 10, 30, 60, 10_000] {
            let s = Float::with_val(256, ev.head_mass(split) + ev.tail_mass(split + 1));
            let err = Float::with_val(256, &s - &ev.total).abs() / &ev.total;
            assert!(err < mp::pow2_neg(240, 256), "split {split}");
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let policy = TruncationPolicy::with_prec(64);
        assert_eq!(
            evaluate(&ExponentialOracle, &Float::with_val(64, 0u32), &policy).unwrap_err(),
            SeriesError::NonPositiveX
        );
        let neg = FnOracle::new("negative", |_, p| Float::with_val(p, -1i32));
        assert_eq!(
            evaluate(&neg, &Float::with_val(64, 1u32), &policy).unwrap_err(),
            SeriesError::NegativeCoefficient { n: 0 }
        );
        let growing = FnOracle::new("ones", |_, p| Float::with_val(p, 1u32));
        let capped = TruncationPolicy {
            max_terms: 1000,
            ..policy
        };
        assert!(matches!(
            evaluate(&growing, &Float::with_val(64, 2u32), &capped),
            Err(SeriesError::Uncertified { .. })
        ));
    }

    #[test]
    fn period_examples() {
        let s = quantum_period(&p1(), 4).unwrap();
        assert_eq!(s.g_n[2], 1);
        assert_eq!(s.g_n[4], Rational::from((1, 4)));
        assert_eq!(s.index_r, 2);
        let s = quantum_period(&p2(), 6).unwrap();
        assert_eq!(s.g_n[0], 1);
        assert_eq!(s.g_n[1], 0);
        assert_eq!(s.g_n[3], 1);
        assert_eq!(s.g_n[6], Rational::from((1, 8)));
        assert!(s.warnings.is_empty());
        assert!(s.to_csv().contains("\n3,1,1,6\n"));
    }

    #[test]
    fn constant_term_model_warns() {
        let f =
            LaurentPolynomial::from_integer_terms(1, &[(&[1], 1), (&[0], 1), (&[-1], 1)]).unwrap();
        let s = quantum_period(&f, 5).unwrap();
        assert_eq!(s.index_r, 1);
        assert_eq!(s.warnings.len(), 1);
    }

    #[test]
    fn non_convenient_is_rejected() {
        let f = LaurentPolynomial::from_integer_terms(2, &[(&[1, 0], 1), (&[0, 1], 1)]).unwrap();
        assert_eq!(
            quantum_period(&f, 5).unwrap_err(),
            SeriesError::NotConvenient
        );
    }

    #[test]
    fn too_few_terms() {
        let s = quantum_period(&p2(), 20).unwrap();
        assert!(matches!(
            estimate_t_a_con(&s),
            Err(SeriesError::TooFewNonzero {
                needed: 10,
                found: 6
            })
        ));
    }

    #[test]
    fn p1_conifold_value_estimate() {
        let s = quantum_period(&p1(), 200).unwrap();
        let est = estimate_t_a_con(&s).unwrap();
        assert!((est.value.to_f64() - 2.0).abs() < 1e-4, "{}", est.value);
        assert!(est.relative_gap < 1e-2);
    }

    #[test]
    fn constant_substitution_vanishes() {
        let loc = LocationPolynomial::linear(Float::with_val(256, 1u32));
        let g = SlowlyVarying::Constant(Rational::from(1));
        let grid = [Float::with_val(256, 10u32), Float::with_val(256, 20u32)];
        let rep = weighted_substitution_check(
            &ExponentialOracle,
            &SubpolyWeight::One,
            &g,
            &loc,
            &grid,
            &TruncationPolicy::default(),
        )
        .unwrap();
        assert!(rep.records.iter().all(|r| r.discrepancy < 1e-60));
    }
}
