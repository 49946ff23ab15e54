//! Modified hypergeometric series
//!
//! ```text
//! H(x) = Σ_{n'} a_{n'} · ∏Γ(α_r n' + a_r) / ∏Γ(β_s n' + b_s) · (Tx)^{κn'}
//! ```
//!
//! with `κ = Σβ_s − Σα_r ∈ ℤ_{>0}`. Its summands concentrate near
//! `n ≈ κ C^{1/κ} T x` where `C = ∏α_r^{α_r} ∏β_s^{−β_s}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::Serialize;
use serde_json::Value;

use crate::concentration::{
    self, ConcentrationConfig, ConcentrationError, ConcentrationReport, LocationPolynomial,
};
use crate::mp::{self, parse_rational, ser_float};
use crate::series::{CoefficientOracle, TruncationPolicy};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HypergeomError {
    #[error("malformed spec: {0}")]
    Malformed(String),
    #[error("parameter {0} must be positive")]
    NonPositive(String),
    #[error("kappa = sum(beta) - sum(alpha) = {0} is not a positive integer")]
    KappaNotPositiveInteger(String),
    #[error("the lower parameter list must be non-empty")]
    NoLowerParameters,
    #[error("invalid modifier: {0}")]
    BadModifier(String),
    #[error("nu = {0} lies outside (0, 1/2)")]
    NuOutOfRange(String),
    #[error("regularity check needs n_max >= 100, got {0}")]
    HorizonTooShort(usize),
    #[error(transparent)]
    Concentration(#[from] ConcentrationError),
}

/// Whitelisted coefficient families `a_{n'} > 0` with
/// `a_{n'+1}/a_{n'} = 1 + O(1/n')`.
#[derive(Debug, Clone, PartialEq)]
pub enum Modifier {
    /// `a_{n'} = c > 0`.
    Constant(Rational),
    /// `a_{n'} = (n'+1)^{-γ}`.
    Power { gamma: Rational },
    /// `a_{n'} = P(n')/Q(n')`, ascending coefficients, all non-negative with
    /// positive constant terms.
    Rational {
        num: Vec<Rational>,
        den: Vec<Rational>,
    },
}

impl Modifier {
    pub fn one() -> Self {
        Self::Constant(Rational::from(1))
    }

    fn validate(&self) -> Result<(), HypergeomError> {
        match self {
            Self::Constant(c) if *c <= 0 => Err(HypergeomError::BadModifier(
                "constant must be positive".into(),
            )),
            Self::Rational { num, den } => {
                for (name, p) in [("num", num), ("den", den)] {
                    if p.is_empty() || p[0] <= 0 || p.iter().any(|c| *c < 0) {
                        return Err(HypergeomError::BadModifier(format!(
                            "{name} needs non-negative coefficients and a positive constant term"
                        )));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, n: usize, prec: u32) -> Float {
        match self {
            Self::Constant(c) => Float::with_val(prec, c),
            Self::Power { gamma } => {
                let base = Float::with_val(prec, n as u64 + 1);
                base.pow(-Float::with_val(prec, gamma))
            }
            Self::Rational { .. } => {
                Float::with_val(prec, &self.exact(n).expect("rational modifier is exact"))
            }
        }
    }

    /// Exact value when the family is rational at integer arguments.
    pub fn exact(&self, n: usize) -> Option<Rational> {
        match self {
            Self::Constant(c) => Some(c.clone()),
            Self::Power { gamma } => {
                if *gamma.denom() != 1 {
                    return None;
                }
                let g = gamma.numer().to_i32()?;
                Some(Rational::from(n as u64 + 1).pow(-g))
            }
            Self::Rational { num, den } => {
                let horner = |p: &[Rational]| {
                    let mut acc = Rational::new();
                    for c in p.iter().rev() {
                        acc *= n as u64;
                        acc += c;
                    }
                    acc
                };
                Some(horner(num) / horner(den))
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Constant(c) => format!("constant {c}"),
            Self::Power { gamma } => format!("(n'+1)^(-{gamma})"),
            Self::Rational { num, den } => {
                let f = |p: &[Rational]| {
                    p.iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                };
                format!("rational [{}]/[{}]", f(num), f(den))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypergeomSpec {
    upper: Vec<(Rational, Rational)>,
    lower: Vec<(Rational, Rational)>,
    t: Rational,
    modifier: Modifier,
    kappa: u32,
}

impl HypergeomSpec {
    pub fn new(
        upper: Vec<(Rational, Rational)>,
        lower: Vec<(Rational, Rational)>,
        t: Rational,
        modifier: Modifier,
    ) -> Result<Self, HypergeomError> {
        if lower.is_empty() {
            return Err(HypergeomError::NoLowerParameters);
        }
        for (list, (greek, latin)) in [(&upper, ("alpha", "a")), (&lower, ("beta", "b"))] {
            for (i, (g, l)) in list.iter().enumerate() {
                if *g <= 0 {
                    return Err(HypergeomError::NonPositive(format!("{greek}[{i}]")));
                }
                if *l <= 0 {
                    return Err(HypergeomError::NonPositive(format!("{latin}[{i}]")));
                }
            }
        }
        if t <= 0 {
            return Err(HypergeomError::NonPositive("T".into()));
        }
        modifier.validate()?;
        let kappa: Rational = lower.iter().map(|(b, _)| b.clone()).sum::<Rational>()
            - upper.iter().map(|(a, _)| a.clone()).sum::<Rational>();
        let kappa_int = (*kappa.denom() == 1)
            .then(|| kappa.numer().to_u32())
            .flatten()
            .filter(|&k| k > 0)
            .ok_or_else(|| HypergeomError::KappaNotPositiveInteger(kappa.to_string()))?;
        Ok(Self {
            upper,
            lower,
            t,
            modifier,
            kappa: kappa_int,
        })
    }

    /// Integer-parameter convenience constructor with `T = 1`, modifier 1.
    pub fn integers(upper: &[(i64, i64)], lower: &[(i64, i64)]) -> Result<Self, HypergeomError> {
        let conv = |v: &[(i64, i64)]| {
            v.iter()
                .map(|&(a, b)| (Rational::from(a), Rational::from(b)))
                .collect()
        };
        Self::new(conv(upper), conv(lower), Rational::from(1), Modifier::one())
    }

    pub fn with_t(mut self, t: Rational) -> Result<Self, HypergeomError> {
        if t <= 0 {
            return Err(HypergeomError::NonPositive("T".into()));
        }
        self.t = t;
        Ok(self)
    }

    pub fn with_modifier(mut self, modifier: Modifier) -> Result<Self, HypergeomError> {
        modifier.validate()?;
        self.modifier = modifier;
        Ok(self)
    }

    pub fn upper(&self) -> &[(Rational, Rational)] {
        &self.upper
    }

    pub fn lower(&self) -> &[(Rational, Rational)] {
        &self.lower
    }

    pub fn t(&self) -> &Rational {
        &self.t
    }

    pub fn modifier(&self) -> &Modifier {
        &self.modifier
    }

    pub fn kappa(&self) -> u32 {
        self.kappa
    }

    /// `C = ∏α_r^{α_r} ∏β_s^{−β_s}`.
    pub fn c_value(&self, prec: u32) -> Float {
        let mut c = Float::with_val(prec, 1u32);
        for (a, _) in &self.upper {
            let af = Float::with_val(prec, a);
            c *= Float::with_val(prec, (&af).pow(&af));
        }
        for (b, _) in &self.lower {
            let bf = Float::with_val(prec, b);
            c /= Float::with_val(prec, (&bf).pow(&bf));
        }
        c
    }

    /// `C` exactly, when every `α_r` and `β_s` is an integer.
    pub fn c_exact(&self) -> Option<Rational> {
        let mut c = Rational::from(1);
        for (a, _) in &self.upper {
            let k = a.numer().to_u32().filter(|_| *a.denom() == 1)?;
            c *= Integer::from(a.numer().pow(k));
        }
        for (b, _) in &self.lower {
            let k = b.numer().to_u32().filter(|_| *b.denom() == 1)?;
            c /= Integer::from(b.numer().pow(k));
        }
        Some(c)
    }

    /// `κ C^{1/κ} T`.
    pub fn peak_coefficient(&self, prec: u32) -> Float {
        let root = self.c_value(prec).root(self.kappa);
        root * self.kappa * Float::with_val(prec, &self.t)
    }

    /// `log` of the coefficient of `x^{κn'}`.
    pub fn ln_coefficient(&self, n: usize, prec: u32) -> Float {
        let mut acc = Float::with_val(prec, self.modifier.eval(n, prec).ln_ref());
        let gamma_arg = |g: &Rational, l: &Rational| {
            let arg = Rational::from(g * n as u64) + l;
            Float::with_val(prec, &arg).ln_gamma()
        };
        for (a, la) in &self.upper {
            acc += gamma_arg(a, la);
        }
        for (b, lb) in &self.lower {
            acc -= gamma_arg(b, lb);
        }
        let t_ln = Float::with_val(prec, &self.t).ln();
        acc + t_ln * (self.kappa as u64 * n as u64)
    }

    /// `a_{n'}·∏Γ(α_r n'+a_r)/∏Γ(β_s n'+b_s)·T^{κn'}`, through log-Gamma with
    /// 64 guard bits.
    pub fn coefficient(&self, n: usize, prec: u32) -> Float {
        let guard = prec + 64;
        Float::with_val(prec, self.ln_coefficient(n, guard).exp())
    }

    /// Exact coefficient when every Gamma argument is a positive integer and
    /// the modifier is exact.
    pub fn exact_coefficient(&self, n: usize) -> Option<Rational> {
        let gamma_int = |g: &Rational, l: &Rational| -> Option<Integer> {
            let arg = Rational::from(g * n as u64) + l;
            if *arg.denom() != 1 {
                return None;
            }
            let k = arg.numer().to_u32()?;
            Some(Integer::from(Integer::factorial(k - 1)))
        };
        let mut value = self.modifier.exact(n)?;
        for (a, la) in &self.upper {
            value *= gamma_int(a, la)?;
        }
        for (b, lb) in &self.lower {
            value /= gamma_int(b, lb)?;
        }
        let e = i32::try_from(self.kappa as u64 * n as u64).ok()?;
        Some(value * Rational::from((&self.t).pow(e)))
    }

    /// Parses `{"upper": [[α, a], ..], "lower": [[β, b], ..], "T": "..", "modifier": {..}}`.
    ///
    /// Numbers may be JSON strings (preferred, parsed exactly) or JSON numbers.
    pub fn from_json(text: &str) -> Result<Self, HypergeomError> {
        let v: Value =
            serde_json::from_str(text).map_err(|e| HypergeomError::Malformed(e.to_string()))?;
        let obj = v
            .as_object()
            .ok_or_else(|| HypergeomError::Malformed("top level must be an object".into()))?;
        for key in obj.keys() {
            if !["upper", "lower", "T", "modifier"].contains(&key.as_str()) {
                return Err(HypergeomError::Malformed(format!("unknown field `{key}`")));
            }
        }
        let pairs = |name: &str| -> Result<Vec<(Rational, Rational)>, HypergeomError> {
            let Some(list) = obj.get(name) else {
                return if name == "upper" {
                    Ok(Vec::new())
                } else {
                    Err(HypergeomError::Malformed(format!("missing field `{name}`")))
                };
            };
            let arr = list
                .as_array()
                .ok_or_else(|| HypergeomError::Malformed(format!("`{name}` must be an array")))?;
            arr.iter()
                .enumerate()
                .map(|(i, p)| match p.as_array().map(Vec::as_slice) {
                    Some([g, l]) => Ok((
                        number(g, &format!("{name}[{i}][0]"))?,
                        number(l, &format!("{name}[{i}][1]"))?,
                    )),
                    _ => Err(HypergeomError::Malformed(format!(
                        "`{name}[{i}]` must be a pair"
                    ))),
                })
                .collect()
        };
        let upper = pairs("upper")?;
        let lower = pairs("lower")?;
        let t = match obj.get("T") {
            Some(t) => number(t, "T")?,
            None => return Err(HypergeomError::Malformed("missing field `T`".into())),
        };
        let modifier = match obj.get("modifier") {
            None => Modifier::one(),
            Some(m) => parse_modifier(m)?,
        };
        Self::new(upper, lower, t, modifier)
    }

    pub fn describe(&self) -> String {
        let f = |v: &[(Rational, Rational)]| {
            v.iter()
                .map(|(g, l)| format!("({g},{l})"))
                .collect::<Vec<_>>()
                .join("")
        };
        format!(
            "hypergeometric upper [{}] lower [{}] T = {} modifier {}",
            f(&self.upper),
            f(&self.lower),
            self.t,
            self.modifier.describe()
        )
    }
}

fn number(v: &Value, field: &str) -> Result<Rational, HypergeomError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => {
            return Err(HypergeomError::Malformed(format!(
                "`{field}` must be a number or numeric string"
            )))
        }
    };
    parse_rational(&text).map_err(|e| HypergeomError::Malformed(format!("`{field}`: {e}")))
}

fn parse_modifier(v: &Value) -> Result<Modifier, HypergeomError> {
    let kind = v
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| HypergeomError::Malformed("`modifier.kind` must be a string".into()))?;
    let list = |name: &str| -> Result<Vec<Rational>, HypergeomError> {
        v.get(name)
            .and_then(Value::as_array)
            .ok_or_else(|| {
                HypergeomError::Malformed(format!("`modifier.{name}` must be an array"))
            })?
            .iter()
            .enumerate()
            .map(|(i, c)| number(c, &format!("modifier.{name}[{i}]")))
            .collect()
    };
    let m = match kind {
        "constant" => Modifier::Constant(match v.get("value") {
            Some(c) => number(c, "modifier.value")?,
            None => Rational::from(1),
        }),
        "power" => Modifier::Power {
            gamma: number(
                v.get("gamma").ok_or_else(|| {
                    HypergeomError::Malformed("missing field `modifier.gamma`".into())
                })?,
                "modifier.gamma",
            )?,
        },
        "rational" => Modifier::Rational {
            num: list("num")?,
            den: list("den")?,
        },
        other => {
            return Err(HypergeomError::BadModifier(format!(
                "unknown kind `{other}`"
            )))
        }
    };
    m.validate()?;
    Ok(m)
}

/// Coefficients of `H(x)` in the variable `x`: zero unless `κ | n`.
pub struct HypergeomOracle<'a> {
    spec: &'a HypergeomSpec,
}

impl<'a> HypergeomOracle<'a> {
    pub fn new(spec: &'a HypergeomSpec) -> Self {
        Self { spec }
    }
}

impl CoefficientOracle for HypergeomOracle<'_> {
    fn coefficient(&self, n: usize, prec: u32) -> Option<Float> {
        let k = self.spec.kappa as usize;
        if !n.is_multiple_of(k) {
            return Some(Float::with_val(prec, 0u32));
        }
        Some(self.spec.coefficient(n / k, prec))
    }

    fn exact_coefficient(&self, n: usize) -> Option<Rational> {
        let k = self.spec.kappa as usize;
        if !n.is_multiple_of(k) {
            return Some(Rational::new());
        }
        self.spec.exact_coefficient(n / k)
    }

    fn describe(&self) -> String {
        self.spec.describe()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PeakPrediction {
    pub kappa: u32,
    #[serde(serialize_with = "ser_float")]
    pub c: Float,
    /// `C` as an exact rational when the parameters allow it.
    pub c_exact: Option<String>,
    /// `κ C^{1/κ} T`.
    #[serde(serialize_with = "ser_float")]
    pub peak_coefficient: Float,
    pub location: LocationPolynomial,
    /// Admissible window exponents, open interval.
    pub window_nu_range: (f64, f64),
}

pub fn predict_peak(spec: &HypergeomSpec, prec: u32) -> PeakPrediction {
    let peak = spec.peak_coefficient(prec);
    PeakPrediction {
        kappa: spec.kappa,
        c: spec.c_value(prec),
        c_exact: spec.c_exact().map(|c| c.to_string()),
        location: LocationPolynomial::linear(peak.clone()),
        peak_coefficient: peak,
        window_nu_range: (0.0, 0.5),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RegularityReport {
    pub n_max: usize,
    /// `sup_{1≤n<n_max} n·|A_{n+1}/A_n − 1|`.
    pub ratio_deviation_max_times_n: f64,
    /// `sup_{2≤n≤n_max} |log A_n| / log n`.
    pub log_bound_constant: f64,
    /// Smallest `M` with `((m+1)/(n+1))^{-M} ≤ A_m/A_n ≤ ((m+1)/(n+1))^M` on
    /// the sampled pairs.
    pub m_estimate: f64,
    pub sampled_pairs: usize,
}

/// Empirical check of `A_{n+1}/A_n = 1 + O(1/n)` and its consequences for a
/// whitelisted modifier.
pub fn check_sequence_regularity(
    modifier: &Modifier,
    n_max: usize,
    samples: usize,
    seed: u64,
) -> Result<RegularityReport, HypergeomError> {
    if n_max < 100 {
        return Err(HypergeomError::HorizonTooShort(n_max));
    }
    modifier.validate()?;
    let prec = 128;
    let logs: Vec<Float> = (0..=n_max)
        .map(|n| Float::with_val(prec, modifier.eval(n, prec).ln_ref()))
        .collect();
    let mut dev: f64 = 0.0;
    for n in 1..n_max {
        let ratio = Float::with_val(prec, &logs[n + 1] - &logs[n]).exp() - 1u32;
        dev = dev.max(ratio.to_f64().abs() * n as f64);
    }
    let mut log_bound: f64 = 0.0;
    for (n, l) in logs.iter().enumerate().skip(2) {
        log_bound = log_bound.max(l.to_f64().abs() / (n as f64).ln());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(usize, usize)> = vec![(0, n_max), (n_max, 0), (0, 1)];
    for _ in 0..samples {
        pairs.push((rng.gen_range(0..=n_max), rng.gen_range(0..=n_max)));
    }
    let mut m_est: f64 = 0.0;
    let mut used = 0;
    for (m, n) in pairs {
        if m == n {
            continue;
        }
        used += 1;
        let lhs = Float::with_val(prec, &logs[m] - &logs[n]).to_f64().abs();
        let rhs = ((m as f64 + 1.0) / (n as f64 + 1.0)).ln().abs();
        m_est = m_est.max(lhs / rhs);
    }
    Ok(RegularityReport {
        n_max,
        ratio_deviation_max_times_n: dev,
        log_bound_constant: log_bound,
        m_estimate: m_est,
        sampled_pairs: used,
    })
}

/// `log W_{n'}(x) = κn' log(Tx) − log Γ(κn'+1)`.
fn ln_kernel(kappa: u32, t: &Float, x: &Float, n: usize, prec: u32) -> Float {
    let k = kappa as u64 * n as u64;
    let tx = Float::with_val(prec, t * x).ln();
    tx * k - Float::with_val(prec, k + 1).ln_gamma()
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeResult {
    pub c0: f64,
    /// Smallest `K` making condition (i) hold on the scanned ranges.
    pub k: f64,
    pub ln_k: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PackageConditionRecord {
    pub x: f64,
    /// `N(x) = ⌊Tx/κ⌋`.
    pub n: usize,
    /// `⌊D·N(x)⌋`.
    pub j_start: usize,
    /// `max_{j ≥ ⌊DN⌋} W_{N+j+1}/W_{N+j}` (condition ii).
    pub q_max: f64,
    pub probes: Vec<ProbeResult>,
}

/// Default probes `c_d²·{1/8, 1/4, 1/2}` with `c_d = T/κ`.
pub fn default_c0_probes(spec: &HypergeomSpec) -> Vec<f64> {
    let cd = spec.t.to_f64() / spec.kappa as f64;
    [0.125, 0.25, 0.5].iter().map(|s| s * cd * cd).collect()
}

/// Scans the two conditions of the packaging theorem for the Gamma kernel
/// `W_{n'}(x) = (Tx)^{κn'}/Γ(κn'+1)` with `γ = 1/2`.
///
/// The kernel ratio `W_{n'+1}/W_{n'}` decreases in `n'`, so the supremum in
/// condition (ii) is attained at `j = ⌊DN⌋`; the scan covers `N` further steps
/// as a check.
pub fn check_package_conditions(
    spec: &HypergeomSpec,
    x_list: &[f64],
    d: f64,
    c0_probes: &[f64],
    prec: u32,
) -> Vec<PackageConditionRecord> {
    let kappa = spec.kappa;
    let t = Float::with_val(prec, &spec.t);
    x_list
        .iter()
        .map(|&xv| {
            let x = Float::with_val(prec, xv);
            let n = (Float::with_val(prec, &t * &x) / kappa).floor().to_f64() as usize;
            let j_start = (d * n as f64).floor() as usize;
            let lw = |m: usize| ln_kernel(kappa, &t, &x, m, prec);
            let base = lw(n);
            let mut q_max = f64::NEG_INFINITY;
            let mut prev = lw(n + j_start);
            for j in j_start..=j_start + n.max(16) {
                let next = lw(n + j + 1);
                q_max = q_max.max(Float::with_val(prec, &next - &prev).exp().to_f64());
                prev = next;
            }
            // log W_{N∓i} − log W_N over both sides of the peak
            let below: Vec<(f64, f64)> = (0..=n)
                .map(|i| (i as f64, Float::with_val(prec, lw(n - i) - &base).to_f64()))
                .collect();
            let above: Vec<(f64, f64)> = (0..=j_start)
                .map(|j| (j as f64, Float::with_val(prec, lw(n + j) - &base).to_f64()))
                .collect();
            let probes = c0_probes
                .iter()
                .map(|&c0| {
                    let ln_k = below
                        .iter()
                        .chain(&above)
                        .map(|&(i, diff)| diff + c0 * i * i / xv)
                        .fold(f64::NEG_INFINITY, f64::max);
                    ProbeResult {
                        c0,
                        k: ln_k.exp(),
                        ln_k,
                    }
                })
                .collect();
            PackageConditionRecord {
                x: xv,
                n,
                j_start,
                q_max,
                probes,
            }
        })
        .collect()
}

/// `|Γ(u+κ)/(Γ(u)u^κ) − 1|`.
pub fn gamma_ratio_deviation(u: &Float, kappa: u32, prec: u32) -> Float {
    let lg = |v: Float| v.ln_gamma();
    let num = lg(Float::with_val(prec, u + kappa));
    let den = lg(Float::with_val(prec, u));
    let log_u = Float::with_val(prec, u.ln_ref()) * kappa;
    let r = Float::with_val(prec, num - den - log_u).exp();
    (r - 1u32).abs()
}

/// Concentration window for a spec: location `κC^{1/κ}T·x` and window
/// constant `(κC^{1/κ}T)^{−ν}`.
pub fn spec_config(
    spec: &HypergeomSpec,
    nu: &Float,
    policy: TruncationPolicy,
) -> Result<ConcentrationConfig, HypergeomError> {
    let prec = policy.prec;
    let peak = spec.peak_coefficient(prec);
    let c_window = Float::with_val(prec, (&peak).pow(&Float::with_val(prec, -nu)));
    Ok(ConcentrationConfig::new(
        LocationPolynomial::linear(peak),
        c_window,
        Float::with_val(prec, nu),
        policy,
    )?)
}

/// Builds the `x`-series oracle and measures it in the predicted window.
///
/// `ν` must lie in `(0, 1/2)`.
pub fn evaluate_and_measure(
    spec: &HypergeomSpec,
    nu: &Float,
    x_grid: &[Float],
    policy: TruncationPolicy,
) -> Result<ConcentrationReport, HypergeomError> {
    if *nu <= 0 || *nu >= 0.5 {
        return Err(HypergeomError::NuOutOfRange(mp::fmt_float(nu)));
    }
    evaluate_and_measure_exploratory(spec, nu, x_grid, policy)
}

/// [`evaluate_and_measure`] without the range check on `ν`.
pub fn evaluate_and_measure_exploratory(
    spec: &HypergeomSpec,
    nu: &Float,
    x_grid: &[Float],
    policy: TruncationPolicy,
) -> Result<ConcentrationReport, HypergeomError> {
    let config = spec_config(spec, nu, policy)?;
    let oracle = HypergeomOracle::new(spec);
    Ok(concentration::measure(&oracle, &config, x_grid)?)
}
