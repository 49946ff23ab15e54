//! Random-walk reading of constant terms.
//!
//! For `g = f^r` and the conifold point `x_con`, the numbers
//! `p_ℓ = c_ℓ x_con^ℓ / T_g` are the step probabilities of a zero-mean walk on
//! the support lattice, and `Cst(g^{n'}) / T_g^{n'}` is its `n'`-step return
//! probability. The local CLT predicts `q_{n'} ≈ n'^{-m/2} (c + O(n'^{-1/2}))`.

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Rational};
use serde::Serialize;

use crate::conifold::evaluate_log;
use crate::laurent::{
    detect_index, lattice_rank, LaurentError, LaurentPolynomial, DEFAULT_INDEX_HORIZON,
};
use crate::mp::{self, ser_float, ser_float_vec};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WalkError {
    #[error("return probabilities need a model of index 1, found index {0}")]
    IndexNotOne(usize),
    #[error(
        "LCLT fit needs at least {needed} positive samples past n' = {n_min_fit}, found {found}"
    )]
    InsufficientSamples {
        needed: usize,
        found: usize,
        n_min_fit: usize,
    },
    #[error("n_min_fit must be at least 2")]
    FitWindowTooEarly,
    #[error("conifold value must be positive")]
    NonPositiveValue,
    #[error("invalid step distribution: {0}")]
    BadDistribution(String),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

#[derive(Debug, Clone, Serialize)]
pub struct StepDistribution {
    pub dim: usize,
    #[serde(serialize_with = "ser_steps")]
    pub steps: Vec<(Vec<i64>, Float)>,
    pub lattice_rank: usize,
    /// `Σ p_ℓ ℓ`.
    #[serde(serialize_with = "ser_float_vec")]
    pub mean: Vec<Float>,
    pub precision: u32,
}

fn ser_steps<S: serde::Serializer>(steps: &[(Vec<i64>, Float)], s: S) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Step<'a> {
        step: &'a [i64],
        probability: String,
    }
    s.collect_seq(steps.iter().map(|(e, p)| Step {
        step: e,
        probability: mp::fmt_float(p),
    }))
}

impl StepDistribution {
    /// Probabilities `c_ℓ e^{ℓ·y} / g(e^y)` at the logarithmic point `y`.
    pub fn at_log_point(
        g: &LaurentPolynomial,
        y: &[Float],
        prec: u32,
    ) -> Result<Self, LaurentError> {
        if g.is_zero() {
            return Err(LaurentError::ZeroPolynomial);
        }
        if y.len() != g.num_vars() {
            return Err(LaurentError::DimensionMismatch {
                expected: g.num_vars(),
                found: y.len(),
            });
        }
        let ev = evaluate_log(g, y, prec, false);
        let m = g.num_vars();
        let mut mean = vec![Float::with_val(prec, 0u32); m];
        let mut steps = Vec::with_capacity(g.len());
        for ((e, _), w) in g.terms().iter().zip(&ev.weights) {
            let p = Float::with_val(prec, w / &ev.value);
            for (mi, ei) in mean.iter_mut().zip(e) {
                *mi += Float::with_val(prec, &p * *ei);
            }
            steps.push((e.clone(), p));
        }
        let support: Vec<Vec<i64>> = g.terms().iter().map(|(e, _)| e.clone()).collect();
        Ok(Self {
            dim: m,
            steps,
            lattice_rank: lattice_rank(&support),
            mean,
            precision: prec,
        })
    }

    pub fn total_probability(&self) -> Float {
        let mut s = Float::with_val(self.precision, 0u32);
        for (_, p) in &self.steps {
            s += p;
        }
        s
    }

    pub fn mean_norm(&self) -> Float {
        mp::norm2(&self.mean, self.precision)
    }

    pub fn probability(&self, step: &[i64]) -> Option<&Float> {
        self.steps.iter().find(|(e, _)| e == step).map(|(_, p)| p)
    }
}

/// `q_{n'} = Cst(g^{n'}) / T_g^{n'}` for `n' = 0..=n_max`.
pub fn return_probabilities(
    g: &LaurentPolynomial,
    t_g: &Float,
    n_max: usize,
    prec: u32,
) -> Result<Vec<Float>, WalkError> {
    let horizon = n_max.max(DEFAULT_INDEX_HORIZON);
    let cst = g.cst_sequence(horizon)?;
    let r = detect_index(&cst)?;
    if r != 1 {
        return Err(WalkError::IndexNotOne(r));
    }
    return_probabilities_from_constant_terms(&cst, 1, t_g, n_max, prec)
}

/// Return probabilities of the walk for `g = f^r` read off `Cst(fⁿ)`:
/// `q_{n'} = Cst(f^{r n'}) / T_con^{r n'}` for `n' = 0..=n_prime_max`.
///
/// Values are clamped to `[0, 1]`; the bound `Cst(gⁿ) ≤ g(x_con)ⁿ` is exact,
/// so clamping only removes rounding in `T_con^{rn'}`.
pub fn return_probabilities_from_constant_terms(
    cst_f: &[Rational],
    r: usize,
    t_con: &Float,
    n_prime_max: usize,
    prec: u32,
) -> Result<Vec<Float>, WalkError> {
    if *t_con <= 0 {
        return Err(WalkError::NonPositiveValue);
    }
    let t = Float::with_val(prec, t_con);
    let one = Float::with_val(prec, 1u32);
    let mut out = Vec::with_capacity(n_prime_max + 1);
    for k in 0..=n_prime_max {
        let n = k * r;
        let Some(c) = cst_f.get(n) else { break };
        let denom = Float::with_val(prec, (&t).pow(n as u32));
        let q = Float::with_val(prec, c) / denom;
        out.push(if q > one { one.clone() } else { q });
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct LcltFit {
    pub m: usize,
    pub n_min_fit: usize,
    /// `(n', q_{n'})` used in the fit.
    #[serde(serialize_with = "ser_samples")]
    pub samples: Vec<(usize, Float)>,
    /// Extrapolated limit of `q_{n'} n'^{m/2}`.
    #[serde(serialize_with = "ser_float")]
    pub c_hat: Float,
    /// Coefficient of `n'^{-1/2}` in the extrapolation.
    #[serde(serialize_with = "ser_float")]
    pub b_hat: Float,
    /// Log–log slope of `|q_{n'} n'^{m/2} - c_hat|`; NaN when undefined.
    pub residual_exponent: f64,
    /// Log–log slope of `q_{n'}` itself, expected near `-m/2`.
    pub m_over_2_check: f64,
}

fn ser_samples<S: serde::Serializer>(v: &[(usize, Float)], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|(n, q)| (n, mp::fmt_float(q))))
}

/// Default start of the fit window: `max(10, n_max/4)`.
pub fn default_fit_start(n_max: usize) -> usize {
    (n_max / 4).max(10)
}

/// Least-squares fit of `q_{n'} n'^{m/2} = c + b u + e u²` with `u = n'^{-1/2}`.
///
/// The quadratic term absorbs the `O(1/n')` correction, which would otherwise
/// bias `c` at the window sizes used here.
pub fn fit_lclt(q: &[Float], m: usize, n_min_fit: usize) -> Result<LcltFit, WalkError> {
    if n_min_fit < 2 {
        return Err(WalkError::FitWindowTooEarly);
    }
    let prec = q.first().map_or(mp::DEFAULT_PREC, Float::prec);
    let samples: Vec<(usize, Float)> = q
        .iter()
        .enumerate()
        .skip(n_min_fit)
        .filter(|(_, v)| **v > 0)
        .map(|(n, v)| (n, v.clone()))
        .collect();
    const NEEDED: usize = 4;
    if samples.len() < NEEDED {
        return Err(WalkError::InsufficientSamples {
            needed: NEEDED,
            found: samples.len(),
            n_min_fit,
        });
    }
    let half_m = Rational::from((m as i64, 2));
    let scaled: Vec<Float> = samples
        .iter()
        .map(|(n, v)| {
            let nf = Float::with_val(prec, *n as u64);
            Float::with_val(prec, v * nf.pow(Float::with_val(prec, &half_m)))
        })
        .collect();
    let design: Vec<Vec<Float>> = samples
        .iter()
        .map(|(n, _)| {
            let u = Float::with_val(prec, *n as u64).sqrt().recip();
            let u2 = Float::with_val(prec, &u * &u);
            vec![Float::with_val(prec, 1u32), u, u2]
        })
        .collect();
    let beta = mp::lstsq(&design, &scaled, prec).ok_or(WalkError::InsufficientSamples {
        needed: NEEDED,
        found: samples.len(),
        n_min_fit,
    })?;
    let c_hat = beta[0].clone();
    let b_hat = beta[1].clone();

    let ln_n: Vec<f64> = samples.iter().map(|(n, _)| (*n as f64).ln()).collect();
    let ln_q: Vec<f64> = samples
        .iter()
        .map(|(_, v)| Float::with_val(prec, v.ln_ref()).to_f64())
        .collect();
    let m_over_2_check = mp::linear_fit(&ln_n, &ln_q).map_or(f64::NAN, |f| f.slope);

    let (xs, ys): (Vec<f64>, Vec<f64>) = samples
        .iter()
        .zip(&scaled)
        .filter_map(|((n, _), s)| {
            let d = Float::with_val(prec, s - &c_hat).abs();
            (!d.is_zero()).then(|| ((*n as f64).ln(), Float::with_val(prec, d.ln_ref()).to_f64()))
        })
        .unzip();
    let residual_exponent = if xs.len() >= NEEDED {
        mp::linear_fit(&xs, &ys).map_or(f64::NAN, |f| f.slope)
    } else {
        f64::NAN
    };

    Ok(LcltFit {
        m,
        n_min_fit,
        samples,
        c_hat,
        b_hat,
        residual_exponent,
        m_over_2_check,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub n_steps: usize,
    pub trials: u64,
    pub hits: u64,
    pub seed: u64,
    pub estimate: f64,
    /// Binomial standard error `sqrt(p(1-p)/trials)`.
    pub std_error: f64,
}

/// Fraction of `n_trials` independent `n_steps`-step walks ending at the origin.
///
/// Trial `i` draws from ChaCha8 seeded with `seed` on stream `i`, so the result
/// is independent of the thread count.
pub fn monte_carlo_return(
    dist: &StepDistribution,
    n_steps: usize,
    n_trials: u64,
    seed: u64,
) -> Result<MonteCarloEstimate, WalkError> {
    let weights: Vec<f64> = dist.steps.iter().map(|(_, p)| p.to_f64()).collect();
    let sampler =
        WeightedIndex::new(&weights).map_err(|e| WalkError::BadDistribution(e.to_string()))?;
    let dim = dist.dim;
    let hits = (0..n_trials)
        .into_par_iter()
        .filter(|&trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial);
            let mut pos = vec![0i64; dim];
            for _ in 0..n_steps {
                let (step, _) = &dist.steps[sampler.sample(&mut rng)];
                for (p, s) in pos.iter_mut().zip(step) {
                    *p += s;
                }
            }
            pos.iter().all(|&p| p == 0)
        })
        .count() as u64;
    let estimate = if n_trials == 0 {
        0.0
    } else {
        hits as f64 / n_trials as f64
    };
    let std_error = if n_trials == 0 {
        0.0
    } else {
        (estimate * (1.0 - estimate) / n_trials as f64).sqrt()
    };
    Ok(MonteCarloEstimate {
        n_steps,
        trials: n_trials,
        hits,
        seed,
        estimate,
        std_error,
    })
}
