//! End-to-end pipelines shared by the command-line tool and the acceptance
//! suite.

use rug::ops::Pow;
use rug::Float;
use serde::Serialize;

use crate::concentration::{self, ConcentrationConfig, ConcentrationReport, LocationPolynomial};
use crate::conifold::{find_conifold, step_distribution, ConifoldConfig, ConifoldResult};
use crate::laurent::{detect_index, LaurentPolynomial, DEFAULT_INDEX_HORIZON};
use crate::mp::ser_float_vec;
use crate::series::{self, PeriodOracle, TAConEstimate, TruncationPolicy};
use crate::walk::{self, LcltFit, StepDistribution};
use crate::Error;

#[derive(Debug, Clone, Serialize)]
pub struct WalkAnalysis {
    pub index_r: usize,
    pub conifold: ConifoldResult,
    /// Steps of `g = f^r` at the conifold point.
    pub distribution: StepDistribution,
    /// Largest step count, `⌊n_max / r⌋`.
    pub n_prime_max: usize,
    /// `q_{n'}` for `n' = 0..=n_prime_max`.
    #[serde(serialize_with = "ser_float_vec")]
    pub return_probabilities: Vec<Float>,
    pub fit: LcltFit,
}

/// Conifold point, walk of `g = f^r` and LCLT fit, using `Cst(fⁿ)` for
/// `n ≤ n_max`.
pub fn walk_analysis(
    f: &LaurentPolynomial,
    n_max: usize,
    prec: u32,
) -> Result<WalkAnalysis, Error> {
    let conifold = find_conifold(f, &ConifoldConfig::with_prec(prec))?;
    let cst = f.cst_sequence(n_max.max(DEFAULT_INDEX_HORIZON))?;
    let index_r = detect_index(&cst)?;
    let g = f.power(index_r as u32)?;
    let distribution = step_distribution(&g, &conifold)?;
    let n_prime_max = n_max / index_r;
    let q = walk::return_probabilities_from_constant_terms(
        &cst,
        index_r,
        &conifold.value,
        n_prime_max,
        prec,
    )?;
    let fit = walk::fit_lclt(
        &q,
        distribution.lattice_rank,
        walk::default_fit_start(n_prime_max),
    )?;
    Ok(WalkAnalysis {
        index_r,
        conifold,
        distribution,
        n_prime_max,
        return_probabilities: q,
        fit,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PeriodConcentration {
    pub t_a_con: TAConEstimate,
    pub report: ConcentrationReport,
}

/// Measures `Σ Gₙ tⁿ` in the window `T̂t(1 ± T̂^{−ν} t^{−ν})`, with `T̂`
/// estimated from `Gₙ` for `n ≤ n_max`.
///
/// With `grid = None` the default grid of the resulting config is used. When
/// `ν ∈ (0, 1/2)` the report records the claimed `β = 1 − 2ν`.
pub fn period_concentration(
    f: &LaurentPolynomial,
    nu: &Float,
    grid: Option<&[Float]>,
    n_max: usize,
    policy: TruncationPolicy,
) -> Result<PeriodConcentration, Error> {
    let prec = policy.prec;
    let seq = series::quantum_period(f, n_max)?;
    let est = series::estimate_t_a_con_at(&seq, prec)?;
    let t_hat = est.value.clone();
    let window_c = Float::with_val(prec, (&t_hat).pow(&Float::with_val(prec, -nu)));
    let mut config = ConcentrationConfig::new(
        LocationPolynomial::linear(t_hat.clone()),
        window_c,
        Float::with_val(prec, nu),
        policy,
    )?;
    if *nu > 0 && *nu < 0.5 {
        config.claimed_beta = Some(Float::with_val(prec, 1u32) - Float::with_val(prec, nu * 2u32));
    }
    config.warnings.extend(est.warnings.iter().cloned());
    let grid = match grid {
        Some(g) => g.to_vec(),
        None => concentration::default_grid(&config),
    };
    // Terms beyond about twice the peak are negligible at any working
    // precision; the horizon only guards against runaway evaluation.
    let x_max = grid.last().map_or(0.0, Float::to_f64);
    let horizon = (4.0 * t_hat.to_f64() * x_max) as usize + 400;
    let oracle = PeriodOracle::new(f, horizon)?;
    let report = concentration::measure(&oracle, &config, &grid)?;
    Ok(PeriodConcentration {
        t_a_con: est,
        report,
    })
}
