//! Conifold point of a convenient Laurent polynomial with non-negative
//! coefficients.
//!
//! In logarithmic coordinates `y = log x` the restriction of `f` to the
//! positive orthant becomes `F(y) = Σ c_ℓ e^{ℓ·y}`, which is strictly convex
//! and coercive when `f` is convenient. Its unique minimizer is the conifold
//! point and `F(y*)` is the conifold value `T_con`.

use rug::ops::Pow;
use rug::Float;
use serde::Serialize;

use crate::laurent::{LaurentError, LaurentPolynomial};
use crate::mp::{self, ser_float, ser_float_vec};
use crate::walk::StepDistribution;

#[derive(Debug, Clone)]
pub struct ConifoldConfig {
    /// Working precision in bits.
    pub prec: u32,
    /// Tolerance on `‖∇F‖₂ / F`; `None` means `2^{-(prec-56)}`.
    pub tol: Option<Float>,
    pub max_iter: usize,
}

impl Default for ConifoldConfig {
    fn default() -> Self {
        Self {
            prec: mp::DEFAULT_PREC,
            tol: None,
            max_iter: 100,
        }
    }
}

impl ConifoldConfig {
    pub fn with_prec(prec: u32) -> Self {
        Self {
            prec,
            ..Self::default()
        }
    }

    pub fn tolerance(&self) -> Float {
        match &self.tol {
            Some(t) => Float::with_val(self.prec, t),
            None => mp::pow2_neg(self.prec.saturating_sub(56).max(8), self.prec),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConifoldResult {
    /// `x_con`, coordinate-wise positive.
    #[serde(serialize_with = "ser_float_vec")]
    pub point: Vec<Float>,
    /// `log x_con`.
    #[serde(serialize_with = "ser_float_vec")]
    pub log_point: Vec<Float>,
    /// `T_con = f(x_con)`.
    #[serde(serialize_with = "ser_float")]
    pub value: Float,
    /// Determinant of the Hessian of `F` in logarithmic coordinates at `y*`.
    #[serde(serialize_with = "ser_float")]
    pub hessian_log_det: Float,
    /// Achieved `‖∇F(y*)‖₂`.
    #[serde(serialize_with = "ser_float")]
    pub gradient_norm: Float,
    pub iterations: usize,
    pub precision: u32,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConifoldError {
    #[error("model is not convenient: the origin is not interior to its Newton polytope")]
    NotConvenient,
    #[error("support lattice has rank {rank} < {m}; the Hessian is singular")]
    DegenerateLattice { rank: usize, m: usize },
    #[error("Newton iteration did not converge in {iterations} steps (relative gradient {relative_gradient}, best point {best_point:?})")]
    NoConvergence {
        iterations: usize,
        relative_gradient: String,
        best_point: Vec<String>,
    },
    #[error("non-positive tolerance")]
    BadTolerance,
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// Value, gradient and Hessian of `F` at `y`, all divided by `e^{shift}`.
pub(crate) struct Evaluation {
    pub shift: Float,
    pub value: Float,
    pub gradient: Vec<Float>,
    pub hessian: Vec<Vec<Float>>,
    /// `c_ℓ e^{ℓ·y - shift}` per term.
    pub weights: Vec<Float>,
}

impl Evaluation {
    fn full_value(&self, prec: u32) -> Float {
        Float::with_val(prec, self.shift.exp_ref()) * &self.value
    }
}

pub(crate) fn evaluate_log(
    f: &LaurentPolynomial,
    y: &[Float],
    prec: u32,
    derivatives: bool,
) -> Evaluation {
    let m = f.num_vars();
    let exponents: Vec<Float> = f
        .terms()
        .iter()
        .map(|(e, _)| {
            let mut s = Float::with_val(prec, 0u32);
            for (ei, yi) in e.iter().zip(y) {
                s += Float::with_val(prec, yi * *ei);
            }
            s
        })
        .collect();
    let shift = exponents
        .iter()
        .max_by(|a, b| a.partial_cmp(b).expect("finite exponents"))
        .cloned()
        .unwrap_or_else(|| Float::with_val(prec, 0u32));
    let mut value = Float::with_val(prec, 0u32);
    let mut gradient = vec![Float::with_val(prec, 0u32); if derivatives { m } else { 0 }];
    let mut hessian = vec![vec![Float::with_val(prec, 0u32); m]; if derivatives { m } else { 0 }];
    let mut weights = Vec::with_capacity(exponents.len());
    for ((e, c), s) in f.terms().iter().zip(&exponents) {
        let w = Float::with_val(prec, c) * Float::with_val(prec, s - &shift).exp();
        value += &w;
        if derivatives {
            for i in 0..m {
                if e[i] == 0 {
                    continue;
                }
                let wi = Float::with_val(prec, &w * e[i]);
                gradient[i] += &wi;
                for j in 0..m {
                    if e[j] != 0 {
                        hessian[i][j] += Float::with_val(prec, &wi * e[j]);
                    }
                }
            }
        }
        weights.push(w);
    }
    Evaluation {
        shift,
        value,
        gradient,
        hessian,
        weights,
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(matrix: &[Vec<Float>], prec: u32) -> Float {
    let k = matrix.len();
    let mut a: Vec<Vec<Float>> = matrix.to_vec();
    let mut det = Float::with_val(prec, 1u32);
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&p, &q| {
                Float::with_val(prec, a[p][col].abs_ref())
                    .partial_cmp(&Float::with_val(prec, a[q][col].abs_ref()))
                    .expect("finite entries")
            })
            .expect("non-empty range");
        if a[pivot][col].is_zero() {
            return Float::with_val(prec, 0u32);
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= &a[col][col];
        for row in col + 1..k {
            let factor = Float::with_val(prec, &a[row][col] / &a[col][col]);
            for j in col..k {
                let delta = Float::with_val(prec, &factor * &a[col][j]);
                a[row][j] -= delta;
            }
        }
    }
    det
}

/// Leading principal minors `det(H[..k, ..k])` for `k = 1..=m`.
pub fn leading_principal_minors(matrix: &[Vec<Float>], prec: u32) -> Vec<Float> {
    (1..=matrix.len())
        .map(|k| {
            let sub: Vec<Vec<Float>> = matrix[..k].iter().map(|r| r[..k].to_vec()).collect();
            determinant(&sub, prec)
        })
        .collect()
}

/// Hessian of `F` in logarithmic coordinates at `log_point`, unscaled.
pub fn log_hessian(f: &LaurentPolynomial, log_point: &[Float], prec: u32) -> Vec<Vec<Float>> {
    let ev = evaluate_log(f, log_point, prec, true);
    let scale = Float::with_val(prec, ev.shift.exp_ref());
    ev.hessian
        .into_iter()
        .map(|row| row.into_iter().map(|h| h * &scale).collect())
        .collect()
}

/// Minimizes `F(y) = Σ c_ℓ e^{ℓ·y}` by damped Newton from `y = 0`.
pub fn find_conifold(
    f: &LaurentPolynomial,
    config: &ConifoldConfig,
) -> Result<ConifoldResult, ConifoldError> {
    let prec = config.prec;
    let m = f.num_vars();
    let info = f.newton_info()?;
    if info.support_lattice_rank < m {
        return Err(ConifoldError::DegenerateLattice {
            rank: info.support_lattice_rank,
            m,
        });
    }
    if !info.contains_origin_interior {
        return Err(ConifoldError::NotConvenient);
    }
    let tol = config.tolerance();
    if tol <= 0 {
        return Err(ConifoldError::BadTolerance);
    }
    // below this relative Newton decrement the quadratic model is exact to
    // working precision, so the line search is skipped
    let full_step_decrement = mp::pow2_neg(prec / 2, prec);
    let armijo = Float::with_val(prec, 1e-4f64);

    let mut y = vec![Float::with_val(prec, 0u32); m];
    let mut iterations = 0;
    loop {
        let ev = evaluate_log(f, &y, prec, true);
        let rel_grad = Float::with_val(prec, mp::norm2(&ev.gradient, prec) / &ev.value);
        if rel_grad <= tol {
            return Ok(finish(f, y, &ev, iterations, prec));
        }
        if iterations >= config.max_iter {
            return Err(ConifoldError::NoConvergence {
                iterations,
                relative_gradient: mp::fmt_float(&rel_grad),
                best_point: y
                    .iter()
                    .map(|v| mp::fmt_float(&Float::with_val(prec, v.exp_ref())))
                    .collect(),
            });
        }
        iterations += 1;

        let augmented: Vec<Vec<Float>> = ev
            .hessian
            .iter()
            .zip(&ev.gradient)
            .map(|(row, g)| {
                let mut r = row.clone();
                r.push(Float::with_val(prec, -g));
                r
            })
            .collect();
        let Some(direction) = mp::solve_augmented(augmented, prec) else {
            return Err(ConifoldError::DegenerateLattice {
                rank: info.support_lattice_rank,
                m,
            });
        };
        // slope = ∇F·d < 0, decrement² = -slope / F (both in scaled units)
        let mut slope = Float::with_val(prec, 0u32);
        for (g, d) in ev.gradient.iter().zip(&direction) {
            slope += Float::with_val(prec, g * d);
        }
        let decrement = -Float::with_val(prec, &slope / &ev.value);
        if decrement <= full_step_decrement {
            for (yi, di) in y.iter_mut().zip(&direction) {
                *yi += di;
            }
            continue;
        }

        let f0 = ev.full_value(prec);
        let slope_full = Float::with_val(prec, ev.shift.exp_ref()) * &slope;
        let mut t = Float::with_val(prec, 1u32);
        let mut accepted = false;
        for _ in 0..200 {
            let trial: Vec<Float> = y
                .iter()
                .zip(&direction)
                .map(|(yi, di)| Float::with_val(prec, yi + Float::with_val(prec, di * &t)))
                .collect();
            let ft = evaluate_log(f, &trial, prec, false).full_value(prec);
            let bound = Float::with_val(
                prec,
                &f0 + Float::with_val(prec, &armijo * &t) * &slope_full,
            );
            if ft <= bound {
                y = trial;
                accepted = true;
                break;
            }
            t /= 2u32;
        }
        if !accepted {
            return Err(ConifoldError::NoConvergence {
                iterations,
                relative_gradient: mp::fmt_float(&rel_grad),
                best_point: y
                    .iter()
                    .map(|v| mp::fmt_float(&Float::with_val(prec, v.exp_ref())))
                    .collect(),
            });
        }
    }
}

fn finish(
    f: &LaurentPolynomial,
    y: Vec<Float>,
    ev: &Evaluation,
    iterations: usize,
    prec: u32,
) -> ConifoldResult {
    let scale = Float::with_val(prec, ev.shift.exp_ref());
    let value = Float::with_val(prec, &ev.value * &scale);
    let gradient: Vec<Float> = ev
        .gradient
        .iter()
        .map(|g| Float::with_val(prec, g * &scale))
        .collect();
    let hessian = log_hessian(f, &y, prec);
    ConifoldResult {
        point: y
            .iter()
            .map(|v| Float::with_val(prec, v.exp_ref()))
            .collect(),
        log_point: y,
        value,
        hessian_log_det: determinant(&hessian, prec),
        gradient_norm: mp::norm2(&gradient, prec),
        iterations,
        precision: prec,
    }
}

/// Step distribution `p_ℓ = c_ℓ x_con^ℓ / T_g` of the walk attached to `g`.
pub fn step_distribution(
    g: &LaurentPolynomial,
    conifold: &ConifoldResult,
) -> Result<StepDistribution, LaurentError> {
    if conifold.log_point.len() != g.num_vars() {
        return Err(LaurentError::DimensionMismatch {
            expected: g.num_vars(),
            found: conifold.log_point.len(),
        });
    }
    StepDistribution::at_log_point(g, &conifold.log_point, conifold.precision)
}

impl ConifoldResult {
    /// `T_con^r`, the conifold value of `f^r`.
    pub fn value_pow(&self, r: u32) -> Float {
        Float::with_val(self.precision, (&self.value).pow(r))
    }
}
