use std::sync::Mutex;

use rug::{Float, Integer, Rational};

use crate::laurent::{ConstantTermGenerator, LaurentError, LaurentPolynomial};

/// A coefficient sequence `n ↦ aₙ ≥ 0` evaluated at a requested precision.
///
/// Implementations must be safe to call from several threads at once.
pub trait CoefficientOracle: Sync {
    /// `aₙ` rounded to `prec` bits, or `None` if the oracle cannot produce it
    /// (for example a finite table that has run out).
    fn coefficient(&self, n: usize, prec: u32) -> Option<Float>;

    /// `aₙ` as an exact rational, when the oracle is exact.
    fn exact_coefficient(&self, _n: usize) -> Option<Rational> {
        None
    }

    /// Index past which every coefficient is known to vanish.
    fn support_bound(&self) -> Option<usize> {
        None
    }

    fn describe(&self) -> String;
}

/// `1/n!` to `prec` bits, through `exp(-lnΓ(n+1))` with guard bits so that
/// large `n` stays cheap.
pub fn inverse_factorial(n: usize, prec: u32) -> Float {
    if n <= 1 {
        return Float::with_val(prec, 1u32);
    }
    let guard = prec + 64;
    let lg = Float::with_val(guard, n as u64 + 1).ln_gamma();
    Float::with_val(prec, (-lg).exp())
}

/// `aₙ = 1/n!`, the coefficients of `eˣ`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExponentialOracle;

impl CoefficientOracle for ExponentialOracle {
    fn coefficient(&self, n: usize, prec: u32) -> Option<Float> {
        Some(inverse_factorial(n, prec))
    }

    fn exact_coefficient(&self, n: usize) -> Option<Rational> {
        let n = u32::try_from(n).ok()?;
        Some(Rational::from((1, Integer::from(Integer::factorial(n)))))
    }

    fn describe(&self) -> String {
        "a_n = 1/n!".into()
    }
}

/// A finite table of exact coefficients; everything past the table is zero.
#[derive(Debug, Clone)]
pub struct RationalTableOracle {
    values: Vec<Rational>,
    label: String,
}

impl RationalTableOracle {
    pub fn new(values: Vec<Rational>, label: impl Into<String>) -> Self {
        Self {
            values,
            label: label.into(),
        }
    }

    /// A polynomial: the series is finite.
    pub fn polynomial(values: Vec<Rational>) -> Self {
        Self::new(values, "finite polynomial")
    }
}

impl CoefficientOracle for RationalTableOracle {
    fn coefficient(&self, n: usize, prec: u32) -> Option<Float> {
        Some(match self.values.get(n) {
            Some(v) => Float::with_val(prec, v),
            None => Float::with_val(prec, 0u32),
        })
    }

    fn exact_coefficient(&self, n: usize) -> Option<Rational> {
        Some(self.values.get(n).cloned().unwrap_or_default())
    }

    fn support_bound(&self) -> Option<usize> {
        Some(self.values.iter().rposition(|v| *v != 0).unwrap_or(0))
    }

    fn describe(&self) -> String {
        self.label.clone()
    }
}

/// Wraps a closure `(n, prec) ↦ aₙ`.
pub struct FnOracle<F> {
    f: F,
    label: String,
}

impl<F: Fn(usize, u32) -> Float + Sync> FnOracle<F> {
    pub fn new(label: impl Into<String>, f: F) -> Self {
        Self {
            f,
            label: label.into(),
        }
    }
}

impl<F: Fn(usize, u32) -> Float + Sync> CoefficientOracle for FnOracle<F> {
    fn coefficient(&self, n: usize, prec: u32) -> Option<Float> {
        Some((self.f)(n, prec))
    }

    fn describe(&self) -> String {
        self.label.clone()
    }
}

/// Quantum period coefficients `Gₙ = Cst(fⁿ)/n!`, extended on demand.
pub struct PeriodOracle {
    generator: Mutex<ConstantTermGenerator>,
    /// Hard cap on `n`; beyond it the oracle reports exhaustion.
    horizon: usize,
    label: String,
}

impl PeriodOracle {
    pub fn new(f: &LaurentPolynomial, horizon: usize) -> Result<Self, LaurentError> {
        Ok(Self {
            generator: Mutex::new(ConstantTermGenerator::new(f)?),
            horizon,
            label: format!("G_n = Cst(f^n)/n!, f = {f}"),
        })
    }

    /// Computes constant terms up to `n_max` ahead of time, so that parallel
    /// callers do not serialize on the generator.
    pub fn prefetch(&self, n_max: usize) -> Result<(), LaurentError> {
        let mut g = self.generator.lock().expect("generator lock");
        g.extend_to(n_max.min(self.horizon))
    }

    /// `Cst(fⁿ)`.
    pub fn constant_term(&self, n: usize) -> Option<Rational> {
        if n > self.horizon {
            return None;
        }
        let mut g = self.generator.lock().expect("generator lock");
        if g.len() <= n {
            g.extend_to(n).ok()?;
        }
        Some(g.values()[n].clone())
    }
}

impl CoefficientOracle for PeriodOracle {
    fn coefficient(&self, n: usize, prec: u32) -> Option<Float> {
        let c = self.constant_term(n)?;
        if c == 0 {
            return Some(Float::with_val(prec, 0u32));
        }
        let guard = prec + 32;
        let value = Float::with_val(guard, &c) * inverse_factorial(n, guard);
        Some(Float::with_val(prec, value))
    }

    fn exact_coefficient(&self, n: usize) -> Option<Rational> {
        let c = self.constant_term(n)?;
        let fact = Integer::from(Integer::factorial(u32::try_from(n).ok()?));
        Some(c / fact)
    }

    fn describe(&self) -> String {
        self.label.clone()
    }
}

/// Multiplies a base oracle pointwise by a non-negative weight `n ↦ wₙ`.
pub struct ScaledOracle<'a, W> {
    base: &'a dyn CoefficientOracle,
    weight: W,
    label: String,
}

impl<'a, W: Fn(usize, u32) -> Float + Sync> ScaledOracle<'a, W> {
    pub fn new(base: &'a dyn CoefficientOracle, label: impl Into<String>, weight: W) -> Self {
        Self {
            base,
            weight,
            label: label.into(),
        }
    }
}

impl<W: Fn(usize, u32) -> Float + Sync> CoefficientOracle for ScaledOracle<'_, W> {
    fn coefficient(&self, n: usize, prec: u32) -> Option<Float> {
        let a = self.base.coefficient(n, prec)?;
        if a.is_zero() {
            return Some(a);
        }
        Some(a * (self.weight)(n, prec))
    }

    fn support_bound(&self) -> Option<usize> {
        self.base.support_bound()
    }

    fn describe(&self) -> String {
        format!("{} times {}", self.base.describe(), self.label)
    }
}
