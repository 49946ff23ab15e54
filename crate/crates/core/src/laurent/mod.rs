//! Exact sparse multivariate Laurent polynomials with non-negative rational
//! coefficients.
//!
//! These are the weak Landau–Ginzburg models `f ∈ ℚ≥0[x₁^±, …, x_m^±]` whose
//! constant-term sequence `Cst(fⁿ)` defines the quantum period.

mod cst;
mod model_file;
mod polytope;

use std::collections::HashMap;
use std::fmt;

use rug::ops::Pow;
use rug::{Integer, Rational};

pub use cst::ConstantTermGenerator;
pub use model_file::{ModelFile, ModelFileError, TermRecord};
pub use polytope::{lattice_rank, NewtonPolytopeInfo};

/// Horizon used by [`LaurentPolynomial::index`] unless configured otherwise.
pub const DEFAULT_INDEX_HORIZON: usize = 60;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LaurentError {
    #[error("a Laurent polynomial needs at least one variable")]
    NoVariables,
    #[error("exponent vector has {found} entries, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("negative coefficient {coeff} at exponent {exp:?}")]
    NegativeCoefficient { exp: Vec<i64>, coeff: String },
    #[error("duplicate exponent vector {0:?}")]
    DuplicateExponent(Vec<i64>),
    #[error("exponent overflow while combining exponent vectors")]
    ExponentOverflow,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("index undetectable at horizon {horizon}: all constant terms for 1 <= n <= {horizon} vanish")]
    IndexUndetectable { horizon: usize },
    #[error("index cross-check failed: Cst(f^{n}) != 0 but {r} does not divide {n}")]
    IndexInconsistent { n: usize, r: usize },
}

/// A Laurent polynomial with exact, strictly positive stored coefficients.
///
/// Terms are kept sorted lexicographically by exponent vector, so iteration
/// order (and everything serialized from it) is deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    num_vars: usize,
    terms: Vec<(Vec<i64>, Rational)>,
}

impl LaurentPolynomial {
    /// Builds a polynomial from `(exponent, coefficient)` pairs.
    ///
    /// Zero coefficients are dropped; negative coefficients and repeated
    /// exponent vectors are rejected.
    pub fn new<I>(num_vars: usize, terms: I) -> Result<Self, LaurentError>
    where
        I: IntoIterator<Item = (Vec<i64>, Rational)>,
    {
        if num_vars == 0 {
            return Err(LaurentError::NoVariables);
        }
        let mut out: Vec<(Vec<i64>, Rational)> = Vec::new();
        for (exp, coeff) in terms {
            if exp.len() != num_vars {
                return Err(LaurentError::DimensionMismatch {
                    expected: num_vars,
                    found: exp.len(),
                });
            }
            if coeff < 0 {
                return Err(LaurentError::NegativeCoefficient {
                    exp,
                    coeff: coeff.to_string(),
                });
            }
            out.push((exp, coeff));
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = out.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(LaurentError::DuplicateExponent(w[0].0.clone()));
        }
        out.retain(|(_, c)| *c != 0);
        Ok(Self {
            num_vars,
            terms: out,
        })
    }

    /// Integer-coefficient convenience constructor.
    pub fn from_integer_terms(
        num_vars: usize,
        terms: &[(&[i64], i64)],
    ) -> Result<Self, LaurentError> {
        Self::new(
            num_vars,
            terms.iter().map(|(e, c)| (e.to_vec(), Rational::from(*c))),
        )
    }

    pub fn one(num_vars: usize) -> Result<Self, LaurentError> {
        Self::new(num_vars, [(vec![0; num_vars], Rational::from(1))])
    }

    fn from_map(num_vars: usize, map: HashMap<Vec<i64>, Rational>) -> Self {
        let mut terms: Vec<_> = map.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Self { num_vars, terms }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> &[(Vec<i64>, Rational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exp: &[i64]) -> Option<&Rational> {
        self.terms
            .binary_search_by(|(e, _)| e.as_slice().cmp(exp))
            .ok()
            .map(|i| &self.terms[i].1)
    }

    /// True if every coefficient is an integer.
    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.iter().all(|(_, c)| *c.denom() == 1)
    }

    /// Largest absolute exponent coordinate over the support.
    pub fn max_abs_exponent(&self) -> u64 {
        self.terms
            .iter()
            .flat_map(|(e, _)| e.iter().map(|v| v.unsigned_abs()))
            .max()
            .unwrap_or(0)
    }

    /// Exact product.
    pub fn multiply(&self, other: &Self) -> Result<Self, LaurentError> {
        if self.num_vars != other.num_vars {
            return Err(LaurentError::DimensionMismatch {
                expected: self.num_vars,
                found: other.num_vars,
            });
        }
        let mut acc: HashMap<Vec<i64>, Rational> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exp = add_exponents(ea, eb)?;
                let prod = Rational::from(ca * cb);
                *acc.entry(exp).or_default() += prod;
            }
        }
        Ok(Self::from_map(self.num_vars, acc))
    }

    /// Exact `fⁿ` by binary powering; `f⁰ = 1`.
    pub fn power(&self, n: u32) -> Result<Self, LaurentError> {
        let mut result = Self::one(self.num_vars)?;
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.multiply(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.multiply(&base)?;
            }
        }
        Ok(result)
    }

    /// Coefficient of the zero exponent vector.
    pub fn constant_term(&self) -> Rational {
        self.coefficient(&vec![0; self.num_vars])
            .cloned()
            .unwrap_or_default()
    }

    /// `Cst(fⁿ)` for `n = 0..=n_max`.
    ///
    /// Uses [`ConstantTermGenerator`], which pairs `f^k` with `f^k` and
    /// `f^{k+1}` so that only powers up to `⌈n_max/2⌉` are materialized.
    pub fn cst_sequence(&self, n_max: usize) -> Result<Vec<Rational>, LaurentError> {
        let mut generator = ConstantTermGenerator::new(self)?;
        generator.extend_to(n_max)?;
        Ok(generator.values()[..=n_max].to_vec())
    }

    /// `Cst(fⁿ)` by repeated multiplication of the running power by `f`.
    ///
    /// Slower than [`cst_sequence`](Self::cst_sequence); kept as the
    /// straightforward reference route.
    pub fn cst_sequence_iterated(&self, n_max: usize) -> Result<Vec<Rational>, LaurentError> {
        let mut out = Vec::with_capacity(n_max + 1);
        let mut running = Self::one(self.num_vars)?;
        out.push(Rational::from(1));
        for _ in 0..n_max {
            running = running.multiply(self)?;
            out.push(running.constant_term());
        }
        Ok(out)
    }

    /// Multiplies every coefficient by `lambda`.
    pub fn scale(&self, lambda: &Rational) -> Result<Self, LaurentError> {
        Self::new(
            self.num_vars,
            self.terms
                .iter()
                .map(|(e, c)| (e.clone(), Rational::from(c * lambda))),
        )
    }

    /// Substitutes `xᵢ ↦ λᵢ xᵢ`.
    pub fn rescale_variables(&self, lambdas: &[Rational]) -> Result<Self, LaurentError> {
        if lambdas.len() != self.num_vars {
            return Err(LaurentError::DimensionMismatch {
                expected: self.num_vars,
                found: lambdas.len(),
            });
        }
        let terms = self.terms.iter().map(|(e, c)| {
            let mut c = c.clone();
            for (ei, li) in e.iter().zip(lambdas) {
                let p = Rational::from(li.pow(*ei as i32));
                c *= p;
            }
            (e.clone(), c)
        });
        Self::new(self.num_vars, terms)
    }

    /// Newton polytope summary: vertices, interior test and lattice rank.
    pub fn newton_info(&self) -> Result<NewtonPolytopeInfo, LaurentError> {
        polytope::newton_info(self)
    }

    /// Convenient: non-zero and the Newton polytope contains the origin in its
    /// interior (which forces full lattice rank).
    pub fn is_convenient(&self) -> Result<bool, LaurentError> {
        let info = self.newton_info()?;
        Ok(info.contains_origin_interior && info.support_lattice_rank == self.num_vars)
    }

    /// Index of the model, detected from constant terms up to `horizon`.
    pub fn index(&self, horizon: usize) -> Result<usize, LaurentError> {
        detect_index(&self.cst_sequence(horizon)?)
    }
}

pub(crate) fn add_exponents(a: &[i64], b: &[i64]) -> Result<Vec<i64>, LaurentError> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.checked_add(*y).ok_or(LaurentError::ExponentOverflow))
        .collect()
}

/// The gcd of all `n ≥ 1` with `Cst(fⁿ) ≠ 0` within the horizon `cst.len()-1`,
/// cross-checked so that every `n` not divisible by the result has `Cst(fⁿ) = 0`.
pub fn detect_index(cst: &[Rational]) -> Result<usize, LaurentError> {
    let horizon = cst.len().saturating_sub(1);
    let mut r = 0usize;
    for (n, c) in cst.iter().enumerate().skip(1) {
        if *c != 0 {
            r = gcd(r, n);
        }
    }
    if r == 0 {
        return Err(LaurentError::IndexUndetectable { horizon });
    }
    if let Some((n, _)) = cst
        .iter()
        .enumerate()
        .skip(1)
        .find(|(n, c)| n % r != 0 && **c != 0)
    {
        return Err(LaurentError::IndexInconsistent { n, r });
    }
    Ok(r)
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names: Vec<String> = match self.num_vars {
            1 => vec!["x".into()],
            2 => vec!["x".into(), "y".into()],
            3 => vec!["x".into(), "y".into(), "z".into()],
            m => (1..=m).map(|i| format!("x{i}")).collect(),
        };
        for (k, (exp, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let monomial: Vec<String> = exp
                .iter()
                .zip(&names)
                .filter(|(e, _)| **e != 0)
                .map(|(e, n)| {
                    if *e == 1 {
                        n.clone()
                    } else {
                        format!("{n}^{e}")
                    }
                })
                .collect();
            match (monomial.is_empty(), *c == 1) {
                (true, _) => write!(f, "{c}")?,
                (false, true) => write!(f, "{}", monomial.join("*"))?,
                (false, false) => write!(f, "{c}*{}", monomial.join("*"))?,
            }
        }
        Ok(())
    }
}

/// Lowest common denominator of the coefficients.
pub(crate) fn common_denominator(f: &LaurentPolynomial) -> Integer {
    f.terms
        .iter()
        .fold(Integer::from(1), |acc, (_, c)| acc.lcm(c.denom()))
}
