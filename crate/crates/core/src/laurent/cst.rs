use rug::{Integer, Rational};
use rustc_hash::FxHashMap;

use super::{common_denominator, LaurentError, LaurentPolynomial};

/// Incremental generator of `Cst(fⁿ)`.
///
/// Write `f = h / D` with `h` integral. Keeping `h^k` and `h^{k+1}` in memory,
///
/// ```text
/// Cst(h^{2k})   = Σ_ℓ [h^k]_ℓ · [h^k]_{-ℓ}
/// Cst(h^{2k+1}) = Σ_ℓ [h^{k+1}]_ℓ · [h^k]_{-ℓ}
/// ```
///
/// so each multiplication by `h` yields two new constant terms. Exponent
/// vectors are packed into a balanced mixed-radix `i128` key, which is
/// additive and satisfies `key(-ℓ) = -key(ℓ)`.
#[derive(Debug, Clone)]
pub struct ConstantTermGenerator {
    denominator: Integer,
    base: Vec<(i128, Integer)>,
    max_abs: u64,
    bound: u64,
    low: FxHashMap<i128, Integer>,
    high: FxHashMap<i128, Integer>,
    k: usize,
    integral: Vec<Integer>,
    values: Vec<Rational>,
    denominator_power: Integer,
}

impl ConstantTermGenerator {
    pub fn new(f: &LaurentPolynomial) -> Result<Self, LaurentError> {
        let m = f.num_vars();
        let bits = (126 / m as u32).min(63);
        let bound = (1u64 << (bits - 1)) - 1;
        let radix = 2 * bound as i128 + 1;
        let max_abs = f.max_abs_exponent();
        if max_abs > bound {
            return Err(LaurentError::ExponentOverflow);
        }
        let denominator = common_denominator(f);
        let base = f
            .terms()
            .iter()
            .map(|(e, c)| {
                let mut key = 0i128;
                let mut scale = 1i128;
                for &ei in e {
                    key += ei as i128 * scale;
                    scale = scale.wrapping_mul(radix);
                }
                let coeff = c.numer() * Integer::from(&denominator / c.denom());
                (key, coeff)
            })
            .collect::<Vec<_>>();
        let mut low = FxHashMap::default();
        low.insert(0i128, Integer::from(1));
        let high: FxHashMap<i128, Integer> = base.iter().cloned().collect();
        Ok(Self {
            denominator,
            base,
            max_abs,
            bound,
            low,
            high,
            k: 0,
            integral: Vec::new(),
            values: Vec::new(),
            denominator_power: Integer::from(1),
        })
    }

    /// Number of constant terms produced so far (`Cst(f⁰)` through `Cst(f^{len-1})`).
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Common denominator `D` with `f = h / D`.
    pub fn denominator(&self) -> &Integer {
        &self.denominator
    }

    /// `Cst(fⁿ)` computed so far.
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// `Cst(hⁿ) = Dⁿ · Cst(fⁿ)` computed so far.
    pub fn integral_values(&self) -> &[Integer] {
        &self.integral
    }

    /// Ensures `Cst(fⁿ)` is available for every `n ≤ n_max`.
    pub fn extend_to(&mut self, n_max: usize) -> Result<(), LaurentError> {
        while self.values.len() <= n_max {
            self.step()?;
        }
        Ok(())
    }

    fn push(&mut self, c: Integer) {
        let value = if self.denominator == 1 {
            Rational::from(&c)
        } else {
            let v = Rational::from((c.clone(), self.denominator_power.clone()));
            self.denominator_power *= &self.denominator;
            v
        };
        self.integral.push(c);
        self.values.push(value);
    }

    fn step(&mut self) -> Result<(), LaurentError> {
        let even = dot(&self.low, &self.low);
        let odd = dot(&self.high, &self.low);
        self.push(even);
        self.push(odd);

        // h^{k+2} has coordinates bounded by (k+2)·max|ℓ|.
        let needed = (self.k as u64 + 2)
            .checked_mul(self.max_abs)
            .ok_or(LaurentError::ExponentOverflow)?;
        if needed > self.bound {
            return Err(LaurentError::ExponentOverflow);
        }
        let mut next: FxHashMap<i128, Integer> = FxHashMap::default();
        next.reserve(self.high.len() * 2);
        for (key, c) in &self.high {
            for (bk, bc) in &self.base {
                let slot = next.entry(key + bk).or_default();
                if *bc == 1 {
                    *slot += c;
                } else {
                    *slot += c * bc;
                }
            }
        }
        self.low = std::mem::replace(&mut self.high, next);
        self.k += 1;
        Ok(())
    }
}

fn dot(a: &FxHashMap<i128, Integer>, b: &FxHashMap<i128, Integer>) -> Integer {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut acc = Integer::new();
    for (key, c) in small {
        if let Some(d) = large.get(&-key) {
            acc += c * d;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_matches_iterated_route() {
        let f = LaurentPolynomial::from_integer_terms(
            2,
            &[
                (&[1, 0], 1),
                (&[0, 1], 2),
                (&[-1, -1], 1),
                (&[0, 0], 3),
                (&[-1, 0], 1),
            ],
        )
        .unwrap();
        let fast = f.cst_sequence(12).unwrap();
        let slow = f.cst_sequence_iterated(12).unwrap();
        assert_eq!(fast, slow);
    }

    #[test]
    fn generator_extends_incrementally() {
        let f = LaurentPolynomial::from_integer_terms(1, &[(&[1], 1), (&[-1], 1)]).unwrap();
        let mut g = ConstantTermGenerator::new(&f).unwrap();
        g.extend_to(3).unwrap();
        assert!(g.len() >= 4);
        g.extend_to(10).unwrap();
        assert_eq!(g.values()[10], Rational::from(252));
        assert_eq!(g.integral_values()[8], 70);
    }

    #[test]
    fn packing_bound_is_enforced() {
        let f = LaurentPolynomial::from_integer_terms(
            10,
            &[
                (&[1000, 0, 0, 0, 0, 0, 0, 0, 0, 0], 1),
                (&[-1000, 0, 0, 0, 0, 0, 0, 0, 0, 0], 1),
            ],
        )
        .unwrap();
        let mut g = ConstantTermGenerator::new(&f).unwrap();
        assert_eq!(g.extend_to(10), Err(LaurentError::ExponentOverflow));
    }
}
