use qperiod::catalog::{self, expected_record};
use qperiod::laurent::LaurentPolynomial;
use rug::{Integer, Rational};

/// Independent expansion: multiply out `fⁿ` term by term and read the
/// constant coefficient.
fn constant_terms_by_expansion(f: &LaurentPolynomial, n_max: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut p = LaurentPolynomial::one(f.num_vars()).unwrap();
    for _ in 0..=n_max {
        out.push(p.constant_term());
        p = p.multiply(f).unwrap();
    }
    out
}

#[test]
fn records_regenerate_from_independent_oracles() {
    for e in catalog::entries() {
        let rec = expected_record(&e, 6).unwrap();
        let n_max = rec.leading_terms.last().unwrap().0;
        let cst = constant_terms_by_expansion(&e.model, n_max.max(24));
        let leading: Vec<(usize, Integer)> = cst
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .take(6)
            .map(|(n, c)| (n, c.numer().clone()))
            .collect();
        assert_eq!(rec.leading_terms, leading, "{}", e.name);

        let r = (1..cst.len()).filter(|&n| cst[n] != 0).fold(0, gcd);
        assert_eq!(rec.index_r, r, "{}", e.name);

        // Every catalog model is symmetric under permuting its exponent
        // vectors, so the gradient of f vanishes exactly at (1, .., 1).
        let mut grad = vec![Rational::new(); e.model.num_vars()];
        let mut value = Rational::new();
        for (exp, c) in e.model.terms() {
            value += c;
            for (g, ei) in grad.iter_mut().zip(exp) {
                *g += Rational::from(c * *ei);
            }
        }
        assert!(grad.iter().all(|g| *g == 0), "{}", e.name);
        let one = rug::Float::with_val(128, 1u32).to_string_radix(10, Some(30));
        assert!(
            rec.conifold_point.iter().all(|p| *p == one),
            "{}: {:?}",
            e.name,
            rec.conifold_point
        );
        let t = rug::Float::with_val(128, &value).to_string_radix(10, Some(30));
        assert_eq!(rec.t_con, t, "{}", e.name);
    }
}

#[test]
fn records_are_reproducible() {
    for e in catalog::entries() {
        assert_eq!(
            expected_record(&e, 5).unwrap(),
            expected_record(&e, 5).unwrap()
        );
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
