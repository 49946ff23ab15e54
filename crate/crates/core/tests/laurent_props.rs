use proptest::prelude::*;
use qperiod::catalog;
use qperiod::laurent::{detect_index, LaurentPolynomial};
use rug::ops::Pow;
use rug::{Integer, Rational};

/// Sum over all n-tuples of support vectors adding up to zero.
fn brute_force_cst(f: &LaurentPolynomial, n: usize) -> Rational {
    let terms = f.terms();
    let m = f.num_vars();
    let mut total = Rational::new();
    let k = terms.len();
    let mut idx = vec![0usize; n];
    loop {
        let mut sum = vec![0i64; m];
        let mut prod = Rational::from(1);
        for &i in &idx {
            for (s, e) in sum.iter_mut().zip(&terms[i].0) {
                *s += e;
            }
            prod *= &terms[i].1;
        }
        if sum.iter().all(|&s| s == 0) {
            total += prod;
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return total;
            }
            idx[pos] += 1;
            if idx[pos] < k {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

fn small_poly(max_terms: usize, vars: usize) -> impl Strategy<Value = LaurentPolynomial> {
    prop::collection::btree_map(
        prop::collection::vec(-2i64..=2, vars),
        (1i64..=4, 1i64..=3),
        1..=max_terms,
    )
    .prop_map(move |map| {
        LaurentPolynomial::new(
            vars,
            map.into_iter()
                .map(|(e, (p, q))| (e, Rational::from((p, q)))),
        )
        .unwrap()
    })
}

fn binomial(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}

fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

#[test]
fn central_binomials() {
    let p1 = catalog::lookup("p1").unwrap().model;
    let cst = p1.cst_sequence(100).unwrap();
    for d in 0..=50u32 {
        assert_eq!(cst[2 * d as usize], binomial(2 * d, d), "d = {d}");
        if d < 50 {
            assert_eq!(cst[2 * d as usize + 1], 0);
        }
    }
}

#[test]
fn multinomials_for_p2() {
    let p2 = catalog::lookup("p2").unwrap().model;
    let cst = p2.cst_sequence(90).unwrap();
    for d in 0..=30u32 {
        let want = factorial(3 * d) / (factorial(d).pow(3));
        assert_eq!(cst[3 * d as usize], want, "d = {d}");
    }
}

#[test]
fn index_stable_under_horizon_doubling() {
    for e in catalog::entries() {
        assert_eq!(
            e.model.index(60).unwrap(),
            e.model.index(120).unwrap(),
            "{}",
            e.name
        );
    }
}

#[test]
fn index_examples() {
    let want = [("p1", 2), ("p2", 3), ("p1xp1", 2), ("p3", 4)];
    for (name, r) in want {
        assert_eq!(
            catalog::lookup(name).unwrap().model.index(60).unwrap(),
            r,
            "{name}"
        );
    }
    let f = LaurentPolynomial::from_integer_terms(1, &[(&[0], 1), (&[1], 1), (&[-1], 1)]).unwrap();
    assert_eq!(f.index(60).unwrap(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn power_doubling_is_exact(f in small_poly(4, 2), n in 1u32..=4) {
        let p = f.power(n).unwrap();
        prop_assert_eq!(f.power(2 * n).unwrap(), p.multiply(&p).unwrap());
    }

    #[test]
    fn constant_terms_match_brute_force(f in small_poly(4, 2), n in 0usize..=6) {
        let want = brute_force_cst(&f, n);
        prop_assert_eq!(&f.power(n as u32).unwrap().constant_term(), &want);
        prop_assert_eq!(&f.cst_sequence(n).unwrap()[n], &want);
    }

    #[test]
    fn generator_matches_iterated_multiply(f in small_poly(5, 3), n in 0usize..=10) {
        prop_assert_eq!(f.cst_sequence(n).unwrap(), f.cst_sequence_iterated(n).unwrap());
    }

    #[test]
    fn powers_stay_non_negative(f in small_poly(4, 2), n in 1u32..=6) {
        prop_assert!(f.power(n).unwrap().terms().iter().all(|(_, c)| *c >= 0));
    }

    #[test]
    fn integer_powers_stay_integral(
        map in prop::collection::btree_map(prop::collection::vec(-2i64..=2, 2), 1i64..=5, 1..=4),
        n in 1u32..=6,
    ) {
        let f = LaurentPolynomial::new(2, map.into_iter().map(|(e, c)| (e, Rational::from(c)))).unwrap();
        prop_assert!(f.power(n).unwrap().terms().iter().all(|(_, c)| *c.denom() == 1));
    }

    #[test]
    fn detected_index_divides_support(f in small_poly(4, 2)) {
        let cst = f.cst_sequence(24).unwrap();
        if let Ok(r) = detect_index(&cst) {
            for (n, c) in cst.iter().enumerate() {
                if n % r != 0 {
                    prop_assert_eq!(c, &Rational::new());
                }
            }
        }
    }
}
