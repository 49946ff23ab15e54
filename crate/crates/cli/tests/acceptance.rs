//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach the terminal.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use qperiod::catalog;
use qperiod::concentration::{
    floor_multiplicity_holds, lem0_diagnostics, window_record, ConcentrationConfig,
    LocationPolynomial,
};
use qperiod::conifold::{find_conifold, ConifoldConfig};
use qperiod::hypergeom::{evaluate_and_measure, predict_peak, HypergeomSpec};
use qperiod::laurent::LaurentPolynomial;
use qperiod::pipeline::{period_concentration, walk_analysis};
use qperiod::series::{
    estimate_t_a_con, evaluate, quantum_period, weighted_substitution_check, ExponentialOracle,
    SlowlyVarying, SubpolyWeight, TruncationPolicy,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

const PREC: u32 = 256;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn model(name: &str) -> LaurentPolynomial {
    catalog::lookup(name).expect("catalog entry").model
}

fn f(v: f64) -> Float {
    Float::with_val(PREC, v)
}

fn within_time(start: Instant, limit: Duration) -> (bool, String) {
    let t = start.elapsed();
    (
        t <= limit,
        format!("{:.2}s of {}s", t.as_secs_f64(), limit.as_secs()),
    )
}

fn exact_constant_terms() -> Outcome {
    let start = Instant::now();
    let p1 = model("p1").cst_sequence(100).expect("p1 constant terms");
    let p2 = model("p2").cst_sequence(90).expect("p2 constant terms");
    // Independent oracles: GMP binomials and factorials.
    let p1_ok =
        (0..=50u32).all(|d| p1[2 * d as usize] == Integer::from(Integer::binomial_u(2 * d, d)));
    let fact = |n: u32| Integer::from(Integer::factorial(n));
    let p2_ok = (0..=30u32).all(|d| p2[3 * d as usize] == fact(3 * d) / fact(d).pow(3));
    let (fast, t) = within_time(start, Duration::from_secs(10));
    outcome(
        p1_ok && p2_ok && fast,
        format!("binomial d<=50 {p1_ok}, multinomial d<=30 {p2_ok}, {t}"),
    )
}

fn conifold_closed_forms() -> Outcome {
    let start = Instant::now();
    let lop =
        LaurentPolynomial::from_integer_terms(1, &[(&[1], 2), (&[-1], 1)]).expect("valid model");
    let one = f(1.0);
    let cases = [
        ("p1", model("p1"), vec![one.clone()], f(2.0)),
        ("p2", model("p2"), vec![one.clone(), one.clone()], f(3.0)),
        ("2x+1/x", lop, vec![f(0.5).sqrt()], f(8.0).sqrt()),
    ];
    let tol = Float::with_val(PREC, 1u32) >> 180;
    let rel = |a: &Float, b: &Float| Float::with_val(PREC, a - b).abs() / b;
    let mut worst = Float::with_val(PREC, 0u32);
    let mut iters_ok = true;
    for (_, m, point, value) in &cases {
        let Ok(res) = find_conifold(m, &ConifoldConfig::with_prec(PREC)) else {
            return outcome(false, "conifold search failed");
        };
        iters_ok &= res.iterations <= 50;
        worst = worst.max(&rel(&res.value, value));
        for (a, b) in res.point.iter().zip(point) {
            worst = worst.max(&rel(a, b));
        }
    }
    let (fast, t) = within_time(start, Duration::from_secs(1));
    let log2 = if worst.is_zero() {
        f64::NEG_INFINITY
    } else {
        worst.clone().log2().to_f64()
    };
    outcome(
        worst <= tol && iters_ok && fast,
        format!("worst relative error 2^{log2:.1} (limit 2^-180), iterations<=50 {iters_ok}, {t}"),
    )
}

fn index_detection() -> Outcome {
    let extra = LaurentPolynomial::from_integer_terms(1, &[(&[0], 1), (&[1], 1), (&[-1], 1)])
        .expect("valid model");
    let cases = [
        ("p1", model("p1"), 2),
        ("p2", model("p2"), 3),
        ("p1xp1", model("p1xp1"), 2),
        ("p3", model("p3"), 4),
        ("1+x+1/x", extra, 1),
    ];
    let mut found = Vec::new();
    let mut ok = true;
    for (name, m, want) in &cases {
        let a = m.index(60).ok();
        let b = m.index(120).ok();
        ok &= a == Some(*want) && b == a;
        found.push(format!(
            "{name}={}",
            a.map_or("error".into(), |r| r.to_string())
        ));
    }
    outcome(ok, format!("{} (stable at horizon 120)", found.join(" ")))
}

fn t_a_con_estimation() -> Outcome {
    let (Ok(s1), Ok(s2)) = (
        quantum_period(&model("p1"), 400),
        quantum_period(&model("p2"), 300),
    ) else {
        return outcome(false, "period sequence failed");
    };
    let (Ok(e1), Ok(e2)) = (estimate_t_a_con(&s1), estimate_t_a_con(&s2)) else {
        return outcome(false, "estimate failed");
    };
    let d1 = (e1.value.to_f64() - 2.0).abs();
    let d2 = (e2.value.to_f64() - 3.0).abs();
    let gap = e1.relative_gap.max(e2.relative_gap);
    outcome(
        d1 <= 1e-3 && d2 <= 1e-2 && gap <= 1e-2,
        format!(
            "|p1-2|={d1:.2e} (<=1e-3), |p2-3|={d2:.2e} (<=1e-2), root/ratio gap {gap:.2e} (<=1e-2)"
        ),
    )
}

fn lclt_fit() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, m) in [("p1", 1.0), ("p2", 2.0), ("p3", 3.0)] {
        let Ok(run) = walk_analysis(&model(name), 300, PREC) else {
            return outcome(false, format!("{name}: walk analysis failed"));
        };
        let slope = run.fit.m_over_2_check;
        let dev = (slope + m / 2.0).abs();
        ok &= dev <= 0.05 && run.fit.m as f64 == m;
        parts.push(format!("{name} slope {slope:.4}"));
        if name == "p1" {
            let c = run.fit.c_hat.to_f64();
            let dc = (c - 1.0 / std::f64::consts::PI.sqrt()).abs();
            ok &= dc <= 1e-3;
            parts.push(format!("p1 c_hat {c:.6} (|diff| {dc:.1e})"));
        }
    }
    let (fast, t) = within_time(start, Duration::from_secs(60));
    outcome(ok && fast, format!("{}, {t}", parts.join(", ")))
}

fn concentration_trend() -> Outcome {
    let grid: Vec<Float> = [20.0, 40.0, 80.0, 160.0].map(f).to_vec();
    let Ok(run) = period_concentration(
        &model("p2"),
        &f(0.25),
        Some(&grid),
        300,
        TruncationPolicy::with_prec(PREC),
    ) else {
        return outcome(false, "pipeline failed");
    };
    let rep = &run.report;
    let heads: Vec<f64> = rep.head_ratios().iter().map(Float::to_f64).collect();
    let tails: Vec<f64> = rep.tail_ratios().iter().map(Float::to_f64).collect();
    let decreasing = |v: &[f64]| v.windows(2).all(|w| w[1] < w[0]);
    let small =
        heads.last().is_some_and(|&h| h <= 1e-2) && tails.last().is_some_and(|&t| t <= 1e-2);
    let fits: Vec<_> = [rep.head_fit, rep.tail_fit].into_iter().flatten().collect();
    let fits_ok = fits.len() == 2
        && fits
            .iter()
            .all(|fit| fit.alpha > 0.0 && (0.25..=0.75).contains(&fit.beta));
    let betas: Vec<String> = fits.iter().map(|fit| format!("{:.3}", fit.beta)).collect();
    outcome(
        decreasing(&heads) && decreasing(&tails) && small && fits_ok,
        format!(
            "final head {:.2e} tail {:.2e}, beta (head, tail) = ({}) in [0.25, 0.75]",
            heads.last().copied().unwrap_or(f64::NAN),
            tails.last().copied().unwrap_or(f64::NAN),
            betas.join(", ")
        ),
    )
}

fn hypergeometric_peak() -> Outcome {
    let p2 = HypergeomSpec::integers(&[], &[(1, 1), (1, 1), (1, 1)]);
    let cosh = HypergeomSpec::integers(&[], &[(2, 1)]);
    let exp = HypergeomSpec::integers(&[(1, 1)], &[(1, 1), (1, 1)]);
    let (Ok(p2), Ok(cosh), Ok(exp)) = (p2, cosh, exp) else {
        return outcome(false, "spec construction failed");
    };
    let t = Rational::from((7, 2));
    let Ok(exp_t) = exp.clone().with_t(t.clone()) else {
        return outcome(false, "spec construction failed");
    };
    let a = predict_peak(&p2, PREC);
    let b = predict_peak(&cosh, PREC);
    let c = predict_peak(&exp_t, PREC);
    let closed = a.kappa == 3
        && a.c_exact.as_deref() == Some("1")
        && a.peak_coefficient == 3
        && b.kappa == 2
        && b.c_exact.as_deref() == Some("1/4")
        && b.peak_coefficient == 1
        && c.kappa == 1
        && c.c_exact.as_deref() == Some("1")
        && c.peak_coefficient == Float::with_val(PREC, &t);
    let grid: Vec<Float> = [50.0, 100.0, 200.0, 400.0].map(f).to_vec();
    let Ok(rep) = evaluate_and_measure(&exp, &f(0.25), &grid, TruncationPolicy::with_prec(PREC))
    else {
        return outcome(false, "measurement failed");
    };
    let lo = (100.0 * (1.0 - 100f64.powf(-0.25))).floor() as usize;
    let hi = (100.0 * (1.0 + 100f64.powf(-0.25))).floor() as usize;
    let peak = rep.records[1].peak_index;
    outcome(
        closed && (lo..=hi).contains(&peak),
        format!("closed forms {closed}, e^x peak at x=100 is {peak} in [{lo}, {hi}]"),
    )
}

fn diagnostic_suite() -> Outcome {
    let config = match ConcentrationConfig::new(
        LocationPolynomial::linear(f(1.0)),
        f(1.0),
        f(0.25),
        TruncationPolicy::default(),
    ) {
        Ok(c) => c,
        Err(e) => return outcome(false, e.to_string()),
    };
    let grid: Vec<Float> = [25.0, 50.0, 100.0, 200.0].map(f).to_vec();
    let Ok(diag) = lem0_diagnostics(&ExponentialOracle, &config, &grid, 300) else {
        return outcome(false, "diagnostics failed");
    };
    let growth = diag.records.last().map_or(f64::NAN, |r| r.log_i_over_xd);
    let growth_ok = (growth - 1.0).abs() <= 0.05;
    let root_ok = !diag.root_gamma.is_empty() && diag.root_gamma.iter().all(|(_, v)| *v == 1);

    // Window monotonicity: a wider window sums a subset of the terms.
    let mut mono_ok = true;
    let wider = ConcentrationConfig::new(
        LocationPolynomial::linear(f(1.0)),
        f(2.0),
        f(0.2),
        TruncationPolicy::default(),
    );
    let Ok(wider) = wider else {
        return outcome(false, "config failed");
    };
    for x in &grid {
        let Ok(ev) = evaluate(&ExponentialOracle, x, &config.policy) else {
            return outcome(false, "evaluation failed");
        };
        let narrow = window_record(&ev, &config);
        let wide = window_record(&ev, &wider);
        mono_ok &= wide.n_minus <= narrow.n_minus
            && wide.n_plus >= narrow.n_plus
            && wide.head_ratio <= narrow.head_ratio
            && wide.tail_ratio <= narrow.tail_ratio;
    }

    // Floor identities at window endpoints c1 x (1 +- c2 x^-nu).
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut floor_ok = true;
    let samples = 10_000;
    for _ in 0..samples {
        let c1: f64 = rng.gen_range(0.1..10.0);
        let c2: f64 = rng.gen_range(0.0..2.0);
        let x: f64 = rng.gen_range(1.0..1e4);
        let nu: f64 = rng.gen_range(0.01..0.5);
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let u = (c1 * x * (1.0 + sign * c2 * x.powf(-nu))).abs();
        for kappa in [1, 2, 3, 5] {
            floor_ok &= floor_multiplicity_holds(&f(u), kappa);
        }
    }
    outcome(
        growth_ok && root_ok && mono_ok && floor_ok,
        format!(
            "log I(200)/200 = {growth:.4}, root-Gamma identically 1 {root_ok}, window monotone {mono_ok}, \
             floor identities on {samples} samples {floor_ok}"
        ),
    )
}

fn substitution_check() -> Outcome {
    let start = Instant::now();
    let grid: Vec<Float> = [100.0, 1000.0, 10000.0].map(f).to_vec();
    let Ok(rep) = weighted_substitution_check(
        &ExponentialOracle,
        &SubpolyWeight::One,
        &SlowlyVarying::LogPower(1),
        &LocationPolynomial::linear(f(1.0)),
        &grid,
        &TruncationPolicy::with_prec(PREC),
    ) else {
        return outcome(false, "substitution check failed");
    };
    let d: Vec<f64> = rep.records.iter().map(|r| r.discrepancy).collect();
    let (fast, t) = within_time(start, Duration::from_secs(30));
    outcome(
        d[1] <= 0.02 && rep.decreasing && fast,
        format!(
            "D = {:.3e}, {:.3e}, {:.3e}; D(1000) <= 0.02, decreasing {}, {t}",
            d[0], d[1], d[2], rep.decreasing
        ),
    )
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_qperiod"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited with {}", out.status));
    }
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("qperiod-acceptance-{}", std::process::id()));
    if std::fs::create_dir_all(&dir).is_err() {
        return outcome(false, "cannot create scratch directory");
    }
    let spec = dir.join("exp.json");
    if std::fs::write(
        &spec,
        r#"{"upper": [["1","1"]], "lower": [["1","1"],["1","1"]], "T": "1"}"#,
    )
    .is_err()
    {
        return outcome(false, "cannot write spec");
    }
    let spec = spec.to_string_lossy().into_owned();
    let runs: Vec<Vec<&str>> = vec![
        vec!["period", "--catalog", "p2", "--n-max", "30", "--out", "csv"],
        vec![
            "period",
            "--catalog",
            "p3",
            "--n-max",
            "40",
            "--out",
            "json",
        ],
        vec!["conifold", "--catalog", "p1xp1", "--precision", "384"],
        vec!["conifold", "--catalog", "p2", "--out", "csv"],
        vec![
            "concentrate",
            "--catalog",
            "p1",
            "--nu",
            "0.25",
            "--grid",
            "10:80:geom4",
            "--out",
            "csv",
        ],
        vec![
            "concentrate",
            "--hypergeom",
            &spec,
            "--nu",
            "0.25",
            "--grid",
            "50:400:geom4",
        ],
        vec![
            "walk",
            "--catalog",
            "p1",
            "--n-max",
            "120",
            "--trials",
            "100000",
            "--seed",
            "7",
        ],
        vec![
            "walk",
            "--catalog",
            "p2",
            "--n-max",
            "60",
            "--trials",
            "20000",
            "--seed",
            "3",
            "--out",
            "csv",
        ],
    ];
    for args in &runs {
        match (run_cli(args), run_cli(args)) {
            (Ok(a), Ok(b)) if a == b => {}
            (Ok(_), Ok(_)) => {
                return outcome(false, format!("{} differs between runs", args.join(" ")))
            }
            (Err(e), _) | (_, Err(e)) => return outcome(false, e),
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    outcome(
        true,
        format!("{} commands byte-identical across reruns", runs.len()),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("exact constant terms", exact_constant_terms),
        ("conifold closed forms", conifold_closed_forms),
        ("index detection", index_detection),
        ("T_A,con estimation", t_a_con_estimation),
        ("LCLT fit", lclt_fit),
        ("concentration trend", concentration_trend),
        ("hypergeometric peak", hypergeometric_peak),
        ("diagnostic suite", diagnostic_suite),
        ("substitution check", substitution_check),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failures += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
