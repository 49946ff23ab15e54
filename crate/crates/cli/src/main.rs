//! `qperiod` command-line tool.
//!
//! Exit codes: 0 on success, 1 for I/O failures and malformed input, 2 when
//! the input parses but fails a mathematical precondition.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qperiod::concentration::{self, GridSpec};
use qperiod::conifold::{self, find_conifold, ConifoldConfig};
use qperiod::hypergeom::{self, HypergeomSpec};
use qperiod::laurent::{LaurentPolynomial, ModelFileError};
use qperiod::mp::{self, fmt_float};
use qperiod::series::{self, TruncationPolicy};
use qperiod::walk::{self, MonteCarloEstimate};
use qperiod::{catalog, pipeline, Error};
use rug::ops::Pow;
use rug::Float;
use serde::Serialize;
use sha2::{Digest, Sha256};

const SCHEMA: &str = "v1";

#[derive(Parser)]
#[command(
    name = "qperiod",
    version,
    about = "Quantum periods and concentration diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Quantum period coefficients G_n = Cst(f^n)/n!.
    Period(PeriodArgs),
    /// Conifold point and value of a model.
    Conifold(ConifoldArgs),
    /// Head/tail concentration of a period or hypergeometric series.
    Concentrate(ConcentrateArgs),
    /// Return probabilities of the conifold random walk and their LCLT fit.
    Walk(WalkArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ModelSource {
    /// Built-in model name (p1, p2, p1xp1, p3).
    #[arg(long)]
    catalog: Option<String>,
    /// JSON model file.
    #[arg(long)]
    model: Option<PathBuf>,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    out: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Working precision in bits.
    #[arg(long, default_value_t = mp::DEFAULT_PREC, value_parser = clap::value_parser!(u32).range(32..))]
    precision: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct PeriodArgs {
    #[command(flatten)]
    source: ModelSource,
    #[arg(long, default_value_t = 30)]
    n_max: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ConifoldArgs {
    #[command(flatten)]
    source: ModelSource,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
#[group(id = "concentrate_source", required = true, multiple = false, args = ["catalog", "model", "hypergeom"])]
struct ConcentrateArgs {
    #[arg(long)]
    catalog: Option<String>,
    #[arg(long)]
    model: Option<PathBuf>,
    /// JSON hypergeometric spec.
    #[arg(long)]
    hypergeom: Option<PathBuf>,
    /// Window exponent, a decimal string.
    #[arg(long)]
    nu: String,
    /// Grid `lo:hi:geomN` or `lo:hi:linN`; a default grid is chosen otherwise.
    #[arg(long)]
    grid: Option<String>,
    /// Number of period terms used to estimate T_{A,con}.
    #[arg(long, default_value_t = 300)]
    n_max: usize,
    /// Allow nu outside (0, 1/2).
    #[arg(long)]
    exploratory: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct WalkArgs {
    #[command(flatten)]
    source: ModelSource,
    /// Largest power of f used; the walk runs for n' <= n_max / r steps.
    #[arg(long, default_value_t = 300)]
    n_max: usize,
    /// Monte-Carlo trials per step count n' = 1..=10; 0 disables sampling.
    #[arg(long, default_value_t = 0)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn io(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    fn validation(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::ModelFile(ModelFileError::Malformed(_)) => 1,
            Error::Hypergeom(hypergeom::HypergeomError::Malformed(_)) => 1,
            _ => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn fail<E: Into<Error>>(e: E) -> Failure {
    Failure::from(e.into())
}

struct LoadedModel {
    name: String,
    model: LaurentPolynomial,
    hash: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::new(), |mut s, b| {
            write!(s, "{b:02x}").expect("string write");
            s
        })
}

fn load_model(catalog_name: Option<&str>, path: Option<&PathBuf>) -> Result<LoadedModel, Failure> {
    let (name, model) = match (catalog_name, path) {
        (Some(name), _) => {
            let entry = catalog::lookup(name).ok_or_else(|| {
                Failure::io(format!(
                    "unknown catalog model `{name}`; available: {}",
                    catalog::names().join(", ")
                ))
            })?;
            (name.to_string(), entry.model)
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
            let model = LaurentPolynomial::from_json(&text).map_err(fail)?;
            (path.display().to_string(), model)
        }
        (None, None) => return Err(Failure::io("no model given")),
    };
    // Hash the canonical serialization so equivalent files agree.
    let hash = sha256_hex(model.to_json().as_bytes());
    Ok(LoadedModel { name, model, hash })
}

#[derive(Serialize)]
struct Header {
    tool: &'static str,
    version: &'static str,
    source: String,
    model_sha256: String,
    precision: u32,
    seed: Option<u64>,
}

impl Header {
    fn new(source: &str, hash: &str, precision: u32, seed: Option<u64>) -> Self {
        Self {
            tool: "qperiod",
            version: env!("CARGO_PKG_VERSION"),
            source: source.to_string(),
            model_sha256: hash.to_string(),
            precision,
            seed,
        }
    }

    fn csv_lines(&self) -> String {
        let mut s = format!(
            "# {} {}\n# source {}\n# model_sha256 {}\n# precision {}\n",
            self.tool, self.version, self.source, self.model_sha256, self.precision
        );
        if let Some(seed) = self.seed {
            writeln!(s, "# seed {seed}").expect("string write");
        }
        s
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    header: &'a Header,
    result: &'a T,
}

fn json<T: Serialize>(header: &Header, result: &T) -> String {
    let mut s = serde_json::to_string_pretty(&Envelope {
        schema: SCHEMA,
        header,
        result,
    })
    .expect("report serializes");
    s.push('\n');
    s
}

fn emit(output: &Output, text: &str) -> Result<(), Failure> {
    match &output.report {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_period(args: &PeriodArgs) -> Result<(), Failure> {
    let m = load_model(args.source.catalog.as_deref(), args.source.model.as_ref())?;
    let seq = series::quantum_period(&m.model, args.n_max)
        .map_err(fail)?
        .with_source(&m.name);
    let header = Header::new(&m.name, &m.hash, args.output.precision, None);
    let text = match args.output.out {
        Format::Csv => {
            let mut s = header.csv_lines();
            writeln!(s, "# index_r {} ({})", seq.index_r, seq.index_method).expect("string write");
            for w in &seq.warnings {
                writeln!(s, "# warning {w}").expect("string write");
            }
            s + &seq.to_csv()
        }
        Format::Json => json(&header, &seq),
    };
    emit(&args.output, &text)
}

#[derive(Serialize)]
struct ConifoldOut<'a> {
    model: String,
    #[serde(flatten)]
    result: &'a conifold::ConifoldResult,
}

fn cmd_conifold(args: &ConifoldArgs) -> Result<(), Failure> {
    let m = load_model(args.source.catalog.as_deref(), args.source.model.as_ref())?;
    let prec = args.output.precision;
    let res = find_conifold(&m.model, &ConifoldConfig::with_prec(prec)).map_err(fail)?;
    let header = Header::new(&m.name, &m.hash, prec, None);
    let text = match args.output.out {
        Format::Csv => {
            let mut s = header.csv_lines() + "coordinate,point,log_point\n";
            for (i, (p, l)) in res.point.iter().zip(&res.log_point).enumerate() {
                writeln!(s, "{i},{},{}", fmt_float(p), fmt_float(l)).expect("string write");
            }
            writeln!(
                s,
                "# value {}\n# hessian_log_det {}\n# iterations {}",
                fmt_float(&res.value),
                fmt_float(&res.hessian_log_det),
                res.iterations
            )
            .expect("string write");
            s
        }
        Format::Json => json(
            &header,
            &ConifoldOut {
                model: m.model.to_string(),
                result: &res,
            },
        ),
    };
    emit(&args.output, &text)
}

#[derive(Serialize)]
struct ConcentrateOut<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    t_a_con: Option<&'a series::TAConEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    peak_prediction: Option<&'a hypergeom::PeakPrediction>,
    theorem_mode: bool,
    report: &'a concentration::ConcentrationReport,
}

fn cmd_concentrate(args: &ConcentrateArgs) -> Result<(), Failure> {
    let prec = args.output.precision;
    let nu =
        mp::parse_float(&args.nu, prec).map_err(|e| Failure::validation(format!("--nu: {e}")))?;
    let theorem_mode = nu > 0 && nu < 0.5;
    if !theorem_mode && !args.exploratory {
        return Err(Failure::validation(format!(
            "--nu {} lies outside (0, 1/2); pass --exploratory to measure anyway",
            args.nu
        )));
    }
    if nu <= 0 {
        return Err(Failure::validation("--nu must be positive"));
    }
    let policy = TruncationPolicy::with_prec(prec);
    let grid_spec = args
        .grid
        .as_deref()
        .map(|g| g.parse::<GridSpec>())
        .transpose()
        .map_err(|e| Failure::validation(e.to_string()))?;
    let one_minus_2nu = Float::with_val(prec, 1u32) - Float::with_val(prec, &nu * 2u32);

    if let Some(path) = &args.hypergeom {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
        let spec = HypergeomSpec::from_json(&text).map_err(fail)?;
        let hash = sha256_hex(text.as_bytes());
        let mut config = hypergeom::spec_config(&spec, &nu, policy).map_err(fail)?;
        if theorem_mode {
            config.claimed_beta = Some(one_minus_2nu);
        }
        let grid = match &grid_spec {
            Some(g) => g.points(prec),
            None => concentration::default_grid(&config),
        };
        let oracle = hypergeom::HypergeomOracle::new(&spec);
        let report = concentration::measure(&oracle, &config, &grid).map_err(fail)?;
        let prediction = hypergeom::predict_peak(&spec, prec);
        let header = Header::new(&path.display().to_string(), &hash, prec, None);
        let out = ConcentrateOut {
            t_a_con: None,
            peak_prediction: Some(&prediction),
            theorem_mode,
            report: &report,
        };
        return emit(
            &args.output,
            &render_concentration(&header, &out, args.output.out),
        );
    }

    let m = load_model(args.catalog.as_deref(), args.model.as_ref())?;
    let grid = grid_spec.map(|g| g.points(prec));
    let run = pipeline::period_concentration(&m.model, &nu, grid.as_deref(), args.n_max, policy)
        .map_err(fail)?;
    let header = Header::new(&m.name, &m.hash, prec, None);
    let out = ConcentrateOut {
        t_a_con: Some(&run.t_a_con),
        peak_prediction: None,
        theorem_mode,
        report: &run.report,
    };
    emit(
        &args.output,
        &render_concentration(&header, &out, args.output.out),
    )
}

fn render_concentration(header: &Header, out: &ConcentrateOut<'_>, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = header.csv_lines();
            if let Some(est) = out.t_a_con {
                writeln!(s, "# t_a_con {}", fmt_float(&est.value)).expect("string write");
            }
            if let Some(p) = out.peak_prediction {
                writeln!(s, "# peak_coefficient {}", fmt_float(&p.peak_coefficient))
                    .expect("string write");
            }
            for w in &out.report.warnings {
                writeln!(s, "# warning {w}").expect("string write");
            }
            s + &out.report.to_csv()
        }
        Format::Json => json(header, out),
    }
}

#[derive(Serialize)]
struct McRow {
    #[serde(flatten)]
    estimate: MonteCarloEstimate,
    exact: String,
    /// `(estimate − exact) / std_error`; zero when both agree exactly.
    z_score: f64,
}

#[derive(Serialize)]
struct WalkOut<'a> {
    model: String,
    #[serde(flatten)]
    analysis: &'a pipeline::WalkAnalysis,
    monte_carlo: Vec<McRow>,
}

fn cmd_walk(args: &WalkArgs) -> Result<(), Failure> {
    let m = load_model(args.source.catalog.as_deref(), args.source.model.as_ref())?;
    let prec = args.output.precision;
    let run = pipeline::walk_analysis(&m.model, args.n_max, prec).map_err(fail)?;
    let q = &run.return_probabilities;
    let mut monte_carlo = Vec::new();
    if args.trials > 0 {
        for n in 1..=10.min(run.n_prime_max) {
            let estimate = walk::monte_carlo_return(&run.distribution, n, args.trials, args.seed)
                .map_err(fail)?;
            let exact = q[n].to_f64();
            let z_score = if estimate.std_error > 0.0 {
                (estimate.estimate - exact) / estimate.std_error
            } else {
                0.0
            };
            monte_carlo.push(McRow {
                estimate,
                exact: fmt_float(&q[n]),
                z_score,
            });
        }
    }
    let header = Header::new(&m.name, &m.hash, prec, Some(args.seed));
    let fit = &run.fit;
    let text = match args.output.out {
        Format::Csv => {
            let mut s = header.csv_lines() + "n_prime,q,q_scaled\n";
            let half_m = Float::with_val(prec, fit.m) / 2u32;
            for (n, qn) in q.iter().enumerate() {
                let scaled = Float::with_val(prec, Float::with_val(prec, n).pow(&half_m) * qn);
                writeln!(s, "{n},{},{}", fmt_float(qn), fmt_float(&scaled)).expect("string write");
            }
            writeln!(
                s,
                "# fit m={} n_min_fit={} c_hat={} b_hat={} m_over_2_check={:.6}",
                fit.m,
                fit.n_min_fit,
                fmt_float(&fit.c_hat),
                fmt_float(&fit.b_hat),
                fit.m_over_2_check
            )
            .expect("string write");
            for row in &monte_carlo {
                let e = &row.estimate;
                writeln!(
                    s,
                    "# monte_carlo n_prime={} trials={} hits={} estimate={:.8} std_error={:.3e} z={:.3}",
                    e.n_steps, e.trials, e.hits, e.estimate, e.std_error, row.z_score
                )
                .expect("string write");
            }
            s
        }
        Format::Json => json(
            &header,
            &WalkOut {
                model: m.model.to_string(),
                analysis: &run,
                monte_carlo,
            },
        ),
    };
    emit(&args.output, &text)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Period(a) => cmd_period(a),
        Command::Conifold(a) => cmd_conifold(a),
        Command::Concentrate(a) => cmd_concentrate(a),
        Command::Walk(a) => cmd_walk(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
