//! `multicrit`: intervals, example tables, solver runs and expansion sweeps.

// Negated comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use multicrit_core::conditions::{default_weight, example_bounds, example_interval_unchecked};
use multicrit_core::expansion::{fit_log_branch, log_window, DensityModel};
use multicrit_core::geometry::example_configuration;
use multicrit_core::solver::{minimize, problem_threshold};
use multicrit_core::{
    fit_and_compare, example_interval, Error, ExampleId, ExampleParams, ExpansionConfig,
    FProfile, GuaranteedInterval, ReducedProblem, SolverConfig,
};
use serde_json::{json, Map, Value};

const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "multicrit", version, about = "Multiplicity intervals and numerical checks for Δu + αu = f u^p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Guaranteed α-interval of a worked configuration.
    Interval(IntervalArgs),
    /// Intervals of the worked configurations at their default parameters, as CSV.
    Table(TableArgs),
    /// Minimize the reduced quotient on a periodic 1-D grid.
    Solve(SolveArgs),
    /// Rayleigh quotients of concentrating test functions and their small-ε fit.
    Expansion(ExpansionArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct IntervalArgs {
    #[arg(long, value_parser = parse_example)]
    example: ExampleId,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    a1: Option<f64>,
    #[arg(long)]
    a2: Option<f64>,
    /// Weight maximum; with this flag the weight is given explicitly
    /// instead of the configuration's default.
    #[arg(long)]
    f_max: Option<f64>,
    #[arg(long, requires = "f_max")]
    f_min: Option<f64>,
    #[arg(long, requires = "f_max", default_value_t = 1.0)]
    f_avg: f64,
    #[arg(long, requires = "f_max", default_value_t = 0.0)]
    lap_f: f64,
    /// Order up to which the derivatives of f vanish at its peak (default n).
    #[arg(long, requires = "f_max")]
    vanishing_order: Option<u32>,
    /// Skip the configuration's parameter window; out-of-window parameters
    /// then give an empty interval.
    #[arg(long)]
    unchecked: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct TableArgs {
    /// All six configurations.
    #[arg(long, required_unless_present = "example")]
    all: bool,
    #[arg(long, value_parser = parse_example, conflicts_with = "all")]
    example: Option<ExampleId>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Weight {
    /// f ≡ 1.
    One,
    /// f(s) = 1 + h exp(κ (cos(2πs/ℓ) - 1)).
    Bump,
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// Circle length ℓ.
    #[arg(long)]
    length: f64,
    /// Fibre weight w.
    #[arg(long, default_value_t = 1.0)]
    weight: f64,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 256)]
    grid: usize,
    #[arg(long, value_enum, default_value = "one")]
    f: Weight,
    #[arg(long, default_value_t = 1.0)]
    bump_height: f64,
    #[arg(long, default_value_t = 4.0)]
    bump_sharpness: f64,
    /// Minimal orbit volume; enables the existence-threshold comparison.
    #[arg(long)]
    orbit_volume: Option<f64>,
    /// Cosine modes used as perturbed starts.
    #[arg(long, value_delimiter = ',', default_values_t = vec![1u32, 2, 3])]
    modes: Vec<u32>,
    #[arg(long, default_value_t = 1)]
    random_starts: usize,
    #[arg(long, default_value_t = 0.3)]
    amplitude: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Also write (s, u) samples of the solution as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExpansionArgs {
    /// Quotient dimension N.
    #[arg(long, default_value_t = 6)]
    n: u32,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    /// Fibre volume at the centre.
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// Quadratic coefficient of the fibre volume.
    #[arg(long, default_value_t = 0.0)]
    q: f64,
    #[arg(long, default_value_t = 1.0)]
    f0: f64,
    #[arg(long, default_value_t = 0.0)]
    lap_f: f64,
    /// Use the round-sphere model with this sectional curvature.
    #[arg(long)]
    curvature: Option<f64>,
    /// Largest ε, in units of δ².
    #[arg(long, default_value_t = 1e-3)]
    eps_hi: f64,
    #[arg(long, default_value_t = 1e-6)]
    eps_lo: f64,
    #[arg(long, default_value_t = 16)]
    count: usize,
    #[arg(long, default_value_t = 1e-12)]
    quad_tol: f64,
    /// Also write (ε, I) samples as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    out: Output,
}

fn parse_example(s: &str) -> Result<ExampleId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A failed run: message for stderr, exit status, and optionally output
/// that should still be emitted (the best report of a failed solve).
struct Failure {
    status: u8,
    message: String,
    output: Option<(String, Option<PathBuf>)>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = if e.is_input_error() { EXIT_INPUT } else { EXIT_NUMERIC };
        Failure { status, message: e.to_string(), output: None }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { status: EXIT_INPUT, message: format!("i/o error: {e}"), output: None }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure { status: EXIT_INPUT, message: format!("csv error: {e}"), output: None }
    }
}

type Run = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.render().to_string();
            eprint!("{text}");
            if !text.contains("Usage:") {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let (text, path) = match &cli.command {
        Command::Interval(a) => (run_interval(a), a.out.output.clone()),
        Command::Table(a) => (run_table(a), a.output.clone()),
        Command::Solve(a) => (run_solve(a), a.output.clone()),
        Command::Expansion(a) => (run_expansion(a), a.out.output.clone()),
    };
    match text {
        Ok(text) => match emit(&text, path.as_deref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_INPUT)
            }
        },
        Err(f) => {
            if let Some((text, path)) = f.output {
                let _ = emit(&text, path.as_deref());
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.status)
        }
    }
}

fn emit(text: &str, path: Option<&Path>) -> std::io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

/// Canonical JSON: sorted keys (serde_json's default map), shortest
/// round-trip floats, non-finite values as null, trailing newline.
fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn finite(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn example_params(a: &IntervalArgs) -> ExampleParams {
    let d = ExampleParams::defaults(a.example);
    ExampleParams {
        n: a.n.unwrap_or(d.n),
        t: a.t.unwrap_or(d.t),
        a: a.a.unwrap_or(d.a),
        b: a.b.unwrap_or(d.b),
        a1: a.a1.unwrap_or(d.a1),
        a2: a.a2.unwrap_or(d.a2),
    }
}

fn params_json(id: ExampleId, p: &ExampleParams) -> Value {
    let all = serde_json::to_value(p).expect("params serialize");
    let mut out = Map::new();
    for name in id.parameter_names() {
        out.insert((*name).to_string(), all[*name].clone());
    }
    Value::Object(out)
}

fn interval_json(id: ExampleId, p: &ExampleParams, iv: &GuaranteedInterval) -> Result<Value, Error> {
    let bounds = example_configuration(id, p).and_then(|c| example_bounds(&c)).ok();
    Ok(json!({
        "example_id": id.as_str(),
        "params": params_json(id, p),
        "interval": {
            "lo": finite(iv.lo),
            "hi": finite(iv.hi),
            "lo_strict": iv.lo_strict,
            "hi_strict": iv.hi_strict,
            "empty": iv.empty,
        },
        "conditions": serde_json::to_value(&iv.diagnostics).expect("verdicts serialize"),
        "bounds": serde_json::to_value(bounds).expect("bounds serialize"),
    }))
}

fn run_interval(a: &IntervalArgs) -> Run {
    let id = a.example;
    let p = example_params(a);
    let f = match a.f_max {
        Some(f_max) => FProfile::new(
            f_max,
            a.f_min.unwrap_or(f_max.min(a.f_avg)),
            a.f_avg,
            a.lap_f,
            a.vanishing_order.unwrap_or(p.n),
        )?,
        None => default_weight(id, &p)?,
    };
    let iv = if a.unchecked {
        example_interval_unchecked(id, &p, &f)?
    } else {
        example_interval(id, &p, &f)?
    };
    match a.out.format {
        Format::Json => Ok(to_json(&interval_json(id, &p, &iv)?)),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            write_interval_header(&mut w)?;
            write_interval_row(&mut w, id, &p, &iv)?;
            Ok(String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8"))
        }
    }
}

fn write_interval_header<W: Write>(w: &mut csv::Writer<W>) -> Result<(), csv::Error> {
    w.write_record([
        "example", "n", "t", "a", "b", "a1", "a2", "lo", "hi", "lo_strict", "hi_strict", "empty",
    ])
}

fn csv_float(x: f64) -> String {
    if x.is_finite() {
        x.to_string()
    } else {
        String::new()
    }
}

fn write_interval_row<W: Write>(
    w: &mut csv::Writer<W>,
    id: ExampleId,
    p: &ExampleParams,
    iv: &GuaranteedInterval,
) -> Result<(), csv::Error> {
    let used = id.parameter_names();
    let param = |name: &str, value: String| if used.contains(&name) { value } else { String::new() };
    w.write_record([
        id.as_str().to_string(),
        param("n", p.n.to_string()),
        param("t", p.t.to_string()),
        param("a", p.a.to_string()),
        param("b", p.b.to_string()),
        param("a1", p.a1.to_string()),
        param("a2", p.a2.to_string()),
        csv_float(iv.lo),
        csv_float(iv.hi),
        iv.lo_strict.to_string(),
        iv.hi_strict.to_string(),
        iv.empty.to_string(),
    ])
}

fn run_table(a: &TableArgs) -> Run {
    let ids: Vec<ExampleId> = match a.example {
        Some(id) => vec![id],
        None => ExampleId::ALL.to_vec(),
    };
    let mut out = String::from("# default parameters:");
    for id in &ids {
        let p = ExampleParams::defaults(*id);
        let all = serde_json::to_value(p).expect("params serialize");
        let kv: Vec<String> = id
            .parameter_names()
            .iter()
            .map(|k| format!("{k}={}", all[*k]))
            .collect();
        out.push_str(&format!(" {} ({});", id.as_str(), kv.join(" ")));
    }
    out.push_str(" default weight per configuration\n");
    let mut w = csv::Writer::from_writer(Vec::new());
    write_interval_header(&mut w)?;
    for id in ids {
        let p = ExampleParams::defaults(id);
        let iv = example_interval(id, &p, &default_weight(id, &p)?)?;
        write_interval_row(&mut w, id, &p, &iv)?;
    }
    out.push_str(&String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8"));
    Ok(out)
}

fn run_solve(a: &SolveArgs) -> Run {
    let (length, h, k) = (a.length, a.bump_height, a.bump_sharpness);
    let mut problem = match a.f {
        Weight::One => ReducedProblem::constant_f(length, a.weight, a.alpha, a.p, a.grid)?,
        Weight::Bump => {
            if !(h >= 0.0 && k > 0.0) {
                return Err(Error::Domain(format!(
                    "bump needs height >= 0 and sharpness > 0, got {h} and {k}"
                ))
                .into());
            }
            ReducedProblem::with_f_fn(length, a.weight, a.alpha, a.p, a.grid, |s| {
                1.0 + h * (k * ((2.0 * std::f64::consts::PI * s / length).cos() - 1.0)).exp()
            })?
        }
    };
    if let Some(v) = a.orbit_volume {
        problem = problem.with_orbit_volume(v)?;
    }
    if !(a.tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {}", a.tol)).into());
    }
    let cfg = SolverConfig {
        tol: a.tol,
        seed: a.seed,
        random_starts: a.random_starts,
        modes: a.modes.clone(),
        amplitude: a.amplitude,
        ..SolverConfig::default()
    };
    let (report, failure) = match minimize(&problem, &cfg) {
        Ok(r) => (r, None),
        Err(Error::Convergence { message, best }) => (*best, Some(message)),
        Err(e) => return Err(e.into()),
    };
    if let Some(path) = &a.csv {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["s", "u"])?;
        let hs = problem.spacing();
        for (i, u) in report.u.iter().enumerate() {
            w.write_record([(i as f64 * hs).to_string(), u.to_string()])?;
        }
        w.flush()?;
    }
    let mut v = serde_json::to_value(&report).expect("report serializes");
    v["threshold"] = problem_threshold(&problem).map_or(Value::Null, finite);
    let text = to_json(&v);
    match failure {
        None => Ok(text),
        Some(message) => Err(Failure {
            status: EXIT_NUMERIC,
            message,
            output: Some((text, a.output.clone())),
        }),
    }
}

fn run_expansion(a: &ExpansionArgs) -> Run {
    if a.count < 2 || !(a.eps_hi > a.eps_lo && a.eps_lo > 0.0) {
        return Err(Error::Domain("need count >= 2 and eps_hi > eps_lo > 0".into()).into());
    }
    let cfg = ExpansionConfig {
        n: a.n,
        delta: a.delta,
        alpha: a.alpha,
        a: a.a,
        density: match a.curvature {
            Some(curvature) => DensityModel::RoundSphere { curvature },
            None => DensityModel::Euclidean,
        },
        q: a.q,
        f0: a.f0,
        lap_f: a.lap_f,
        epsilons: log_window(a.delta, a.eps_hi, a.eps_lo, a.count),
        quad_tol: a.quad_tol,
    };
    let (summary, samples) = if a.n == 4 {
        let fit = fit_log_branch(&cfg)?;
        (
            json!({
                "limit_fitted": fit.limit_fitted,
                "limit_predicted": fit.limit_predicted,
                "log_coeff_fitted": fit.log_coeff_fitted,
                "log_coeff_sign_predicted": fit.log_coeff_sign_predicted,
                "window": fit.window,
            }),
            fit.samples,
        )
    } else {
        let fit = fit_and_compare(&cfg)?;
        (
            json!({
                "limit_fitted": fit.limit_fitted,
                "limit_predicted": fit.limit_predicted,
                "c1_fitted": fit.c1_fitted,
                "c1_predicted": fit.c1_predicted,
                "window": fit.window,
            }),
            fit.samples,
        )
    };
    let sample_csv = |w: &mut csv::Writer<Vec<u8>>| -> Result<(), csv::Error> {
        w.write_record(["epsilon", "quotient"])?;
        for (e, i) in &samples {
            w.write_record([e.to_string(), i.to_string()])?;
        }
        Ok(())
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    sample_csv(&mut w)?;
    let csv_text = String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8");
    if let Some(path) = &a.csv {
        fs::write(path, &csv_text)?;
    }
    Ok(match a.out.format {
        Format::Json => to_json(&summary),
        Format::Csv => csv_text,
    })
}
