//! Command-line front end: one subcommand per computation, tables written
//! as CSV (with `#` header lines echoing every parameter) or JSON.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::anholonomy::{berry_phase_loop, level_anholonomy_shift, LoopPath, LoopSpace};
use crate::caustics::{
    copy_simulation, expand_state, propagate, reconstruct_on, singularity_current, ModeBasis, SampledProfile,
    StateExpansion, SymmetricGrid,
};
use crate::error::Error;
use crate::singularity::{ExtReal, SingularityParams};
use crate::spectra::{
    calogero_spectrum, finite_difference_oracle, line_bound_states, track_levels_along_loop, well_spectrum,
    Level, OscillatorParams, WellParams,
};
use crate::statforce::{force_curve, find_force_minimum, ForceMethod, GasConfig, Statistics};
use crate::susy::{
    condition_preservation_check, n1_susy_well_spectrum, susy_algebra_residual, ChannelEigenstate, Supercharge,
    SuperchargeFamily,
};
use crate::singularity::build_characteristic_matrix;
use crate::{Complex64, Units};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "QSING_OUTPUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "qsingular", version, about = "Point singularities in one-dimensional quantum mechanics")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Output file; defaults to $QSING_OUTPUT_DIR/<command>.<ext> or stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// JSON object of flag values; explicit flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Levels of the infinite well with a central singularity, optionally
    /// swept along θ± = center ± x.
    Spectrum(SpectrumArgs),
    /// Bound states on the whole line.
    LineBound(LineBoundArgs),
    /// Oscillator with inverse-square core: levels E/ħω of both series.
    Calogero(CalogeroArgs),
    /// Follow well levels around a loop on the spectral torus.
    LoopTrack(LoopTrackArgs),
    /// Berry phase of a loop on the isospectral sphere.
    Berry(BerryArgs),
    /// N = 1 SUSY well spectrum versus μ, with supercharge checks.
    SusyCheck(SusyArgs),
    /// Copy process at caustic times for a Gaussian or tabulated profile.
    CopySim(CopyArgs),
    /// Probability current through the singularity versus time.
    Current(CurrentArgs),
    /// Net statistical force on the partition versus temperature.
    Force(ForceArgs),
    /// Temperature of the net-force minimum.
    ForceMin(ForceMinArgs),
    /// Root-finder levels against the finite-difference oracle.
    Oracle(OracleArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::LineBound(_) => "line-bound",
            Command::Calogero(_) => "calogero",
            Command::LoopTrack(_) => "loop-track",
            Command::Berry(_) => "berry",
            Command::SusyCheck(_) => "susy-check",
            Command::CopySim(_) => "copy-sim",
            Command::Current(_) => "current",
            Command::Force(_) => "force",
            Command::ForceMin(_) => "force-min",
            Command::Oracle(_) => "oracle",
        }
    }
}

const SUBCOMMANDS: [&str; 11] = [
    "spectrum", "line-bound", "calogero", "loop-track", "berry", "susy-check", "copy-sim", "current", "force",
    "force-min", "oracle",
];

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
struct SpectrumArgs {
    #[arg(long = "theta-plus", allow_hyphen_values = true)]
    theta_plus: Option<f64>,
    #[arg(long = "theta-minus", allow_hyphen_values = true)]
    theta_minus: Option<f64>,
    #[arg(long, default_value_t = FRAC_PI_2, allow_hyphen_values = true)]
    mu: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    nu: f64,
    /// Half width of the well.
    #[arg(long = "l", default_value_t = 1.0)]
    l: f64,
    #[arg(long = "L0", default_value_t = 1.0)]
    l0: f64,
    /// Number of levels reported per parameter point.
    #[arg(long, default_value_t = 8)]
    count: usize,
    /// Sweep centre c of θ± = c ± x.
    #[arg(long, default_value_t = FRAC_PI_2, allow_hyphen_values = true)]
    center: f64,
    #[arg(long = "x-min", allow_hyphen_values = true)]
    x_min: Option<f64>,
    #[arg(long = "x-max", allow_hyphen_values = true)]
    x_max: Option<f64>,
    #[arg(long, default_value_t = 101)]
    points: usize,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
struct LineBoundArgs {
    #[arg(long = "theta-plus", allow_hyphen_values = true)]
    theta_plus: f64,
    #[arg(long = "theta-minus", allow_hyphen_values = true)]
    theta_minus: f64,
    #[arg(long, default_value_t = FRAC_PI_2, allow_hyphen_values = true)]
    mu: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    nu: f64,
    #[arg(long = "L0", default_value_t = 1.0)]
    l0: f64,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
struct CalogeroArgs {
    /// Exponent a = √(1 + 8mg/ħ²)/2 in [1/2, 1).
    #[arg(long, default_value_t = 0.75)]
    a: f64,
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
    /// L(θ₊): a number or "inf".
    #[arg(long = "L-plus", default_value = "inf", allow_hyphen_values = true)]
    l_plus: String,
    /// L(θ₋): a number or "inf".
    #[arg(long = "L-minus", default_value = "0", allow_hyphen_values = true)]
    l_minus: String,
    #[arg(long, default_value_t = 10)]
    count: usize,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
struct LoopTrackArgs {
    /// Loop file {"space": "torus", "points": [[θ₊, θ₋], ...]}; default is
    /// (θ, θ + offset) with θ: start → start + 2π.
    #[arg(long = "loop")]
    loop_file: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    start: f64,
    #[arg(long, default_value_t = PI, allow_hyphen_values = true)]
    offset: f64,
    /// Traverse the default loop backwards.
    #[arg(long)]
    reverse: bool,
    #[arg(long = "l", default_value_t = 1.0)]
    l: f64,
    #[arg(long = "L0", default_value_t = 1.0)]
    l0: f64,
    #[arg(long, default_value_t = FRAC_PI_2, allow_hyphen_values = true)]
    mu: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    nu: f64,
    #[arg(long, default_value_t = 8)]
    levels: usize,
    #[arg(long, default_value_t = 400)]
    steps: usize,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
struct BerryArgs {
    /// Loop file {"space": "sphere", "points": [[μ, ν], ...]}.
    #[arg(long = "loop")]
    loop_file: Option<PathBuf>,
    /// Constant-μ loops for μ on [mu-min, mu-max] when no file is given.
    #[arg(long = "mu-min", default_value_t = 0.0, allow_hyphen_values = true)]
    mu_min: f64,
    #[arg(long = "mu-max", default_value_t = PI, allow_hyphen_values = true)]
    mu_max: f64,
    #[arg(long, default_value_t = 37)]
    points: usize,
    #[arg(long, default_value_t = 400)]
    segments: usize,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
struct SusyArgs {
    #[arg(long = "mu-min", default_value_t = 0.0, allow_hyphen_values = true)]
    mu_min: f64,
    #[arg(long = "mu-max", default_value_t = PI, allow_hyphen_values = true)]
    mu_max: f64,
    #[arg(long, default_value_t = 61)]
    points: usize,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    nu: f64,
    #[arg(long = "l", default_value_t = 1.0)]
    l: f64,
    #[arg(long = "n-min", default_value_t = -3, allow_hyphen_values = true)]
    n_min: i64,
    #[arg(long = "n-max", default_value_t = 3, allow_hyphen_values = true)]
    n_max: i64,
    /// θ of U = V†diag(e^{iθ}, −1)V used for the supercharge checks.
    #[arg(long, default_value_t = FRAC_PI_2, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long, default_value_t = 0.3, allow_hyphen_values = true)]
    c: f64,
    #[arg(long, default_value_t = 0.4, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long = "check-mu", default_value_t = 0.9, allow_hyphen_values = true)]
    check_mu: f64,
    #[arg(long = "check-nu", default_value_t = 1.7, allow_hyphen_values = true)]
    check_nu: f64,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
struct CopyArgs {
    #[arg(long, default_value_t = 0.75)]
    a: f64,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, default_value_t = 2.0)]
    x0: f64,
    #[arg(long, default_value_t = 0.4)]
    sigma: f64,
    /// Modes per series.
    #[arg(long, default_value_t = 200)]
    nmax: usize,
    #[arg(long, default_value_t = 0.005)]
    dx: f64,
    /// Profile table with columns x, re, im on a symmetric midpoint grid.
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Emit x, |ψ(0)|², |ψ(T)|² instead of the weights.
    #[arg(long)]
    densities: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum BasisKind {
    Free,
    Dirichlet,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
struct CurrentArgs {
    #[arg(long, default_value_t = 0.75)]
    a: f64,
    #[arg(long, value_enum, default_value_t = BasisKind::Free)]
    basis: BasisKind,
    /// Index n of the series-1 component.
    #[arg(long, default_value_t = 0)]
    n1: usize,
    /// Index n of the series-2 component.
    #[arg(long, default_value_t = 0)]
    n2: usize,
    /// Relative phase of the series-2 component.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    phase: f64,
    #[arg(long = "t-min", default_value_t = 0.0, allow_hyphen_values = true)]
    t_min: f64,
    #[arg(long = "t-max", default_value_t = PI, allow_hyphen_values = true)]
    t_max: f64,
    #[arg(long, default_value_t = 41)]
    points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum MethodArg {
    Exact,
    LowT,
    Linear,
    Integral,
    Poisson,
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Spacing {
    Log,
    Linear,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
struct ForceArgs {
    #[arg(long, value_enum, default_value_t = StatArg::Bose)]
    stat: StatArg,
    #[arg(long = "N", default_value_t = 100)]
    n: usize,
    #[arg(long = "t-min", default_value_t = 0.01)]
    t_min: f64,
    #[arg(long = "t-max", default_value_t = 160.0)]
    t_max: f64,
    #[arg(long, default_value_t = 200)]
    points: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    method: MethodArg,
    #[arg(long, value_enum, default_value_t = Spacing::Log)]
    spacing: Spacing,
    #[arg(long = "k-max", default_value_t = 40)]
    k_max: usize,
    #[arg(long = "m-max", default_value_t = 10)]
    m_max: usize,
    /// Add log10 t and log10 ΔF columns.
    #[arg(long = "double-log")]
    double_log: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum StatArg {
    Bose,
    Fermi,
}

impl From<StatArg> for Statistics {
    fn from(s: StatArg) -> Self {
        match s {
            StatArg::Bose => Statistics::Bose,
            StatArg::Fermi => Statistics::Fermi,
        }
    }
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
struct ForceMinArgs {
    #[arg(long, value_enum, default_value_t = StatArg::Bose)]
    stat: StatArg,
    #[arg(long = "N", default_value_t = 100)]
    n: usize,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
struct OracleArgs {
    #[arg(long = "theta-plus", allow_hyphen_values = true)]
    theta_plus: f64,
    #[arg(long = "theta-minus", allow_hyphen_values = true)]
    theta_minus: f64,
    #[arg(long, default_value_t = FRAC_PI_2, allow_hyphen_values = true)]
    mu: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    nu: f64,
    #[arg(long = "l", default_value_t = 1.0)]
    l: f64,
    #[arg(long = "L0", default_value_t = 1.0)]
    l0: f64,
    #[arg(long, default_value_t = 5)]
    levels: usize,
    #[arg(long, default_value_t = 4000)]
    grid: usize,
}

/// Failure of a run, mapped to an exit code.
#[derive(Debug)]
enum Failure {
    Validation(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Numerical(e.to_string())
        }
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Validation(msg.into())
}

#[derive(Debug, Clone, PartialEq)]
enum Cell {
    F(f64),
    I(i64),
    S(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::F(v) => v.to_string(),
            Cell::I(v) => v.to_string(),
            Cell::S(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::F(v) => serde_json::Number::from_f64(*v).map(Value::Number).unwrap_or(Value::Null),
            Cell::I(v) => Value::from(*v),
            Cell::S(s) => Value::from(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::F)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::I(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::I(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::S(v.to_string())
    }
}

struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
    notes: Vec<String>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new(), notes: Vec::new() }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

fn render(command: &str, params: &Map<String, Value>, table: &Table, format: Format) -> Vec<u8> {
    match format {
        Format::Csv => {
            let mut out = Vec::new();
            let _ = writeln!(out, "# qsingular {}", env!("CARGO_PKG_VERSION"));
            let _ = writeln!(out, "# command = {command}");
            for (k, v) in params {
                let _ = writeln!(out, "# {k} = {}", plain(v));
            }
            for n in &table.notes {
                let _ = writeln!(out, "# {n}");
            }
            let mut w = csv::Writer::from_writer(out);
            let _ = w.write_record(&table.columns);
            for r in &table.rows {
                let _ = w.write_record(r.iter().map(Cell::csv));
            }
            w.into_inner().unwrap_or_default()
        }
        Format::Json => {
            let rows: Vec<Value> = table.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
            let doc = serde_json::json!({
                "tool": format!("qsingular {}", env!("CARGO_PKG_VERSION")),
                "command": command,
                "parameters": params,
                "notes": table.notes,
                "columns": table.columns,
                "rows": rows,
            });
            let mut s = serde_json::to_vec_pretty(&doc).unwrap_or_default();
            s.push(b'\n');
            s
        }
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}

fn params_of<T: Serialize>(args: &T) -> Map<String, Value> {
    match serde_json::to_value(args) {
        Ok(Value::Object(m)) => m,
        _ => Map::new(),
    }
}

/// Rewrite `argv` so that the keys of the `--config` JSON object become
/// flags placed right after the subcommand, ahead of the user's own flags.
fn expand_config(argv: &[String]) -> Result<Vec<String>, Failure> {
    let mut path = None;
    for (i, a) in argv.iter().enumerate() {
        if a == "--config" {
            path = argv.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else { return Ok(argv.to_vec()) };
    let text = std::fs::read_to_string(&path).map_err(|e| invalid(format!("cannot read config {path}: {e}")))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| invalid(format!("config {path} is not JSON: {e}")))?;
    let Value::Object(map) = doc else { return Err(invalid(format!("config {path} must be a JSON object"))) };
    let mut flags = Vec::new();
    for (k, v) in map {
        match v {
            Value::Bool(true) => flags.push(format!("--{k}")),
            Value::Bool(false) => {}
            Value::String(s) => flags.extend([format!("--{k}"), s]),
            Value::Number(n) => flags.extend([format!("--{k}"), n.to_string()]),
            _ => return Err(invalid(format!("config key {k} must be a scalar"))),
        }
    }
    let Some(pos) = argv.iter().position(|a| SUBCOMMANDS.contains(&a.as_str())) else {
        return Ok(argv.to_vec());
    };
    let mut out = argv[..=pos].to_vec();
    out.extend(flags);
    out.extend_from_slice(&argv[pos + 1..]);
    Ok(out)
}

/// Run with the process's standard streams.
pub fn run(argv: Vec<String>) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_to(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Run with explicit output streams; returns the exit code.
pub fn run_to(argv: Vec<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let argv = match expand_config(&argv) {
        Ok(a) => a,
        Err(f) => return report(f, err),
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let name = cli.command.name();
    let result = dispatch(&cli.command);
    match result {
        Ok((params, table)) => {
            let bytes = render(name, &params, &table, cli.format);
            let ext = match cli.format {
                Format::Csv => "csv",
                Format::Json => "json",
            };
            let target = cli
                .output
                .clone()
                .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(|d| PathBuf::from(d).join(format!("{name}.{ext}"))));
            match target {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &bytes) {
                        let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                        return 2;
                    }
                }
                None => {
                    let _ = out.write_all(&bytes);
                }
            }
            0
        }
        Err(f) => report(f, err),
    }
}

fn report(f: Failure, err: &mut dyn Write) -> i32 {
    match f {
        Failure::Validation(m) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Failure::Numerical(m) => {
            let _ = writeln!(err, "numerical failure: {m}");
            3
        }
    }
}

type Outcome = Result<(Map<String, Value>, Table), Failure>;

fn dispatch(cmd: &Command) -> Outcome {
    match cmd {
        Command::Spectrum(a) => spectrum(a),
        Command::LineBound(a) => line_bound(a),
        Command::Calogero(a) => calogero(a),
        Command::LoopTrack(a) => loop_track(a),
        Command::Berry(a) => berry(a),
        Command::SusyCheck(a) => susy_check(a),
        Command::CopySim(a) => copy_sim(a),
        Command::Current(a) => current(a),
        Command::Force(a) => force(a),
        Command::ForceMin(a) => force_min(a),
        Command::Oracle(a) => oracle(a),
    }
}

fn positive(name: &str, v: f64) -> Result<(), Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be positive, got {v}")))
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn level_row(prefix: Vec<Cell>, lv: &Level) -> Vec<Cell> {
    let mut row = prefix;
    row.extend([
        Cell::from(lv.index),
        Cell::S(format!("{:?}", lv.series).to_lowercase()),
        Cell::S(format!("{:?}", lv.parity).to_lowercase()),
        Cell::from(lv.momentum.map(|m| m.signed())),
        Cell::from(lv.energy),
    ]);
    row
}

fn spectrum(a: &SpectrumArgs) -> Outcome {
    positive("l", a.l)?;
    positive("L0", a.l0)?;
    if a.count == 0 {
        return Err(invalid("count must be positive"));
    }
    let points: Vec<(f64, f64, f64)> = match (a.x_min, a.x_max) {
        (Some(lo), Some(hi)) => {
            if a.points == 0 || hi < lo {
                return Err(invalid("sweep needs x-min ≤ x-max and points > 0"));
            }
            linspace(lo, hi, a.points).into_iter().map(|x| (x, a.center + x, a.center - x)).collect()
        }
        (None, None) => match (a.theta_plus, a.theta_minus) {
            (Some(tp), Some(tm)) => vec![(0.0, tp, tm)],
            _ => return Err(invalid("give --theta-plus and --theta-minus, or --x-min and --x-max")),
        },
        _ => return Err(invalid("--x-min and --x-max go together")),
    };
    let wells: Vec<(f64, f64, f64, WellParams)> = points
        .into_iter()
        .map(|(x, tp, tm)| {
            let s = SingularityParams::wrapped(tp, tm, a.mu, a.nu, a.l0)?;
            Ok((x, s.theta_plus, s.theta_minus, WellParams::new(a.l, s)?))
        })
        .collect::<Result<_, Error>>()?;
    let spectra: Vec<Vec<Level>> = wells
        .par_iter()
        .map(|(_, _, _, w)| well_spectrum(w, a.count))
        .collect::<Result<_, Error>>()?;
    let mut t = Table::new(&["x", "theta_plus", "theta_minus", "index", "series", "parity", "k", "energy"]);
    for ((x, tp, tm, _), levels) in wells.iter().zip(&spectra) {
        for lv in levels.iter().take(a.count) {
            t.push(level_row(vec![Cell::F(*x), Cell::F(*tp), Cell::F(*tm)], lv));
        }
    }
    Ok((params_of(a), t))
}

fn line_bound(a: &LineBoundArgs) -> Outcome {
    positive("L0", a.l0)?;
    let s = SingularityParams::wrapped(a.theta_plus, a.theta_minus, a.mu, a.nu, a.l0)?;
    let levels = line_bound_states(&s, &Units::default())?;
    let mut t = Table::new(&["index", "series", "parity", "k", "energy"]);
    for lv in &levels {
        t.push(level_row(vec![], lv));
    }
    Ok((params_of(a), t))
}

fn parse_length(name: &str, s: &str) -> Result<ExtReal, Failure> {
    match s.trim() {
        "inf" | "infinity" | "Inf" => Ok(ExtReal::Infinite),
        v => v
            .parse::<f64>()
            .map(ExtReal::from_f64)
            .map_err(|_| invalid(format!("{name} must be a number or \"inf\", got {v}"))),
    }
}

fn calogero(a: &CalogeroArgs) -> Outcome {
    let o = OscillatorParams::from_a_with(a.a, a.omega, a.hbar, a.mass)?;
    let (lp, lm) = (parse_length("L-plus", &a.l_plus)?, parse_length("L-minus", &a.l_minus)?);
    if a.count == 0 {
        return Err(invalid("count must be positive"));
    }
    let levels = calogero_spectrum(&o, lp, lm, a.count)?;
    let mut t = Table::new(&["series", "n", "lambda", "energy"]);
    for lv in &levels {
        t.push(vec![
            Cell::S(format!("{:?}", lv.series).to_lowercase()),
            Cell::from(lv.index),
            Cell::F(lv.energy / (o.hbar * o.omega)),
            Cell::F(lv.energy),
        ]);
    }
    Ok((params_of(a), t))
}

fn read_loop(path: &PathBuf, space: LoopSpace) -> Result<LoopPath, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read loop {}: {e}", path.display())))?;
    let lp: LoopPath = serde_json::from_str(&text).map_err(|e| invalid(format!("bad loop file: {e}")))?;
    lp.validate()?;
    if lp.space != space {
        return Err(Failure::Validation(format!("loop must live on the {space:?} space").to_lowercase()));
    }
    if !lp.is_closed() {
        return Err(Error::OpenLoop.into());
    }
    Ok(lp)
}

fn loop_track(a: &LoopTrackArgs) -> Outcome {
    positive("l", a.l)?;
    positive("L0", a.l0)?;
    if a.levels == 0 || a.steps == 0 {
        return Err(invalid("levels and steps must be positive"));
    }
    let path = match &a.loop_file {
        Some(p) => read_loop(p, LoopSpace::Torus)?,
        None => {
            let lp = LoopPath::torus_line([a.start, a.start + a.offset], [2.0 * PI, 2.0 * PI], 64)?;
            if a.reverse {
                lp.reversed()
            } else {
                lp
            }
        }
    };
    let p0 = path.points[0];
    let well = WellParams::new(a.l, SingularityParams::wrapped(p0[0], p0[1], a.mu, a.nu, a.l0)?)?;
    let tr = track_levels_along_loop(&path, &well, a.levels, a.steps)?;
    let mut t = Table::new(&["s", "theta_plus", "theta_minus", "level", "end_level", "series", "parity", "k"]);
    match level_anholonomy_shift(&tr) {
        Ok(s) => t.note(format!("uniform shift = {s}")),
        Err(e) => t.note(format!("shift: {e}")),
    }
    t.note(format!("spectrum mismatch = {:e}", tr.spectrum_mismatch()));
    let kinetic = well.units.kinetic();
    for traj in &tr.trajectories {
        let ks = traj.momenta(kinetic);
        for (s, k) in tr.parameter.iter().zip(ks) {
            let th = path.point_at(*s);
            t.push(vec![
                Cell::F(*s),
                Cell::F(th[0]),
                Cell::F(th[1]),
                Cell::from(traj.start_index),
                traj.end_index.map_or(Cell::Empty, Cell::from),
                Cell::S(format!("{:?}", traj.series).to_lowercase()),
                Cell::S(format!("{:?}", traj.parity).to_lowercase()),
                Cell::F(k),
            ]);
        }
    }
    Ok((params_of(a), t))
}

fn berry(a: &BerryArgs) -> Outcome {
    let mut t = Table::new(&["mu", "raw", "reduced", "expected"]);
    match &a.loop_file {
        Some(p) => {
            let lp = read_loop(p, LoopSpace::Sphere)?;
            let g = berry_phase_loop(&lp)?;
            t.push(vec![Cell::Empty, Cell::F(g.raw), Cell::F(g.reduced), Cell::Empty]);
        }
        None => {
            if a.points == 0 || a.segments == 0 || a.mu_max < a.mu_min || a.mu_min < 0.0 || a.mu_max > PI {
                return Err(invalid("need 0 ≤ mu-min ≤ mu-max ≤ π, points > 0, segments > 0"));
            }
            for mu in linspace(a.mu_min, a.mu_max, a.points) {
                let g = berry_phase_loop(&LoopPath::constant_mu(mu, a.segments)?)?;
                t.push(vec![Cell::F(mu), Cell::F(g.raw), Cell::F(g.reduced), Cell::F(-PI * (1.0 + mu.sin()))]);
            }
        }
    }
    Ok((params_of(a), t))
}

fn susy_check(a: &SusyArgs) -> Outcome {
    positive("l", a.l)?;
    if a.points == 0 || a.mu_min < 0.0 || a.mu_max > PI || a.mu_max < a.mu_min || a.n_max < a.n_min {
        return Err(invalid("need 0 ≤ mu-min ≤ mu-max ≤ π, points > 0, n-min ≤ n-max"));
    }
    let units = Units::default();
    let mut t = Table::new(&["mu", "n", "k", "energy"]);
    // supercharge checks at one point of the family
    let fam = SuperchargeFamily { alpha: a.alpha, c: a.c, theta: a.theta, mu: a.check_mu, nu: a.check_nu, l0: 1.0 };
    let q = Supercharge::from_family(&fam, &units)?;
    let p = SingularityParams::wrapped(a.theta, PI, a.check_mu, a.check_nu, 1.0)?;
    let state = ChannelEigenstate {
        params: p,
        k: 2.3,
        weights: [Complex64::new(0.6, 0.0), Complex64::new(0.2, 0.5)],
        extent: a.l,
    };
    let r = susy_algebra_residual(&q, &state, 200, &units);
    t.note(format!("algebra residual 2Q^2 - (H + 2|b|^2) = {:e}", r.corrected));
    t.note(format!("algebra residual 2Q^2 - (H + |b|^2) = {:e}", r.literal));
    let pc = condition_preservation_check(&build_characteristic_matrix(&p), 1.0, &q, &state);
    t.note(format!("condition preserved: state = {}, image = {}", pc.state_ok, pc.image_ok));
    for mu in linspace(a.mu_min, a.mu_max, a.points) {
        for (lv, s) in n1_susy_well_spectrum(mu, a.nu, a.l, a.n_min..=a.n_max, &units)? {
            t.push(vec![Cell::F(mu), Cell::I(s.n), Cell::F(s.k), Cell::F(lv.energy)]);
        }
    }
    Ok((params_of(a), t))
}

fn read_profile(path: &PathBuf) -> Result<SampledProfile, Failure> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .has_headers(true)
        .from_path(path)
        .map_err(|e| invalid(format!("cannot read profile {}: {e}", path.display())))?;
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| invalid(format!("bad profile row: {e}")))?;
        let num = |i: usize| -> Result<f64, Failure> {
            rec.get(i)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .ok_or_else(|| invalid(format!("profile row needs x, re, im: {rec:?}")))
        };
        xs.push(num(0)?);
        vs.push(Complex64::new(num(1)?, num(2)?));
    }
    if xs.len() < 2 || xs.len() % 2 == 1 {
        return Err(invalid("profile needs an even number of points on a symmetric grid"));
    }
    let dx = xs[1] - xs[0];
    let grid = SymmetricGrid::new(dx, xs.len() / 2)?;
    for (i, x) in xs.iter().enumerate() {
        if (x - grid.point(i)).abs() > 1e-9 * dx.max(1.0) {
            return Err(invalid(format!("profile point {i} at x = {x} is off the symmetric midpoint grid")));
        }
    }
    Ok(SampledProfile { grid, values: vs })
}

fn copy_sim(a: &CopyArgs) -> Outcome {
    positive("sigma", a.sigma)?;
    positive("dx", a.dx)?;
    if a.k == 0 || a.nmax == 0 {
        return Err(invalid("k and nmax must be positive"));
    }
    let o = OscillatorParams::from_a(a.a)?;
    let basis = ModeBasis::free(&o, a.nmax)?;
    let profile = match &a.profile {
        Some(p) => read_profile(p)?,
        None => {
            positive("x0", a.x0)?;
            let grid = SymmetricGrid::covering(a.x0 + 8.0 * a.sigma, a.dx)?;
            SampledProfile::gaussian(grid, a.x0, a.sigma)
        }
    };
    let window = (a.x0 - 6.0 * a.sigma, a.x0 + 6.0 * a.sigma);
    if a.densities {
        let e = expand_state(&profile, &basis)?;
        let evolved = reconstruct_on(&propagate(&e, &basis, a.k as f64 * PI / o.omega), &basis, profile.grid);
        let mut t = Table::new(&["x", "initial_density", "evolved_density"]);
        t.note(format!("expansion residual = {:e}", e.residual));
        for (i, x) in profile.grid.points().enumerate() {
            t.push(vec![Cell::F(x), Cell::F(profile.values[i].norm_sqr()), Cell::F(evolved.values[i].norm_sqr())]);
        }
        return Ok((params_of(a), t));
    }
    let r = copy_simulation(&profile, &basis, a.k, window)?;
    let mut t = Table::new(&[
        "return_weight",
        "mirror_weight",
        "leakage",
        "predicted_return",
        "predicted_mirror",
        "expansion_residual",
    ]);
    t.push(vec![
        Cell::F(r.measured_return_weight),
        Cell::F(r.measured_mirror_weight),
        Cell::F(r.leakage),
        Cell::F(r.predicted_return_weight),
        Cell::F(r.predicted_mirror_weight),
        Cell::F(r.expansion_residual),
    ]);
    Ok((params_of(a), t))
}

fn current(a: &CurrentArgs) -> Outcome {
    if a.points == 0 || a.t_max < a.t_min {
        return Err(invalid("need t-min ≤ t-max and points > 0"));
    }
    let o = OscillatorParams::from_a(a.a)?;
    let count = a.n1.max(a.n2) + 1;
    let basis = match a.basis {
        BasisKind::Free => ModeBasis::free(&o, count)?,
        BasisKind::Dirichlet => ModeBasis::general(&o, &SingularityParams::wrapped(PI, PI, 0.0, 0.0, 1.0)?, count)?,
    };
    let mut c = vec![Complex64::new(0.0, 0.0); basis.len()];
    let i1 = basis.modes.iter().position(|m| m.series == 1 && m.n == a.n1).ok_or_else(|| invalid("n1 out of range"))?;
    let i2 = basis.modes.iter().position(|m| m.series == 2 && m.n == a.n2).ok_or_else(|| invalid("n2 out of range"))?;
    c[i1] = Complex64::new(0.5f64.sqrt(), 0.0);
    c[i2] = Complex64::from_polar(0.5f64.sqrt(), a.phase);
    let e = StateExpansion { coefficients: c, truncation_n_max: count, residual: 0.0 };
    let times = linspace(a.t_min, a.t_max, a.points);
    let js = times
        .par_iter()
        .map(|&t| singularity_current(&e, &basis, t))
        .collect::<Result<Vec<_>, Error>>()?;
    let mut t = Table::new(&["t", "j_plus", "j_minus"]);
    for (time, j) in times.iter().zip(js) {
        t.push(vec![Cell::F(*time), Cell::F(j.plus), Cell::F(j.minus)]);
    }
    Ok((params_of(a), t))
}

fn force(a: &ForceArgs) -> Outcome {
    positive("t-min", a.t_min)?;
    positive("t-max", a.t_max)?;
    if a.t_max < a.t_min || a.points == 0 {
        return Err(invalid("need t-min ≤ t-max and points > 0"));
    }
    let template = GasConfig::new(a.n, a.stat.into(), a.t_min)?;
    let method = match a.method {
        MethodArg::Exact => ForceMethod::Exact,
        MethodArg::LowT => ForceMethod::LowT,
        MethodArg::Linear => ForceMethod::Linear,
        MethodArg::Integral => ForceMethod::Integral,
        MethodArg::Poisson => ForceMethod::Poisson { k_max: a.k_max, m_max: a.m_max },
        MethodArg::Asymptotic => ForceMethod::Asymptotic,
    };
    let stats: Statistics = a.stat.into();
    let bose_only = matches!(method, ForceMethod::LowT | ForceMethod::Linear | ForceMethod::Integral);
    if bose_only && stats != Statistics::Bose {
        return Err(Error::MethodStatistics { method: method.name().into(), statistics: stats.to_string() }.into());
    }
    let ts: Vec<f64> = match a.spacing {
        Spacing::Linear => linspace(a.t_min, a.t_max, a.points),
        Spacing::Log => linspace(a.t_min.ln(), a.t_max.ln(), a.points).into_iter().map(f64::exp).collect(),
    };
    if ts.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("temperatures must be strictly ascending"));
    }
    let curve = force_curve(&template, &ts, method)?;
    let mut cols = vec![
        "t",
        "alpha_plus",
        "alpha_minus",
        "F_plus_dimless",
        "F_minus_dimless",
        "delta_F_dimless",
        "method",
    ];
    if a.double_log {
        cols.extend(["log10_t", "log10_delta_F_dimless"]);
    }
    let mut t = Table::new(&cols);
    for p in &curve {
        let mut row = vec![
            Cell::F(p.t),
            Cell::from(p.alpha_plus),
            Cell::from(p.alpha_minus),
            Cell::from(p.f_plus),
            Cell::from(p.f_minus),
            Cell::F(p.dimensionless_delta_f),
            Cell::from(method.name()),
        ];
        if a.double_log {
            row.extend([Cell::F(p.t.log10()), Cell::F(p.dimensionless_delta_f.log10())]);
        }
        t.push(row);
    }
    Ok((params_of(a), t))
}

fn force_min(a: &ForceMinArgs) -> Outcome {
    let m = find_force_minimum(&GasConfig::new(a.n, a.stat.into(), 1.0)?)?;
    let mut t = Table::new(&["t_min", "delta_F_min_dimless"]);
    t.push(vec![Cell::F(m.t_min), Cell::F(m.delta_f_min)]);
    Ok((params_of(a), t))
}

fn oracle(a: &OracleArgs) -> Outcome {
    positive("l", a.l)?;
    positive("L0", a.l0)?;
    if a.levels == 0 {
        return Err(invalid("levels must be positive"));
    }
    if a.grid < 400 {
        return Err(invalid("grid must be at least 400 points for the order estimate"));
    }
    let s = SingularityParams::wrapped(a.theta_plus, a.theta_minus, a.mu, a.nu, a.l0)?;
    let w = WellParams::new(a.l, s)?;
    let roots = well_spectrum(&w, a.levels)?;
    let grids = [a.grid / 2, a.grid, 2 * a.grid];
    let fds = grids
        .par_iter()
        .map(|&g| finite_difference_oracle(&w, g, a.levels))
        .collect::<Result<Vec<_>, Error>>()?;
    let mut t = Table::new(&["index", "root_energy", "fd_energy", "relative_difference", "observed_order"]);
    let max_err = |f: &Vec<Level>| -> f64 {
        f.iter().zip(&roots).map(|(a, b)| (a.energy - b.energy).abs()).fold(0.0, f64::max)
    };
    t.note(format!("observed order (max error, grid {} -> {}) = {}", grids[1], grids[2], (max_err(&fds[1]) / max_err(&fds[2])).log2()));
    for i in 0..a.levels {
        let exact = roots[i].energy;
        let errs: Vec<f64> = fds.iter().map(|f| (f[i].energy - exact).abs()).collect();
        let order = if errs[1] > 0.0 && errs[2] > 0.0 { (errs[1] / errs[2]).log2() } else { f64::NAN };
        t.push(vec![
            Cell::from(i),
            Cell::F(exact),
            Cell::F(fds[1][i].energy),
            Cell::F(errs[1] / exact.abs().max(1e-300)),
            Cell::F(order),
        ]);
    }
    Ok((params_of(a), t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("qsingular").chain(args.iter().copied()).map(String::from).collect();
        let code = run_to(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn free_well_ladder() {
        let (code, out, _) =
            run_args(&["spectrum", "--theta-plus", "0", "--theta-minus", "3.141592653589793", "--count", "8"]);
        assert_eq!(code, 0);
        let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
        assert_eq!(rows.len(), 8);
        for (m, r) in rows.iter().enumerate() {
            let k: f64 = r.split(',').nth(6).unwrap().parse().unwrap();
            assert!((k - (m + 1) as f64 * PI / 2.0).abs() < 1e-9, "{r}");
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_args(&["spectrum", "--theta-plus", "0", "--theta-minus", "1", "--l", "-1"]).0, 2);
        assert_eq!(run_args(&["nonsense"]).0, 2);
        assert_eq!(run_args(&["force", "--stat", "fermi", "--method", "linear"]).0, 2);
        assert_eq!(run_args(&["--help"]).0, 0);
        // Eq. 49 has no root in |α| < 1 at very high t
        assert_eq!(run_args(&["force", "--method", "integral", "--t-min", "1e6", "--t-max", "1e7", "--points", "2"]).0, 3);
    }

    #[test]
    fn config_expansion_with_override() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("c.json");
        std::fs::write(&cfg, r#"{"theta-plus": 0, "theta-minus": 3.141592653589793, "count": 3}"#).unwrap();
        let c = cfg.to_str().unwrap();
        let (code, out, _) = run_args(&["--config", c, "spectrum", "--count", "2"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().filter(|l| !l.starts_with('#')).count(), 3);
        std::fs::write(&cfg, r#"{"bogus": 1}"#).unwrap();
        assert_eq!(run_args(&["--config", c, "spectrum"]).0, 2);
    }
}
