//! Command-line front end: `simulate`, `estimate`, `lrt`, `study` and `sweep`.
//!
//! Every command accepts `--config <file.json>` whose keys are the long flag
//! names; flags given on the command line take precedence over the file.

mod data;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::inference::{fit, lrt_equal_drift, FitResult};
use crate::model::{Model, Scenario};
use crate::sampler::{oracle_sample_pair, ExactSampler, OracleConfig, RngStream};
use crate::study::{
    default_sweep_grid, format_table, run_study, run_sweep, write_summary_csv, write_sweep_csv, StudyConfig, SweepAxis,
    SweepPoint,
};

pub use data::{read_pairs, write_pairs};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_STUDY: i32 = 4;

/// Phase-2 squared diffusions of the four tabulated rows; the rest is shared.
pub const TABLE1_SIGMA2_SQ: [f64; 4] = [0.026, 0.059, 0.094, 0.131];

#[derive(Debug, Parser)]
#[command(name = "perturbed-fpt", version, about = "Inference from hitting times of a perturbed Wiener process")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate (s, r) pairs and write them as CSV.
    #[command(args_override_self = true)]
    Simulate(SimulateArgs),
    /// Fit a scenario to an (s, r) CSV and report estimates with 95% intervals.
    #[command(args_override_self = true)]
    Estimate(EstimateArgs),
    /// Likelihood-ratio test of equal drifts before and after the intervention.
    #[command(args_override_self = true)]
    Lrt(LrtArgs),
    /// Repeated simulate-and-fit study.
    #[command(args_override_self = true)]
    Study(StudyArgs),
    /// A study for each value of one parameter.
    #[command(args_override_self = true)]
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScenarioArg {
    Free,
    Eqvar,
    Propvar,
}

impl From<ScenarioArg> for Scenario {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::Free => Scenario::Unconstrained,
            ScenarioArg::Eqvar => Scenario::EqualVariance,
            ScenarioArg::Propvar => Scenario::ProportionalVariance,
        }
    }
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Boundary level.
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    mu1: Option<f64>,
    #[arg(long)]
    sigma1sq: Option<f64>,
    #[arg(long)]
    mu2: Option<f64>,
    #[arg(long)]
    sigma2sq: Option<f64>,
    /// Proportionality constant: sets both squared diffusions to k times the drift.
    #[arg(long)]
    k: Option<f64>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Use the Euler–Maruyama path oracle instead of the exact sampler.
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    horizon: Option<usize>,
    /// Output file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    /// CSV with header `s,r`.
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long, value_enum)]
    scenario: Option<ScenarioArg>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct LrtArgs {
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct StudyArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_enum)]
    scenario: Option<ScenarioArg>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Also run the equal-drift test in every replication.
    #[arg(long)]
    lrt: bool,
    /// Also fit phase-1 parameters from the s values alone.
    #[arg(long)]
    s_only: bool,
    /// Run the four tabulated parameter rows (B = 10, mu1 = 1, sigma1sq = 0.4, mu2 = 0.1).
    #[arg(long)]
    table1: bool,
    /// Writes `<prefix>.csv` and `<prefix>.json`.
    #[arg(long)]
    out_prefix: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_enum)]
    scenario: Option<ScenarioArg>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    lrt: bool,
    #[arg(long)]
    s_only: bool,
    /// One of mu1, mu2, sigma2, k.
    #[arg(long)]
    axis: Option<String>,
    /// Comma-separated values; 20 log-spaced points on [0.1, 10] if absent.
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<f64>>,
    #[arg(long)]
    out_prefix: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

fn required<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidParameter(format!("--{flag} is required")))
}

impl ModelArgs {
    fn build(&self) -> Result<Model> {
        let b = required(self.b, "b")?;
        let mu1 = required(self.mu1, "mu1")?;
        let mu2 = required(self.mu2, "mu2")?;
        match (self.k, self.sigma1sq, self.sigma2sq) {
            (Some(k), None, None) => Model::proportional(b, mu1, mu2, k),
            (None, Some(s1), Some(s2)) => Model::from_params(b, mu1, s1, mu2, s2),
            (Some(_), _, _) => Err(Error::InvalidParameter("--k excludes --sigma1sq and --sigma2sq".into())),
            _ => Err(Error::InvalidParameter("give --sigma1sq and --sigma2sq, or --k".into())),
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::TooManyFailures { .. } => EXIT_STUDY,
        Error::InvalidParameter(_)
        | Error::MalformedInput { .. }
        | Error::DegenerateSample(_)
        | Error::InfeasibleStart(_) => EXIT_INPUT,
        _ => EXIT_FAILURE,
    }
}

fn io_error(path: &Path, e: io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| io_error(path, e))
}

/// Runs `body` against the file at `path`, or standard output.
fn with_output(path: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = create(p)?;
            body(&mut w)?;
            w.flush().map_err(|e| io_error(p, e))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock)?;
            lock.flush().map_err(|e| Error::Io(e.to_string()))
        }
    }
}

fn write_json<T: serde::Serialize>(w: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, value).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(w).map_err(|e| Error::Io(e.to_string()))
}

fn load_sample(path: Option<&PathBuf>) -> Result<crate::inference::Sample> {
    let path = required(path, "data")?;
    let file = File::open(path).map_err(|e| io_error(path, e))?;
    read_pairs(io::BufReader::new(file))
}

fn cmd_simulate(a: SimulateArgs) -> Result<()> {
    let model = a.model.build()?;
    let n = required(a.n, "n")?;
    if n < 1 {
        return Err(Error::InvalidParameter("--n must be at least 1".into()));
    }
    let mut rng = RngStream::new(a.seed.unwrap_or(0), 0);
    let pairs = if a.oracle {
        let defaults = OracleConfig::default();
        let cfg = OracleConfig::new(a.dt.unwrap_or(defaults.dt()), a.horizon.unwrap_or(defaults.horizon()))?;
        (0..n).map(|_| oracle_sample_pair(&model, &cfg, &mut rng)).collect::<Result<Vec<_>>>()?
    } else {
        ExactSampler::new(model)?.sample(n, &mut rng)?.pairs().to_vec()
    };
    with_output(a.out.as_deref(), |w| write_pairs(w, &pairs))
}

#[derive(serde::Serialize)]
struct FitReport<'a> {
    scenario: Scenario,
    params: &'static [&'static str],
    estimate: &'a [f64],
    se: Option<&'a Vec<f64>>,
    ci95: Option<&'a Vec<(f64, f64)>>,
    loglik: f64,
    converged: bool,
    restarts_used: usize,
}

impl<'a> From<&'a FitResult> for FitReport<'a> {
    fn from(f: &'a FitResult) -> Self {
        FitReport {
            scenario: f.scenario,
            params: f.param_names(),
            estimate: &f.estimate,
            se: f.se.as_ref(),
            ci95: f.ci95.as_ref(),
            loglik: f.loglik,
            converged: f.converged,
            restarts_used: f.restarts_used,
        }
    }
}

fn cmd_estimate(a: EstimateArgs) -> Result<()> {
    let sample = load_sample(a.data.as_ref())?;
    let b = required(a.b, "b")?;
    let f = fit(&sample, a.scenario.unwrap_or(ScenarioArg::Free).into(), b)?;
    with_output(a.out.as_deref(), |w| write_json(w, &FitReport::from(&f)))
}

fn cmd_lrt(a: LrtArgs) -> Result<()> {
    let sample = load_sample(a.data.as_ref())?;
    let t = lrt_equal_drift(&sample, required(a.b, "b")?)?;
    let report = serde_json::json!({
        "statistic": t.statistic,
        "threshold": t.threshold,
        "reject": t.reject,
        "null_fit": FitReport::from(&t.null_fit),
        "full_fit": FitReport::from(&t.full_fit),
    });
    with_output(a.out.as_deref(), |w| write_json(w, &report))
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn write_sweep_outputs(prefix: &Path, points: &[SweepPoint]) -> Result<()> {
    with_output(Some(&with_ext(prefix, "csv")), |w| write_sweep_csv(w, points))?;
    with_output(Some(&with_ext(prefix, "json")), |w| write_json(w, &points))
}

fn print_sweep(points: &[SweepPoint]) {
    for p in points {
        println!("{} = {}", p.axis.name(), p.value);
        println!("{}", format_table(&p.summary));
    }
}

fn cmd_study(a: StudyArgs) -> Result<()> {
    let scenario: Scenario = a.scenario.unwrap_or(ScenarioArg::Free).into();
    let n = a.n.unwrap_or(100);
    let reps = a.reps.unwrap_or(1000);
    let seed = a.seed.unwrap_or(0);
    let prefix = a.out_prefix.unwrap_or_else(|| PathBuf::from("study"));
    if a.table1 {
        let base = Model::from_params(10.0, 1.0, 0.4, 0.1, TABLE1_SIGMA2_SQ[0])?;
        let cfg = StudyConfig::new(base, Scenario::Unconstrained, n, reps, seed)?.with_lrt(a.lrt).with_s_only(a.s_only);
        let points = run_sweep(&cfg, SweepAxis::Sigma2, &TABLE1_SIGMA2_SQ)?;
        print_sweep(&points);
        return write_sweep_outputs(&prefix, &points);
    }
    let cfg = StudyConfig::new(a.model.build()?, scenario, n, reps, seed)?.with_lrt(a.lrt).with_s_only(a.s_only);
    let summary = run_study(&cfg)?;
    print!("{}", format_table(&summary));
    with_output(Some(&with_ext(&prefix, "csv")), |w| write_summary_csv(w, &summary))?;
    with_output(Some(&with_ext(&prefix, "json")), |w| write_json(w, &summary))
}

fn cmd_sweep(a: SweepArgs) -> Result<()> {
    let scenario: Scenario = a.scenario.unwrap_or(ScenarioArg::Free).into();
    let axis: SweepAxis = required(a.axis, "axis")?.parse()?;
    let cfg =
        StudyConfig::new(a.model.build()?, scenario, a.n.unwrap_or(100), a.reps.unwrap_or(1000), a.seed.unwrap_or(0))?
            .with_lrt(a.lrt)
            .with_s_only(a.s_only);
    let values = a.values.unwrap_or_else(default_sweep_grid);
    let points = run_sweep(&cfg, axis, &values)?;
    print_sweep(&points);
    write_sweep_outputs(&a.out_prefix.unwrap_or_else(|| PathBuf::from("sweep")), &points)
}

/// Flags equivalent to the entries of a JSON config object.
fn config_flags(path: &Path) -> Result<Vec<OsString>> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Error::MalformedInput { line: e.line() as u64, message: format!("{}: {e}", path.display()) })?;
    let Value::Object(map) = value else {
        return Err(Error::MalformedInput { line: 1, message: "config must be a JSON object".into() });
    };
    let mut flags = Vec::new();
    for (key, v) in map {
        if key == "config" {
            return Err(Error::InvalidParameter("config files cannot nest".into()));
        }
        let flag = OsString::from(format!("--{key}"));
        match v {
            Value::Bool(true) => flags.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Number(x) => flags.extend([flag, x.to_string().into()]),
            Value::String(s) => flags.extend([flag, s.into()]),
            Value::Array(items) => {
                let joined: Vec<String> = items.iter().map(|i| i.to_string().trim_matches('"').to_string()).collect();
                flags.extend([flag, joined.join(",").into()]);
            }
            Value::Object(_) => {
                return Err(Error::InvalidParameter(format!("config key {key:?} cannot hold an object")));
            }
        }
    }
    Ok(flags)
}

fn config_path(cmd: &Command) -> Option<&PathBuf> {
    match cmd {
        Command::Simulate(a) => a.config.as_ref(),
        Command::Estimate(a) => a.config.as_ref(),
        Command::Lrt(a) => a.config.as_ref(),
        Command::Study(a) => a.config.as_ref(),
        Command::Sweep(a) => a.config.as_ref(),
    }
}

fn parse(args: Vec<OsString>) -> std::result::Result<Cli, i32> {
    let report = |e: clap::Error| {
        let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        let _ = e.print();
        code
    };
    let cli = Cli::try_parse_from(&args).map_err(report)?;
    let Some(path) = config_path(&cli.command) else {
        return Ok(cli);
    };
    let file_flags = config_flags(path).map_err(|e| {
        eprintln!("error: {e}");
        exit_code(&e)
    })?;
    // file entries go first so later command-line flags override them
    let mut merged = args[..2.min(args.len())].to_vec();
    merged.extend(file_flags);
    merged.extend(args.into_iter().skip(2));
    Cli::try_parse_from(merged).map_err(report)
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match parse(args) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let outcome = match cli.command {
        Command::Simulate(a) => cmd_simulate(a),
        Command::Estimate(a) => cmd_estimate(a),
        Command::Lrt(a) => cmd_lrt(a),
        Command::Study(a) => cmd_study(a),
        Command::Sweep(a) => cmd_sweep(a),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// The clap command tree, for help rendering and completion generation.
pub fn command() -> clap::Command {
    Cli::command()
}
