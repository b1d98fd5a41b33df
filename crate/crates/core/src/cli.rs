//! The `la-bench` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O error, 3 non-convergence or
//! an infeasible tuning grid.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::automata::{AutomatonConfig, Scheme};
use crate::env::{Environment, Preset};
use crate::error::{Error, Result};
use crate::experiment::{
    run_batch, run_until_convergence, trace_run, Convergence, Parallelism, TraceOptions,
    DEFAULT_MAX_ITERATIONS, DEFAULT_THRESHOLD,
};
use crate::reference::{self, PublishedCell};
use crate::report::{self, ReportRow};
use crate::tuning::{grid_search, TuningSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

/// Seed used by `repro` unless overridden.
pub const REPRO_SEED: u64 = 20_190_416;
const FULL_PROTOCOL_REPLICATIONS: u64 = 250_000;
const PARALLELISM_VAR: &str = "LA_BENCH_PARALLELISM";

#[derive(Debug, Parser)]
#[command(name = "la-bench", version, about = "Learning automata benchmark harness")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one automaton until convergence.
    Run(RunArgs),
    /// Monte Carlo batch over one or more schemes and environments.
    Batch(BatchArgs),
    /// Grid search for the fastest parameters that pass the NE constraint.
    Tune(TuneArgs),
    /// Record one run iteration by iteration.
    Trace(TraceArgs),
    /// Rerun every published benchmark cell.
    Repro(ReproArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Stopping threshold T.
    #[arg(long = "threshold", short = 'T', default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: f64,
    /// Attenuation factor mu.
    #[arg(long, default_value_t = AutomatonConfig::DEFAULT_MU)]
    pub mu: f64,
    /// Initialization plays per action.
    #[arg(long, default_value_t = AutomatonConfig::DEFAULT_INIT_SAMPLES)]
    pub k0: u32,
    /// Iteration cap, initialization included.
    #[arg(long = "max-iter", default_value_t = DEFAULT_MAX_ITERATIONS)]
    pub max_iter: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

impl Common {
    fn stop(&self) -> Convergence {
        Convergence::new(self.threshold, self.max_iter)
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long, value_parser = parse_scheme)]
    pub scheme: Scheme,
    /// Preset name (E1..E5) or a path ending in `.env.csv`.
    #[arg(long)]
    pub env: String,
    /// Resolution parameter; defaults to the published best for a preset.
    #[arg(long)]
    pub n: Option<u32>,
    /// Estimator resolution; defaults to the published best for a preset.
    #[arg(long)]
    pub gamma: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct BatchArgs {
    /// Comma-separated or repeated: dca, seri.
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_scheme)]
    pub scheme: Vec<Scheme>,
    /// Comma-separated or repeated presets / `.env.csv` paths.
    #[arg(long, value_delimiter = ',', required = true)]
    pub env: Vec<String>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, default_value_t = 25_000)]
    pub reps: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, env = PARALLELISM_VAR, default_value_t = 0)]
    pub parallelism: usize,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct TuneArgs {
    #[arg(long, value_parser = parse_scheme)]
    pub scheme: Scheme,
    #[arg(long)]
    pub env: String,
    #[arg(long = "n-min", default_value_t = 1)]
    pub n_min: u32,
    #[arg(long = "n-max", default_value_t = 150)]
    pub n_max: u32,
    #[arg(long = "gamma-min", default_value_t = 1)]
    pub gamma_min: u32,
    #[arg(long = "gamma-max", default_value_t = 30)]
    pub gamma_max: u32,
    /// Required consecutive correct convergences.
    #[arg(long, default_value_t = 750)]
    pub ne: u64,
    /// Replications used to rank feasible cells.
    #[arg(long = "eval-reps", default_value_t = 2_000)]
    pub eval_reps: u64,
    #[arg(long, env = PARALLELISM_VAR, default_value_t = 0)]
    pub parallelism: usize,
    /// Grid report CSV path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// One-based action to track; defaults to the optimal action.
    #[arg(long)]
    pub track: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ReproArgs {
    #[arg(long, default_value_t = FULL_PROTOCOL_REPLICATIONS)]
    pub reps: u64,
    #[arg(long, default_value_t = REPRO_SEED)]
    pub seed: u64,
    #[arg(long, env = PARALLELISM_VAR, default_value_t = 0)]
    pub parallelism: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_scheme(s: &str) -> std::result::Result<Scheme, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// An environment named on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum EnvSource {
    Preset(Preset),
    File(PathBuf),
}

impl EnvSource {
    pub fn parse(s: &str) -> Result<Self> {
        if s.ends_with(".env.csv") {
            Ok(EnvSource::File(PathBuf::from(s)))
        } else {
            s.parse().map(EnvSource::Preset)
        }
    }

    pub fn load(&self) -> Result<Environment> {
        match self {
            EnvSource::Preset(p) => Ok(p.environment()),
            EnvSource::File(path) => Environment::from_file(path),
        }
    }

    fn preset(&self) -> Option<Preset> {
        match self {
            EnvSource::Preset(p) => Some(*p),
            EnvSource::File(_) => None,
        }
    }
}

/// Presets in E1..E5 order first, then files in the order given.
fn ordered_sources(names: &[String]) -> Result<Vec<EnvSource>> {
    let mut presets = Vec::new();
    let mut files = Vec::new();
    for name in names {
        match EnvSource::parse(name)? {
            EnvSource::Preset(p) if !presets.contains(&p) => presets.push(p),
            EnvSource::Preset(_) => {}
            file => files.push(file),
        }
    }
    presets.sort();
    Ok(presets.into_iter().map(EnvSource::Preset).chain(files).collect())
}

fn build_config(
    scheme: Scheme,
    source: &EnvSource,
    env: &Environment,
    n: Option<u32>,
    gamma: Option<f64>,
    common: &Common,
) -> Result<AutomatonConfig> {
    let published = source.preset().map(|p| reference::best_parameters(scheme, p));
    let n = n.or(published.map(|c| c.resolution)).ok_or_else(|| {
        Error::InvalidConfig("--n is required for environments without published parameters".into())
    })?;
    let gamma = gamma.or(published.map(|c| c.gamma)).ok_or_else(|| {
        Error::InvalidConfig("--gamma is required for environments without published parameters".into())
    })?;
    let config = AutomatonConfig::new(scheme, env.actions(), n, gamma)
        .with_mu(common.mu)
        .with_init_samples(common.k0);
    config.validate()?;
    common.stop().validate(&config)?;
    Ok(config)
}

fn parallelism(threads: usize) -> Parallelism {
    match threads {
        0 => Parallelism::Auto,
        n => Parallelism::Threads(n),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

/// Writes to `path` if given, otherwise to `console`.
fn with_output<F>(path: Option<&Path>, console: &mut dyn Write, write: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match path {
        Some(path) => {
            let mut file = create(path)?;
            write(&mut file)?;
            file.flush().map_err(|e| Error::io(path, e))
        }
        None => write(console),
    }
}

fn console_error(e: io::Error) -> Error {
    Error::io("<stdout>", e)
}

pub fn cmd_run(args: &RunArgs, out: &mut dyn Write) -> Result<i32> {
    let source = EnvSource::parse(&args.env)?;
    let env = source.load()?;
    let config = build_config(args.scheme, &source, &env, args.n, args.gamma, &args.common)?;
    let result = run_until_convergence(&config, &env, &args.common.stop(), args.common.seed)?;
    let line = match result.converged_action {
        Some(a) => format!(
            "scheme={} env={} n={} gamma={} seed={} converged_action={} iterations={} correct={}",
            config.scheme,
            env.name(),
            config.resolution,
            config.gamma,
            result.seed,
            a + 1,
            result.iterations,
            result.correct
        ),
        None => format!(
            "scheme={} env={} n={} gamma={} seed={} not converged after {} iterations",
            config.scheme,
            env.name(),
            config.resolution,
            config.gamma,
            result.seed,
            result.iterations
        ),
    };
    writeln!(out, "{line}").map_err(console_error)?;
    Ok(if result.converged_action.is_some() {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    })
}

pub fn batch_rows(args: &BatchArgs) -> Result<Vec<ReportRow>> {
    let mut schemes = args.scheme.clone();
    schemes.sort();
    schemes.dedup();
    let sources = ordered_sources(&args.env)?;
    let stop = args.common.stop();
    let mut rows = Vec::new();
    for &scheme in &schemes {
        for source in &sources {
            let env = source.load()?;
            let config = build_config(scheme, source, &env, args.n, args.gamma, &args.common)?;
            let summary = run_batch(&config, &env, &stop, args.reps, args.common.seed, parallelism(args.parallelism))?;
            rows.push(ReportRow::new(&config, env.name(), &summary));
        }
    }
    Ok(rows)
}

pub fn cmd_batch(args: &BatchArgs, out: &mut dyn Write) -> Result<i32> {
    let rows = batch_rows(args)?;
    with_output(args.out.as_deref(), out, |w| report::write_report(w, &rows))?;
    Ok(EXIT_OK)
}

pub fn cmd_tune(args: &TuneArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let source = EnvSource::parse(&args.env)?;
    let env = source.load()?;
    if args.n_min > args.n_max || args.gamma_min > args.gamma_max {
        return Err(Error::InvalidConfig("grid bounds are reversed".into()));
    }
    let spec = TuningSpec {
        resolutions: (args.n_min.max(1)..=args.n_max).collect(),
        gammas: (args.gamma_min..=args.gamma_max).map(f64::from).collect(),
        required_correct: args.ne,
        stop: args.common.stop(),
        eval_replications: args.eval_reps,
        mu: args.common.mu,
        init_samples: args.common.k0,
    };
    let result = grid_search(args.scheme, &env, &spec, args.common.seed, parallelism(args.parallelism))?;
    with_output(args.out.as_deref(), out, |w| report::write_grid(w, &result))?;
    match result.best() {
        Ok(best) => {
            writeln!(
                err,
                "best: n={} gamma={} mean_iterations={:.1}",
                best.resolution,
                best.gamma,
                best.mean_iterations().unwrap_or(f64::NAN)
            )
            .map_err(console_error)?;
            Ok(EXIT_OK)
        }
        Err(e) => {
            writeln!(err, "{e}").map_err(console_error)?;
            Ok(EXIT_NOT_CONVERGED)
        }
    }
}

pub fn cmd_trace(args: &TraceArgs, out: &mut dyn Write) -> Result<i32> {
    let run = &args.run;
    let source = EnvSource::parse(&run.env)?;
    let env = source.load()?;
    let config = build_config(run.scheme, &source, &env, run.n, run.gamma, &run.common)?;
    let tracked_action = match args.track {
        Some(0) => {
            return Err(Error::ActionOutOfRange {
                action: 0,
                actions: env.actions(),
            })
        }
        Some(a) => Some(a - 1),
        None => None,
    };
    let trace = trace_run(
        &config,
        &env,
        &run.common.stop(),
        run.common.seed,
        TraceOptions {
            tracked_action,
            full_vector: false,
        },
    )?;
    with_output(args.out.as_deref(), out, |w| report::write_trace(w, &trace))?;
    Ok(if trace.result.converged_action.is_some() {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    })
}

/// Every published cell: best parameters for both schemes, then the
/// equal-accuracy DCA parameters.
pub fn repro_cells() -> Vec<PublishedCell> {
    reference::BEST_PARAMETERS
        .iter()
        .chain(reference::EQUAL_ACCURACY_DCA.iter())
        .copied()
        .collect()
}

pub fn cmd_repro(args: &ReproArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    if args.reps >= FULL_PROTOCOL_REPLICATIONS {
        writeln!(
            err,
            "warning: {} replications per cell over {} cells; this takes a while",
            args.reps,
            repro_cells().len()
        )
        .map_err(console_error)?;
    }
    let stop = Convergence::default();
    let mut rows = Vec::new();
    for cell in repro_cells() {
        let env = cell.preset.environment();
        let config = AutomatonConfig::new(cell.scheme, env.actions(), cell.resolution, cell.gamma);
        let summary = run_batch(&config, &env, &stop, args.reps, args.seed, parallelism(args.parallelism))?;
        let row = ReportRow::new(&config, env.name(), &summary);
        writeln!(
            err,
            "{:<4} {} n={:<3} gamma={:<4} accuracy={:.4} (published {}) mean={:.1} (published {})",
            row.scheme,
            row.environment,
            row.n,
            row.gamma,
            row.accuracy,
            cell.accuracy.map_or("-".to_string(), |a| a.to_string()),
            row.mean_iterations.unwrap_or(f64::NAN),
            cell.mean_iterations
        )
        .map_err(console_error)?;
        rows.push(row);
    }
    with_output(args.out.as_deref(), out, |w| report::write_report(w, &rows))?;
    Ok(EXIT_OK)
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Run(a) => cmd_run(a, out),
        Command::Batch(a) => cmd_batch(a, out),
        Command::Tune(a) => cmd_tune(a, out, err),
        Command::Trace(a) => cmd_trace(a, out),
        Command::Repro(a) => cmd_repro(a, out, err),
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoFeasibleParameters => EXIT_NOT_CONVERGED,
        e if e.is_usage() => EXIT_USAGE,
        _ => EXIT_IO,
    }
}

/// Parses `args` (program name first), runs the command, and returns the
/// process exit code. Errors are reported on `err`.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                EXIT_USAGE
            } else {
                let _ = write!(out, "{}", e.render());
                EXIT_OK
            };
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = main_with_args(
            std::iter::once("la-bench").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn run_prints_converged_action() {
        let (code, out, _) = run(&["run", "--scheme", "dca", "--env", "E1", "--n", "13", "--gamma", "6", "--seed", "42"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("converged_action="), "{out}");
        assert!(out.contains("iterations="));
    }

    #[test]
    fn unknown_preset_is_usage_error() {
        let (code, _, err) = run(&["run", "--scheme", "dca", "--env", "E9", "--n", "13", "--gamma", "6"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("E1, E2, E3, E4, E5"), "{err}");
    }

    #[test]
    fn zero_resolution_is_usage_error() {
        let (code, _, err) = run(&["run", "--scheme", "dca", "--env", "E1", "--n", "0", "--gamma", "6"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("resolution"), "{err}");
    }

    #[test]
    fn bad_flag_is_usage_error() {
        let (code, _, _) = run(&["run", "--scheme", "ucb", "--env", "E1"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run(&["run", "--env", "E1"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn missing_env_file_is_io_error() {
        let (code, _, _) = run(&["run", "--scheme", "seri", "--env", "/nonexistent/x.env.csv", "--n", "3", "--gamma", "2"]);
        assert_eq!(code, EXIT_IO);
    }

    #[test]
    fn non_convergence_exit_code() {
        let (code, out, _) = run(&["run", "--scheme", "seri", "--env", "E1", "--n", "500", "--max-iter", "101"]);
        assert_eq!(code, EXIT_NOT_CONVERGED);
        assert!(out.contains("not converged"));
    }

    #[test]
    fn published_parameters_fill_missing_flags() {
        let (code, out, _) = run(&["run", "--scheme", "seri", "--env", "E3"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("n=105 gamma=25"), "{out}");
    }

    #[test]
    fn file_environment_requires_parameters() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("two.env.csv");
        std::fs::write(&path, "0.9\n0.2\n").unwrap();
        let p = path.to_str().unwrap();
        let (code, _, _) = run(&["run", "--scheme", "dca", "--env", p]);
        assert_eq!(code, EXIT_USAGE);
        let (code, out, _) = run(&["run", "--scheme", "dca", "--env", p, "--n", "5", "--gamma", "2"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("env=two"), "{out}");
    }

    #[test]
    fn batch_orders_environments() {
        let (code, out, _) = run(&["batch", "--scheme", "seri,dca", "--env", "E2,E1", "--reps", "3", "--parallelism", "1"]);
        assert_eq!(code, EXIT_OK);
        let rows = report::read_report(out.as_bytes()).unwrap();
        let keys: Vec<_> = rows.iter().map(|r| (r.scheme.as_str(), r.environment.as_str())).collect();
        assert_eq!(keys, vec![("dca", "E1"), ("dca", "E2"), ("seri", "E1"), ("seri", "E2")]);
        assert!(rows.iter().all(|r| r.replications == 3));
    }

    #[test]
    fn batch_with_one_replication_mirrors_run() {
        let (_, out, _) = run(&["batch", "--scheme", "dca", "--env", "E4", "--reps", "1", "--seed", "5"]);
        let row = &report::read_report(out.as_bytes()).unwrap()[0];
        let seed = crate::rng::derive_seed(5, 0).to_string();
        let (_, single, _) = run(&["run", "--scheme", "dca", "--env", "E4", "--seed", &seed]);
        let iterations = format!("iterations={}", row.mean_iterations.unwrap() as u64);
        assert!(single.contains(&iterations), "{single} vs {iterations}");
        assert_eq!(row.std_iterations, Some(0.0));
    }

    #[test]
    fn unwritable_output_is_io_error() {
        let (code, _, _) = run(&["batch", "--scheme", "dca", "--env", "E1", "--reps", "1", "--out", "/nonexistent/dir/out.csv"]);
        assert_eq!(code, EXIT_IO);
    }

    #[test]
    fn trace_header_and_inaction_rows() {
        let (code, out, _) = run(&["trace", "--scheme", "seri", "--env", "E1", "--seed", "3"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.lines().next(), Some(report::TRACE_HEADER));
        let rows = report::read_trace(out.as_bytes()).unwrap();
        for pair in rows.windows(2) {
            if pair[1].feedback == 0 {
                assert_eq!(pair[1].p_tracked, pair[0].p_tracked);
            }
        }
        assert!(rows.last().unwrap().p_tracked >= 0.999);
    }

    #[test]
    fn trace_rejects_action_zero() {
        let (code, _, _) = run(&["trace", "--scheme", "dca", "--env", "E1", "--track", "0"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run(&["trace", "--scheme", "dca", "--env", "E1", "--track", "11"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn tune_reports_grid_and_best() {
        let (code, out, err) = run(&[
            "tune", "--scheme", "dca", "--env", "E4", "--n-min", "10", "--n-max", "12", "--gamma-min", "5",
            "--gamma-max", "5", "--ne", "20", "--eval-reps", "50", "--parallelism", "2",
        ]);
        assert_eq!(code, EXIT_OK, "{err}");
        assert!(out.starts_with("n,gamma,passed_ne,mean_iterations,accuracy\n"));
        assert_eq!(report::read_grid(out.as_bytes()).unwrap().len(), 3);
        assert!(err.starts_with("best: n="), "{err}");
    }

    #[test]
    fn infeasible_tune_exits_three() {
        let (code, out, err) = run(&[
            "tune", "--scheme", "seri", "--env", "E3", "--n-max", "1", "--gamma-max", "1", "--ne", "200",
        ]);
        assert_eq!(code, EXIT_NOT_CONVERGED);
        assert!(err.contains("no feasible parameters"));
        assert_eq!(report::read_grid(out.as_bytes()).unwrap().len(), 1);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("batch"));
    }
}
