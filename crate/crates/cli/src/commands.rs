use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use qchiplet::linalg::set_max_dim;
use qchiplet::qae::default_mode;
use qchiplet::{run_qae, simulate, Histogram, QaeConfig, SimulationMode, StateVector};

use crate::bench::{environment, render_bench, run_bench, BenchConfig, Strategy};
use crate::document::{compile, parse_circuit, CompiledDocument};
use crate::error::{CliError, CliResult, EXIT_OK};
use crate::output::{render, Format, Report};
use crate::script::run_script;

#[derive(Debug, Parser)]
#[command(name = "qchiplet", version, about = "Simulate circuits built from pre-merged blocks")]
pub struct Cli {
    /// Largest operator side length (2^n) that may be materialized.
    #[arg(long, global = true, env = "QCHIPLET_MAX_DIM")]
    pub max_dim: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a circuit file and print its outcome histogram.
    Run(RunArgs),
    /// Amplitude estimation for a single amplitude or a circuit file.
    Qae(QaeArgs),
    /// Run a QPR script.
    Qpr(QprArgs),
    /// Time execution strategies on the QAE workload.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub output: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SamplingArgs {
    /// Execution strategy; defaults to merged when operators fit the cap.
    #[arg(long, value_enum)]
    pub mode: Option<Strategy>,
    /// 0 prints exact probabilities only.
    #[arg(long, default_value_t = 0)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    pub file: PathBuf,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct QaeArgs {
    /// Probability of the good state for a one-qubit `A = AMP(a)`.
    #[arg(long, conflicts_with = "circuit", required_unless_present = "circuit")]
    pub amplitude: Option<f64>,
    /// Circuit file whose program is `A`.
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    /// Flag qubit label (overrides the file's `qae.flag`).
    #[arg(long, requires = "circuit")]
    pub flag: Option<String>,
    /// Evaluation qubits.
    #[arg(short = 'm', long = "eval-qubits")]
    pub m: Option<usize>,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct QprArgs {
    pub script: PathBuf,
    #[arg(long)]
    pub out_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Smallest total qubit count.
    #[arg(long, default_value_t = 6)]
    pub from: usize,
    /// Largest total qubit count.
    #[arg(long, default_value_t = 10)]
    pub to: usize,
    #[arg(short = 'm', long = "eval-qubits", default_value_t = 3)]
    pub m: usize,
    #[arg(long, default_value_t = 0.3)]
    pub amplitude: f64,
    #[arg(long, default_value_t = 3)]
    pub repetitions: usize,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Strategy::Merged, Strategy::Naive])]
    pub strategy: Vec<Strategy>,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn emit(text: &str, out_file: Option<&Path>) -> CliResult<Option<String>> {
    match out_file {
        Some(p) => {
            std::fs::write(p, text).map_err(|source| CliError::Io { path: p.to_path_buf(), source })?;
            Ok(None)
        }
        None => Ok(Some(text.to_string())),
    }
}

fn with_located_path(path: &Path, e: CliError) -> CliError {
    match e {
        CliError::Invalid { location, message } => CliError::Invalid { location: format!("{}: {location}", path.display()), message },
        other => other,
    }
}

pub fn load_document(path: &Path) -> CliResult<CompiledDocument> {
    let text = read(path)?;
    let doc = parse_circuit(&text).map_err(|e| with_located_path(path, e))?;
    compile(&doc).map_err(|e| with_located_path(path, e))
}

fn default_strategy(n: usize) -> Strategy {
    match default_mode(n) {
        SimulationMode::FullMatrix => Strategy::Merged,
        SimulationMode::StateUpdate => Strategy::StateUpdate,
    }
}

/// Final state of a compiled document under one strategy.
pub fn simulate_document(doc: &CompiledDocument, strategy: Strategy) -> CliResult<StateVector> {
    let v0 = StateVector::basis(doc.n(), doc.initial)?;
    Ok(match strategy {
        Strategy::Merged => simulate(&doc.blocks, &v0, SimulationMode::FullMatrix)?,
        Strategy::Naive => simulate(&doc.gates, &v0, SimulationMode::FullMatrix)?,
        Strategy::StateUpdate => simulate(&doc.blocks, &v0, SimulationMode::StateUpdate)?,
    })
}

pub fn cmd_run(args: &RunArgs) -> CliResult<String> {
    let doc = load_document(&args.file)?;
    let strategy = args.sampling.mode.unwrap_or_else(|| default_strategy(doc.n()));
    let out = simulate_document(&doc, strategy)?;
    let mut h = Histogram::from_state(&out)?;
    if args.sampling.shots > 0 {
        h = h.sample(args.sampling.shots, args.sampling.seed)?;
    }
    let report = Report::new(h).meta("strategy", strategy.name()).meta("qubits", doc.labels.join(" "));
    render(&report, args.out.output)
}

pub fn qae_config(args: &QaeArgs) -> CliResult<QaeConfig> {
    let mut cfg = match (&args.amplitude, &args.circuit) {
        (Some(a), None) => {
            if !(0.0..=1.0).contains(a) {
                return Err(CliError::Usage(format!("amplitude {a} outside [0, 1]")));
            }
            QaeConfig::from_amplitude(*a, args.m.unwrap_or(3))?
        }
        (None, Some(path)) => {
            let text = read(path)?;
            let doc = parse_circuit(&text).map_err(|e| with_located_path(path, e))?;
            let compiled = compile(&doc)?;
            if compiled.initial != 0 {
                return Err(CliError::Usage("an amplitude-estimation A must start from the all-zero state".into()));
            }
            let flag_label = args
                .flag
                .clone()
                .or_else(|| doc.qae.as_ref().map(|q| q.flag.clone()))
                .ok_or_else(|| CliError::Usage("no flag qubit: pass --flag or add a `qae` section".into()))?;
            let flag = compiled
                .labels
                .iter()
                .position(|l| *l == flag_label)
                .ok_or_else(|| CliError::Usage(format!("flag {flag_label:?} is not a qubit of the circuit")))?;
            let m = args.m.or(doc.qae.as_ref().and_then(|q| q.m)).unwrap_or(3);
            let mut a = compiled.blocks;
            a.set_name("A");
            QaeConfig::new(a, flag, m)
        }
        _ => return Err(CliError::Usage("pass exactly one of --amplitude or --circuit".into())),
    };
    cfg.validate()?;
    cfg.shots = args.sampling.shots;
    cfg.seed = args.sampling.seed;
    let strategy = args.sampling.mode.unwrap_or_else(|| default_strategy(cfg.total_qubits()));
    let (expansion, mode) = strategy.qae_plan();
    cfg.expansion = expansion;
    cfg.mode = Some(mode);
    Ok(cfg)
}

pub fn cmd_qae(args: &QaeArgs) -> CliResult<String> {
    let cfg = qae_config(args)?;
    let strategy = args.sampling.mode.unwrap_or_else(|| default_strategy(cfg.total_qubits()));
    let r = run_qae(&cfg)?;
    let report = Report::new(r.histogram)
        .meta("strategy", strategy.name())
        .meta("eval_qubits", cfg.m)
        .meta("state_qubits", cfg.n_state())
        .summary("estimate", r.estimate)
        .summary("peak", r.peak_outcome)
        .summary("q_applications", r.q_applications);
    render(&report, args.out.output)
}

pub fn cmd_qpr(args: &QprArgs) -> CliResult<String> {
    let text = read(&args.script)?;
    let lines = run_script(&text).map_err(|e| with_located_path(&args.script, e))?;
    Ok(lines.iter().map(|l| format!("{l}\n")).collect())
}

pub fn cmd_bench(args: &BenchArgs) -> CliResult<String> {
    let cfg = BenchConfig {
        from: args.from,
        to: args.to,
        m: args.m,
        amplitude: args.amplitude,
        repetitions: args.repetitions,
        strategies: args.strategy.clone(),
    };
    let rows = run_bench(&cfg, |r| eprintln!("n={} {}: min {:.6}s", r.n, r.strategy.name(), r.min_seconds))?;
    render_bench(&rows, &environment(&cfg), args.out.output)
}

/// Execute a parsed command line; returns the text for stdout, if any.
pub fn execute(cli: &Cli) -> CliResult<Option<String>> {
    if let Some(cap) = cli.max_dim {
        if cap < 2 {
            return Err(CliError::Usage("--max-dim must be at least 2".into()));
        }
        set_max_dim(cap);
    }
    match &cli.command {
        Command::Run(a) => emit(&cmd_run(a)?, a.out.out_file.as_deref()),
        Command::Qae(a) => emit(&cmd_qae(a)?, a.out.out_file.as_deref()),
        Command::Qpr(a) => emit(&cmd_qpr(a)?, a.out_file.as_deref()),
        Command::Bench(a) => emit(&cmd_bench(a)?, a.out.out_file.as_deref()),
    }
}

/// Parse `args`, run, print, and return the process exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(text) => {
            if let Some(t) = text {
                print!("{t}");
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
