//! Wall-clock comparison of execution strategies on the QAE workload.

use std::time::{Duration, Instant};

use clap::ValueEnum;
use qchiplet::linalg::max_dim;
use qchiplet::qae::qae_workload;
use qchiplet::{run_qae, QaeExpansion, SimulationMode};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};
use crate::output::{plain, Format};

pub const BENCH_SCHEMA: &str = "bench/v1";
pub const BENCH_COLUMNS: [&str; 7] = ["n", "m", "strategy", "repetitions", "q_applications", "min_seconds", "median_seconds"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Pre-merged controlled powers of Q, one full operator per layer.
    Merged,
    /// Every gate of every Q copy embedded and applied as a full operator.
    Naive,
    /// Pre-merged blocks applied directly to the state vector.
    StateUpdate,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Merged => "merged",
            Strategy::Naive => "naive",
            Strategy::StateUpdate => "state-update",
        }
    }

    pub fn qae_plan(self) -> (QaeExpansion, SimulationMode) {
        match self {
            Strategy::Merged => (QaeExpansion::MergedPowers, SimulationMode::FullMatrix),
            Strategy::Naive => (QaeExpansion::GateLevel, SimulationMode::FullMatrix),
            Strategy::StateUpdate => (QaeExpansion::MergedPowers, SimulationMode::StateUpdate),
        }
    }

    pub fn needs_full_operators(self) -> bool {
        self != Strategy::StateUpdate
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub from: usize,
    pub to: usize,
    /// Evaluation qubits; `2^m - 1` applications of Q.
    pub m: usize,
    pub amplitude: f64,
    pub repetitions: usize,
    pub strategies: Vec<Strategy>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self { from: 6, to: 10, m: 3, amplitude: 0.3, repetitions: 3, strategies: vec![Strategy::Merged, Strategy::Naive] }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub strategy: Strategy,
    pub repetitions: usize,
    pub q_applications: u64,
    pub min_seconds: f64,
    pub median_seconds: f64,
}

fn median(sorted: &[Duration]) -> Duration {
    let k = sorted.len();
    if k % 2 == 1 {
        sorted[k / 2]
    } else {
        (sorted[k / 2 - 1] + sorted[k / 2]) / 2
    }
}

impl BenchConfig {
    pub fn validate(&self) -> CliResult<()> {
        if self.repetitions == 0 {
            return Err(CliError::Usage("repetitions must be at least 1".into()));
        }
        if self.from > self.to {
            return Err(CliError::Usage(format!("empty qubit range {}..={}", self.from, self.to)));
        }
        if self.from <= self.m {
            return Err(CliError::Usage(format!("n={} leaves no state qubits next to {} evaluation qubits", self.from, self.m)));
        }
        if self.strategies.is_empty() {
            return Err(CliError::Usage("no strategies selected".into()));
        }
        if !(0.0..=1.0).contains(&self.amplitude) {
            return Err(CliError::Usage(format!("amplitude {} outside [0, 1]", self.amplitude)));
        }
        if self.strategies.iter().any(|s| s.needs_full_operators()) && (self.to >= usize::BITS as usize - 1 || 1usize << self.to > max_dim()) {
            return Err(CliError::Resource(format!(
                "n={} needs {}-dimensional operators but the cap is {}; raise --max-dim or use state-update",
                self.to,
                1u128 << self.to,
                max_dim()
            )));
        }
        Ok(())
    }
}

/// Time one warm-up run (discarded) plus `repetitions` runs per cell, in order.
pub fn run_bench(cfg: &BenchConfig, mut on_row: impl FnMut(&BenchRow)) -> CliResult<Vec<BenchRow>> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for n in cfg.from..=cfg.to {
        for &strategy in &cfg.strategies {
            let mut qae = qae_workload(n, cfg.m, cfg.amplitude)?;
            (qae.expansion, qae.mode) = {
                let (e, m) = strategy.qae_plan();
                (e, Some(m))
            };
            let q_applications = run_qae(&qae)?.q_applications;
            let mut times = Vec::with_capacity(cfg.repetitions);
            for _ in 0..cfg.repetitions {
                let t = Instant::now();
                let r = run_qae(&qae)?;
                times.push(t.elapsed());
                std::hint::black_box(r);
            }
            times.sort();
            let row = BenchRow {
                n,
                m: cfg.m,
                strategy,
                repetitions: cfg.repetitions,
                q_applications,
                min_seconds: times[0].as_secs_f64(),
                median_seconds: median(&times).as_secs_f64(),
            };
            on_row(&row);
            rows.push(row);
        }
    }
    Ok(rows)
}

fn cpu_model() -> String {
    std::fs::read_to_string("/proc/cpuinfo")
        .ok()
        .and_then(|s| s.lines().find(|l| l.starts_with("model name")).and_then(|l| l.split_once(':')).map(|(_, v)| v.trim().to_string()))
        .unwrap_or_else(|| "unknown".into())
}

/// Machine and build description written into the output header.
pub fn environment(cfg: &BenchConfig) -> Vec<(&'static str, Value)> {
    vec![
        ("cpu", cpu_model().into()),
        ("cores", std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).into()),
        ("os", std::env::consts::OS.into()),
        ("arch", std::env::consts::ARCH.into()),
        ("profile", if cfg!(debug_assertions) { "debug" } else { "release" }.into()),
        ("crate_version", env!("CARGO_PKG_VERSION").into()),
        ("max_dim", max_dim().into()),
        ("workload", format!("qae amplitude={} m={}", cfg.amplitude, cfg.m).into()),
        ("warmup_runs", 1.into()),
        ("clock", "monotonic".into()),
    ]
}

pub fn render_bench(rows: &[BenchRow], env: &[(&'static str, Value)], format: Format) -> CliResult<String> {
    match format {
        Format::Csv | Format::Table => {
            let mut out = format!("# schema={BENCH_SCHEMA}\n");
            for (k, v) in env {
                out.push_str(&format!("# {k}={}\n", plain(v)));
            }
            if format == Format::Table {
                out.push_str(&format!("{:>4} {:>3} {:<13} {:>5} {:>7} {:>14} {:>14}\n", "n", "m", "strategy", "reps", "q_apps", "min_s", "median_s"));
                for r in rows {
                    out.push_str(&format!(
                        "{:>4} {:>3} {:<13} {:>5} {:>7} {:>14.6} {:>14.6}\n",
                        r.n,
                        r.m,
                        r.strategy.name(),
                        r.repetitions,
                        r.q_applications,
                        r.min_seconds,
                        r.median_seconds
                    ));
                }
                return Ok(out);
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(BENCH_COLUMNS)?;
            for r in rows {
                w.write_record([
                    r.n.to_string(),
                    r.m.to_string(),
                    r.strategy.name().to_string(),
                    r.repetitions.to_string(),
                    r.q_applications.to_string(),
                    r.min_seconds.to_string(),
                    r.median_seconds.to_string(),
                ])?;
            }
            out.push_str(&String::from_utf8(w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?).expect("csv output is utf-8"));
            Ok(out)
        }
        Format::Json => {
            let mut obj = Map::new();
            obj.insert("schema".into(), BENCH_SCHEMA.into());
            obj.insert("environment".into(), Value::Object(env.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()));
            obj.insert("rows".into(), serde_json::to_value(rows)?);
            Ok(serde_json::to_string_pretty(&Value::Object(obj))? + "\n")
        }
    }
}
