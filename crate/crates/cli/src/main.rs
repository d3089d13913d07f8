//! `faultdiag`: simulate, trace, sweep and exhaustively verify the diagnosis algorithms.
//!
//! Exit codes: 0 success, 1 verification failure or runtime error, 2 usage error.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use faultdiag_core::diagnosis::Algorithm;
use faultdiag_core::harness::{
    self, parse_script, render_trace, ScenarioConfig, StrategyKind, SweepConfig, OUT_DIR_ENV,
};
use faultdiag_core::{exhaustive_check, Error};

#[derive(Parser)]
#[command(
    name = "faultdiag",
    version,
    about = "Adaptive fault diagnosis with Knight/Knave/Normal processors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its transcript as JSON.
    Simulate(ScenarioArgs),
    /// Run one scenario and print a per-question log.
    Trace(ScenarioArgs),
    /// Check every algorithm on every world and Normal behaviour up to n-max.
    Verify {
        #[arg(long, default_value_t = 7)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random worlds and Normal behaviours; one CSV row per trial.
    Sweep {
        #[arg(long)]
        n_from: usize,
        #[arg(long)]
        n_to: usize,
        #[arg(long)]
        algorithm: Algorithm,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario file (JSON); replaces the individual flags below.
    #[arg(long, conflicts_with_all = ["world", "algorithm", "strategy", "script", "seed", "budget"])]
    config: Option<PathBuf>,
    /// World string over K (Knight), V (Knave), N (Normal).
    #[arg(long, required_unless_present = "config")]
    world: Option<String>,
    #[arg(long, required_unless_present = "config")]
    algorithm: Option<Algorithm>,
    /// always_yes, always_no, scripted or seeded_random.
    #[arg(long, default_value = "always_no")]
    strategy: StrategyKind,
    /// Comma-separated Normal answers for the scripted strategy.
    #[arg(long)]
    script: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Upper bound on the Normal count (identify_normals only).
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ScenarioArgs {
    fn config(&self) -> Result<ScenarioConfig> {
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading scenario {}", path.display()))?;
            return serde_json::from_str(&text)
                .map_err(|e| anyhow::Error::new(Usage(format!("{}: {e}", path.display()))));
        }
        Ok(ScenarioConfig {
            world: self.world.clone().unwrap_or_default(),
            algorithm: self.algorithm.expect("required by clap"),
            strategy: self.strategy,
            script: self.script.as_deref().map(parse_script).transpose()?,
            seed: self.seed,
            normal_budget: self.budget,
        })
    }
}

#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn is_usage_error(err: &anyhow::Error) -> bool {
    if err.is::<Usage>() {
        return true;
    }
    matches!(
        err.downcast_ref::<Error>(),
        Some(
            Error::EmptyWorld
                | Error::InvalidType { .. }
                | Error::UnknownAlgorithm(_)
                | Error::UnknownStrategy(_)
                | Error::InvalidAnswer(_)
                | Error::MissingParameter(..)
                | Error::InvalidRange(_)
                | Error::BudgetTooLarge { .. }
        )
    )
}

/// Writes to `out`, else to `$FAULTDIAG_OUT_DIR/<default_name>`, else stdout.
fn emit(out: Option<&PathBuf>, default_name: &str, content: &[u8]) -> Result<()> {
    let path = out
        .cloned()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(|d| PathBuf::from(d).join(default_name)));
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            fs::write(&p, content).with_context(|| format!("writing {}", p.display()))
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(content)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Simulate(args) => {
            let config = args.config()?;
            let run = harness::run_scenario(&config)?;
            if let Some(w) = &run.warning {
                eprintln!("warning: {w}");
            }
            let mut json = run.document().to_json();
            json.push('\n');
            let name = format!("simulate-{}-{}.json", config.algorithm, run.world);
            emit(args.out.as_ref(), &name, json.as_bytes())?;
            let s = &run.summary;
            eprintln!(
                "{}: {} questions (bound {}){}",
                s.algorithm,
                s.questions_used,
                s.bound,
                if s.within_bound { "" } else { " OVER BOUND" }
            );
        }
        Command::Trace(args) => {
            let config = args.config()?;
            let run = harness::run_scenario(&config)?;
            let name = format!("trace-{}-{}.txt", config.algorithm, run.world);
            emit(args.out.as_ref(), &name, render_trace(&run).as_bytes())?;
        }
        Command::Verify { n_max, out } => {
            if n_max == 0 {
                return Err(Usage("--n-max must be at least 1".into()).into());
            }
            let report = exhaustive_check(n_max);
            let mut json = serde_json::to_string_pretty(&report)?;
            json.push('\n');
            emit(
                out.as_ref(),
                &format!("verify-n{n_max}.json"),
                json.as_bytes(),
            )?;
            eprintln!(
                "checked {} worlds, {} branches: {} failures",
                report.worlds_checked,
                report.branches_checked,
                report.failures.len()
            );
            if !report.passed() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Sweep {
            n_from,
            n_to,
            algorithm,
            trials,
            seed,
            out,
        } => {
            let rows = harness::sweep(&SweepConfig {
                n_from,
                n_to,
                algorithm,
                trials,
                seed,
            })?;
            let mut buf = Vec::new();
            harness::write_sweep_csv(&rows, &mut buf)?;
            let name = format!("sweep-{algorithm}-{n_from}-{n_to}.csv");
            emit(out.as_ref(), &name, &buf)?;
            let over = rows.iter().filter(|r| !r.within_bound).count();
            if over > 0 {
                eprintln!("{over} of {} rows exceeded their bound", rows.len());
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(if is_usage_error(&err) { 2 } else { 1 })
        }
    }
}
