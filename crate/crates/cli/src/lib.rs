//! Batch front end over `picard-core`: grid scans, path tracking, property
//! suites and the family catalog.
//!
//! Exit codes: 0 clean, 1 when some record or sample carries an error tag
//! (output is still written), 2 for configuration errors.

use std::io::Write;
use std::path::Path;

use picard_core::analysis::TrackOptions;
use picard_core::checks::{run_suite, Suite};
use picard_core::{exceptional_set_scan, track_exceptional_value, AnalysisError, ParametricFamily};

pub mod args;
pub mod config;
pub mod output;

use args::{CheckArgs, Format, ScanArgs, TrackArgs};
pub use args::{Cli, Command};
use config::{ScanConfig, TrackConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        CliError::Config(e.to_string())
    }
}

/// Runs one command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command)),
            Err(e) => Err(CliError::Config(format!("cannot start {n} threads: {e}"))),
        },
        None => dispatch(cli.command),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("picard: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Scan(a) => scan(&a),
        Command::Track(a) => track(&a),
        Command::Check(a) => check(&a),
        Command::Families => {
            emit(None, &output::families_listing(&ParametricFamily::catalog()))?;
            Ok(0)
        }
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|source| CliError::Write { path: p.display().to_string(), source }),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Write { path: "stdout".into(), source }),
    }
}

fn scan(args: &ScanArgs) -> Result<i32, CliError> {
    let cfg = ScanConfig::resolve(args)?;
    let report = exceptional_set_scan(&cfg.family, &cfg.grid, cfg.radius, &cfg.p_list)?;
    let text = match cfg.format {
        Format::Csv => output::scan_csv(&report),
        Format::Json => output::scan_json(&report),
    };
    emit(cfg.output.as_deref(), &text)?;
    let failed = report.records.iter().filter(|r| r.error.is_some()).count();
    if failed > 0 {
        eprintln!("picard: {failed} of {} records carry an error tag", report.records.len());
        return Ok(1);
    }
    Ok(0)
}

fn track(args: &TrackArgs) -> Result<i32, CliError> {
    let cfg = TrackConfig::resolve(args)?;
    let mut opts = TrackOptions { candidate: cfg.candidate, ..Default::default() };
    if let Some(t) = cfg.pole_tol {
        opts.pole_tol = t;
    }
    if let Some(x) = cfg.pole_exclusion {
        opts.pole_exclusion = x;
    }
    let trace = track_exceptional_value(&cfg.family, &cfg.path.points(), cfg.radius, &opts)?;
    emit(cfg.output.as_deref(), &output::trace_json(&trace))?;
    Ok(if trace.has_errors() { 1 } else { 0 })
}

fn check(args: &CheckArgs) -> Result<i32, CliError> {
    let suite: Suite = args.suite.parse().map_err(CliError::Config)?;
    let report = run_suite(suite, args.seed);
    if let Some(path) = &args.out {
        let mut text = serde_json::to_string_pretty(&report).expect("reports serialize");
        text.push('\n');
        emit(Some(path), &text)?;
    }
    for t in report.trials.iter().filter(|t| t.verdict != picard_core::Verdict::Pass) {
        eprintln!("{} {}: {}", t.verdict, t.name, t.detail);
    }
    println!(
        "suite={} seed={} trials={} pass={} fail={} inconclusive={}",
        suite.name(),
        report.seed,
        report.trials.len(),
        report.pass,
        report.fail,
        report.inconclusive
    );
    Ok(if report.fail == 0 { 0 } else { 1 })
}
