//! Subcommands of the `evotree` binary.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 algorithmic failure
//! (placement exhausted, or a crossing under an engine that promises none).

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use evotree_core::engine::Algorithm;
use evotree_core::{EngineParams, LabelSpec};
use serde_json::json;
use thiserror::Error;

use crate::config::{params_json, resolve_seed, ParamOverrides, RunConfig, SEED_ENV};
use crate::events::{generate_synthetic, parse_events, write_events, Event};
use crate::replay::{rebuild, Replay};
use crate::report::{checkpoint_reports, write_csv};
use crate::svg::{render_svg, SvgOptions};
use crate::trace::{read_trace, Trace, TraceWriter};

#[derive(Debug, Parser)]
#[command(name = "evotree", version, about = "Crossing-free layouts of growing trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a random evolving tree as an event file.
    Gen(GenArgs),
    /// Replay an event file through an engine and write a trace.
    Layout(Box<LayoutArgs>),
    /// Score a trace at regular checkpoints and write CSV.
    Metrics(MetricsArgs),
    /// Render every frame of a trace as SVG.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub nodes: usize,
    #[arg(long, default_value_t = 5)]
    pub max_degree: usize,
    #[arg(long, default_value_t = 100.0)]
    pub length: f64,
    /// Falls back to EVOTREE_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct LayoutArgs {
    /// dynacola, dynasafe or naive.
    #[arg(long)]
    pub algo: Option<String>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Falls back to the config file, then EVOTREE_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    /// TOML run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Worker threads for force evaluation; output does not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Record per-insertion wall-clock time in the trace.
    #[arg(long)]
    pub timings: bool,
    #[command(flatten)]
    pub params: ParamOverrides,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long)]
    pub events: Option<PathBuf>,
    /// Checkpoint interval in frames [default: 100].
    #[arg(long)]
    pub every: Option<usize>,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long)]
    pub events: Option<PathBuf>,
    /// Directory for frame_00001.svg, frame_00002.svg, ...
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Draw node labels.
    #[arg(long)]
    pub labels: bool,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Algorithm(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Algorithm(_) => 3,
        }
    }
}

fn input(msg: impl std::fmt::Display) -> CliError {
    CliError::Input(msg.to_string())
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen(a) => gen(a),
        Command::Layout(a) => layout(*a),
        Command::Metrics(a) => metrics(a),
        Command::Render(a) => render(a),
    }
}

fn env_seed() -> Option<String> {
    std::env::var(SEED_ENV).ok()
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_config(path: Option<&Path>) -> Result<RunConfig, CliError> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => RunConfig::from_toml(&read_text(p)?).map_err(|e| input(format!("{}: {e}", p.display()))),
    }
}

fn load_events(path: &Path) -> Result<Vec<Event>, CliError> {
    parse_events(&read_text(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_trace(path: &Path) -> Result<Trace, CliError> {
    read_trace(&read_text(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn required(value: Option<PathBuf>, flag: &str) -> Result<PathBuf, CliError> {
    value
        .filter(|p| !p.as_os_str().is_empty())
        .ok_or_else(|| input(format!("missing --{flag} (or its config-file key)")))
}

fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| input(format!("thread pool: {e}")))
}

fn gen(a: GenArgs) -> Result<(), CliError> {
    let seed = resolve_seed(a.seed, None, env_seed().as_deref()).map_err(input)?;
    if !(a.length > 0.0 && a.length.is_finite()) {
        return Err(input("--length must be a positive number"));
    }
    let events = generate_synthetic(a.nodes, a.max_degree, a.length, seed).map_err(input)?;
    write_file(&a.out, &write_events(&events))
}

/// Engine, engine parameters and paths after applying all precedence rules.
pub struct ResolvedLayout {
    pub algorithm: Algorithm,
    pub params: EngineParams,
    pub input: PathBuf,
    pub trace: PathBuf,
}

pub fn resolve_layout(a: &LayoutArgs, env: Option<&str>) -> Result<ResolvedLayout, CliError> {
    let cfg = load_config(a.config.as_deref())?;
    let algo = a
        .algo
        .clone()
        .or(cfg.algorithm)
        .ok_or_else(|| input("missing --algo (or its config-file key)"))?;
    let algorithm: Algorithm = algo.parse().map_err(input)?;
    let mut params = EngineParams::default();
    a.params.or(&cfg.params).apply(&mut params);
    params.seed = resolve_seed(a.seed, cfg.seed, env).map_err(input)?;
    params.validate().map_err(input)?;
    Ok(ResolvedLayout {
        algorithm,
        params,
        input: required(a.input.clone().or(cfg.input), "input")?,
        trace: required(a.trace.clone().or(cfg.trace), "trace")?,
    })
}

fn layout(a: LayoutArgs) -> Result<(), CliError> {
    let r = resolve_layout(&a, env_seed().as_deref())?;
    let events = load_events(&r.input)?;
    let file = fs::File::create(&r.trace).map_err(|e| input(format!("{}: {e}", r.trace.display())))?;
    let io_err = |e: std::io::Error| input(format!("{}: {e}", r.trace.display()));
    let mut writer = TraceWriter::new(BufWriter::new(file));
    writer
        .header(&json!({
            "comment": "effective config",
            "algorithm": r.algorithm.name(),
            "params": params_json(&r.params),
        }))
        .map_err(io_err)?;

    let replay = Replay::new(&events, r.algorithm, r.params.clone(), a.timings).map_err(input)?;
    let pool = pool(a.threads)?;
    let outcome = pool.install(|| -> Result<usize, CliError> {
        let mut last = 0;
        for step in replay {
            let step = step.map_err(|e| CliError::Algorithm(e.to_string()))?;
            writer.frame(&step.frame).map_err(io_err)?;
            eprintln!("step={} crossings={}", step.frame.t, step.crossings);
            if step.crossings > 0 && r.algorithm.crossing_free() {
                return Err(CliError::Algorithm(format!(
                    "{} produced {} crossings at step {}",
                    r.algorithm.name(),
                    step.crossings,
                    step.frame.t
                )));
            }
            last = step.crossings;
        }
        Ok(last)
    });
    // keep whatever was written readable, even on failure
    writer.into_inner().map_err(io_err)?;
    eprintln!("crossings={}", outcome?);
    Ok(())
}

fn metrics(a: MetricsArgs) -> Result<(), CliError> {
    let cfg = load_config(a.config.as_deref())?;
    let trace_path = required(a.trace.or(cfg.trace), "trace")?;
    let events_path = required(a.events.or(cfg.input), "events")?;
    let every = a.every.or(cfg.every).unwrap_or(100);
    if every == 0 {
        return Err(input("--every must be positive"));
    }
    let events = load_events(&events_path)?;
    let trace = load_trace(&trace_path)?;
    let (tree, frames) = rebuild(&events, &trace).map_err(input)?;
    let elapsed: Vec<Option<f64>> = trace.frames.iter().map(|f| f.elapsed_ms).collect();
    let reports = pool(a.threads)?
        .install(|| checkpoint_reports(&tree, &frames, &elapsed, every, &LabelSpec::default()))
        .map_err(|e| CliError::Algorithm(e.to_string()))?;
    let csv = write_csv(&reports);
    match a.out {
        Some(path) => write_file(&path, &csv),
        None => std::io::stdout().write_all(csv.as_bytes()).map_err(input),
    }
}

fn render(a: RenderArgs) -> Result<(), CliError> {
    let cfg = load_config(a.config.as_deref())?;
    let trace_path = required(a.trace.or(cfg.trace), "trace")?;
    let events_path = required(a.events.or(cfg.input), "events")?;
    let dir = required(a.out.or(cfg.render_dir), "out")?;
    let events = load_events(&events_path)?;
    let trace = load_trace(&trace_path)?;
    let (tree, frames) = rebuild(&events, &trace).map_err(input)?;
    fs::create_dir_all(&dir).map_err(|e| input(format!("{}: {e}", dir.display())))?;
    let options = SvgOptions { labels: a.labels, ..SvgOptions::default() };
    let spec = LabelSpec::default();
    for (i, frame) in frames.iter().enumerate() {
        let svg = render_svg(&tree, frame, &spec, &options);
        write_file(&dir.join(format!("frame_{:05}.svg", i + 1)), &svg)?;
    }
    Ok(())
}
