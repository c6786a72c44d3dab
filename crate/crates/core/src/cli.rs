//! Command-line front end behind the `kbackup` binary.
//!
//! Exit codes: 0 success, 1 invariant violation or failed run, 2 usage or
//! parameter error, 3 I/O or file-format error.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::{verify_coloring, Coloring, ColoringConfig};
use crate::error::{param, Error, Result};
use crate::generators::{self, BoundedGrowthConfig, GeometricLayout};
use crate::graph::{Graph, NodeId};
use crate::kbp::{compute_loads, run_kbp_with, Placement};
use crate::sim::{FaultPlan, RunConfig, DEFAULT_BANDWIDTH_FACTOR, DEFAULT_MAX_ROUNDS};
use crate::structure::{neighborhood_independence, StructuralReport};
use crate::vm::{
    exclusivity_violations, extended_vm, ledger_report, restore_shares, Algorithm, MemoryLedger,
    Schedule, VmConfig,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

pub const GRAPH_FILE: &str = "graph.txt";
pub const LAYOUT_FILE: &str = "layout.csv";
pub const REPORT_FILE: &str = "report.json";
pub const PLACEMENT_FILE: &str = "placement.json";
pub const LOADS_FILE: &str = "loads.csv";
pub const COLORING_FILE: &str = "coloring.csv";
pub const SUPERCLASS_FILE: &str = "superclasses.csv";
pub const SCHEDULE_FILE: &str = "schedule.json";
pub const LEDGER_FILE: &str = "ledger.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const TRACE_FILE: &str = "trace.jsonl";

#[derive(Debug, Parser)]
#[command(
    name = "kbackup",
    version,
    about = "K-backup placement and virtual-memory scheduling on a CONGEST simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a topology: edge list, layout (geometric graphs) and structural report.
    #[command(args_override_self = true)]
    Generate(GenerateArgs),
    /// Run an algorithm on an edge-list graph and write its artifacts.
    #[command(args_override_self = true)]
    Run(RunArgs),
    /// Re-check run artifacts against a graph and print a pass/fail table.
    #[command(args_override_self = true)]
    Verify(VerifyArgs),
    /// Run an algorithm over seeds and parameter values; one CSV row each.
    #[command(args_override_self = true)]
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Topology {
    Udg,
    BoundedGrowth,
    Cycle,
    Star,
    Path,
    Complete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgorithmArg {
    Kbp,
    EfficientVm,
    ExtendedVm,
}

#[derive(Debug, Clone, Args)]
pub struct TopologyArgs {
    /// Node count (leaf count for `star`).
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    /// Connection radius in the unit square [default: 0.3, bounded-growth 0.85].
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Bounded-growth filter: accept once δ ≥ fraction·Δ.
    #[arg(long, default_value_t = 0.5)]
    pub min_degree_fraction: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_attempts: usize,
}

impl TopologyArgs {
    fn radius_for(&self, t: Topology) -> f64 {
        self.radius.unwrap_or(match t {
            Topology::BoundedGrowth => 0.85,
            _ => 0.3,
        })
    }

    pub fn build(&self, t: Topology, seed: u64) -> Result<(Graph, Option<GeometricLayout>)> {
        Ok(match t {
            Topology::Udg => {
                let (g, l) = generators::unit_disk(self.n, self.radius_for(t), seed)?;
                (g, Some(l))
            }
            Topology::BoundedGrowth => {
                let cfg = BoundedGrowthConfig {
                    n: self.n,
                    radius: self.radius_for(t),
                    min_degree_fraction: self.min_degree_fraction,
                    max_attempts: self.max_attempts,
                };
                let (g, l, _) = generators::bounded_growth(&cfg, seed)?;
                (g, Some(l))
            }
            Topology::Cycle => (generators::cycle(self.n)?, None),
            Topology::Star => (generators::star(self.n)?, None),
            Topology::Path => (generators::path(self.n)?, None),
            Topology::Complete => (generators::complete(self.n)?, None),
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub topology: Topology,
    #[command(flatten)]
    pub params: TopologyArgs,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Flat `key = value` file of flag defaults; flags given on the command line win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(value_enum)]
    pub algorithm: AlgorithmArg,
    /// Edge-list graph file.
    #[arg(long)]
    pub graph: PathBuf,
    /// Backups per node (kbp, efficient-vm).
    #[arg(long)]
    pub k: Option<usize>,
    /// Super-class count (extended-vm).
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_BANDWIDTH_FACTOR)]
    pub bandwidth_factor: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_ROUNDS)]
    pub max_rounds: usize,
    /// Crash plan CSV (`node,round`); kbp only.
    #[arg(long)]
    pub faults: Option<PathBuf>,
    /// Physical memory per node, as an integer or fraction.
    #[arg(long, default_value = "1")]
    pub memory: String,
    /// Also write the per-message trace (kbp only).
    #[arg(long)]
    pub trace: bool,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Directory of run artifacts; files are looked up by their default names.
    #[arg(long)]
    pub dir: Option<PathBuf>,
    #[arg(long)]
    pub placement: Option<PathBuf>,
    #[arg(long)]
    pub coloring: Option<PathBuf>,
    #[arg(long)]
    pub schedule: Option<PathBuf>,
    #[arg(long)]
    pub ledger: Option<PathBuf>,
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Memory per node used to rebuild the ledger [default: from the summary, else 1].
    #[arg(long)]
    pub memory: Option<String>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub algorithm: AlgorithmArg,
    #[arg(long, value_enum, default_value = "udg")]
    pub topology: Topology,
    #[command(flatten)]
    pub params: TopologyArgs,
    /// Seeds as `a..b` (half-open) or a comma list.
    #[arg(long, default_value = "0..10")]
    pub seeds: String,
    /// Comma list of k values.
    #[arg(long)]
    pub k: Option<String>,
    /// Comma list of R values.
    #[arg(long)]
    pub r: Option<String>,
    #[arg(long, default_value_t = DEFAULT_BANDWIDTH_FACTOR)]
    pub bandwidth_factor: usize,
    #[arg(long, default_value = "1")]
    pub memory: String,
    /// CSV destination [default: stdout].
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Machine-readable outcome of `run`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Summary {
    pub algorithm: AlgorithmArg,
    pub k: Option<usize>,
    pub r: Option<usize>,
    pub memory: String,
    pub rounds_used: usize,
    pub max_load: Option<usize>,
    pub c_times_k: Option<usize>,
    pub min_gain: Option<f64>,
    pub median_gain: Option<f64>,
    pub phase_count: Option<usize>,
    pub crashed: Vec<NodeId>,
    pub warnings: Vec<String>,
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args = match expand_config(args.into_iter().map(Into::into).collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let outcome = match &cli.command {
        Command::Generate(a) => cmd_generate(a).map(|_| EXIT_OK),
        Command::Run(a) => cmd_run(a).map(|_| EXIT_OK),
        Command::Verify(a) => cmd_verify(a).map(|table| {
            print!("{}", table.render());
            if table.passed() {
                EXIT_OK
            } else {
                EXIT_INVARIANT
            }
        }),
        Command::Sweep(a) => cmd_sweep(a).map(|_| EXIT_OK),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        exit_code(&e)
    })
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Param(_)
        | Error::UnknownNode(_)
        | Error::IsolatedNodes(_)
        | Error::TooLarge(_)
        | Error::IndependenceTooLarge { .. } => EXIT_USAGE,
        Error::Io(_)
        | Error::Json(_)
        | Error::Csv(_)
        | Error::Parse { .. }
        | Error::SelfLoop { .. }
        | Error::DuplicateEdge { .. } => EXIT_IO,
        _ => EXIT_INVARIANT,
    }
}

/// Replaces `--config FILE` with the file's `key = value` pairs as flags,
/// placed right after the subcommand so later command-line flags override
/// them.
pub fn expand_config(mut args: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut path = None;
    let mut i = 0;
    while i < args.len() {
        let a = args[i].to_string_lossy().into_owned();
        if a == "--config" {
            let v = args
                .get(i + 1)
                .ok_or_else(|| param("--config needs a file"))?
                .clone();
            args.drain(i..i + 2);
            path = Some(PathBuf::from(v));
        } else if let Some(v) = a.strip_prefix("--config=") {
            path = Some(PathBuf::from(v));
            args.remove(i);
        } else {
            i += 1;
        }
    }
    let Some(path) = path else {
        return Ok(args);
    };
    let flags = parse_config(&fs::read_to_string(&path)?)?;
    let at = 2.min(args.len());
    args.splice(at..at, flags.into_iter().map(OsString::from));
    Ok(args)
}

fn parse_config(text: &str) -> Result<Vec<String>> {
    let mut flags = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            message: "expected `key = value`".into(),
        })?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        match value.trim() {
            "true" => flags.push(format!("--{key}")),
            "false" => {}
            v => {
                flags.push(format!("--{key}"));
                flags.push(v.to_string());
            }
        }
    }
    Ok(flags)
}

fn read_graph(path: &Path) -> Result<Graph> {
    Graph::read_edge_list(BufReader::new(fs::File::open(path)?))
}

fn create(dir: &Path, name: &str) -> Result<fs::File> {
    fs::create_dir_all(dir)?;
    Ok(fs::File::create(dir.join(name))?)
}

fn parse_memory(text: &str) -> Result<BigRational> {
    let m: BigRational = text
        .trim()
        .parse()
        .map_err(|_| param(format!("memory `{text}` is not a rational number")))?;
    if m <= BigRational::from_integer(0.into()) {
        return Err(param("memory must be positive"));
    }
    Ok(m)
}

pub fn cmd_generate(a: &GenerateArgs) -> Result<()> {
    let (g, layout) = a.params.build(a.topology, a.params.seed)?;
    let report = StructuralReport::compute(&g)?;
    g.write_edge_list(create(&a.out, GRAPH_FILE)?)?;
    if let Some(layout) = layout {
        layout.write_csv(create(&a.out, LAYOUT_FILE)?)?;
    }
    let mut f = create(&a.out, REPORT_FILE)?;
    writeln!(f, "{}", serde_json::to_string_pretty(&report)?)?;
    Ok(())
}

fn require(value: Option<usize>, flag: &str, algo: AlgorithmArg) -> Result<usize> {
    value.ok_or_else(|| param(format!("{algo:?} needs --{flag}")))
}

fn vm_config(bandwidth_factor: usize, max_rounds: usize, memory: BigRational) -> VmConfig {
    VmConfig {
        memory,
        coloring: ColoringConfig {
            bandwidth_factor,
            max_rounds,
            ..ColoringConfig::default()
        },
    }
}

fn gains(ledger: &MemoryLedger) -> (Option<f64>, Option<f64>) {
    ledger_report(ledger).map_or((None, None), |s| (Some(s.min_f64()), Some(s.median_f64())))
}

pub fn cmd_run(a: &RunArgs) -> Result<Summary> {
    let g = read_graph(&a.graph)?;
    let memory = parse_memory(&a.memory)?;
    let out = &a.out;
    let mut summary = Summary {
        algorithm: a.algorithm,
        k: a.k,
        r: a.r,
        memory: memory.to_string(),
        rounds_used: 0,
        max_load: None,
        c_times_k: None,
        min_gain: None,
        median_gain: None,
        phase_count: None,
        crashed: Vec::new(),
        warnings: Vec::new(),
    };
    if a.faults.is_some() && a.algorithm != AlgorithmArg::Kbp {
        return Err(param("--faults is only supported for kbp"));
    }
    match a.algorithm {
        AlgorithmArg::Kbp => {
            let k = require(a.k, "k", a.algorithm)?;
            let faults = match &a.faults {
                Some(p) => FaultPlan::read_csv(fs::File::open(p)?)?,
                None => FaultPlan::none(),
            };
            let cfg = RunConfig {
                bandwidth_factor: a.bandwidth_factor,
                max_rounds: a.max_rounds,
                faults,
                record_trace: a.trace,
            };
            let (placement, run) = run_kbp_with(&g, k, &cfg)?;
            // Survivors chose among live neighbors only.
            let live: BTreeSet<NodeId> = g
                .nodes()
                .iter()
                .copied()
                .filter(|v| !run.crashed.contains(v))
                .collect();
            let live_graph = g.induced(&live);
            let c = neighborhood_independence(&live_graph)?;
            let loads = compute_loads(&live_graph, &placement, c)?;
            write_text(out, PLACEMENT_FILE, &placement.to_json()?)?;
            loads.write_csv(create(out, LOADS_FILE)?)?;
            if a.trace {
                run.write_trace(create(out, TRACE_FILE)?)?;
            }
            summary.rounds_used = run.rounds_used;
            summary.max_load = Some(loads.max_load);
            summary.c_times_k = Some(loads.c_times_k);
            summary.crashed = run.crashed.iter().copied().collect();
            summary.warnings = short_degree_warnings(&live_graph, k);
        }
        AlgorithmArg::EfficientVm => {
            let k = require(a.k, "k", a.algorithm)?;
            let cfg = vm_config(a.bandwidth_factor, a.max_rounds, memory);
            let run = crate::vm::efficient_vm(&g, k, &cfg)?;
            let c = neighborhood_independence(&g)?;
            let loads = compute_loads(&g, &run.placement, c)?;
            write_text(out, PLACEMENT_FILE, &run.placement.to_json()?)?;
            loads.write_csv(create(out, LOADS_FILE)?)?;
            run.coloring.write_csv(create(out, COLORING_FILE)?)?;
            write_text(out, SCHEDULE_FILE, &run.schedule.to_json()?)?;
            run.ledger.write_csv(create(out, LEDGER_FILE)?)?;
            (summary.min_gain, summary.median_gain) = gains(&run.ledger);
            summary.rounds_used = run.schedule.total_rounds;
            summary.max_load = Some(loads.max_load);
            summary.c_times_k = Some(loads.c_times_k);
            summary.phase_count = Some(run.schedule.phases.len());
            summary.warnings = short_degree_warnings(&g, k);
        }
        AlgorithmArg::ExtendedVm => {
            let r = require(a.r, "r", a.algorithm)?;
            let cfg = vm_config(a.bandwidth_factor, a.max_rounds, memory);
            let run = extended_vm(&g, r, &cfg)?;
            run.coloring.write_csv(create(out, COLORING_FILE)?)?;
            run.partition.write_csv(create(out, SUPERCLASS_FILE)?)?;
            write_text(out, SCHEDULE_FILE, &run.schedule.to_json()?)?;
            run.ledger.write_csv(create(out, LEDGER_FILE)?)?;
            (summary.min_gain, summary.median_gain) = gains(&run.ledger);
            summary.rounds_used = run.schedule.total_rounds;
            summary.phase_count = Some(run.schedule.phases.len());
            summary.warnings = run
                .starved
                .iter()
                .map(|v| format!("node {v} has no neighbor outside its super-class"))
                .collect();
        }
    }
    write_text(out, SUMMARY_FILE, &serde_json::to_string_pretty(&summary)?)?;
    Ok(summary)
}

fn short_degree_warnings(g: &Graph, k: usize) -> Vec<String> {
    let short = g.nodes().iter().filter(|&&v| g.degree(v) < k).count();
    if short == 0 {
        return Vec::new();
    }
    vec![format!(
        "{short} node(s) have fewer than k = {k} neighbors and back up on all of them"
    )]
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<()> {
    let mut f = create(dir, name)?;
    writeln!(f, "{text}")?;
    Ok(())
}

/// One line of the `verify` table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub invariant: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyTable {
    pub checks: Vec<Check>,
}

impl VerifyTable {
    fn record(&mut self, invariant: &'static str, outcome: Result<String>) {
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(e) => (false, e.to_string()),
        };
        self.checks.push(Check {
            invariant,
            passed,
            detail,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.invariant)
            .collect()
    }

    pub fn render(&self) -> String {
        let mut s = format!("{:<24} {:<6} {}\n", "invariant", "result", "detail");
        for c in &self.checks {
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            s.push_str(&format!(
                "{:<24} {:<6} {}\n",
                c.invariant, verdict, c.detail
            ));
        }
        s
    }
}

fn pick(explicit: &Option<PathBuf>, dir: &Option<PathBuf>, name: &str) -> Option<PathBuf> {
    explicit
        .clone()
        .or_else(|| dir.as_ref().map(|d| d.join(name)).filter(|p| p.exists()))
}

fn violation(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}

/// Loads whatever artifacts are present and checks each invariant that
/// applies to them. File errors abort; violated invariants become `FAIL`
/// rows.
pub fn cmd_verify(a: &VerifyArgs) -> Result<VerifyTable> {
    let g = read_graph(&a.graph)?;
    let summary: Option<Summary> = match pick(&a.summary, &a.dir, SUMMARY_FILE) {
        Some(p) => Some(serde_json::from_str(&fs::read_to_string(p)?)?),
        None => None,
    };
    let placement = match pick(&a.placement, &a.dir, PLACEMENT_FILE) {
        Some(p) => Some(Placement::from_json(&fs::read_to_string(p)?)?),
        None => None,
    };
    let schedule = match pick(&a.schedule, &a.dir, SCHEDULE_FILE) {
        Some(p) => Some(Schedule::from_json(&fs::read_to_string(p)?)?),
        None => None,
    };
    let ledger_rows = match pick(&a.ledger, &a.dir, LEDGER_FILE) {
        Some(p) => Some(read_ledger_rows(fs::File::open(p)?)?),
        None => None,
    };
    let efficient = schedule
        .as_ref()
        .map(|s| s.algorithm == Algorithm::EfficientVm)
        .or_else(|| {
            summary
                .as_ref()
                .map(|s| s.algorithm == AlgorithmArg::EfficientVm)
        })
        .unwrap_or(false);
    let coloring = match pick(&a.coloring, &a.dir, COLORING_FILE) {
        Some(p) => Some(Coloring::read_csv(
            fs::File::open(p)?,
            if efficient { 2 } else { 1 },
        )?),
        None => None,
    };
    if placement.is_none() && coloring.is_none() && schedule.is_none() {
        return Err(param("no artifacts to verify"));
    }
    let memory = match (&a.memory, &summary) {
        (Some(m), _) => parse_memory(m)?,
        (None, Some(s)) => parse_memory(&s.memory)?,
        (None, None) => parse_memory("1")?,
    };

    let crashed: BTreeSet<NodeId> = summary
        .as_ref()
        .map(|s| s.crashed.iter().copied().collect())
        .unwrap_or_default();
    let live: BTreeSet<NodeId> = g
        .nodes()
        .iter()
        .copied()
        .filter(|v| !crashed.contains(v))
        .collect();
    let live_graph = g.induced(&live);

    let mut table = VerifyTable::default();
    if let Some(p) = &placement {
        table.record(
            "placement validity",
            p.validate(&live_graph).map(|_| format!("k = {}", p.k())),
        );
        table.record(
            "load <= c*K",
            (|| {
                let c = neighborhood_independence(&live_graph)?;
                let loads = compute_loads(&live_graph, p, c)?;
                if loads.max_load > loads.c_times_k {
                    return Err(violation(format!(
                        "max load {} exceeds c*K = {}",
                        loads.max_load, loads.c_times_k
                    )));
                }
                Ok(format!(
                    "max load {} <= {}",
                    loads.max_load, loads.c_times_k
                ))
            })(),
        );
    }
    if let Some(col) = &coloring {
        table.record(
            "coloring properness",
            (|| {
                let target = if efficient {
                    let p = placement
                        .as_ref()
                        .ok_or_else(|| param("a distance-2 coloring needs the placement"))?;
                    g.selection_subgraph(p)?
                } else {
                    g.clone()
                };
                if !verify_coloring(&target, col)? {
                    return Err(Error::InvalidColoring(format!(
                        "two nodes within {} hops share a color",
                        col.hop_radius
                    )));
                }
                if !efficient && schedule.is_some() && col.color_count > g.max_degree() as u64 + 1 {
                    return Err(Error::InvalidColoring(format!(
                        "{} colors exceed Δ + 1 = {}",
                        col.color_count,
                        g.max_degree() + 1
                    )));
                }
                Ok(format!(
                    "{} colors, {} hops",
                    col.used_colors(),
                    col.hop_radius
                ))
            })(),
        );
    }
    if let Some(s) = &schedule {
        table.record(
            "schedule structure",
            s.validate(&g).map(|_| format!("{} phases", s.phases.len())),
        );
        if s.algorithm == Algorithm::EfficientVm {
            table.record(
                "per-phase exclusivity",
                (|| {
                    let bad = exclusivity_violations(s);
                    if let Some(&(phase, u, n)) = bad.first() {
                        return Err(violation(format!(
                            "phase {phase}: target {u} has {n} selectors"
                        )));
                    }
                    if let Some(p) = &placement {
                        for phase in &s.phases {
                            for &v in &phase.active {
                                let mut want: Vec<NodeId> = p.of(v).to_vec();
                                want.sort();
                                if phase.targets_of(v).collect::<Vec<_>>() != want {
                                    return Err(violation(format!(
                                        "node {v} targets differ from its placement"
                                    )));
                                }
                            }
                        }
                    }
                    Ok("one selector per target".into())
                })(),
            );
        }
        table.record(
            "ledger over-commit",
            (|| {
                let mut s = s.clone();
                restore_shares(&mut s, &memory);
                let ledger = MemoryLedger::from_schedule(&s, &memory)?;
                if let Some(rows) = &ledger_rows {
                    let expect = ledger_rows_of(&ledger);
                    if *rows != expect {
                        return Err(violation("ledger file disagrees with the schedule"));
                    }
                }
                Ok(format!("M = {memory}"))
            })(),
        );
    }
    Ok(table)
}

fn read_ledger_rows(r: impl std::io::Read) -> Result<Vec<[String; 3]>> {
    let mut rdr = csv::Reader::from_reader(r);
    rdr.records()
        .map(|rec| {
            let rec = rec?;
            Ok([0, 1, 2].map(|i| rec.get(i).unwrap_or("").to_string()))
        })
        .collect()
}

fn ledger_rows_of(ledger: &MemoryLedger) -> Vec<[String; 3]> {
    ledger
        .virtual_of
        .iter()
        .map(|(v, x)| [v.to_string(), x.to_string(), ledger.gain_of[v].to_string()])
        .collect()
}

/// One `sweep` row. Metrics that do not apply, or that a failed instance
/// could not produce, are left empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepRow {
    pub seed: u64,
    pub param: usize,
    pub nodes: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub min_degree: usize,
    pub c: Option<usize>,
    pub rounds_used: Option<usize>,
    pub max_load: Option<usize>,
    pub c_times_k: Option<usize>,
    pub min_gain: Option<f64>,
    pub median_gain: Option<f64>,
    pub phase_count: Option<usize>,
    pub status: String,
}

pub fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    let text = text.trim();
    let seeds: Vec<u64> = if let Some((a, b)) = text.split_once("..") {
        let a: u64 = a
            .trim()
            .parse()
            .map_err(|_| param(format!("bad seed range `{text}`")))?;
        let b: u64 = b
            .trim()
            .parse()
            .map_err(|_| param(format!("bad seed range `{text}`")))?;
        (a..b).collect()
    } else {
        parse_list(text)?.into_iter().map(|s| s as u64).collect()
    };
    if seeds.is_empty() {
        return Err(param("empty seed range"));
    }
    Ok(seeds)
}

pub fn parse_list(text: &str) -> Result<Vec<usize>> {
    let values = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| param(format!("bad value `{s}`"))))
        .collect::<Result<Vec<usize>>>()?;
    if values.is_empty() {
        return Err(param("empty parameter range"));
    }
    Ok(values)
}

pub fn cmd_sweep(a: &SweepArgs) -> Result<Vec<SweepRow>> {
    let seeds = parse_seeds(&a.seeds)?;
    let (flag, list) = match a.algorithm {
        AlgorithmArg::Kbp | AlgorithmArg::EfficientVm => ("k", &a.k),
        AlgorithmArg::ExtendedVm => ("r", &a.r),
    };
    let values = parse_list(
        list.as_deref()
            .ok_or_else(|| param(format!("sweep of {:?} needs --{flag}", a.algorithm)))?,
    )?;
    let memory = parse_memory(&a.memory)?;
    let cfg = vm_config(a.bandwidth_factor, DEFAULT_MAX_ROUNDS, memory);
    let per_seed: Vec<Result<Vec<SweepRow>>> = seeds
        .par_iter()
        .map(|&seed| {
            let (g, _) = a.params.build(a.topology, seed)?;
            let c = neighborhood_independence(&g).ok();
            Ok(values
                .iter()
                .map(|&x| sweep_row(&g, c, seed, x, a.algorithm, &cfg))
                .collect())
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_seed {
        rows.extend(r?);
    }
    let sink: Box<dyn Write> = match &a.out {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            Box::new(fs::File::create(p)?)
        }
        None => Box::new(std::io::stdout()),
    };
    let mut w = csv::Writer::from_writer(sink);
    for row in &rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(rows)
}

fn sweep_row(
    g: &Graph,
    c: Option<usize>,
    seed: u64,
    x: usize,
    algo: AlgorithmArg,
    cfg: &VmConfig,
) -> SweepRow {
    let mut row = SweepRow {
        seed,
        param: x,
        nodes: g.node_count(),
        edges: g.edge_count(),
        max_degree: g.max_degree(),
        min_degree: g.min_degree(),
        c,
        rounds_used: None,
        max_load: None,
        c_times_k: None,
        min_gain: None,
        median_gain: None,
        phase_count: None,
        status: "ok".into(),
    };
    let outcome = (|| -> Result<()> {
        match algo {
            AlgorithmArg::Kbp => {
                let run_cfg = RunConfig {
                    bandwidth_factor: cfg.coloring.bandwidth_factor,
                    ..RunConfig::default()
                };
                let (p, run) = run_kbp_with(g, x, &run_cfg)?;
                let loads = compute_loads(g, &p, c.unwrap_or(0))?;
                row.rounds_used = Some(run.rounds_used);
                row.max_load = Some(loads.max_load);
                row.c_times_k = c.map(|c| c * x);
            }
            AlgorithmArg::EfficientVm => {
                let run = crate::vm::efficient_vm(g, x, cfg)?;
                let loads = compute_loads(g, &run.placement, c.unwrap_or(0))?;
                row.rounds_used = Some(run.schedule.total_rounds);
                row.max_load = Some(loads.max_load);
                row.c_times_k = c.map(|c| c * x);
                (row.min_gain, row.median_gain) = gains(&run.ledger);
                row.phase_count = Some(run.schedule.phases.len());
            }
            AlgorithmArg::ExtendedVm => {
                let run = extended_vm(g, x, cfg)?;
                row.rounds_used = Some(run.schedule.total_rounds);
                (row.min_gain, row.median_gain) = gains(&run.ledger);
                row.phase_count = Some(run.schedule.phases.len());
            }
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        row.status = format!("error: {e}");
    }
    row
}
