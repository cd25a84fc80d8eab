//! Command-line front end: every operation of the laboratory behind one
//! binary with machine-readable output on stdout and diagnostics on stderr.
//!
//! Exit codes: 0 success, 1 verification violation found, 2 usage error,
//! 3 resource-limit refusal.

use std::fs;
use std::io::{BufWriter, IsTerminal, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cliquelab::census::{
    run_census, sharpness_sweep, verify_exhaustive_supersat, verify_lemma_m_positive,
    CensusError, CensusOptions, CensusRecord, SharpnessRow,
};
use cliquelab::cliques::{count_cliques, count_cliques_at, find_transversal_clique};
use cliquelab::graph::{
    canonical_form, emit_graph6, parse_graph6, random_graph, turan_graph, turan_part_sizes,
    turan_plus_matching, Graph, VertexSet, MAX_CANONICAL_VERTICES,
};
use cliquelab::partition::{
    distance_to_r_partite, distance_to_r_partite_branch_bound, local_search_partition,
    DistanceError,
};
use cliquelab::structure::{
    check_m_positive, classify_q_membership, is_balanced, is_internally_sparse,
    is_uniformly_dense, phi_image_check, sample_uniform_density_refutation, CheckOutcome,
    StructureError, StructureThresholds, DEFAULT_DENSITY_BUDGET,
};
use cliquelab::supersat::{neighborhood_farness_check, verify_supersaturation_at, Verdict};

const EXIT_OK: u8 = 0;
const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "cliquelab",
    about = "Exact small-graph laboratory: clique counts, distance to r-partiteness, \
             supersaturation verification, structural checkers, exhaustive census",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone)]
struct GraphInput {
    /// Inline graph6 record.
    #[arg(long, conflicts_with_all = ["input", "gen"])]
    graph6: Option<String>,
    /// File of graph6 records, one per line; "-" reads stdin.
    #[arg(long, conflicts_with = "gen")]
    input: Option<String>,
    /// Generator spec: turan:N,R | turan+matching:N,R,T | random:N,P,SEED |
    /// complete:N | empty:N
    #[arg(long)]
    gen: Option<String>,
}

#[derive(Args, Clone)]
struct OutputOpts {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write results here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Exhaustive census over all labeled graphs on n vertices.
    Census {
        #[arg(short = 'n', long)]
        n: usize,
        #[arg(short = 'r', long)]
        r: usize,
        #[arg(long, default_value_t = 64)]
        shards: u32,
        /// Worker threads (default: CLIQUELAB_JOBS or all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Compute the exact distance of every K_{r+1}-free graph.
        #[arg(long)]
        distance_histogram: bool,
        /// Verify the supersaturation bound on every graph.
        #[arg(long)]
        check_supersat: bool,
        /// Verify m >= 1 over all optimal partitions of free non-r-partite graphs.
        #[arg(long)]
        check_m_positive: bool,
        /// Census canonical representatives weighted by n!/|Aut| (n <= 9).
        #[arg(long)]
        unlabeled: bool,
        /// Resumable checkpoint file; relative paths resolve under
        /// CLIQUELAB_CHECKPOINT_DIR when set.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Stop after this many additional shards (for resumable batches).
        #[arg(long)]
        stop_after_shards: Option<u32>,
        /// Write violating graphs as newline-delimited graph6.
        #[arg(long)]
        violations_out: Option<PathBuf>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Verify the supersaturation bound: exhaustively for -n, or per graph.
    SupersatVerify {
        /// Exhaustive mode over all labeled graphs on n vertices (n <= 7).
        #[arg(short = 'n', long, conflicts_with_all = ["graph6", "input", "gen", "check"])]
        n: Option<usize>,
        #[arg(short = 'r', long)]
        r: usize,
        #[arg(long)]
        jobs: Option<usize>,
        /// Pin t instead of using the full distance (per-graph mode).
        #[arg(long, conflicts_with = "sweep_t")]
        t: Option<usize>,
        /// Emit one report per t in 1..=distance (per-graph mode).
        #[arg(long)]
        sweep_t: bool,
        /// Also check farness inheritance into every vertex neighborhood
        /// (per-graph mode, r >= 2).
        #[arg(long)]
        farness: bool,
        /// Re-verify a stored violation sidecar (newline-delimited graph6).
        #[arg(long)]
        check: Option<PathBuf>,
        #[arg(long)]
        violations_out: Option<PathBuf>,
        #[command(flatten)]
        graph: GraphInput,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Exact distance to r-partiteness with a witness partition.
    Distance {
        #[arg(short = 'r', long)]
        r: usize,
        /// dp = subset dynamic programming, bb = branch and bound,
        /// local = seeded local search (an upper bound, not the exact
        /// distance; requires --seed).
        #[arg(long, default_value = "dp")]
        algo: String,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        graph: GraphInput,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Exact m-clique counts and transversal-clique search.
    Cliques {
        #[arg(short = 'm', long, required_unless_present = "parts")]
        m: Option<usize>,
        /// Count only cliques containing this vertex.
        #[arg(long, requires = "m")]
        at: Option<usize>,
        /// Disjoint parts as semicolon-separated vertex lists, e.g.
        /// "0,1;2,3;4,5": search for a clique with one vertex per part.
        #[arg(long, conflicts_with = "m")]
        parts: Option<String>,
        #[command(flatten)]
        graph: GraphInput,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Structural classification: freeness, distance, density, sparsity,
    /// balance, and Q membership.
    Props {
        #[arg(short = 'r', long)]
        r: usize,
        /// Thresholds config file (JSON); default is the "paper" preset.
        #[arg(long)]
        thresholds: Option<PathBuf>,
        /// Work budget for the exact uniform-density scan.
        #[arg(long, default_value_t = DEFAULT_DENSITY_BUDGET)]
        density_budget: u64,
        /// Use sampling refutation for uniform density instead of the exact
        /// scan (can only prove failure).
        #[arg(long, requires = "seed")]
        density_samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        graph: GraphInput,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Check that Phi images stay K_{r+1}-free (exhaustive when feasible).
    Phi {
        #[arg(short = 'r', long)]
        r: usize,
        /// Sampled edge choices when the image space is too large to exhaust.
        #[arg(long, default_value_t = 0, requires = "seed")]
        samples: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        graph: GraphInput,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Sharpness table for the Turan-plus-matching construction.
    Sharpness {
        #[arg(short = 'r', long)]
        r: usize,
        #[arg(long)]
        k_max: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Verify m >= 1 over every optimal partition of every K_{r+1}-free
    /// non-r-partite graph on n vertices.
    LemmaM {
        #[arg(short = 'n', long, conflicts_with = "check")]
        n: Option<usize>,
        #[arg(short = 'r', long)]
        r: usize,
        #[arg(long)]
        jobs: Option<usize>,
        /// Re-verify a stored violation sidecar.
        #[arg(long)]
        check: Option<PathBuf>,
        #[arg(long)]
        violations_out: Option<PathBuf>,
        #[command(flatten)]
        output: OutputOpts,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<CensusError> for CliError {
    fn from(e: CensusError) -> Self {
        let code = match &e {
            CensusError::LabeledTooLarge { .. }
            | CensusError::UnlabeledTooLarge { .. }
            | CensusError::VerifyTooLarge { .. }
            | CensusError::Distance(_)
            | CensusError::Structure(_) => EXIT_RESOURCE,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<DistanceError> for CliError {
    fn from(e: DistanceError) -> Self {
        let code = match &e {
            DistanceError::ZeroParts => EXIT_USAGE,
            _ => EXIT_RESOURCE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<StructureError> for CliError {
    fn from(e: StructureError) -> Self {
        let code = match &e {
            StructureError::BudgetExceeded { .. }
            | StructureError::PhiNeedsSamples { .. }
            | StructureError::Distance(_) => EXIT_RESOURCE,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::usage(format!("i/o error: {e}"))
    }
}

fn jobs_or_env(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("CLIQUELAB_JOBS")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(0)
}

fn resolve_checkpoint(path: PathBuf) -> PathBuf {
    if path.is_relative() {
        if let Ok(dir) = std::env::var("CLIQUELAB_CHECKPOINT_DIR") {
            return PathBuf::from(dir).join(path);
        }
    }
    path
}

fn open_output(out: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(fs::File::create(path)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

/// Resolves the graph input to a list of (graph6, Graph) pairs.
fn load_graphs(input: &GraphInput) -> Result<Vec<(String, Graph)>, CliError> {
    if let Some(spec) = &input.gen {
        let g = parse_generator(spec)?;
        return Ok(vec![(emit_graph6(&g), g)]);
    }
    if let Some(record) = &input.graph6 {
        let g = parse_graph6(record).map_err(|e| CliError::usage(e.to_string()))?;
        return Ok(vec![(record.trim().to_string(), g)]);
    }
    if let Some(path) = &input.input {
        let text = if path == "-" {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            buf
        } else {
            fs::read_to_string(path)?
        };
        let mut out = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let g = parse_graph6(line)
                .map_err(|e| CliError::usage(format!("line {}: {e}", lineno + 1)))?;
            out.push((line.to_string(), g));
        }
        if out.is_empty() {
            return Err(CliError::usage("no graph6 records in input"));
        }
        return Ok(out);
    }
    if !std::io::stdin().is_terminal() {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        let mut out = Vec::new();
        for line in buf.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let g = parse_graph6(line).map_err(|e| CliError::usage(e.to_string()))?;
            out.push((line.to_string(), g));
        }
        if !out.is_empty() {
            return Ok(out);
        }
    }
    Err(CliError::usage(
        "no graph input: use --graph6, --input FILE|-, or --gen SPEC",
    ))
}

fn parse_generator(spec: &str) -> Result<Graph, CliError> {
    let bad = || CliError::usage(format!("bad generator spec {spec:?}"));
    let (kind, args) = spec.split_once(':').unwrap_or((spec, ""));
    let nums: Vec<&str> = args.split(',').filter(|s| !s.is_empty()).collect();
    let usize_arg = |i: usize| -> Result<usize, CliError> {
        nums.get(i).and_then(|s| s.parse().ok()).ok_or_else(bad)
    };
    match kind {
        "turan" => {
            let (n, r) = (usize_arg(0)?, usize_arg(1)?);
            if !(1..=64).contains(&n) || r < 1 || r > n {
                return Err(bad());
            }
            Ok(turan_graph(n, r))
        }
        "turan+matching" => {
            let (n, r, t) = (usize_arg(0)?, usize_arg(1)?, usize_arg(2)?);
            if !(1..=64).contains(&n) || r < 1 || r > n || 2 * t > turan_part_sizes(n, r)[0] {
                return Err(bad());
            }
            Ok(turan_plus_matching(n, r, t))
        }
        "random" => {
            let n = usize_arg(0)?;
            let p: f64 = nums.get(1).and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            let seed: u64 = nums.get(2).and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            if !(1..=64).contains(&n) || !(0.0..=1.0).contains(&p) {
                return Err(bad());
            }
            Ok(random_graph(n, p, seed))
        }
        "complete" => {
            let n = usize_arg(0)?;
            if !(1..=64).contains(&n) {
                return Err(bad());
            }
            Ok(Graph::complete(n))
        }
        "empty" => {
            let n = usize_arg(0)?;
            if !(1..=64).contains(&n) {
                return Err(bad());
            }
            Ok(Graph::empty(n))
        }
        _ => Err(bad()),
    }
}

/// Parses "0,1;2,3;4,5" into pairwise-disjoint vertex sets.
fn parse_parts(spec: &str) -> Result<Vec<VertexSet>, CliError> {
    let mut sets = Vec::new();
    let mut seen = VertexSet::EMPTY;
    for chunk in spec.split(';') {
        let mut set = VertexSet::EMPTY;
        for item in chunk.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let v: usize = item
                .parse()
                .map_err(|_| CliError::usage(format!("bad vertex {item:?} in --parts")))?;
            if v >= 64 {
                return Err(CliError::usage(format!("vertex {v} out of range")));
            }
            set.insert(v);
        }
        if set.is_empty() {
            return Err(CliError::usage("empty part in --parts"));
        }
        if !set.is_disjoint(seen) {
            return Err(CliError::usage("parts must be pairwise disjoint"));
        }
        seen = seen.union(set);
        sets.push(set);
    }
    if sets.is_empty() {
        return Err(CliError::usage("no parts given"));
    }
    Ok(sets)
}

fn load_thresholds(path: &Option<PathBuf>, r: usize) -> Result<StructureThresholds, CliError> {
    match path {
        None => Ok(StructureThresholds::paper(r)),
        Some(p) => {
            let text = fs::read_to_string(p)?;
            Ok(StructureThresholds::from_config_str(&text, r)?)
        }
    }
}

fn write_violation_sidecar(path: &PathBuf, graphs: &[String]) -> Result<(), CliError> {
    let mut body = graphs.join("\n");
    if !body.is_empty() {
        body.push('\n');
    }
    fs::write(path, body)?;
    Ok(())
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Census {
            n,
            r,
            shards,
            jobs,
            distance_histogram,
            check_supersat,
            check_m_positive,
            unlabeled,
            checkpoint,
            stop_after_shards,
            violations_out,
            output,
        } => {
            let options = CensusOptions {
                shards,
                jobs: jobs_or_env(jobs),
                distance_histogram,
                check_supersat,
                check_m_positive,
                unlabeled,
                checkpoint_path: checkpoint.map(resolve_checkpoint),
                stop_after_shards,
            };
            let record = run_census(n, r, &options)?;
            let mut w = open_output(&output.out)?;
            match output.format {
                Format::Json => writeln!(w, "{}", serde_json::to_string(&record).unwrap())?,
                Format::Csv => {
                    writeln!(w, "{}", CensusRecord::CSV_HEADER)?;
                    writeln!(w, "{}", record.to_csv_row())?;
                }
            }
            if let Some(path) = violations_out {
                let mut all = record.supersat_violation_graphs.clone();
                all.extend(record.m_violation_graphs.iter().cloned());
                write_violation_sidecar(&path, &all)?;
            }
            let violations = record.supersat_violations.unwrap_or(0)
                + record.m_zero_violations.unwrap_or(0);
            eprintln!(
                "census n={n} r={r}: {} graphs, {} free, {} r-partite ({} ms)",
                record.total_graphs,
                record.free_count,
                record.r_partite_count,
                record.meta.runtime_ms
            );
            Ok(if violations > 0 { EXIT_VIOLATION } else { EXIT_OK })
        }

        Command::SupersatVerify {
            n,
            r,
            jobs,
            t,
            sweep_t,
            farness,
            check,
            violations_out,
            graph,
            output,
        } => {
            if r == 0 {
                return Err(CliError::usage("r must be at least 1"));
            }
            if let Some(path) = check {
                return replay_supersat_sidecar(&path, r, &output);
            }
            if let Some(n) = n {
                let report = verify_exhaustive_supersat(n, r, jobs_or_env(jobs))?;
                let mut w = open_output(&output.out)?;
                writeln!(w, "{}", serde_json::to_string(&report).unwrap())?;
                if let Some(path) = violations_out {
                    write_violation_sidecar(&path, &report.violation_graphs)?;
                }
                eprintln!(
                    "supersat n={n} r={r}: {} graphs, {} applicable, violations: {}",
                    report.total_graphs, report.applicable, report.violations
                );
                return Ok(if report.violations > 0 {
                    EXIT_VIOLATION
                } else {
                    EXIT_OK
                });
            }
            // Per-graph mode.
            let graphs = load_graphs(&graph)?;
            let mut w = open_output(&output.out)?;
            if output.format == Format::Csv {
                writeln!(w, "{}", cliquelab::SupersatReport::CSV_HEADER)?;
            }
            let mut any_violation = false;
            for (_, g) in &graphs {
                let ts: Vec<Option<usize>> = if sweep_t {
                    let d = distance_to_r_partite(g, r)?.distance;
                    if d == 0 {
                        vec![None]
                    } else {
                        (1..=d).map(Some).collect()
                    }
                } else {
                    vec![t]
                };
                for t_pin in ts {
                    let report = verify_supersaturation_at(g, r, t_pin)?;
                    any_violation |= report.verdict == Verdict::Violated;
                    match output.format {
                        Format::Json => {
                            let mut obj = report.to_json();
                            if farness && report.t >= 1 {
                                if r < 2 {
                                    return Err(CliError::usage(
                                        "--farness needs r >= 2",
                                    ));
                                }
                                let ok = neighborhood_farness_check(g, r, report.t)
                                    .map_err(|e| CliError::usage(e.to_string()))?;
                                any_violation |= !ok;
                                obj["farness_inheritance"] = json!(ok);
                            }
                            writeln!(w, "{obj}")?;
                        }
                        Format::Csv => writeln!(w, "{}", report.to_csv_row())?,
                    }
                }
            }
            Ok(if any_violation { EXIT_VIOLATION } else { EXIT_OK })
        }

        Command::Distance {
            r,
            algo,
            seed,
            graph,
            output,
        } => {
            if r == 0 {
                return Err(CliError::usage("r must be at least 1"));
            }
            let graphs = load_graphs(&graph)?;
            let mut w = open_output(&output.out)?;
            for (g6, g) in &graphs {
                let obj = match algo.as_str() {
                    "dp" | "bb" => {
                        let result = if algo == "dp" {
                            distance_to_r_partite(g, r)?
                        } else {
                            distance_to_r_partite_branch_bound(g, r)?
                        };
                        json!({
                            "graph6": g6,
                            "n": g.n(),
                            "r": r,
                            "algo": algo,
                            "distance": result.distance,
                            "witness": {
                                "assignment": result.witness.assignment(),
                                "interior": result.witness.interior(),
                            },
                        })
                    }
                    "local" => {
                        let Some(seed) = seed else {
                            return Err(CliError::usage("--algo local requires --seed"));
                        };
                        let partition = local_search_partition(g, r, seed);
                        json!({
                            "graph6": g6,
                            "n": g.n(),
                            "r": r,
                            "algo": "local",
                            "interior": partition.interior(),
                            "assignment": partition.assignment(),
                        })
                    }
                    other => {
                        return Err(CliError::usage(format!(
                            "unknown algorithm {other:?} (expected dp, bb, or local)"
                        )))
                    }
                };
                writeln!(w, "{obj}")?;
            }
            Ok(EXIT_OK)
        }

        Command::Cliques {
            m,
            at,
            parts,
            graph,
            output,
        } => {
            let graphs = load_graphs(&graph)?;
            let mut w = open_output(&output.out)?;
            if let Some(spec) = parts {
                let sets = parse_parts(&spec)?;
                for (g6, g) in &graphs {
                    for set in &sets {
                        if set.iter().any(|v| v >= g.n()) {
                            return Err(CliError::usage(format!(
                                "part vertex out of range for n={}",
                                g.n()
                            )));
                        }
                    }
                    let hit = find_transversal_clique(g, &sets);
                    writeln!(
                        w,
                        "{}",
                        json!({
                            "graph6": g6,
                            "n": g.n(),
                            "parts": sets,
                            "transversal": hit,
                        })
                    )?;
                }
                return Ok(EXIT_OK);
            }
            let m = m.expect("clap requires -m without --parts");
            if m == 0 {
                return Err(CliError::usage("m must be at least 1"));
            }
            for (g6, g) in &graphs {
                let value = match at {
                    Some(v) => {
                        if v >= g.n() {
                            return Err(CliError::usage(format!(
                                "vertex {v} out of range for n={}",
                                g.n()
                            )));
                        }
                        count_cliques_at(g, v, m).count
                    }
                    None => count_cliques(g, m).count,
                };
                let mut obj = json!({
                    "graph6": g6,
                    "n": g.n(),
                    "m": m,
                    "count": value as u64,
                });
                if let Some(v) = at {
                    obj["vertex"] = json!(v);
                }
                writeln!(w, "{obj}")?;
            }
            Ok(EXIT_OK)
        }

        Command::Props {
            r,
            thresholds,
            density_budget,
            density_samples,
            seed,
            graph,
            output,
        } => {
            if r == 0 {
                return Err(CliError::usage("r must be at least 1"));
            }
            let th = load_thresholds(&thresholds, r)?;
            let graphs = load_graphs(&graph)?;
            let mut w = open_output(&output.out)?;
            for (g6, g) in &graphs {
                let obj = match density_samples {
                    None => {
                        let flags = classify_q_membership(g, r, &th, density_budget)?;
                        let mut obj = serde_json::to_value(&flags).unwrap();
                        obj["graph6"] = json!(g6);
                        obj["density_mode"] = json!("exact");
                        obj["canonical_graph6"] = if g.n() <= MAX_CANONICAL_VERTICES {
                            json!(canonical_form(g).expect("within the size cap"))
                        } else {
                            serde_json::Value::Null
                        };
                        attach_witnesses(&mut obj, g, r, &th, density_budget)?;
                        obj
                    }
                    Some(samples) => {
                        let outcome = sample_uniform_density_refutation(
                            g,
                            r,
                            &th,
                            samples,
                            seed.expect("clap enforces --seed"),
                        )?;
                        let sparse = is_internally_sparse(g, r, &th)?;
                        let balanced = is_balanced(g, r, &th)?;
                        json!({
                            "graph6": g6,
                            "density_mode": "sample",
                            "uniform_density": outcome_json(&outcome),
                            "internally_sparse": outcome_json(&sparse),
                            "balanced": outcome_json(&balanced),
                        })
                    }
                };
                writeln!(w, "{obj}")?;
            }
            Ok(EXIT_OK)
        }

        Command::Phi {
            r,
            samples,
            seed,
            graph,
            output,
        } => {
            if r == 0 {
                return Err(CliError::usage("r must be at least 1"));
            }
            let graphs = load_graphs(&graph)?;
            let mut w = open_output(&output.out)?;
            let mut any_bad = false;
            for (g6, g) in &graphs {
                let report = phi_image_check(g, r, samples, seed.unwrap_or(0))?;
                any_bad |= !report.all_free;
                let mut obj = serde_json::to_value(&report).unwrap();
                obj["graph6"] = json!(g6);
                writeln!(w, "{obj}")?;
            }
            Ok(if any_bad { EXIT_VIOLATION } else { EXIT_OK })
        }

        Command::Sharpness { r, k_max, output } => {
            let rows = sharpness_sweep(r, k_max)?;
            let mut w = open_output(&output.out)?;
            match output.format {
                Format::Json => {
                    for row in &rows {
                        writeln!(w, "{}", serde_json::to_string(row).unwrap())?;
                    }
                }
                Format::Csv => {
                    writeln!(w, "{}", SharpnessRow::CSV_HEADER)?;
                    for row in &rows {
                        writeln!(w, "{}", row.to_csv_row())?;
                    }
                }
            }
            let bad = rows.iter().any(|row| {
                !row.within_envelope
                    || row.distance != row.t
                    || row.cliques != row.expected_cliques
            });
            Ok(if bad { EXIT_VIOLATION } else { EXIT_OK })
        }

        Command::LemmaM {
            n,
            r,
            jobs,
            check,
            violations_out,
            output,
        } => {
            if r == 0 {
                return Err(CliError::usage("r must be at least 1"));
            }
            if let Some(path) = check {
                return replay_lemma_m_sidecar(&path, r, &output);
            }
            let Some(n) = n else {
                return Err(CliError::usage("lemma-m needs -n or --check"));
            };
            let report = verify_lemma_m_positive(n, r, jobs_or_env(jobs))?;
            let mut w = open_output(&output.out)?;
            writeln!(w, "{}", serde_json::to_string(&report).unwrap())?;
            if let Some(path) = violations_out {
                write_violation_sidecar(&path, &report.violation_graphs)?;
            }
            eprintln!(
                "lemma-m n={n} r={r}: class size {}, violations: {}",
                report.class_size, report.violations
            );
            Ok(if report.violations > 0 {
                EXIT_VIOLATION
            } else {
                EXIT_OK
            })
        }
    }
}

fn outcome_json<W: serde::Serialize>(outcome: &CheckOutcome<W>) -> serde_json::Value {
    match outcome {
        CheckOutcome::ProvedTrue => json!({"outcome": "proved_true"}),
        CheckOutcome::Refuted { witness } => json!({
            "outcome": "refuted",
            "witness": serde_json::to_value(witness).unwrap(),
        }),
        CheckOutcome::NotRefuted { samples_tried } => json!({
            "outcome": "not_refuted",
            "samples_tried": samples_tried,
        }),
    }
}

fn attach_witnesses(
    obj: &mut serde_json::Value,
    g: &Graph,
    r: usize,
    th: &StructureThresholds,
    budget: u64,
) -> Result<(), CliError> {
    if obj["uniformly_dense"] == json!(false) {
        let outcome = is_uniformly_dense(g, r, th, budget)?;
        obj["density_witness"] = outcome_json(&outcome)["witness"].clone();
    }
    if obj["internally_sparse"] == json!(false) {
        let outcome = is_internally_sparse(g, r, th)?;
        obj["sparsity_witness"] = outcome_json(&outcome)["witness"].clone();
    }
    if obj["balanced"] == json!(false) {
        let outcome = is_balanced(g, r, th)?;
        obj["balance_witness"] = outcome_json(&outcome)["witness"].clone();
    }
    Ok(())
}

fn replay_supersat_sidecar(
    path: &PathBuf,
    r: usize,
    output: &OutputOpts,
) -> Result<u8, CliError> {
    let text = fs::read_to_string(path)?;
    let mut w = open_output(&output.out)?;
    let mut confirmed = 0u64;
    let mut entries = 0u64;
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let g = parse_graph6(line).map_err(|e| CliError::usage(format!("{line:?}: {e}")))?;
        let report = verify_supersaturation_at(&g, r, None)?;
        entries += 1;
        let still_violates = report.verdict == Verdict::Violated;
        confirmed += u64::from(still_violates);
        writeln!(
            w,
            "{}",
            json!({
                "graph6": line,
                "verdict": report.verdict.as_str(),
                "confirmed_violation": still_violates,
            })
        )?;
    }
    eprintln!("replayed {entries} sidecar entries, {confirmed} confirmed violations");
    Ok(if confirmed > 0 { EXIT_VIOLATION } else { EXIT_OK })
}

fn replay_lemma_m_sidecar(path: &PathBuf, r: usize, output: &OutputOpts) -> Result<u8, CliError> {
    let text = fs::read_to_string(path)?;
    let mut w = open_output(&output.out)?;
    let mut confirmed = 0u64;
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let g = parse_graph6(line).map_err(|e| CliError::usage(format!("{line:?}: {e}")))?;
        let ok = check_m_positive(&g, r)?;
        confirmed += u64::from(!ok);
        writeln!(
            w,
            "{}",
            json!({
                "graph6": line,
                "m_positive": ok,
                "confirmed_violation": !ok,
            })
        )?;
    }
    Ok(if confirmed > 0 { EXIT_VIOLATION } else { EXIT_OK })
}
