//! Command-line surface: bound tables, Lee code construction, zero-error
//! transmission demos, graph export, and direct solver access on DIMACS
//! files.
//!
//! Exit codes are part of the interface: 0 success, 1 usage or domain
//! error, 2 partial (budget-limited) results, 3 internal invariant
//! violation.

use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;

use crate::bounds::{capacity_bracket, BoundReport, BracketOptions};
use crate::codec::{run_trials, ZeroErrorCode};
use crate::error::{Error, Result};
use crate::graph::{build_channel, build_confusion_graph_capped, ConfusionGraph, DEFAULT_VERTEX_CAP};
use crate::lee::{construct_pl_budgeted, exists_pl, DEFAULT_ENUM_BUDGET};
use crate::solver::{
    max_independent_set, solve_clique_cover_lp, LpProblem, DEFAULT_CLIQUE_BUDGET,
    DEFAULT_NODE_BUDGET,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARTIAL: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "zec",
    about = "Certified bounds on the zero-error capacity of nearest-neighbor-error channels",
    version
)]
pub struct Cli {
    /// Worker threads (also settable via ZEC_THREADS); defaults to the
    /// available parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute capacity-bracket rows over ranges of d and n
    Bounds(BoundsArgs),
    /// Construct and dump a perfect Lee code
    Lee(LeeArgs),
    /// Run zero-error transmission trials over the simulated channel
    Demo(DemoArgs),
    /// Export a confusion graph or one of its powers
    Export(ExportArgs),
    /// Maximum independent set of a DIMACS graph
    Mis(MisArgs),
    /// Exact fractional clique-cover LP of a DIMACS graph
    Lp(LpArgs),
}

/// `A` or `A..B`, both ends inclusive.
fn parse_range(s: &str) -> std::result::Result<RangeInclusive<u32>, String> {
    let parse_end = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|_| format!("invalid number '{t}'"))
    };
    if let Some((lo, hi)) = s.split_once("..") {
        let (lo, hi) = (parse_end(lo)?, parse_end(hi)?);
        if lo > hi {
            return Err(format!("empty range {lo}..{hi}"));
        }
        Ok(lo..=hi)
    } else {
        let v = parse_end(s)?;
        Ok(v..=v)
    }
}

#[derive(Args, Debug)]
struct BoundsArgs {
    /// Dimension(s), e.g. 2 or 1..3
    #[arg(long, value_parser = parse_range)]
    d: RangeInclusive<u32>,
    /// Alphabet level(s), e.g. 3 or 3..12; must be at least 2
    #[arg(long, value_parser = parse_range)]
    n: RangeInclusive<u32>,
    /// Compute the exact independence number
    #[arg(long)]
    exact_alpha: bool,
    /// Solve the exact clique-cover LP
    #[arg(long)]
    lp: bool,
    /// Also compute alpha on the k-th strong power (repeatable)
    #[arg(long = "power")]
    powers: Vec<u32>,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    mis_budget: u64,
    #[arg(long, default_value_t = DEFAULT_CLIQUE_BUDGET)]
    clique_budget: usize,
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    vertex_cap: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct LeeArgs {
    #[arg(long)]
    d: u32,
    #[arg(long)]
    q: u32,
    /// Re-verify the sphere partition and report on stderr
    #[arg(long)]
    verify: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_ENUM_BUDGET)]
    enum_budget: u64,
}

#[derive(Args, Debug)]
struct DemoArgs {
    #[arg(long)]
    d: u32,
    #[arg(long)]
    n: u32,
    /// Block length (channel uses per message)
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.5)]
    error_rate: f64,
    /// Write one JSON trace line per trial to this path
    #[arg(long)]
    dump: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[arg(long)]
    d: u32,
    #[arg(long)]
    n: u32,
    /// Strong-product power of the base graph
    #[arg(long, default_value_t = 1)]
    power: u32,
    #[arg(long, value_enum, default_value_t = GraphFormat::Dimacs)]
    format: GraphFormat,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    vertex_cap: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum GraphFormat {
    Dimacs,
    Json,
}

#[derive(Args, Debug)]
struct MisArgs {
    /// DIMACS edge-format input file
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
}

#[derive(Args, Debug)]
struct LpArgs {
    /// DIMACS edge-format input file
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_CLIQUE_BUDGET)]
    clique_budget: usize,
    /// Also print the per-clique weights
    #[arg(long)]
    assignment: bool,
}

/// Entry point used by the binary: parses `std::env::args`, runs, and
/// returns the process exit code.
pub fn run_from_env() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's own help/version output counts as success
            if e.use_stderr() {
                let _ = e.print();
                return EXIT_USAGE;
            }
            let _ = e.print();
            return EXIT_OK;
        }
    };
    configure_threads(cli.threads);
    let outcome = match cli.command {
        Command::Bounds(args) => cmd_bounds(args),
        Command::Lee(args) => cmd_lee(args),
        Command::Demo(args) => cmd_demo(args),
        Command::Export(args) => cmd_export(args),
        Command::Mis(args) => cmd_mis(args),
        Command::Lp(args) => cmd_lp(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Invariant(_) | Error::CorruptInput(_) => EXIT_INVARIANT,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn configure_threads(flag: Option<usize>) {
    // ZEC_THREADS overrides the flag
    let from_env = std::env::var("ZEC_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok());
    if let Some(t) = from_env.or(flag) {
        // a pool may already exist (e.g. under a test harness); keep going
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build_global();
    }
}

fn write_output(out: &Option<PathBuf>, contents: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, contents)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(contents.as_bytes())?;
        }
    }
    Ok(())
}

fn cmd_bounds(args: BoundsArgs) -> Result<i32> {
    if *args.n.start() < 2 {
        return Err(Error::Parameter(
            "bound tables need n >= 2 (n = 1 is the trivial single-class channel)".into(),
        ));
    }
    if *args.d.start() < 1 {
        return Err(Error::Parameter("dimension d must be >= 1".into()));
    }
    let options = BracketOptions {
        exact_alpha: args.exact_alpha,
        alpha_powers: args.powers.clone(),
        exact_lp: args.lp,
        mis_budget: args.mis_budget,
        clique_budget: args.clique_budget,
        vertex_cap: args.vertex_cap,
    };
    let mut reports: Vec<BoundReport> = Vec::new();
    for d in args.d.clone() {
        for n in args.n.clone() {
            reports.push(capacity_bracket(d, n, &options)?);
        }
    }
    let partial = reports.iter().any(|r| !r.is_complete());
    let rendered = match args.format {
        TableFormat::Csv => {
            let mut s = String::from(BoundReport::CSV_HEADER);
            s.push('\n');
            for r in &reports {
                s.push_str(&r.to_csv_row());
                s.push('\n');
            }
            s
        }
        TableFormat::Json => {
            let rows: Vec<serde_json::Value> = reports.iter().map(|r| r.to_json()).collect();
            let mut s = serde_json::to_string_pretty(&rows).expect("report serialization");
            s.push('\n');
            s
        }
    };
    write_output(&args.out, &rendered)?;
    for r in reports.iter().filter(|r| !r.is_complete()) {
        for flag in &r.flags {
            eprintln!("partial ({}, {}): {flag}", r.d, r.n);
        }
    }
    Ok(if partial { EXIT_PARTIAL } else { EXIT_OK })
}

fn cmd_lee(args: LeeArgs) -> Result<i32> {
    if args.d < 1 || args.q < 1 {
        return Err(Error::Parameter("d and q must be >= 1".into()));
    }
    let m = 2 * args.d + 1;
    if !args.q.is_multiple_of(m) {
        // distinguish nonexistence from an unsupported construction
        if exists_pl(args.d, args.q) {
            eprintln!(
                "a perfect Lee code over Z_{}^{} exists, but constructing it here \
requires {m} | q",
                args.q, args.d
            );
        } else {
            let radical = (1..=m).filter(|p| m.is_multiple_of(*p) && is_prime(*p)).product::<u32>();
            eprintln!(
                "no PL({},1,{}): {radical} does not divide {}",
                args.d, args.q, args.q
            );
        }
        return Ok(EXIT_USAGE);
    }
    let code = construct_pl_budgeted(args.d, args.q, args.enum_budget)?;
    if args.verify {
        let ok = code.verify_perfect_budgeted(args.enum_budget)?;
        eprintln!(
            "verified perfect: {ok} ({} codewords, sphere size {m})",
            code.len()
        );
        if !ok {
            return Err(Error::Invariant("constructed code failed verification".into()));
        }
    }
    let mut dump = code.to_json();
    dump.push('\n');
    write_output(&args.out, &dump)?;
    Ok(EXIT_OK)
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|f| f * f <= p).all(|f| !p.is_multiple_of(f))
}

fn cmd_demo(args: DemoArgs) -> Result<i32> {
    let code = ZeroErrorCode::from_channel(args.d, args.n, args.k)?;
    let summary = run_trials(
        &code,
        args.trials,
        args.error_rate,
        args.seed,
        args.dump.is_some(),
    )?;
    if let Some(path) = &args.dump {
        let mut lines = String::new();
        for record in &summary.traces {
            lines.push_str(&record.to_json_line());
            lines.push('\n');
        }
        fs::write(path, lines)?;
    }
    let bracket = capacity_bracket(args.d, args.n, &BracketOptions::default())?;
    println!(
        "channel (d={}, n={}), block length {}, base set {} symbols",
        args.d,
        args.n,
        args.k,
        code.base_set().len()
    );
    println!(
        "trials {} at error rate {}: {} decode failures",
        summary.trials, args.error_rate, summary.failures
    );
    println!("rate {:.6} bits/use", code.rate());
    println!(
        "capacity bracket [{:.6}, {:.6}] bits/use",
        bracket.capacity_lo_bits, bracket.capacity_hi_bits
    );
    if summary.failures > 0 {
        return Err(Error::Invariant(format!(
            "{} decode failures on legal channel output",
            summary.failures
        )));
    }
    Ok(EXIT_OK)
}

fn cmd_export(args: ExportArgs) -> Result<i32> {
    if args.power < 1 {
        return Err(Error::Parameter("power must be >= 1".into()));
    }
    let channel = build_channel(args.d, args.n)?;
    let base = build_confusion_graph_capped(&channel, args.vertex_cap)?;
    let graph = base.power_capped(args.power, args.vertex_cap)?;
    let rendered = match args.format {
        GraphFormat::Dimacs => graph.to_dimacs(),
        GraphFormat::Json => {
            let mut edges: Vec<(usize, usize)> = Vec::with_capacity(graph.num_edges());
            for u in 0..graph.num_vertices() {
                for v in graph.neighbors(u).iter() {
                    if u < v {
                        edges.push((u, v));
                    }
                }
            }
            let labels: Vec<&[u32]> =
                (0..graph.num_vertices()).map(|v| graph.label(v)).collect();
            let mut s = serde_json::to_string_pretty(&serde_json::json!({
                "vertices": graph.num_vertices(),
                "edges": edges,
                "labels": labels,
            }))
            .expect("graph serialization");
            s.push('\n');
            s
        }
    };
    write_output(&args.out, &rendered)?;
    Ok(EXIT_OK)
}

fn cmd_mis(args: MisArgs) -> Result<i32> {
    let text = fs::read_to_string(&args.input)?;
    let graph = ConfusionGraph::from_dimacs(&text)?;
    match max_independent_set(&graph, args.budget) {
        Ok(result) => {
            println!("alpha {}", result.size);
            println!("witness {}", render_vertices(&result.witness));
            println!("nodes {}", result.nodes_explored);
            Ok(EXIT_OK)
        }
        Err(Error::BudgetExhausted { nodes, best }) => {
            println!("alpha >= {} (budget exhausted)", best.len());
            println!("witness {}", render_vertices(&best));
            println!("nodes {nodes}");
            Ok(EXIT_PARTIAL)
        }
        Err(e) => Err(e),
    }
}

/// 1-based, matching DIMACS numbering.
fn render_vertices(vertices: &[u32]) -> String {
    vertices
        .iter()
        .map(|v| (v + 1).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_lp(args: LpArgs) -> Result<i32> {
    let text = fs::read_to_string(&args.input)?;
    let graph = ConfusionGraph::from_dimacs(&text)?;
    let problem = LpProblem::maximal(&graph)?;
    let solution = solve_clique_cover_lp(&problem)?;
    println!("lp_value {}", solution.value);
    let bits = solution.value.numer().to_f64().unwrap_or(f64::NAN).log2()
        - solution.value.denom().to_f64().unwrap_or(f64::NAN).log2();
    println!("lp_value_bits {bits:.6}");
    println!("cliques {}", problem.cliques().len());
    if args.assignment {
        for (clique, weight) in &solution.assignment {
            println!("q {} = {}", render_vertices(clique), weight);
        }
    }
    Ok(EXIT_OK)
}
