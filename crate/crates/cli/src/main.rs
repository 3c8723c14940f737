//! `pancake`: sort, decide, reduce, and verify from the command line.
//!
//! Exit codes: 0 success; 64 usage or input-syntax errors; 74 I/O errors;
//! 1 domain errors (guards exceeded, `decide` on an unsortable input,
//! gadget verification failure); 2 equivalence violation in
//! `check-theorem`; 3 node budget exceeded. The environment variable
//! `PANCAKE_NODE_BUDGET` overrides the search budget.

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use rand::rngs::StdRng;
use rand::SeedableRng;

use pancake_core::embed::{
    canonical_embedding, check_embedding, randomized_embedding, EmbeddingKind,
};
use pancake_core::perm::Sequence;
use pancake_core::reduction::{
    build_instance, check_theorem_with, parse_dimacs, ReductionError, TheoremGuard,
};
use pancake_core::search::{
    decide_with, diameter_with, exact_distance_with, greedy_sort, SearchError, SearchLimits,
    TraceJson,
};

#[derive(Parser)]
#[command(
    name = "pancake",
    version,
    about = "Prefix-reversal sorting and the 3-SAT reduction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sort a permutation and print the flip sequence.
    Sort(SortArgs),
    /// Decide whether a permutation sorts in one flip per breakpoint.
    Decide(DecideArgs),
    /// Build the reduction permutation for a DIMACS 3-CNF formula.
    Reduce(ReduceArgs),
    /// Check sortable-iff-satisfiable on a DIMACS 3-CNF formula.
    CheckTheorem(CheckTheoremArgs),
    /// Machine-check every gadget property embedding.
    VerifyGadgets(VerifyGadgetsArgs),
    /// Print the pancake-network diameter f(n).
    Diameter(DiameterArgs),
}

#[derive(Args)]
struct SortArgs {
    /// Permutation: inline ("5 2 3 1 4"), a file path, or `-` for stdin.
    perm: String,
    /// Minimal flip count by iterative deepening (guarded by n <= 12).
    #[arg(long, conflicts_with = "greedy")]
    exact: bool,
    /// Deterministic heuristic sort (the default).
    #[arg(long)]
    greedy: bool,
    /// Raise the exact-sort size guard.
    #[arg(long)]
    max_n: Option<usize>,
    /// Emit the JSON trace instead of the flip line.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DecideArgs {
    /// Permutation: inline, a file path, or `-` for stdin.
    perm: String,
    /// Write the JSON trace to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    /// DIMACS CNF file path, or `-` for stdin.
    cnf: String,
    /// Write the permutation here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the layout JSON here.
    #[arg(long)]
    layout: Option<PathBuf>,
}

#[derive(Args)]
struct CheckTheoremArgs {
    /// DIMACS CNF file path, or `-` for stdin.
    cnf: String,
    /// Raise the variable-count guard.
    #[arg(long)]
    max_l: Option<usize>,
    /// Raise the clause-count guard.
    #[arg(long)]
    max_k: Option<usize>,
}

#[derive(Args)]
struct VerifyGadgetsArgs {
    /// Seed for the randomized-context re-embeddings.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Randomized contexts per property kind, on top of the canonical one.
    #[arg(long, default_value_t = 20)]
    contexts: u32,
}

#[derive(Args)]
struct DiameterArgs {
    n: usize,
    /// Raise the diameter size guard.
    #[arg(long)]
    max_n: Option<usize>,
}

enum CliError {
    Usage(String),
    Io(String),
    Domain(String),
    Violation(String),
    Budget(String),
}

impl CliError {
    fn report(self) -> u8 {
        let (msg, code) = match self {
            CliError::Usage(m) => (m, 64),
            CliError::Io(m) => (m, 74),
            CliError::Domain(m) => (m, 1),
            CliError::Violation(m) => (m, 2),
            CliError::Budget(m) => (m, 3),
        };
        eprintln!("pancake: {msg}");
        code
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<ReductionError> for CliError {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::EquivalenceViolation { .. } => CliError::Violation(e.to_string()),
            ReductionError::Search(s) => s.into(),
            ReductionError::TooLarge { .. } => CliError::Domain(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => e.report(),
    };
    ExitCode::from(code)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Sort(args) => sort(args),
        Command::Decide(args) => decide(args),
        Command::Reduce(args) => reduce(args),
        Command::CheckTheorem(args) => check_theorem_cmd(args),
        Command::VerifyGadgets(args) => verify_gadgets(args),
        Command::Diameter(args) => diameter_cmd(args),
    }
}

/// `PANCAKE_NODE_BUDGET` override, defaulting to the library budget.
fn node_budget() -> Result<u64, CliError> {
    match std::env::var("PANCAKE_NODE_BUDGET") {
        Ok(text) => text.parse::<u64>().map_err(|_| {
            CliError::Usage(format!(
                "PANCAKE_NODE_BUDGET must be an integer, got `{text}`"
            ))
        }),
        Err(_) => Ok(SearchLimits::default().node_budget),
    }
}

fn read_input(arg: &str) -> Result<String, CliError> {
    if arg == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        return Ok(buf);
    }
    fs::read_to_string(arg).map_err(|e| CliError::Io(format!("{arg}: {e}")))
}

/// Inline permutation, file path, or `-`; files use the first non-empty
/// line of the one-permutation-per-line text format.
fn read_permutation(arg: &str) -> Result<Sequence, CliError> {
    let inline = !arg.is_empty()
        && arg
            .split_whitespace()
            .all(|tok| tok.chars().all(|c| c.is_ascii_digit()));
    let text = if arg != "-" && inline {
        arg.to_string()
    } else {
        read_input(arg)?
    };
    let line = text
        .lines()
        .find(|l| !l.trim().is_empty())
        .ok_or_else(|| CliError::Usage("no permutation found in input".into()))?;
    Sequence::parse(line).map_err(|e| CliError::Usage(e.to_string()))
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn flip_line(flips: &[usize]) -> String {
    flips
        .iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn sort(args: SortArgs) -> Result<u8, CliError> {
    let s = read_permutation(&args.perm)?;
    let started = Instant::now();
    let (path, nodes) = if args.exact {
        let limits = SearchLimits {
            exact_max_n: args.max_n.unwrap_or(SearchLimits::default().exact_max_n),
            ..SearchLimits::default()
        };
        let result = exact_distance_with(&s, &limits)?;
        (result.witness, 0)
    } else {
        (greedy_sort(&s), 0)
    };
    if args.json {
        let trace = TraceJson::new(&path, nodes, started.elapsed());
        println!(
            "{}",
            serde_json::to_string(&trace).expect("trace serializes")
        );
    } else {
        println!("{}", flip_line(path.flips()));
    }
    Ok(0)
}

fn decide(args: DecideArgs) -> Result<u8, CliError> {
    let s = read_permutation(&args.perm)?;
    let started = Instant::now();
    let decision = decide_with(&s, None, node_budget()?)?;
    let elapsed = started.elapsed();
    match decision.path {
        Some(path) => {
            if let Some(trace_path) = &args.trace {
                let trace = TraceJson::new(&path, decision.stats.nodes_expanded, elapsed);
                write_file(
                    trace_path,
                    &serde_json::to_string(&trace).expect("trace serializes"),
                )?;
            }
            println!("{}", flip_line(path.flips()));
            Ok(0)
        }
        None => {
            println!("not efficiently sortable");
            Ok(1)
        }
    }
}

fn reduce(args: ReduceArgs) -> Result<u8, CliError> {
    let text = read_input(&args.cnf)?;
    let cnf = parse_dimacs(&text).map_err(|e| CliError::Usage(e.to_string()))?;
    let inst = build_instance(&cnf);
    let perm_line = format!("{}\n", inst.s_phi());
    match &args.out {
        Some(path) => write_file(path, &perm_line)?,
        None => print!("{perm_line}"),
    }
    if let Some(path) = &args.layout {
        let json = serde_json::to_string(&inst.layout_json()).expect("layout serializes");
        write_file(path, &json)?;
    }
    Ok(0)
}

fn check_theorem_cmd(args: CheckTheoremArgs) -> Result<u8, CliError> {
    let text = read_input(&args.cnf)?;
    let cnf = parse_dimacs(&text).map_err(|e| CliError::Usage(e.to_string()))?;
    let defaults = TheoremGuard::default();
    let guard = TheoremGuard {
        max_l: args.max_l.unwrap_or(defaults.max_l),
        max_k: args.max_k.unwrap_or(defaults.max_k),
        node_budget: node_budget()?,
    };
    let report = check_theorem_with(&cnf, &guard)?;
    println!(
        "n={} db={} sortable={} satisfiable={}{}",
        report.n,
        report.db,
        report.sortable,
        report.satisfiable,
        match report.certificate_len {
            Some(len) => format!(" certificate={len}"),
            None => String::new(),
        }
    );
    println!("equivalence holds");
    Ok(0)
}

fn verify_gadgets(args: VerifyGadgetsArgs) -> Result<u8, CliError> {
    let budget = node_budget()?;
    let mut rng = StdRng::seed_from_u64(args.seed);
    let mut all_ok = true;
    for kind in EmbeddingKind::ALL {
        let mut states = 0u64;
        let mut failure: Option<String> = None;
        let mut embeddings = vec![canonical_embedding(kind)];
        embeddings.extend((0..args.contexts).map(|_| randomized_embedding(kind, &mut rng)));
        for embedding in &embeddings {
            match check_embedding(embedding, budget) {
                Ok(check) => {
                    states += check.states_explored;
                    if !check.ok && failure.is_none() {
                        failure = check.failure.clone();
                    }
                }
                Err(e) => {
                    if failure.is_none() {
                        failure = Some(e.to_string());
                    }
                }
            }
        }
        match failure {
            None => println!("{} OK {states}", kind.name()),
            Some(reason) => {
                all_ok = false;
                println!("{} FAIL {reason}", kind.name());
            }
        }
    }
    Ok(if all_ok { 0 } else { 1 })
}

fn diameter_cmd(args: DiameterArgs) -> Result<u8, CliError> {
    let limits = SearchLimits {
        diameter_max_n: args.max_n.unwrap_or(SearchLimits::default().diameter_max_n),
        ..SearchLimits::default()
    };
    let f = diameter_with(args.n, &limits)?;
    println!("f({}) = {f}", args.n);
    Ok(0)
}
