//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bc::{self, BranchRule, Branching, SolveParams};
use crate::bench::{aggregate, format_aggregate, run_bench, write_csv, BenchConfig, Method};
use crate::ggmz::{ggmz, StableSetParams};
use crate::graph::Bipartition;
use crate::grasp::{grasp, GraspParams};
use crate::instances::{generate, grid, read_graph, write_graph, Composition, RandomSpec};
use crate::spanning::TreeStrategy;

#[derive(Parser, Debug)]
#[command(
    name = "mbsp",
    version,
    about = "Maximum balanced subgraph heuristics and exact solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a random instance, or a whole grid of them with --grid.
    Generate(GenerateArgs),
    /// Test an instance for balance; prints the switching set when balanced.
    Check { file: PathBuf },
    /// Run GGMZ or GRASP on one instance.
    Heuristic(HeuristicArgs),
    /// Solve one instance with branch-and-cut.
    Solve(SolveArgs),
    /// Run methods over every `.mbsp` file in a directory.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    group: u8,
    #[arg(long)]
    n: usize,
    #[arg(long, required_unless_present = "grid")]
    d: Option<f64>,
    /// |E-|/|E+| for group 1.
    #[arg(long, conflicts_with = "parallel")]
    ratio: Option<f64>,
    /// Parallel pair fraction for group 2.
    #[arg(long)]
    parallel: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Generate all nine grid points with seeds 1..=COUNT into the --out directory.
    #[arg(long)]
    grid: bool,
    #[arg(long, default_value_t = 3)]
    count: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum HeuristicKind {
    Ggmz,
    Grasp,
}

#[derive(Args, Debug)]
struct HeuristicArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = HeuristicKind::Grasp)]
    method: HeuristicKind,
    #[arg(long, default_value = "bfs")]
    tree: TreeStrategy,
    #[arg(long)]
    seed: Option<u64>,
    /// Seconds.
    #[arg(long, default_value_t = 300.0)]
    time_limit: f64,
    #[arg(long, default_value_t = 100)]
    iterations: usize,
}

#[derive(Args, Debug)]
struct SolveArgs {
    file: PathBuf,
    /// Seconds.
    #[arg(long, default_value_t = 3600.0)]
    time_limit: f64,
    #[arg(long, default_value = "cycle")]
    branching: Branching,
    /// Keep lifted cycle cuts out of cycle branching.
    #[arg(long)]
    no_lifted_branching: bool,
    #[arg(long, default_value_t = 10)]
    max_rounds: usize,
    #[arg(long, default_value_t = 100)]
    max_cuts: usize,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    dir: PathBuf,
    /// Comma-separated methods among ggmz, grasp, bc.
    #[arg(long, value_delimiter = ',', default_value = "bc")]
    method: Vec<String>,
    /// Tree strategy for ggmz, or `all`.
    #[arg(long, default_value = "bfs")]
    tree: String,
    /// cycle, standard, or both.
    #[arg(long, default_value = "cycle")]
    branching: String,
    /// Seconds per instance and method.
    #[arg(long, default_value_t = 3600.0)]
    time_limit: f64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 100)]
    iterations: usize,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Leave the time_s column blank.
    #[arg(long)]
    no_time: bool,
}

fn seed_or_env(seed: Option<u64>) -> Result<u64> {
    if let Some(s) = seed {
        return Ok(s);
    }
    match std::env::var("MBSP_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("MBSP_SEED is not an integer: `{v}`")),
        Err(_) => Ok(0),
    }
}

fn seconds(s: f64) -> Result<Duration> {
    Duration::try_from_secs_f64(s).map_err(|_| anyhow::anyhow!("invalid time limit {s}"))
}

fn one_based(p: &Bipartition) -> (Vec<usize>, Vec<usize>) {
    (
        p.v1().iter().map(|v| v + 1).collect(),
        p.v2().iter().map(|v| v + 1).collect(),
    )
}

/// Parses `argv` (program name first) and runs the command. Returns the
/// process exit code: 2 on usage errors, 1 on failures and unbalanced
/// `check` inputs, 0 otherwise.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

fn execute(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Generate(a) => generate_cmd(a),
        Command::Check { file } => {
            let g = read_graph(&file).with_context(|| format!("reading {}", file.display()))?;
            match g.is_balanced() {
                Some(w) => {
                    let members: Vec<String> =
                        w.members().iter().map(|v| (v + 1).to_string()).collect();
                    println!("balanced");
                    println!("W {}", members.join(" "));
                    Ok(0)
                }
                None => {
                    println!("unbalanced");
                    Ok(1)
                }
            }
        }
        Command::Heuristic(a) => heuristic_cmd(a),
        Command::Solve(a) => solve_cmd(a),
        Command::Bench(a) => bench_cmd(a),
    }
}

fn composition(group: u8, ratio: Option<f64>, parallel: Option<f64>) -> Result<Composition> {
    match (group, ratio, parallel) {
        (1, Some(r), None) => Ok(Composition::NegRatio(r)),
        (2, None, Some(p)) => Ok(Composition::ParallelFrac(p)),
        (1, _, _) => bail!("group 1 needs --ratio"),
        _ => bail!("group 2 needs --parallel"),
    }
}

fn generate_cmd(a: GenerateArgs) -> Result<i32> {
    let seed = seed_or_env(a.seed)?;
    if a.grid {
        fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
        for spec in grid(a.group, a.n, a.count) {
            let spec = RandomSpec {
                seed: spec.seed + seed,
                ..spec
            };
            let g = generate(&spec)?;
            write_graph(&g, a.out.join(format!("{}.mbsp", spec.name())))?;
        }
        return Ok(0);
    }
    let spec = RandomSpec {
        n: a.n,
        density: a.d.expect("required without --grid"),
        composition: composition(a.group, a.ratio, a.parallel)?,
        seed,
    };
    let g = generate(&spec)?;
    write_graph(&g, &a.out).with_context(|| format!("writing {}", a.out.display()))?;
    Ok(0)
}

fn heuristic_cmd(a: HeuristicArgs) -> Result<i32> {
    let g = read_graph(&a.file).with_context(|| format!("reading {}", a.file.display()))?;
    let seed = seed_or_env(a.seed)?;
    let time_limit = seconds(a.time_limit)?;
    let start = Instant::now();
    let (label, p) = match a.method {
        HeuristicKind::Ggmz => {
            let params = StableSetParams {
                time_limit,
                seed,
                ..StableSetParams::default()
            };
            (Method::Ggmz(a.tree).to_string(), ggmz(&g, a.tree, &params))
        }
        HeuristicKind::Grasp => {
            let params = GraspParams {
                max_iterations: a.iterations,
                time_limit,
                seed,
            };
            (Method::Grasp.to_string(), grasp(&g, &params))
        }
    };
    let elapsed = start.elapsed().as_secs_f64();
    let (v1, v2) = one_based(&p);
    let out = json!({ "method": label, "size": p.len(), "v1": v1, "v2": v2, "time_s": elapsed });
    println!("{out}");
    Ok(0)
}

fn solve_cmd(a: SolveArgs) -> Result<i32> {
    let g = read_graph(&a.file).with_context(|| format!("reading {}", a.file.display()))?;
    let params = SolveParams {
        time_limit: seconds(a.time_limit)?,
        max_cut_rounds: a.max_rounds,
        max_cuts_per_round: a.max_cuts,
        branching: BranchRule {
            mode: a.branching,
            lifted_cycles: !a.no_lifted_branching,
        },
        seed: seed_or_env(a.seed)?,
        collect_cuts: false,
    };
    let r = bc::solve(&g, &params).context("branch-and-cut failed")?;
    let cuts: serde_json::Map<String, serde_json::Value> = r
        .stats
        .cuts_by_kind
        .iter()
        .map(|(k, v)| (k.name().to_string(), json!(v)))
        .collect();
    let (v1, v2) = one_based(&r.best);
    let out = json!({
        "status": r.status.token(),
        "lb": r.lower_bound,
        "ub": r.upper_bound,
        "gap_pct": r.gap_pct(),
        "nodes": r.stats.nodes,
        "time_s": r.stats.wall_time.as_secs_f64(),
        "cuts": cuts,
        "v1": v1,
        "v2": v2,
    });
    println!("{out}");
    Ok(0)
}

fn parse_methods(a: &BenchArgs) -> Result<Vec<Method>> {
    let trees: Vec<TreeStrategy> = if a.tree == "all" {
        TreeStrategy::ALL.to_vec()
    } else {
        vec![a.tree.parse().map_err(|e: String| anyhow::anyhow!(e))?]
    };
    let modes: Vec<Branching> = if a.branching == "both" {
        vec![Branching::Cycle, Branching::Standard]
    } else {
        vec![a
            .branching
            .parse()
            .map_err(|e: String| anyhow::anyhow!(e))?]
    };
    let mut methods = Vec::new();
    for m in &a.method {
        match m.as_str() {
            "ggmz" => methods.extend(trees.iter().map(|&t| Method::Ggmz(t))),
            "grasp" => methods.push(Method::Grasp),
            "bc" => methods.extend(modes.iter().map(|&b| Method::Bc(b))),
            other => bail!("unknown method `{other}` (expected ggmz, grasp or bc)"),
        }
    }
    Ok(methods)
}

/// `.mbsp` files of `dir`, sorted by name.
fn instance_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("listing {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "mbsp"))
        .collect();
    files.sort();
    Ok(files)
}

fn bench_cmd(a: BenchArgs) -> Result<i32> {
    let methods = parse_methods(&a)?;
    let mut instances = Vec::new();
    for path in instance_files(&a.dir)? {
        let g = read_graph(&path).with_context(|| format!("reading {}", path.display()))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        instances.push((name, g));
    }
    let cfg = BenchConfig {
        methods,
        time_limit: seconds(a.time_limit)?,
        seed: seed_or_env(a.seed)?,
        grasp_iterations: a.iterations,
        workers: a.workers,
        record_time: !a.no_time,
    };
    let rows = run_bench(&instances, &cfg);
    match &a.out {
        Some(path) => {
            let file =
                fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_csv(&rows, file)?;
            print!("{}", format_aggregate(&aggregate(&rows)));
        }
        None => {
            let stdout = std::io::stdout();
            write_csv(&rows, stdout.lock())?;
            println!();
            print!("{}", format_aggregate(&aggregate(&rows)));
        }
    }
    std::io::stdout().flush()?;
    Ok(0)
}
