use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sparse_atsp::branching::branching_bound;
use sparse_atsp::cycle_cover::bregman_bound;
use sparse_atsp::graph::{degree_profile, parse_instance, serialize_instance};
use sparse_atsp::portfolio::{
    compute_crossovers, generate_instance, run_bench, run_solver, select_algorithm, BenchAlgo,
    BenchConfig, InstanceClass, Mode, Report, RunOptions, SolverChoice, Task,
};
use sparse_atsp::reductions::{atsp_to_bfm, bfm_to_tsp, totdeg3_to_22};
use sparse_atsp::{Error, WeightedDigraph};

const EXIT_NEGATIVE: u8 = 3;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 4;

#[derive(Parser)]
#[command(name = "sparse-atsp", version, about = "Exact ATSP and Hamiltonicity for sparse digraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a minimum-weight tour.
    Solve(SolveArgs),
    /// Decide whether a Hamiltonian cycle exists.
    Decide(SolveArgs),
    /// Write a generated instance.
    Gen(GenArgs),
    /// Run a solver sweep and emit CSV.
    Bench(BenchArgs),
    /// Print a reduced form of an instance.
    Reduce(ReduceArgs),
    /// Print degree statistics and solver bounds of an instance.
    Stats(StatsArgs),
    /// Print the runtime-base crossover table.
    Crossovers,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    /// auto, held-karp, brute, enumcc, branch, mim or algebraic.
    #[arg(long, default_value = "auto")]
    algo: SolverChoice,
    /// atsp-polyspace, atsp-expspace, ham-polyspace or ham-expspace.
    #[arg(long)]
    mode: Option<Mode>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
    /// Abort the meet-in-the-middle solver above this many dictionary entries.
    #[arg(long)]
    memory_cap: Option<usize>,
    /// Independent repetitions of the algebraic test.
    #[arg(long, default_value_t = 1)]
    trials: usize,
}

#[derive(Args)]
struct GenArgs {
    /// random, 22, totdeg3 or planted.
    #[arg(long, default_value = "random")]
    class: InstanceClass,
    #[arg(long)]
    n: usize,
    /// Target average outdegree; ignored by 22 and totdeg3.
    #[arg(long, default_value_t = 2.5)]
    d: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchSolver {
    HeldKarp,
    Branch,
    Enumcc,
    Mim,
}

impl From<BenchSolver> for BenchAlgo {
    fn from(s: BenchSolver) -> Self {
        match s {
            BenchSolver::HeldKarp => BenchAlgo::HeldKarp,
            BenchSolver::Branch => BenchAlgo::Branch,
            BenchSolver::Enumcc => BenchAlgo::Enumcc,
            BenchSolver::Mim => BenchAlgo::Mim,
        }
    }
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "random,22,totdeg3,planted")]
    classes: Vec<InstanceClass>,
    #[arg(long, value_delimiter = ',', default_value = "6,8,10")]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    degrees: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    seeds: Vec<u64>,
    #[arg(long, value_delimiter = ',', value_enum, default_value = "held-karp,branch,enumcc,mim")]
    algos: Vec<BenchSolver>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Bfm,
    Tsp,
    #[value(name = "22")]
    TwoTwo,
}

#[derive(Args)]
struct ReduceArgs {
    instance: PathBuf,
    #[arg(long, value_enum)]
    to: Target,
}

#[derive(Args)]
struct StatsArgs {
    instance: PathBuf,
    #[arg(long)]
    json: bool,
}

fn read_instance(path: &Path) -> anyhow::Result<WeightedDigraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_output(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().write_all(text.as_bytes()).context("writing to stdout"),
    }
}

fn print_report(report: &Report, json: bool) -> anyhow::Result<()> {
    if json {
        println!("{}", serde_json::to_string(report)?);
        return Ok(());
    }
    println!("status: {}", report.status);
    println!("algorithm: {}", report.algorithm);
    if let Some(w) = report.weight {
        println!("weight: {w}");
    }
    if let Some(tour) = &report.tour {
        let ids: Vec<String> = tour.iter().map(ToString::to_string).collect();
        println!("tour: {}", ids.join(" "));
    }
    if let Some(nodes) = report.branch_nodes {
        println!("branch nodes: {nodes}");
    }
    if let Some(entries) = report.dict_entries {
        println!("dictionary entries: {entries}");
    }
    println!("elapsed: {:.3} ms", report.elapsed_ms);
    Ok(())
}

fn solve(args: &SolveArgs, task: Task) -> anyhow::Result<ExitCode> {
    let g = read_instance(&args.instance)?;
    let mode = args.mode.unwrap_or(match task {
        Task::Optimize => Mode::AtspPolyspace,
        Task::Decide => Mode::HamPolyspace,
    });
    let options = RunOptions { seed: args.seed, memory_cap: args.memory_cap, trials: args.trials };
    let report = run_solver(&g, args.algo, mode, task, &options)?;
    print_report(&report, args.json)?;
    Ok(if report.is_positive() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_NEGATIVE) })
}

fn stats(args: &StatsArgs) -> anyhow::Result<()> {
    let g = read_instance(&args.instance)?;
    let profile = degree_profile(&g);
    let selection: Vec<(String, String)> = Mode::ALL
        .iter()
        .map(|&m| (m.name().to_string(), select_algorithm(&g, m).name().to_string()))
        .collect();
    if args.json {
        let value = serde_json::json!({
            "n": g.vertex_count(),
            "m": g.edge_count(),
            "d": profile.d_avg_f64(),
            "outdegree_counts": profile.t,
            "s_out": profile.s_out,
            "s_in": profile.s_in,
            "min_interface": g.min_interface_size(),
            "branching_bound": branching_bound(&g),
            "cycle_cover_bound": bregman_bound(&g),
            "selection": selection
                .into_iter()
                .map(|(mode, algo)| (mode, serde_json::Value::String(algo)))
                .collect::<serde_json::Map<_, _>>(),
        });
        println!("{value}");
        return Ok(());
    }
    println!("n: {}", g.vertex_count());
    println!("m: {}", g.edge_count());
    println!("average outdegree: {:.4}", profile.d_avg_f64());
    println!("outdegree counts: {:?}", profile.t);
    println!("out surplus: {}", profile.s_out);
    println!("in surplus: {}", profile.s_in);
    println!("smallest interface: {}", g.min_interface_size());
    println!("branching bound: {:.3}", branching_bound(&g));
    println!("cycle cover bound: {:.3}", bregman_bound(&g));
    for (mode, algo) in selection {
        println!("{mode}: {algo}");
    }
    Ok(())
}

fn reduce(args: &ReduceArgs) -> anyhow::Result<()> {
    let g = read_instance(&args.instance)?;
    let text = match args.to {
        Target::Bfm => atsp_to_bfm(&g).to_string(),
        Target::Tsp => bfm_to_tsp(&atsp_to_bfm(&g)).to_string(),
        Target::TwoTwo => {
            let reduced = totdeg3_to_22(&g)?;
            format!("c forced weight {}\n{}", reduced.forced_weight, serialize_instance(&reduced.graph))
        }
    };
    print!("{text}");
    Ok(())
}

fn bench(args: &BenchArgs) -> anyhow::Result<()> {
    if args.sizes.iter().any(|&n| n < 3) {
        bail!("bench sizes must be at least 3");
    }
    let config = BenchConfig {
        classes: args.classes.clone(),
        sizes: args.sizes.clone(),
        degrees: args.degrees.clone(),
        seeds: args.seeds.clone(),
        algorithms: args.algos.iter().map(|&a| a.into()).collect(),
    };
    match &args.output {
        Some(path) => {
            let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            run_bench(&config, file)?;
        }
        None => {
            run_bench(&config, io::stdout().lock())?;
        }
    }
    Ok(())
}

fn crossovers() {
    println!("{:<10} {:<16} {:>10} {:>10}", "below", "above", "computed", "configured");
    for c in compute_crossovers() {
        println!(
            "{:<10} {:<16} {:>10.4} {:>10.3}",
            c.faster_below.name(),
            c.faster_above.name(),
            c.at,
            c.configured
        );
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Solve(args) => return solve(&args, Task::Optimize),
        Command::Decide(args) => return solve(&args, Task::Decide),
        Command::Gen(args) => {
            let g = generate_instance(args.class, args.n, args.d, args.seed)?;
            write_output(args.output.as_deref(), &serialize_instance(&g))?;
        }
        Command::Bench(args) => bench(&args)?,
        Command::Reduce(args) => reduce(&args)?,
        Command::Stats(args) => stats(&args)?,
        Command::Crossovers => crossovers(),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            match err.downcast_ref::<Error>() {
                Some(Error::TooLarge { .. } | Error::MemoryBudgetExceeded { .. }) => {
                    ExitCode::from(EXIT_RESOURCE)
                }
                _ => ExitCode::from(EXIT_USAGE),
            }
        }
    }
}
