use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use mincond::bench::{
    emit_csv, run_experiment, verify_budget, verify_params, verify_small, write_partition,
    AlgorithmParams, BudgetMode, ExperimentConfig,
};
use mincond::{load_edge_list, Graph};

/// Minimum-conductance graph bipartitioning.
#[derive(Parser, Debug)]
#[command(name = "mincond", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one algorithm repeatedly on a graph and write CSV results.
    Solve(Box<SolveArgs>),
    /// Compare every algorithm against exhaustive search (at most 24 vertices).
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("budget").required(true).args(["time_limit", "iterations"]))]
struct SolveArgs {
    /// Edge-list file.
    #[arg(long)]
    input: PathBuf,
    /// Restrict to the largest connected component.
    #[arg(long)]
    lcc: bool,
    /// ls1, als1, arls12, aga-1px, aga-ux or sts-ama.
    #[arg(long)]
    algorithm: String,
    #[arg(long, default_value_t = 1)]
    runs: usize,
    /// Wall-clock limit per run, in seconds.
    #[arg(long, value_name = "SECONDS")]
    time_limit: Option<f64>,
    /// Objective-evaluation limit per run; runs become deterministic.
    #[arg(long, value_name = "K")]
    iterations: Option<u64>,
    /// Base seed; run i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_name = "P")]
    pop_size: Option<usize>,
    #[arg(long, value_name = "T")]
    tournament: Option<usize>,
    /// RLS1,2 iterations per offspring in sts-ama.
    #[arg(long, value_name = "L")]
    ls_length: Option<u64>,
    /// Iterations without improvement before a restart.
    #[arg(long, value_name = "M")]
    stagnation: Option<u64>,
    /// Probability of testing a flip rather than a swap in RLS1,2.
    #[arg(long, value_name = "X")]
    move_mix: Option<f64>,
    /// Lower bound on the adaptive sampling probability (default 2/n).
    #[arg(long)]
    ps_floor: Option<f64>,
    #[arg(long)]
    out_summary: PathBuf,
    #[arg(long)]
    out_runs: PathBuf,
    /// Write the best partition found.
    #[arg(long)]
    out_partition: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    lcc: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn load(path: &Path, lcc: bool) -> Result<Graph> {
    let g = load_edge_list(path).with_context(|| format!("loading {}", path.display()))?;
    Ok(if lcc {
        g.largest_connected_component()
    } else {
        g
    })
}

fn graph_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "graph".to_owned())
}

fn solve(args: SolveArgs) -> Result<ExitCode> {
    let graph = load(&args.input, args.lcc)?;
    let budget = match (args.time_limit, args.iterations) {
        (Some(s), None) => {
            if !(s.is_finite() && s >= 0.0) {
                bail!("--time-limit must be a non-negative number of seconds");
            }
            BudgetMode::Time(Duration::from_secs_f64(s))
        }
        (None, Some(k)) => BudgetMode::Iterations(k),
        _ => bail!("exactly one of --time-limit and --iterations is required"),
    };
    let defaults = AlgorithmParams::default();
    let params = AlgorithmParams {
        population_size: args.pop_size.unwrap_or(defaults.population_size),
        tournament_size: args.tournament.unwrap_or(defaults.tournament_size),
        ls_length: args.ls_length.unwrap_or(defaults.ls_length),
        stagnation_limit: args.stagnation.unwrap_or(defaults.stagnation_limit),
        flip_probability: args.move_mix.unwrap_or(defaults.flip_probability),
        ps_floor: args.ps_floor,
    };
    let mut cfg = ExperimentConfig::new(
        graph_name(&args.input),
        args.algorithm.parse()?,
        args.runs,
        budget,
    );
    cfg.base_seed = args.seed;
    cfg.params = params;

    let (records, summary) = run_experiment(&graph, &cfg)?;
    emit_csv(
        std::slice::from_ref(&summary),
        &records,
        &args.out_summary,
        &args.out_runs,
    )?;
    if let Some(path) = &args.out_partition {
        let best = records
            .iter()
            .min_by_key(|r| r.phi)
            .expect("at least one run");
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        write_partition(BufWriter::new(file), &graph, &best.membership)?;
    }
    if records.iter().any(|r| r.seeding_overran) {
        eprintln!("warning: initial population seeding exceeded the budget in some runs");
    }
    println!(
        "{} {} min {} mean {} success {}/{}",
        summary.graph,
        summary.algorithm,
        summary.min_phi,
        summary.mean_decimal(),
        summary.success,
        summary.runs
    );
    Ok(ExitCode::SUCCESS)
}

fn verify(args: VerifyArgs) -> Result<ExitCode> {
    let graph = load(&args.input, args.lcc)?;
    let report = verify_small(&graph, &verify_params(), &verify_budget(args.seed))?;
    print!("{report}");
    Ok(if report.has_violation() {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let outcome = match cli.command {
        Command::Solve(args) => solve(*args),
        Command::Verify(args) => verify(args),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(1)
    })
}
