use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "umw", version, about = "Broadcast capacity, UMW simulation and hardness checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the broadcast capacity LP solution and clique bound as JSON.
    Capacity(GraphArgs),
    /// Run one simulation and print a JSON summary.
    Simulate(SimulateArgs),
    /// Sweep arrival rates and write the saturation table as CSV.
    Sweep(SweepArgs),
    /// Reduce an MNAE-3SAT clause file to a broadcast instance.
    Reduce(ReduceArgs),
    /// Check MNAE-3SAT against the broadcast reduction.
    Hardness(HardnessArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Interference {
    None,
    Primary,
    Explicit,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Solver {
    Exact,
    Greedy,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Arrivals {
    Bernoulli,
    Poisson,
}

#[derive(Args, Debug)]
struct GraphArgs {
    /// Graph description file.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value = "primary")]
    interference: Interference,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Slots per run.
    #[arg(long, default_value_t = 100_000)]
    horizon: u64,
    /// Seed of the first run; run k uses seed + k.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Per-slot availability probability of each node.
    #[arg(long = "p-on", default_value_t = 1.0)]
    p_on: f64,
    #[arg(long, value_enum, default_value = "exact")]
    solver: Solver,
    #[arg(long, value_enum, default_value = "bernoulli")]
    arrivals: Arrivals,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long)]
    lambda: f64,
    /// Per-slot trace CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-packet delay CSV.
    #[arg(long)]
    packets: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Rates as `start:stop:step`, inclusive of `stop`.
    #[arg(long = "lambda-grid")]
    lambda_grid: String,
    #[arg(long, default_value_t = 3)]
    runs: usize,
    /// Worker threads (defaults to all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Saturation CSV; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReduceArgs {
    /// Clause file (`p mnae3 <n> <m>` header, 1-based variables).
    clauses: PathBuf,
    /// Graph file to write; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["clauses", "random"]))]
struct HardnessArgs {
    clauses: Option<PathBuf>,
    /// Random batch: variables, clauses, instance count, seed.
    #[arg(long, num_args = 4, value_names = ["N", "M", "COUNT", "SEED"])]
    random: Option<Vec<u64>>,
    #[arg(long)]
    jobs: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Capacity(a) => commands::cmd_capacity(&a),
        Command::Simulate(a) => commands::cmd_simulate(&a),
        Command::Sweep(a) => commands::cmd_sweep(&a),
        Command::Reduce(a) => commands::cmd_reduce(&a),
        Command::Hardness(a) => commands::cmd_hardness(&a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
