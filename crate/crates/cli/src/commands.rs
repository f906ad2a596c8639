use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, ensure, Context, Result};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use umw_core::capacity::broadcast_capacity_exact;
use umw_core::hardness::{self, Mnae3SatInstance};
use umw_core::sim::{saturation_point, write_saturation_csv, STABILITY_THRESHOLD};
use umw_core::{
    broadcast_capacity, build_conflict_graph, clique_upper_bound, measure_saturation, parse_graph_file, simulate,
    ArrivalProcess, CapacityResult, ConflictGraph, InterferenceModel, NetworkGraph, SimConfig, SolverKind,
};

use crate::{Arrivals, GraphArgs, HardnessArgs, Interference, ReduceArgs, RunArgs, SimulateArgs, Solver, SweepArgs};

fn load(args: &GraphArgs) -> Result<(NetworkGraph, ConflictGraph)> {
    let text = fs::read_to_string(&args.graph).with_context(|| format!("reading {}", args.graph.display()))?;
    let file = parse_graph_file(&text).with_context(|| format!("parsing {}", args.graph.display()))?;
    let cg = match args.interference {
        Interference::None => build_conflict_graph(&file.graph, &InterferenceModel::NoInterference),
        Interference::Primary => build_conflict_graph(&file.graph, &InterferenceModel::PrimaryInterference),
        Interference::Explicit => ConflictGraph::from_pairs(file.graph.node_count(), &file.conflicts)?,
    };
    Ok((file.graph, cg))
}

fn sim_config(run: &RunArgs, lambda: f64) -> Result<SimConfig> {
    let solver = match run.solver {
        Solver::Exact => SolverKind::Exact,
        Solver::Greedy => SolverKind::Greedy,
    };
    let cfg = SimConfig {
        lambda,
        arrival_process: match run.arrivals {
            Arrivals::Bernoulli => ArrivalProcess::BernoulliBatch,
            Arrivals::Poisson => ArrivalProcess::Poisson,
        },
        horizon: run.horizon,
        seed: run.seed,
        p_on: run.p_on,
        route_solver: solver,
        activation_solver: solver,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        ensure!(j >= 1, "--jobs must be at least 1");
        builder = builder.num_threads(j);
    }
    Ok(builder.build()?)
}

#[derive(Serialize)]
struct CapacityReport<'a> {
    #[serde(flatten)]
    result: &'a CapacityResult,
    lambda_star_exact: String,
    certified: bool,
    clique_bound: f64,
}

pub fn cmd_capacity(args: &GraphArgs) -> Result<ExitCode> {
    let (g, cg) = load(args)?;
    let result = broadcast_capacity(&g, &cg)?;
    let exact = broadcast_capacity_exact(&g, &cg)?;
    ensure!(
        (exact.to_f64() - result.lambda_star).abs() <= 1e-9,
        "float and rational solves disagree: {} vs {}",
        result.lambda_star,
        exact.lambda_star
    );
    let report = CapacityReport {
        result: &result,
        lambda_star_exact: exact.lambda_star.to_string(),
        certified: exact.certified(),
        clique_bound: clique_upper_bound(&g, &cg)?,
    };
    writeln!(io::stdout().lock(), "{}", serde_json::to_string_pretty(&report)?)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct SimSummary {
    lambda: f64,
    horizon: u64,
    seed: u64,
    p_on: f64,
    arrivals: u64,
    delivered: u64,
    throughput: f64,
    backlog_rate: f64,
    mean_delay: Option<f64>,
    transmissions: u64,
    wasted_activations: u64,
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<ExitCode> {
    let (g, cg) = load(&args.graph)?;
    let cfg = sim_config(&args.run, args.lambda)?;
    let trace = simulate(&g, &cg, &cfg)?;
    if let Some(path) = &args.out {
        let mut w = output(Some(path))?;
        write_header(&mut w, &cfg, &args.graph)?;
        trace.write_slots_csv(&mut w)?;
        w.flush()?;
    }
    if let Some(path) = &args.packets {
        let mut w = output(Some(path))?;
        write_header(&mut w, &cfg, &args.graph)?;
        trace.write_packets_csv(&mut w)?;
        w.flush()?;
    }
    let last = trace.final_record().expect("horizon >= 1");
    let summary = SimSummary {
        lambda: cfg.lambda,
        horizon: cfg.horizon,
        seed: cfg.seed,
        p_on: cfg.p_on,
        arrivals: last.arrivals,
        delivered: last.delivered,
        throughput: trace.throughput(),
        backlog_rate: trace.backlog_rate(),
        mean_delay: trace.mean_delay(),
        transmissions: trace.transmissions,
        wasted_activations: trace.wasted_activations,
    };
    writeln!(io::stdout().lock(), "{}", serde_json::to_string_pretty(&summary)?)?;
    Ok(ExitCode::SUCCESS)
}

fn write_header(w: &mut dyn Write, cfg: &SimConfig, graph: &GraphArgs) -> io::Result<()> {
    writeln!(w, "# graph {} interference {:?}", graph.graph.display(), graph.interference)?;
    writeln!(
        w,
        "# horizon {} seed {} p_on {} arrivals {:?} route {:?} activation {:?}",
        cfg.horizon, cfg.seed, cfg.p_on, cfg.arrival_process, cfg.route_solver, cfg.activation_solver
    )
}

/// Parses `start:stop:step` into an inclusive grid, rounded to 1e-9 so that
/// values like 0.3 print cleanly.
pub fn parse_lambda_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>().with_context(|| format!("bad number `{p}` in lambda grid")))
        .collect::<Result<_>>()?;
    let [start, stop, step] = parts[..] else {
        bail!("lambda grid must look like start:stop:step, got `{spec}`");
    };
    ensure!(start.is_finite() && stop.is_finite() && step.is_finite(), "lambda grid must be finite");
    ensure!(start >= 0.0 && stop >= start, "lambda grid needs 0 <= start <= stop");
    ensure!(step > 0.0, "lambda grid step must be positive");
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    ensure!(count <= 10_000, "lambda grid has {count} points");
    Ok((0..count)
        .map(|k| ((start + k as f64 * step) * 1e9).round() / 1e9)
        .collect())
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<ExitCode> {
    let (g, cg) = load(&args.graph)?;
    let grid = parse_lambda_grid(&args.lambda_grid)?;
    ensure!(args.runs >= 1, "--runs must be at least 1");
    let base = sim_config(&args.run, 0.0)?;
    let rows = pool(args.jobs)?.install(|| measure_saturation(&g, &cg, &base, &grid, args.runs, STABILITY_THRESHOLD))?;
    let mut w = output(args.out.as_deref())?;
    write_header(&mut w, &base, &args.graph)?;
    writeln!(
        w,
        "# runs {} seeds {}..={} stability threshold {}",
        args.runs,
        base.seed,
        base.seed + args.runs as u64 - 1,
        STABILITY_THRESHOLD
    )?;
    write_saturation_csv(&rows, &mut w)?;
    w.flush()?;
    match saturation_point(&rows) {
        Some(l) => eprintln!("largest stable rate: {l}"),
        None => eprintln!("no stable rate in grid"),
    }
    Ok(ExitCode::SUCCESS)
}

fn read_instance(path: &Path) -> Result<Mnae3SatInstance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Mnae3SatInstance::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn cmd_reduce(args: &ReduceArgs) -> Result<ExitCode> {
    let inst = read_instance(&args.clauses)?;
    let bi = hardness::reduce(&inst);
    let mut w = output(args.out.as_deref())?;
    writeln!(w, "# packets {} horizon {}", bi.packet_count, bi.horizon)?;
    write!(w, "{}", bi.graph.to_file_string())?;
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

pub fn cmd_hardness(args: &HardnessArgs) -> Result<ExitCode> {
    let instances = match (&args.clauses, &args.random) {
        (Some(path), _) => vec![read_instance(path)?],
        (None, Some(r)) => {
            let (n, m, count, seed) = (r[0] as usize, r[1] as usize, r[2], r[3]);
            ensure!(n > 0 || m == 0, "clauses need at least one variable");
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| hardness::random_instance(&mut rng, n, m)).collect()
        }
        (None, None) => bail!("give a clause file or --random"),
    };
    let answers: Vec<(bool, bool)> = pool(args.jobs)?.install(|| {
        instances
            .par_iter()
            .map(|inst| {
                let sat = hardness::decide_mnae3sat(inst)?;
                let bc = hardness::decide_broadcast(&hardness::reduce(inst))?;
                Ok((sat, bc))
            })
            .collect::<umw_core::Result<_>>()
    })?;
    let yn = |b: bool| if b { "yes" } else { "no" };
    let mut out = io::stdout().lock();
    for (k, &(sat, bc)) in answers.iter().enumerate() {
        let verdict = if sat == bc { "match" } else { "MISMATCH" };
        writeln!(out, "instance {k}: sat={} broadcast={} {verdict}", yn(sat), yn(bc))?;
    }
    let matched = answers.iter().filter(|(s, b)| s == b).count();
    writeln!(out, "{matched}/{} match", answers.len())?;
    Ok(if matched == answers.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
