use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::NetworkGraph;
use crate::interference::ConflictGraph;

use super::config::SimConfig;
use super::engine::{check_trace, simulate};

/// Mean `sum_i Q_i(T) / T` above which a rate counts as unstable.
pub const STABILITY_THRESHOLD: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SaturationRow {
    pub lambda: f64,
    /// Mean over runs of each run's mean packet delay; `None` if no run
    /// delivered anything.
    pub mean_delay: Option<f64>,
    /// Mean `R(T) / T`.
    pub throughput: f64,
    /// Mean `sum_i Q_i(T) / T`.
    pub backlog_rate: f64,
    pub stable: bool,
}

/// Simulates every `lambda` in the grid `runs` times (seeds `base.seed`,
/// `base.seed + 1`, ...) and summarises each rate. Every trace is checked
/// with [`check_trace`]. Runs execute on the current rayon pool; results do
/// not depend on the pool size.
pub fn measure_saturation(
    g: &NetworkGraph,
    cg: &ConflictGraph,
    base: &SimConfig,
    lambdas: &[f64],
    runs: usize,
    threshold: f64,
) -> Result<Vec<SaturationRow>> {
    let runs = runs.max(1);
    let jobs: Vec<(usize, u64)> = (0..lambdas.len())
        .flat_map(|li| (0..runs as u64).map(move |k| (li, k)))
        .collect();
    let results: Vec<(f64, f64, Option<f64>)> = jobs
        .par_iter()
        .map(|&(li, k)| {
            let cfg = SimConfig {
                lambda: lambdas[li],
                seed: base.seed.wrapping_add(k),
                ..base.clone()
            };
            let trace = simulate(g, cg, &cfg)?;
            check_trace(&trace).map_err(|e| Error::Invariant(format!("lambda {} seed {}: {e}", cfg.lambda, cfg.seed)))?;
            Ok((trace.throughput(), trace.backlog_rate(), trace.mean_delay()))
        })
        .collect::<Result<_>>()?;

    Ok(lambdas
        .iter()
        .zip(results.chunks(runs))
        .map(|(&lambda, chunk)| {
            let throughput = chunk.iter().map(|r| r.0).sum::<f64>() / runs as f64;
            let backlog_rate = chunk.iter().map(|r| r.1).sum::<f64>() / runs as f64;
            let delays: Vec<f64> = chunk.iter().filter_map(|r| r.2).collect();
            let mean_delay = (!delays.is_empty()).then(|| delays.iter().sum::<f64>() / delays.len() as f64);
            SaturationRow {
                lambda,
                mean_delay,
                throughput,
                backlog_rate,
                stable: backlog_rate <= threshold,
            }
        })
        .collect())
}

/// Largest `lambda` such that it and every smaller grid rate are stable.
pub fn saturation_point(rows: &[SaturationRow]) -> Option<f64> {
    rows.iter()
        .take_while(|r| r.stable)
        .last()
        .map(|r| r.lambda)
}

/// `lambda,mean_delay,throughput,stable`; an undefined delay is left empty.
pub fn write_saturation_csv<W: Write>(rows: &[SaturationRow], mut w: W) -> io::Result<()> {
    writeln!(w, "lambda,mean_delay,throughput,stable")?;
    for r in rows {
        let delay = r.mean_delay.map(|d| d.to_string()).unwrap_or_default();
        writeln!(w, "{},{},{},{}", r.lambda, delay, r.throughput, r.stable)?;
    }
    Ok(())
}
