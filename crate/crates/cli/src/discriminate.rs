use catalytic_core::metrics::helstrom_error;
use catalytic_core::{
    collective_overlap_magnitude, crossover_k, dirichlet_overlap, reduce_systems, run_protocol, trace_distance,
};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::record::DiscriminationRecord;
use crate::simulate::BOUND_SLACK;

/// Compares how well `θ` and `φ` can be told apart from `k` ideal target
/// copies, from the reservoir itself, and from the `k` systems the reservoir
/// actually prepared. One row per `(L, k)`.
pub fn cmd_discriminate(cfg: &RunConfig) -> CliResult<Vec<DiscriminationRecord>> {
    let delta = cfg.phi - cfg.theta;
    if (delta / 2.0).sin().abs() < 1e-15 {
        return Err(CliError::Config("theta and phi coincide modulo 2π".into()));
    }
    let u = cfg.unitary.build()?;
    let conv = cfg.shift_convention.into();
    let grid: Vec<(usize, usize)> = cfg
        .sorted_levels()
        .into_iter()
        .flat_map(|l| (0..=cfg.k_max).map(move |k| (l, k)))
        .collect();

    let mut rows = cfg.thread_pool()?.install(|| {
        grid.par_iter()
            .map(|&(levels, k)| -> CliResult<DiscriminationRecord> {
                let naive = collective_overlap_magnitude(cfg.theta, cfg.phi, k as u32);
                let reservoir = dirichlet_overlap(levels, delta)?.norm();
                let a = reduce_systems(&run_protocol(levels, cfg.l0, cfg.theta, &u, k, conv)?)?;
                let b = reduce_systems(&run_protocol(levels, cfg.l0, cfg.phi, &u, k, conv)?)?;
                let row = DiscriminationRecord {
                    levels,
                    k,
                    theta: cfg.theta,
                    phi: cfg.phi,
                    naive_overlap: naive,
                    reservoir_overlap: reservoir,
                    crossover_k: crossover_k(levels, delta)?,
                    helstrom_error_naive: helstrom_error(naive)?,
                    helstrom_error_reservoir: helstrom_error(reservoir.min(1.0))?,
                    trace_distance_actual: trace_distance(&a, &b)?,
                    trace_distance_bound: (1.0 - reservoir * reservoir).max(0.0).sqrt(),
                };
                if row.trace_distance_actual > row.trace_distance_bound + BOUND_SLACK {
                    return Err(CliError::Invariant(format!(
                        "trace distance {} exceeds reservoir bound {} at L = {levels}, k = {k}",
                        row.trace_distance_actual, row.trace_distance_bound
                    )));
                }
                Ok(row)
            })
            .collect::<CliResult<Vec<_>>>()
    })?;
    rows.sort_by_key(|r| (r.levels, r.k));
    Ok(rows)
}
