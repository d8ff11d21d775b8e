use std::time::Instant;

use catalytic_core::metrics::{asymmetry, fidelity_report_for, landauer_cost};
use catalytic_core::{
    dirichlet_overlap, reduce_reservoir, reduce_systems, run_protocol, trace_distance, von_neumann_entropy,
    TwoLevelUnitary64,
};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::record::SweepRecord;

/// Slack allowed when checking that a bound column dominates its partner.
pub const BOUND_SLACK: f64 = 1e-9;

/// Computes one sweep point. Everything inside is sequential.
pub fn sweep_point(cfg: &RunConfig, u: &TwoLevelUnitary64, levels: usize, k: usize) -> CliResult<SweepRecord> {
    let start = Instant::now();
    let conv = cfg.shift_convention.into();
    let joint = run_protocol(levels, cfg.l0, cfg.theta, u, k, conv)?;
    let report = fidelity_report_for(&joint, levels, cfg.l0, cfg.theta, u)?;

    let systems = reduce_systems(&joint)?;
    let entropy = von_neumann_entropy(&reduce_reservoir(&joint)?)?;

    let other = run_protocol(levels, cfg.l0, cfg.phi, u, k, conv)?;
    let distance = trace_distance(&systems, &reduce_systems(&other)?)?;
    let overlap = dirichlet_overlap(levels, cfg.phi - cfg.theta)?.norm();

    let record = SweepRecord {
        levels,
        k,
        l0: cfg.l0,
        theta: cfg.theta,
        hermitian_fk: report.hermitian_fk,
        paper_expression_fk: report.paper_expression_fk,
        closed_form_paper: report.closed_form_paper,
        closed_form_hermitian: report.closed_form_hermitian,
        asymmetry_systems: asymmetry(&systems)?,
        asymmetry_bound: (levels as f64).ln(),
        reservoir_entropy_nats: entropy,
        landauer_cost: cfg.energy_spacing * landauer_cost(entropy, cfg.temperature)?,
        trace_distance_actual: distance,
        trace_distance_bound: (1.0 - overlap * overlap).max(0.0).sqrt(),
        runtime_ms: if cfg.compare {
            0.0
        } else {
            start.elapsed().as_secs_f64() * 1e3
        },
    };
    check_record(&record)?;
    Ok(record)
}

pub fn check_record(r: &SweepRecord) -> CliResult<()> {
    let floats = [
        r.theta,
        r.hermitian_fk,
        r.paper_expression_fk,
        r.closed_form_paper.unwrap_or(0.0),
        r.closed_form_hermitian.unwrap_or(0.0),
        r.asymmetry_systems,
        r.asymmetry_bound,
        r.reservoir_entropy_nats,
        r.landauer_cost,
        r.trace_distance_actual,
        r.trace_distance_bound,
        r.runtime_ms,
    ];
    if floats.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Invariant(format!(
            "non-finite value at L = {}, k = {}",
            r.levels, r.k
        )));
    }
    if r.asymmetry_systems > r.asymmetry_bound + BOUND_SLACK {
        return Err(CliError::Invariant(format!(
            "asymmetry {} exceeds ln L = {} at L = {}, k = {}",
            r.asymmetry_systems, r.asymmetry_bound, r.levels, r.k
        )));
    }
    if r.trace_distance_actual > r.trace_distance_bound + BOUND_SLACK {
        return Err(CliError::Invariant(format!(
            "trace distance {} exceeds bound {} at L = {}, k = {}",
            r.trace_distance_actual, r.trace_distance_bound, r.levels, r.k
        )));
    }
    Ok(())
}

/// One record per `(L, k)`, `k = 0..=k_max`, sorted by `L` then `k`
/// whatever the worker count.
pub fn cmd_simulate(cfg: &RunConfig) -> CliResult<Vec<SweepRecord>> {
    let u = cfg.unitary.build()?;
    let grid: Vec<(usize, usize)> = cfg
        .sorted_levels()
        .into_iter()
        .flat_map(|l| (0..=cfg.k_max).map(move |k| (l, k)))
        .collect();
    let mut records = cfg.thread_pool()?.install(|| {
        grid.par_iter()
            .map(|&(l, k)| sweep_point(cfg, &u, l, k))
            .collect::<CliResult<Vec<_>>>()
    })?;
    records.sort_by_key(|r| (r.levels, r.k));
    Ok(records)
}
