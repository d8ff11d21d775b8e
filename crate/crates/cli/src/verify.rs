//! Verification suites.
//!
//! The fixed acceptance checks (C1 to C8) run on hard-coded grids; the sweep
//! checks (S*) run on the grid described by the configuration. A check is
//! `Flagged` rather than failed when some of its points fall outside the
//! validity domain of a closed form, or when it does not apply to the
//! configured unitary.

use std::f64::consts::FRAC_PI_3;
use std::fmt::Write as _;
use std::time::Instant;

use catalytic_core::metrics::{
    asymmetry, closed_form_hermitian, collective_fidelity, landauer_cost, paper_fidelity_expression,
};
use catalytic_core::systems::popcount_labels;
use catalytic_core::{
    collective_overlap_magnitude, crossover_k, dirichlet_overlap, reduce_reservoir, reduce_systems, run_protocol,
    trace_distance, von_neumann_entropy, DensityMatrix64, JointState64, LadderState64, QubitState64, ShiftConvention,
    ShiftDirection, TwoLevelUnitary64,
};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::record::{self, SweepRecord};
use crate::simulate::cmd_simulate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Flagged,
    Fail,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Flagged => "FLAG",
            Status::Fail => "FAIL",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: String,
    pub name: String,
    pub status: Status,
    /// Worst measured value of the checked quantity (a deviation, an excess
    /// over a bound, or a minimum increment, depending on the check).
    pub worst: f64,
    pub tolerance: f64,
    pub runtime_ms: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let _ = writeln!(
                s,
                "[{}] {:<4} {:<48} worst {:>12.3e}  tol {:>8.1e}  {:>8.1} ms  {}",
                c.status.label(),
                c.id,
                c.name,
                c.worst,
                c.tolerance,
                c.runtime_ms,
                c.detail
            );
        }
        let failed = self.checks.iter().filter(|c| c.status == Status::Fail).count();
        let flagged = self.checks.iter().filter(|c| c.status == Status::Flagged).count();
        let _ = writeln!(
            s,
            "{} checks, {} failed, {} flagged: {}",
            self.checks.len(),
            failed,
            flagged,
            if failed == 0 { "OK" } else { "FAILED" }
        );
        s
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    /// Negative control: checks the mirrored engine against the expansion
    /// for the standard one, which must fail.
    pub inject_fault: bool,
}

/// What a check body reports back.
struct Outcome {
    worst: f64,
    ok: bool,
    flagged: bool,
    detail: String,
}

impl Outcome {
    fn new(worst: f64, ok: bool, detail: impl Into<String>) -> Self {
        Outcome {
            worst,
            ok,
            flagged: false,
            detail: detail.into(),
        }
    }
}

fn run_check(
    id: &str,
    name: &str,
    tolerance: f64,
    limit_ms: Option<f64>,
    body: impl FnOnce() -> CliResult<Outcome>,
) -> Check {
    let start = Instant::now();
    let result = body();
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    let (status, worst, mut detail) = match result {
        Ok(o) if !o.ok => (Status::Fail, o.worst, o.detail),
        Ok(o) if o.flagged => (Status::Flagged, o.worst, o.detail),
        Ok(o) => (Status::Pass, o.worst, o.detail),
        Err(e) => (Status::Fail, f64::NAN, e.to_string()),
    };
    let mut status = status;
    if let Some(limit) = limit_ms {
        if runtime_ms > limit {
            status = Status::Fail;
            let _ = write!(detail, "; runtime above {limit} ms");
        }
    }
    Check {
        id: id.into(),
        name: name.into(),
        status,
        worst,
        tolerance,
        runtime_ms,
        detail,
    }
}

/// Largest value seen so far and where.
struct Worst {
    value: f64,
    at: String,
}

impl Worst {
    fn new() -> Self {
        Worst {
            value: f64::NEG_INFINITY,
            at: String::new(),
        }
    }

    fn update(&mut self, value: f64, at: impl FnOnce() -> String) {
        if value > self.value || value.is_nan() {
            self.value = value;
            self.at = at();
        }
    }

    fn finish(&self, tolerance: f64) -> Outcome {
        let value = if self.value == f64::NEG_INFINITY {
            0.0
        } else {
            self.value
        };
        Outcome::new(value, value <= tolerance, format!("worst at {}", self.at))
    }
}

fn hadamard() -> TwoLevelUnitary64 {
    TwoLevelUnitary64::hadamard()
}

fn standard_run(levels: usize, theta: f64, k: usize) -> CliResult<JointState64> {
    Ok(run_protocol(
        levels,
        0,
        theta,
        &hadamard(),
        k,
        ShiftConvention::Standard,
    )?)
}

fn binary_entropy(p: f64) -> f64 {
    -p * p.ln() - (1.0 - p) * (1.0 - p).ln()
}

pub fn reservoir_asymmetry() -> Check {
    run_check("C1", "reservoir asymmetry equals ln L", 1e-12, Some(1000.0), || {
        let mut worst = Worst::new();
        for levels in [2usize, 8, 64, 256] {
            for l0 in [-3i64, 0, 7] {
                for theta in [0.0, 1.1] {
                    let eta = LadderState64::reservoir(levels, l0, theta)?;
                    let labels = (l0..l0 + levels as i64).collect();
                    let rho = DensityMatrix64::pure(eta.amplitudes(), Some(labels))?;
                    let dev = (asymmetry(&rho)? - (levels as f64).ln()).abs();
                    worst.update(dev, || format!("L={levels} l0={l0} theta={theta}"));
                }
            }
        }
        Ok(worst.finish(1e-12))
    })
}

pub fn paper_expression_linear() -> Check {
    run_check(
        "C2",
        "trace expression equals 1 - k/L for 2k <= L",
        1e-12,
        Some(1000.0),
        || {
            let mut worst = Worst::new();
            for levels in [16usize, 64, 256] {
                for k in (1..=8).filter(|k| 2 * k <= levels) {
                    for l0 in [-3i64, 0, 7] {
                        let p: f64 = paper_fidelity_expression(levels, l0, k)?;
                        let dev = (p - (1.0 - k as f64 / levels as f64)).abs();
                        worst.update(dev, || format!("L={levels} k={k} l0={l0}"));
                    }
                }
            }
            Ok(worst.finish(1e-12))
        },
    )
}

const ORACLE_LEVELS: [usize; 3] = [8, 32, 128];

pub fn hermitian_oracle() -> Check {
    run_check(
        "C3",
        "simulated fidelity matches binomial oracle",
        1e-10,
        Some(30_000.0),
        || {
            let mut worst = Worst::new();
            let mut below_linear = Worst::new();
            let mut above_linear = Worst::new();
            for levels in ORACLE_LEVELS {
                for k in 1..=6 {
                    let f = collective_fidelity(&standard_run(levels, 0.0, k)?, 0.0);
                    let oracle: f64 = closed_form_hermitian(k, levels)?;
                    let linear = 1.0 - k as f64 / levels as f64;
                    worst.update((f - oracle).abs(), || format!("L={levels} k={k}"));
                    below_linear.update(linear - f, || format!("L={levels} k={k}"));
                    above_linear.update(f - linear, || format!("L={levels} k={k}"));
                }
            }
            let mut out = worst.finish(1e-10);
            out.ok &= below_linear.value <= 0.0;
            out.detail = format!(
                "{}; largest excess over 1-k/L {:.6e} at {}",
                out.detail, above_linear.value, above_linear.at
            );
            Ok(out)
        },
    )
}

pub fn asymmetry_bound() -> Check {
    run_check("C4", "system asymmetry at most ln L", 1e-9, None, || {
        let mut worst = Worst::new();
        for levels in ORACLE_LEVELS {
            for k in 1..=6 {
                let rho = reduce_systems(&standard_run(levels, 0.0, k)?)?;
                let excess = asymmetry(&rho)? - (levels as f64).ln();
                worst.update(excess, || format!("L={levels} k={k}"));
            }
        }
        Ok(worst.finish(1e-9))
    })
}

pub fn group_invariance() -> Check {
    run_check("C5", "group phase commutes with the dilation", 1e-12, None, || {
        let mut worst = Worst::new();
        let u = hadamard();
        let reservoir = LadderState64::reservoir(32, 0, 0.0)?;
        for phi in [0.3, 1.0, 2.9] {
            for k in 1..=4 {
                let mut joint = JointState64::new(&reservoir, k, ShiftConvention::Standard);
                for _ in 1..k {
                    joint = joint.attach_and_interact(&u)?;
                }
                let before = joint.apply_group_phase(phi).attach_and_interact(&u)?;
                let after = joint.attach_and_interact(&u)?.apply_group_phase(phi);
                let dev = before
                    .amplitudes()
                    .iter()
                    .zip(after.amplitudes())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                worst.update(dev, || format!("phi={phi} k={k}"));
            }
        }
        Ok(worst.finish(1e-12))
    })
}

pub fn reservoir_entropy() -> Check {
    run_check("C6", "reservoir entropy and Landauer cost", 1e-10, None, || {
        let mut worst = Worst::new();
        let mut ok = true;
        let mut notes = Vec::new();
        for levels in [2usize, 8, 64] {
            for k in 1..=6 {
                let s = von_neumann_entropy(&reduce_reservoir(&standard_run(levels, 0.0, k)?)?)?;
                if k == 1 {
                    let h = binary_entropy(1.0 / (2.0 * levels as f64));
                    worst.update((s - h).abs(), || format!("L={levels}"));
                }
                if s <= 0.0 {
                    ok = false;
                    notes.push(format!("S = {s} at L={levels} k={k}"));
                }
                if landauer_cost(s, 1.0)? != s {
                    ok = false;
                    notes.push(format!("cost differs from S at L={levels} k={k}"));
                }
            }
        }
        let mut out = worst.finish(1e-10);
        out.ok &= ok;
        if !notes.is_empty() {
            out.detail = format!("{}; {}", out.detail, notes.join("; "));
        }
        Ok(out)
    })
}

pub fn no_superdiscrimination() -> Check {
    run_check(
        "C7",
        "system trace distance within reservoir bound",
        1e-10,
        None,
        || {
            let (levels, delta) = (64usize, FRAC_PI_3);
            let overlap = dirichlet_overlap(levels, delta)?.norm();
            let bound = (1.0 - overlap * overlap).max(0.0).sqrt();
            let mut worst = Worst::new();
            for k in 0..=6 {
                let a = reduce_systems(&standard_run(levels, 0.0, k)?)?;
                let b = reduce_systems(&standard_run(levels, delta, k)?)?;
                worst.update(trace_distance(&a, &b)? - bound, || format!("k={k}"));
            }
            let mut out = worst.finish(1e-10);
            match crossover_k(levels, delta)? {
                Some(c) => {
                    let at = collective_overlap_magnitude(0.0, delta, c as u32);
                    let before = collective_overlap_magnitude(0.0, delta, c as u32 - 1);
                    out.ok &= at < overlap && before >= overlap;
                    out.detail = format!(
                        "{}; crossover k = {c} (|cos|^k = {at:.6e} < |D| = {overlap:.6e})",
                        out.detail
                    );
                }
                None => {
                    out.ok = false;
                    out.detail = format!("{}; no crossover found", out.detail);
                }
            }
            Ok(out)
        },
    )
}

pub fn target_asymmetry_grows(theta: f64) -> Check {
    run_check("C8", "asymmetry of k target copies increases", 0.0, None, || {
        let mut previous = 0.0;
        let mut smallest_step = f64::INFINITY;
        let mut at = 0;
        for k in 1..=10 {
            let amps = QubitState64::target(theta).tensor_power(k);
            let a = asymmetry(&DensityMatrix64::pure(&amps, Some(popcount_labels(k)))?)?;
            if a - previous < smallest_step {
                smallest_step = a - previous;
                at = k;
            }
            previous = a;
        }
        Ok(Outcome::new(
            smallest_step,
            smallest_step > 0.0,
            format!("smallest increment at k={at}; A(k=10) = {previous:.6}"),
        ))
    })
}

/// Acceptance checks C1 to C8.
pub fn acceptance_checks(theta: f64) -> Vec<Check> {
    vec![
        reservoir_asymmetry(),
        paper_expression_linear(),
        hermitian_oracle(),
        asymmetry_bound(),
        group_invariance(),
        reservoir_entropy(),
        no_superdiscrimination(),
        target_asymmetry_grows(theta),
    ]
}

fn flag_domain(out: &mut Outcome, skipped: usize, what: &str) {
    if skipped > 0 {
        out.flagged = true;
        out.detail = format!("{}; {skipped} points outside {what} flagged", out.detail);
    }
}

fn not_applicable(reason: &str) -> Outcome {
    Outcome {
        worst: 0.0,
        ok: true,
        flagged: true,
        detail: reason.into(),
    }
}

fn at(r: &SweepRecord) -> String {
    format!("L={} k={}", r.levels, r.k)
}

/// Checks over the configured sweep.
pub fn sweep_checks(cfg: &RunConfig, opts: VerifyOptions) -> Vec<Check> {
    let mut checks = Vec::new();
    let start = Instant::now();
    let records = cmd_simulate(cfg);
    let sweep_ms = start.elapsed().as_secs_f64() * 1e3;
    let records = match records {
        Ok(r) => r,
        Err(e) => {
            checks.push(run_check("S0", "sweep records", 0.0, None, || Err(e)));
            return checks;
        }
    };
    checks.push(run_check(
        "S0",
        "sweep records finite and within bounds",
        0.0,
        None,
        || {
            Ok(Outcome::new(
                0.0,
                true,
                format!("{} records in {sweep_ms:.1} ms", records.len()),
            ))
        },
    ));
    let targeted = cfg.unitary.prepares_target();
    let not_target = "unitary does not prepare the target state; not applicable";

    checks.push(run_check("S1", "trace expression equals 1 - k/L", 1e-12, None, || {
        let mut worst = Worst::new();
        let mut skipped = 0;
        for r in &records {
            if 2 * r.k > r.levels {
                skipped += 1;
                continue;
            }
            let linear = 1.0 - r.k as f64 / r.levels as f64;
            worst.update((r.paper_expression_fk - linear).abs(), || at(r));
        }
        let mut out = worst.finish(1e-12);
        flag_domain(&mut out, skipped, "2k <= L");
        Ok(out)
    }));

    checks.push(run_check(
        "S2",
        "simulated fidelity matches binomial oracle",
        1e-10,
        None,
        || {
            if !targeted {
                return Ok(not_applicable(not_target));
            }
            let mut worst = Worst::new();
            let mut skipped = 0;
            for r in &records {
                match r.closed_form_hermitian {
                    Some(c) => worst.update((r.hermitian_fk - c).abs(), || at(r)),
                    None => skipped += 1,
                }
            }
            let mut out = worst.finish(1e-10);
            flag_domain(&mut out, skipped, "k <= L");
            Ok(out)
        },
    ));

    checks.push(run_check(
        "S3",
        "Hermitian closed form dominates linear law",
        0.0,
        None,
        || {
            let mut worst = Worst::new();
            let mut skipped = 0;
            for r in &records {
                match (r.closed_form_hermitian, r.closed_form_paper) {
                    (Some(h), Some(p)) => worst.update(p - h, || at(r)),
                    _ => skipped += 1,
                }
            }
            let mut out = worst.finish(0.0);
            flag_domain(&mut out, skipped, "the common domain");
            Ok(out)
        },
    ));

    checks.push(run_check(
        "S4",
        "Hermitian fidelity at least trace expression",
        1e-10,
        None,
        || {
            if !targeted {
                return Ok(not_applicable(not_target));
            }
            let mut worst = Worst::new();
            for r in &records {
                worst.update(r.paper_expression_fk - r.hermitian_fk, || at(r));
            }
            Ok(worst.finish(1e-10))
        },
    ));

    checks.push(run_check("S5", "bound columns dominate", 1e-9, None, || {
        let mut worst = Worst::new();
        for r in &records {
            worst.update(r.asymmetry_systems - r.asymmetry_bound, || {
                format!("{} (asymmetry)", at(r))
            });
            worst.update(r.trace_distance_actual - r.trace_distance_bound, || {
                format!("{} (trace distance)", at(r))
            });
        }
        Ok(worst.finish(1e-9))
    }));

    checks.push(run_check(
        "S6",
        "fidelity decreases in k, increases in L",
        0.0,
        None,
        || {
            if !targeted {
                return Ok(not_applicable(not_target));
            }
            // Largest non-positive step; any step >= 0 in the wrong direction fails.
            let mut worst = Worst::new();
            for pair in records.windows(2) {
                let (a, b) = (&pair[0], &pair[1]);
                if a.levels == b.levels {
                    worst.update(b.hermitian_fk - a.hermitian_fk, || at(b));
                }
            }
            for r in records.iter().filter(|r| r.k >= 1) {
                if let Some(next) = records.iter().find(|s| s.k == r.k && s.levels > r.levels) {
                    worst.update(r.hermitian_fk - next.hermitian_fk, || at(next));
                }
            }
            let mut out = worst.finish(0.0);
            out.ok = worst.value < 0.0 || worst.value == f64::NEG_INFINITY;
            Ok(out)
        },
    ));

    checks.push(run_check("S7", "reduced entropies agree", 1e-8, None, || {
        let u = cfg.unitary.build()?;
        let mut worst = Worst::new();
        for levels in cfg.sorted_levels() {
            for k in 0..=cfg.k_max {
                let joint = run_protocol(levels, cfg.l0, cfg.theta, &u, k, cfg.shift_convention.into())?;
                let s = von_neumann_entropy(&reduce_systems(&joint)?)?;
                let e = von_neumann_entropy(&reduce_reservoir(&joint)?)?;
                worst.update((s - e).abs(), || format!("L={levels} k={k}"));
            }
        }
        Ok(worst.finish(1e-8))
    }));

    checks.push(run_check(
        "S8",
        "target projection equals binomial expansion",
        1e-12,
        None,
        || {
            let mut worst = Worst::new();
            let engine = if opts.inject_fault {
                ShiftConvention::Mirrored
            } else {
                cfg.shift_convention.into()
            };
            let direction = match ShiftConvention::from(cfg.shift_convention) {
                ShiftConvention::Standard => ShiftDirection::Lower,
                ShiftConvention::Mirrored => ShiftDirection::Raise,
            };
            let direction = if opts.inject_fault {
                ShiftDirection::Lower
            } else {
                direction
            };
            for levels in cfg.sorted_levels() {
                for k in 0..=cfg.k_max.min(6) {
                    let projected = run_protocol(levels, cfg.l0, 0.0, &hadamard(), k, engine)?.project_targets(0.0);
                    let expanded = LadderState64::reservoir(levels, cfg.l0, 0.0)?.half_shift_binomial(k, direction);
                    let lo = projected.base().min(expanded.base());
                    let hi = projected.end().max(expanded.end());
                    let dev = (lo..hi)
                        .map(|n| (projected.amplitude(n) - expanded.amplitude(n)).norm())
                        .fold(0.0, f64::max);
                    worst.update(dev, || format!("L={levels} k={k}"));
                }
            }
            Ok(worst.finish(1e-12))
        },
    ));

    checks.push(run_check("S9", "output independent of worker count", 0.0, None, || {
        let reference = RunConfig {
            compare: true,
            ..cfg.clone()
        };
        let serial = RunConfig {
            parallel: 1,
            ..reference.clone()
        };
        let a = record::to_bytes(&cmd_simulate(&reference)?, crate::config::OutputFormat::Csv)?;
        let b = record::to_bytes(&cmd_simulate(&serial)?, crate::config::OutputFormat::Csv)?;
        Ok(Outcome::new(
            if a == b { 0.0 } else { 1.0 },
            a == b,
            format!("{} bytes compared", a.len()),
        ))
    }));

    checks.push(run_check("S10", "CSV round trip is exact", 0.0, None, || {
        let bytes = record::to_bytes(&records, crate::config::OutputFormat::Csv)?;
        let back: Vec<SweepRecord> = record::read_csv(bytes.as_slice())?;
        let same = back == records;
        Ok(Outcome::new(
            if same { 0.0 } else { 1.0 },
            same,
            format!("{} rows", back.len()),
        ))
    }));

    checks
}

pub fn cmd_verify(cfg: &RunConfig, opts: VerifyOptions) -> CliResult<VerifyReport> {
    let mut checks = acceptance_checks(cfg.theta);
    checks.extend(sweep_checks(cfg, opts));
    Ok(VerifyReport { checks })
}

/// Turns a failed report into the invariant-failure error.
pub fn require_pass(report: &VerifyReport) -> CliResult<()> {
    if report.passed() {
        Ok(())
    } else {
        let failed: Vec<_> = report
            .checks
            .iter()
            .filter(|c| c.status == Status::Fail)
            .map(|c| c.id.as_str())
            .collect();
        Err(CliError::Invariant(format!("failed checks: {}", failed.join(", "))))
    }
}
