//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Each criterion is computed here directly from the core
//! API; criterion 9 then runs the `verify` subcommand end to end.

use std::f64::consts::FRAC_PI_3;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use catalytic_core::metrics::{
    asymmetry, closed_form_hermitian, collective_fidelity, landauer_cost, paper_fidelity_expression,
};
use catalytic_core::systems::popcount_labels;
use catalytic_core::{
    collective_overlap_magnitude, crossover_k, dirichlet_overlap, reduce_reservoir, reduce_systems, run_protocol,
    trace_distance, von_neumann_entropy, DensityMatrix64, JointState64, LadderState64, QubitState64, ShiftConvention,
    TwoLevelUnitary64,
};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict, Option<Duration>);

fn joint(levels: usize, theta: f64, k: usize) -> JointState64 {
    run_protocol(
        levels,
        0,
        theta,
        &TwoLevelUnitary64::hadamard(),
        k,
        ShiftConvention::Standard,
    )
    .unwrap()
}

fn within(limit: Duration, elapsed: Duration, verdict: Verdict) -> Verdict {
    let v = verdict?;
    if elapsed > limit {
        Err(format!("{v}; took {elapsed:?}, limit {limit:?}"))
    } else {
        Ok(format!("{v}; {elapsed:?}"))
    }
}

fn criterion_1() -> Verdict {
    let mut worst = 0.0f64;
    for levels in [2usize, 8, 64, 256] {
        for l0 in [-3i64, 0, 7] {
            for theta in [0.0, 1.1] {
                let eta = LadderState64::reservoir(levels, l0, theta).unwrap();
                let rho = DensityMatrix64::pure(eta.amplitudes(), Some((l0..l0 + levels as i64).collect())).unwrap();
                worst = worst.max((asymmetry(&rho).unwrap() - (levels as f64).ln()).abs());
            }
        }
    }
    let msg = format!("max |A_G(sigma) - ln L| = {worst:.3e} (tol 1e-12)");
    if worst <= 1e-12 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_2() -> Verdict {
    let mut worst = 0.0f64;
    for levels in [16usize, 64, 256] {
        for k in (1..=8).filter(|k| 2 * k <= levels) {
            let p: f64 = paper_fidelity_expression(levels, 0, k).unwrap();
            worst = worst.max((p - (1.0 - k as f64 / levels as f64)).abs());
        }
    }
    let msg = format!("max |F_trace - (1 - k/L)| = {worst:.3e} (tol 1e-12)");
    if worst <= 1e-12 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_3() -> Verdict {
    let mut worst = 0.0f64;
    let mut min_gap = f64::INFINITY;
    let mut max_gap = 0.0f64;
    for levels in [8usize, 32, 128] {
        for k in 1..=6 {
            let f = collective_fidelity(&joint(levels, 0.0, k), 0.0);
            let oracle: f64 = closed_form_hermitian(k, levels).unwrap();
            worst = worst.max((f - oracle).abs());
            let gap = f - (1.0 - k as f64 / levels as f64);
            min_gap = min_gap.min(gap);
            max_gap = max_gap.max(gap);
        }
    }
    let msg =
        format!("max |F - oracle| = {worst:.3e} (tol 1e-10); F - (1 - k/L) ranges over [{min_gap:.4e}, {max_gap:.4e}]");
    if worst <= 1e-10 && min_gap >= 0.0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_4() -> Verdict {
    let mut worst = f64::NEG_INFINITY;
    for levels in [8usize, 32, 128] {
        for k in 1..=6 {
            let rho = reduce_systems(&joint(levels, 0.0, k)).unwrap();
            worst = worst.max(asymmetry(&rho).unwrap() - (levels as f64).ln());
        }
    }
    let msg = format!("max A_G(rho') - ln L = {worst:.4} (must be <= 1e-9)");
    if worst <= 1e-9 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_5() -> Verdict {
    let u = TwoLevelUnitary64::hadamard();
    let eta = LadderState64::reservoir(32, 0, 0.0).unwrap();
    let mut worst = 0.0f64;
    for phi in [0.3, 1.0, 2.9] {
        for k in 1..=4 {
            let mut j = JointState64::new(&eta, k, ShiftConvention::Standard);
            for _ in 1..k {
                j = j.attach_and_interact(&u).unwrap();
            }
            let a = j.apply_group_phase(phi).attach_and_interact(&u).unwrap();
            let b = j.attach_and_interact(&u).unwrap().apply_group_phase(phi);
            for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
                worst = worst.max((x - y).norm());
            }
        }
    }
    let msg = format!("max elementwise difference = {worst:.3e} (tol 1e-12)");
    if worst <= 1e-12 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_6() -> Verdict {
    let mut worst = 0.0f64;
    let mut min_s = f64::INFINITY;
    let mut cost_exact = true;
    for levels in [2usize, 8, 64] {
        for k in 1..=6 {
            let s = von_neumann_entropy(&reduce_reservoir(&joint(levels, 0.0, k)).unwrap()).unwrap();
            if k == 1 {
                let p = 1.0 / (2.0 * levels as f64);
                let h = -p * p.ln() - (1.0 - p) * (1.0 - p).ln();
                worst = worst.max((s - h).abs());
            }
            min_s = min_s.min(s);
            cost_exact &= landauer_cost(s, 1.0).unwrap() == s;
        }
    }
    let msg = format!(
        "max |S(sigma'_1) - h(1/2L)| = {worst:.3e} (tol 1e-10); min S(sigma'_k) = {min_s:.4e}; cost == S: {cost_exact}"
    );
    if worst <= 1e-10 && min_s > 0.0 && cost_exact {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_7() -> Verdict {
    let (levels, delta) = (64usize, FRAC_PI_3);
    let overlap = dirichlet_overlap(levels, delta).unwrap().norm();
    let bound = (1.0 - overlap * overlap).sqrt();
    let mut worst = f64::NEG_INFINITY;
    for k in 0..=6 {
        let a = reduce_systems(&joint(levels, 0.0, k)).unwrap();
        let b = reduce_systems(&joint(levels, delta, k)).unwrap();
        worst = worst.max(trace_distance(&a, &b).unwrap() - bound);
    }
    let crossover = crossover_k(levels, delta).unwrap();
    let consistent = match crossover {
        Some(c) => {
            collective_overlap_magnitude(0.0, delta, c as u32) < overlap
                && collective_overlap_magnitude(0.0, delta, c as u32 - 1) >= overlap
        }
        None => false,
    };
    let msg =
        format!("max D - bound = {worst:.4} (must be <= 1e-10); |D_L| = {overlap:.6e}; crossover_k = {crossover:?}");
    if worst <= 1e-10 && consistent {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_8() -> Verdict {
    let values: Vec<f64> = (1..=10)
        .map(|k| {
            let amps = QubitState64::target(0.4).tensor_power(k);
            asymmetry(&DensityMatrix64::pure(&amps, Some(popcount_labels(k))).unwrap()).unwrap()
        })
        .collect();
    let increasing = values.windows(2).all(|w| w[1] > w[0]);
    let msg = format!(
        "A_G(psi^k) for k = 1..10: {:.4} .. {:.4}, strictly increasing: {increasing}",
        values[0], values[9]
    );
    if increasing {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_9() -> Verdict {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_catalytic"))
        .arg("verify")
        .output()
        .map_err(|e| format!("could not run verify: {e}"))?;
    let elapsed = start.elapsed();
    let stdout = String::from_utf8_lossy(&out.stdout);
    let all_run = (1..=8).all(|i| {
        stdout
            .lines()
            .any(|l| l.starts_with("[PASS] C") && l.contains(&format!("C{i} ")))
    });
    let msg = format!(
        "verify exit {:?} in {elapsed:?}, C1..C8 all PASS: {all_run}",
        out.status.code()
    );
    if out.status.success() && all_run && elapsed < Duration::from_secs(60) {
        Ok(msg)
    } else {
        Err(format!("{msg}\n{stdout}{}", String::from_utf8_lossy(&out.stderr)))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            "reservoir asymmetry equals ln L",
            criterion_1,
            Some(Duration::from_secs(1)),
        ),
        (
            "trace expression reduces linearly",
            criterion_2,
            Some(Duration::from_secs(1)),
        ),
        (
            "Hermitian fidelity matches oracle",
            criterion_3,
            Some(Duration::from_secs(30)),
        ),
        ("system asymmetry bounded by ln L", criterion_4, None),
        ("dilation is G-invariant", criterion_5, None),
        ("reservoir entropy and Landauer cost", criterion_6, None),
        ("no superdiscrimination", criterion_7, None),
        ("target-copy asymmetry diverges", criterion_8, None),
        ("verify exits 0 within 60 s", criterion_9, None),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let verdict = match limit {
            Some(limit) => within(*limit, start.elapsed(), verdict),
            None => verdict,
        };
        match verdict {
            Ok(msg) => println!("criterion {}: PASS  {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {msg}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
