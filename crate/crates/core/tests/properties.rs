use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use catalytic_core::density::{
    dephase_total_number, reduce_reservoir, reduce_systems, trace_distance, von_neumann_entropy,
};
use catalytic_core::metrics::{
    asymmetry, closed_form_hermitian, closed_form_paper, collective_fidelity, collective_fidelity_from_density,
    paper_fidelity_expression,
};
use catalytic_core::systems::popcount_labels;
use catalytic_core::{
    collective_overlap_magnitude, dirichlet_overlap, psi_overlap, run_protocol, DensityMatrix, JointState, LadderState,
    QubitState, ShiftConvention, ShiftDirection, TwoLevelUnitary,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn hadamard() -> TwoLevelUnitary<f64> {
    TwoLevelUnitary::hadamard()
}

fn run(levels: usize, l0: i64, theta: f64, k: usize) -> JointState<f64> {
    run_protocol(levels, l0, theta, &hadamard(), k, ShiftConvention::Standard).unwrap()
}

fn ladder_state() -> impl Strategy<Value = LadderState<f64>> {
    (-20i64..20, prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..12)).prop_filter_map("non-zero", |(base, v)| {
        let amps = v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
        LadderState::from_amplitudes(base, amps).unwrap().normalize().ok()
    })
}

fn random_density(dim: usize) -> impl Strategy<Value = DensityMatrix<f64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim * dim).prop_map(move |v| {
        // ρ = G G† / Tr(G G†)
        let g: Vec<Complex64> = v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
        let mut m = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                m[i * dim + j] = (0..dim).map(|l| g[i * dim + l] * g[j * dim + l].conj()).sum();
            }
        }
        let tr: f64 = (0..dim).map(|i| m[i * dim + i].re).sum();
        for z in &mut m {
            *z /= tr;
        }
        for i in 0..dim {
            m[i * dim + i].im = 0.0;
        }
        DensityMatrix::new(dim, m, Some((0..dim as i64).map(|x| x % 3).collect())).unwrap()
    })
}

#[test]
fn reservoir_normalization_up_to_4096_levels() {
    for levels in [1usize, 2, 3, 17, 64, 511, 1024, 4096] {
        for theta in [0.0f64, 1.1, -2.7] {
            let s = LadderState::reservoir(levels, 3, theta).unwrap();
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12, "L = {levels}");
        }
    }
}

#[test]
fn dirichlet_matches_direct_overlap_on_grid() {
    for levels in 1..=64 {
        for delta in [0.0, PI / 7.0, FRAC_PI_3, FRAC_PI_2, PI] {
            for (l0, theta) in [(0i64, 0.0), (-5, 0.8), (11, -2.0)] {
                let a = LadderState::reservoir(levels, l0, theta).unwrap();
                let b = LadderState::reservoir(levels, l0, theta + delta).unwrap();
                let d = dirichlet_overlap(levels, delta).unwrap();
                assert!((a.overlap(&b) - d).norm() < 1e-12, "L = {levels}, δ = {delta}");
            }
        }
    }
}

proptest! {
    #[test]
    fn overlap_invariant_under_common_shift(a in ladder_state(), b in ladder_state(), m in -30i64..30) {
        let before = a.overlap(&b);
        let after = a.shift(m).overlap(&b.shift(m));
        prop_assert_eq!(before, after);
        prop_assert!(before.norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn half_shift_binomial_composes(s in ladder_state(), ka in 0usize..8, kb in 0usize..8, up in any::<bool>()) {
        let dir = if up { ShiftDirection::Raise } else { ShiftDirection::Lower };
        let twice = s.half_shift_binomial(ka, dir).half_shift_binomial(kb, dir);
        let once = s.half_shift_binomial(ka + kb, dir);
        prop_assert_eq!(twice.base(), once.base());
        for level in once.base()..once.end() {
            prop_assert!((twice.amplitude(level) - once.amplitude(level)).norm() < 1e-12);
        }
    }

    #[test]
    fn collective_overlap_is_power_of_single(theta in -10.0f64..10.0, phi in -10.0f64..10.0, k in 0u32..=64) {
        let direct = psi_overlap(theta, phi).norm().powi(k as i32);
        prop_assert!((collective_overlap_magnitude(theta, phi, k) - direct).abs() < 1e-12);
    }

    #[test]
    fn collective_overlap_nonincreasing(delta in 0.01f64..6.27, k in 0u32..40) {
        prop_assert!(collective_overlap_magnitude(0.0, delta, k + 1) <= collective_overlap_magnitude(0.0, delta, k));
    }

    #[test]
    fn psi_overlap_depends_on_difference_only(theta in -5.0f64..5.0, phi in -5.0f64..5.0, shift in -5.0f64..5.0) {
        prop_assert!((psi_overlap(theta, phi) - psi_overlap(theta + shift, phi + shift)).norm() < 1e-12);
        prop_assert!((psi_overlap(theta, phi) - psi_overlap(0.0, phi - theta)).norm() < 1e-12);
    }

    #[test]
    fn trace_distance_triangle(a in random_density(3), b in random_density(3), c in random_density(3)) {
        let ab = trace_distance(&a, &b).unwrap();
        let bc = trace_distance(&b, &c).unwrap();
        let ac = trace_distance(&a, &c).unwrap();
        prop_assert!(ac <= ab + bc + 1e-10);
        prop_assert!((ab - trace_distance(&b, &a).unwrap()).abs() < 1e-12);
        prop_assert!(ab <= 1.0 + 1e-10);
    }

    #[test]
    fn dephasing_never_lowers_entropy(rho in random_density(4)) {
        let s = von_neumann_entropy(&rho).unwrap();
        let twirled = dephase_total_number(&rho).unwrap();
        prop_assert!(von_neumann_entropy(&twirled).unwrap() >= s - 1e-10);
        prop_assert_eq!(dephase_total_number(&twirled).unwrap(), twirled.clone());
        prop_assert!(asymmetry(&rho).unwrap() >= -1e-10);
    }

    #[test]
    fn fidelity_is_l0_and_theta_invariant(levels in 2usize..40, k in 0usize..5, l0 in -9i64..9, theta in -3.0f64..3.0) {
        let base = collective_fidelity(&run(levels, 0, 0.0, k), 0.0);
        let moved = collective_fidelity(&run(levels, l0, theta, k), theta);
        prop_assert!((base - moved).abs() < 1e-12);
        let p0 = paper_fidelity_expression::<f64>(levels, 0, k).unwrap();
        let p1 = paper_fidelity_expression::<f64>(levels, l0, k).unwrap();
        prop_assert!((p0 - p1).abs() < 1e-12);
    }
}

#[test]
fn protocol_is_unitary_and_conserves_number() {
    for levels in [1usize, 2, 7, 64, 256] {
        for k in 0..=10 {
            for conv in [ShiftConvention::Standard, ShiftConvention::Mirrored] {
                let j = run_protocol(levels, -3, 0.6, &hadamard(), k, conv).unwrap();
                assert!((j.norm_sqr() - 1.0).abs() < 1e-12, "L = {levels}, k = {k}");
                assert!(j.conserves_number(), "L = {levels}, k = {k}");
                // Each nonzero amplitude sits inside the initial support.
                let (lo, hi) = j.number_support();
                for (idx, a) in j.amplitudes().iter().enumerate() {
                    if *a != Complex64::new(0.0, 0.0) {
                        let n = j.total_number(idx / j.dim(), idx % j.dim());
                        assert!(lo <= n && n <= hi);
                    }
                }
            }
        }
    }
}

#[test]
fn group_action_commutes_with_dilation() {
    let u = TwoLevelUnitary::new(
        Complex64::new(0.6, 0.0),
        Complex64::new(0.0, 0.8),
        Complex64::new(0.0, 0.8),
        Complex64::new(0.6, 0.0),
    )
    .unwrap();
    for unitary in [hadamard(), u] {
        for phi in [0.3, 1.0, 2.9] {
            for k in 0..=4 {
                let reservoir = LadderState::reservoir(32, 2, 0.4).unwrap();
                let mut j = JointState::new(&reservoir, k + 1, ShiftConvention::Standard);
                for _ in 0..k {
                    j = j.attach_and_interact(&unitary).unwrap();
                }
                let a = j.apply_group_phase(phi).attach_and_interact(&unitary).unwrap();
                let b = j.attach_and_interact(&unitary).unwrap().apply_group_phase(phi);
                for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
                    assert!((x - y).norm() < 1e-12);
                }
                assert_eq!(
                    j.number_histogram().len(),
                    j.apply_group_phase(phi).number_histogram().len()
                );
            }
        }
    }
}

#[test]
fn projection_agrees_with_binomial_expansion() {
    for levels in [1usize, 3, 8, 33] {
        for k in 0..=7 {
            let eta = LadderState::reservoir(levels, 4, 0.0).unwrap();
            let projected = run(levels, 4, 0.0, k).project_targets(0.0);
            let binomial = eta.half_shift_binomial(k, ShiftDirection::Lower);
            for level in projected.base().min(binomial.base())..projected.end().max(binomial.end()) {
                assert!((projected.amplitude(level) - binomial.amplitude(level)).norm() < 1e-12);
            }

            let mirrored = run_protocol(levels, 4, 0.0, &hadamard(), k, ShiftConvention::Mirrored)
                .unwrap()
                .project_targets(0.0);
            let raised = eta.half_shift_binomial(k, ShiftDirection::Raise);
            for level in mirrored.base().min(raised.base())..mirrored.end().max(raised.end()) {
                assert!((mirrored.amplitude(level) - raised.amplitude(level)).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn projection_is_phase_covariant() {
    // For reservoir phase θ the projected vector is e^{iθ(n - l0)} times the
    // θ = 0 binomial expansion.
    let (levels, l0, theta) = (9usize, -2i64, 1.3);
    for k in 0..=5 {
        let projected = run(levels, l0, theta, k).project_targets(theta);
        let binomial = LadderState::reservoir(levels, l0, 0.0)
            .unwrap()
            .half_shift_binomial(k, ShiftDirection::Lower);
        for level in binomial.base()..binomial.end() {
            let phase = Complex64::from_polar(1.0, theta * (level - l0) as f64);
            assert!((projected.amplitude(level) - phase * binomial.amplitude(level)).norm() < 1e-12);
        }
    }
}

#[test]
fn schmidt_entropies_match() {
    for levels in [2usize, 5, 16] {
        for k in 0..=6 {
            let j = run(levels, 1, 0.7, k);
            let s = von_neumann_entropy(&reduce_systems(&j).unwrap()).unwrap();
            let e = von_neumann_entropy(&reduce_reservoir(&j).unwrap()).unwrap();
            assert!((s - e).abs() < 1e-8, "L = {levels}, k = {k}: {s} vs {e}");
        }
    }
}

#[test]
fn trace_distance_obeys_data_processing() {
    for levels in [2usize, 4, 9, 64] {
        for delta in [PI / 7.0, FRAC_PI_3, FRAC_PI_2, PI] {
            let bound = (1.0 - dirichlet_overlap(levels, delta).unwrap().norm_sqr())
                .max(0.0)
                .sqrt();
            for k in 0..=5 {
                let a = reduce_systems(&run(levels, 0, 0.0, k)).unwrap();
                let b = reduce_systems(&run(levels, 0, delta, k)).unwrap();
                assert!(trace_distance(&a, &b).unwrap() <= bound + 1e-10);
            }
        }
    }
}

#[test]
fn paper_expression_is_linear_on_its_domain() {
    for levels in [16usize, 64, 256] {
        for k in (1..=8).filter(|k| 2 * k <= levels) {
            for l0 in [-7i64, 0, 5] {
                let p = paper_fidelity_expression::<f64>(levels, l0, k).unwrap();
                assert!((p - (1.0 - k as f64 / levels as f64)).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn hermitian_fidelity_matches_combinatorial_oracle() {
    for levels in [8usize, 32, 128] {
        for k in 0..=6 {
            let j = run(levels, 0, 0.0, k);
            let sim = collective_fidelity(&j, 0.0);
            let oracle = closed_form_hermitian::<f64>(k, levels).unwrap();
            assert!((sim - oracle).abs() < 1e-10, "L = {levels}, k = {k}");
            assert!((sim - collective_fidelity_from_density(&j, 0.0).unwrap()).abs() < 1e-10);
        }
    }
}

#[test]
fn hermitian_closed_form_dominates_linear_law() {
    for levels in 1usize..=40 {
        for k in (0..=levels).filter(|k| 2 * k <= levels) {
            let h = closed_form_hermitian::<f64>(k, levels).unwrap();
            let p = closed_form_paper::<f64>(k, levels).unwrap();
            assert!(h >= p, "L = {levels}, k = {k}");
        }
    }
}

#[test]
fn system_asymmetry_bounded_by_reservoir() {
    for levels in [2usize, 8, 32] {
        for k in 0..=6 {
            let rho = reduce_systems(&run(levels, 0, 0.0, k)).unwrap();
            assert!(asymmetry(&rho).unwrap() <= (levels as f64).ln() + 1e-9);
        }
    }
}

#[test]
fn asymmetry_of_symmetric_times_asymmetric() {
    let eta = LadderState::reservoir(8, 3, 0.9).unwrap();
    let sigma = DensityMatrix::pure(eta.amplitudes(), Some((3..11).collect())).unwrap();
    for n in 0..3usize {
        // Number eigenstate of n systems: all excited.
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[(1 << n) - 1] = Complex64::new(1.0, 0.0);
        let rho = DensityMatrix::pure(&amps, Some(popcount_labels(n))).unwrap();
        let joint = rho.tensor(&sigma);
        assert!((asymmetry(&joint).unwrap() - asymmetry(&sigma).unwrap()).abs() < 1e-10);
    }
}

#[test]
fn fidelity_monotone_in_k_and_levels() {
    for levels in [4usize, 16, 64] {
        let f: Vec<f64> = (0..=6)
            .map(|k| collective_fidelity(&run(levels, 0, 0.0, k), 0.0))
            .collect();
        assert!(f.windows(2).all(|w| w[1] < w[0]), "{f:?}");
    }
    for k in 1..=4 {
        let f: Vec<f64> = [4usize, 8, 16, 64]
            .iter()
            .map(|&l| collective_fidelity(&run(l, 0, 0.0, k), 0.0))
            .collect();
        assert!(f.windows(2).all(|w| w[1] > w[0]), "{f:?}");
    }
}

#[test]
fn reservoir_entropy_grows_from_zero() {
    for levels in [2usize, 8, 64] {
        let p = 1.0 / (2.0 * levels as f64);
        let h = -p * p.ln() - (1.0 - p) * (1.0 - p).ln();
        let s1 = von_neumann_entropy(&reduce_reservoir(&run(levels, 0, 0.0, 1)).unwrap()).unwrap();
        assert!((s1 - h).abs() < 1e-10);
        for k in 1..=5 {
            let s = von_neumann_entropy(&reduce_reservoir(&run(levels, 0, 0.0, k)).unwrap()).unwrap();
            assert!(s > 0.0);
        }
    }
}

#[test]
fn mirrored_convention_gives_identical_metrics() {
    for (levels, k) in [(4usize, 3usize), (16, 5)] {
        let a = run_protocol(levels, 0, 0.0, &hadamard(), k, ShiftConvention::Standard).unwrap();
        let b = run_protocol(levels, 0, 0.0, &hadamard(), k, ShiftConvention::Mirrored).unwrap();
        assert!((collective_fidelity(&a, 0.0) - collective_fidelity(&b, 0.0)).abs() < 1e-12);
        let sa = von_neumann_entropy(&reduce_reservoir(&a).unwrap()).unwrap();
        let sb = von_neumann_entropy(&reduce_reservoir(&b).unwrap()).unwrap();
        assert!((sa - sb).abs() < 1e-10);
        let aa = asymmetry(&reduce_systems(&a).unwrap()).unwrap();
        let ab = asymmetry(&reduce_systems(&b).unwrap()).unwrap();
        assert!((aa - ab).abs() < 1e-10);
    }
}

#[test]
fn product_target_asymmetry_increases() {
    let mut last = 0.0;
    for k in 1..=8 {
        let rho = DensityMatrix::pure(
            &QubitState::<f64>::target(0.5).tensor_power(k),
            Some(popcount_labels(k)),
        )
        .unwrap();
        let a = asymmetry(&rho).unwrap();
        assert!(a > last, "k = {k}");
        last = a;
    }
}

#[test]
fn single_precision_pipeline() {
    let j = run_protocol(8, 0, 0.0f32, &TwoLevelUnitary::hadamard(), 2, ShiftConvention::Standard).unwrap();
    assert!((collective_fidelity(&j, 0.0) - 0.90625).abs() < 1e-5);
    let s = von_neumann_entropy(&reduce_reservoir(&j).unwrap()).unwrap();
    assert!(s > 0.0);
    assert!((paper_fidelity_expression::<f32>(8, 0, 2).unwrap() - 0.75).abs() < 1e-5);
    assert!((closed_form_hermitian::<f32>(2, 8).unwrap() - 0.90625).abs() < 1e-6);
}
