use proptest::prelude::*;
use qutrit_inv::linalg::{c, dagger, ComplexMatrix};
use qutrit_inv::monotones::*;
use qutrit_inv::states::{random_local_unitary, random_state, BipartiteState, Coords};

fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

#[test]
fn maximally_mixed_probabilities_are_traces() {
    let mm = BipartiteState::maximally_mixed(3, 3).unwrap();
    for seed in 0..20 {
        let pair = sample_measurement(3, seed).unwrap();
        let br = apply_measurement(&mm, &pair, if seed % 2 == 0 { Side::A } else { Side::B }).unwrap();
        for (b, e) in br.iter().zip([&pair.e1, &pair.e2]) {
            let want = (dagger(e) * e).trace().re / 3.0;
            assert!((b.p - want).abs() < 1e-14);
        }
    }
}

#[test]
fn identity_measurement_is_a_no_op() {
    let s = random_state(3, 3, 11).unwrap();
    let pair = MeasurementPair::from_parts(identity(3), identity(3), identity(3), &[1.0, 1.0, 1.0]).unwrap();
    assert_eq!(pair.completeness_residual(), 0.0);
    let [b1, b2] = apply_measurement(&s, &pair, Side::A).unwrap();
    assert!((b1.p - 1.0).abs() < 1e-14);
    assert!((b1.state.unwrap().rho() - s.rho()).iter().all(|z| z.norm() < 1e-14));
    assert!(b2.p < DEGENERATE_P && b2.state.is_none());
    assert!(matches!(concavity_trial(&s, &pair, Side::A, Functional::C3).unwrap(), TrialOutcome::Skipped(_)));
}

#[test]
fn symmetric_unitary_split() {
    let s = random_state(3, 3, 12).unwrap();
    let u = random_local_unitary(3, 5).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let pair = MeasurementPair::from_parts(u.clone(), u.clone(), identity(3), &[h, h, h]).unwrap();
    assert!((&pair.e1 - &pair.e2).iter().all(|z| z.norm() < 1e-15));
    let mm = BipartiteState::maximally_mixed(3, 3).unwrap();
    for b in apply_measurement(&mm, &pair, Side::B).unwrap() {
        assert!((b.p - 0.5).abs() < 1e-14);
    }
    // both branches are U ρ U† so every invariant is preserved and the margin vanishes
    let f0 = Functional::C3.eval(s.coords()).unwrap();
    for b in apply_measurement(&s, &pair, Side::A).unwrap() {
        assert!((b.p - 0.5).abs() < 1e-14);
        assert!((Functional::C3.eval(b.state.unwrap().coords()).unwrap() - f0).abs() < 1e-12);
    }
    match concavity_trial(&s, &pair, Side::A, Functional::C3).unwrap() {
        TrialOutcome::Margin(m) => assert!(m.abs() < 1e-12),
        other => panic!("{other:?}"),
    }
}

#[test]
fn sampled_trials_conserve_probability() {
    for i in 0..200 {
        let (state, pair, side) = trial_inputs(Functional::C3, Ensemble::Haar, 99, i).unwrap();
        assert!(pair.completeness_residual() <= 1e-12);
        assert!(pair.reconstruction_residual() <= 1e-12);
        let br = apply_measurement(&state, &pair, side).unwrap();
        assert!((br[0].p + br[1].p - 1.0).abs() <= 1e-12);
        for b in br {
            assert!(b.state.unwrap().diagnostics().physical);
        }
    }
}

#[test]
fn margins_match_determinant_prefactor() {
    // each branch scales F by |Det E_i|^{2/3} / p_i, so the margin has a closed form
    for i in 0..50 {
        let (state, pair, side) = trial_inputs(Functional::C3, Ensemble::Haar, 5, i).unwrap();
        let f = Functional::C3.eval(state.coords()).unwrap();
        let want = f * (1.0 - pair.det_moduli().iter().map(|d| d.powf(2.0 / 3.0)).sum::<f64>());
        let TrialOutcome::Margin(m) = concavity_trial(&state, &pair, side, Functional::C3).unwrap() else {
            panic!("skipped")
        };
        assert!((m - want).abs() < 1e-12, "trial {i}: {m} vs {want}");
    }
}

#[test]
fn cube_root_of_c3_is_concave() {
    let r = run_trials(Functional::C3, Ensemble::Haar, 2024, 10_000, MARGIN_TOL).unwrap();
    assert_eq!(r.evaluated + r.skipped, 10_000);
    assert!(r.passes(), "{:?}", r.violations.first());
    assert!(r.min_margin >= -1e-9);
}

#[test]
fn cube_root_of_c3_survives_the_aligned_search() {
    let r = run_trials(Functional::C3, Ensemble::Aligned, 2024, 10_000, MARGIN_TOL).unwrap();
    assert!(r.passes(), "{:?}", r.violations.first());
}

#[test]
fn aligned_trials_stay_physical() {
    for i in 0..100 {
        let (state, pair, side) = trial_inputs(Functional::C3, Ensemble::Aligned, 3, i).unwrap();
        assert!(state.diagnostics().physical);
        assert!(pair.completeness_residual() <= 1e-12);
        assert!((pair.v.determinant() - c(1.0, 0.0)).norm() < 1e-12);
        let marginal = match side {
            Side::A => state.reduced_a(),
            Side::B => state.reduced_b(),
        };
        let d = &pair.v * marginal * dagger(&pair.v);
        assert!((0..3).all(|i| (0..3).all(|j| i == j || d[(i, j)].norm() < 1e-12)));
    }
}

#[test]
fn sixth_root_of_c6_is_concave() {
    let r = run_trials(Functional::C6, Ensemble::Haar, 2025, 2_000, MARGIN_TOL).unwrap();
    assert!(r.passes(), "{:?}", r.violations.first());
}

#[test]
fn qubit_functionals_are_concave() {
    for f in [Functional::Q2, Functional::Q4, Functional::Q4Tilde, Functional::Q6] {
        let r = run_trials(f, Ensemble::Haar, 31, 2_000, MARGIN_TOL).unwrap();
        assert!(r.passes(), "{}: {:?}", f.name(), r.violations.first());
    }
}

#[test]
fn raw_c3_control_fails_and_replays() {
    let r = run_trials(Functional::RawC3, Ensemble::Aligned, 2024, 10_000, MARGIN_TOL).unwrap();
    assert!(!r.violations.is_empty());
    let v = &r.violations[0];
    match replay_trial(Functional::RawC3, Ensemble::Aligned, 2024, v.trial).unwrap() {
        TrialOutcome::Margin(m) => assert_eq!(m, v.margin),
        other => panic!("{other:?}"),
    }
    assert_eq!(v.seed, qutrit_inv::states::trial_seed(2024, v.trial));
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let pool = |n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
    let one = pool(1).install(|| run_trials(Functional::RawC3, Ensemble::Aligned, 8, 500, MARGIN_TOL).unwrap());
    let four = pool(4).install(|| run_trials(Functional::RawC3, Ensemble::Aligned, 8, 500, MARGIN_TOL).unwrap());
    assert_eq!(serde_json::to_string(&one).unwrap(), serde_json::to_string(&four).unwrap());
}

#[test]
fn scalar_inequality_holds_on_the_cube() {
    let r = scalar_inequality_scan(100, 100_000, 1).unwrap();
    assert!(r.passes(1e-12), "{r:?}");
    assert!(r.symmetric_point.abs() < 1e-15);
    // the face a = 0 collapses to a single product bounded by one
    assert!(r.boundary_max_violation <= 1e-15);
    assert!((scalar_lhs(1.0 - 1e-9, 1.0 - 1e-9, 1.0 - 1e-9) - 1.0).abs() < 1e-5);
}

#[test]
fn rejects_mismatched_dimensions() {
    let s = random_state(3, 3, 0).unwrap();
    let q = sample_measurement(2, 0).unwrap();
    assert!(apply_measurement(&s, &q, Side::A).is_err());
    assert!(sample_measurement(4, 0).is_err());
    let bad = ComplexMatrix::from_element(3, 3, c(0.0, 0.0));
    assert!(MeasurementPair::from_parts(bad.clone(), bad.clone(), bad, &[0.5, 1.5, 0.5]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn homogeneity_one(seed in 0u64..10_000, t in 0.01f64..50.0) {
        let s = random_state(3, 3, seed).unwrap();
        let scaled = Coords::from_extended(3, 3, s.coords().extended() * t).unwrap();
        for f in [Functional::C3, Functional::C6] {
            let (a, b) = (f.eval(s.coords()).unwrap(), f.eval(&scaled).unwrap());
            prop_assert!((b - t * a).abs() <= 1e-12 * t * a.max(1e-300));
        }
        let q = random_state(2, 2, seed).unwrap();
        let qs = Coords::from_extended(2, 2, q.coords().extended() * t).unwrap();
        for f in [Functional::Q2, Functional::Q4, Functional::Q4Tilde, Functional::Q6] {
            let (a, b) = (f.eval(q.coords()).unwrap(), f.eval(&qs).unwrap());
            prop_assert!((b - t * a).abs() <= 1e-12 * t * a.max(1e-300));
        }
    }

    #[test]
    fn replay_is_deterministic(master in any::<u64>(), idx in 0u64..1000) {
        let a = replay_trial(Functional::C3, Ensemble::Aligned, master, idx).unwrap();
        let b = replay_trial(Functional::C3, Ensemble::Aligned, master, idx).unwrap();
        prop_assert_eq!(a, b);
    }
}
