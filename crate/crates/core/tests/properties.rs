use proptest::prelude::*;
use tomocausal::correlations::{quantum_causal_report, BipartiteState};
use tomocausal::ensemble::{compute_stats, run_ensemble, sample_state, StateClass};
use tomocausal::linalg::MeasurementBasis;
use tomocausal::optimizer::OptimizationSettings;
use tomocausal::states::{
    generate_mixed_state, generate_pure_state, generate_x_state, make_pure_schmidt,
    PureSchmidtParams, StateRng,
};
use tomocausal::tomography::tomographic_report;

fn mixed(seed: u64) -> BipartiteState {
    generate_mixed_state(&mut StateRng::new(seed)).unwrap()
}

#[test]
fn generated_x_states_are_valid_with_uniform_mean_diagonal() {
    let mut rng = StateRng::new(3);
    let mut mean = [0.0; 4];
    let n = 10_000;
    for _ in 0..n {
        let p = generate_x_state(&mut rng);
        let s = p.to_state().unwrap();
        for (m, d) in mean.iter_mut().zip(p.diagonal()) {
            *m += d / n as f64;
        }
        let t = tomographic_report(&s);
        let (a, b) = (s.rho_a().raw_spectrum(), s.rho_b().raw_spectrum());
        if (a[0] - a[1]).abs() > 1e-9 {
            let th = t.basis_a0.theta();
            assert!(
                th == 0.0 || (th - std::f64::consts::PI).abs() < 1e-12,
                "theta_A {th}"
            );
        }
        if (b[0] - b[1]).abs() > 1e-9 {
            let th = t.basis_b0.theta();
            assert!(
                th == 0.0 || (th - std::f64::consts::PI).abs() < 1e-12,
                "theta_B {th}"
            );
        }
    }
    for m in mean {
        assert!((m - 0.25).abs() < 0.01, "mean diagonal {mean:?}");
    }
}

#[test]
fn mixed_state_mean_purity() {
    // band from an independent 5e4-sample reference run
    let n = 10_000;
    let total: f64 = (0..n).map(|i| mixed(i).rho_ab().purity()).sum();
    let mean = total / n as f64;
    assert!((0.488..=0.505).contains(&mean), "mean purity {mean}");
}

#[test]
fn mixed_state_invariants() {
    for seed in 0..1000 {
        let s = mixed(seed);
        let q = quantum_causal_report(&s);
        let t = tomographic_report(&s);
        assert!(q.i_ab_q >= -1e-12);
        assert!(t.j_tom >= 0.0 && t.j_tom <= q.i_ab_q + 1e-9);
        assert!((t.h_a0 - q.s_a).abs() < 1e-9 && (t.h_b0 - q.s_b).abs() < 1e-9);
        assert!(t.d_discord_tom >= -1e-9);
        let (dq, dt) = (q.d_q.unwrap(), t.d_tom.unwrap());
        assert!((dt * q.i_ab_q - dq * t.j_tom).abs() < 1e-9);
        assert!(dt * dq >= 0.0 && dt.abs() <= dq.abs() + 1e-12);
    }
}

#[test]
fn pure_schmidt_states_have_minimal_independence() {
    let mut rng = StateRng::new(17);
    for _ in 0..100 {
        let (alpha, s) = generate_pure_state(&mut rng, 0.01, 0.99).unwrap();
        let q = quantum_causal_report(&s);
        assert!(
            (q.ind_a_given_b.unwrap() + 1.0).abs() < 1e-9,
            "alpha {alpha}"
        );
        assert!(
            (q.ind_b_given_a.unwrap() + 1.0).abs() < 1e-9,
            "alpha {alpha}"
        );
        let direct = make_pure_schmidt(&PureSchmidtParams::computational(alpha)).unwrap();
        assert!((quantum_causal_report(&direct).s_a - q.s_a).abs() < 1e-9);
    }
}

#[test]
fn pure_ensemble_is_symmetric_in_every_scheme() {
    let cfg = OptimizationSettings::default();
    let ens = run_ensemble(StateClass::Pure, 100, 5, &cfg).unwrap();
    for r in &ens.records {
        for d in [r.d_q, r.d_tom, r.d_opt] {
            assert!(d.unwrap().abs() < 1e-9, "seed {}: {d:?}", r.seed);
        }
    }
}

#[test]
fn x_ensemble_has_both_types() {
    let cfg = OptimizationSettings::default();
    let ens = run_ensemble(StateClass::X, 200, 9, &cfg).unwrap();
    let s = &ens.stats;
    assert!(s.type_i.unwrap() > 0 && s.type_ii.unwrap() > 0);
    assert_eq!(s.type_inconsistent, Some(0));
}

#[test]
fn statistics_ignore_record_order() {
    let cfg = OptimizationSettings {
        random_starts: 8,
        ..OptimizationSettings::default()
    };
    let ens = run_ensemble(StateClass::Mixed, 60, 2, &cfg).unwrap();
    let mut shuffled = ens.records.clone();
    shuffled.reverse();
    shuffled.rotate_left(17);
    let (a, b) = (ens.stats, compute_stats(&shuffled));
    let close = |x: Option<f64>, y: Option<f64>| (x.unwrap() - y.unwrap()).abs() < 1e-12;
    assert!(close(a.pearson_r_dtom_dopt, b.pearson_r_dtom_dopt));
    assert!(close(a.pearson_r_dq_dopt, b.pearson_r_dq_dopt));
    assert!(close(a.slope_dopt_on_dtom, b.slope_dopt_on_dtom));
    assert!(close(a.slope_dopt_on_dq, b.slope_dopt_on_dq));
    assert_eq!(a.sign_agreement_fraction, b.sign_agreement_fraction);
}

#[test]
fn sampled_states_depend_only_on_seed() {
    for class in [StateClass::X, StateClass::Mixed, StateClass::Pure] {
        let a = sample_state(class, 99).unwrap().0;
        let b = sample_state(class, 99).unwrap().0;
        assert_eq!(a.rho_ab(), b.rho_ab());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn local_unitaries_preserve_quantum_and_tomographic_quantities(
        seed in 0u64..100_000,
        ta in 0.0..std::f64::consts::PI, pa in 0.0..std::f64::consts::TAU,
        tb in 0.0..std::f64::consts::PI, pb in 0.0..std::f64::consts::TAU,
    ) {
        let s = mixed(seed);
        let va = MeasurementBasis::new(ta, pa).unwrap().unitary();
        let vb = MeasurementBasis::new(tb, pb).unwrap().unitary();
        let r = s.apply_local_unitaries(&va, &vb).unwrap();
        let (q0, q1) = (quantum_causal_report(&s), quantum_causal_report(&r));
        prop_assert!((q0.s_a - q1.s_a).abs() < 1e-9);
        prop_assert!((q0.s_b - q1.s_b).abs() < 1e-9);
        prop_assert!((q0.i_ab_q - q1.i_ab_q).abs() < 1e-9);
        prop_assert!((q0.d_q.unwrap() - q1.d_q.unwrap()).abs() < 1e-9);
        let (t0, t1) = (tomographic_report(&s), tomographic_report(&r));
        prop_assert!((t0.j_tom - t1.j_tom).abs() < 1e-9);
        prop_assert!((t0.d_tom.unwrap() - t1.d_tom.unwrap()).abs() < 1e-9);
    }
}
