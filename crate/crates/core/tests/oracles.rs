use rayon::ThreadPoolBuilder;
use tomocausal::ensemble::{analyze_state, run_ensemble, StateClass};
use tomocausal::optimizer::{grid_oracle, OptimizationSettings};
use tomocausal::states::{XStateKind, XStateParams};

// independent closed-form evaluation for p = 0.8:
// S_AB from eigenvalues {0.85, 0.05, 0.05, 0.05}; J = 1 - h(0.9)
const WERNER_08_S_AB: f64 = 0.8475846798245736;
const WERNER_08_I: f64 = 1.1524153201754264;
const WERNER_08_J: f64 = 0.5310044064107189;

#[test]
fn werner_08_report() {
    let p = XStateParams::werner(0.8).unwrap();
    let s = p.to_state().unwrap();
    let a = analyze_state(&s, Some(&p), &OptimizationSettings::default()).unwrap();
    let (q, t, o) = (&a.quantum, &a.tomographic, &a.optimal);
    assert!((q.s_a - 1.0).abs() < 1e-12 && (q.s_b - 1.0).abs() < 1e-12);
    assert!((q.s_ab - WERNER_08_S_AB).abs() < 1e-12);
    assert!((q.i_ab_q - WERNER_08_I).abs() < 1e-12);
    assert!((q.ind_a_given_b.unwrap() - (1.0 - WERNER_08_I)).abs() < 1e-12);
    assert!(q.d_q.unwrap().abs() < 1e-12);
    assert!((t.j_tom - WERNER_08_J).abs() < 1e-12);
    assert!((t.d_discord_tom - (WERNER_08_I - WERNER_08_J)).abs() < 1e-12);
    assert!((o.j_opt - WERNER_08_J).abs() < 1e-9);
    assert!((o.ind_a_given_b_opt.unwrap() - (1.0 - WERNER_08_J)).abs() < 1e-9);
    assert!(o.d_opt.unwrap().abs() < 1e-9);

    let grid = grid_oracle(&s, 24).unwrap();
    assert!((grid - WERNER_08_J).abs() < 1e-12, "grid {grid}");
    let class = a.x_class.unwrap().unwrap();
    assert_eq!(class.kind, XStateKind::TypeI);
    assert!(class.j_gap.abs() < 1e-9);
}

#[test]
fn ensemble_is_independent_of_worker_count() {
    let cfg = OptimizationSettings {
        random_starts: 8,
        ..OptimizationSettings::default()
    };
    let run = |threads: usize| {
        let pool = ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| run_ensemble(StateClass::Mixed, 40, 123, &cfg).unwrap())
    };
    let (one, four) = (run(1), run(4));
    assert_eq!(one.records, four.records);
    assert_eq!(one.stats, four.stats);
}
