//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use rayon::ThreadPoolBuilder;
use tomocausal::correlations::quantum_causal_report;
use tomocausal::ensemble::{analyze_state, run_ensemble, sample_state, state_seed, StateClass};
use tomocausal::linalg::hermitian_eigendecomposition;
use tomocausal::optimizer::{grid_oracle, maximize_mutual_information, OptimizationSettings};
use tomocausal::states::{
    generate_mixed_state, generate_pure_state, generate_x_state, x_state_eigenvalues, StateRng,
    XStateKind, XStateParams,
};
use tomocausal::tomography::tomographic_report;

const ENSEMBLE_SIZE: usize = 1000;
const MASTER_SEED: u64 = 0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: &[String], summary: String) -> Outcome {
    let mut detail = summary;
    for f in failures.iter().take(5) {
        detail.push_str("\n    ");
        detail.push_str(f);
    }
    Outcome {
        pass: failures.is_empty(),
        detail,
    }
}

fn h2(p: f64) -> f64 {
    let mut h = 0.0;
    for q in [p, 1.0 - p] {
        if q > 0.0 {
            h -= q * q.log2();
        }
    }
    h
}

fn closed_form_pure_states() -> Outcome {
    let mut failures = Vec::new();
    let mut check = |label: &str, got: Option<f64>, want: f64, tol: f64| match got {
        Some(g) if (g - want).abs() <= tol => {}
        other => failures.push(format!("{label}: got {other:?}, want {want}")),
    };

    let bell = XStateParams::werner(1.0).unwrap().to_state().unwrap();
    let cfg = OptimizationSettings::default();
    let a = analyze_state(&bell, None, &cfg).unwrap();
    let (q, t, o) = (&a.quantum, &a.tomographic, &a.optimal);
    check("bell I", Some(q.i_ab_q), 2.0, 1e-9);
    check("bell ind_ab", q.ind_a_given_b, -1.0, 1e-9);
    check("bell ind_ba", q.ind_b_given_a, -1.0, 1e-9);
    check("bell d_q", q.d_q, 0.0, 1e-9);
    check("bell J_tom", Some(t.j_tom), 1.0, 1e-9);
    check("bell J_opt", Some(o.j_opt), 1.0, 1e-9);
    check("bell D_tom", Some(t.d_discord_tom), 1.0, 1e-9);
    check("bell D_opt", Some(o.d_discord_opt), 1.0, 1e-9);

    let mut rng = StateRng::new(MASTER_SEED);
    for k in 0..100 {
        let (alpha, s) = generate_pure_state(&mut rng, 0.01, 0.99).unwrap();
        let cfg = OptimizationSettings::with_seed(k);
        let a = analyze_state(&s, None, &cfg).unwrap();
        let want = h2(alpha * alpha);
        let (t, o) = (&a.tomographic, &a.optimal);
        check(&format!("alpha={alpha} J_tom"), Some(t.j_tom), want, 1e-6);
        check(&format!("alpha={alpha} J_opt"), Some(o.j_opt), want, 1e-6);
        for (name, v) in [
            ("ind_ab_tom", t.ind_a_given_b_tom),
            ("ind_ba_tom", t.ind_b_given_a_tom),
            ("d_tom", t.d_tom),
            ("ind_ab_opt", o.ind_a_given_b_opt),
            ("ind_ba_opt", o.ind_b_given_a_opt),
            ("d_opt", o.d_opt),
        ] {
            check(&format!("alpha={alpha} {name}"), v, 0.0, 1e-6);
        }
    }
    outcome(&failures, "bell preset + 100 random pure states".into())
}

fn exact_identities() -> Outcome {
    let mut failures = Vec::new();
    let mut skipped = 0;
    let mut worst = 0.0f64;
    for i in 0..ENSEMBLE_SIZE {
        let seed = state_seed(MASTER_SEED, i);
        let s = generate_mixed_state(&mut StateRng::new(seed)).unwrap();
        let q = quantum_causal_report(&s);
        let t = tomographic_report(&s);
        let (Some(dq), Some(dt)) = (q.d_q, t.d_tom) else {
            skipped += 1;
            continue;
        };
        let residual = (dt * q.i_ab_q - dq * t.j_tom).abs();
        worst = worst.max(residual);
        if residual > 1e-9 {
            failures.push(format!("seed {seed}: |d_tom I - d_q J_tom| = {residual:e}"));
        }
        if dt * dq < 0.0 {
            failures.push(format!(
                "seed {seed}: sign(d_tom) != sign(d_q) ({dt}, {dq})"
            ));
        }
        if dt.abs() > dq.abs() + 1e-12 {
            failures.push(format!(
                "seed {seed}: |d_tom| = {} > |d_q| = {}",
                dt.abs(),
                dq.abs()
            ));
        }
    }
    outcome(
        &failures,
        format!(
            "{ENSEMBLE_SIZE} states, {skipped} degenerate, worst identity residual {worst:.1e}"
        ),
    )
}

fn inequalities() -> Outcome {
    let cfg = OptimizationSettings::with_seed(MASTER_SEED);
    let ens = run_ensemble(StateClass::Mixed, ENSEMBLE_SIZE, MASTER_SEED, &cfg).unwrap();
    let mut failures = Vec::new();
    for r in &ens.records {
        let mut fail = |what: &str| failures.push(format!("seed {}: {what}", r.seed));
        if r.j_opt < r.j_tom - 1e-9 {
            fail("J_opt < J_tom");
        }
        if r.i_q < r.j_opt - 1e-6 {
            fail("I < J_opt");
        }
        if r.h_a_opt < r.s_a - 1e-9 || r.h_b_opt < r.s_b - 1e-9 {
            fail("H_opt < S");
        }
        if r.disc_tom < r.disc_opt - 1e-6 {
            fail("D_tom < D_opt");
        }
        if r.disc_opt < -1e-6 {
            fail("D_opt < 0");
        }
    }
    outcome(
        &failures,
        format!(
            "{ENSEMBLE_SIZE} states with optimizer in {:.1?}",
            ens.elapsed
        ),
    )
}

fn x_state_subclasses() -> Outcome {
    let cfg = OptimizationSettings::with_seed(MASTER_SEED);
    let mut failures = Vec::new();
    let (mut type_i, mut type_ii) = (0, 0);
    for i in 0..ENSEMBLE_SIZE {
        let seed = state_seed(MASTER_SEED, i);
        let (s, p) = sample_state(StateClass::X, seed).unwrap();
        let cfg = OptimizationSettings {
            seed,
            ..cfg.clone()
        };
        let a = analyze_state(&s, p.as_ref(), &cfg).unwrap();
        let class = match a.x_class.unwrap() {
            Ok(c) => c,
            Err(msg) => {
                failures.push(format!("seed {seed}: {msg}"));
                continue;
            }
        };
        match class.kind {
            XStateKind::TypeI => type_i += 1,
            XStateKind::TypeII => {
                type_ii += 1;
                let o = &a.optimal;
                let residual = class.fit_residual.unwrap_or(f64::INFINITY);
                let d_opt = o.d_opt.unwrap_or(f64::INFINITY);
                if (o.h_a_opt - 1.0).abs() > 1e-3
                    || (o.h_b_opt - 1.0).abs() > 1e-3
                    || d_opt.abs() > 1e-3
                    || residual > 1e-3
                {
                    failures.push(format!(
                        "seed {seed}: H_opt = ({}, {}), d_opt = {d_opt}, fit residual = {residual}",
                        o.h_a_opt, o.h_b_opt
                    ));
                }
            }
        }
    }
    if type_i == 0 || type_ii == 0 {
        failures.push(format!("type I = {type_i}, type II = {type_ii}"));
    }
    outcome(
        &failures,
        format!("{ENSEMBLE_SIZE} states: type I = {type_i}, type II = {type_ii}"),
    )
}

fn ensemble_statistics() -> Outcome {
    let cfg = OptimizationSettings::with_seed(MASTER_SEED);
    let ens = run_ensemble(StateClass::Mixed, ENSEMBLE_SIZE, MASTER_SEED, &cfg).unwrap();
    let s = &ens.stats;
    let mut failures = Vec::new();
    let mut band = |label: &str, got: Option<f64>, centre: f64, tol: f64| match got {
        Some(g) if (g - centre).abs() <= tol => format!("{label} = {g:.3}"),
        other => {
            failures.push(format!("{label} = {other:?} outside {centre} +/- {tol}"));
            format!(
                "{label} = {}",
                other.map_or("undefined".into(), |g| format!("{g:.3}"))
            )
        }
    };
    let parts = [
        band("r(d_tom, d_opt)", s.pearson_r_dtom_dopt, 0.72, 0.10),
        band("slope(d_opt ~ d_tom)", s.slope_dopt_on_dtom, 0.52, 0.10),
        band("sign agreement", s.sign_agreement_fraction, 0.70, 0.07),
        band("r(d_q, d_opt)", s.pearson_r_dq_dopt, 0.58, 0.10),
        band("slope(d_opt ~ d_q)", s.slope_dopt_on_dq, 0.17, 0.08),
    ];
    outcome(
        &failures,
        format!("{}; {} excluded", parts.join(", "), s.excluded_degenerate),
    )
}

fn optimizer_soundness() -> Outcome {
    let mut failures = Vec::new();
    let mut worst = f64::INFINITY;
    let states: Vec<_> = (0..50)
        .map(|i| generate_mixed_state(&mut StateRng::new(state_seed(MASTER_SEED, i))).unwrap())
        .collect();
    let run_all = |threads: usize| {
        let pool = ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            states
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    maximize_mutual_information(s, &OptimizationSettings::with_seed(i as u64))
                        .unwrap()
                })
                .collect::<Vec<_>>()
        })
    };
    let single = run_all(1);
    let again = run_all(1);
    let multi = run_all(4);
    if single != again {
        failures.push("reruns differ".into());
    }
    if single != multi {
        failures.push("1 and 4 workers differ".into());
    }
    for (i, (s, o)) in states.iter().zip(&single).enumerate() {
        let grid = grid_oracle(s, 24).unwrap();
        worst = worst.min(o.j_opt - grid);
        if o.j_opt < grid - 1e-3 {
            failures.push(format!("state {i}: J_opt = {} < grid {grid}", o.j_opt));
        }
    }
    outcome(
        &failures,
        format!("50 states, min(J_opt - grid) = {worst:.2e}, deterministic across 1/4 workers"),
    )
}

fn closed_form_eigenvalues() -> Outcome {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    let mut rng = StateRng::new(MASTER_SEED);
    for k in 0..10_000 {
        let p = generate_x_state(&mut rng);
        let mut closed = x_state_eigenvalues(&p);
        closed.sort_by(|a, b| b.total_cmp(a));
        let general = hermitian_eigendecomposition(&p.to_matrix())
            .unwrap()
            .eigenvalues;
        let err = closed
            .iter()
            .zip(&general)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        worst = worst.max(err);
        if err > 1e-10 {
            failures.push(format!("state {k}: max deviation {err:e}"));
        }
    }
    outcome(
        &failures,
        format!("10000 X-states, worst deviation {worst:.1e}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("1 closed-form pure states", closed_form_pure_states),
        ("2 exact identities", exact_identities),
        ("3 inequality suite", inequalities),
        ("4 X-state subclasses", x_state_subclasses),
        ("5 ensemble statistics", ensemble_statistics),
        ("6 optimizer soundness", optimizer_soundness),
        ("7 closed-form eigenvalues", closed_form_eigenvalues),
    ];
    let mut all = true;
    for (name, run) in criteria {
        let start = Instant::now();
        let o = run();
        all &= o.pass;
        println!(
            "[{}] criterion {name} ({:.1?}): {}",
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed(),
            o.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
