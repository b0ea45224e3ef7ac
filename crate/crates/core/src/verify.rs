//! Invariant suites run over freshly generated states.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::correlations::quantum_causal_report;
use crate::ensemble::{analyze_state, sample_state, state_seed, StateClass};
use crate::error::{Error, Result};
use crate::linalg::hermitian_eigendecomposition;
use crate::optimizer::{grid_oracle, maximize_mutual_information, OptimizationSettings};
use crate::states::{generate_pure_state, generate_x_state, x_state_eigenvalues, StateRng};
use crate::tomography::tomographic_report;

/// Slack for identities that hold exactly in exact arithmetic.
pub const IDENTITY_TOLERANCE: f64 = 1e-9;
/// Slack for inequalities that depend on the optimizer having converged.
pub const OPTIMIZER_TOLERANCE: f64 = 1e-6;
pub const EIGEN_TOLERANCE: f64 = 1e-10;
/// Allowed shortfall of the optimizer against the grid oracle.
pub const ORACLE_TOLERANCE: f64 = 1e-3;

const MAX_EXAMPLES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Identities,
    Inequalities,
    Eigen,
    Oracle,
    Pure,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = [
        "all",
        "identities",
        "inequalities",
        "eigen",
        "oracle",
        "pure",
    ];
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "identities" => Suite::Identities,
            "inequalities" => Suite::Inequalities,
            "eigen" => Suite::Eigen,
            "oracle" => Suite::Oracle,
            "pure" => Suite::Pure,
            other => return Err(Error::InvalidParameter(format!("unknown suite '{other}'"))),
        })
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// States per suite.
    pub count: usize,
    /// States for the grid-oracle suite, which is far more expensive.
    pub oracle_count: usize,
    pub grid_steps: usize,
    pub seed: u64,
    pub optimizer: OptimizationSettings,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            count: 200,
            oracle_count: 10,
            grid_steps: 24,
            seed: 1,
            optimizer: OptimizationSettings::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub checked: usize,
    pub violations: usize,
    /// The first few violations, for diagnosis.
    pub examples: Vec<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed() { "ok  " } else { "FAIL" };
            writeln!(
                f,
                "{tag} {:<40} {} checked, {} violations",
                c.name, c.checked, c.violations
            )?;
            for e in &c.examples {
                writeln!(f, "       {e}")?;
            }
        }
        Ok(())
    }
}

/// Accumulates named checks; each `check` call is one state tested against one property.
#[derive(Default)]
struct Checks {
    results: Vec<CheckResult>,
}

impl Checks {
    fn check(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        let idx = match self.results.iter().position(|c| c.name == name) {
            Some(i) => i,
            None => {
                self.results.push(CheckResult {
                    name: name.to_string(),
                    checked: 0,
                    violations: 0,
                    examples: Vec::new(),
                });
                self.results.len() - 1
            }
        };
        let c = &mut self.results[idx];
        c.checked += 1;
        if !ok {
            c.violations += 1;
            if c.examples.len() < MAX_EXAMPLES {
                c.examples.push(detail());
            }
        }
    }
}

fn mixed_state(opts: &VerifyOptions, i: usize) -> Result<crate::correlations::BipartiteState> {
    Ok(sample_state(StateClass::Mixed, state_seed(opts.seed, i))?.0)
}

fn identities(opts: &VerifyOptions, out: &mut Checks) -> Result<()> {
    let rows = (0..opts.count)
        .into_par_iter()
        .map(|i| {
            let s = mixed_state(opts, i)?;
            Ok((
                state_seed(opts.seed, i),
                quantum_causal_report(&s),
                tomographic_report(&s),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    for (seed, q, t) in rows {
        let tol = IDENTITY_TOLERANCE;
        out.check(
            "H0 = S on both sides",
            (t.h_a0 - q.s_a).abs() <= tol && (t.h_b0 - q.s_b).abs() <= tol,
            || {
                format!(
                    "seed {seed}: H0 = ({}, {}), S = ({}, {})",
                    t.h_a0, t.h_b0, q.s_a, q.s_b
                )
            },
        );
        out.check(
            "D_tom = H_AB0 - S_AB",
            (t.d_discord_tom - (t.h_ab0 - q.s_ab)).abs() <= tol,
            || {
                format!(
                    "seed {seed}: D_tom = {}, H_AB0 - S_AB = {}",
                    t.d_discord_tom,
                    t.h_ab0 - q.s_ab
                )
            },
        );
        let (Some(dq), Some(dt)) = (q.d_q, t.d_tom) else {
            continue;
        };
        let residual = (dt * q.i_ab_q - dq * t.j_tom).abs();
        out.check("d_tom * I = d_q * J_tom", residual <= tol, || {
            format!("seed {seed}: residual {residual:e}")
        });
        out.check("sign(d_tom) = sign(d_q)", dt * dq >= 0.0, || {
            format!("seed {seed}: d_tom = {dt}, d_q = {dq}")
        });
        out.check("|d_tom| <= |d_q|", dt.abs() <= dq.abs() + tol, || {
            format!("seed {seed}: d_tom = {dt}, d_q = {dq}")
        });
        if let (Some(it), Some(iq)) = (t.ind_a_given_b_tom, q.ind_a_given_b) {
            let want = t.d_discord_tom / q.s_a;
            out.check(
                "i_tom - i_q = D_tom / S",
                ((it - iq) - want).abs() <= tol,
                || {
                    format!(
                        "seed {seed}: i_tom - i_q = {}, D_tom / S_A = {want}",
                        it - iq
                    )
                },
            );
        }
    }
    Ok(())
}

fn inequalities(opts: &VerifyOptions, out: &mut Checks) -> Result<()> {
    let rows = (0..opts.count)
        .into_par_iter()
        .map(|i| {
            let seed = state_seed(opts.seed, i);
            let s = mixed_state(opts, i)?;
            let cfg = OptimizationSettings {
                seed,
                ..opts.optimizer.clone()
            };
            Ok((seed, analyze_state(&s, None, &cfg)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let (id, opt) = (IDENTITY_TOLERANCE, OPTIMIZER_TOLERANCE);
    for (seed, a) in rows {
        let (q, t, o) = (&a.quantum, &a.tomographic, &a.optimal);
        out.check("J_opt >= J_tom", o.j_opt >= t.j_tom - id, || {
            format!("seed {seed}: J_opt = {}, J_tom = {}", o.j_opt, t.j_tom)
        });
        out.check("I >= J_opt", q.i_ab_q >= o.j_opt - opt, || {
            format!("seed {seed}: I = {}, J_opt = {}", q.i_ab_q, o.j_opt)
        });
        out.check(
            "H_opt >= S on both sides",
            o.h_a_opt >= q.s_a - id && o.h_b_opt >= q.s_b - id,
            || {
                format!(
                    "seed {seed}: H_opt = ({}, {}), S = ({}, {})",
                    o.h_a_opt, o.h_b_opt, q.s_a, q.s_b
                )
            },
        );
        out.check(
            "D_tom >= D_opt",
            t.d_discord_tom >= o.d_discord_opt - opt,
            || {
                format!(
                    "seed {seed}: D_tom = {}, D_opt = {}",
                    t.d_discord_tom, o.d_discord_opt
                )
            },
        );
        out.check("D_opt >= 0", o.d_discord_opt >= -opt, || {
            format!("seed {seed}: D_opt = {}", o.d_discord_opt)
        });
        let ind = [
            t.ind_a_given_b_tom,
            t.ind_b_given_a_tom,
            o.ind_a_given_b_opt,
            o.ind_b_given_a_opt,
        ];
        out.check(
            "classical independence in [0, 1]",
            ind.iter().flatten().all(|&v| (-id..=1.0 + id).contains(&v)),
            || format!("seed {seed}: {ind:?}"),
        );
    }
    Ok(())
}

fn eigen(opts: &VerifyOptions, out: &mut Checks) -> Result<()> {
    let mut rng = StateRng::new(opts.seed);
    for k in 0..opts.count {
        let p = generate_x_state(&mut rng);
        let mut closed = x_state_eigenvalues(&p);
        closed.sort_by(|a, b| b.total_cmp(a));
        let general = hermitian_eigendecomposition(&p.to_matrix())?.eigenvalues;
        let err = closed
            .iter()
            .zip(&general)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        out.check(
            "X-state closed-form eigenvalues",
            err <= EIGEN_TOLERANCE,
            || format!("state {k}: deviation {err:e}"),
        );
    }
    for i in 0..opts.count {
        let s = mixed_state(opts, i)?;
        let m = s.rho_ab().matrix();
        let e = hermitian_eigendecomposition(m)?;
        let err = e.reconstruct().max_abs_diff(m)?;
        out.check(
            "eigendecomposition reconstructs",
            err <= EIGEN_TOLERANCE,
            || format!("state {i}: deviation {err:e}"),
        );
    }
    Ok(())
}

fn oracle(opts: &VerifyOptions, out: &mut Checks) -> Result<()> {
    for i in 0..opts.oracle_count {
        let seed = state_seed(opts.seed, i);
        let s = mixed_state(opts, i)?;
        let cfg = OptimizationSettings {
            seed,
            ..opts.optimizer.clone()
        };
        let j_opt = maximize_mutual_information(&s, &cfg)?.j_opt;
        let grid = grid_oracle(&s, opts.grid_steps)?;
        out.check(
            "optimizer >= grid oracle",
            j_opt >= grid - ORACLE_TOLERANCE,
            || format!("seed {seed}: J_opt = {j_opt}, grid = {grid}"),
        );
    }
    Ok(())
}

fn pure(opts: &VerifyOptions, out: &mut Checks) -> Result<()> {
    let rows = (0..opts.count)
        .into_par_iter()
        .map(|i| {
            let seed = state_seed(opts.seed, i);
            let (alpha, s) = generate_pure_state(&mut StateRng::new(seed), 0.01, 0.99)?;
            let cfg = OptimizationSettings {
                seed,
                ..opts.optimizer.clone()
            };
            Ok((alpha, analyze_state(&s, None, &cfg)?))
        })
        .collect::<Result<Vec<_>>>()?;
    for (alpha, a) in rows {
        let (q, t, o) = (&a.quantum, &a.tomographic, &a.optimal);
        let near = |v: Option<f64>, want: f64, tol: f64| v.is_some_and(|v| (v - want).abs() <= tol);
        out.check(
            "pure: quantum independence = -1",
            near(q.ind_a_given_b, -1.0, IDENTITY_TOLERANCE)
                && near(q.ind_b_given_a, -1.0, IDENTITY_TOLERANCE),
            || {
                format!(
                    "alpha {alpha}: ({:?}, {:?})",
                    q.ind_a_given_b, q.ind_b_given_a
                )
            },
        );
        out.check(
            "pure: J_tom = J_opt = S_A",
            (t.j_tom - q.s_a).abs() <= OPTIMIZER_TOLERANCE
                && (o.j_opt - q.s_a).abs() <= OPTIMIZER_TOLERANCE,
            || {
                format!(
                    "alpha {alpha}: J_tom = {}, J_opt = {}, S_A = {}",
                    t.j_tom, o.j_opt, q.s_a
                )
            },
        );
        out.check(
            "pure: all asymmetries vanish",
            near(q.d_q, 0.0, IDENTITY_TOLERANCE)
                && near(t.d_tom, 0.0, IDENTITY_TOLERANCE)
                && near(o.d_opt, 0.0, OPTIMIZER_TOLERANCE),
            || {
                format!(
                    "alpha {alpha}: d = ({:?}, {:?}, {:?})",
                    q.d_q, t.d_tom, o.d_opt
                )
            },
        );
    }
    Ok(())
}

/// Runs one suite (or all of them) and collects per-check violation counts.
pub fn verify(suite: Suite, opts: &VerifyOptions) -> Result<VerifyReport> {
    if opts.count == 0 {
        return Err(Error::InvalidParameter(
            "verify needs at least one state".into(),
        ));
    }
    opts.optimizer.validate()?;
    let mut out = Checks::default();
    let run = |s: Suite| suite == Suite::All || suite == s;
    if run(Suite::Identities) {
        identities(opts, &mut out)?;
    }
    if run(Suite::Inequalities) {
        inequalities(opts, &mut out)?;
    }
    if run(Suite::Eigen) {
        eigen(opts, &mut out)?;
    }
    if run(Suite::Oracle) {
        oracle(opts, &mut out)?;
    }
    if run(Suite::Pure) {
        pure(opts, &mut out)?;
    }
    Ok(VerifyReport {
        checks: out.results,
    })
}
