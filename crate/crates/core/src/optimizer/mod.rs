//! The "optimal" scheme: local measurement bases that maximise the classical
//! mutual information of the tomogram, and the quantities derived from them.
//!
//! The search runs a Nelder–Mead simplex over the raw Bloch angles
//! `(θ_A, φ_A, θ_B, φ_B)` from several starting points: the tomographic bases
//! (so the result never falls below `J_tom`) plus uniformly random bases. The
//! objective is smooth and periodic in the raw angles, so no bounds are
//! imposed during the search; the winning angles are folded back into the
//! canonical ranges afterwards.

mod simplex;

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use simplex::{minimize, SimplexResult};

use crate::correlations::{
    causal_asymmetry, entropy_bits, quantum_causal_report, Asymmetry, BipartiteState,
};
use crate::error::{Error, Result};
use crate::linalg::{unitary_rows, ComplexMatrix, MeasurementBasis};
use crate::tomography::{diagonalizing_basis, joint_probabilities, tomogram, Tomogram};

/// Edge length (radians) of the initial simplex.
const INITIAL_STEP: f64 = 0.4;
/// Edge length used when restarting from a converged point.
const RESTART_STEP: f64 = 0.05;
const MAX_RESTARTS: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizationSettings {
    pub random_starts: usize,
    pub include_tomographic_start: bool,
    /// Convergence threshold on the spread of `J` (bits) across the simplex.
    pub simplex_tolerance: f64,
    /// Iteration budget for each simplex run.
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for OptimizationSettings {
    fn default() -> Self {
        Self {
            random_starts: 24,
            include_tomographic_start: true,
            simplex_tolerance: 1e-10,
            max_iterations: 2000,
            seed: 0,
        }
    }
}

impl OptimizationSettings {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.random_starts == 0 {
            return Err(Error::InvalidParameter(
                "random_starts must be at least 1".into(),
            ));
        }
        if self.simplex_tolerance.is_nan() || self.simplex_tolerance <= 0.0 {
            return Err(Error::InvalidParameter(
                "simplex_tolerance must be positive".into(),
            ));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter(
                "max_iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimalReport {
    pub basis_a_opt: MeasurementBasis,
    pub basis_b_opt: MeasurementBasis,
    pub tomogram: Tomogram,
    pub j_opt: f64,
    pub h_a_opt: f64,
    pub h_b_opt: f64,
    pub d_discord_opt: f64,
    pub ind_a_given_b_opt: Option<f64>,
    pub ind_b_given_a_opt: Option<f64>,
    pub d_opt: Option<f64>,
    pub degenerate: bool,
    /// Every simplex run met its tolerance within the iteration budget.
    pub converged: bool,
    /// Index of the winning start (0 is the tomographic start when enabled).
    pub best_start: usize,
}

/// Classical mutual information of the tomogram at raw angles `(θ_A, φ_A, θ_B, φ_B)`.
pub fn mutual_information_at(rho: &ComplexMatrix, angles: &[f64; 4]) -> f64 {
    let ra = unitary_rows(angles[0], angles[1]);
    let rb = unitary_rows(angles[2], angles[3]);
    let mut joint = joint_probabilities(rho, &ra, &rb);
    for p in &mut joint {
        *p = p.max(0.0);
    }
    let ha = entropy_bits(&[joint[0] + joint[1], joint[2] + joint[3]]);
    let hb = entropy_bits(&[joint[0] + joint[2], joint[1] + joint[3]]);
    (ha + hb - entropy_bits(&joint)).max(0.0)
}

struct StartOutcome {
    x: [f64; 4],
    j: f64,
    converged: bool,
}

fn climb(rho: &ComplexMatrix, start: [f64; 4], cfg: &OptimizationSettings) -> StartOutcome {
    let objective = |x: &[f64; 4]| -mutual_information_at(rho, x);
    let mut run = minimize(
        objective,
        start,
        INITIAL_STEP,
        cfg.simplex_tolerance,
        cfg.max_iterations,
    );
    let mut converged = run.converged;
    // a collapsed simplex can stall on a slope; restart small until it stops improving
    for _ in 0..MAX_RESTARTS {
        let again = minimize(
            objective,
            run.x,
            RESTART_STEP,
            cfg.simplex_tolerance,
            cfg.max_iterations,
        );
        converged &= again.converged;
        let improved = again.value < run.value - cfg.simplex_tolerance;
        if again.value < run.value {
            run = again;
        }
        if !improved {
            break;
        }
    }
    StartOutcome {
        x: run.x,
        j: -run.value,
        converged,
    }
}

/// Starting points in search order; the tomographic bases come first when enabled.
fn starting_points(s: &BipartiteState, cfg: &OptimizationSettings) -> Vec<[f64; 4]> {
    let mut starts = Vec::with_capacity(cfg.random_starts + 1);
    if cfg.include_tomographic_start {
        let a = diagonalizing_basis(s.rho_a());
        let b = diagonalizing_basis(s.rho_b());
        starts.push([a.theta(), a.phi(), b.theta(), b.phi()]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.random_starts {
        starts.push([
            rng.random_range(0.0..PI),
            rng.random_range(0.0..TAU),
            rng.random_range(0.0..PI),
            rng.random_range(0.0..TAU),
        ]);
    }
    starts
}

/// Multistart maximisation of the classical mutual information over local bases.
///
/// Starts run in parallel; the winner is the largest `J`, ties going to the
/// lowest start index, so the result does not depend on scheduling.
pub fn maximize_mutual_information(
    s: &BipartiteState,
    cfg: &OptimizationSettings,
) -> Result<OptimalReport> {
    cfg.validate()?;
    let rho = s.rho_ab().matrix();
    let starts = starting_points(s, cfg);
    let outcomes: Vec<StartOutcome> = starts.par_iter().map(|&x0| climb(rho, x0, cfg)).collect();

    let mut best_start = 0;
    for (i, o) in outcomes.iter().enumerate() {
        if o.j > outcomes[best_start].j {
            best_start = i;
        }
    }
    let best = &outcomes[best_start];
    let basis_a_opt = MeasurementBasis::from_raw_angles(best.x[0], best.x[1]);
    let basis_b_opt = MeasurementBasis::from_raw_angles(best.x[2], best.x[3]);
    let t = tomogram(s, &basis_a_opt, &basis_b_opt);
    let (h_a_opt, h_b_opt, h_ab) = t.entropies();
    let j_opt = (h_a_opt + h_b_opt - h_ab).max(0.0);

    let i_ab = quantum_causal_report(s).i_ab_q;
    let asym = optimal_causal_quantities(j_opt, h_a_opt, h_b_opt);
    Ok(OptimalReport {
        basis_a_opt,
        basis_b_opt,
        tomogram: t,
        j_opt,
        h_a_opt,
        h_b_opt,
        d_discord_opt: i_ab - j_opt,
        ind_a_given_b_opt: asym.map(|a| a.ind_a_given_b),
        ind_b_given_a_opt: asym.map(|a| a.ind_b_given_a),
        d_opt: asym.map(|a| a.d),
        degenerate: asym.is_none(),
        converged: outcomes.iter().all(|o| o.converged),
        best_start,
    })
}

/// Optimal-scheme independence functions `1 - J_opt / H_opt` and their
/// difference; `None` when either `H_opt` is below the entropy threshold.
pub fn optimal_causal_quantities(j_opt: f64, h_a_opt: f64, h_b_opt: f64) -> Option<Asymmetry> {
    causal_asymmetry(j_opt, h_a_opt, h_b_opt)
}

/// Brute-force maximum of `J` over a product grid of measurement axes.
///
/// `θ` takes `steps` evenly spaced values in `[0, π]` (both poles included)
/// and `φ` takes `steps` values in `[0, 2π)`, for each qubit.
pub fn grid_oracle(s: &BipartiteState, steps: usize) -> Result<f64> {
    if steps < 8 {
        return Err(Error::InvalidParameter(format!(
            "grid needs at least 8 steps, got {steps}"
        )));
    }
    let rho = s.rho_ab().matrix();
    let thetas: Vec<f64> = (0..steps)
        .map(|i| PI * i as f64 / (steps - 1) as f64)
        .collect();
    let phis: Vec<f64> = (0..steps).map(|i| TAU * i as f64 / steps as f64).collect();
    let axes: Vec<(f64, f64)> = thetas
        .iter()
        .flat_map(|&t| phis.iter().map(move |&p| (t, p)))
        .collect();
    let best = axes
        .par_iter()
        .map(|&(ta, pa)| {
            axes.iter()
                .map(|&(tb, pb)| mutual_information_at(rho, &[ta, pa, tb, pb]))
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}
