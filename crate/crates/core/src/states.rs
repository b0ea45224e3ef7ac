//! State families: pure states in Schmidt form, X-states and generic mixed
//! states, with the seeded random generators used for ensembles.
//!
//! An X-state has non-zero entries only on the diagonal and anti-diagonal:
//!
//! ```text
//! [ ρ11   0     0     ρ14 ]
//! [ 0     ρ22   ρ23   0   ]
//! [ 0     ρ23*  ρ33   0   ]
//! [ ρ14*  0     0     ρ44 ]
//! ```

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::correlations::{entropy_bits, BipartiteState};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, MeasurementBasis};
use crate::optimizer::OptimalReport;
use crate::tomography::TomographicReport;

/// Tolerance on the X-state constraints (normalisation and coherence bounds).
pub const X_STATE_TOLERANCE: f64 = 1e-12;
/// `J_opt - J_tom` (bits) at or below which an X-state is of type I.
pub const CLASSIFICATION_TOLERANCE: f64 = 1e-6;
/// Tolerance of the type II consistency checks (`H_opt = 1`, `d_opt = 0`, basis form).
pub const TYPE_II_TOLERANCE: f64 = 1e-3;

/// Seeded random source for the state generators.
///
/// The same seed always reproduces the same stream. Ensembles derive one
/// generator per state (`master_seed + index`) instead of sharing one stream.
#[derive(Clone, Debug)]
pub struct StateRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl StateRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw from `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.inner.random_range(lo..hi)
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XStateParams {
    pub rho11: f64,
    pub rho22: f64,
    pub rho33: f64,
    pub rho44: f64,
    pub rho14: Complex64,
    pub rho23: Complex64,
}

impl XStateParams {
    pub fn new(diagonal: [f64; 4], rho14: Complex64, rho23: Complex64) -> Result<Self> {
        let p = Self {
            rho11: diagonal[0],
            rho22: diagonal[1],
            rho33: diagonal[2],
            rho44: diagonal[3],
            rho14,
            rho23,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn diagonal(&self) -> [f64; 4] {
        [self.rho11, self.rho22, self.rho33, self.rho44]
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.diagonal();
        if d.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "X-state diagonal {d:?} must be non-negative"
            )));
        }
        let total: f64 = d.iter().sum();
        if (total - 1.0).abs() > X_STATE_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "X-state diagonal sums to {total}"
            )));
        }
        if self.rho14.norm_sqr() > self.rho11 * self.rho44 + X_STATE_TOLERANCE {
            return Err(Error::InvalidParameter("|ρ14|² exceeds ρ11 ρ44".into()));
        }
        if self.rho23.norm_sqr() > self.rho22 * self.rho33 + X_STATE_TOLERANCE {
            return Err(Error::InvalidParameter("|ρ23|² exceeds ρ22 ρ33".into()));
        }
        Ok(())
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::from_diagonal(&self.diagonal()).expect("4x4");
        m[(0, 3)] = self.rho14;
        m[(3, 0)] = self.rho14.conj();
        m[(1, 2)] = self.rho23;
        m[(2, 1)] = self.rho23.conj();
        m
    }

    pub fn to_state(&self) -> Result<BipartiteState> {
        BipartiteState::from_matrix(self.to_matrix())
    }

    /// Werner state `p |Φ+><Φ+| + (1 - p) I/4`, `p ∈ [0, 1]`.
    pub fn werner(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "Werner weight {p} outside [0, 1]"
            )));
        }
        let hi = 0.25 * (1.0 + p);
        let lo = 0.25 * (1.0 - p);
        Self::new(
            [hi, lo, lo, hi],
            Complex64::new(0.5 * p, 0.0),
            Complex64::new(0.0, 0.0),
        )
    }
}

/// Closed-form spectrum of an X-state in the order `λ1, λ2, λ3, λ4` (the
/// `±` pairs of the outer and inner blocks).
pub fn x_state_eigenvalues(p: &XStateParams) -> [f64; 4] {
    let block = |a: f64, b: f64, c: Complex64| {
        let root = ((a - b).powi(2) + 4.0 * c.norm_sqr()).sqrt();
        [0.5 * (a + b + root), 0.5 * (a + b - root)]
    };
    let [l1, l2] = block(p.rho11, p.rho44, p.rho14);
    let [l3, l4] = block(p.rho22, p.rho33, p.rho23);
    [l1, l2, l3, l4]
}

/// Random X-state: uniform weights normalised onto the
/// diagonal, coherences at a uniform fraction of their bound with uniform phase.
pub fn generate_x_state(rng: &mut StateRng) -> XStateParams {
    let weights: [f64; 4] = std::array::from_fn(|_| rng.uniform(0.0, 1.0));
    let total: f64 = weights.iter().sum();
    let d = weights.map(|w| w / total);
    let alpha1 = rng.uniform(0.0, 1.0);
    let alpha2 = rng.uniform(0.0, 1.0);
    let phi1 = rng.uniform(0.0, TAU);
    let phi2 = rng.uniform(0.0, TAU);
    XStateParams {
        rho11: d[0],
        rho22: d[1],
        rho33: d[2],
        rho44: d[3],
        rho14: Complex64::from_polar(alpha1 * (d[0] * d[3]).sqrt(), phi1),
        rho23: Complex64::from_polar(alpha2 * (d[1] * d[2]).sqrt(), phi2),
    }
}

/// Random mixture of four normalised pure states whose amplitudes have
/// independent standard-normal real and imaginary parts, with uniform weights.
pub fn generate_mixed_state(rng: &mut StateRng) -> Result<BipartiteState> {
    let weights: [f64; 4] = std::array::from_fn(|_| rng.uniform(0.0, 1.0));
    let total: f64 = weights.iter().sum();
    let mut rho = ComplexMatrix::zeros(4)?;
    for w in weights {
        let re: [f64; 4] = std::array::from_fn(|_| rng.standard_normal());
        let im: [f64; 4] = std::array::from_fn(|_| rng.standard_normal());
        let psi: Vec<Complex64> = re
            .iter()
            .zip(&im)
            .map(|(&a, &b)| Complex64::new(a, b))
            .collect();
        let norm_sqr: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        let proj = ComplexMatrix::outer(&psi)?;
        rho = rho.add(&proj.scale(Complex64::new(w / (total * norm_sqr), 0.0)))?;
    }
    BipartiteState::from_matrix(rho)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureSchmidtParams {
    pub alpha: f64,
    pub local_basis_a: MeasurementBasis,
    pub local_basis_b: MeasurementBasis,
}

impl PureSchmidtParams {
    pub fn computational(alpha: f64) -> Self {
        Self {
            alpha,
            local_basis_a: MeasurementBasis::COMPUTATIONAL,
            local_basis_b: MeasurementBasis::COMPUTATIONAL,
        }
    }
}

/// Eigenvectors `|e_0>, |e_1>` of a measurement (conjugated rows of its unitary).
fn basis_vectors(b: &MeasurementBasis) -> [[Complex64; 2]; 2] {
    let u = b.unitary();
    [
        [u[(0, 0)].conj(), u[(0, 1)].conj()],
        [u[(1, 0)].conj(), u[(1, 1)].conj()],
    ]
}

/// `α |u0 v0> + sqrt(1 - α²) |u1 v1>` with the Schmidt bases given by the
/// outcome vectors of the two measurement bases.
pub fn make_pure_schmidt(p: &PureSchmidtParams) -> Result<BipartiteState> {
    if !(p.alpha > 0.0 && p.alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "Schmidt coefficient {} outside (0, 1)",
            p.alpha
        )));
    }
    let u = basis_vectors(&p.local_basis_a);
    let v = basis_vectors(&p.local_basis_b);
    let beta = (1.0 - p.alpha * p.alpha).sqrt();
    let psi: Vec<Complex64> = (0..4)
        .map(|i| p.alpha * u[0][i >> 1] * v[0][i & 1] + beta * u[1][i >> 1] * v[1][i & 1])
        .collect();
    BipartiteState::new(DensityMatrix::pure(&psi)?)
}

/// Random Schmidt coefficient in `[lo, hi)` with uniformly random Schmidt axes.
pub fn generate_pure_state(rng: &mut StateRng, lo: f64, hi: f64) -> Result<(f64, BipartiteState)> {
    let alpha = rng.uniform(lo, hi);
    let mut axis = || {
        let theta = (1.0 - 2.0 * rng.uniform(0.0, 1.0)).acos();
        MeasurementBasis::from_raw_angles(theta, rng.uniform(0.0, TAU))
    };
    let local_basis_a = axis();
    let local_basis_b = axis();
    let state = make_pure_schmidt(&PureSchmidtParams {
        alpha,
        local_basis_a,
        local_basis_b,
    })?;
    Ok((alpha, state))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum XStateKind {
    /// Optimal bases coincide with the tomographic ones.
    TypeI,
    /// Equatorial optimal bases with strictly more correlation than the
    /// tomographic ones.
    TypeII,
}

impl XStateKind {
    pub fn label(&self) -> &'static str {
        match self {
            XStateKind::TypeI => "I",
            XStateKind::TypeII => "II",
        }
    }
}

/// Best fit of a qubit unitary to `H · diag(1, e^{-iφ})` modulo row phases.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseFit {
    pub phi: f64,
    /// Frobenius distance to the template after optimal row phases.
    pub residual: f64,
}

/// Least-squares fit of `u` to the Hadamard-times-phase family
/// `(1/√2) [[1, e^{-iφ}], [1, -e^{-iφ}]]`, allowing a free phase on each row.
///
/// This family is exactly the set of equatorial measurements with azimuth `φ`.
pub fn fit_hadamard_phase(u: &ComplexMatrix) -> PhaseFit {
    let (u00, u01) = (u[(0, 0)], u[(0, 1)]);
    let phi = if u01.norm() == 0.0 || u00.norm() == 0.0 {
        0.0
    } else {
        (u00.arg() - u01.arg()).rem_euclid(TAU)
    };
    let e = Complex64::from_polar(1.0, -phi);
    let rows = [
        [Complex64::new(FRAC_1_SQRT_2, 0.0), e * FRAC_1_SQRT_2],
        [Complex64::new(FRAC_1_SQRT_2, 0.0), -e * FRAC_1_SQRT_2],
    ];
    let mut sq = 0.0;
    for (m, t) in rows.iter().enumerate() {
        let overlap = (t[0].conj() * u[(m, 0)] + t[1].conj() * u[(m, 1)]).norm();
        sq += (2.0 - 2.0 * overlap).max(0.0);
    }
    PhaseFit {
        phi: if phi >= TAU { 0.0 } else { phi },
        residual: sq.sqrt(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XStateClass {
    pub kind: XStateKind,
    /// Azimuth of A's optimal measurement (type II only).
    pub phi_a: Option<f64>,
    pub phi_b: Option<f64>,
    pub fit_residual: Option<f64>,
    /// `J_opt - J_tom` in bits.
    pub j_gap: f64,
}

/// Sorts an X-state into type I (`J_opt = J_tom`) or type II, checking that a
/// type II optimum is the symmetric equatorial one (`H_opt = 1` on both
/// sides, `d_opt = 0`, Hadamard-times-phase bases).
///
/// A type II report failing those checks yields
/// [`Error::ClassificationInconsistency`], which points at the optimizer.
pub fn classify_x_state(
    p: &XStateParams,
    opt: &OptimalReport,
    tom: &TomographicReport,
) -> Result<XStateClass> {
    p.validate()?;
    let h_diag = entropy_bits(&p.diagonal());
    if (tom.h_ab0 - h_diag).abs() > 1e-9 {
        return Err(Error::InvalidParameter(
            "tomographic report does not belong to these X-state parameters".into(),
        ));
    }
    let j_gap = opt.j_opt - tom.j_tom;
    if j_gap <= CLASSIFICATION_TOLERANCE {
        return Ok(XStateClass {
            kind: XStateKind::TypeI,
            phi_a: None,
            phi_b: None,
            fit_residual: None,
            j_gap,
        });
    }

    let fa = fit_hadamard_phase(&opt.basis_a_opt.unitary());
    let fb = fit_hadamard_phase(&opt.basis_b_opt.unitary());
    let d_opt = opt.d_opt.unwrap_or(f64::NAN);
    let consistent = (opt.h_a_opt - 1.0).abs() <= TYPE_II_TOLERANCE
        && (opt.h_b_opt - 1.0).abs() <= TYPE_II_TOLERANCE
        && d_opt.abs() <= TYPE_II_TOLERANCE
        && fa.residual <= TYPE_II_TOLERANCE
        && fb.residual <= TYPE_II_TOLERANCE;
    if !consistent {
        return Err(Error::ClassificationInconsistency(format!(
            "J gap {j_gap:e} but H_A={}, H_B={}, d_opt={d_opt}, fit residuals ({}, {})",
            opt.h_a_opt, opt.h_b_opt, fa.residual, fb.residual
        )));
    }
    Ok(XStateClass {
        kind: XStateKind::TypeII,
        phi_a: Some(fa.phi),
        phi_b: Some(fb.phi),
        fit_residual: Some(fa.residual.max(fb.residual)),
        j_gap,
    })
}
