//! Tomograms of two-qubit states in local measurement bases, their Shannon
//! entropies, and the "tomographic" scheme in which each qubit is measured in
//! the eigenbasis of its own reduced state.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::correlations::{causal_asymmetry, entropy_bits, quantum_causal_report, BipartiteState};
use crate::error::{Error, Result};
use crate::linalg::{unitary_rows, ComplexMatrix, DensityMatrix, MeasurementBasis};

/// Negative probabilities down to this value are rounding noise and become 0.
pub const PROBABILITY_CLAMP: f64 = 1e-12;
/// Allowed deviation of a distribution's total from 1.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-10;

/// Joint outcome distribution of a local measurement on both qubits.
///
/// `joint[2 * m_a + m_b]` is the probability of outcome `m_a` on A and `m_b` on B.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tomogram {
    joint: [f64; 4],
    marginal_a: [f64; 2],
    marginal_b: [f64; 2],
}

impl Tomogram {
    pub fn from_joint(joint: [f64; 4]) -> Result<Self> {
        validate_distribution(&joint)?;
        Ok(Self::from_joint_unchecked(joint))
    }

    fn from_joint_unchecked(mut joint: [f64; 4]) -> Self {
        for p in &mut joint {
            *p = p.max(0.0);
        }
        Self {
            joint,
            marginal_a: [joint[0] + joint[1], joint[2] + joint[3]],
            marginal_b: [joint[0] + joint[2], joint[1] + joint[3]],
        }
    }

    pub fn joint(&self) -> [f64; 4] {
        self.joint
    }

    pub fn marginal_a(&self) -> [f64; 2] {
        self.marginal_a
    }

    pub fn marginal_b(&self) -> [f64; 2] {
        self.marginal_b
    }

    /// `(H_A, H_B, H_AB)` in bits.
    pub fn entropies(&self) -> (f64, f64, f64) {
        (
            entropy_bits(&self.marginal_a),
            entropy_bits(&self.marginal_b),
            entropy_bits(&self.joint),
        )
    }
}

fn validate_distribution(p: &[f64]) -> Result<()> {
    if let Some(bad) = p
        .iter()
        .find(|&&x| !x.is_finite() || x < -PROBABILITY_CLAMP)
    {
        return Err(Error::InvalidDistribution(format!("entry {bad}")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::InvalidDistribution(format!("total {total}")));
    }
    Ok(())
}

/// Diagonal of `(U_A ⊗ U_B) ρ (U_A ⊗ U_B)†` for measurement rows given directly.
pub(crate) fn joint_probabilities(
    rho: &ComplexMatrix,
    rows_a: &[[Complex64; 2]; 2],
    rows_b: &[[Complex64; 2]; 2],
) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (ma, ra) in rows_a.iter().enumerate() {
        for (mb, rb) in rows_b.iter().enumerate() {
            let w = [ra[0] * rb[0], ra[0] * rb[1], ra[1] * rb[0], ra[1] * rb[1]];
            let mut p = 0.0;
            for i in 0..4 {
                // real part of w_i Σ_j ρ_ij conj(w_j)
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..4 {
                    acc += rho[(i, j)] * w[j].conj();
                }
                p += (w[i] * acc).re;
            }
            out[2 * ma + mb] = p;
        }
    }
    out
}

pub fn tomogram(s: &BipartiteState, ba: &MeasurementBasis, bb: &MeasurementBasis) -> Tomogram {
    let ra = unitary_rows(ba.theta(), ba.phi());
    let rb = unitary_rows(bb.theta(), bb.phi());
    Tomogram::from_joint_unchecked(joint_probabilities(s.rho_ab().matrix(), &ra, &rb))
}

/// Shannon entropy in bits of a probability table.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    validate_distribution(p)?;
    Ok(entropy_bits(p))
}

/// `H(A) + H(B) - H(AB)`, with round-off negatives clamped to zero.
pub fn classical_mutual_information(t: &Tomogram) -> f64 {
    let (ha, hb, hab) = t.entropies();
    (ha + hb - hab).max(0.0)
}

/// Measurement basis whose outcome 0 is the dominant eigenvector of a qubit
/// state, so that rotating into it gives a diagonal with descending entries.
///
/// For `ρ = (I + r·σ)/2` this is the basis with Bloch axis `r / |r|`.
/// A maximally mixed state (within 1e-12) maps to the computational basis.
pub fn diagonalizing_basis(rho: &DensityMatrix) -> MeasurementBasis {
    let m = rho.matrix();
    let half = ComplexMatrix::from_diagonal(&[0.5, 0.5]).expect("2x2");
    if m.max_abs_diff(&half).is_ok_and(|d| d <= 1e-12) {
        return MeasurementBasis::COMPUTATIONAL;
    }
    let rx = 2.0 * m[(0, 1)].re;
    let ry = -2.0 * m[(0, 1)].im;
    let rz = m[(0, 0)].re - m[(1, 1)].re;
    let transverse = rx.hypot(ry);
    let theta = transverse.atan2(rz);
    let phi = if transverse == 0.0 { 0.0 } else { ry.atan2(rx) };
    MeasurementBasis::from_raw_angles(theta, phi)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TomographicReport {
    pub basis_a0: MeasurementBasis,
    pub basis_b0: MeasurementBasis,
    pub tomogram: Tomogram,
    pub h_a0: f64,
    pub h_b0: f64,
    pub h_ab0: f64,
    pub j_tom: f64,
    pub d_discord_tom: f64,
    pub ind_a_given_b_tom: Option<f64>,
    pub ind_b_given_a_tom: Option<f64>,
    pub d_tom: Option<f64>,
    pub degenerate: bool,
}

pub fn tomographic_report(s: &BipartiteState) -> TomographicReport {
    let q = quantum_causal_report(s);
    let basis_a0 = diagonalizing_basis(s.rho_a());
    let basis_b0 = diagonalizing_basis(s.rho_b());
    let t = tomogram(s, &basis_a0, &basis_b0);
    let (h_a0, h_b0, h_ab0) = t.entropies();
    let j_tom = (h_a0 + h_b0 - h_ab0).max(0.0);
    let asym = causal_asymmetry(j_tom, q.s_a, q.s_b);
    TomographicReport {
        basis_a0,
        basis_b0,
        tomogram: t,
        h_a0,
        h_b0,
        h_ab0,
        j_tom,
        d_discord_tom: q.i_ab_q - j_tom,
        ind_a_given_b_tom: asym.map(|a| a.ind_a_given_b),
        ind_b_given_a_tom: asym.map(|a| a.ind_b_given_a),
        d_tom: asym.map(|a| a.d),
        degenerate: asym.is_none(),
    }
}
