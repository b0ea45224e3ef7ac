use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Projective single-qubit measurement given by the Bloch angles of its axis.
///
/// Outcome 0 projects onto the state pointing along `(theta, phi)` on the
/// Bloch sphere and outcome 1 onto its antipode. The associated unitary is
///
/// ```text
/// U = [  cos(θ/2)          e^{-iφ} sin(θ/2) ]
///     [ -e^{iφ} sin(θ/2)   cos(θ/2)         ]
/// ```
///
/// i.e. the SU(2) matrix with Cayley–Klein pair `α = cos(θ/2)`,
/// `β = e^{-iφ} sin(θ/2)`. Tomograms only see the measurement axis, so the
/// remaining row-phase freedom of a general SU(2) element is dropped.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementBasis {
    theta: f64,
    phi: f64,
}

impl MeasurementBasis {
    /// The computational (σ_z) basis; its unitary is the identity.
    pub const COMPUTATIONAL: Self = Self {
        theta: 0.0,
        phi: 0.0,
    };

    /// Requires `theta ∈ [0, π]` and `phi ∈ [0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        let ok = theta.is_finite()
            && phi.is_finite()
            && (0.0..=PI).contains(&theta)
            && (0.0..TAU).contains(&phi);
        if ok {
            Ok(Self { theta, phi })
        } else {
            Err(Error::InvalidAngles { theta, phi })
        }
    }

    /// Maps arbitrary real angles onto the same measurement (same axis and
    /// outcome labelling) with canonical ranges. Crossing a pole reflects
    /// `theta` and turns the azimuth by π.
    ///
    /// Panics on non-finite input.
    pub fn from_raw_angles(theta: f64, phi: f64) -> Self {
        assert!(
            theta.is_finite() && phi.is_finite(),
            "angles must be finite"
        );
        let mut t = theta.rem_euclid(TAU);
        let mut p = phi;
        if t > PI {
            t = TAU - t;
            p += PI;
        }
        let mut p = p.rem_euclid(TAU);
        if p >= TAU {
            p = 0.0;
        }
        Self { theta: t, phi: p }
    }

    #[inline]
    pub fn theta(&self) -> f64 {
        self.theta
    }

    #[inline]
    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn unitary(&self) -> ComplexMatrix {
        let r = unitary_rows(self.theta, self.phi);
        ComplexMatrix::new(2, vec![r[0][0], r[0][1], r[1][0], r[1][1]])
            .expect("2x2 has four entries")
    }

    /// Unit Bloch vector of outcome 0.
    pub fn bloch_axis(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

impl Default for MeasurementBasis {
    fn default() -> Self {
        Self::COMPUTATIONAL
    }
}

/// Rows of the measurement unitary for raw (unwrapped) angles.
#[inline]
pub(crate) fn unitary_rows(theta: f64, phi: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = (0.5 * theta).sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    [
        [Complex64::new(c, 0.0), e.conj() * s],
        [-e * s, Complex64::new(c, 0.0)],
    ]
}

pub fn basis_to_unitary(b: &MeasurementBasis) -> ComplexMatrix {
    b.unitary()
}
