//! Quantum causal analysis of a two-qubit state: von Neumann entropies,
//! quantum mutual information, the pair of independence functions and their
//! difference `d`.
//!
//! For parties `A` and `B` with entropies `S_A`, `S_B`, `S_AB`:
//!
//! ```text
//! I_AB   = S_A + S_B - S_AB
//! i_A|B  = 1 - I_AB / S_A
//! i_B|A  = 1 - I_AB / S_B
//! d_AB   = i_A|B - i_B|A = I_AB (S_A - S_B) / (S_A S_B)
//! ```
//!
//! The independence functions are undefined when a subsystem entropy falls
//! below [`ENTROPY_EPSILON`]; reports then carry `None` and a `degenerate` flag.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{
    conjugate_by, partial_trace, tensor_product, ComplexMatrix, DensityMatrix, Subsystem,
};

/// Subsystem entropies below this value (bits) are treated as zero.
pub const ENTROPY_EPSILON: f64 = 1e-9;

/// A two-qubit density matrix together with its two reduced states.
#[derive(Clone, Debug)]
pub struct BipartiteState {
    rho_ab: DensityMatrix,
    rho_a: DensityMatrix,
    rho_b: DensityMatrix,
}

impl BipartiteState {
    pub fn new(rho_ab: DensityMatrix) -> Result<Self> {
        let rho_a = partial_trace(&rho_ab, Subsystem::A)?;
        let rho_b = partial_trace(&rho_ab, Subsystem::B)?;
        Ok(Self {
            rho_ab,
            rho_a,
            rho_b,
        })
    }

    pub fn from_matrix(m: ComplexMatrix) -> Result<Self> {
        Self::new(DensityMatrix::new(m)?)
    }

    pub fn rho_ab(&self) -> &DensityMatrix {
        &self.rho_ab
    }

    pub fn rho_a(&self) -> &DensityMatrix {
        &self.rho_a
    }

    pub fn rho_b(&self) -> &DensityMatrix {
        &self.rho_b
    }

    /// `(V_A ⊗ V_B) ρ (V_A ⊗ V_B)†`.
    pub fn apply_local_unitaries(&self, va: &ComplexMatrix, vb: &ComplexMatrix) -> Result<Self> {
        let u = tensor_product(va, vb)?;
        Self::new(conjugate_by(&self.rho_ab, &u)?)
    }
}

/// `-Σ p log2 p` with `0 log 0 = 0`; negative round-off entries count as zero.
pub(crate) fn entropy_bits(p: &[f64]) -> f64 {
    -p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.log2())
        .sum::<f64>()
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_bits(&rho.eigenvalues()).max(0.0)
}

/// Independence functions and their difference for one correlation scheme.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Asymmetry {
    pub ind_a_given_b: f64,
    pub ind_b_given_a: f64,
    pub d: f64,
}

/// Independence functions `1 - info/ent` for each side and their difference.
///
/// `d` is evaluated as `info (ent_a - ent_b) / (ent_a ent_b)` so that its sign
/// follows `ent_a - ent_b` exactly. Returns `None` when either entropy is below
/// [`ENTROPY_EPSILON`].
pub fn causal_asymmetry(info: f64, ent_a: f64, ent_b: f64) -> Option<Asymmetry> {
    if ent_a < ENTROPY_EPSILON || ent_b < ENTROPY_EPSILON {
        return None;
    }
    Some(Asymmetry {
        ind_a_given_b: 1.0 - info / ent_a,
        ind_b_given_a: 1.0 - info / ent_b,
        d: info * (ent_a - ent_b) / (ent_a * ent_b),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumCausalReport {
    pub s_a: f64,
    pub s_b: f64,
    pub s_ab: f64,
    pub i_ab_q: f64,
    pub ind_a_given_b: Option<f64>,
    pub ind_b_given_a: Option<f64>,
    pub d_q: Option<f64>,
    pub degenerate: bool,
}

pub fn quantum_causal_report(s: &BipartiteState) -> QuantumCausalReport {
    let s_a = von_neumann_entropy(s.rho_a());
    let s_b = von_neumann_entropy(s.rho_b());
    let s_ab = von_neumann_entropy(s.rho_ab());
    let i_ab_q = s_a + s_b - s_ab;
    let asym = causal_asymmetry(i_ab_q, s_a, s_b);
    QuantumCausalReport {
        s_a,
        s_b,
        s_ab,
        i_ab_q,
        ind_a_given_b: asym.map(|a| a.ind_a_given_b),
        ind_b_given_a: asym.map(|a| a.ind_b_given_a),
        d_q: asym.map(|a| a.d),
        degenerate: asym.is_none(),
    }
}
