//! Seeded ensembles of random states, one flat record per state, and the
//! cross-ensemble statistics comparing the three asymmetry measures.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlations::{quantum_causal_report, BipartiteState, QuantumCausalReport};
use crate::error::{Error, Result};
use crate::optimizer::{maximize_mutual_information, OptimalReport, OptimizationSettings};
use crate::states::{
    classify_x_state, generate_mixed_state, generate_pure_state, generate_x_state,
    make_pure_schmidt, PureSchmidtParams, StateRng, XStateClass, XStateKind, XStateParams,
};
use crate::stats::{pearson_r, slope_through_origin};
use crate::tomography::{tomographic_report, TomographicReport};

/// Schmidt coefficients of random pure states are drawn from this range.
pub const PURE_ALPHA_RANGE: (f64, f64) = (0.01, 0.99);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateClass {
    X,
    Mixed,
    Pure,
}

impl StateClass {
    pub fn label(&self) -> &'static str {
        match self {
            StateClass::X => "x",
            StateClass::Mixed => "mixed",
            StateClass::Pure => "pure",
        }
    }
}

impl fmt::Display for StateClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for StateClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" => Ok(StateClass::X),
            "mixed" => Ok(StateClass::Mixed),
            "pure" => Ok(StateClass::Pure),
            other => Err(Error::InvalidParameter(format!(
                "unknown state class '{other}'"
            ))),
        }
    }
}

/// X-state label as written to records; `Inconsistent` marks a classification
/// error (a type II gap without the symmetric optimum).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum XTypeTag {
    I,
    II,
    #[serde(rename = "inconsistent")]
    Inconsistent,
}

impl XTypeTag {
    pub fn label(&self) -> &'static str {
        match self {
            XTypeTag::I => "I",
            XTypeTag::II => "II",
            XTypeTag::Inconsistent => "inconsistent",
        }
    }
}

/// Everything computed for one state.
#[derive(Clone, Debug)]
pub struct StateAnalysis {
    pub quantum: QuantumCausalReport,
    pub tomographic: TomographicReport,
    pub optimal: OptimalReport,
    /// Present for X-states; `Err` when the classification is inconsistent.
    pub x_class: Option<std::result::Result<XStateClass, String>>,
}

impl StateAnalysis {
    pub fn x_tag(&self) -> Option<XTypeTag> {
        self.x_class.as_ref().map(|c| match c {
            Ok(c) if c.kind == XStateKind::TypeI => XTypeTag::I,
            Ok(_) => XTypeTag::II,
            Err(_) => XTypeTag::Inconsistent,
        })
    }
}

pub fn analyze_state(
    s: &BipartiteState,
    x_params: Option<&XStateParams>,
    cfg: &OptimizationSettings,
) -> Result<StateAnalysis> {
    let quantum = quantum_causal_report(s);
    let tomographic = tomographic_report(s);
    let optimal = maximize_mutual_information(s, cfg)?;
    let x_class = x_params.map(|p| match classify_x_state(p, &optimal, &tomographic) {
        Ok(c) => Ok(c),
        Err(Error::ClassificationInconsistency(msg)) => Err(msg),
        Err(e) => Err(e.to_string()),
    });
    Ok(StateAnalysis {
        quantum,
        tomographic,
        optimal,
        x_class,
    })
}

/// One row of ensemble output. Optional fields are `None` for degenerate
/// states (a subsystem entropy below the threshold).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleRecord {
    pub index: usize,
    pub seed: u64,
    pub class: StateClass,
    pub s_a: f64,
    pub s_b: f64,
    pub s_ab: f64,
    pub i_q: f64,
    pub ind_ab_q: Option<f64>,
    pub ind_ba_q: Option<f64>,
    pub d_q: Option<f64>,
    pub h_a0: f64,
    pub h_b0: f64,
    pub h_ab0: f64,
    pub j_tom: f64,
    pub disc_tom: f64,
    pub ind_ab_tom: Option<f64>,
    pub ind_ba_tom: Option<f64>,
    pub d_tom: Option<f64>,
    pub theta_a_opt: f64,
    pub phi_a_opt: f64,
    pub theta_b_opt: f64,
    pub phi_b_opt: f64,
    pub j_opt: f64,
    pub h_a_opt: f64,
    pub h_b_opt: f64,
    pub disc_opt: f64,
    pub ind_ab_opt: Option<f64>,
    pub ind_ba_opt: Option<f64>,
    pub d_opt: Option<f64>,
    pub x_type: Option<XTypeTag>,
    pub degenerate: bool,
}

impl EnsembleRecord {
    pub const CSV_HEADER: &'static str = "index,seed,class,s_a,s_b,s_ab,i_q,ind_ab_q,ind_ba_q,d_q,\
h_a0,h_b0,h_ab0,j_tom,disc_tom,ind_ab_tom,ind_ba_tom,d_tom,\
theta_a_opt,phi_a_opt,theta_b_opt,phi_b_opt,j_opt,h_a_opt,h_b_opt,disc_opt,ind_ab_opt,ind_ba_opt,d_opt,\
x_type,degenerate";

    pub fn from_analysis(index: usize, seed: u64, class: StateClass, a: &StateAnalysis) -> Self {
        let (q, t, o) = (&a.quantum, &a.tomographic, &a.optimal);
        Self {
            index,
            seed,
            class,
            s_a: q.s_a,
            s_b: q.s_b,
            s_ab: q.s_ab,
            i_q: q.i_ab_q,
            ind_ab_q: q.ind_a_given_b,
            ind_ba_q: q.ind_b_given_a,
            d_q: q.d_q,
            h_a0: t.h_a0,
            h_b0: t.h_b0,
            h_ab0: t.h_ab0,
            j_tom: t.j_tom,
            disc_tom: t.d_discord_tom,
            ind_ab_tom: t.ind_a_given_b_tom,
            ind_ba_tom: t.ind_b_given_a_tom,
            d_tom: t.d_tom,
            theta_a_opt: o.basis_a_opt.theta(),
            phi_a_opt: o.basis_a_opt.phi(),
            theta_b_opt: o.basis_b_opt.theta(),
            phi_b_opt: o.basis_b_opt.phi(),
            j_opt: o.j_opt,
            h_a_opt: o.h_a_opt,
            h_b_opt: o.h_b_opt,
            disc_opt: o.d_discord_opt,
            ind_ab_opt: o.ind_a_given_b_opt,
            ind_ba_opt: o.ind_b_given_a_opt,
            d_opt: o.d_opt,
            x_type: a.x_tag(),
            degenerate: q.degenerate || t.degenerate || o.degenerate,
        }
    }

    /// The three asymmetries when all are defined.
    pub fn asymmetries(&self) -> Option<(f64, f64, f64)> {
        if self.degenerate {
            return None;
        }
        Some((self.d_q?, self.d_tom?, self.d_opt?))
    }

    /// Comma-separated row matching [`Self::CSV_HEADER`]; floats use the
    /// shortest representation that round-trips.
    pub fn to_csv_row(&self) -> String {
        fn opt(x: Option<f64>) -> String {
            x.map(|v| v.to_string()).unwrap_or_default()
        }
        let fields = [
            self.index.to_string(),
            self.seed.to_string(),
            self.class.label().to_string(),
            self.s_a.to_string(),
            self.s_b.to_string(),
            self.s_ab.to_string(),
            self.i_q.to_string(),
            opt(self.ind_ab_q),
            opt(self.ind_ba_q),
            opt(self.d_q),
            self.h_a0.to_string(),
            self.h_b0.to_string(),
            self.h_ab0.to_string(),
            self.j_tom.to_string(),
            self.disc_tom.to_string(),
            opt(self.ind_ab_tom),
            opt(self.ind_ba_tom),
            opt(self.d_tom),
            self.theta_a_opt.to_string(),
            self.phi_a_opt.to_string(),
            self.theta_b_opt.to_string(),
            self.phi_b_opt.to_string(),
            self.j_opt.to_string(),
            self.h_a_opt.to_string(),
            self.h_b_opt.to_string(),
            self.disc_opt.to_string(),
            opt(self.ind_ab_opt),
            opt(self.ind_ba_opt),
            opt(self.d_opt),
            self.x_type
                .map(|t| t.label().to_string())
                .unwrap_or_default(),
            self.degenerate.to_string(),
        ];
        fields.join(",")
    }
}

/// Writes the header line followed by one row per record.
pub fn write_csv<W: Write>(out: &mut W, records: &[EnsembleRecord]) -> Result<()> {
    writeln!(out, "{}", EnsembleRecord::CSV_HEADER)?;
    for r in records {
        writeln!(out, "{}", r.to_csv_row())?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub total: usize,
    /// Rows left out of every statistic because they are degenerate.
    pub excluded_degenerate: usize,
    pub pearson_r_dtom_dopt: Option<f64>,
    pub pearson_r_dq_dopt: Option<f64>,
    pub pearson_r_dq_dtom: Option<f64>,
    pub slope_dopt_on_dtom: Option<f64>,
    pub slope_dopt_on_dq: Option<f64>,
    /// Fraction of non-degenerate rows with `d_tom · d_opt > 0`.
    pub sign_agreement_fraction: Option<f64>,
    pub type_i: Option<usize>,
    pub type_ii: Option<usize>,
    pub type_inconsistent: Option<usize>,
}

/// Correlation and regression figures over the non-degenerate records.
/// Statistics that are undefined (too few rows, zero variance) are `None`.
pub fn compute_stats(records: &[EnsembleRecord]) -> SummaryStats {
    let triples: Vec<(f64, f64, f64)> = records.iter().filter_map(|r| r.asymmetries()).collect();
    let dq: Vec<f64> = triples.iter().map(|t| t.0).collect();
    let dt: Vec<f64> = triples.iter().map(|t| t.1).collect();
    let dop: Vec<f64> = triples.iter().map(|t| t.2).collect();

    let count_tag = |tag: XTypeTag| records.iter().filter(|r| r.x_type == Some(tag)).count();
    let has_x = records.iter().any(|r| r.x_type.is_some());

    SummaryStats {
        total: records.len(),
        excluded_degenerate: records.len() - triples.len(),
        pearson_r_dtom_dopt: pearson_r(&dt, &dop).ok(),
        pearson_r_dq_dopt: pearson_r(&dq, &dop).ok(),
        pearson_r_dq_dtom: pearson_r(&dq, &dt).ok(),
        slope_dopt_on_dtom: slope_through_origin(&dt, &dop).ok(),
        slope_dopt_on_dq: slope_through_origin(&dq, &dop).ok(),
        sign_agreement_fraction: if triples.is_empty() {
            None
        } else {
            let agree = triples.iter().filter(|t| t.1 * t.2 > 0.0).count();
            Some(agree as f64 / triples.len() as f64)
        },
        type_i: has_x.then(|| count_tag(XTypeTag::I)),
        type_ii: has_x.then(|| count_tag(XTypeTag::II)),
        type_inconsistent: has_x.then(|| count_tag(XTypeTag::Inconsistent)),
    }
}

/// Seed of the `index`-th state of an ensemble.
pub fn state_seed(master_seed: u64, index: usize) -> u64 {
    master_seed.wrapping_add(index as u64)
}

/// Draws one state of the given class from a fresh generator seeded with `seed`.
pub fn sample_state(
    class: StateClass,
    seed: u64,
) -> Result<(BipartiteState, Option<XStateParams>)> {
    let mut rng = StateRng::new(seed);
    match class {
        StateClass::X => {
            let p = generate_x_state(&mut rng);
            Ok((p.to_state()?, Some(p)))
        }
        StateClass::Mixed => Ok((generate_mixed_state(&mut rng)?, None)),
        StateClass::Pure => {
            let (_, s) = generate_pure_state(&mut rng, PURE_ALPHA_RANGE.0, PURE_ALPHA_RANGE.1)?;
            Ok((s, None))
        }
    }
}

#[derive(Clone, Debug)]
pub struct Ensemble {
    pub records: Vec<EnsembleRecord>,
    pub stats: SummaryStats,
    pub elapsed: Duration,
}

/// Generates and analyses `count` states. State `i` uses seed
/// `master_seed + i` for both its generator and its optimizer starts, so the
/// output does not depend on the number of worker threads.
pub fn run_ensemble(
    class: StateClass,
    count: usize,
    master_seed: u64,
    cfg: &OptimizationSettings,
) -> Result<Ensemble> {
    if count == 0 {
        return Err(Error::InvalidParameter(
            "ensemble needs at least one state".into(),
        ));
    }
    cfg.validate()?;
    let start = Instant::now();
    let records = (0..count)
        .into_par_iter()
        .map(|i| {
            let seed = state_seed(master_seed, i);
            let (state, x) = sample_state(class, seed)?;
            let cfg = OptimizationSettings {
                seed,
                ..cfg.clone()
            };
            let a = analyze_state(&state, x.as_ref(), &cfg)?;
            Ok(EnsembleRecord::from_analysis(i, seed, class, &a))
        })
        .collect::<Result<Vec<_>>>()?;
    let stats = compute_stats(&records);
    Ok(Ensemble {
        records,
        stats,
        elapsed: start.elapsed(),
    })
}

/// Records for pure states `α |00> + sqrt(1 - α²) |11>` on an even grid
/// `α_i = (i + 1) / (count + 1)`.
pub fn sweep_pure(count: usize, cfg: &OptimizationSettings) -> Result<Vec<EnsembleRecord>> {
    if count == 0 {
        return Err(Error::InvalidParameter(
            "sweep needs at least one point".into(),
        ));
    }
    (0..count)
        .into_par_iter()
        .map(|i| {
            let alpha = (i + 1) as f64 / (count + 1) as f64;
            let s = make_pure_schmidt(&PureSchmidtParams::computational(alpha))?;
            let cfg = OptimizationSettings {
                seed: state_seed(cfg.seed, i),
                ..cfg.clone()
            };
            let a = analyze_state(&s, None, &cfg)?;
            Ok(EnsembleRecord::from_analysis(
                i,
                cfg.seed,
                StateClass::Pure,
                &a,
            ))
        })
        .collect()
}
