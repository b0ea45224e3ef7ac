//! State sources for `analyze`: presets, inline X-state parameters and JSON files.

use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;
use tomocausal::correlations::BipartiteState;
use tomocausal::linalg::ComplexMatrix;
use tomocausal::states::XStateParams;

/// A parsed state plus its X-state parameters when it has that form.
pub struct StateInput {
    pub state: BipartiteState,
    pub x_params: Option<XStateParams>,
}

impl StateInput {
    fn from_x(p: XStateParams) -> Result<Self, String> {
        Ok(Self {
            state: p.to_state().map_err(|e| e.to_string())?,
            x_params: Some(p),
        })
    }
}

/// `bell`, `product` or `werner:<p>`.
pub fn preset(name: &str) -> Result<StateInput, String> {
    let p = match name {
        "bell" => XStateParams::werner(1.0),
        // diag(0.7, 0.3) ⊗ diag(0.6, 0.4)
        "product" => XStateParams::new([0.42, 0.28, 0.18, 0.12], Complex64::ZERO, Complex64::ZERO),
        other => match other.strip_prefix("werner:") {
            Some(w) => {
                let w: f64 = w.parse().map_err(|_| format!("bad Werner weight '{w}'"))?;
                XStateParams::werner(w)
            }
            None => {
                return Err(format!(
                    "unknown preset '{other}' (expected bell, product or werner:<p>)"
                ))
            }
        },
    };
    StateInput::from_x(p.map_err(|e| e.to_string())?)
}

/// Eight comma-separated numbers: `ρ11,ρ22,ρ33,ρ44,Re ρ14,Im ρ14,Re ρ23,Im ρ23`.
pub fn inline_x_state(text: &str) -> Result<StateInput, String> {
    let v: Vec<f64> = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad number '{t}'"))
        })
        .collect::<Result<_, _>>()?;
    if v.len() != 8 {
        return Err(format!("expected 8 X-state parameters, got {}", v.len()));
    }
    let p = XStateParams::new(
        [v[0], v[1], v[2], v[3]],
        Complex64::new(v[4], v[5]),
        Complex64::new(v[6], v[7]),
    )
    .map_err(|e| e.to_string())?;
    StateInput::from_x(p)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct XStateFile {
    diagonal: [f64; 4],
    rho14: [f64; 2],
    #[serde(default)]
    rho23: [f64; 2],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    /// 16 `[re, im]` pairs, row-major.
    rho: Option<Vec<[f64; 2]>>,
    x_state: Option<XStateFile>,
}

pub fn from_json_str(text: &str) -> Result<StateInput, String> {
    let f: StateFile =
        serde_json::from_str(text).map_err(|e| format!("malformed state file: {e}"))?;
    match (f.rho, f.x_state) {
        (Some(rho), None) => {
            let entries: Vec<Complex64> =
                rho.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
            if entries.len() != 16 {
                return Err(format!("'rho' needs 16 entries, got {}", entries.len()));
            }
            let m = ComplexMatrix::new(4, entries).map_err(|e| e.to_string())?;
            Ok(StateInput {
                state: BipartiteState::from_matrix(m).map_err(|e| e.to_string())?,
                x_params: None,
            })
        }
        (None, Some(x)) => {
            let p = XStateParams::new(
                x.diagonal,
                Complex64::new(x.rho14[0], x.rho14[1]),
                Complex64::new(x.rho23[0], x.rho23[1]),
            )
            .map_err(|e| e.to_string())?;
            StateInput::from_x(p)
        }
        _ => Err("state file needs exactly one of 'rho' or 'x_state'".into()),
    }
}

pub fn from_file(path: &Path) -> Result<StateInput, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    from_json_str(&text)
}
