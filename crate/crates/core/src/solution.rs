use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{ExcitationSet, PhotonMode};
use crate::validate;

/// Environment variable overriding [`SolverConfig::max_dim`].
pub const MAX_DIM_ENV: &str = "POLARITON_MAX_DIM";

pub const DEFAULT_MAX_DIM: usize = 20_000;

/// Light-matter model used to produce a [`PolaritonSolution`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Rotating-wave single-excitation Hamiltonian.
    Rwa,
    /// Harmonic (Hopfield-type) model with counter-rotating terms and dipole self-energy.
    Quadratic,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Rwa => "rwa",
            Model::Quadratic => "quadratic",
        })
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rwa" => Ok(Model::Rwa),
            "quadratic" => Ok(Model::Quadratic),
            other => Err(Error::invalid(format!(
                "unknown model '{other}' (expected rwa or quadratic)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    /// Largest admissible M + N.
    pub max_dim: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_dim: DEFAULT_MAX_DIM,
        }
    }
}

impl SolverConfig {
    /// Default configuration with the [`MAX_DIM_ENV`] override applied.
    pub fn from_env() -> Result<Self> {
        match std::env::var(MAX_DIM_ENV) {
            Ok(raw) => {
                let max_dim = raw.trim().parse::<usize>().map_err(|_| {
                    Error::invalid(format!("{MAX_DIM_ENV}='{raw}' is not a positive integer"))
                })?;
                if max_dim == 0 {
                    return Err(Error::invalid(format!("{MAX_DIM_ENV} must be positive")));
                }
                Ok(SolverConfig { max_dim })
            }
            Err(_) => Ok(SolverConfig::default()),
        }
    }

    pub(crate) fn check(&self, set: &ExcitationSet, modes: &[PhotonMode]) -> Result<()> {
        let report = validate::validate_modes(modes);
        if !report.is_ok() {
            return Err(Error::Validation(report));
        }
        if set.is_empty() {
            return Err(Error::invalid("at least one excitation is required"));
        }
        let requested = set.len() + modes.len();
        if requested > self.max_dim {
            return Err(Error::DimensionOverflow {
                requested,
                max: self.max_dim,
            });
        }
        Ok(())
    }
}

/// Polariton energies and their projections onto the bare states.
///
/// Column `l` of `el_proj` (M rows) and `ph_proj` (N rows) together describe
/// polariton `l`; `energies` are ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct PolaritonSolution {
    pub energies: Vec<f64>,
    pub el_proj: DMatrix<f64>,
    pub ph_proj: DMatrix<f64>,
    pub model: Model,
}

impl PolaritonSolution {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn n_electronic(&self) -> usize {
        self.el_proj.nrows()
    }

    pub fn n_photonic(&self) -> usize {
        self.ph_proj.nrows()
    }

    /// Splits stacked `[electronic; photonic]` column vectors.
    pub(crate) fn from_stacked(
        energies: Vec<f64>,
        stacked: &DMatrix<f64>,
        m: usize,
        model: Model,
    ) -> Self {
        let n = stacked.nrows() - m;
        PolaritonSolution {
            energies,
            el_proj: stacked.rows(0, m).into_owned(),
            ph_proj: stacked.rows(m, n).into_owned(),
            model,
        }
    }

    pub fn to_json(&self) -> SolutionJson {
        let rows = |m: &DMatrix<f64>| -> Vec<Vec<f64>> {
            m.row_iter().map(|r| r.iter().copied().collect()).collect()
        };
        SolutionJson {
            model_tag: self.model,
            energies: self.energies.clone(),
            el_proj: rows(&self.el_proj),
            ph_proj: rows(&self.ph_proj),
        }
    }

    pub fn from_json(json: &SolutionJson) -> Result<Self> {
        let states = json.energies.len();
        let matrix = |name: &str, rows: &[Vec<f64>]| -> Result<DMatrix<f64>> {
            if let Some(bad) = rows.iter().position(|r| r.len() != states) {
                return Err(Error::parse(
                    "solution json",
                    format!("{name} row {bad} has the wrong length (expected {states})"),
                ));
            }
            Ok(DMatrix::from_fn(rows.len(), states, |i, l| rows[i][l]))
        };
        let el_proj = matrix("el_proj", &json.el_proj)?;
        let ph_proj = matrix("ph_proj", &json.ph_proj)?;
        if el_proj.nrows() + ph_proj.nrows() != states {
            return Err(Error::parse(
                "solution json",
                "projection rows do not add up to the number of states",
            ));
        }
        Ok(PolaritonSolution {
            energies: json.energies.clone(),
            el_proj,
            ph_proj,
            model: json.model_tag,
        })
    }
}

/// Serialized form: energies plus row-major projection matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionJson {
    pub model_tag: Model,
    pub energies: Vec<f64>,
    pub el_proj: Vec<Vec<f64>>,
    pub ph_proj: Vec<Vec<f64>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let sol = PolaritonSolution {
            energies: vec![1.0, 2.0, 3.0],
            el_proj: DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 0.0, 0.0, 0.6, 0.8]),
            ph_proj: DMatrix::from_row_slice(1, 3, &[0.0, 0.8, -0.6]),
            model: Model::Quadratic,
        };
        let text = serde_json::to_string(&sol.to_json()).unwrap();
        assert!(text.contains("\"model_tag\":\"quadratic\""));
        assert!(text.contains("\"el_proj\":[[1.0,0.0,0.0],[0.0,0.6,0.8]]"));
        let back: SolutionJson = serde_json::from_str(&text).unwrap();
        assert_eq!(PolaritonSolution::from_json(&back).unwrap(), sol);
    }

    #[test]
    fn model_parse() {
        assert_eq!("RWA".parse::<Model>().unwrap(), Model::Rwa);
        assert!("jc".parse::<Model>().is_err());
    }
}
