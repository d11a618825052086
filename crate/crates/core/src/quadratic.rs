//! Beyond-rotating-wave model.
//!
//! Each excitation is represented by a harmonic coordinate whose position
//! matrix element is `d_i`, i.e. a dipole operator `√(2ω_i)·d_i·x_i`. Expanding
//! `Σ_k ½[p_k² + ω_k²(q_k − λ_k·R/ω_k)²]` exactly gives a quadratic potential
//! `½ xᵀKx` whose force-constant matrix holds
//!
//! * `K_el[i][j] = ω_i² δ_ij + Σ_k 2√(ω_iω_j) (λ_k·d_i)(λ_k·d_j)` (dipole self-energy),
//! * `K_ph[k][k'] = ω_k² δ_kk'`,
//! * `K_cross[i][k] = −ω_k √(2ω_i) (λ_k·d_i)` (counter-rotating terms included).
//!
//! The normal-mode frequencies are `ω_l = √eig(K)`.

use nalgebra::DMatrix;

use crate::coupling::strength_dipole;
use crate::eigen::{self, Eigen};
use crate::error::{Error, Result};
use crate::solution::{Model, PolaritonSolution, SolverConfig};
use crate::types::{ExcitationSet, PhotonMode};

/// Eigenvalues of K below this (eV²) are an instability, not round-off.
pub const NEGATIVE_EIGENVALUE_TOLERANCE: f64 = 1e-10;

/// Symmetric force-constant matrix in eV², electronic coordinates first.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    pub matrix: DMatrix<f64>,
    n_electronic: usize,
    /// Populated when K is a single excitation against many modes.
    arrow: Option<Arrow>,
}

#[derive(Debug, Clone, PartialEq)]
struct Arrow {
    head: f64,
    spokes: Vec<f64>,
    tail: Vec<f64>,
}

impl QuadraticForm {
    pub fn n_electronic(&self) -> usize {
        self.n_electronic
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Relative symmetry defect `max|K − Kᵀ| / max|K|`.
    pub fn asymmetry(&self) -> f64 {
        let scale = self.matrix.amax().max(f64::MIN_POSITIVE);
        (&self.matrix - self.matrix.transpose()).amax() / scale
    }

    /// Orthonormal eigen-decomposition of K (ascending eigenvalues).
    pub fn eigen(&self) -> Result<Eigen> {
        match &self.arrow {
            Some(a) => eigen::arrowhead(a.head, &a.spokes, &a.tail),
            None => eigen::symmetric_dense(self.matrix.clone()),
        }
    }

    /// True when no eigenvalue lies below −[`NEGATIVE_EIGENVALUE_TOLERANCE`].
    pub fn is_positive_semidefinite(&self) -> Result<bool> {
        Ok(self
            .eigen()?
            .values
            .first()
            .is_none_or(|&v| v >= -NEGATIVE_EIGENVALUE_TOLERANCE))
    }
}

pub fn build_quadratic_matrix(set: &ExcitationSet, modes: &[PhotonMode]) -> Result<QuadraticForm> {
    build_quadratic_matrix_with(set, modes, true, &SolverConfig::from_env()?)
}

/// Builds K; `self_energy = false` drops the `(λ·R)²` term.
pub fn build_quadratic_matrix_with(
    set: &ExcitationSet,
    modes: &[PhotonMode],
    self_energy: bool,
    config: &SolverConfig,
) -> Result<QuadraticForm> {
    config.check(set, modes)?;
    let m = set.len();
    let n = modes.len();
    let dim = m + n;

    // a[k][i] = λ_k·d_i in eV^{1/2}
    let projected: Vec<Vec<f64>> = modes
        .iter()
        .map(|mode| set.iter().map(|exc| strength_dipole(exc, mode)).collect())
        .collect();
    let omega: Vec<f64> = set.energies();

    let mut k = DMatrix::zeros(dim, dim);
    for i in 0..m {
        k[(i, i)] = omega[i] * omega[i];
    }
    if self_energy {
        for a in &projected {
            for i in 0..m {
                if a[i] == 0.0 {
                    continue;
                }
                let si = (2.0 * omega[i]).sqrt() * a[i];
                for j in 0..m {
                    let sj = (2.0 * omega[j]).sqrt() * a[j];
                    k[(i, j)] += si * sj;
                }
            }
        }
    }
    for (kk, mode) in modes.iter().enumerate() {
        let row = m + kk;
        k[(row, row)] = mode.energy * mode.energy;
        for i in 0..m {
            let c = -mode.energy * (2.0 * omega[i]).sqrt() * projected[kk][i];
            k[(i, row)] = c;
            k[(row, i)] = c;
        }
    }

    let arrow = (m == 1).then(|| Arrow {
        head: k[(0, 0)],
        spokes: (0..n).map(|kk| k[(0, 1 + kk)]).collect(),
        tail: (0..n).map(|kk| k[(1 + kk, 1 + kk)]).collect(),
    });
    Ok(QuadraticForm {
        matrix: k,
        n_electronic: m,
        arrow,
    })
}

pub fn solve_quadratic(set: &ExcitationSet, modes: &[PhotonMode]) -> Result<PolaritonSolution> {
    solve_quadratic_with(set, modes, &SolverConfig::from_env()?)
}

pub fn solve_quadratic_with(
    set: &ExcitationSet,
    modes: &[PhotonMode],
    config: &SolverConfig,
) -> Result<PolaritonSolution> {
    let form = build_quadratic_matrix_with(set, modes, true, config)?;
    solve_form(&form, set, modes)
}

/// Frequencies and rescaled projections from an already built K.
pub fn solve_form(
    form: &QuadraticForm,
    set: &ExcitationSet,
    modes: &[PhotonMode],
) -> Result<PolaritonSolution> {
    let eig = form.eigen()?;
    let m = form.n_electronic();
    let dim = form.dim();

    let mut energies = Vec::with_capacity(dim);
    for (state, &value) in eig.values.iter().enumerate() {
        if value < -NEGATIVE_EIGENVALUE_TOLERANCE {
            return Err(Error::UltrastrongInstability {
                state,
                eigenvalue: value,
            });
        }
        if value <= NEGATIVE_EIGENVALUE_TOLERANCE {
            return Err(Error::ZeroFrequency {
                state,
                eigenvalue: value,
            });
        }
        energies.push(value.sqrt());
    }

    let bare: Vec<f64> = set
        .iter()
        .map(|e| e.energy)
        .chain(modes.iter().map(|mode| mode.energy))
        .collect();
    let mut proj = eig.vectors;
    for (l, mut col) in proj.column_iter_mut().enumerate() {
        for (row, v) in col.iter_mut().enumerate() {
            *v *= (bare[row] / energies[l]).sqrt();
        }
        let norm = col.norm();
        col /= norm;
    }
    Ok(PolaritonSolution::from_stacked(
        energies,
        &proj,
        m,
        Model::Quadratic,
    ))
}
