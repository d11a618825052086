//! Rotating-wave cavity-QED model in the single-excitation subspace.
//!
//! The Hamiltonian restricted to `{|e_i, 0⟩, |g, 1_k⟩}` is an
//! (M+N)×(M+N) real symmetric matrix with the bare energies on the diagonal
//! and the couplings ħg_{i,k} in the electron-photon blocks.

use nalgebra::DMatrix;

use crate::coupling::coupling_rate;
use crate::eigen::{self, fix_signs};
use crate::error::Result;
use crate::solution::{Model, PolaritonSolution, SolverConfig};
use crate::types::{ExcitationSet, PhotonMode};

/// The single-excitation Hamiltonian in eV, electronic states first.
pub fn build_rwa_matrix(set: &ExcitationSet, modes: &[PhotonMode]) -> Result<DMatrix<f64>> {
    build_rwa_matrix_with(set, modes, &SolverConfig::from_env()?)
}

pub fn build_rwa_matrix_with(
    set: &ExcitationSet,
    modes: &[PhotonMode],
    config: &SolverConfig,
) -> Result<DMatrix<f64>> {
    config.check(set, modes)?;
    let m = set.len();
    let dim = m + modes.len();
    let mut h = DMatrix::zeros(dim, dim);
    for (i, exc) in set.iter().enumerate() {
        h[(i, i)] = exc.energy;
        for (k, mode) in modes.iter().enumerate() {
            let g = coupling_rate(exc, mode);
            h[(i, m + k)] = g;
            h[(m + k, i)] = g;
        }
    }
    for (k, mode) in modes.iter().enumerate() {
        h[(m + k, m + k)] = mode.energy;
    }
    Ok(h)
}

pub fn solve_rwa(set: &ExcitationSet, modes: &[PhotonMode]) -> Result<PolaritonSolution> {
    solve_rwa_with(set, modes, &SolverConfig::from_env()?)
}

pub fn solve_rwa_with(
    set: &ExcitationSet,
    modes: &[PhotonMode],
    config: &SolverConfig,
) -> Result<PolaritonSolution> {
    config.check(set, modes)?;
    let m = set.len();
    let n = modes.len();

    if m == 1 {
        // One excitation against many modes: arrowhead with the excitation as head.
        let exc = &set.excitations()[0];
        let z: Vec<f64> = modes.iter().map(|mode| coupling_rate(exc, mode)).collect();
        let d: Vec<f64> = modes.iter().map(|mode| mode.energy).collect();
        let eig = eigen::arrowhead(exc.energy, &z, &d)?;
        return Ok(PolaritonSolution::from_stacked(
            eig.values,
            &eig.vectors,
            m,
            Model::Rwa,
        ));
    }
    if n == 1 {
        // One mode against many excitations: arrowhead with the photon as head.
        let mode = &modes[0];
        let z: Vec<f64> = set.iter().map(|exc| coupling_rate(exc, mode)).collect();
        let eig = eigen::arrowhead(mode.energy, &z, &set.energies())?;
        let mut stacked = DMatrix::zeros(m + 1, m + 1);
        for l in 0..=m {
            for i in 0..m {
                stacked[(i, l)] = eig.vectors[(1 + i, l)];
            }
            stacked[(m, l)] = eig.vectors[(0, l)];
        }
        fix_signs(&mut stacked);
        return Ok(PolaritonSolution::from_stacked(
            eig.values,
            &stacked,
            m,
            Model::Rwa,
        ));
    }

    let h = build_rwa_matrix_with(set, modes, config)?;
    let eig = eigen::symmetric_dense(h)?;
    Ok(PolaritonSolution::from_stacked(
        eig.values,
        &eig.vectors,
        m,
        Model::Rwa,
    ))
}
