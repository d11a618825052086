use crate::types::{dot, Excitation, PhotonMode};
use crate::units::UnitContext;

/// Projected coupling `λ_k (ε̂_k·d_i)` in eV^{1/2}, Å→nm factor included.
#[inline]
pub fn strength_dipole(exc: &Excitation, mode: &PhotonMode) -> f64 {
    UnitContext::strength_dipole(mode.strength, dot(&mode.polarization, &exc.dipole))
}

/// Signed coupling energy ħg_{i,k} = −sqrt(ħω_k/2) λ_k (ε̂_k·d_i), in eV.
#[inline]
pub fn coupling_rate(exc: &Excitation, mode: &PhotonMode) -> f64 {
    -(mode.energy / 2.0).sqrt() * strength_dipole(exc, mode)
}
