//! Fixed unit convention.
//!
//! Internally ħ = 1 and every energy is in eV. Transition dipoles are read in
//! e·Å and cavity strengths in eV^{1/2}/nm, so a product `λ·d` picks up the
//! Å→nm factor [`ANGSTROM_PER_NM`] to land in eV^{1/2}. Electric-field
//! amplitudes are expressed as `e·E` in eV/nm (numerically V/nm).

/// Length conversion applied to every `λ·d` product (1 Å = 0.1 nm).
pub const ANGSTROM_PER_NM: f64 = 0.1;

/// Marker type documenting the unit convention. It carries no state.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct UnitContext;

impl UnitContext {
    /// `λ·d` in eV^{1/2}, with `strength` in eV^{1/2}/nm and `dipole` in e·Å.
    #[inline]
    pub fn strength_dipole(strength: f64, dipole: f64) -> f64 {
        strength * dipole * ANGSTROM_PER_NM
    }

    /// Cavity strength from a field amplitude: `λ = sqrt(2/ħω) · eE`.
    ///
    /// `field` is `e·E` in eV/nm, `mode_energy` in eV.
    pub fn strength_from_field(field: f64, mode_energy: f64) -> f64 {
        (2.0 / mode_energy).sqrt() * field
    }

    /// Inverse of [`UnitContext::strength_from_field`].
    pub fn field_from_strength(strength: f64, mode_energy: f64) -> f64 {
        strength * (mode_energy / 2.0).sqrt()
    }
}
