//! Lossy cavity as a discretized Lorentzian bath of photon modes.
//!
//! A cavity of center ω_c, strength λ_c and loss rate κ is replaced by modes
//! on an arithmetic grid ω_k = ω_c + jΔω with
//!
//! ```text
//! λ_k² = λ_c² · Δω · (1/2π) · κ / ((ω_k − ω_c)² + (κ/2)²)
//! ```
//!
//! The grid includes ω_c and spans ±window_halfwidth.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{CavitySpec, PhotonMode, Vec3};
use crate::validate;

/// Window half-width used when a lossy cavity does not specify one, in units of κ.
pub const DEFAULT_WINDOW_PER_LOSS: f64 = 10.0;

/// Below this captured Lorentzian mass the window is rejected.
pub const MIN_COVERAGE: f64 = 0.5;

/// How a grid bin receives its share of the Lorentzian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quadrature {
    /// Lorentzian density sampled at the mode energy times Δω.
    #[default]
    PointSampled,
    /// Exact Lorentzian mass of the bin `[ω_k − Δω/2, ω_k + Δω/2]`.
    /// Agrees with point sampling to O((Δω/κ)²) and stays bounded when κ ≲ Δω.
    BinIntegrated,
}

/// Lorentzian weight `L(Δω, κ, ω_k − ω_c)` of one grid point.
pub fn lorentzian_weight(spacing: f64, loss_rate: f64, detuning: f64) -> f64 {
    spacing / (2.0 * std::f64::consts::PI) * loss_rate
        / (detuning * detuning + 0.25 * loss_rate * loss_rate)
}

/// Lorentzian mass between `detuning − Δω/2` and `detuning + Δω/2`.
pub fn lorentzian_bin_mass(spacing: f64, loss_rate: f64, detuning: f64) -> f64 {
    let hi = 2.0 * (detuning + 0.5 * spacing) / loss_rate;
    let lo = 2.0 * (detuning - 0.5 * spacing) / loss_rate;
    // arctan(hi) − arctan(lo) without cancellation for large |detuning|
    ((hi - lo) / (1.0 + hi * lo))
        .atan()
        .rem_euclid(std::f64::consts::PI)
        / std::f64::consts::PI
}

#[derive(Debug, Clone, PartialEq)]
pub struct BathDiscretization {
    pub modes: Vec<PhotonMode>,
    /// Σ_k λ_k² / λ_c², the captured Lorentzian mass.
    pub coverage: f64,
    pub spacing: f64,
    pub window: f64,
    /// Grid points at or below zero energy that were discarded.
    pub dropped: usize,
    pub quadrature: Quadrature,
}

pub fn discretize_bath(cavity: &CavitySpec) -> Result<BathDiscretization> {
    discretize_bath_with(cavity, Quadrature::default())
}

pub fn discretize_bath_with(
    cavity: &CavitySpec,
    quadrature: Quadrature,
) -> Result<BathDiscretization> {
    let report = validate::validate_cavity(cavity);
    if !report.is_ok() {
        return Err(Error::Validation(report));
    }
    if cavity.loss_rate <= 0.0 {
        return Err(Error::invalid(
            "bath discretization needs loss_rate > 0; a lossless cavity is a single mode",
        ));
    }
    let kappa = cavity.loss_rate;
    let spacing = cavity.mode_spacing.expect("validated");
    let window = cavity.effective_window();
    let half = (window / spacing * (1.0 + 1e-12)).floor() as i64;

    let mut modes = Vec::with_capacity(2 * half as usize + 1);
    let mut mass = 0.0;
    let mut dropped = 0;
    for j in -half..=half {
        let detuning = j as f64 * spacing;
        let energy = cavity.center_energy + detuning;
        if energy <= 0.0 {
            dropped += 1;
            continue;
        }
        let weight = match quadrature {
            Quadrature::PointSampled => lorentzian_weight(spacing, kappa, detuning),
            Quadrature::BinIntegrated => lorentzian_bin_mass(spacing, kappa, detuning),
        };
        mass += weight;
        modes.push(PhotonMode {
            energy,
            polarization: cavity.polarization,
            strength: cavity.strength * weight.sqrt(),
        });
    }
    if dropped > 0 {
        log::warn!(
            "bath around {} eV: dropped {dropped} grid points at nonpositive energy",
            cavity.center_energy
        );
    }
    if mass < MIN_COVERAGE {
        return Err(Error::BathWindowTooSmall {
            coverage: mass,
            window,
        });
    }
    if mass > 1.0 {
        return Err(Error::invalid(format!(
            "mode spacing {spacing} eV does not resolve loss rate {kappa} eV (sampled Lorentzian mass {mass:.4} > 1); \
             refine the grid or use bin-integrated weights"
        )));
    }
    Ok(BathDiscretization {
        modes,
        coverage: mass,
        spacing,
        window,
        dropped,
        quadrature,
    })
}

impl BathDiscretization {
    pub fn polarization(&self) -> Option<Vec3> {
        self.modes.first().map(|m| m.polarization)
    }

    pub fn to_json(&self, cavity: &CavitySpec) -> BathJson {
        BathJson {
            modes: self.modes.clone(),
            metadata: BathMetadata {
                center_energy: cavity.center_energy,
                strength: cavity.strength,
                loss_rate: cavity.loss_rate,
                spacing: self.spacing,
                window: self.window,
                coverage: self.coverage,
                mode_count: self.modes.len(),
                dropped_modes: self.dropped,
                quadrature: self.quadrature,
            },
        }
    }
}

/// Serialized bath: the photon-mode list accepted by the solvers plus metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BathJson {
    pub modes: Vec<PhotonMode>,
    pub metadata: BathMetadata,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BathMetadata {
    #[serde(rename = "center_energy_eV")]
    pub center_energy: f64,
    #[serde(rename = "strength_ev05_per_nm")]
    pub strength: f64,
    #[serde(rename = "loss_rate_eV")]
    pub loss_rate: f64,
    #[serde(rename = "mode_spacing_eV")]
    pub spacing: f64,
    #[serde(rename = "window_halfwidth_eV")]
    pub window: f64,
    pub coverage: f64,
    pub mode_count: usize,
    pub dropped_modes: usize,
    pub quadrature: Quadrature,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cavity(kappa: f64, spacing: f64, window: f64) -> CavitySpec {
        CavitySpec::lossy(4.0, 0.493, [1.0, 0.0, 0.0], kappa, spacing).with_window(window)
    }

    /// Composite Simpson integration of the normalized Lorentzian over ±window.
    fn lorentzian_mass_oracle(kappa: f64, window: f64) -> f64 {
        let n = 200_000;
        let h = 2.0 * window / n as f64;
        let f = |x: f64| kappa / (2.0 * std::f64::consts::PI) / (x * x + 0.25 * kappa * kappa);
        let mut s = f(-window) + f(window);
        for i in 1..n {
            let x = -window + i as f64 * h;
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
        }
        s * h / 3.0
    }

    #[test]
    fn coverage_matches_integrated_lorentzian() {
        let bath = discretize_bath(&cavity(0.05, 0.001, 0.5)).unwrap();
        let oracle = lorentzian_mass_oracle(0.05, 0.5);
        assert!((oracle - 0.968_2).abs() < 1e-4, "{oracle}");
        assert!(
            (bath.coverage - oracle).abs() < 1e-3,
            "{} vs {oracle}",
            bath.coverage
        );
        let closed = 2.0 / std::f64::consts::PI * (2.0f64 * 0.5 / 0.05).atan();
        assert!((bath.coverage - closed).abs() < 1e-3);
        assert_eq!(bath.modes.len(), 1001);
    }

    #[test]
    fn grid_is_centered_arithmetic_and_symmetric() {
        let bath = discretize_bath(&cavity(0.05, 0.001, 0.25)).unwrap();
        let n = bath.modes.len();
        assert_eq!(n, 501);
        assert_eq!(bath.modes[n / 2].energy, 4.0);
        for (k, m) in bath.modes.iter().enumerate() {
            let expected = 4.0 + (k as f64 - (n / 2) as f64) * 0.001;
            assert!((m.energy - expected).abs() < 1e-12);
            assert!(m.strength >= 0.0);
        }
        for k in 0..n / 2 {
            assert_eq!(bath.modes[k].strength, bath.modes[n - 1 - k].strength);
        }
    }

    #[test]
    fn coverage_grows_with_window() {
        let c: Vec<f64> = [0.25, 0.5, 2.0]
            .iter()
            .map(|&w| discretize_bath(&cavity(0.05, 0.001, w)).unwrap().coverage)
            .collect();
        assert!(c[0] < c[1] && c[1] < c[2]);
        assert!(c[2] > 0.99 && c[2] <= 1.0);
    }

    #[test]
    fn small_loss_limit_concentrates_on_center() {
        // κ ≪ Δω: with bin-integrated weights the center bin takes the mass.
        let bath =
            discretize_bath_with(&cavity(1e-6, 0.001, 0.01), Quadrature::BinIntegrated).unwrap();
        let center = bath.modes.iter().find(|m| m.energy == 4.0).unwrap();
        let single_bin = 2.0 / std::f64::consts::PI * (0.001f64 / 1e-6).atan();
        assert!((center.strength.powi(2) / 0.493f64.powi(2) - single_bin).abs() < 1e-12);
        // Bin masses telescope to the mass of [−window − Δω/2, window + Δω/2].
        let telescoped = 2.0 / std::f64::consts::PI * (2.0f64 * 0.0105 / 1e-6).atan();
        assert!((bath.coverage - telescoped).abs() < 1e-12);
        // Point sampling cannot represent this limit and says so.
        assert!(discretize_bath(&cavity(1e-6, 0.001, 0.01)).is_err());
    }

    #[test]
    fn quadratures_agree_when_resolved() {
        let a = discretize_bath(&cavity(0.05, 0.001, 0.5)).unwrap();
        let b = discretize_bath_with(&cavity(0.05, 0.001, 0.5), Quadrature::BinIntegrated).unwrap();
        for (x, y) in a.modes.iter().zip(&b.modes) {
            let rel = (x.strength.powi(2) - y.strength.powi(2)) / y.strength.powi(2);
            assert!(rel.abs() < 2e-3);
        }
    }

    #[test]
    fn nonpositive_modes_dropped() {
        let cav = CavitySpec::lossy(0.1, 0.5, [1.0, 0.0, 0.0], 0.05, 0.01).with_window(0.5);
        let bath = discretize_bath(&cav).unwrap();
        assert_eq!(bath.dropped, 41);
        assert!(bath.modes.iter().all(|m| m.energy > 0.0));
    }

    #[test]
    fn broad_loss_regime_reaches_wide_window() {
        let cav = CavitySpec::lossy(4.0, 0.493, [1.0, 0.0, 0.0], 0.30, 0.001);
        let bath = discretize_bath(&cav).unwrap();
        assert_eq!(bath.window, 3.0);
        assert_eq!(bath.modes.len(), 6001);
        assert!(bath.coverage > 0.96);
    }

    #[test]
    fn window_losing_half_the_mass_is_rejected() {
        let cav = CavitySpec::lossy(0.005, 0.5, [1.0, 0.0, 0.0], 0.3, 0.001).with_window(1.5);
        assert!(matches!(
            discretize_bath(&cav),
            Err(Error::BathWindowTooSmall { .. })
        ));
    }

    #[test]
    fn lossless_cavity_rejected() {
        let cav = CavitySpec::lossless(4.0, 0.5, [1.0, 0.0, 0.0]);
        assert!(discretize_bath(&cav).is_err());
    }
}
