//! Absorption observables built from a [`PolaritonSolution`].
//!
//! A polariton `l` absorbs `j`-polarized light with stick strength
//! `ħω_l · |Σ_i C^el_{il} d_{i,j}|²` (eV·Å²; the constant prefactor 2m_e/3ħ²
//! is omitted). At zero coupling this is `ħω_i |d_{i,j}|²`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadratic::solve_quadratic;
use crate::rwa::solve_rwa;
use crate::solution::{Model, PolaritonSolution};
use crate::types::{Axis, CavitySpec, ExcitationSet, PhotonMode};

/// Minimum photonic (and, in a bath, electronic) weight of the lower polariton.
pub const LOWER_POLARITON_THRESHOLD: f64 = 1e-6;

/// Energy window of the integrated absorption used for truncation convergence.
pub const INTEGRATION_WINDOW: (f64, f64) = (0.0, 9.0);

/// Relative difference to the full result at which a truncation counts as converged.
pub const CONVERGENCE_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stick {
    #[serde(rename = "energy_eV")]
    pub energy: f64,
    #[serde(rename = "strength_eVA2")]
    pub strength: f64,
    pub photonic_weight: f64,
}

/// Solves either model on the same inputs.
pub fn solve(model: Model, set: &ExcitationSet, modes: &[PhotonMode]) -> Result<PolaritonSolution> {
    match model {
        Model::Rwa => solve_rwa(set, modes),
        Model::Quadratic => solve_quadratic(set, modes),
    }
}

fn check_consistent(sol: &PolaritonSolution, set: &ExcitationSet) -> Result<()> {
    if sol.n_electronic() != set.len() {
        return Err(Error::invalid(format!(
            "solution has {} electronic rows but the excitation set has {}",
            sol.n_electronic(),
            set.len()
        )));
    }
    Ok(())
}

/// Transition dipole of every polariton along `axis`: Σ_i C^el_{il} d_{i,j}.
pub fn polariton_dipoles(
    sol: &PolaritonSolution,
    set: &ExcitationSet,
    axis: Axis,
) -> Result<Vec<f64>> {
    check_consistent(sol, set)?;
    let j = axis.index();
    let d: Vec<f64> = set.iter().map(|e| e.dipole[j]).collect();
    Ok(sol
        .el_proj
        .column_iter()
        .map(|col| col.iter().zip(&d).map(|(c, di)| c * di).sum())
        .collect())
}

pub fn stick_spectrum(
    sol: &PolaritonSolution,
    set: &ExcitationSet,
    axis: Axis,
) -> Result<Vec<Stick>> {
    let dipoles = polariton_dipoles(sol, set, axis)?;
    let weights = photonic_weights(sol);
    Ok(sol
        .energies
        .iter()
        .zip(dipoles)
        .zip(weights)
        .map(|((&energy, mu), w)| Stick {
            energy,
            strength: energy * mu * mu,
            photonic_weight: w,
        })
        .collect())
}

/// w_l^ph = Σ_k |C^ph_{kl}|², clamped to [0, 1] against round-off.
pub fn photonic_weights(sol: &PolaritonSolution) -> Vec<f64> {
    sol.ph_proj
        .column_iter()
        .map(|col| col.norm_squared().clamp(0.0, 1.0))
        .collect()
}

/// Summed stick strength with energies in `[lo, hi]`.
pub fn window_strength(sticks: &[Stick], lo: f64, hi: f64) -> f64 {
    sticks
        .iter()
        .filter(|s| s.energy >= lo && s.energy <= hi)
        .map(|s| s.strength)
        .sum()
}

/// Broadened absorption on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumGrid {
    pub axis: Vec<f64>,
    pub values: Vec<f64>,
    /// ħΓ in eV.
    pub broadening: f64,
    /// Δ(ħω) in eV.
    pub step: f64,
    pub polarization_axis: Option<Axis>,
}

impl SpectrumGrid {
    /// Index and value of the largest entry.
    pub fn peak(&self) -> Option<(usize, f64)> {
        self.values
            .iter()
            .copied()
            .enumerate()
            .fold(None, |best, (i, v)| match best {
                Some((_, bv)) if bv >= v => best,
                _ => Some((i, v)),
            })
    }

    pub fn len(&self) -> usize {
        self.axis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axis.is_empty()
    }
}

/// Discrete Lorentzian replacing δ(ω − ω_l): ΓΔω / (2π[(ω − ω_l)² + (Γ/2)²]).
#[inline]
pub fn discrete_lorentzian(offset: f64, gamma: f64, step: f64) -> f64 {
    gamma * step / (2.0 * std::f64::consts::PI * (offset * offset + 0.25 * gamma * gamma))
}

/// Broadens `sticks` onto the grid `lo, lo + Δ, …, ≤ hi`.
///
/// Sticks outside the range still contribute their tails; a range that
/// contains no stick is logged.
pub fn broaden(sticks: &[Stick], gamma: f64, step: f64, range: (f64, f64)) -> Result<SpectrumGrid> {
    let (lo, hi) = range;
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::invalid(format!(
            "broadening must be positive, got {gamma}"
        )));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::invalid(format!(
            "energy spacing must be positive, got {step}"
        )));
    }
    if !(lo.is_finite() && hi.is_finite() && hi >= lo) {
        return Err(Error::invalid(format!("invalid energy range [{lo}, {hi}]")));
    }
    if !sticks.iter().any(|s| s.energy >= lo && s.energy <= hi) {
        log::warn!("no stick lies in [{lo}, {hi}] eV; the spectrum holds only line tails");
    }
    let n = ((hi - lo) / step * (1.0 + 1e-12)).floor() as usize + 1;
    let axis: Vec<f64> = (0..n).map(|i| lo + i as f64 * step).collect();
    let values: Vec<f64> = axis
        .par_iter()
        .with_min_len(256)
        .map(|&w| {
            sticks
                .iter()
                .map(|s| s.strength * discrete_lorentzian(w - s.energy, gamma, step))
                .sum()
        })
        .collect();
    Ok(SpectrumGrid {
        axis,
        values,
        broadening: gamma,
        step,
        polarization_axis: None,
    })
}

/// Properties of the lower polariton.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolaritonMetrics {
    pub state: usize,
    #[serde(rename = "lower_energy_eV")]
    pub lower_energy: f64,
    /// Stick strength (unbroadened absorption) in eV·Å².
    #[serde(rename = "peak_abs_eVA2")]
    pub lower_peak_absorption: f64,
    #[serde(rename = "photonic_weight")]
    pub lower_photonic_weight: f64,
    /// |Σ_i C^el_{i,l} d_{i,j}| along the spectrum axis, e·Å.
    #[serde(rename = "effective_dipole_eA")]
    pub effective_dipole: f64,
}

/// Index of the lower polariton.
///
/// With a single photon mode this is the lowest state whose photonic weight
/// exceeds [`LOWER_POLARITON_THRESHOLD`], which skips dark electronic states.
/// With several modes (a bath) off-resonant modes are almost purely photonic
/// and would pass that test, so the lower polariton is instead the lowest
/// state that has both weights above the threshold and whose electronic
/// weight is a local maximum in energy order.
pub fn lower_polariton_state(sol: &PolaritonSolution) -> Option<usize> {
    let ph = photonic_weights(sol);
    if sol.n_photonic() <= 1 {
        return ph.iter().position(|&w| w > LOWER_POLARITON_THRESHOLD);
    }
    let el: Vec<f64> = sol
        .el_proj
        .column_iter()
        .map(|c| c.norm_squared())
        .collect();
    let n = el.len();
    (0..n).find(|&l| {
        ph[l] > LOWER_POLARITON_THRESHOLD
            && el[l] > LOWER_POLARITON_THRESHOLD
            && (l == 0 || el[l] >= el[l - 1])
            && (l + 1 == n || el[l] >= el[l + 1])
    })
}

/// Metrics of the state picked by [`lower_polariton_state`].
pub fn lower_polariton_metrics(
    sol: &PolaritonSolution,
    set: &ExcitationSet,
    axis: Axis,
) -> Result<PolaritonMetrics> {
    if sol.len() < 2 {
        return Err(Error::invalid(
            "lower-polariton metrics need at least two states",
        ));
    }
    let weights = photonic_weights(sol);
    let state = lower_polariton_state(sol).ok_or(Error::CavityDecoupled {
        threshold: LOWER_POLARITON_THRESHOLD,
    })?;
    let mu = polariton_dipoles(sol, set, axis)?[state];
    let energy = sol.energies[state];
    Ok(PolaritonMetrics {
        state,
        lower_energy: energy,
        lower_peak_absorption: energy * mu * mu,
        lower_photonic_weight: weights[state],
        effective_dipole: mu.abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub lambda: f64,
    #[serde(flatten)]
    pub metrics: PolaritonMetrics,
}

fn check_ascending(lambdas: &[f64]) -> Result<()> {
    if lambdas.is_empty() {
        return Err(Error::invalid("coupling sweep needs at least one strength"));
    }
    if lambdas.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
        return Err(Error::invalid("coupling strengths must be positive"));
    }
    if lambdas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid(
            "coupling strengths must be strictly ascending",
        ));
    }
    Ok(())
}

/// Lower-polariton metrics for every cavity strength in `lambdas`.
///
/// Points are solved in parallel and returned in `lambdas` order. The axis is
/// the dominant component of the cavity polarization.
pub fn sweep_coupling(
    set: &ExcitationSet,
    cavity: &CavitySpec,
    lambdas: &[f64],
    model: Model,
) -> Result<Vec<SweepPoint>> {
    check_ascending(lambdas)?;
    let axis = cavity.axis();
    lambdas
        .par_iter()
        .map(|&lambda| {
            let point = || -> Result<SweepPoint> {
                let modes = cavity.with_strength(lambda).modes()?;
                let sol = solve(model, set, &modes)?;
                let metrics = lower_polariton_metrics(&sol, set, axis)?;
                Ok(SweepPoint { lambda, metrics })
            };
            point().map_err(|e| Error::AtCoupling {
                lambda,
                source: Box::new(e),
            })
        })
        .collect()
}

/// `count` evenly spaced strengths from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    /// Number of lowest excitations kept.
    pub excitations: usize,
    /// `excitations` as a fraction of the full set.
    pub fraction: f64,
    /// Stick sum over [`INTEGRATION_WINDOW`], eV·Å².
    #[serde(rename = "integrated_absorption_eVA2")]
    pub integrated: f64,
    /// |integrated − final| / |final|.
    pub relative_difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// Index of the first row within [`CONVERGENCE_TOLERANCE`] of the final value.
    pub converged_at: Option<usize>,
}

impl ConvergenceReport {
    /// Whether the distance to the final value never grows from row `from` on.
    pub fn monotone_from(&self, from: usize) -> bool {
        self.rows[from..]
            .windows(2)
            .all(|w| w[1].relative_difference <= w[0].relative_difference)
    }
}

/// Integrated absorption under successively larger excitation truncations.
pub fn convergence_report(
    set: &ExcitationSet,
    cavity: &CavitySpec,
    schedule: &[usize],
    model: Model,
) -> Result<ConvergenceReport> {
    if schedule.is_empty() {
        return Err(Error::invalid("truncation schedule is empty"));
    }
    if schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid(
            "truncation schedule must be strictly ascending",
        ));
    }
    if let Some(&last) = schedule.last() {
        if last > set.len() {
            return Err(Error::invalid(format!(
                "truncation schedule asks for {last} excitations but only {} are available",
                set.len()
            )));
        }
    }
    let modes = cavity.modes()?;
    let axis = cavity.axis();
    let integrated: Vec<f64> = schedule
        .par_iter()
        .map(|&count| -> Result<f64> {
            let subset = set.truncated(count)?;
            let sol = solve(model, &subset, &modes)?;
            let sticks = stick_spectrum(&sol, &subset, axis)?;
            Ok(window_strength(
                &sticks,
                INTEGRATION_WINDOW.0,
                INTEGRATION_WINDOW.1,
            ))
        })
        .collect::<Result<_>>()?;
    let reference = *integrated.last().expect("non-empty schedule");
    let rows: Vec<ConvergenceRow> = schedule
        .iter()
        .zip(&integrated)
        .map(|(&count, &value)| ConvergenceRow {
            excitations: count,
            fraction: count as f64 / set.len() as f64,
            integrated: value,
            relative_difference: if reference == 0.0 {
                if value == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                ((value - reference) / reference).abs()
            },
        })
        .collect();
    let converged_at = rows
        .iter()
        .position(|r| r.relative_difference <= CONVERGENCE_TOLERANCE);
    Ok(ConvergenceReport { rows, converged_at })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::coupling_rate;
    use crate::types::Excitation;

    fn x_mode(energy: f64, strength: f64) -> PhotonMode {
        PhotonMode::new(energy, [1.0, 0.0, 0.0], strength).unwrap()
    }

    #[test]
    fn zero_coupling_sticks_are_bare_absorption() {
        let set =
            ExcitationSet::from_lines(&[(1.06, [0.015, 0.002, 0.0]), (4.5, [0.3, 0.1, 0.0])], "t")
                .unwrap();
        let sol = solve_rwa(&set, &[x_mode(2.0, 0.0)]).unwrap();
        let sticks = stick_spectrum(&sol, &set, Axis::X).unwrap();
        let bare: Vec<_> = sticks.iter().filter(|s| s.photonic_weight == 0.0).collect();
        assert_eq!(bare.len(), 2);
        assert_eq!(bare[0].strength, 1.06 * 0.015 * 0.015);
        assert_eq!(bare[1].strength, 4.5 * 0.3 * 0.3);
    }

    #[test]
    fn single_line_peak_height() {
        let stick = Stick {
            energy: 1.06,
            strength: 1.06 * 0.015 * 0.015,
            photonic_weight: 0.0,
        };
        assert!((stick.strength - 2.385e-4).abs() < 1e-12);
        let grid = broaden(&[stick], 1e-3, 1e-4, (1.05, 1.07)).unwrap();
        let (i, peak) = grid.peak().unwrap();
        assert!((grid.axis[i] - 1.06).abs() < 1e-4 / 2.0);
        let exact = stick.strength * 2.0 * 1e-4 / (std::f64::consts::PI * 1e-3);
        assert!((peak - exact).abs() / exact < 1e-9);
        assert!((peak - 1.5e-5).abs() / 1.5e-5 < 0.05);
    }

    #[test]
    fn broadened_sum_recovers_stick_strength() {
        let gamma = 0.01;
        let stick = Stick {
            energy: 4.0,
            strength: 2.0,
            photonic_weight: 0.0,
        };
        let grid = broaden(
            &[stick],
            gamma,
            0.001,
            (4.0 - 10.0 * gamma, 4.0 + 10.0 * gamma),
        )
        .unwrap();
        let total: f64 = grid.values.iter().sum();
        assert!((total - 2.0).abs() / 2.0 < 0.05, "{total}");
    }

    #[test]
    fn broaden_rejects_bad_parameters() {
        assert!(broaden(&[], 0.0, 0.001, (0.0, 1.0)).is_err());
        assert!(broaden(&[], 0.01, -1.0, (0.0, 1.0)).is_err());
        assert!(broaden(&[], 0.01, 0.001, (1.0, 0.0)).is_err());
    }

    #[test]
    fn out_of_range_sticks_give_valid_grid() {
        let stick = Stick {
            energy: 10.0,
            strength: 1.0,
            photonic_weight: 0.0,
        };
        let grid = broaden(&[stick], 0.01, 0.01, (0.0, 1.0)).unwrap();
        assert_eq!(grid.len(), 101);
        assert!(grid.values.iter().all(|v| *v >= 0.0 && *v < 1e-6));
    }

    #[test]
    fn two_level_resonant_weights_and_sticks() {
        let set = ExcitationSet::from_lines(&[(4.0, [0.5, 0.0, 0.0])], "t").unwrap();
        let mode = x_mode(4.0, 0.2);
        let sol = solve_rwa(&set, &[mode]).unwrap();
        let w = photonic_weights(&sol);
        assert!((w[0] - 0.5).abs() < 1e-14 && (w[1] - 0.5).abs() < 1e-14);
        let sticks = stick_spectrum(&sol, &set, Axis::X).unwrap();
        for s in &sticks {
            assert!((s.strength - s.energy * 0.25 / 2.0).abs() < 1e-14);
        }
        let metrics = lower_polariton_metrics(&sol, &set, Axis::X).unwrap();
        let g = coupling_rate(&set.excitations()[0], &mode).abs();
        assert!((metrics.lower_energy - (4.0 - g)).abs() < 1e-14);
    }

    #[test]
    fn zero_coupling_weights() {
        let set = ExcitationSet::from_lines(&[(3.0, [0.5, 0.0, 0.0]), (5.0, [0.1, 0.0, 0.0])], "t")
            .unwrap();
        let sol = solve_rwa(&set, &[x_mode(4.0, 0.0)]).unwrap();
        assert_eq!(photonic_weights(&sol), vec![0.0, 1.0, 0.0]);
        let metrics = lower_polariton_metrics(&sol, &set, Axis::X).unwrap();
        assert_eq!(metrics.state, 1);
        assert_eq!(metrics.lower_photonic_weight, 1.0);
    }

    #[test]
    fn lower_polariton_in_bath_skips_off_resonant_modes() {
        let set = ExcitationSet::from_lines(&[(4.0, [0.027, 0.0, 0.0])], "t").unwrap();
        let cav = CavitySpec::lossy(4.0, 0.5, [1.0, 0.0, 0.0], 0.05, 0.001);
        let modes = cav.modes().unwrap();
        let sol = solve_rwa(&set, &modes).unwrap();
        let m = lower_polariton_metrics(&sol, &set, Axis::X).unwrap();
        assert!(sol.energies[0] < 3.6);
        assert!((m.lower_energy - 4.0).abs() < 1e-3, "{}", m.lower_energy);
    }

    #[test]
    fn decoupled_cavity_detected() {
        let set = ExcitationSet::from_lines(&[(3.0, [0.5, 0.0, 0.0])], "t").unwrap();
        let sol = PolaritonSolution {
            energies: vec![3.0, 4.0],
            el_proj: nalgebra::DMatrix::from_row_slice(1, 2, &[1.0, 0.0]),
            ph_proj: nalgebra::DMatrix::from_row_slice(1, 2, &[0.0, 0.0]),
            model: Model::Rwa,
        };
        assert!(matches!(
            lower_polariton_metrics(&sol, &set, Axis::X),
            Err(Error::CavityDecoupled { .. })
        ));
    }

    #[test]
    fn sweep_rejects_unordered_strengths() {
        let set = ExcitationSet::from_lines(&[(3.0, [0.5, 0.0, 0.0])], "t").unwrap();
        let cav = CavitySpec::lossless(3.0, 0.1, [1.0, 0.0, 0.0]);
        assert!(sweep_coupling(&set, &cav, &[0.2, 0.1], Model::Rwa).is_err());
        assert!(sweep_coupling(&set, &cav, &[0.0, 0.1], Model::Rwa).is_err());
    }

    #[test]
    fn sweep_errors_name_the_strength() {
        // A window below 5κ fails validation at every point.
        let set = ExcitationSet::from_lines(&[(3.0, [0.5, 0.0, 0.0])], "t").unwrap();
        let mut cav = CavitySpec::lossy(3.0, 0.1, [1.0, 0.0, 0.0], 0.05, 0.001);
        cav.window_halfwidth = Some(0.1);
        let err = sweep_coupling(&set, &cav, &[0.1, 0.2], Model::Rwa).unwrap_err();
        assert!(err.to_string().contains("lambda = 0.1"), "{err}");
    }

    #[test]
    fn two_level_sweep_follows_closed_form() {
        let set = ExcitationSet::from_lines(&[(4.0, [0.027, 0.0, 0.0])], "t").unwrap();
        let cav = CavitySpec::lossless(4.0, 0.0, [1.0, 0.0, 0.0]);
        let lambdas = linear_grid(0.010, 0.986, 9);
        let points = sweep_coupling(&set, &cav, &lambdas, Model::Rwa).unwrap();
        for p in &points {
            let g = (2.0f64).sqrt() * p.lambda * 0.027 * 0.1;
            assert!((p.metrics.lower_energy - (4.0 - g)).abs() < 1e-13);
        }
        assert!(points
            .windows(2)
            .all(|w| w[1].metrics.lower_energy <= w[0].metrics.lower_energy));
    }

    #[test]
    fn convergence_full_vs_full_is_zero() {
        let set = ExcitationSet::new(
            (0..4)
                .map(|i| Excitation::new(i, 4.0 + i as f64, [0.2, 0.0, 0.0]))
                .collect(),
            "t",
        )
        .unwrap();
        let cav = CavitySpec::lossless(4.0, 0.5, [1.0, 0.0, 0.0]);
        let report = convergence_report(&set, &cav, &[4], Model::Rwa).unwrap();
        assert_eq!(report.rows[0].relative_difference, 0.0);
        assert_eq!(report.converged_at, Some(0));
        assert!(convergence_report(&set, &cav, &[2, 5], Model::Rwa).is_err());
        assert!(convergence_report(&set, &cav, &[3, 2], Model::Rwa).is_err());
    }

    #[test]
    fn linear_grid_endpoints() {
        let g = linear_grid(0.010, 0.986, 50);
        assert_eq!(g.len(), 50);
        assert_eq!(g[0], 0.010);
        assert!((g[49] - 0.986).abs() < 1e-15);
    }
}
