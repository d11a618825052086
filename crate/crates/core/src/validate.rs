//! Structured invariant checks for inputs.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::types::{norm, CavitySpec, Excitation, PhotonMode};

/// Tolerance on unit-norm polarization vectors.
pub const POLARIZATION_TOLERANCE: f64 = 1e-12;

/// Smallest admissible bath window, in units of the loss rate.
pub const MIN_WINDOW_PER_LOSS: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    /// Excitation index or input row, when the violation is tied to one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    pub message: String,
}

impl Violation {
    fn at(index: usize, message: impl Into<String>) -> Self {
        Violation {
            index: Some(index),
            message: message.into(),
        }
    }

    fn global(message: impl Into<String>) -> Self {
        Violation {
            index: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    pub fn push_row(&mut self, row: usize, message: impl Into<String>) {
        self.violations.push(Violation::at(row, message));
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "  - {v}")?;
        }
        Ok(())
    }
}

pub fn validate_excitations(excitations: &[Excitation]) -> ValidationReport {
    if excitations.is_empty() {
        let mut report = ValidationReport::default();
        report
            .violations
            .push(Violation::global("excitation set is empty"));
        return report;
    }
    let (mut report, seen) = row_checks(excitations);
    let expected = excitations.len();
    if seen.len() == expected {
        if let Some(&max) = seen.iter().next_back() {
            if max + 1 != expected {
                report.violations.push(Violation::global(format!(
                    "indices are not contiguous from 0 (max index {max} for {expected} excitations)"
                )));
            }
        }
    }
    report
}

/// Per-row checks (energy, dipole, duplicate index) that stay meaningful on a
/// partial set, e.g. when other rows failed to parse.
pub(crate) fn row_checks(excitations: &[Excitation]) -> (ValidationReport, BTreeSet<usize>) {
    let mut report = ValidationReport::default();
    let mut seen = BTreeSet::new();
    for exc in excitations {
        let i = exc.index;
        if !exc.energy.is_finite() || exc.energy <= 0.0 {
            report.violations.push(Violation::at(
                i,
                format!("nonpositive energy at index {i} ({} eV)", exc.energy),
            ));
        }
        if exc.dipole.iter().any(|c| !c.is_finite()) {
            report
                .violations
                .push(Violation::at(i, format!("non-finite dipole at index {i}")));
        }
        if !seen.insert(i) {
            report
                .violations
                .push(Violation::at(i, format!("duplicate index {i}")));
        }
    }
    (report, seen)
}

/// Checks one photon mode; `index` tags the violation when the mode is part of a list.
pub fn validate_mode(mode: &PhotonMode, index: Option<usize>) -> Vec<Violation> {
    let tag = |msg: String| Violation {
        index,
        message: match index {
            Some(k) => format!("photon mode {k}: {msg}"),
            None => msg,
        },
    };
    let mut out = Vec::new();
    if !mode.energy.is_finite() || mode.energy <= 0.0 {
        out.push(tag(format!("nonpositive mode energy ({} eV)", mode.energy)));
    }
    if !mode.strength.is_finite() || mode.strength < 0.0 {
        out.push(tag(format!("negative cavity strength ({})", mode.strength)));
    }
    let n = norm(&mode.polarization);
    if !n.is_finite() || (n - 1.0).abs() > POLARIZATION_TOLERANCE {
        out.push(tag(format!("polarization is not a unit vector (norm {n})")));
    }
    out
}

pub fn validate_modes(modes: &[PhotonMode]) -> ValidationReport {
    let mut report = ValidationReport::default();
    if modes.is_empty() {
        report
            .violations
            .push(Violation::global("at least one photon mode is required"));
    }
    for (k, mode) in modes.iter().enumerate() {
        report.violations.extend(validate_mode(mode, Some(k)));
    }
    report
}

pub fn validate_cavity(cavity: &CavitySpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut push = |msg: String| report.violations.push(Violation::global(msg));
    if !cavity.center_energy.is_finite() || cavity.center_energy <= 0.0 {
        push(format!(
            "nonpositive cavity center energy ({} eV)",
            cavity.center_energy
        ));
    }
    if !cavity.strength.is_finite() || cavity.strength < 0.0 {
        push(format!("negative cavity strength ({})", cavity.strength));
    }
    let n = norm(&cavity.polarization);
    if !n.is_finite() || (n - 1.0).abs() > POLARIZATION_TOLERANCE {
        push(format!(
            "cavity polarization is not a unit vector (norm {n})"
        ));
    }
    if !cavity.loss_rate.is_finite() || cavity.loss_rate < 0.0 {
        push(format!("negative loss rate ({} eV)", cavity.loss_rate));
    } else if cavity.loss_rate > 0.0 {
        match cavity.mode_spacing {
            Some(dw) if dw.is_finite() && dw > 0.0 => {}
            _ => push("mode_spacing required: loss_rate > 0 needs mode_spacing_eV > 0".into()),
        }
        let window = cavity.effective_window();
        if window.is_nan() || window < MIN_WINDOW_PER_LOSS * cavity.loss_rate {
            push(format!(
                "window_halfwidth {window} eV is below {MIN_WINDOW_PER_LOSS}·loss_rate"
            ));
        }
    }
    report
}

/// All invariant violations of an excitation list and a cavity.
pub fn validate_inputs(excitations: &[Excitation], cavity: &CavitySpec) -> ValidationReport {
    let mut report = validate_excitations(excitations);
    report.extend(validate_cavity(cavity));
    report
}
