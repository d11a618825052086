use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::validate;

/// Cartesian 3-vector.
pub type Vec3 = [f64; 3];

#[inline]
pub(crate) fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub(crate) fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// Cartesian polarization axis of an absorption spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    /// Axis carrying the largest-magnitude component of `v` (first on ties).
    pub fn dominant(v: &Vec3) -> Axis {
        let mut best = Axis::X;
        for axis in [Axis::Y, Axis::Z] {
            if v[axis.index()].abs() > v[best.index()].abs() {
                best = axis;
            }
        }
        best
    }

    pub fn unit(self) -> Vec3 {
        let mut v = [0.0; 3];
        v[self.index()] = 1.0;
        v
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            other => Err(Error::invalid(format!(
                "unknown axis '{other}' (expected x, y or z)"
            ))),
        }
    }
}

/// One electronic transition out of the ground state.
#[derive(Debug, Clone, PartialEq)]
pub struct Excitation {
    pub index: usize,
    /// Transition energy ħω_i in eV.
    pub energy: f64,
    /// Transition dipole ⟨g|R|e_i⟩ in e·Å.
    pub dipole: Vec3,
    pub label: Option<String>,
}

impl Excitation {
    pub fn new(index: usize, energy: f64, dipole: Vec3) -> Self {
        Excitation {
            index,
            energy,
            dipole,
            label: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }
}

/// Validated excitations, sorted ascending by energy.
///
/// Construction keeps the input order among equal energies and renumbers
/// `index` to the sorted position.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitationSet {
    excitations: Vec<Excitation>,
    source: String,
}

impl ExcitationSet {
    pub fn new(excitations: Vec<Excitation>, source: impl Into<String>) -> Result<Self> {
        let report = validate::validate_excitations(&excitations);
        if !report.is_ok() {
            return Err(Error::Validation(report));
        }
        let mut excitations = excitations;
        excitations.sort_by(|a, b| a.energy.total_cmp(&b.energy));
        for (i, exc) in excitations.iter_mut().enumerate() {
            exc.index = i;
        }
        Ok(ExcitationSet {
            excitations,
            source: source.into(),
        })
    }

    /// Builds a set from `(energy, dipole)` pairs, numbering them in order.
    pub fn from_lines(lines: &[(f64, Vec3)], source: impl Into<String>) -> Result<Self> {
        let excitations = lines
            .iter()
            .enumerate()
            .map(|(i, &(energy, dipole))| Excitation::new(i, energy, dipole))
            .collect();
        Self::new(excitations, source)
    }

    pub fn len(&self) -> usize {
        self.excitations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.excitations.is_empty()
    }

    pub fn excitations(&self) -> &[Excitation] {
        &self.excitations
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Excitation> {
        self.excitations.iter()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn energies(&self) -> Vec<f64> {
        self.excitations.iter().map(|e| e.energy).collect()
    }

    /// The lowest `count` excitations.
    pub fn truncated(&self, count: usize) -> Result<Self> {
        if count == 0 || count > self.len() {
            return Err(Error::invalid(format!(
                "truncation to {count} excitations is outside 1..={}",
                self.len()
            )));
        }
        Ok(ExcitationSet {
            excitations: self.excitations[..count].to_vec(),
            source: format!("{} (lowest {count})", self.source),
        })
    }

    /// Copy with dipole `i` negated. Used to probe sign insensitivity.
    pub fn with_flipped_dipole(&self, i: usize) -> Self {
        let mut out = self.clone();
        for c in out.excitations[i].dipole.iter_mut() {
            *c = -*c;
        }
        out
    }

    pub fn into_inner(self) -> Vec<Excitation> {
        self.excitations
    }
}

impl<'a> IntoIterator for &'a ExcitationSet {
    type Item = &'a Excitation;
    type IntoIter = std::slice::Iter<'a, Excitation>;

    fn into_iter(self) -> Self::IntoIter {
        self.excitations.iter()
    }
}

/// One quantized cavity mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonMode {
    #[serde(rename = "energy_eV")]
    pub energy: f64,
    pub polarization: Vec3,
    /// Scalar cavity strength λ_k along `polarization`, eV^{1/2}/nm.
    #[serde(rename = "strength_ev05_per_nm")]
    pub strength: f64,
}

impl PhotonMode {
    pub fn new(energy: f64, polarization: Vec3, strength: f64) -> Result<Self> {
        let mode = PhotonMode {
            energy,
            polarization,
            strength,
        };
        let violations = validate::validate_mode(&mode, None);
        if violations.is_empty() {
            Ok(mode)
        } else {
            Err(Error::Validation(validate::ValidationReport { violations }))
        }
    }
}

/// A physical cavity. `loss_rate = 0` is one lossless mode; `loss_rate > 0`
/// expands into a Lorentzian mode bath (see [`crate::bath`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CavitySpec {
    #[serde(rename = "center_energy_eV")]
    pub center_energy: f64,
    #[serde(rename = "strength_ev05_per_nm")]
    pub strength: f64,
    pub polarization: Vec3,
    #[serde(rename = "loss_rate_eV", default)]
    pub loss_rate: f64,
    #[serde(
        rename = "mode_spacing_eV",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub mode_spacing: Option<f64>,
    #[serde(
        rename = "window_halfwidth_eV",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub window_halfwidth: Option<f64>,
}

impl CavitySpec {
    /// A single lossless mode.
    pub fn lossless(center_energy: f64, strength: f64, polarization: Vec3) -> Self {
        CavitySpec {
            center_energy,
            strength,
            polarization,
            loss_rate: 0.0,
            mode_spacing: None,
            window_halfwidth: None,
        }
    }

    /// A lossy cavity discretized with the default window of 10κ.
    pub fn lossy(
        center_energy: f64,
        strength: f64,
        polarization: Vec3,
        loss_rate: f64,
        mode_spacing: f64,
    ) -> Self {
        CavitySpec {
            center_energy,
            strength,
            polarization,
            loss_rate,
            mode_spacing: Some(mode_spacing),
            window_halfwidth: None,
        }
    }

    pub fn with_window(mut self, halfwidth: f64) -> Self {
        self.window_halfwidth = Some(halfwidth);
        self
    }

    pub fn with_strength(&self, strength: f64) -> Self {
        CavitySpec {
            strength,
            ..self.clone()
        }
    }

    /// Bath truncation half-width; 10κ when unspecified.
    pub fn effective_window(&self) -> f64 {
        self.window_halfwidth
            .unwrap_or(crate::bath::DEFAULT_WINDOW_PER_LOSS * self.loss_rate)
    }

    pub fn is_lossless(&self) -> bool {
        self.loss_rate == 0.0
    }

    /// Photon modes representing this cavity.
    pub fn modes(&self) -> Result<Vec<PhotonMode>> {
        let report = validate::validate_cavity(self);
        if !report.is_ok() {
            return Err(Error::Validation(report));
        }
        if self.is_lossless() {
            Ok(vec![PhotonMode {
                energy: self.center_energy,
                polarization: self.polarization,
                strength: self.strength,
            }])
        } else {
            Ok(crate::bath::discretize_bath(self)?.modes)
        }
    }

    pub fn axis(&self) -> Axis {
        Axis::dominant(&self.polarization)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_sorts_stably_and_renumbers() {
        let set = ExcitationSet::new(
            vec![
                Excitation::new(0, 5.0, [1.0, 0.0, 0.0]).with_label("a"),
                Excitation::new(1, 4.0, [0.0, 1.0, 0.0]).with_label("b"),
                Excitation::new(2, 5.0, [0.0, 0.0, 1.0]).with_label("c"),
            ],
            "test",
        )
        .unwrap();
        let labels: Vec<_> = set.iter().map(|e| e.label.clone().unwrap()).collect();
        assert_eq!(labels, ["b", "a", "c"]);
        let idx: Vec<_> = set.iter().map(|e| e.index).collect();
        assert_eq!(idx, [0, 1, 2]);
    }

    #[test]
    fn set_rejects_duplicate_index() {
        let err = ExcitationSet::new(
            vec![
                Excitation::new(0, 1.0, [0.0; 3]),
                Excitation::new(0, 2.0, [0.0; 3]),
            ],
            "dup",
        )
        .unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn dark_state_allowed() {
        assert!(ExcitationSet::from_lines(&[(1.0, [0.0; 3])], "dark").is_ok());
    }

    #[test]
    fn mode_rejects_unnormalized_polarization() {
        assert!(PhotonMode::new(1.0, [1.0, 1.0, 0.0], 0.1).is_err());
        assert!(PhotonMode::new(1.0, [0.0, 1.0, 0.0], 0.1).is_ok());
        assert!(PhotonMode::new(1.0, [0.0, 1.0, 0.0], -0.1).is_err());
        assert!(PhotonMode::new(0.0, [0.0, 1.0, 0.0], 0.1).is_err());
    }

    #[test]
    fn dominant_axis() {
        assert_eq!(Axis::dominant(&[0.1, -0.5, 0.2]), Axis::Y);
        assert_eq!(Axis::dominant(&[0.3, 0.3, 0.0]), Axis::X);
    }

    #[test]
    fn cavity_json_field_names() {
        let json = r#"{"center_energy_eV":4.0,"strength_ev05_per_nm":0.5,"polarization":[1,0,0],"loss_rate_eV":0.05,"mode_spacing_eV":0.001,"window_halfwidth_eV":0.5}"#;
        let cav: CavitySpec = serde_json::from_str(json).unwrap();
        assert_eq!(cav.loss_rate, 0.05);
        assert_eq!(cav.mode_spacing, Some(0.001));
        assert_eq!(cav.effective_window(), 0.5);
        let lossless: CavitySpec = serde_json::from_str(
            r#"{"center_energy_eV":4.0,"strength_ev05_per_nm":0.5,"polarization":[1,0,0]}"#,
        )
        .unwrap();
        assert!(lossless.is_lossless());
        assert_eq!(lossless.modes().unwrap().len(), 1);
    }
}
