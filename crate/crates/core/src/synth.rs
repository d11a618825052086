//! Seeded synthetic excitation continua.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::types::{Excitation, ExcitationSet};

/// Discrete line prepended below a continuum.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectLine {
    pub energy: f64,
    pub dipole: [f64; 3],
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuumParams {
    pub seed: u64,
    pub onset: f64,
    pub cutoff: f64,
    pub count: usize,
    /// RMS dipole magnitude per continuum excitation, e·Å.
    pub dipole_scale: f64,
    pub defects: Vec<DefectLine>,
}

impl ContinuumParams {
    pub const DEFAULT_SEED: u64 = 7;
    pub const DEFAULT_ONSET: f64 = 4.25;
    pub const DEFAULT_CUTOFF: f64 = 9.0;
    pub const DEFAULT_COUNT: usize = 500;
    pub const DEFAULT_DIPOLE_SCALE: f64 = 0.25;

    /// hBN-like in-plane continuum with a 4.00 eV, 0.027 e·Å x-polarized line.
    pub fn hbn_like() -> Self {
        ContinuumParams {
            seed: Self::DEFAULT_SEED,
            onset: Self::DEFAULT_ONSET,
            cutoff: Self::DEFAULT_CUTOFF,
            count: Self::DEFAULT_COUNT,
            dipole_scale: Self::DEFAULT_DIPOLE_SCALE,
            defects: vec![DefectLine {
                energy: 4.0,
                dipole: [0.027, 0.0, 0.0],
                label: Some("defect".into()),
            }],
        }
    }

    pub fn without_defects(mut self) -> Self {
        self.defects.clear();
        self
    }

    pub fn generate(&self) -> Result<ExcitationSet> {
        generate_synthetic_continuum(self)
    }
}

impl Default for ContinuumParams {
    fn default() -> Self {
        Self::hbn_like()
    }
}

/// Builds `count` excitations evenly spaced over `[onset, cutoff]` with
/// in-plane Gaussian dipoles rescaled so that Σ|d|² = dipole_scale²·count.
///
/// `count = 1` places the single excitation at `onset`. Defect lines come
/// first in the returned set's source order and are not rescaled.
pub fn generate_synthetic_continuum(params: &ContinuumParams) -> Result<ExcitationSet> {
    let ContinuumParams {
        seed,
        onset,
        cutoff,
        count,
        dipole_scale,
        ref defects,
    } = *params;
    if count == 0 {
        return Err(Error::invalid("continuum count must be at least 1"));
    }
    if !(dipole_scale > 0.0 && dipole_scale.is_finite()) {
        return Err(Error::invalid(format!(
            "dipole scale must be positive, got {dipole_scale}"
        )));
    }
    if !(onset > 0.0 && onset.is_finite() && cutoff.is_finite()) || onset >= cutoff {
        return Err(Error::invalid(format!(
            "continuum needs 0 < onset < cutoff, got onset {onset} and cutoff {cutoff}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut raw: Vec<[f64; 3]> = (0..count)
        .map(|_| {
            [
                StandardNormal.sample(&mut rng),
                StandardNormal.sample(&mut rng),
                0.0,
            ]
        })
        .collect();
    let total: f64 = raw.iter().map(|d| d[0] * d[0] + d[1] * d[1]).sum();
    let factor = dipole_scale * (count as f64 / total).sqrt();
    for d in &mut raw {
        d[0] *= factor;
        d[1] *= factor;
    }

    let step = if count > 1 {
        (cutoff - onset) / (count - 1) as f64
    } else {
        0.0
    };
    let mut excitations: Vec<Excitation> = defects
        .iter()
        .enumerate()
        .map(|(i, line)| Excitation {
            index: i,
            energy: line.energy,
            dipole: line.dipole,
            label: line.label.clone(),
        })
        .collect();
    let first = excitations.len();
    excitations.extend(
        raw.into_iter()
            .enumerate()
            .map(|(i, d)| Excitation::new(first + i, onset + i as f64 * step, d)),
    );
    ExcitationSet::new(
        excitations,
        format!("synthetic(seed={seed}, onset={onset}, cutoff={cutoff}, count={count}, scale={dipole_scale})"),
    )
}
