//! Lowest bright excitation of four hBN systems, shipped with the crate.
//!
//! Only the lowest line of each system is bundled. Continuum behaviour is
//! studied with [`crate::synth`].

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::io::parse_excitations_csv;
use crate::types::{Axis, CavitySpec, ExcitationSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BundledSystem {
    Pristine,
    Chb,
    Cbcb,
    Cbvn,
}

impl BundledSystem {
    pub const ALL: [BundledSystem; 4] = [
        BundledSystem::Pristine,
        BundledSystem::Chb,
        BundledSystem::Cbcb,
        BundledSystem::Cbvn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BundledSystem::Pristine => "pristine",
            BundledSystem::Chb => "CHB",
            BundledSystem::Cbcb => "CBCB",
            BundledSystem::Cbvn => "CBVN",
        }
    }

    /// Raw CSV contents.
    pub fn csv(self) -> &'static str {
        match self {
            BundledSystem::Pristine => include_str!("../data/bundled/pristine.csv"),
            BundledSystem::Chb => include_str!("../data/bundled/CHB.csv"),
            BundledSystem::Cbcb => include_str!("../data/bundled/CBCB.csv"),
            BundledSystem::Cbvn => include_str!("../data/bundled/CBVN.csv"),
        }
    }

    /// Axis along which the system's spectrum is reported.
    pub fn axis(self) -> Axis {
        match self {
            BundledSystem::Cbvn => Axis::Y,
            _ => Axis::X,
        }
    }

    pub fn excitations(self) -> ExcitationSet {
        let rows = parse_excitations_csv(self.csv().as_bytes())
            .unwrap_or_else(|r| panic!("bundled {} is malformed:\n{r}", self.name()));
        ExcitationSet::new(rows, format!("bundled:{}", self.name()))
            .expect("bundled data validated above")
    }

    /// Lossless cavity resonant with the lowest line, polarized along [`Self::axis`].
    pub fn resonant_cavity(self, strength: f64) -> CavitySpec {
        let energy = self.excitations().excitations()[0].energy;
        CavitySpec::lossless(energy, strength, self.axis().unit())
    }
}

impl fmt::Display for BundledSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BundledSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace(['-', '_'], "");
        BundledSystem::ALL
            .into_iter()
            .find(|b| b.name().to_ascii_lowercase() == key)
            .ok_or_else(|| {
                Error::invalid(format!(
                    "unknown bundled system '{s}' (expected pristine, CHB, CBCB or CBVN)"
                ))
            })
    }
}
