//! Polariton spectra of molecules and defects in an optical cavity.
//!
//! Two solvers share one input model: [`rwa`] diagonalizes the
//! single-excitation rotating-wave Hamiltonian, [`quadratic`] the full
//! quadratic light-matter form with counter-rotating and self-energy terms.
//! Lossy cavities become Lorentzian mode baths ([`bath`]); [`spectrum`]
//! turns eigenpairs into absorption, sweeps and convergence reports.

pub mod bath;
pub mod bundled;
pub mod cli;
pub mod coupling;
pub mod eigen;
pub mod error;
pub mod io;
pub mod quadratic;
pub mod rwa;
pub mod solution;
pub mod spectrum;
pub mod synth;
pub mod types;
pub mod units;
pub mod validate;

pub use bath::{discretize_bath, discretize_bath_with, BathDiscretization, Quadrature};
pub use bundled::BundledSystem;
pub use coupling::{coupling_rate, strength_dipole};
pub use error::{Error, ErrorKind, Result};
pub use quadratic::{build_quadratic_matrix, solve_quadratic, QuadraticForm};
pub use rwa::{build_rwa_matrix, solve_rwa};
pub use solution::{Model, PolaritonSolution, SolverConfig};
pub use spectrum::{
    broaden, convergence_report, lower_polariton_metrics, lower_polariton_state, solve,
    stick_spectrum, sweep_coupling, ConvergenceReport, PolaritonMetrics, SpectrumGrid, Stick,
    SweepPoint,
};
pub use synth::{generate_synthetic_continuum, ContinuumParams};
pub use types::{Axis, CavitySpec, Excitation, ExcitationSet, PhotonMode, Vec3};
