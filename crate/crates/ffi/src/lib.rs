//! C ABI for the polariton engine.
//!
//! Objects cross the boundary as opaque handles created by `*_new`/`*_solve`
//! functions and released with the matching `*_free`. Every fallible call
//! returns a [`PolaritonStatus`]; on failure a description is available from
//! [`polariton_last_error_message`] on the same thread.
//!
//! Array outputs follow one convention: the caller passes a buffer and its
//! capacity, the required length is written to `out_len` (when non-null), and
//! `POLARITON_STATUS_BUFFER_TOO_SMALL` is returned if the buffer is short.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use polariton::spectrum;
use polariton::{
    Axis, BundledSystem, CavitySpec, Error, ErrorKind, Excitation, ExcitationSet, Model,
    PhotonMode, Stick,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolaritonStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    SolverFailure = 3,
    IoFailure = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// Values accepted by the `model` parameters.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolaritonModel {
    Rwa = 0,
    Quadratic = 1,
}

/// Values accepted by the `axis` parameters.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolaritonAxis {
    X = 0,
    Y = 1,
    Z = 2,
}

/// Cavity description. `loss_rate_ev = 0` is a single lossless mode.
/// For a lossy cavity `mode_spacing_ev` must be positive;
/// `window_halfwidth_ev = 0` selects the default of ten loss rates.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolaritonCavity {
    pub center_energy_ev: f64,
    pub strength: f64,
    pub polarization: [f64; 3],
    pub loss_rate_ev: f64,
    pub mode_spacing_ev: f64,
    pub window_halfwidth_ev: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolaritonStick {
    pub energy_ev: f64,
    pub strength_eva2: f64,
    pub photonic_weight: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolaritonLowerMetrics {
    pub state: usize,
    pub energy_ev: f64,
    pub peak_absorption_eva2: f64,
    pub photonic_weight: f64,
    pub effective_dipole_ea: f64,
}

/// Opaque excitation set.
pub struct PolaritonExcitationSet {
    inner: ExcitationSet,
}

/// Opaque solution. Keeps a copy of the excitations it was solved for.
pub struct PolaritonSolution {
    solution: polariton::PolaritonSolution,
    set: ExcitationSet,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> PolaritonStatus {
    match err.kind() {
        ErrorKind::Validation => PolaritonStatus::InvalidInput,
        ErrorKind::Solver => PolaritonStatus::SolverFailure,
        ErrorKind::Io => PolaritonStatus::IoFailure,
    }
}

enum Failure {
    Status(PolaritonStatus, String),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

fn null(what: &str) -> Failure {
    Failure::Status(PolaritonStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Status(PolaritonStatus::InvalidInput, msg.into())
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> PolaritonStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PolaritonStatus::Ok,
        Ok(Err(Failure::Status(status, msg))) => {
            set_last_error(msg);
            status
        }
        Ok(Err(Failure::Engine(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("internal panic: {msg}"));
            PolaritonStatus::Panic
        }
    }
}

unsafe fn slice<'a, T>(ptr: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn c_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| invalid(format!("{what} is not valid UTF-8")))
}

unsafe fn write_array<T: Copy>(
    values: &[T],
    buf: *mut T,
    capacity: usize,
    out_len: *mut usize,
) -> Result<(), Failure> {
    if !out_len.is_null() {
        *out_len = values.len();
    }
    if capacity < values.len() {
        return Err(Failure::Status(
            PolaritonStatus::BufferTooSmall,
            format!(
                "buffer holds {capacity} entries but {} are needed",
                values.len()
            ),
        ));
    }
    if !values.is_empty() {
        if buf.is_null() {
            return Err(null("output buffer"));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    }
    Ok(())
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output handle"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn model_of(model: u32) -> Result<Model, Failure> {
    match model {
        0 => Ok(Model::Rwa),
        1 => Ok(Model::Quadratic),
        other => Err(invalid(format!("unknown model {other}"))),
    }
}

fn axis_of(axis: u32) -> Result<Axis, Failure> {
    match axis {
        0 => Ok(Axis::X),
        1 => Ok(Axis::Y),
        2 => Ok(Axis::Z),
        other => Err(invalid(format!("unknown axis {other}"))),
    }
}

impl From<&PolaritonCavity> for CavitySpec {
    fn from(c: &PolaritonCavity) -> Self {
        CavitySpec {
            center_energy: c.center_energy_ev,
            strength: c.strength,
            polarization: c.polarization,
            loss_rate: c.loss_rate_ev,
            mode_spacing: (c.mode_spacing_ev != 0.0).then_some(c.mode_spacing_ev),
            window_halfwidth: (c.window_halfwidth_ev != 0.0).then_some(c.window_halfwidth_ev),
        }
    }
}

impl From<Stick> for PolaritonStick {
    fn from(s: Stick) -> Self {
        PolaritonStick {
            energy_ev: s.energy,
            strength_eva2: s.strength,
            photonic_weight: s.photonic_weight,
        }
    }
}

impl From<PolaritonStick> for Stick {
    fn from(s: PolaritonStick) -> Self {
        Stick {
            energy: s.energy_ev,
            strength: s.strength_eva2,
            photonic_weight: s.photonic_weight,
        }
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn polariton_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL.
/// The pointer stays valid until the next library call on this thread.
#[no_mangle]
pub extern "C" fn polariton_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds an excitation set from `count` energies (eV) and `3 * count`
/// dipole components (e·Å, xyz interleaved).
///
/// # Safety
/// `energies` must hold `count` values and `dipoles` `3 * count` values;
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn polariton_excitations_new(
    energies: *const f64,
    dipoles: *const f64,
    count: usize,
    out: *mut *mut PolaritonExcitationSet,
) -> PolaritonStatus {
    guard(|| {
        let e = slice(energies, count, "energies")?;
        let d = slice(
            dipoles,
            count
                .checked_mul(3)
                .ok_or_else(|| invalid("count overflows"))?,
            "dipoles",
        )?;
        let rows = e
            .iter()
            .zip(d.chunks_exact(3))
            .enumerate()
            .map(|(i, (&energy, v))| Excitation::new(i, energy, [v[0], v[1], v[2]]))
            .collect();
        let inner = ExcitationSet::new(rows, "ffi")?;
        store(out, PolaritonExcitationSet { inner })
    })
}

/// Reads an excitation CSV (or `.json`) file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn polariton_excitations_read(
    path: *const c_char,
    out: *mut *mut PolaritonExcitationSet,
) -> PolaritonStatus {
    guard(|| {
        let path = c_str(path, "path")?;
        let inner = polariton::io::read_excitations(Path::new(path))?;
        store(out, PolaritonExcitationSet { inner })
    })
}

/// Loads a bundled system by name (`pristine`, `CHB`, `CBCB`, `CBVN`).
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn polariton_excitations_bundled(
    name: *const c_char,
    out: *mut *mut PolaritonExcitationSet,
) -> PolaritonStatus {
    guard(|| {
        let system: BundledSystem = c_str(name, "name")?.parse()?;
        store(
            out,
            PolaritonExcitationSet {
                inner: system.excitations(),
            },
        )
    })
}

/// Number of excitations, or 0 for a null handle.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn polariton_excitations_len(set: *const PolaritonExcitationSet) -> usize {
    set.as_ref().map_or(0, |s| s.inner.len())
}

/// # Safety
/// `set` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn polariton_excitations_free(set: *mut PolaritonExcitationSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Coupling ħg (eV) between one transition and one cavity mode.
///
/// # Safety
/// `dipole` and `polarization` must each point to 3 values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn polariton_coupling_rate(
    energy_ev: f64,
    dipole: *const f64,
    mode_energy_ev: f64,
    polarization: *const f64,
    strength: f64,
    out: *mut f64,
) -> PolaritonStatus {
    guard(|| {
        let d = slice(dipole, 3, "dipole")?;
        let p = slice(polarization, 3, "polarization")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let exc = Excitation::new(0, energy_ev, [d[0], d[1], d[2]]);
        let mode = PhotonMode::new(mode_energy_ev, [p[0], p[1], p[2]], strength)?;
        *out = polariton::coupling_rate(&exc, &mode);
        Ok(())
    })
}

/// Solves `set` against `cavity` with `model` (a [`PolaritonModel`] value).
///
/// # Safety
/// `set` and `cavity` must be valid; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn polariton_solve(
    set: *const PolaritonExcitationSet,
    cavity: *const PolaritonCavity,
    model: u32,
    out: *mut *mut PolaritonSolution,
) -> PolaritonStatus {
    guard(|| {
        let set = set.as_ref().ok_or_else(|| null("set"))?;
        let cavity = CavitySpec::from(cavity.as_ref().ok_or_else(|| null("cavity"))?);
        let model = model_of(model)?;
        let modes = cavity.modes()?;
        let solution = spectrum::solve(model, &set.inner, &modes)?;
        store(
            out,
            PolaritonSolution {
                solution,
                set: set.inner.clone(),
            },
        )
    })
}

/// Number of polariton states, or 0 for a null handle.
///
/// # Safety
/// `sol` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn polariton_solution_len(sol: *const PolaritonSolution) -> usize {
    sol.as_ref().map_or(0, |s| s.solution.len())
}

/// Polariton energies in eV, ascending.
///
/// # Safety
/// `sol` must be valid; `buf` must hold `capacity` values.
#[no_mangle]
pub unsafe extern "C" fn polariton_solution_energies(
    sol: *const PolaritonSolution,
    buf: *mut f64,
    capacity: usize,
    out_len: *mut usize,
) -> PolaritonStatus {
    guard(|| {
        let sol = sol.as_ref().ok_or_else(|| null("solution"))?;
        write_array(&sol.solution.energies, buf, capacity, out_len)
    })
}

/// Photonic weight of every state.
///
/// # Safety
/// `sol` must be valid; `buf` must hold `capacity` values.
#[no_mangle]
pub unsafe extern "C" fn polariton_solution_photonic_weights(
    sol: *const PolaritonSolution,
    buf: *mut f64,
    capacity: usize,
    out_len: *mut usize,
) -> PolaritonStatus {
    guard(|| {
        let sol = sol.as_ref().ok_or_else(|| null("solution"))?;
        write_array(
            &spectrum::photonic_weights(&sol.solution),
            buf,
            capacity,
            out_len,
        )
    })
}

/// Stick spectrum along `axis` (a [`PolaritonAxis`] value).
///
/// # Safety
/// `sol` must be valid; `buf` must hold `capacity` sticks.
#[no_mangle]
pub unsafe extern "C" fn polariton_solution_sticks(
    sol: *const PolaritonSolution,
    axis: u32,
    buf: *mut PolaritonStick,
    capacity: usize,
    out_len: *mut usize,
) -> PolaritonStatus {
    guard(|| {
        let sol = sol.as_ref().ok_or_else(|| null("solution"))?;
        let sticks: Vec<PolaritonStick> =
            spectrum::stick_spectrum(&sol.solution, &sol.set, axis_of(axis)?)?
                .into_iter()
                .map(PolaritonStick::from)
                .collect();
        write_array(&sticks, buf, capacity, out_len)
    })
}

/// Lower-polariton metrics along `axis`.
///
/// # Safety
/// `sol` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn polariton_solution_lower_polariton(
    sol: *const PolaritonSolution,
    axis: u32,
    out: *mut PolaritonLowerMetrics,
) -> PolaritonStatus {
    guard(|| {
        let sol = sol.as_ref().ok_or_else(|| null("solution"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let m = spectrum::lower_polariton_metrics(&sol.solution, &sol.set, axis_of(axis)?)?;
        *out = PolaritonLowerMetrics {
            state: m.state,
            energy_ev: m.lower_energy,
            peak_absorption_eva2: m.lower_peak_absorption,
            photonic_weight: m.lower_photonic_weight,
            effective_dipole_ea: m.effective_dipole,
        };
        Ok(())
    })
}

/// # Safety
/// `sol` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn polariton_solution_free(sol: *mut PolaritonSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// Lorentzian-broadened absorption on the grid `lo, lo + step, …, ≤ hi`.
///
/// # Safety
/// `sticks` must hold `count` sticks; `buf` must hold `capacity` values.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn polariton_broaden(
    sticks: *const PolaritonStick,
    count: usize,
    gamma_ev: f64,
    step_ev: f64,
    lo_ev: f64,
    hi_ev: f64,
    buf: *mut f64,
    capacity: usize,
    out_len: *mut usize,
) -> PolaritonStatus {
    guard(|| {
        let sticks: Vec<Stick> = slice(sticks, count, "sticks")?
            .iter()
            .copied()
            .map(Stick::from)
            .collect();
        let grid = spectrum::broaden(&sticks, gamma_ev, step_ev, (lo_ev, hi_ev))?;
        write_array(&grid.values, buf, capacity, out_len)
    })
}
