//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage, 2 validation, 3 solver, 4 I/O.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::bath::{discretize_bath_with, Quadrature};
use crate::bundled::BundledSystem;
use crate::error::{Error, ErrorKind, Result};
use crate::io;
use crate::solution::Model;
use crate::spectrum::{self, linear_grid};
use crate::synth::{ContinuumParams, DefectLine};
use crate::types::{Axis, CavitySpec, ExcitationSet, PhotonMode};
use crate::validate;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_IO: i32 = 4;

pub fn exit_code(err: &Error) -> i32 {
    match err.kind() {
        ErrorKind::Validation => EXIT_VALIDATION,
        ErrorKind::Solver => EXIT_SOLVER,
        ErrorKind::Io => EXIT_IO,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "polariton",
    version,
    about = "Cavity polariton spectra from electronic excitations"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Diagonalize one excitation set against a cavity.
    Solve(SolveArgs),
    /// Lower-polariton metrics over a grid of cavity strengths.
    Sweep(SweepArgs),
    /// Broadened absorption spectrum.
    Spectrum(SpectrumArgs),
    /// Discretize a lossy cavity into a mode list.
    Bath(BathArgs),
    /// Integrated absorption under increasing excitation truncation.
    Converge(ConvergeArgs),
    /// Write a seeded synthetic continuum.
    Generate(GenerateArgs),
    /// Check input files and report every problem found.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModelArg {
    Rwa,
    Quadratic,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Rwa => Model::Rwa,
            ModelArg::Quadratic => Model::Quadratic,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AxisArg {
    X,
    Y,
    Z,
}

impl From<AxisArg> for Axis {
    fn from(a: AxisArg) -> Self {
        match a {
            AxisArg::X => Axis::X,
            AxisArg::Y => Axis::Y,
            AxisArg::Z => Axis::Z,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum QuadratureArg {
    Point,
    Bin,
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Output directory (created if missing).
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    /// Excitation CSV (or JSON).
    #[arg(long, conflicts_with = "system", required_unless_present = "system")]
    pub excitations: Option<PathBuf>,
    /// Bundled system: pristine, CHB, CBCB or CBVN.
    #[arg(long)]
    pub system: Option<String>,
    /// Cavity JSON. Defaults to a lossless cavity resonant with a bundled system.
    #[arg(long)]
    pub cavity: Option<PathBuf>,
    /// Explicit photon-mode list (e.g. from `bath`), used instead of --cavity.
    #[arg(long, conflicts_with = "cavity")]
    pub modes: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "quadratic")]
    pub model: ModelArg,
    /// Spectrum polarization axis. Defaults to the cavity polarization.
    #[arg(long, value_enum)]
    pub axis: Option<AxisArg>,
    /// Cavity strength used with a bundled system when no cavity file is given.
    #[arg(long, default_value_t = 0.001)]
    pub lambda: f64,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, default_value_t = 0.010)]
    pub lambda_min: f64,
    #[arg(long, default_value_t = 0.986)]
    pub lambda_max: f64,
    #[arg(long, default_value_t = 50)]
    pub lambda_steps: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Lorentzian broadening ħΓ in eV.
    #[arg(long)]
    pub gamma_ev: Option<f64>,
    /// Grid spacing Δ(ħω) in eV.
    #[arg(long)]
    pub domega_ev: Option<f64>,
    /// Energy range `lo,hi` in eV. Defaults to the stick range padded by 0.5 eV.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub range: Option<(f64, f64)>,
    /// Fine presets: ħΓ = 1 meV, Δ(ħω) = 0.1 meV.
    #[arg(long)]
    pub fine: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct BathArgs {
    #[arg(long)]
    pub cavity: PathBuf,
    #[arg(long, value_enum, default_value = "point")]
    pub quadrature: QuadratureArg,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Truncation schedule as percentages of the full set.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "10,20,30,40,50,60,70,80,90,100"
    )]
    pub schedule: Vec<f64>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = ContinuumParams::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = ContinuumParams::DEFAULT_ONSET)]
    pub onset: f64,
    #[arg(long, default_value_t = ContinuumParams::DEFAULT_CUTOFF)]
    pub cutoff: f64,
    #[arg(long, default_value_t = ContinuumParams::DEFAULT_COUNT)]
    pub count: usize,
    #[arg(long, default_value_t = ContinuumParams::DEFAULT_DIPOLE_SCALE)]
    pub dipole_scale: f64,
    /// Discrete line `energy,dx,dy,dz` added below the continuum (repeatable).
    #[arg(long, value_parser = parse_defect, allow_hyphen_values = true)]
    pub defect: Vec<DefectLine>,
    /// Omit the default 4.00 eV defect line when no --defect is given.
    #[arg(long, conflicts_with = "defect")]
    pub no_defect: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, required_unless_present_any = ["cavity", "modes"])]
    pub excitations: Option<PathBuf>,
    #[arg(long)]
    pub cavity: Option<PathBuf>,
    #[arg(long)]
    pub modes: Option<PathBuf>,
}

fn parse_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected 'lo,hi', got '{s}'"))?;
    let lo: f64 = a
        .trim()
        .parse()
        .map_err(|_| format!("bad lower bound '{a}'"))?;
    let hi: f64 = b
        .trim()
        .parse()
        .map_err(|_| format!("bad upper bound '{b}'"))?;
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(format!(
            "range lower bound {lo} must be below upper bound {hi}"
        ));
    }
    Ok((lo, hi))
}

fn parse_defect(s: &str) -> std::result::Result<DefectLine, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad number '{p}' in '{s}'"))
        })
        .collect::<std::result::Result<_, _>>()?;
    match parts.as_slice() {
        [e, x, y, z] => Ok(DefectLine {
            energy: *e,
            dipole: [*x, *y, *z],
            label: Some("defect".into()),
        }),
        _ => Err(format!("expected 'energy,dx,dy,dz', got '{s}'")),
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Human-readable output goes to `stdout`, diagnostics to `stderr`.
pub fn run_from<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let config = match RunConfig::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    let argv: Vec<String> = argv
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    match run(&config, &argv, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Executes a parsed command. Returns the exit code for outcomes that are
/// not errors of the engine itself (e.g. a failed `validate`).
pub fn run(config: &RunConfig, argv: &[String], stdout: &mut dyn Write) -> Result<i32> {
    let mut manifest = Manifest::new(argv);
    let out_dir = match &config.command {
        Command::Solve(a) => {
            cmd_solve(a, &mut manifest, stdout)?;
            &a.out.out
        }
        Command::Sweep(a) => {
            cmd_sweep(a, &mut manifest, stdout)?;
            &a.out.out
        }
        Command::Spectrum(a) => {
            cmd_spectrum(a, &mut manifest, stdout)?;
            &a.out.out
        }
        Command::Bath(a) => {
            cmd_bath(a, &mut manifest, stdout)?;
            &a.out.out
        }
        Command::Converge(a) => {
            cmd_converge(a, &mut manifest, stdout)?;
            &a.out.out
        }
        Command::Generate(a) => {
            cmd_generate(a, &mut manifest, stdout)?;
            &a.out.out
        }
        Command::Validate(a) => return cmd_validate(a, stdout),
    };
    manifest.write(out_dir)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct FileRecord {
    path: String,
    sha256: String,
    bytes: u64,
}

#[derive(Debug, Serialize)]
struct Manifest {
    tool: &'static str,
    version: &'static str,
    arguments: Vec<String>,
    max_dim: Option<String>,
    inputs: Vec<FileRecord>,
    outputs: Vec<FileRecord>,
}

impl Manifest {
    const FILE: &'static str = "manifest.json";

    fn new(argv: &[String]) -> Self {
        Manifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            arguments: argv.iter().skip(1).cloned().collect(),
            max_dim: std::env::var(crate::solution::MAX_DIM_ENV).ok(),
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    fn record_input(&mut self, path: &str, bytes: &[u8]) {
        self.inputs.push(FileRecord {
            path: path.to_string(),
            sha256: sha256_hex(bytes),
            bytes: bytes.len() as u64,
        });
    }

    fn write_output(&mut self, dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join(name);
        fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
        self.outputs.push(FileRecord {
            path: name.to_string(),
            sha256: sha256_hex(bytes),
            bytes: bytes.len() as u64,
        });
        Ok(path)
    }

    fn write(self, dir: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(&self).expect("manifest serializes");
        text.push('\n');
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join(Self::FILE);
        fs::write(&path, text).map_err(|e| Error::io(&path, e))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read_input(path: &Path, manifest: &mut Manifest) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    manifest.record_input(&path.display().to_string(), &bytes);
    String::from_utf8(bytes).map_err(|e| Error::parse(path.display().to_string(), e))
}

fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("output serializes");
    v.push(b'\n');
    v
}

/// Resolved inputs shared by the solving subcommands.
struct Problem {
    set: ExcitationSet,
    cavity: Option<CavitySpec>,
    modes: Vec<PhotonMode>,
    model: Model,
    axis: Axis,
}

fn check_paths_exist(args: &SystemArgs) -> Result<()> {
    for path in [&args.excitations, &args.cavity, &args.modes]
        .into_iter()
        .flatten()
    {
        if !path.exists() {
            return Err(Error::io(
                path,
                std::io::Error::new(std::io::ErrorKind::NotFound, "input file does not exist"),
            ));
        }
    }
    Ok(())
}

fn load_problem(args: &SystemArgs, manifest: &mut Manifest, need_cavity: bool) -> Result<Problem> {
    check_paths_exist(args)?;
    let bundled = args
        .system
        .as_deref()
        .map(str::parse::<BundledSystem>)
        .transpose()?;
    let set = match (&args.excitations, bundled) {
        (Some(path), _) => {
            let text = read_input(path, manifest)?;
            let rows = if path
                .extension()
                .is_some_and(|e| e.eq_ignore_ascii_case("json"))
            {
                io::parse_excitations_json(&text)?
            } else {
                io::parse_excitations_csv(text.as_bytes()).map_err(Error::Validation)?
            };
            ExcitationSet::new(rows, path.display().to_string())?
        }
        (None, Some(sys)) => {
            manifest.record_input(&format!("bundled:{}", sys.name()), sys.csv().as_bytes());
            sys.excitations()
        }
        (None, None) => {
            return Err(Error::invalid(
                "one of --excitations or --system is required",
            ))
        }
    };

    let cavity = match (&args.cavity, bundled) {
        (Some(path), _) => {
            let text = read_input(path, manifest)?;
            Some(
                serde_json::from_str::<CavitySpec>(&text)
                    .map_err(|e| Error::parse(path.display().to_string(), e))?,
            )
        }
        (None, Some(sys)) if args.modes.is_none() => Some(sys.resonant_cavity(args.lambda)),
        _ => None,
    };
    if need_cavity && cavity.is_none() {
        return Err(Error::invalid(
            "this command needs a cavity: pass --cavity, or --system for a resonant default",
        ));
    }
    let modes =
        match (&args.modes, &cavity) {
            (Some(path), _) => io::parse_modes_json(&read_input(path, manifest)?)?,
            (None, Some(c)) => c.modes()?,
            (None, None) => return Err(Error::invalid(
                "no photon modes: pass --cavity or --modes (or --system for a resonant default)",
            )),
        };
    let report = validate::validate_modes(&modes);
    if !report.is_ok() {
        return Err(Error::Validation(report));
    }
    let axis = match args.axis {
        Some(a) => a.into(),
        None => match (&cavity, bundled) {
            (Some(c), _) => c.axis(),
            (None, Some(sys)) => sys.axis(),
            (None, None) => Axis::dominant(&modes[0].polarization),
        },
    };
    Ok(Problem {
        set,
        cavity,
        modes,
        model: args.model.into(),
        axis,
    })
}

#[derive(Serialize)]
struct SticksOut<'a> {
    axis: Axis,
    model_tag: Model,
    sticks: &'a [spectrum::Stick],
}

fn cmd_solve(args: &SolveArgs, manifest: &mut Manifest, stdout: &mut dyn Write) -> Result<()> {
    let p = load_problem(&args.system, manifest, false)?;
    let sol = spectrum::solve(p.model, &p.set, &p.modes)?;
    let sticks = spectrum::stick_spectrum(&sol, &p.set, p.axis)?;
    let dir = &args.out.out;
    manifest.write_output(dir, "solution.json", &json_bytes(&sol.to_json()))?;
    manifest.write_output(
        dir,
        "sticks.json",
        &json_bytes(&SticksOut {
            axis: p.axis,
            model_tag: p.model,
            sticks: &sticks,
        }),
    )?;
    let _ = writeln!(
        stdout,
        "{} model: {} states ({} electronic, {} photonic)",
        p.model,
        sol.len(),
        sol.n_electronic(),
        sol.n_photonic()
    );
    match spectrum::lower_polariton_metrics(&sol, &p.set, p.axis) {
        Ok(m) => {
            let _ = writeln!(
                stdout,
                "lower polariton: state {} at {} eV, photonic weight {}, effective dipole {} eA",
                m.state,
                io::fmt_float(m.lower_energy),
                io::fmt_float(m.lower_photonic_weight),
                io::fmt_float(m.effective_dipole)
            );
        }
        Err(e) => log::warn!("{e}"),
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs, manifest: &mut Manifest, stdout: &mut dyn Write) -> Result<()> {
    if args.lambda_steps == 0 {
        return Err(Error::invalid("--lambda-steps must be at least 1"));
    }
    let p = load_problem(&args.system, manifest, true)?;
    let cavity = p.cavity.expect("cavity required");
    let lambdas = linear_grid(args.lambda_min, args.lambda_max, args.lambda_steps);
    let points = spectrum::sweep_coupling(&p.set, &cavity, &lambdas, p.model)?;
    let mut buf = Vec::new();
    io::write_metrics_csv(&points, &mut buf).map_err(|e| Error::io("metrics.csv", e))?;
    manifest.write_output(&args.out.out, "metrics.csv", &buf)?;
    let _ = writeln!(stdout, "{} sweep points written", points.len());
    Ok(())
}

fn cmd_spectrum(
    args: &SpectrumArgs,
    manifest: &mut Manifest,
    stdout: &mut dyn Write,
) -> Result<()> {
    let p = load_problem(&args.system, manifest, false)?;
    let (default_gamma, default_step) = if args.fine {
        (0.001, 0.0001)
    } else {
        (0.010, 0.001)
    };
    let gamma = args.gamma_ev.unwrap_or(default_gamma);
    let step = args.domega_ev.unwrap_or(default_step);
    let sol = spectrum::solve(p.model, &p.set, &p.modes)?;
    let sticks = spectrum::stick_spectrum(&sol, &p.set, p.axis)?;
    let range = args.range.unwrap_or_else(|| {
        let lo = sticks
            .iter()
            .map(|s| s.energy)
            .fold(f64::INFINITY, f64::min);
        let hi = sticks
            .iter()
            .map(|s| s.energy)
            .fold(f64::NEG_INFINITY, f64::max);
        ((lo - 0.5).max(0.0), hi + 0.5)
    });
    let mut grid = spectrum::broaden(&sticks, gamma, step, range)?;
    grid.polarization_axis = Some(p.axis);
    let mut buf = Vec::new();
    io::write_spectrum_csv(&grid, &mut buf).map_err(|e| Error::io("spectrum.csv", e))?;
    let dir = &args.out.out;
    manifest.write_output(dir, "spectrum.csv", &buf)?;
    manifest.write_output(
        dir,
        "sticks.json",
        &json_bytes(&SticksOut {
            axis: p.axis,
            model_tag: p.model,
            sticks: &sticks,
        }),
    )?;
    if let Some((i, v)) = grid.peak() {
        let _ = writeln!(
            stdout,
            "{}-polarized spectrum: {} points, peak {} eVA^2 at {} eV",
            p.axis,
            grid.len(),
            io::fmt_float(v),
            io::fmt_float(grid.axis[i])
        );
    }
    Ok(())
}

fn cmd_bath(args: &BathArgs, manifest: &mut Manifest, stdout: &mut dyn Write) -> Result<()> {
    let text = read_input(&args.cavity, manifest)?;
    let cavity: CavitySpec = serde_json::from_str(&text)
        .map_err(|e| Error::parse(args.cavity.display().to_string(), e))?;
    let quadrature = match args.quadrature {
        QuadratureArg::Point => Quadrature::PointSampled,
        QuadratureArg::Bin => Quadrature::BinIntegrated,
    };
    let bath = discretize_bath_with(&cavity, quadrature)?;
    manifest.write_output(
        &args.out.out,
        "modes.json",
        &json_bytes(&bath.to_json(&cavity)),
    )?;
    let _ = writeln!(
        stdout,
        "{} modes, coverage {}, {} dropped",
        bath.modes.len(),
        io::fmt_float(bath.coverage),
        bath.dropped
    );
    Ok(())
}

/// Percentages to excitation counts, rounding up and keeping at least one.
pub fn schedule_counts(percentages: &[f64], total: usize) -> Result<Vec<usize>> {
    percentages
        .iter()
        .map(|&p| {
            if !(p > 0.0 && p <= 100.0) {
                return Err(Error::invalid(format!(
                    "schedule entry {p}% is outside (0, 100]"
                )));
            }
            Ok(((p / 100.0 * total as f64 - 1e-9).ceil() as usize).clamp(1, total))
        })
        .collect()
}

fn cmd_converge(
    args: &ConvergeArgs,
    manifest: &mut Manifest,
    stdout: &mut dyn Write,
) -> Result<()> {
    let p = load_problem(&args.system, manifest, true)?;
    let cavity = p.cavity.expect("cavity required");
    let counts = schedule_counts(&args.schedule, p.set.len())?;
    let report = spectrum::convergence_report(&p.set, &cavity, &counts, p.model)?;
    let mut buf = Vec::new();
    io::write_convergence_csv(&report, &mut buf).map_err(|e| Error::io("convergence.csv", e))?;
    manifest.write_output(&args.out.out, "convergence.csv", &buf)?;
    let _ = match report.converged_at {
        Some(i) => writeln!(
            stdout,
            "converged within 1% at {} of {} excitations",
            report.rows[i].excitations,
            p.set.len()
        ),
        None => writeln!(stdout, "not converged within 1%"),
    };
    Ok(())
}

fn cmd_generate(
    args: &GenerateArgs,
    manifest: &mut Manifest,
    stdout: &mut dyn Write,
) -> Result<()> {
    let defects = if args.no_defect {
        Vec::new()
    } else if args.defect.is_empty() {
        ContinuumParams::hbn_like().defects
    } else {
        args.defect.clone()
    };
    let params = ContinuumParams {
        seed: args.seed,
        onset: args.onset,
        cutoff: args.cutoff,
        count: args.count,
        dipole_scale: args.dipole_scale,
        defects,
    };
    let set = params.generate()?;
    let mut buf = Vec::new();
    io::write_excitations_csv(&set, &mut buf).map_err(|e| Error::io("excitations.csv", e))?;
    manifest.write_output(&args.out.out, "excitations.csv", &buf)?;
    let _ = writeln!(stdout, "{} excitations written", set.len());
    Ok(())
}

fn cmd_validate(args: &ValidateArgs, stdout: &mut dyn Write) -> Result<i32> {
    let mut report = validate::ValidationReport::default();
    if let Some(path) = &args.excitations {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let parsed = if path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json"))
        {
            io::parse_excitations_json(&text).map(|rows| validate::validate_excitations(&rows))
        } else {
            Ok(io::parse_excitations_csv(text.as_bytes())
                .err()
                .unwrap_or_default())
        };
        match parsed {
            Ok(r) => report.extend(r),
            Err(e) => report.push_row(0, e.to_string()),
        }
    }
    if let Some(path) = &args.cavity {
        match io::read_cavity(path) {
            Ok(c) => report.extend(validate::validate_cavity(&c)),
            Err(e @ Error::Io { .. }) => return Err(e),
            Err(e) => report.push_row(0, e.to_string()),
        }
    }
    if let Some(path) = &args.modes {
        match io::read_modes(path) {
            Ok(m) => report.extend(validate::validate_modes(&m)),
            Err(e @ Error::Io { .. }) => return Err(e),
            Err(e) => report.push_row(0, e.to_string()),
        }
    }
    if report.is_ok() {
        let _ = writeln!(stdout, "ok");
        Ok(EXIT_OK)
    } else {
        Err(Error::Validation(report))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_rounds_up() {
        assert_eq!(
            schedule_counts(&[10.0, 50.0, 100.0], 501).unwrap(),
            vec![51, 251, 501]
        );
        assert_eq!(schedule_counts(&[1.0], 10).unwrap(), vec![1]);
        assert!(schedule_counts(&[0.0], 10).is_err());
        assert!(schedule_counts(&[120.0], 10).is_err());
    }

    #[test]
    fn range_parser() {
        assert_eq!(parse_range("3.5,4.5").unwrap(), (3.5, 4.5));
        assert!(parse_range("4.5,3.5").is_err());
        assert!(parse_range("4.5").is_err());
    }

    #[test]
    fn usage_errors_exit_1() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(
            run_from(["polariton", "frobnicate"], &mut out, &mut err),
            EXIT_USAGE
        );
        assert_eq!(
            run_from(["polariton", "--help"], &mut out, &mut err),
            EXIT_OK
        );
    }
}
