//! File formats: excitation CSV/JSON, cavity JSON, mode lists, and the
//! spectrum, metrics and convergence tables.
//!
//! Every float written by this module goes through [`fmt_float`] so that
//! identical inputs produce byte-identical files.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bath::BathJson;
use crate::error::{Error, Result};
use crate::spectrum::{ConvergenceReport, SpectrumGrid, Stick, SweepPoint};
use crate::types::{CavitySpec, Excitation, ExcitationSet, PhotonMode};
use crate::validate::{validate_excitations, ValidationReport};

pub const EXCITATION_HEADER: [&str; 5] = ["index", "energy_eV", "dx_eA", "dy_eA", "dz_eA"];
pub const SPECTRUM_HEADER: &str = "energy_eV,absorption_eVA2";
pub const METRICS_HEADER: &str =
    "lambda,lower_energy_eV,peak_abs_eVA2,photonic_weight,effective_dipole_eA";
pub const CONVERGENCE_HEADER: &str =
    "excitations,fraction,integrated_absorption_eVA2,relative_difference,converged";

/// Scientific notation with 12 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.11e}")
}

/// JSON mirror of one excitation CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcitationRecord {
    pub index: usize,
    #[serde(rename = "energy_eV")]
    pub energy: f64,
    #[serde(rename = "dx_eA")]
    pub dx: f64,
    #[serde(rename = "dy_eA")]
    pub dy: f64,
    #[serde(rename = "dz_eA")]
    pub dz: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl From<&Excitation> for ExcitationRecord {
    fn from(e: &Excitation) -> Self {
        ExcitationRecord {
            index: e.index,
            energy: e.energy,
            dx: e.dipole[0],
            dy: e.dipole[1],
            dz: e.dipole[2],
            label: e.label.clone(),
        }
    }
}

impl From<ExcitationRecord> for Excitation {
    fn from(r: ExcitationRecord) -> Self {
        Excitation {
            index: r.index,
            energy: r.energy,
            dipole: [r.dx, r.dy, r.dz],
            label: r.label,
        }
    }
}

fn parse_number(raw: &str, column: &str, line: u64, report: &mut ValidationReport) -> Option<f64> {
    let text = raw.trim();
    match text.parse::<f64>() {
        Ok(v) => Some(v),
        Err(_) => {
            let looks_complex = text.ends_with(['i', 'j'])
                && text
                    .trim_end_matches(['i', 'j'])
                    .chars()
                    .skip(1)
                    .any(|c| c == '+' || c == '-');
            let msg = if looks_complex {
                format!("line {line}: {column} '{text}' is complex; only real values are accepted")
            } else {
                format!("line {line}: {column} '{text}' is not a number")
            };
            report.push_row(line as usize, msg);
            None
        }
    }
}

/// Parses excitation CSV, collecting every row-level problem.
///
/// On success the rows are returned as given (unsorted); invariant checks on
/// the parsed rows are part of the error report.
pub fn parse_excitations_csv(
    reader: impl Read,
) -> std::result::Result<Vec<Excitation>, ValidationReport> {
    let mut report = ValidationReport::default();
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let headers = match rdr.headers() {
        Ok(h) => h.clone(),
        Err(e) => {
            report.push_row(1, format!("line 1: unreadable header: {e}"));
            return Err(report);
        }
    };
    let cols: Vec<&str> = headers.iter().collect();
    let label_col = match cols.as_slice() {
        [a, b, c, d, e] if [*a, *b, *c, *d, *e] == EXCITATION_HEADER => None,
        [a, b, c, d, e, f] if [*a, *b, *c, *d, *e] == EXCITATION_HEADER && *f == "label" => Some(5),
        _ => {
            report.push_row(
                1,
                format!(
                    "line 1: header must be '{}[,label]', found '{}'",
                    EXCITATION_HEADER.join(","),
                    cols.join(",")
                ),
            );
            return Err(report);
        }
    };
    let expected = cols.len();
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map(|p| p.line()).unwrap_or(0);
                report.push_row(line as usize, format!("line {line}: {e}"));
                continue;
            }
        };
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != expected {
            report.push_row(
                line as usize,
                format!(
                    "line {line}: expected {expected} fields, found {}",
                    record.len()
                ),
            );
            continue;
        }
        let index = match record[0].trim().parse::<usize>() {
            Ok(i) => Some(i),
            Err(_) => {
                report.push_row(
                    line as usize,
                    format!(
                        "line {line}: index '{}' is not a non-negative integer",
                        &record[0]
                    ),
                );
                None
            }
        };
        let energy = parse_number(&record[1], "energy_eV", line, &mut report);
        let dx = parse_number(&record[2], "dx_eA", line, &mut report);
        let dy = parse_number(&record[3], "dy_eA", line, &mut report);
        let dz = parse_number(&record[4], "dz_eA", line, &mut report);
        if let (Some(index), Some(energy), Some(dx), Some(dy), Some(dz)) =
            (index, energy, dx, dy, dz)
        {
            let label = label_col
                .map(|c| record[c].to_string())
                .filter(|s| !s.is_empty());
            out.push(Excitation {
                index,
                energy,
                dipole: [dx, dy, dz],
                label,
            });
        }
    }
    if report.is_ok() {
        report.extend(validate_excitations(&out));
    } else {
        report.extend(crate::validate::row_checks(&out).0);
    }
    if report.is_ok() {
        Ok(out)
    } else {
        Err(report)
    }
}

pub fn parse_excitations_json(text: &str) -> Result<Vec<Excitation>> {
    let records: Vec<ExcitationRecord> =
        serde_json::from_str(text).map_err(|e| Error::parse("excitation json", e))?;
    Ok(records.into_iter().map(Excitation::from).collect())
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn is_json(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

/// Reads an excitation set from CSV (or JSON when the extension is `.json`).
pub fn read_excitations(path: &Path) -> Result<ExcitationSet> {
    let text = read_text(path)?;
    let excitations = if is_json(path) {
        parse_excitations_json(&text)?
    } else {
        parse_excitations_csv(text.as_bytes()).map_err(Error::Validation)?
    };
    ExcitationSet::new(excitations, path.display().to_string())
}

pub fn write_excitations_csv(set: &ExcitationSet, mut out: impl Write) -> std::io::Result<()> {
    let with_labels = set.iter().any(|e| e.label.is_some());
    write!(out, "{}", EXCITATION_HEADER.join(","))?;
    if with_labels {
        write!(out, ",label")?;
    }
    writeln!(out)?;
    for e in set {
        write!(
            out,
            "{},{},{},{},{}",
            e.index,
            fmt_float(e.energy),
            fmt_float(e.dipole[0]),
            fmt_float(e.dipole[1]),
            fmt_float(e.dipole[2])
        )?;
        if with_labels {
            write!(out, ",{}", e.label.as_deref().unwrap_or(""))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn excitations_to_json(set: &ExcitationSet) -> Vec<ExcitationRecord> {
    set.iter().map(ExcitationRecord::from).collect()
}

pub fn read_cavity(path: &Path) -> Result<CavitySpec> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| Error::parse(path.display().to_string(), e))
}

/// Mode list accepted by the solvers: either a bare JSON array of modes or a
/// serialized bath (`{"modes": [...], "metadata": {...}}`).
pub fn parse_modes_json(text: &str) -> Result<Vec<PhotonMode>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum ModesFile {
        Bath(BathJson),
        List(Vec<PhotonMode>),
    }
    match serde_json::from_str::<ModesFile>(text).map_err(|e| Error::parse("mode json", e))? {
        ModesFile::Bath(b) => Ok(b.modes),
        ModesFile::List(l) => Ok(l),
    }
}

pub fn read_modes(path: &Path) -> Result<Vec<PhotonMode>> {
    parse_modes_json(&read_text(path)?)
}

pub fn write_spectrum_csv(grid: &SpectrumGrid, mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "{SPECTRUM_HEADER}")?;
    for (w, a) in grid.axis.iter().zip(&grid.values) {
        writeln!(out, "{},{}", fmt_float(*w), fmt_float(*a))?;
    }
    Ok(())
}

pub fn write_metrics_csv(points: &[SweepPoint], mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "{METRICS_HEADER}")?;
    for p in points {
        let m = &p.metrics;
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_float(p.lambda),
            fmt_float(m.lower_energy),
            fmt_float(m.lower_peak_absorption),
            fmt_float(m.lower_photonic_weight),
            fmt_float(m.effective_dipole)
        )?;
    }
    Ok(())
}

pub fn write_convergence_csv(
    report: &ConvergenceReport,
    mut out: impl Write,
) -> std::io::Result<()> {
    writeln!(out, "{CONVERGENCE_HEADER}")?;
    for (i, r) in report.rows.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.excitations,
            fmt_float(r.fraction),
            fmt_float(r.integrated),
            fmt_float(r.relative_difference),
            u8::from(report.converged_at == Some(i))
        )?;
    }
    Ok(())
}

/// Stick list with per-state weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SticksJson {
    pub axis: crate::types::Axis,
    pub model_tag: crate::solution::Model,
    pub sticks: Vec<Stick>,
}
