use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use polariton::{coupling_rate, BundledSystem};
use serde_json::Value;

fn polariton(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polariton"))
        .args(args)
        .env_remove("POLARITON_MAX_DIM")
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn solve_resonant_defect_splits_by_twice_the_coupling() {
    let dir = tempfile::tempdir().unwrap();
    let out = polariton(&[
        "solve",
        "--system",
        "CHB",
        "--lambda",
        "0.001",
        "--model",
        "rwa",
        "--out",
        path_str(dir.path()),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let set = BundledSystem::Chb.excitations();
    let modes = BundledSystem::Chb.resonant_cavity(0.001).modes().unwrap();
    let g = coupling_rate(set.iter().next().unwrap(), &modes[0]).abs();

    let sol = read_json(&dir.path().join("solution.json"));
    let e: Vec<f64> = sol["energies"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(e.len(), 2);
    assert!(((e[1] - e[0]) - 2.0 * g).abs() < 1e-12, "{e:?} vs g={g}");
    assert!((0.5 * (e[0] + e[1]) - 4.0).abs() < 1e-12);
    assert!(dir.path().join("sticks.json").exists());
}

#[test]
fn validate_reports_every_bad_row() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bad.csv");
    fs::write(
        &csv,
        "index,energy_eV,dx_eA,dy_eA,dz_eA,label\n\
         0,4.0,0.1,0,0,ok\n\
         1,abc,0.1,0,0,x\n\
         2,-1.0,0.1,0,0,neg\n",
    )
    .unwrap();
    let out = polariton(&["validate", "--excitations", path_str(&csv)]);
    assert_eq!(out.status.code(), Some(2));
    let text = format!(
        "{}{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(text.contains("not a number"), "{text}");
    assert!(text.contains("line 3:"), "{text}");
    assert!(text.contains("nonpositive energy at index 2"), "{text}");
}

#[test]
fn validate_accepts_good_input() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("good.csv");
    fs::write(&csv, BundledSystem::Cbvn.csv()).unwrap();
    let out = polariton(&["validate", "--excitations", path_str(&csv)]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn sweep_writes_one_row_per_strength_and_is_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let out = polariton(&[
            "sweep",
            "--system",
            "CHB",
            "--lambda-min",
            "0.010",
            "--lambda-max",
            "0.986",
            "--lambda-steps",
            "20",
            "--out",
            path_str(d.path()),
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let text = fs::read(a.path().join("metrics.csv")).unwrap();
    assert_eq!(text, fs::read(b.path().join("metrics.csv")).unwrap());
    let text = String::from_utf8(text).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], polariton::io::METRICS_HEADER);
    assert_eq!(lines.len(), 21);
    let first: f64 = lines[1].split(',').next().unwrap().parse().unwrap();
    let last: f64 = lines[20].split(',').next().unwrap().parse().unwrap();
    assert!((first - 0.010).abs() < 1e-12 && (last - 0.986).abs() < 1e-12);
}

#[test]
fn manifest_checksums_match_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = polariton(&[
        "spectrum",
        "--system",
        "CBCB",
        "--out",
        path_str(dir.path()),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let manifest = read_json(&dir.path().join("manifest.json"));
    let outputs = manifest["outputs"].as_array().unwrap();
    let names: Vec<&str> = outputs
        .iter()
        .map(|o| o["path"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["spectrum.csv", "sticks.json"]);
    for o in outputs {
        let bytes = fs::read(dir.path().join(o["path"].as_str().unwrap())).unwrap();
        assert_eq!(
            o["sha256"].as_str().unwrap(),
            polariton::cli::sha256_hex(&bytes)
        );
        assert_eq!(o["bytes"].as_u64().unwrap(), bytes.len() as u64);
    }
    assert_eq!(manifest["inputs"][0]["path"], "bundled:CBCB");
}

#[test]
fn oversized_problem_is_a_solver_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_polariton"))
        .args(["solve", "--system", "CHB", "--out", path_str(dir.path())])
        .env("POLARITON_MAX_DIM", "1")
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn generate_is_deterministic_and_round_trips() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let out = polariton(&[
            "generate",
            "--seed",
            "11",
            "--count",
            "40",
            "--out",
            path_str(d.path()),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let csv = a.path().join("excitations.csv");
    assert_eq!(
        fs::read(&csv).unwrap(),
        fs::read(b.path().join("excitations.csv")).unwrap()
    );
    let set = polariton::io::read_excitations(&csv).unwrap();
    assert_eq!(set.len(), 41);

    let out = polariton(&["validate", "--excitations", path_str(&csv)]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn missing_input_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = polariton(&[
        "solve",
        "--excitations",
        path_str(&dir.path().join("nope.csv")),
        "--system",
        "CHB",
    ]);
    assert_eq!(
        out.status.code(),
        Some(1),
        "conflicting flags are a usage error"
    );
    let out = polariton(&[
        "solve",
        "--excitations",
        path_str(&dir.path().join("nope.csv")),
        "--out",
        path_str(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(polariton(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        polariton(&["sweep", "--lambda-steps", "many"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(polariton(&["--help"]).status.code(), Some(0));
}
