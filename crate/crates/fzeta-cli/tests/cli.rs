//! End-to-end checks of the binary: exit codes, determinism of the emitted
//! artifacts, and the catalog round-trip.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fzeta"))
}

#[test]
fn exit_codes() {
    // Usage error (clap): 2.
    let out = bin().args(["dims", "--bogus-flag"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // Validation error: unknown example -> 3.
    let out = bin()
        .args(["classify", "--example", "menger-sponge"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    // Numeric error: evaluation on a pole -> 4.
    let out = bin()
        .args(["eval", "--example", "sierpinski-gasket", "--s", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    // Success: 0.
    let out = bin()
        .args(["eval", "--example", "sierpinski-gasket", "--s", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn catalog_round_trips() {
    let list = bin().args(["dims", "--list"]).output().unwrap();
    assert!(list.status.success());
    let names: Vec<String> = String::from_utf8(list.stdout)
        .unwrap()
        .lines()
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    assert!(names.len() >= 20);
    for name in &names {
        let n: u32 = if name.starts_with("ngasket-") || name.starts_with("ncarpet-") {
            name.rsplit('-').next().unwrap().parse().unwrap()
        } else if name == "torus" || name == "ball-3" {
            3
        } else if name.starts_with("cantor-s") || name == "ball-1" {
            1
        } else {
            2
        };
        // eval at s = N (the measure anchor) must succeed for every entry.
        let out = bin()
            .args(["eval", "--example", name, "--s", &format!("{n}")])
            .output()
            .unwrap();
        assert!(out.status.success(), "eval {name}: {:?}", out);
        // dims and classify round-trip without error.
        let out = bin()
            .args(["dims", "--example", name, "--window", "-1:8:12"])
            .output()
            .unwrap();
        assert!(out.status.success(), "dims {name}");
        let out = bin().args(["classify", "--example", name]).output().unwrap();
        assert!(out.status.success(), "classify {name}");
    }
}

#[test]
fn montecarlo_artifacts_are_deterministic() {
    let dir = std::env::temp_dir();
    let a = dir.join("fzeta_tube_a.csv");
    let b = dir.join("fzeta_tube_b.csv");
    let common = [
        "tube",
        "--geometry",
        "dust",
        "--tmin",
        "1e-3",
        "--tmax",
        "1e-1",
        "--points",
        "12",
        "--samples",
        "60000",
    ];
    for (path, seed) in [(&a, "7"), (&b, "7")] {
        let out = bin()
            .args(common)
            .args(["--out", path.to_str().unwrap(), "--seed", seed])
            .output()
            .unwrap();
        assert!(out.status.success(), "{out:?}");
    }
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b, "same seed must reproduce identical bytes");
    // A different seed must actually change the sample.
    let out = bin()
        .args(common)
        .args(["--out", b.to_str().unwrap(), "--seed", "8"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_ne!(bytes_a, std::fs::read(&b).unwrap());
}

#[test]
fn tube_fit_pipeline_recovers_cantor_dimension() {
    let dir = std::env::temp_dir();
    let csv = dir.join("fzeta_pipeline.csv");
    let out = bin()
        .args([
            "tube",
            "--geometry",
            "cantor:2:1/3:0.5",
            "--tmin",
            "1e-6",
            "--tmax",
            "1e-1",
            "--points",
            "64",
            "--out",
            csv.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = bin()
        .args(["fit", "--in", csv.to_str().unwrap(), "--N", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let v: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    let d = v["d"].as_f64().unwrap();
    assert!((d - 0.6309297535714574).abs() < 0.01, "fit {d}");
}

#[test]
fn dims_output_matches_expected_lattice() {
    let out = bin()
        .args([
            "dims",
            "--example",
            "sierpinski-gasket",
            "--window",
            "-1:3:30",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(String::from_utf8(out.stdout).unwrap().trim()).unwrap();
    let dims = v["dims"].as_array().unwrap();
    assert_eq!(dims.len(), 9); // {0, 1} plus 7 lattice points
    let d = 3.0_f64.ln() / 2.0_f64.ln();
    let principal = dims
        .iter()
        .filter(|x| x["principal"].as_bool().unwrap())
        .count();
    assert_eq!(principal, 7);
    for x in dims {
        let re = x["re"].as_f64().unwrap();
        assert!(re.abs() < 1e-9 || (re - 1.0).abs() < 1e-9 || (re - d).abs() < 1e-9);
    }
}

#[test]
fn drum_descriptor_reports_quasiperiods() {
    let out = bin()
        .args(["drum", "--d", "0.5", "--n", "4"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(String::from_utf8(out.stdout).unwrap().trim()).unwrap();
    let t = v["quasiperiods"].as_array().unwrap();
    let want: Vec<f64> = [2.0_f64, 3.0, 5.0, 7.0].iter().map(|p| 2.0 * p.ln()).collect();
    for (got, want) in t.iter().zip(&want) {
        assert!((got.as_f64().unwrap() - want).abs() < 1e-12);
    }
    assert_eq!(v["certificate"]["independent_up_to"].as_i64(), Some(10_000));
}
