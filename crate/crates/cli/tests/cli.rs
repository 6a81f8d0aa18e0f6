use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gravnano(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gravnano"))
        .args(args)
        .current_dir(dir)
        .env_remove("GRAVNANO_JOBS")
        .output()
        .expect("binary runs")
}

fn metadata(csv: &str) -> Value {
    let first = csv.lines().next().unwrap();
    serde_json::from_str(first.strip_prefix("# ").unwrap()).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(2).map(|l| l.split(',').map(String::from).collect()).collect()
}

fn error_object(out: &Output) -> Value {
    serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap()
}

#[test]
fn fig6_crosses_near_970_s() {
    let dir = tempfile::tempdir().unwrap();
    let out = gravnano(&["figure", "fig6", "--deterministic"], dir.path());
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    let meta = metadata(&csv);
    assert_eq!(meta["figure"], "fig6");
    let header = csv.lines().nth(1).unwrap();
    assert_eq!(header, "t_s,width_m,width_free_m,E_eff_J,separation_m");
    let crossing = rows(&csv)
        .iter()
        .find(|r| r[4].parse::<f64>().unwrap() >= 1e-7)
        .map(|r| r[0].parse::<f64>().unwrap())
        .expect("separation reaches the threshold");
    assert!((crossing - 970.0).abs() / 970.0 < 0.15, "{crossing}");
    let reported = meta["crossing_time_s"].as_f64().unwrap();
    assert!((crossing - reported).abs() <= 1.0 + 1e-9);
}

#[test]
fn fig3_has_both_lattices() {
    let dir = tempfile::tempdir().unwrap();
    let out = gravnano(&["figure", "fig3", "--deterministic"], dir.path());
    let csv = String::from_utf8(out.stdout).unwrap();
    let r = rows(&csv);
    let n1: Vec<_> = r.iter().filter(|r| r[0] == "N1").collect();
    let n2: Vec<_> = r.iter().filter(|r| r[0] == "N2").collect();
    assert_eq!(n1.len(), 99);
    assert_eq!(n2.len(), 99);
    assert!(n1.iter().all(|r| r[4] == "515"));
    assert!(n2.iter().all(|r| r[4] == "4169"));
}

#[test]
fn malformed_scenario_exits_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{\"spec\": [").unwrap();
    let out = gravnano(&["evolve", "--scenario", "bad.json", "--output", "run.csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("run.csv").exists());
    assert!(out.stdout.is_empty());
    assert_eq!(error_object(&out)["error"]["kind"], "config");
}

#[test]
fn bad_flag_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = gravnano(&["potential", "--points", "many"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_object(&out)["exit_code"], 2);
}

#[test]
fn module_error_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = gravnano(&["evolve", "--rel-tol", "0.5", "--output", "run.csv"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let e = error_object(&out);
    assert_eq!(e["error"]["kind"], "invalid_input");
    assert!(e["error"]["message"].as_str().unwrap().contains("tol"));
    assert!(!dir.path().join("run.csv").exists());
}

#[test]
fn deterministic_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for (name, jobs) in [("a.csv", "1"), ("b.csv", "4"), ("c.csv", "4")] {
        let out = gravnano(
            &["lattice", "--radius-in-delta", "6", "--deterministic", "--jobs", jobs, "--output", name],
            dir.path(),
        );
        assert!(out.status.success());
    }
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.csv")).unwrap());
    assert_eq!(a, std::fs::read(dir.path().join("c.csv")).unwrap());
    let mut names: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["a.csv", "b.csv", "c.csv"]);
}

#[test]
fn timestamp_only_without_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out = gravnano(&["figure", "fig2"], dir.path());
    let meta = metadata(&String::from_utf8(out.stdout).unwrap());
    assert!(meta["generated_unix_s"].is_u64());
    assert_eq!(meta["scenario_hash"].as_str().unwrap().len(), 64);
    assert!(meta["version"].is_string());
}

#[test]
fn jobs_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = |jobs: &str| {
        Command::new(env!("CARGO_BIN_EXE_gravnano"))
            .args(["figure", "fig4", "--deterministic"])
            .current_dir(dir.path())
            .env("GRAVNANO_JOBS", jobs)
            .output()
            .unwrap()
    };
    let two = run("2");
    assert!(two.status.success());
    assert_eq!(two.stdout, run("3").stdout);
    assert_eq!(run("0").status.code(), Some(2));
}

#[test]
fn scenario_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = r#"{
        "spec": {"radius_m": 1e-7, "density_kg_m3": 2650.0, "lattice_constant_m": 5e-10,
                 "nucleus_radius_m": 5e-12, "atom_mass_kg": 9.976518712132799e-26},
        "model": {"kind": "piecewise_spring", "alpha": 1.0},
        "initial_spread_m": 2e-7, "t_end_s": 1000.0, "rel_tol": 1e-9, "samples": 20,
        "output": {"path": "from_file.csv", "format": "csv"}
    }"#;
    std::fs::write(dir.path().join("s.json"), scenario).unwrap();
    let a = gravnano(&["evolve", "--scenario", "s.json", "--deterministic"], dir.path());
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let b = gravnano(
        &[
            "evolve", "--initial-spread-m", "2e-7", "--t-end-s", "1000", "--samples", "20",
            "--deterministic", "--output", "from_flags.csv",
        ],
        dir.path(),
    );
    assert!(b.status.success());
    let fa = std::fs::read_to_string(dir.path().join("from_file.csv")).unwrap();
    let fb = std::fs::read_to_string(dir.path().join("from_flags.csv")).unwrap();
    assert_eq!(fa, fb);
}

#[test]
fn csv_numbers_keep_twelve_digits() {
    let dir = tempfile::tempdir().unwrap();
    let out = gravnano(&["potential", "--log", "--points", "5", "--deterministic"], dir.path());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().nth(1).unwrap(), "d_m,v_eff_J,branch");
    for r in rows(&csv) {
        for cell in &r[..2] {
            let mantissa = cell.split('e').next().unwrap();
            let digits = mantissa.chars().filter(|c| c.is_ascii_digit()).count();
            assert!(digits >= 12, "{cell}");
            assert!(cell.parse::<f64>().is_ok());
        }
        assert!(r[2] == "quintic" || r[2] == "coulomb");
    }
}

#[test]
fn json_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = gravnano(&["choquard", "--deterministic"], dir.path());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let e0 = v["result"]["e_n"].as_f64().unwrap();
    assert!((e0 - 0.163).abs() < 0.005);
    assert_eq!(v["result"]["virial_residuals"].as_array().unwrap().len(), 3);

    let out = gravnano(&["regime", "--radius-m", "1e-7", "--width-m", "1e-8", "--deterministic"], dir.path());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["label"]["regime"], "mesoscopic");
    assert!(v["result"]["N_c_atomic"].as_f64().unwrap() > 0.0);

    let out = gravnano(&["boundstate", "--points", "3", "--format", "json", "--deterministic"], dir.path());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["columns"][0], "R_m");
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
}
