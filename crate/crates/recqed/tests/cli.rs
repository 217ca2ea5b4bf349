//! End-to-end tests of the `recqed` binary: subcommand contracts, exit
//! codes, file outputs, and run-to-run determinism.

use std::path::Path;
use std::process::{Command, Output};

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_recqed"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .env_remove("RECQED_CATALOG")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn catalog_list_prints_eight_ids() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["catalog", "--list"]);
    assert!(out.status.success());
    let lines: Vec<_> = stdout(&out).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 8);
    assert!(lines.iter().any(|l| l == "Er3+:Y2SiO5 4I15/2-4I13/2"));
    assert!(dir.path().join("catalog.json").exists());
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn figures_emits_expected_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "figures",
            "--ion",
            "Pr3+:Y2SiO5 3H4-1D2",
            "--Q",
            "1e9",
            "--radius",
            "0.5mm",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(dir.path().join("figures.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let figures = &v["figures"];
    let mu = figures["mu"].as_f64().unwrap();
    assert!((mu - 1.593e-32).abs() / 1.593e-32 < 1e-3);
    let t_spon = figures["t_spon"].as_f64().unwrap();
    assert!((t_spon - 5.664e-3).abs() / 5.664e-3 < 1e-3);
    for key in ["g", "kappa", "n0_pop", "n0_ph", "n0_sat"] {
        assert!(figures[key].as_f64().unwrap() > 0.0, "{key} missing");
    }
    // Stdout table mentions the Hz equivalents.
    assert!(stdout(&out).contains("Hz"));
}

#[test]
fn design_all_writes_one_csv_per_ion() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "design", "--target", "n0pop", "--ion", "all", "--points", "5",
        ],
    );
    assert!(out.status.success());
    let csvs: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.starts_with("design_") && n.ends_with("_n0pop.csv"))
        .collect();
    assert_eq!(csvs.len(), 8, "expected one CSV per catalog ion: {csvs:?}");
    let one = std::fs::read_to_string(dir.path().join(&csvs[0])).unwrap();
    assert!(one.starts_with("radius_m,Q_required,ell,mode_volume_m3\n"));
}

#[test]
fn spectrum_csv_has_contract_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "spectrum", "--g", "1MHz", "--kappa", "10MHz", "--gamma", "0.01MHz", "--points", "101",
        ],
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    assert!(text.starts_with("delta_rad_s,r_re,r_im,phase_unwrapped,emission_prob\n"));
    assert_eq!(text.lines().count(), 102);
}

#[test]
fn throwcatch_reports_high_fidelity() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["throwcatch", "--g", "10", "--kappa", "2", "--gamma", "0"],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(dir.path().join("summary.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(v["fidelity"].as_f64().unwrap() >= 0.99);
    assert!(v["conservation_defect"].as_f64().unwrap() <= 1e-6);
    assert!(v["parameters"]["g"].as_f64().unwrap() == 10.0);
    let traj = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert!(traj.starts_with(
        "t,node,alpha_re,alpha_im,phi12_re,phi12_im,phi13_re,phi13_im,omega,beta_re,beta_im\n"
    ));
    // Both nodes present.
    assert!(traj.lines().any(|l| l.split(',').nth(1) == Some("2")));
}

#[test]
fn fid_writes_time_series() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "fid",
            "--g",
            "1",
            "--kappa",
            "100",
            "--gamma",
            "0.01",
            "--angular",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(dir.path().join("fid.csv")).unwrap();
    assert!(text.starts_with("t,out_re,out_im,abs\n"));
    assert!(text.lines().count() > 1000);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let args = [
        "spectrum", "--g", "3.2MHz", "--kappa", "0.32MHz", "--gamma", "0.32MHz", "--points", "501",
    ];
    assert!(run_in(dir_a.path(), &args).status.success());
    assert!(run_in(dir_b.path(), &args).status.success());
    for name in ["spectrum.csv", "manifest.json"] {
        let a = std::fs::read(dir_a.path().join(name)).unwrap();
        let b = std::fs::read(dir_b.path().join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    // Unknown ion.
    let out = run_in(dir.path(), &["figures", "--ion", "nope", "--Q", "1e9"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error:"), "stderr: {err}");
    assert!(err.contains("available"), "stderr should list ids: {err}");
    // Bad unit string.
    let out = run_in(
        dir.path(),
        &[
            "figures",
            "--ion",
            "Pr3+:YAG 3H4-1D2",
            "--Q",
            "1e9",
            "--radius",
            "5parsec",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn physics_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    // Sub-wavelength resonator: below the fundamental-mode cutoff.
    let out = run_in(
        dir.path(),
        &[
            "figures",
            "--ion",
            "Pr3+:Y2SiO5 3H4-1D2",
            "--Q",
            "1e9",
            "--radius",
            "10nm",
        ],
    );
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("cutoff"), "stderr: {err}");
    assert_eq!(err.lines().count(), 1, "single-line error contract");

    // Missing mode volume: no radius, no override.
    let out = run_in(
        dir.path(),
        &["figures", "--ion", "Pr3+:Y2SiO5 3H4-1D2", "--Q", "1e9"],
    );
    assert_eq!(out.status.code(), Some(3));

    // User-pinned step too large for the rates.
    let out = run_in(
        dir.path(),
        &["throwcatch", "--g", "10", "--kappa", "2", "--dt", "0.5"],
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn custom_catalog_via_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mini.cat");
    std::fs::write(
        &path,
        "id = Test:ion\nwavelength_nm = 1000\noscillator_strength = 1e-6\n\
         T1_us = 100\nT2_us = 50\nT2_field = none\nhost_index = 1.5\n",
    )
    .unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_recqed"))
        .args(["catalog", "--list", "--catalog"])
        .arg(&path)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "Test:ion");
}

#[test]
fn custom_catalog_via_env_var() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mini.cat");
    std::fs::write(
        &path,
        "id = Env:ion\nwavelength_nm = 800\noscillator_strength = 1e-7\n\
         T1_us = 200\nT2_us = 100\nT2_field = none\nhost_index = 2.0\n",
    )
    .unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_recqed"))
        .args(["catalog", "--list", "--out"])
        .arg(dir.path())
        .env("RECQED_CATALOG", &path)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "Env:ion");
}

#[test]
fn unknown_subcommand_exits_2() {
    let out = Command::new(env!("CARGO_BIN_EXE_recqed"))
        .arg("frobnicate")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
