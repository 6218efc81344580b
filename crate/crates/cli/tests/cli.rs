use std::path::Path;
use std::process::{Command, Output};

use sccp_cli::config::ExperimentConfig;
use sccp_cli::presets;
use sccp_cli::Report;

fn sccp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sccp")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> Report {
    let out = sccp(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn write_config(dir: &Path, json: &str) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, json).unwrap();
    path.to_string_lossy().into_owned()
}

fn col(r: &Report, name: &str) -> Vec<f64> {
    let i = r.columns.iter().position(|c| c == name).unwrap();
    r.rows.iter().map(|row| row[i]).collect()
}

#[test]
fn disk_grid_centroids_lie_on_the_direction_axes() {
    let r = report(&["section", "--preset", "disk"]);
    assert_eq!(r.rows.len(), 9);
    assert_eq!(r.columns, ["ux", "uy", "t", "measure", "cx", "cy", "err", "n_evals"]);
    for row in &r.rows {
        let (ux, uy, t, cx, cy) = (row[0], row[1], row[2], row[4], row[5]);
        assert!((cx - t * ux).abs() < 1e-12 && (cy - t * uy).abs() < 1e-12, "{row:?}");
        assert!((row[3] - 2.0 * (1.0 - t * t).sqrt()).abs() < 1e-12);
    }
}

#[test]
fn parabola_chord_midpoints_match_closed_form() {
    let r = report(&["section", "--preset", "parabola"]);
    for row in &r.rows {
        let m = -row[0] / row[1];
        assert!((row[4] - m / 2.0).abs() < 1e-10, "{row:?}");
    }
}

#[test]
fn inadmissible_direction_becomes_a_row_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"command": "section",
        "body": {"kind": "elliptic-paraboloid-epigraph", "params": [1.0], "dim": 2},
        "directions": {"list": [[1.0, 0.0], [0.0, 1.0]]}, "levels": {"list": [0.5, 1.0]}}"#;
    let path = write_config(dir.path(), cfg);
    let r = report(&["section", "--config", &path]);
    assert_eq!(r.rows.len(), 2);
    assert_eq!(r.diagnostics.len(), 2);
    assert!(r.diagnostics.iter().all(|d| d.error.contains("unbounded")), "{:?}", r.diagnostics);
    assert_eq!(r.summary["failed"], 2);
}

#[test]
fn all_rows_failing_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"command": "asym", "body": {"kind": "ellipsoid", "params": [1.0, 2.0], "dim": 2}, "radii": [10, 100]}"#;
    let path = write_config(dir.path(), cfg);
    let out = sccp(&["asym", "--config", &path]);
    assert_eq!(out.status.code(), Some(3));
    let r: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert!(r.diagnostics[0].error.contains("sphere"), "{:?}", r.diagnostics);
}

#[test]
fn invalid_configs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        "{not json",
        r#"{"command": "asym", "body": {"kind": "ellipsoid", "params": [1.0], "dim": 2}, "radii": [10]}"#,
        r#"{"command": "asym", "body": {"kind": "ellipsoid", "params": [1.0, 1.0], "dim": 2}, "radii": [10, 5]}"#,
        r#"{"command": "asym", "body": {"kind": "ellipsoid", "params": [1.0, 1.0], "dim": 2}, "radii": [10], "tol": -1}"#,
        r#"{"command": "section", "body": {"kind": "ellipsoid", "params": [1.0, 1.0], "dim": 2},
            "directions": {"list": [[1.0, 0.0, 0.0]]}, "levels": {"auto": 3}}"#,
        r#"{"command": "sccp", "body": {"kind": "ellipsoid", "params": [1.0, 1.0], "dim": 2},
            "directions": {"grid": 4}, "n_levels": 3}"#,
    ];
    for cfg in cases {
        let path = write_config(dir.path(), cfg);
        let sub = if cfg.contains("section") { "section" } else if cfg.contains("sccp") { "sccp" } else { "asym" };
        let out = sccp(&[sub, "--config", &path]);
        assert_eq!(out.status.code(), Some(2), "{cfg}: {}", String::from_utf8_lossy(&out.stderr));
    }
    // Config for another subcommand, unknown preset, both sources.
    let path = write_config(dir.path(), cases[2].replace("[10, 5]", "[10, 50]").as_str());
    assert_eq!(sccp(&["section", "--config", &path]).status.code(), Some(2));
    assert_eq!(sccp(&["sccp", "--preset", "nonsense"]).status.code(), Some(2));
    assert_eq!(sccp(&["sccp", "--preset", "ellipsoid", "--config", &path]).status.code(), Some(2));
    assert_eq!(sccp(&["sccp", "--preset", "ellipsoid", "--tol", "0"]).status.code(), Some(2));
}

#[test]
fn trichotomy_presets() {
    let r = report(&["sccp", "--preset", "hyperboloid"]);
    let v = &r.summary["verdict"];
    assert_eq!(v["tag"], "concurrent");
    let w: Vec<f64> = serde_json::from_value(v["witness"].clone()).unwrap();
    let apex = [-1.0, 0.5, 1.0];
    assert!(w.iter().zip(apex).all(|(a, b)| (a - b).abs() < 1e-6), "{w:?}");

    let r = report(&["sccp", "--preset", "paraboloid"]);
    let v = &r.summary["verdict"];
    assert_eq!(v["tag"], "parallel");
    let w: Vec<f64> = serde_json::from_value(v["witness"].clone()).unwrap();
    assert!((w[2] - 1.0).abs() < 1e-9 && w[0].abs() < 1e-6 && w[1].abs() < 1e-6, "{w:?}");

    let r = report(&["sccp", "--preset", "ellipsoid"]);
    assert_eq!(r.summary["verdict"]["tag"], "concurrent");

    let r = report(&["sccp", "--preset", "controls"]);
    assert_eq!(r.summary["verdict"]["tag"], "neither");
}

#[test]
fn cutvol_presets() {
    let r = report(&["cutvol", "--preset", "parabola"]);
    for v in col(&r, "value") {
        assert!((v - 4.0 / 3.0).abs() < 1e-8, "{v}");
    }
    assert_eq!(r.summary["constant"], true);

    let r = report(&["cutvol", "--preset", "sphere-gradient"]);
    assert_eq!(r.rows.len(), 10);
    assert!(r.summary["max_identity_residual_over_diameter"].as_f64().unwrap() <= 1e-4);
    assert!(r.summary["max_measure_mismatch"].as_f64().unwrap() <= 1e-4);
    // The unit sphere contains the origin, so it was moved up before cutting.
    assert_eq!(r.summary["shift"], serde_json::json!([0.0, 0.0, 2.0]));

    let r = report(&["cutvol", "--preset", "quartic"]);
    assert!(r.summary["spread"]["rel_spread"].as_f64().unwrap() >= 0.05);
    assert_eq!(r.summary["constant"], false);
}

#[test]
fn gradient_centroids_are_reported_in_the_original_frame() {
    let dir = tempfile::tempdir().unwrap();
    // Horizontal cut of the unit disk at height 0.5 after the disk is lifted to (0, 2).
    let cfg = r#"{"command": "cutvol", "task": "gradient",
        "body": {"kind": "ellipsoid", "params": [1.0, 1.0], "dim": 2},
        "cuts": {"list": [[0.0, 0.4]]}}"#;
    let path = write_config(dir.path(), cfg);
    let r = report(&["cutvol", "--config", &path]);
    assert_eq!(r.summary["shift"], serde_json::json!([0.0, 2.0]));
    let (cx, cy) = (col(&r, "cx")[0], col(&r, "cy")[0]);
    assert!(cx.abs() < 1e-9 && (cy - 0.5).abs() < 1e-9, "({cx}, {cy})");
}

#[test]
fn asym_presets() {
    let r = report(&["asym", "--preset", "fig1"]);
    assert_eq!(r.summary["verdict"], "not_asymptotic");
    assert_eq!(r.columns, ["R", "d_asym", "d_blowdown", "err"]);
    let d = col(&r, "d_asym");
    assert!(d.windows(2).all(|w| w[1] >= w[0]), "{d:?}");
    assert!(col(&r, "d_blowdown")[3] <= 1e-3);

    let r = report(&["asym", "--preset", "hyperboloid"]);
    assert_eq!(r.summary["verdict"], "asymptotic");
}

#[test]
fn csv_is_deterministic_and_reports_rerun_from_their_echo() {
    let dir = tempfile::tempdir().unwrap();
    let a = sccp(&["sccp", "--preset", "controls", "--format", "csv"]).stdout;
    let b = sccp(&["sccp", "--preset", "controls", "--format", "csv"]).stdout;
    assert_eq!(a, b);
    assert!(String::from_utf8_lossy(&a).starts_with("ux,uy,bx,by,dx,dy,residual_rms"));

    let r = report(&["cutvol", "--preset", "sphere-gradient", "--seed", "7"]);
    let path = write_config(dir.path(), &serde_json::to_string(&r.config).unwrap());
    let again = report(&["cutvol", "--config", &path]);
    assert_eq!(r.rows, again.rows);
    assert_eq!(again.config.seed, 7);
}

#[test]
fn configs_round_trip_losslessly() {
    let all = [
        ("section", presets::SECTION),
        ("sccp", presets::SCCP),
        ("cutvol", presets::CUTVOL),
        ("asym", presets::ASYM),
    ];
    for (command, names) in all {
        for name in names {
            let mut cfg = presets::preset(command, name).unwrap();
            cfg.tol = Some(0.1 + 0.2);
            cfg.seed = u64::MAX;
            let back = ExperimentConfig::from_json(&cfg.to_json()).unwrap();
            assert_eq!(back, cfg, "{command} {name}");
        }
    }
}

#[test]
fn out_dir_receives_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results");
    let status = sccp(&["asym", "--preset", "paraboloid", "--out", out.to_str().unwrap()]).status;
    assert!(status.success());
    let csv = std::fs::read_to_string(out.join("asym.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
    let r: Report = serde_json::from_str(&std::fs::read_to_string(out.join("asym.json")).unwrap()).unwrap();
    assert_eq!(r.summary["verdict"], "not_asymptotic");
}
