//! End-to-end tests of the `beamnet` binary: exit codes, artifacts and
//! determinism of the written files.

use std::path::Path;
use std::process::{Command, Output};

use beamnet::report;

fn beamnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_beamnet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{path:?}: {e}"))
}

#[test]
fn usage_errors_exit_2_without_writing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let out_str = out.to_str().unwrap();

    let bad_flag = beamnet(&["cantilever", "--does-not-exist"]);
    assert_eq!(bad_flag.status.code(), Some(2));

    let bad_scheme = beamnet(&["cantilever", "--scheme", "implicit", "--out", out_str]);
    assert_eq!(bad_scheme.status.code(), Some(2));
    assert!(!out.exists(), "usage errors must not create output");

    let bad_steps = beamnet(&["cantilever", "--steps", "0", "--out", out_str]);
    assert_eq!(bad_steps.status.code(), Some(2));
    assert!(!out.exists());

    let empty_schemes = beamnet(&["compare", "--schemes", "", "--out", out_str]);
    assert_eq!(empty_schemes.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn cantilever_writes_artifacts_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bar");
    let out_str = out.to_str().unwrap();
    let args = [
        "cantilever",
        "--gf",
        "0.1",
        "--elements",
        "2",
        "--steps",
        "20",
        "--plot",
        "--out",
        out_str,
    ];

    let first = beamnet(&args);
    assert_eq!(first.status.code(), Some(0), "{first:?}");
    let sub = out.join("gf0.1-n2");
    for name in ["model.json", "history.csv", "summary.json", "states.json", "curve.svg", "network.svg"] {
        assert!(sub.join(name).is_file(), "missing {name}");
    }
    assert!(!sub.join("error.json").exists());

    let history = read(&sub.join("history.csv"));
    let rows = report::parse_history(&history).unwrap();
    assert_eq!(rows.len(), 20);
    assert!(rows.iter().any(|r| r.n_ruptured > 0));

    let clobber = beamnet(&args);
    assert_eq!(clobber.status.code(), Some(2), "refuses to overwrite");

    let mut rerun_args = args.to_vec();
    rerun_args.push("--overwrite");
    let rerun = beamnet(&rerun_args);
    assert_eq!(rerun.status.code(), Some(0));
    assert_eq!(read(&sub.join("history.csv")), history, "rerun must be byte-identical");
}

#[test]
fn snap_back_is_recorded_and_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("snap");
    let run = beamnet(&[
        "cantilever",
        "--gf",
        "0.02",
        "--elements",
        "1",
        "--steps",
        "10",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(1));
    let error = read(&out.join("gf0.02-n1/error.json"));
    let (kind, message) = beamnet_cli::output::parse_error_json(&error).unwrap();
    assert_eq!(kind, "snap-back");
    assert!(message.contains("snap-back"));
}

#[test]
fn tensile_run_and_network_rerun_match() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sheet");
    let out_str = out.to_str().unwrap();
    let run = beamnet(&[
        "tensile",
        "--width",
        "6",
        "--height",
        "3",
        "--density",
        "175",
        "--seed",
        "3",
        "--steps",
        "5",
        "--displacement",
        "0.3",
        "--out",
        out_str,
    ]);
    assert_eq!(run.status.code(), Some(0), "{run:?}");
    let history = read(&out.join("history.csv"));

    let model = out.join("model.json");
    let out2 = dir.path().join("replay");
    let replay = beamnet(&[
        "network",
        model.to_str().unwrap(),
        "--steps",
        "5",
        "--displacement",
        "0.3",
        "--out",
        out2.to_str().unwrap(),
    ]);
    assert_eq!(replay.status.code(), Some(0), "{replay:?}");
    assert_eq!(read(&out2.join("history.csv")), history);
}

#[test]
fn network_requires_displacement_and_valid_model() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model.json");
    std::fs::write(&model, "{\"format\":\"something-else\"}").unwrap();
    let bad = beamnet(&["network", model.to_str().unwrap(), "--displacement", "1"]);
    assert_eq!(bad.status.code(), Some(2));

    let missing = beamnet(&["network", model.to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn compare_writes_grid_and_succeeds_despite_cell_failures() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("grid");
    let run = beamnet(&[
        "compare",
        "--scenario",
        "cantilever",
        "--gf",
        "0.1",
        "--schemes",
        "monolithic,hybrid:0.01",
        "--steps",
        "10,40",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(0), "{run:?}");
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(stdout.contains("hybrid(0.01)"));
    assert!(stdout.contains("steps=40"));

    let csv = read(&out.join("compare.csv"));
    assert!(csv.starts_with("scheme,steps,"));
    assert_eq!(csv.lines().count(), 5);
    // the coarse ramp defeats the consistent tangent but not the regularized one
    assert!(csv.contains("monolithic,10,false"));
    assert!(csv.contains("hybrid(0.01),10,true"));
}

#[test]
fn config_file_sets_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    std::fs::write(&config, "scheme = \"staggered\"\nsteps = 6\ndisplacement = 0.12\n")
        .unwrap();
    let out = dir.path().join("run");
    let run = beamnet(&[
        "cantilever",
        "--gf",
        "0.1",
        "--elements",
        "2",
        "--steps",
        "8",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(0), "{run:?}");
    let summary = read(&out.join("gf0.1-n2/summary.json"));
    let summary = report::RunSummary::from_json(&summary).unwrap();
    assert_eq!(summary.config.n_steps, 8, "flag beats file");
    assert_eq!(summary.config.scheme, beamnet::Scheme::Staggered);
    assert_eq!(summary.config.total_displacement, 0.12);

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "stepz = 6\n").unwrap();
    let run = beamnet(&["cantilever", "--config", bad.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(2));
}
