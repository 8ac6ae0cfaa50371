//! Command-line behaviour: outputs, exit codes, determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ptz-inspect"));
    c.env_remove("PTZ_INSPECT_LOG");
    c
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/synthetic_cylinder").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn listing(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = std::fs::read_dir(dir)
        .map(|rd| rd.map(|e| e.unwrap().file_name().into_string().unwrap()).collect())
        .unwrap_or_default();
    v.sort();
    v
}

fn pipeline(out: &Path) -> Output {
    run(&[
        "pipeline",
        "--cloud",
        s(&fixture("cloud.xyz")),
        "--sections",
        s(&fixture("sections.toml")),
        "--quadrant",
        "3",
        "--pose",
        s(&fixture("pose.csv")),
        "--boundary",
        s(&fixture("boundary.toml")),
        "--out",
        s(out),
    ])
}

#[test]
fn pipeline_writes_every_artefact_and_is_repeatable() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let first = pipeline(a.path());
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    assert!(pipeline(b.path()).status.success());
    let files = listing(a.path());
    assert_eq!(
        files,
        ["grids.csv", "images.csv", "pantilt_fuselage.csv", "plan.csv", "plan.json", "report.json"]
    );
    for f in &files {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap(),
            "{f} differs between runs"
        );
    }
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(a.path().join("report.json")).unwrap()).unwrap();
    assert!(report["coverage"].as_f64().unwrap() >= 0.99);
    assert!(report["labelling_error_m"]["max"].as_f64().unwrap() <= 0.05);
}

#[test]
fn plan_then_simulate_from_saved_grids() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = run(&[
        "interpolate",
        "--cloud",
        s(&fixture("cloud.xyz")),
        "--sections",
        s(&fixture("sections.toml")),
        "--out",
        s(d),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let grids = d.join("grids.csv");
    let plan_dir = d.join("plan");
    let o = run(&[
        "plan",
        "--grids",
        s(&grids),
        "--sections",
        s(&fixture("sections.toml")),
        "--quadrant",
        "3",
        "--pose",
        s(&fixture("pose.csv")),
        "--mu",
        "0.3",
        "--out",
        s(&plan_dir),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let sim_dir = d.join("sim");
    let o = run(&[
        "simulate",
        "--grids",
        s(&grids),
        "--sections",
        s(&fixture("sections.toml")),
        "--quadrant",
        "3",
        "--true-pose",
        s(&fixture("pose.csv")),
        "--plan",
        s(&plan_dir.join("plan.json")),
        "--mu",
        "0.3",
        "--out",
        s(&sim_dir),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let plan: serde_json::Value = serde_json::from_slice(&std::fs::read(plan_dir.join("plan.json")).unwrap()).unwrap();
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(sim_dir.join("report.json")).unwrap()).unwrap();
    let shots: usize = plan["sections"].as_array().unwrap().iter().map(|s| s["points"].as_array().unwrap().len()).sum();
    assert_eq!(report["image_count"].as_u64().unwrap() as usize, shots);
}

#[test]
fn monte_carlo_is_seeded() {
    let run_mc = |seed: &str| {
        let dir = tempfile::tempdir().unwrap();
        let o = run(&[
            "simulate",
            "--cloud",
            s(&fixture("cloud.xyz")),
            "--sections",
            s(&fixture("sections.toml")),
            "--quadrant",
            "3",
            "--true-pose",
            s(&fixture("pose.csv")),
            "--draws",
            "5",
            "--seed",
            seed,
            "--out",
            s(dir.path()),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read(dir.path().join("propagation.json")).unwrap()
    };
    assert_eq!(run_mc("11"), run_mc("11"));
    assert_ne!(run_mc("11"), run_mc("12"));
}

#[test]
fn missing_input_fails_without_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = run(&[
        "pipeline",
        "--cloud",
        s(&dir.path().join("nope.xyz")),
        "--sections",
        s(&fixture("sections.toml")),
        "--quadrant",
        "3",
        "--pose",
        s(&fixture("pose.csv")),
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error[io-error]"));
    assert!(listing(&out).is_empty());
}

#[test]
fn malformed_sections_report_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("sections.toml");
    std::fs::write(&bad, "[[section]]\nname = \"f\"\nkind = \"hull\"\n").unwrap();
    let o = run(&[
        "interpolate",
        "--cloud",
        s(&fixture("cloud.xyz")),
        "--sections",
        s(&bad),
        "--out",
        s(&dir.path().join("out")),
    ]);
    assert_eq!(o.status.code(), Some(4));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("error[parse-error]") && err.contains(":3:"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["randomize", "--quadrant", "5", "--out", "x"]).status.code(), Some(2));
    assert_eq!(run(&["plan"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn invalid_overlap_is_an_argument_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "pipeline",
        "--cloud",
        s(&fixture("cloud.xyz")),
        "--sections",
        s(&fixture("sections.toml")),
        "--quadrant",
        "3",
        "--pose",
        s(&fixture("pose.csv")),
        "--mu",
        "1.0",
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(5));
    assert!(listing(dir.path()).is_empty());
}

#[test]
fn randomize_is_bit_identical_per_seed() {
    let make = |seed: &str| {
        let dir = tempfile::tempdir().unwrap();
        let o = run(&[
            "randomize", "--quadrant", "2", "--seed", seed, "--train", "20", "--val", "5", "--test", "5", "--out",
            s(dir.path()),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read(dir.path().join("manifest.json")).unwrap()
    };
    assert_eq!(make("3"), make("3"));
    assert_ne!(make("3"), make("4"));

    let dir = tempfile::tempdir().unwrap();
    let o = run(&["randomize", "--boundary", s(&fixture("boundary.toml")), "--out", s(dir.path())]);
    assert!(o.status.success());
    let m: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["samples"].as_array().unwrap().len(), 5000);
}

#[test]
fn evaluate_against_itself_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "evaluate",
        "--gt",
        s(&fixture("pose.csv")),
        "--pred",
        s(&fixture("pose.csv")),
        "--out",
        s(dir.path()),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stats: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("stats.json")).unwrap()).unwrap();
    assert_eq!(stats["median_position_m"].as_f64(), Some(0.0));
    assert!(stats["median_orientation_deg"].as_f64().unwrap() < 1e-6);
}

#[test]
fn loss_check_reports_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let batch = dir.path().join("batch.csv");
    std::fs::write(
        &batch,
        "true_x_m,true_y_m,true_z_m,true_yaw_deg,true_pitch_deg,true_roll_deg,pred_x_m,pred_y_m,pred_z_m,pred_qw,pred_qx,pred_qy,pred_qz\n\
         -10,10,6.75,0,18,0,-10.1,10.05,6.7,0.98,0.0,0.16,0.01\n\
         -10,8,6.75,5,19,0,-9.9,8.1,6.8,1.95,0.01,0.31,0.06\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = run(&[
        "loss-check",
        "--samples",
        s(&batch),
        "--h0",
        "2",
        "--r0",
        "2",
        "--icsc",
        "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("loss.json")).unwrap()).unwrap();
    let g = v["gradient_at_optimum"].as_array().unwrap();
    assert_eq!(g.len(), 3);
    assert!(g.iter().all(|x| x.as_f64().unwrap().abs() < 1e-5), "{g:?}");
}
