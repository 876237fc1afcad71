use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn focus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_focus"))
        .args(args)
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = focus(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn osd_design_at_one_kilohertz() {
    let v = json(&["design", "osd", "--f", "1000", "--a", "0.09", "--verify"]);
    let span = v["angles_deg"]["span"][0].as_f64().unwrap();
    assert!((span - 56.9).abs() < 0.05, "{span}");
    assert_eq!(v["verification"]["state"], "SuperIdeal");
    assert!((v["verification"]["condition_number"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn osd_below_low_frequency_fails_check() {
    let out = focus(&["design", "osd", "--mu", "0.41"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn ula_design_angles() {
    let v = json(&[
        "design",
        "ula",
        "--L",
        "20",
        "--dx",
        "0.012",
        "--f",
        "4899",
        "--offsets=-2,0,2",
    ]);
    let angles: Vec<f64> = v["angles_deg"]["control_angles"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert_eq!(angles.len(), 3);
    assert!(
        (angles[2] - 35.694).abs() < 1e-3
            && (angles[0] + 35.694).abs() < 1e-3
            && angles[1].abs() < 1e-12
    );
}

#[test]
fn ula_grating_offsets_exit_one() {
    let out = focus(&[
        "design",
        "ula",
        "--L",
        "20",
        "--dx",
        "0.012",
        "--f",
        "4899",
        "--offsets",
        "0,20",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn upda_two_elements_has_low_limit_of_eight_a() {
    let v = json(&[
        "design",
        "upda",
        "--L",
        "2",
        "--a",
        "0.09",
        "--gamma-max",
        "90",
    ]);
    assert!((v["design"]["wavelength_low"].as_f64().unwrap() - 0.72).abs() < 1e-15);
}

#[test]
fn configuration_errors_exit_two() {
    assert_eq!(
        focus(&["analyze", "--preset", "nope", "--freq", "100"])
            .status
            .code(),
        Some(2)
    );
    let missing = scratch("missing.json");
    assert_eq!(
        focus(&[
            "analyze",
            "--geometry",
            missing.to_str().unwrap(),
            "--freq",
            "100"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(focus(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn analyze_preset_reports_super_ideal() {
    let v = json(&["analyze", "--preset", "fig5d"]);
    let r = &v["results"][0];
    assert_eq!(r["state"], "SuperIdeal");
    assert!((r["condition_number"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn analyze_plane_wave_below_limit_is_general() {
    let v = json(&["analyze", "--preset", "fig6", "--model", "plane-wave"]);
    let r = &v["results"][0];
    assert_eq!(r["state"], "General");
    assert!(r["normalized_offdiag"].as_f64().unwrap() > 0.1);
}

#[test]
fn duplicated_control_point_is_singular() {
    let path = scratch("duplicate.json");
    std::fs::write(
        &path,
        r#"{"type": "arbitrary", "sources": [[1, 0.5, 0], [1, -0.5, 0], [-1, 0, 0]],
            "points": [[0, 0.09, 0], [0, 0.09, 0]]}"#,
    )
    .unwrap();
    let v = json(&[
        "analyze",
        "--geometry",
        path.to_str().unwrap(),
        "--freq",
        "500",
    ]);
    let r = &v["results"][0];
    assert_eq!(r["state"], "Singular");
    assert!(!r["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn mu_sweep_minimum_condition_number_at_quarter_pi() {
    let v = json(&["analyze", "--preset", "fig5d", "--mu-sweep", "0.5:1.1:601"]);
    let (mu, kappa) = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            (
                r["mu"].as_f64().unwrap(),
                r["condition_number"].as_f64().unwrap(),
            )
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    assert!((mu - std::f64::consts::FRAC_PI_4).abs() < 2e-3, "{mu}");
    // grid step 1e-3 in μ keeps the sampled minimum slightly above 1
    assert!(kappa - 1.0 < 1e-2, "{kappa}");
}

#[test]
fn field_csv_is_byte_deterministic() {
    let args = ["field", "--preset", "fig5d", "--resolution", "31"];
    let a = focus(&args);
    let b = focus(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("x,y,z,gain_linear,gain_db"));
    assert_eq!(text.lines().count(), 1 + 31 * 31);
}

#[test]
fn field_json_to_file() {
    let path = scratch("field.json");
    let out = focus(&[
        "field",
        "--preset",
        "fig11",
        "--arc",
        "100",
        "--angles=-90:90:181",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["grid"]["kind"], "arc");
    assert_eq!(v["samples"].as_array().unwrap().len(), 181);
}

#[test]
fn verify_quick_passes_and_perturbed_fails() {
    let ok = focus(&["verify", "--quick"]);
    assert!(ok.status.success());
    let text = String::from_utf8(ok.stdout).unwrap();
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 10);
    let bad = focus(&["verify", "--quick", "--perturb", "1e-3"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8(bad.stdout).unwrap().contains("FAIL"));
}

#[test]
fn presets_lists_all_names() {
    let out = focus(&["presets"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["fig5a", "fig7b", "fig10a", "fig12c"] {
        assert!(text.contains(name));
    }
}
