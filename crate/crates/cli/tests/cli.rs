use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn pmin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pmin"))
        .args(args)
        .env("PMIN_THREADS", "2")
        .output()
        .expect("failed to launch pmin")
}

fn profiles_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../profiles")
}

fn profile(name: &str) -> String {
    profiles_dir().join(format!("{name}.json")).to_string_lossy().into_owned()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is not JSON")
}

#[test]
fn mesh_of_fifty_by_fifty_has_expected_counts() {
    let out = pmin(&["mesh", &profile("ex21"), "--ns", "50", "--nt", "50"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let vertices = text.lines().filter(|l| l.starts_with("v ")).count();
    let faces = text.lines().filter(|l| l.starts_with("f ")).count();
    assert_eq!(vertices, 2500);
    assert_eq!(faces, 4802);
}

#[test]
fn mesh_csv_has_header_and_rows() {
    let out = pmin(&["mesh", &profile("plane"), "--ns", "3", "--nt", "4", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 12);
}

#[test]
fn eval_json_lists_every_grid_node() {
    let out = pmin(&["eval", &profile("ex21"), "--ns", "3", "--nt", "2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["points"].as_array().unwrap().len(), 6);
    assert_eq!(v["columns"][4], "z");
}

#[test]
fn non_helicoid_profile_classifies_as_such() {
    let out = pmin(&["classify", &profile("ex42")]);
    assert!(out.status.success());
    assert_eq!(json(&out)["kind"], "NonHelicoid");
}

#[test]
fn tilted_helicoid_reports_its_axis() {
    let out = pmin(&["classify", &profile("ex21")]);
    let v = json(&out);
    assert_eq!(v["kind"], "HelicoidTilted");
    assert!((v["x0"].as_f64().unwrap() + 1.0).abs() < 1e-9);
    assert!(v["y0"].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn analyze_reports_singular_points_on_tilted_example() {
    let out = pmin(&["analyze", &profile("ex21"), "--ns", "41", "--nt", "41"]);
    assert!(out.status.success());
    let v = json(&out);
    assert!(!v["singular_points"].as_array().unwrap().is_empty());
    assert!(v["injectivity_violations"].as_array().unwrap().is_empty());
}

#[test]
fn non_positive_tolerance_is_an_input_error() {
    let out = pmin(&["analyze", &profile("ex21"), "--tol-parallel", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--tol-parallel"));
}

#[test]
fn malformed_profile_names_file_and_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\n  \"theta\": \"t\",\n  \"alpha\": 0,\n").unwrap();
    let out = pmin(&["classify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.json"), "{err}");
    assert!(err.contains("line"), "{err}");
}

#[test]
fn missing_profile_is_an_input_error() {
    let out = pmin(&["eval", "/nonexistent/profile.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn golden_suite_passes_on_bundled_profiles() {
    let out = pmin(&["golden", "--dir", profiles_dir().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains("FAIL"));
}

#[test]
fn golden_suite_fails_on_corrupted_profile() {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(profiles_dir()).unwrap() {
        let entry = entry.unwrap();
        fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
    }
    let ex21 = dir.path().join("ex21.json");
    let text = fs::read_to_string(&ex21).unwrap();
    fs::write(&ex21, text.replace("atan(t) + pi/2", "atan(t) + pi/2 + 0.001")).unwrap();

    let out = pmin(&["golden", "--dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ex21"));
}

#[test]
fn golden_missing_directory_is_an_input_error() {
    let out = pmin(&["golden", "--dir", "/nonexistent/profiles"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn golden_writes_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("golden.json");
    let out = pmin(&["golden", "--dir", profiles_dir().to_str().unwrap(), "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    assert!(v["assertions"].as_array().unwrap().len() > 30);
}

#[test]
fn verify_passes_on_tilted_example() {
    let out = pmin(&["verify", &profile("ex21"), "--ns", "21", "--nt", "21"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert!(v["legendrian_residual"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["graph_residual"]["second_order"], true);
}

#[test]
fn verify_csv_exports_residual_field() {
    let out = pmin(&["verify", &profile("ex21"), "--ns", "5", "--nt", "5", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("x,y,residual"));
    assert!(text.lines().count() > 100);
}

#[test]
fn obj_format_is_rejected_for_reports() {
    let out = pmin(&["classify", &profile("ex21"), "--format", "obj"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["analyze", "ex42"],
        vec!["classify", "ex31"],
        vec!["eval", "ex41a"],
    ] {
        let path = profile(args[1]);
        let run = || pmin(&[args[0], &path, "--ns", "31", "--nt", "31"]).stdout;
        assert_eq!(run(), run(), "{} {}", args[0], args[1]);
    }
}
