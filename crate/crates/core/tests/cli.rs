use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pochette"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/diagrams").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn word_prints_word_and_action() {
    let o = run(&["word", "--slope", "3/2", "--eps", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("E2.E1^2"));
    assert!(text.contains("m -> 3m + 2l"));

    let o = run(&["word", "--slope", "2/3", "--eps", "1", "--lift", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["image_of_m"], serde_json::json!([2, 3]));
    assert_eq!(v["lift"], "l m l^2 m");
    assert_eq!(v["h2_magnitudes"][0][0], 2);
    assert_eq!(v["h2_magnitudes"][1][0], 3);
}

#[test]
fn homology_of_shipped_diagrams() {
    let o = run(&["homology", data("s4.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("homology 4-sphere: true"));
    let o = run(&["homology", data("s1xs3.json").to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["profile_text"], "(Z, Z, 0, Z, Z)");
    assert_eq!(v["homology_sphere"], false);
}

#[test]
fn surgery_certificate_on_s4() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let o = run(&[
        "surgery",
        data("s4.json").to_str().unwrap(),
        "--pochette",
        "c1,u1",
        "--slope",
        "5/2",
        "--eps",
        "1",
        "--out",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("H1 = Z_5"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(v["profile"]["h"][1]["torsion"], serde_json::json!([5]));
    assert_eq!(v["classification"]["TorsionH1"], 5);

    // byte-stable output
    let again = run(&["surgery", data("s4.json").to_str().unwrap(), "--pochette", "c1,u1", "--slope", "5/2", "--eps", "1", "--json"]);
    assert_eq!(stdout(&again), std::fs::read_to_string(&cert).unwrap());
}

#[test]
fn surgery_diagram_mode() {
    let path = data("s4_meridians.json");
    let o = run(&["surgery", path.to_str().unwrap(), "--pochette", "c1,u1", "--slope", "-7/3", "--eps", "0", "--mode", "diagram", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["slope"], "-7/3");
    assert_eq!(v["diagram"]["agrees"], true);
    assert_eq!(v["diagram"]["profile_text"], "(Z, Z_7, Z_7, 0, Z)");

    let o = run(&["surgery", data("s4.json").to_str().unwrap(), "--pochette", "c1,u1", "--slope", "5/2", "--mode", "diagram"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("meridian"));
}

#[test]
fn surgery_flags() {
    let s4 = data("s4.json");
    let o = run(&["surgery", s4.to_str().unwrap(), "--pochette", "c1,u1", "--slope", "1/4", "--simply-connected", "true", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["homeomorphism"], "Homeomorphic");
    assert_eq!(v["classification"], "HomologySphere");
    let o = run(&["surgery", s4.to_str().unwrap(), "--pochette", "c1,u1", "--slope", "1/4", "--no-l-null", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["classification"], "HypothesesNotMet");
    let o = run(&["surgery", s4.to_str().unwrap(), "--pochette", "c1,k1", "--slope", "1/4"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["surgery", s4.to_str().unwrap(), "--pochette", "c1", "--slope", "1/4"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["surgery", data("s1xs3.json").to_str().unwrap(), "--pochette", "c1,u1", "--slope", "1/4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gluck_is_reported() {
    let o = run(&["surgery", data("cp2.json").to_str().unwrap(), "--pochette", "c1,u1", "--slope", "inf", "--eps", "1", "--mode", "diagram"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("Gluck"));
    assert!(text.contains("result: (Z, 0, Z, 0, Z)"));
}

#[test]
fn verify_sweeps() {
    let o = run(&["verify", "--range", "30"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(": 0 failures"));
    let o = run(&["verify", "--range", "4", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["failures"], serde_json::json!([]));
}

#[test]
fn family_instantiation() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig2.json");
    let o = run(&["family", "fig2", "--s", "2", "--t", "1", "--m", "1,-1", "--n", "0,0,0", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let h = run(&["homology", out.to_str().unwrap()]);
    assert!(stdout(&h).contains("homology 4-sphere: true"));

    let o = run(&["family", "fig2", "--s", "2", "--t", "1", "--m", "1,1", "--n", "0,0,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sum to 0"));

    let o = run(&["family", "fig1", "--k", "2", "--n", "-1,0,1", "--meridians"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["two_handles"][0]["meridian"], true);

    assert_eq!(run(&["family", "fig7"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["word", "--slope", "2/4"]).status.code(), Some(2));
    assert_eq!(run(&["word", "--slope", "1/2", "--eps", "3"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--range", "x"]).status.code(), Some(2));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}
