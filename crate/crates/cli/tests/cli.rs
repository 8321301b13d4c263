use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn morselab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_morselab")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn fuss_catalan_closed_form() {
    let out = morselab(&["bounds", "fuss-catalan", "-d", "3", "-N", "2", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "3\n");
    let out = morselab(&["bounds", "fuss-catalan", "-d", "2", "-N", "3"]);
    assert_eq!(json(&out)["value"], "5");
}

#[test]
fn endo_certificate_is_written_and_revalidated() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("endo.json");
    let input = data("boundary-of-4-simplex.facets");
    let out = morselab(&["endo", path(&input), "--seed", "1", "--cert", path(&cert)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["status"], "yes");
    assert!(cert.exists());
    let check = morselab(&["validate-cert", path(&input), path(&cert)]);
    assert_eq!(check.status.code(), Some(0));
    assert_eq!(json(&check)["valid"], true);
    let other = morselab(&["validate-cert", path(&data("octahedron.facets")), path(&cert)]);
    assert_eq!(other.status.code(), Some(1));
}

#[test]
fn pile_has_collapse_depth_two() {
    let out = morselab(&["cdepth", path(&data("pile-3x3x3-minus-center.facets"))]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["value"], 2);
    assert_eq!(r["status"], "exact");
    assert_eq!(r["obstruction"]["kind"], "homology");
    let endo = morselab(&["endo", path(&data("pile-3x3x3-minus-center.facets"))]);
    assert_eq!(endo.status.code(), Some(1));
}

#[test]
fn reports_are_byte_identical_across_runs_and_thread_counts() {
    let input = data("stacked-3-sphere.facets");
    let a = morselab(&["hierarchy", path(&input), "--seed", "7", "--budget", "50000"]);
    let b = morselab(&["hierarchy", path(&input), "--seed", "7", "--budget", "50000", "--jobs", "1"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn malformed_inputs_report_line_numbers() {
    let out = morselab(&["check", path(&data("truncated.lutz"))]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.facets");
    std::fs::write(&bad, "1 2 3\n2 3 3\n").unwrap();
    let out = morselab(&["check", path(&bad)]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(morselab(&["check", "no/such/file.facets"]).status.code(), Some(4));
    assert_eq!(morselab(&["no-such-command"]).status.code(), Some(3));
}

#[test]
fn tetrahedron_boundary_loads() {
    let out = morselab(&["check", path(&data("boundary-of-tetrahedron.facets"))]);
    let r = json(&out);
    assert_eq!(r["f_vector"][2], 4);
    assert_eq!(r["closed"], true);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn data_directory_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_morselab"))
        .args(["check", "octahedron.facets"])
        .env("MORSELAB_DATA", data(""))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn octahedron_lc_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let (cert, script, rebuilt) = (dir.path().join("polar.json"), dir.path().join("script.json"), dir.path().join("out.facets"));
    let input = data("octahedron.facets");
    let out = morselab(&["morse", "build-bc", path(&input), "--cert", path(&cert)]);
    assert_eq!(json(&out)["kind"], "polar");
    let out = morselab(&["lc", "disassemble", path(&input), path(&cert), "--out", path(&script)]);
    assert_eq!(json(&out)["phase_b"], 5);
    let out = morselab(&["lc", "assemble", path(&script), "--strict", "--complex-out", path(&rebuilt)]);
    assert_eq!(out.status.code(), Some(0));
    let a = json(&morselab(&["check", path(&input)]));
    let b = json(&morselab(&["check", path(&rebuilt)]));
    assert_eq!(a["canonical"], b["canonical"]);
}

#[test]
fn unknown_labels_in_scripts_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("script.json");
    std::fs::write(
        &script,
        r#"{"tree":{"facets":[["1","2","3"],["2","3","4"]]},"phase_a":[{"pair":[["1","2"],["9","4"]],"bijection":[["1","9"],["2","4"]]}],"phase_b":[]}"#,
    )
    .unwrap();
    let out = morselab(&["lc", "assemble", path(&script)]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn calculus_commands_check_their_identities() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("bc.json");
    let input = data("tetrahedron.facets");
    morselab(&["morse", "build-bc", path(&input), "--cert", path(&cert)]);
    for cmd in ["dualize", "cone", "subdivide"] {
        let out = morselab(&[cmd, path(&input), path(&cert)]);
        assert_eq!(out.status.code(), Some(0), "{cmd}");
        assert_eq!(json(&out)["identity_holds"], true, "{cmd}");
    }
    let out = morselab(&["patch", path(&input), path(&data("tetrahedron-2.facets")), "--sigma", "1,2,3"]);
    assert_eq!(json(&out)["c_int"], serde_json::json!([0, 0, 0, 1]));
    let out = morselab(&["morse", "verify", path(&input), path(&cert)]);
    assert_eq!(json(&out)["holds"], true);
}

#[test]
fn census_reports_progress_lines() {
    let out = morselab(&["census", "-d", "2", "-N", "4", "--predicate", "lc-closed", "--progress"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["types"], 1);
    let lines: Vec<Value> = String::from_utf8(out.stderr).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
}

#[test]
fn generators_write_facet_files() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("furch.facets");
    let out = morselab(&["generate", "furch", "--out", path(&f)]);
    let r = json(&out);
    assert_eq!(r["spanning_edge"].as_array().unwrap().len(), 2);
    let h = json(&morselab(&["homology", path(&f)]));
    assert_eq!(h["betti"], serde_json::json!([1, 0, 0, 0]));
    let tree = morselab(&["generate", "tree", "-d", "2", "-N", "5", "--seed", "4"]);
    assert_eq!(String::from_utf8(tree.stdout).unwrap().lines().count(), 5);
}
