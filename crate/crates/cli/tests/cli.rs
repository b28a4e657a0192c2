use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> String {
    root().join("fixtures").join(format!("{name}.json")).to_string_lossy().into_owned()
}

fn mbflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mbflow")).args(args).env("MBFLOW_COLOR", "0").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn shipped_fixtures_match_their_emitted_form() {
    let list = stdout(&mbflow(&["fixtures", "list"]));
    let names: Vec<&str> = list.lines().map(|l| l.split_whitespace().next().unwrap()).collect();
    assert!(names.contains(&"broken_mc") && names.contains(&"torus_flat"));
    for name in names {
        let emitted = stdout(&mbflow(&["fixtures", "emit", name]));
        let shipped = std::fs::read_to_string(fixture(name)).unwrap();
        assert_eq!(emitted, shipped, "{name}");
    }
}

#[test]
fn shipped_oracles_hold() {
    for entry in std::fs::read_dir(root().join("fixtures")).unwrap() {
        let path = entry.unwrap().path();
        let o = mbflow(&["validate", path.to_str().unwrap()]);
        if path.ends_with("broken_mc.json") {
            assert_eq!(o.status.code(), Some(1));
        } else {
            assert!(o.status.success(), "{}: {}", path.display(), String::from_utf8_lossy(&o.stderr));
            assert!(stdout(&o).contains("oracle: matches"), "{}", path.display());
        }
    }
}

#[test]
fn torus_homology_table() {
    let o = mbflow(&["homology", &fixture("torus_flat")]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "ring Z\ndegree   rank  torsion\n     0      1  -\n     1      2  -\n     2      1  -\n");
}

#[test]
fn ring_override_and_poincare() {
    let o = mbflow(&["homology", &fixture("rp2"), "--ring", "Fp:2"]);
    assert!(stdout(&o).contains("     1      1  -"));
    assert!(stdout(&mbflow(&["homology", &fixture("rp2")])).contains("Z/2"));
    assert_eq!(stdout(&mbflow(&["poincare", &fixture("torus_flat")])), "1 + 2t + t^2\n");
    assert_eq!(mbflow(&["homology", &fixture("rp2"), "--ring", "Fp:6"]).status.code(), Some(3));
}

#[test]
fn sphere_inequality_has_witness_t() {
    let o = mbflow(&["check-ineq", &fixture("sphere_z2")]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("holds: yes") && out.contains("witness: t\n"), "{out}");
}

#[test]
fn equivariant_cutoff_is_checked() {
    let o = mbflow(&["check-ineq", &fixture("s2_two_point"), "--equivariant", "--cutoff", "4", "--levels", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("lhs: 1 + 2t^2 + 2t^4"));
    let o = mbflow(&["check-ineq", &fixture("s2_two_point"), "--equivariant", "--cutoff", "4", "--levels", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn broken_fixture_is_located() {
    let o = mbflow(&["validate", &fixture("broken_mc")]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("generator 0 of x in degree 0"), "{err}");
}

#[test]
fn schema_and_parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let o = mbflow(&["homology", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
    std::fs::write(&bad, r#"{"format_version": "1", "ring": "Z", "objects": [{"name": "x"}]}"#).unwrap();
    let o = mbflow(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("$.objects[0]"));
    std::fs::write(&bad, r#"{"format_version": "1", "ring": "Q", "objects": []}"#).unwrap();
    assert_eq!(mbflow(&["validate", bad.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn spectral_sequence_pages() {
    let o = mbflow(&["ss", &fixture("torus_flat"), "--field", "2", "--max-page", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("E1:") && out.contains("collapses at E1"), "{out}");
    assert_eq!(mbflow(&["ss", &fixture("torus_flat"), "--field", "4"]).status.code(), Some(3));
}

#[test]
fn cone_of_continuation() {
    let dir = tempfile::tempdir().unwrap();
    let b = dir.path().join("b.json");
    let text = r#"{"format_version": "1", "blocks": [
        {"from": "a", "to": "c", "blocks": [{"degree": 0, "matrix": {"rows": 1, "cols": 1, "entries": [[1]]}}]},
        {"from": "b", "to": "p", "blocks": [{"degree": 0, "matrix": {"rows": 1, "cols": 1, "entries": [[1]]}}]},
        {"from": "b", "to": "q", "blocks": [{"degree": 0, "matrix": {"rows": 1, "cols": 1, "entries": [[1]]}}]}]}"#;
    std::fs::write(&b, text).unwrap();
    let o = mbflow(&["cone", &fixture("s2_two_point"), &fixture("sphere_z2"), b.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).ends_with("quasi-isomorphism: yes\n"));
}

#[test]
fn dual_of_projective_plane() {
    let out = stdout(&mbflow(&["dual", &fixture("rp2"), "--ambient-dim", "2"]));
    assert!(out.contains("    -2      0  Z/2"), "{out}");
}

#[test]
fn output_is_deterministic_and_plain() {
    for args in [vec!["ss", &*fixture("sphere_z2"), "--field", "3"], vec!["check-ineq", &*fixture("rp2")]] {
        let (a, b) = (mbflow(&args), mbflow(&args));
        assert_eq!(a.stdout, b.stdout);
        assert!(!a.stdout.contains(&0x1b));
    }
    let colored = Command::new(env!("CARGO_BIN_EXE_mbflow"))
        .args(["check-ineq", &fixture("rp2")])
        .env("MBFLOW_COLOR", "1")
        .output()
        .unwrap();
    assert!(colored.stdout.contains(&0x1b));
}
