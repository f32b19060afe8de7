use std::io::Write;
use std::process::{Command, Output};

fn motbiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_motbiv"))
        .args(args)
        .output()
        .expect("run motbiv")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

#[test]
fn class_prints_the_total_class() {
    let o = motbiv(&["class", "P(2)", "chern"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1 + 3*h + 3*h^2");
    let o = motbiv(&["class", "P(1)", "ty", "--y", "-1"]);
    assert_eq!(stdout(&o), "1 + 2*h");
}

#[test]
fn genus_of_a_blowup() {
    let o = motbiv(&["genus", "blowup(P(2),P(0))"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1 - 2*y + y^2");
}

#[test]
fn json_output_parses() {
    let o = motbiv(&["--json", "genus", "P(3)"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.is_object(), "{v}");
}

#[test]
fn bad_input_exits_with_usage_code() {
    assert_eq!(motbiv(&["genus", "prod(P(1)"]).status.code(), Some(2));
    assert_eq!(
        motbiv(&["class", "P(1)", "nonsense"]).status.code(),
        Some(2)
    );
    assert_eq!(
        motbiv(&["scenario", "/nonexistent/scenario.json"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn blowup_check_passes() {
    let o = motbiv(&["check", "blowup", "--n", "2", "--m", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("PASS"));
}

#[test]
fn scenario_files_run() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/p2-blowup.json");
    let o = motbiv(&["scenario", path]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, r#"{{"version": 1, "spaces": []}}"#).unwrap();
    let o = motbiv(&["scenario", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(
        f,
        r#"{{"version": 1, "spaces": ["P(1)"], "checks": ["nope"]}}"#
    )
    .unwrap();
    assert_eq!(
        motbiv(&["scenario", f.path().to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}
