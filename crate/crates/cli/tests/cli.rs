use std::path::PathBuf;

use assert_cmd::Command;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn dfk() -> Command {
    let mut c = Command::cargo_bin("dfk").unwrap();
    c.arg("--no-timestamp");
    c
}

fn stdout(args: &[&str], code: i32) -> String {
    let out = dfk()
        .args(args)
        .assert()
        .code(code)
        .get_output()
        .stdout
        .clone();
    String::from_utf8(out).unwrap()
}

fn path(name: &str) -> String {
    fixture(name).display().to_string()
}

#[test]
fn check_reports_frame_flags() {
    let out = stdout(&["check", &path("f_unit.dfk")], 0);
    assert!(
        out.contains("RESULT: valid; strong algebraic conservative; truth: t\n"),
        "{out}"
    );
}

#[test]
fn states_lists_two_for_the_chain() {
    let out = stdout(&["states", &path("f_chain2.dfk")], 0);
    assert!(out.contains("STATES: 2\n"));
    assert_eq!(out.matches("STATE: ").count(), 2);
    assert_eq!(out.matches("EDGE: ").count(), 1);
}

#[test]
fn roundtrips_pass_on_the_fixtures() {
    let out = stdout(&["roundtrip", &path("u_unit.dfk"), "--via", "frames"], 0);
    assert!(out.contains("Υ∘Γ = Id, Γ∘Υ = Id"), "{out}");
    stdout(
        &["roundtrip", &path("f_diamond.dfk"), "--via", "domains"],
        0,
    );
    stdout(
        &["roundtrip", &path("p_diamond.dfk"), "--via", "domains"],
        0,
    );
    stdout(
        &["roundtrip", &path("f_chain2.dfk"), "--via", "cfspaces"],
        0,
    );
}

#[test]
fn invalid_frame_exits_one_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.dfk");
    // no entailments: the interpolation axiom has nothing to offer
    std::fs::write(
        &file,
        "# dfk-format v1\n\nframe bad\ntokens t\ncon t : { } { t }\nent t :\nend\n",
    )
    .unwrap();
    let out = stdout(&["check", file.to_str().unwrap()], 1);
    assert!(out.contains("RESULT: invalid\n"));
    assert!(out.contains("VIOLATION: "));
}

#[test]
fn usage_and_io_errors_exit_two() {
    dfk().args(["check", "/nonexistent.dfk"]).assert().code(2);
    dfk().args(["frobnicate"]).assert().code(2);
    dfk().args(["verify", "--suite", "nope"]).assert().code(2);
    dfk()
        .args(["apply", "F", &path("f_unit.dfk"), "-o", "/tmp/never"])
        .assert()
        .code(2);
}

#[test]
fn apply_composes_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let e = dir.path().join("e.dfk");
    let ce = dir.path().join("ce.dfk");
    stdout(
        &["apply", "E", &path("f_unit.dfk"), "-o", e.to_str().unwrap()],
        0,
    );
    let text = std::fs::read_to_string(&e).unwrap();
    assert!(text.contains("universe (|t) (t|t)\n"));
    stdout(
        &[
            "apply",
            "C",
            e.to_str().unwrap(),
            "-o",
            ce.to_str().unwrap(),
        ],
        0,
    );
    let out = stdout(&["check", ce.to_str().unwrap()], 0);
    assert!(out.contains("RESULT: valid"));
}

#[test]
fn reports_are_reproducible() {
    let args = [
        "verify",
        "--suite",
        "rough",
        "--bounds",
        "rough=3,elements=2,family=2",
    ];
    let a = stdout(&args, 0);
    let b = stdout(&args, 0);
    assert_eq!(a, b);
    assert!(a.ends_with("RESULT: PASS\n"));
    assert!(!a.contains("ELAPSED"));
}

#[test]
fn timestamp_is_on_by_default() {
    let out = Command::cargo_bin("dfk")
        .unwrap()
        .args(["check", &path("u_unit.dfk")])
        .assert()
        .code(0)
        .get_output()
        .stdout
        .clone();
    assert!(String::from_utf8(out).unwrap().starts_with("TIMESTAMP: "));
}

#[test]
fn json_mirrors_text() {
    let out = stdout(&["--json", "check", &path("u_empty_f.dfk")], 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["entries"][1]["value"], "valid; (M)");
}

#[test]
fn seeded_generation_is_reproducible() {
    let args = ["generate", "--kind", "frame", "--seed", "3", "--count", "4"];
    let a = stdout(&args, 0);
    assert_eq!(a, stdout(&args, 0));
    assert_eq!(a.matches("\nframe ").count(), 4);
    let all = stdout(
        &["generate", "--kind", "poset", "--bounds", "elements=3"],
        0,
    );
    assert_eq!(all.matches("\nposet ").count(), 1 + 3 + 19);
    dfk()
        .args(["generate", "--kind", "poset", "--bounds", "elements=9"])
        .assert()
        .code(2);
}
