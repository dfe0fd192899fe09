use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn raw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilduality"))
        .args(args)
        .output()
        .unwrap()
}

/// Runs against the shipped F4 bundle.
fn run(args: &[&str]) -> Output {
    let f4 = data("f4.json");
    raw(&[&["--bundle", f4.to_str().unwrap()], args].concat())
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ids(text: &str) -> Vec<String> {
    text.lines()
        .filter_map(|l| l.split_whitespace().next())
        .filter(|w| w.starts_with('X'))
        .map(str::to_string)
        .collect()
}

#[test]
fn dual_of_zero_is_regular() {
    let o = run(&["dual", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "F4");
}

#[test]
fn packet_lists_arthur_members() {
    let o = run(&["packet", "F4(a3)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(ids(&stdout(&o)), ["X5", "X13", "X17", "X19", "X20"]);
}

#[test]
fn weak_packet_accepts_unicode_labels() {
    let a = run(&["weak-packet", "F4(a₃)"]);
    let b = run(&["weak-packet", "F4(a3)"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(
        ids(&stdout(&a)),
        ["X5", "X7", "X8", "X9", "X11", "X13", "X15", "X17", "X18", "X19", "X20"]
    );
    let tilde = run(&["achar-dual", "Ã1", "(12)"]);
    assert_eq!(stdout(&tilde).trim(), stdout(&run(&["achar-dual", "~A1", "(12)"])).trim());
}

#[test]
fn json_output_parses() {
    for args in [
        vec!["--format", "json", "packet", "F4(a3)"],
        vec!["--format", "json", "cuwf", "X7"],
        vec!["--format", "json", "verify"],
        vec!["--format", "json", "special-piece", "B2"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        serde_json::from_str::<serde_json::Value>(&stdout(&o)).unwrap();
    }
}

#[test]
fn output_is_deterministic() {
    let a = run(&["list"]);
    let b = run(&["list"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["verify"]).status.code(), Some(0));
    assert_eq!(run(&["dual", "E8"]).status.code(), Some(1));
    assert_eq!(run(&["cuwf", "X99"]).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    let missing = data("missing.json");
    assert_eq!(raw(&["--bundle", missing.to_str().unwrap(), "list"]).status.code(), Some(2));
    assert_eq!(raw(&["list"]).status.code(), Some(2));
}

#[test]
fn verify_rejects_broken_bundle() {
    let text = std::fs::read_to_string(data("f4.json")).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    doc["closure"]
        .as_array_mut()
        .unwrap()
        .push(serde_json::json!(["F4", "A1"]));
    let dir = std::env::temp_dir().join(format!("nilduality-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let o = raw(&["--bundle", path.to_str().unwrap(), "verify"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("FAIL closure.antisymmetry"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn dual_bundle_flag() {
    let b2 = data("b2.json");
    let c2 = data("c2.json");
    let base = ["--bundle", b2.to_str().unwrap(), "--dual-bundle", c2.to_str().unwrap()];
    let o = raw(&[&base[..], &["achar-dual", "(2,2,1)", "1"]].concat());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim(), "((2,2),(12))");
    let without = raw(&["--bundle", b2.to_str().unwrap(), "list"]);
    assert_eq!(without.status.code(), Some(2));
}
