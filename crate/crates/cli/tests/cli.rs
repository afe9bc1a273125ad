use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tw2dim"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn generate(family: &str, n: &str, seed: &str) -> String {
    let o = run(&["gen", "--family", family, "--n", n, "--seed", seed], "");
    assert!(o.status.success(), "{}", stderr(&o));
    stdout(&o)
}

#[test]
fn standard_example_has_dimension_three() {
    let p = generate("standard_example", "3", "0");
    let o = run(&["dim"], &p);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "3");
}

#[test]
fn realize_bundle_pipes_into_verify() {
    for (family, n) in [("chain", "5"), ("random_tw2", "40"), ("antichain", "4")] {
        let p = generate(family, n, "7");
        let bundle = run(&["realize", "--bundle"], &p);
        assert!(bundle.status.success(), "{}", stderr(&bundle));
        let v = run(&["verify"], &stdout(&bundle));
        assert_eq!(v.status.code(), Some(0), "{family}: {}", stderr(&v));
    }
}

#[test]
fn verify_reads_a_realizer_file() {
    let p = generate("random_tw2", "25", "3");
    let r = run(&["realize"], &p);
    assert!(r.status.success());
    let dir = std::env::temp_dir().join(format!("tw2dim-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("realizer.json");
    std::fs::write(&file, stdout(&r)).unwrap();
    let v = run(&["verify", "--realizer", file.to_str().unwrap()], &p);
    assert_eq!(v.status.code(), Some(0), "{}", stderr(&v));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn a_non_realizer_exits_with_one() {
    // One extension cannot realize a two-element antichain.
    let bundle = "elements: x y\n[{\"signature\": null, \"extension\": [\"x\", \"y\"]}]\n";
    let v = run(&["verify"], bundle);
    assert_eq!(v.status.code(), Some(1));
}

#[test]
fn kelly_is_rejected_with_two() {
    let p = generate("kelly", "3", "0");
    let o = run(&["realize"], &p);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("treewidth"));
}

#[test]
fn malformed_input_reports_the_line() {
    let o = run(&["dim"], "elements: a b\na < b\nb < z\n");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn batch_mode_summarizes() {
    let o = run(&["dim", "--count", "5", "--n", "6", "--seed", "1"], "");
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("instances: 5"), "{}", stdout(&o));
    assert!(stdout(&o).contains("failed: 0"));
    let o = run(
        &["check-claims", "--count", "20", "--n", "15", "--jobs", "2"],
        "",
    );
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn decompose_emits_dot_and_json() {
    let p = "elements: a b c\na < b\n";
    let j = run(&["decompose"], p);
    assert!(j.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&j)).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 9);
    let d = run(&["decompose", "--dot"], p);
    assert!(stdout(&d).starts_with("graph"));
}
