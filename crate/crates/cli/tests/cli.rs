use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qg4::decompose::{DecompositionTree, TreeDoc};
use qg4::Quasigroup;

fn qg4(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qg4"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(test: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qg4-cli-{}-{test}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn generate(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let path_str = path.to_str().unwrap().to_string();
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", &path_str]);
    let out = qg4(&full);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    path_str
}

#[test]
fn atp_of_z4_has_order_32() {
    let dir = scratch("atp");
    let z4 = generate(&dir, "z4.qg4", &["z4"]);
    let out = qg4(&["atp", &z4, "--generators"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("order 32"));
    assert!(text.lines().count() > 1);
    let all = qg4(&["atp", &z4, "--elements"]);
    assert_eq!(stdout(&all).lines().count(), 33);
}

#[test]
fn verify_linear_meets_the_upper_bound() {
    let dir = scratch("verify");
    let l3 = generate(&dir, "l3.qg4", &["linear", "-n", "3"]);
    let out = qg4(&["verify", &l3]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("order 384"));
    assert!(stdout(&out).contains("met with equality: ok"));
}

#[test]
fn verify_checks_a_tree() {
    let dir = scratch("tree");
    let tree = dir.join("t.json");
    let tree_str = tree.to_str().unwrap();
    let q = generate(
        &dir,
        "t.qg4",
        &[
            "construction-t",
            "-n",
            "5",
            "--seed",
            "3",
            "--tree",
            tree_str,
        ],
    );
    let out = qg4(&["verify", &q, "--tree", tree_str]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("order 16"));

    let other = generate(&dir, "c.qg4", &["chain", "-n", "5"]);
    let mismatch = qg4(&["verify", &other, "--tree", tree_str]);
    assert_eq!(mismatch.status.code(), Some(4));
}

#[test]
fn enumerate_order_four_squares() {
    let out = qg4(&["enumerate", "-n", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "squares 576\norder 32: 432\norder 96: 144\n");
    assert_eq!(qg4(&["enumerate", "-n", "3"]).status.code(), Some(1));
}

#[test]
fn isotopic_prints_a_witness_or_none() {
    let dir = scratch("isotopic");
    let z4 = generate(&dir, "z4.qg4", &["z4"]);
    let xor = generate(&dir, "xor.qg4", &["xor2"]);
    assert_eq!(stdout(&qg4(&["isotopic", &z4, &xor])).trim(), "none");
    let witness = stdout(&qg4(&["isotopic", &z4, &z4]));
    let t = qg4::Isotopy::parse(witness.trim()).unwrap();
    let q = Quasigroup::parse_qg4(&fs::read(&z4).unwrap()).unwrap();
    assert_eq!(q.apply_isotopy(&t).unwrap(), q);
}

#[test]
fn analyze_json_round_trips() {
    let dir = scratch("analyze");
    let c5 = generate(&dir, "c5.qg4", &["chain", "-n", "5"]);
    let first = qg4(&["analyze", &c5, "--json"]);
    assert!(first.status.success());
    let again = qg4(&["analyze", &c5, "--json"]);
    assert_eq!(first.stdout, again.stdout);
    let v: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(v["arity"], 5);
    assert_eq!(v["atp_order"], 16);
    assert_eq!(v["linear"], false);
    assert_eq!(v["reducible"], true);
    assert_eq!(v["bound_checks"]["lower"], true);
    assert_eq!(v["stats"]["nodes"], 2);
    let doc: TreeDoc = serde_json::from_value(v["tree"].clone()).unwrap();
    let tree = DecompositionTree::from_doc(&doc).unwrap();
    let q = Quasigroup::parse_qg4(&fs::read(&c5).unwrap()).unwrap();
    assert_eq!(tree.eval().unwrap(), q);
    let text = stdout(&qg4(&["analyze", &c5]));
    assert!(text.contains("order 16"));
}

#[test]
fn decompose_reduced_reports_an_isotopy() {
    let dir = scratch("decompose");
    let c7 = generate(&dir, "c7.qg4", &["chain", "-n", "7"]);
    let out = qg4(&["decompose", &c7, "--reduced"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["stats"]["nodes"], 3);
    let iso = qg4::Isotopy::parse(v["isotopy"].as_str().unwrap()).unwrap();
    let doc: TreeDoc = serde_json::from_value(v["tree"].clone()).unwrap();
    let q = Quasigroup::parse_qg4(&fs::read(&c7).unwrap()).unwrap();
    let reduced = DecompositionTree::from_doc(&doc).unwrap().eval().unwrap();
    assert_eq!(q.apply_isotopy(&iso).unwrap(), reduced);
}

#[test]
fn exit_codes() {
    let dir = scratch("exit");
    let bad = dir.join("bad.qg4");
    fs::write(&bad, "qg4 2\n0123100223013210\n").unwrap();
    assert_eq!(qg4(&["atp", bad.to_str().unwrap()]).status.code(), Some(2));
    let short = dir.join("short.qg4");
    fs::write(&short, "qg4 2\n0123\n").unwrap();
    assert_eq!(
        qg4(&["atp", short.to_str().unwrap()]).status.code(),
        Some(1)
    );
    assert_eq!(qg4(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(qg4(&["gen", "z4", "-n", "3"]).status.code(), Some(1));

    let l7 = generate(&dir, "l7.qg4", &["linear", "-n", "7"]);
    assert_eq!(qg4(&["atp", &l7]).status.code(), Some(3));
    let raised = qg4(&["--max-arity", "7", "--threads", "2", "atp", &l7]);
    assert!(String::from_utf8_lossy(&raised.stderr).contains("warning"));
    assert_eq!(stdout(&raised).lines().next(), Some("order 98304"));
}

#[test]
fn gen_writes_to_stdout() {
    let out = qg4(&["gen", "h3"]);
    assert!(out.status.success());
    let q = Quasigroup::parse_qg4(&out.stdout).unwrap();
    assert_eq!(q.eval(&[1, 1, 1]).unwrap(), 3);
}
