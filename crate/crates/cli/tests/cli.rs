use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn qmc(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qmc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn qmc");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json report")
}

const TRIANGLE: &str = "n 3\n0 1\n1 2\n0 2\n";

#[test]
fn exact_triangle() {
    let v = json(&qmc(&["exact"], TRIANGLE));
    assert_eq!(v["schema"], 1);
    assert_eq!(v["maxcut"], 2.0);
    assert!((v["qmc"].as_f64().unwrap() - 1.5).abs() < 1e-8);
    assert_eq!(v["upper"], 2.25);
    assert_eq!(v["lower"], 1.125);
    assert_eq!(v["exact"]["upper"], "9/4");
}

#[test]
fn estimate_single_edge_is_deterministic() {
    let args = ["estimate", "--eps", "0.1", "--delta", "0.1", "--seed", "7"];
    let a = qmc(&args, "n 2\n0 1\n");
    let b = qmc(&args, "n 2\n0 1\n");
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert!((v["value"].as_f64().unwrap() - 1.00625).abs() < 1e-12);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["mode"], "unweighted");
}

#[test]
fn estimate_reads_file_input() {
    let dir = std::env::temp_dir().join(format!("qmc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tri.txt");
    std::fs::write(&path, TRIANGLE).unwrap();
    let v = json(&qmc(
        &[
            "estimate",
            "--eps",
            "0.5",
            "--delta",
            "0.5",
            "--input",
            path.to_str().unwrap(),
        ],
        "",
    ));
    assert_eq!(v["m"], 3.0);
    assert_eq!(v["edges"], 3);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(qmc(&["exact"], "n 2\n0 2\n").status.code(), Some(1));
    assert_eq!(
        qmc(&["estimate", "--eps", "1.5"], TRIANGLE).status.code(),
        Some(1)
    );
    assert_eq!(qmc(&["frobnicate"], "").status.code(), Some(1));
    assert_eq!(
        qmc(&["exact", "--input", "/nonexistent/graph"], "")
            .status
            .code(),
        Some(1)
    );
    assert_eq!(qmc(&["--help"], "").status.code(), Some(0));
    let big: String = std::iter::once("n 16\n".to_string())
        .chain((1..16).map(|i| format!("0 {i}\n")))
        .collect();
    let out = qmc(&["exact", "--compute", "qmc"], &big);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("infeasible"));
}

#[test]
fn relax_reports_chain() {
    let v = json(&qmc(&["relax", "--seed", "3"], TRIANGLE));
    let k = v["sdp"].as_f64().unwrap();
    assert!((k - 1.5).abs() < 1e-6, "{k}");
    assert_eq!(v["cut_seeded"], true);
    assert!(v["maxcut_upper"].as_f64().unwrap() >= 2.0);
}

#[test]
fn wexact_star() {
    let v = json(&qmc(&["wexact"], "n 4\n0 1 3\n0 2 1/2\n0 3 2\n"));
    assert_eq!(v["exact"]["m"], "11/2");
    assert_eq!(v["exact"]["W"], "17/2");
}

#[test]
fn dihp_gen_formats() {
    let base = [
        "dihp-gen",
        "--n",
        "8",
        "--alpha-n",
        "2",
        "--t-players",
        "3",
        "--seed",
        "4",
    ];
    let v = json(&qmc(&base, ""));
    assert_eq!(v["truth"], "YES");
    assert_eq!(v["reduced_bipartite"], true);
    let edges = qmc(&[&base[..], &["--format", "edges"]].concat(), "");
    let text = String::from_utf8(edges.stdout).unwrap();
    assert!(text.starts_with("n 8\n"));
    let w = json(&qmc(&["wexact"], &text));
    assert_eq!(w["edges"], v["reduced_m"]);
    let inst = qmc(
        &[&base[..], &["--format", "instance", "--truth", "no"]].concat(),
        "",
    );
    assert!(inst.status.success());
    assert_eq!(
        qmc(&[&base[..], &["--format", "csv"]].concat(), "")
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn dihp_exp_json_and_csv() {
    let base = [
        "dihp-exp",
        "--n",
        "12",
        "--alpha-n",
        "3",
        "--t-players",
        "4",
        "--trials",
        "5",
        "--seed",
        "2",
    ];
    let v = json(&qmc(
        &[&base[..], &["--compute", "maxcut,qmc", "--mode", "maxcut"]].concat(),
        "",
    ));
    assert_eq!(v["yes"]["bipartite_rate"], 1.0);
    assert_eq!(v["protocol"]["yes_success_rate"], 1.0);
    assert_eq!(v["records"].as_array().unwrap().len(), 10);
    let csv = qmc(
        &[&base[..], &["--format", "csv", "--mode", "qmc"]].concat(),
        "",
    );
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(
        text.lines().next(),
        Some("truth,trial,m,bipartite,maxcut,sdp,qmc,decision,correct")
    );
    assert_eq!(text.lines().count(), 11);
    let too_big = qmc(
        &[
            "dihp-exp",
            "--n",
            "32",
            "--alpha-n",
            "4",
            "--t-players",
            "2",
            "--trials",
            "1",
            "--compute",
            "qmc",
        ],
        "",
    );
    assert_eq!(too_big.status.code(), Some(2));
}

#[test]
fn fourier_verify_zero_violations() {
    let v = json(&qmc(
        &["fourier-verify", "--seed", "1", "--scale", "0.2"],
        "",
    ));
    assert_eq!(v["passed"], true);
    assert_eq!(v["seed"], 1);
    for l in v["lemmas"].as_array().unwrap() {
        assert_eq!(l["violations"], 0, "{l}");
    }
}

#[test]
fn estimate_empty_stream() {
    let v = json(&qmc(
        &["estimate", "--eps", "0.5", "--delta", "0.5"],
        "n 5\n",
    ));
    assert_eq!(v["value"], 0.0);
    assert_eq!(v["edges"], 0);
}
