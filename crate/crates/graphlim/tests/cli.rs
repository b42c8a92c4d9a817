//! End-to-end tests of the binary: known outputs, JSON round trips between
//! subcommands, determinism under a fixed seed, and exit-code contracts.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_graphlim"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("graphlim-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

fn mantel_json() -> String {
    serde_json::json!([
        {"graph": {"n": 3, "edges": [[0,1],[0,2],[1,2]]}, "coeff": "1"},
        {"graph": {"n": 2, "edges": [[0,1]]}, "coeff": "-1"},
        {"graph": {"n": 0, "edges": []}, "coeff": "1/2"},
    ])
    .to_string()
}

fn half_parameter_json() -> String {
    let w = graphlim::StepGraphon::constant(graphlim::num::rat_of(1, 2)).unwrap();
    let f = graphlim::GraphParameter::from_graphon(&w, 4).unwrap();
    graphlim::parameter::parameter_to_json(&f).unwrap().to_string()
}

#[test]
fn density_known_output() {
    let dir = workdir("density");
    let k3 = write(&dir, "k3.g6", "Bw");
    let out = run(&["density", "--F", &k3, "--G", &k3]);
    let v = stdout_json(&out);
    assert_eq!(v["t"], "2/9");
    assert_eq!(v["hom"], 6);
    assert_eq!(v["t_inj"], "1");
}

#[test]
fn density_against_graphon_file() {
    let dir = workdir("density-graphon");
    let k3 = write(&dir, "k3.g6", "Bw");
    let w = write(
        &dir,
        "half.json",
        &serde_json::json!({"widths": ["1"], "values": [["1/2"]]}).to_string(),
    );
    let v = stdout_json(&run(&["density", "--F", &k3, "--graphon", &w]));
    assert_eq!(v["t"], "1/8");
}

#[test]
fn cutnorm_and_cutdist_known_values() {
    let dir = workdir("cut");
    let w = write(
        &dir,
        "w.json",
        &serde_json::json!({"widths": ["1"], "values": [["1/2"]]}).to_string(),
    );
    let v = stdout_json(&run(&["cutnorm", "--input", &w]));
    assert_eq!(v["cut_norm"], "1/2");

    let k3 = write(&dir, "k3.g6", "Bw");
    let u3 = write(&dir, "u3.g6", "B?");
    let v = stdout_json(&run(&["cutdist", "--g1", &k3, "--g2", &u3]));
    assert_eq!(v["cut_distance"], "2/3");
}

#[test]
fn mobius_of_half_table_and_psd_roundtrip() {
    let dir = workdir("mobius");
    let param = write(&dir, "p.json", &half_parameter_json());
    let v = stdout_json(&run(&["mobius", "--param", &param]));
    // on [2]: f†(K2) = p = 1/2 and f†(U2) = 1 - p = 1/2
    assert_eq!(v["A_"], "1/2");
    assert_eq!(v["A?"], "1/2");

    // the mobius output is itself a parameter table: feed it back
    let mob = write(&dir, "mob.json", &v.to_string());
    let inv = stdout_json(&run(&["mobius", "--param", &mob, "--inverse"]));
    assert_eq!(inv["A_"], "1/2", "inverse of the transform restores f(K2)");

    let psd = stdout_json(&run(&["psd-test", "--param", &param, "--k", "2"]));
    assert_eq!(psd["psd"], true);
    assert_eq!(psd["factorization_ok"], true);

    let cm = stdout_json(&run(&["connmat", "--param", &param, "--k", "2", "--flat"]));
    assert_eq!(cm["entries"][0][0], "1");
    assert_eq!(cm["entries"][0][1], "1/2");
    assert_eq!(cm["entries"][1][1], "1/2");
    assert_eq!(cm["psd"], true);
}

#[test]
fn model_build_and_check_roundtrip() {
    let dir = workdir("model");
    let param = write(&dir, "p.json", &half_parameter_json());
    let m2 = dir.join("m2.json");
    let m3 = dir.join("m3.json");
    let out = run(&[
        "model", "build",
        "--param", &param,
        "--n", "2",
        "--out", m2.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(run(&[
        "model", "build",
        "--param", &param,
        "--n", "3",
        "--out", m3.to_str().unwrap(),
    ])
    .status
    .success());
    let v = stdout_json(&run(&[
        "model", "check",
        "--small", m2.to_str().unwrap(),
        "--big", m3.to_str().unwrap(),
    ]));
    assert_eq!(v["consistent"], true);
    assert_eq!(v["max_deviation"], "0");
}

fn graphon_model_json() -> String {
    serde_json::json!({
        "items": [
            {"prob": "1", "graphon": {"widths": ["1"], "values": [["1/2"]]}},
        ]
    })
    .to_string()
}

#[test]
fn sample_emits_consistent_graph6_prefixes() {
    let dir = workdir("sample");
    let model = write(&dir, "m.json", &graphon_model_json());
    let v = stdout_json(&run(&["sample", "--model", &model, "--sizes", "4,8", "--seed", "5"]));
    let g4 = graphlim::graph::from_graph6(v["prefixes"][0]["graph6"].as_str().unwrap()).unwrap();
    let g8 = graphlim::graph::from_graph6(v["prefixes"][1]["graph6"].as_str().unwrap()).unwrap();
    assert_eq!(g4.n(), 4);
    assert_eq!(g8.n(), 8);
    let prefix = g8.induced(&[0, 1, 2, 3]).unwrap();
    assert_eq!(prefix, g4, "the 4-node sample is a prefix of the 8-node one");

    // the emitted graph6 feeds straight back into density
    let g8path = write(&dir, "g8.g6", v["prefixes"][1]["graph6"].as_str().unwrap());
    let k2 = write(&dir, "k2.g6", "A_");
    assert!(run(&["density", "--F", &k2, "--G", &g8path]).status.success());
}

#[test]
fn locality_and_trace_subcommands_run() {
    let dir = workdir("locality");
    let model = write(&dir, "m.json", &graphon_model_json());
    let k2 = write(&dir, "k2.g6", "A_");
    let v = stdout_json(&run(&[
        "test-locality",
        "--model", &model,
        "--s", "0,1",
        "--t", "2,3",
        "--F", &k2,
        "--samples", "2000",
        "--seed", "9",
    ]));
    assert!(v["z_score"].as_f64().unwrap().abs() < 6.0);

    let v = stdout_json(&run(&[
        "trace-convergence",
        "--model", &model,
        "--sizes", "8,32",
        "--seed", "3",
    ]));
    assert_eq!(v["trace"][0]["n"], 8);
    assert_eq!(v["trace"][1]["n"], 32);
}

#[test]
fn qeval_on_mantel() {
    let dir = workdir("qeval");
    let x = write(&dir, "mantel.json", &mantel_json());
    let k3 = write(&dir, "k3.g6", "Bw");
    let v = stdout_json(&run(&["qeval", "--input", &x, "--graph", &k3]));
    // 2/9 - 2/3 + 1/2 = 1/18
    assert_eq!(v["value"], "1/18");
}

#[test]
fn certify_is_deterministic_and_log_env_is_output_neutral() {
    let dir = workdir("determinism");
    let x = write(&dir, "mantel.json", &mantel_json());
    let args = ["certify", "--input", &x, "--m", "3", "--seed", "7"];
    let a = run_in(&dir, &args);
    let b = run_in(&dir, &args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "same seed must give identical bytes");
    let c = bin()
        .current_dir(&dir)
        .env("GRAPHLIM_LOG", "1")
        .args(args)
        .output()
        .unwrap();
    assert_eq!(a.stdout, c.stdout, "GRAPHLIM_LOG must not affect results");
    assert!(!c.stderr.is_empty(), "GRAPHLIM_LOG=1 writes telemetry to stderr");
}

#[test]
fn certify_verify_and_tamper_rejection() {
    let dir = workdir("verify");
    let x = write(&dir, "edge.json",
        &serde_json::json!([{"graph": {"n": 2, "edges": [[0,1]]}, "coeff": "1"}]).to_string());
    let cert = dir.join("cert.json");
    let out = run(&[
        "certify", "--input", &x, "--m", "2", "--eps", "0.001", "--seed", "1",
        "--out", cert.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let cert_v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(cert_v["residual_norm"], "0");
    assert_eq!(cert_v["meets_eps"], true);

    let ok = run(&["verify", "--input", &x, "--cert", cert.to_str().unwrap()]);
    assert!(ok.status.success());
    let v = stdout_json(&ok);
    assert_eq!(v["valid"], true);

    // perturb one coefficient: the verifier must reject with status 1
    let tampered = cert_v.to_string().replacen("\"coeff\":\"1\"", "\"coeff\":\"2\"", 1);
    assert_ne!(tampered, cert_v.to_string(), "tampering changed the payload");
    let bad = write(&dir, "bad.json", &tampered);
    let out = run(&["verify", "--input", &x, "--cert", &bad]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["valid"], false);
}

#[test]
fn disprove_reports_witnesses() {
    let dir = workdir("disprove");
    let x = write(&dir, "neg.json",
        &serde_json::json!([{"graph": {"n": 0, "edges": []}, "coeff": "-1"}]).to_string());
    let v = stdout_json(&run(&["disprove", "--input", &x, "--budget", "0", "--seed", "1"]));
    assert_eq!(v["witness"]["value"], "-1");

    let ok = write(&dir, "edge.json",
        &serde_json::json!([{"graph": {"n": 2, "edges": [[0,1]]}, "coeff": "1"}]).to_string());
    let v = stdout_json(&run(&["disprove", "--input", &ok, "--budget", "2", "--seed", "1"]));
    assert!(v["witness"].is_null());
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = workdir("exits");
    // unreadable input: 2
    let out = run(&["density", "--F", "/nonexistent.g6", "--G", "/nonexistent.g6"]);
    assert_eq!(out.status.code(), Some(2));
    // usage error: 2
    let out = run(&["not-a-subcommand"]);
    assert_eq!(out.status.code(), Some(2));
    // domain error (empty target graph): 1, message names the problem
    let k2 = write(&dir, "k2.g6", "A_");
    let k0 = write(&dir, "k0.g6", "?");
    let out = run(&["density", "--F", &k2, "--G", &k0]);
    assert_eq!(out.status.code(), Some(1));
    // cap violation: 1, message names the cap
    let param = write(&dir, "p.json", &half_parameter_json());
    let out = run(&["psd-test", "--param", &param, "--k", "9"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn human_format_renders_the_same_data() {
    let dir = workdir("human");
    let k3 = write(&dir, "k3.g6", "Bw");
    let out = bin()
        .args(["density", "--F", &k3, "--G", &k3, "--format", "human"])
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("t: \"2/9\""));
}
