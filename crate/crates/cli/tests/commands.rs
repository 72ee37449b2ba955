use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn sample(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../circuits")
        .join(name)
}

fn qgk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qgk-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn xor_truth_table() {
    for (input, expect) in [("00", "00"), ("01", "01"), ("10", "11"), ("11", "10")] {
        let out = qgk(&["run", sample("xor.qc").to_str().unwrap(), "--input", input]);
        assert!(out.status.success());
        let v = json(&out);
        assert_eq!(v["schema_version"], 1);
        let amps = v["amplitudes"].as_array().unwrap();
        assert_eq!(amps.len(), 1);
        assert_eq!(amps[0]["basis"], expect);
        assert_eq!(amps[0]["re"], 1.0);
    }
}

#[test]
fn parity_ancilla_matches_input_parity() {
    for x in 0..8u32 {
        let input = format!("{x:03b}0");
        let out = qgk(&[
            "run",
            sample("fig5.qc").to_str().unwrap(),
            "--input",
            &input,
        ]);
        let v = json(&out);
        assert_eq!(v["bits"][0]["slot"], "p");
        assert_eq!(v["bits"][0]["bit"], x.count_ones() % 2, "{input}");
        assert_eq!(v["bits"][0]["probability"], 1.0);
    }
}

#[test]
fn run_is_deterministic_under_seed() {
    let f = sample("teleport.qc");
    let a = qgk(&[
        "run",
        f.to_str().unwrap(),
        "--input",
        "random",
        "--seed",
        "11",
    ]);
    let b = qgk(&[
        "run",
        f.to_str().unwrap(),
        "--input",
        "random",
        "--seed",
        "11",
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn forced_outcome_is_respected() {
    let f = scratch("plus.qc", "qubits 1\nHADAMARD 0\nmeasure 0 m\n");
    for bit in [0, 1] {
        let out = qgk(&["run", f.to_str().unwrap(), "--force", &format!("m={bit}")]);
        let v = json(&out);
        assert_eq!(v["bits"][0]["bit"], bit);
        assert!((v["bits"][0]["probability"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    }
}

#[test]
fn input_errors_exit_2() {
    let empty = scratch("empty.qc", "");
    let out = qgk(&["run", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1, column 1"));

    let bad = scratch("bad.gens", "X0\nZ0\n");
    assert_eq!(
        qgk(&["synth", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );

    let missing = qgk(&["run", "/nonexistent/file.qc"]);
    assert_eq!(missing.status.code(), Some(2));

    assert_eq!(qgk(&["qec", "--error", "W9"]).status.code(), Some(2));
    assert_eq!(
        qgk(&["run", sample("xor.qc").to_str().unwrap(), "--input", "101"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_constructions() {
    let v = json(&qgk(&["verify", "toffoli-sw"]));
    assert_eq!(v["passed"], true);
    assert!(v["report"]["max_entry_error"].as_f64().unwrap() < 1e-10);

    let v = json(&qgk(&["verify", "margolus"]));
    assert_eq!(v["passed"], true);
    assert_eq!(v["report"]["flagged_state"], "100");

    let out = qgk(&["verify", "abc", "--random", "100", "--seed", "5"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["cases_passed"], 100);

    let v = json(&qgk(&["verify", "toffoli-network"]));
    assert_eq!(v["report"]["xor_count"], 6);
}

#[test]
fn impossible_tolerance_exits_3() {
    let out = qgk(&["verify", "sw", "--random", "3", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn qec_cases() {
    let v = json(&qgk(&["qec", "--error", "X2"]));
    assert_eq!(v["passed"], true);
    assert!(v["result"]["fidelity"].as_f64().unwrap() >= 1.0 - 1e-10);

    let v = json(&qgk(&["qec", "--error", "none"]));
    assert_eq!(v["result"]["syndrome"], "0000");

    for path in ["restore", "decode"] {
        let out = qgk(&["qec", "--all", "--path", path, "--seed", "9"]);
        assert!(out.status.success(), "{path}");
        assert_eq!(json(&out)["cases_passed"], 16);
    }

    let v = json(&qgk(&[
        "qec",
        "--error",
        "Z4",
        "--amplitudes",
        "--path",
        "decode",
    ]));
    assert_eq!(
        v["result"]["amplitudes"].as_array().unwrap()[0]["basis"]
            .as_str()
            .unwrap()
            .len(),
        1
    );
}

#[test]
fn synth_five_qubit_trace() {
    let out_file = std::env::temp_dir().join(format!("qgk-five-{}.qc", std::process::id()));
    let out = qgk(&[
        "synth",
        sample("five_qubit.gens").to_str().unwrap(),
        "--out",
        out_file.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = json(&out);
    let stages = v["stages"].as_array().unwrap();
    assert_eq!(stages.len(), 4);
    assert_eq!(stages[0]["after_basis_change"][0], "Z0 Z1 Z2 Z4");
    assert_eq!(stages[0]["after_collapse"][0], "Z4");
    let wires: Vec<u64> = stages
        .iter()
        .map(|s| s["measured_wire"].as_u64().unwrap())
        .collect();
    assert_eq!(wires, [4, 3, 2, 1]);
    let text = std::fs::read_to_string(&out_file).unwrap();
    assert!(qgk_cli::parse_circuit(&text).is_ok());
}

#[test]
fn synth_single_parity_is_three_xors() {
    let v = json(&qgk(&[
        "synth",
        sample("parity.gens").to_str().unwrap(),
        "--mode",
        "measure",
    ]));
    assert_eq!(v["xor_count"], 3);
    assert_eq!(v["one_bit_count"], 0);
    assert_eq!(
        v["circuit"],
        "qubits 4\nXOR 0 3\nXOR 1 3\nXOR 2 3\nmeasure 3 g0\n"
    );
}

#[test]
fn ghz_check_passes() {
    let out = qgk(&["ghz-check", "--runs", "100", "--seed", "2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["mermin"]["contradiction"], true);
    assert_eq!(v["mermin"]["eigenvalues"], serde_json::json!([1, 1, 1, -1]));
}

#[test]
fn pretty_output_is_key_value() {
    let out = qgk(&["qec", "--error", "none", "--pretty"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "schema_version: 1"));
    assert!(text.lines().any(|l| l.trim() == "syndrome: 0000"));
}
