use std::path::PathBuf;
use std::process::Command;

use tensor_types_cli::commands::{eval_doc, map_doc, Order};
use tensor_types_cli::format::fmt_float;
use tensor_types_cli::run;

fn net(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("networks").join(name)
}

fn tt(args: &[&str], env_seed: Option<&str>) -> (i32, String, String) {
    let mut c = Command::new(env!("CARGO_BIN_EXE_tt"));
    c.args(args).env_remove("TT_SEED");
    if let Some(s) = env_seed {
        c.env("TT_SEED", s);
    }
    let o = c.output().unwrap();
    (o.status.code().unwrap(), String::from_utf8(o.stdout).unwrap(), String::from_utf8(o.stderr).unwrap())
}

fn write_tmp(name: &str, text: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("tt-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn golden_files_print_expected_literals() {
    let cases = [
        ("matrix_vector.json", "[3]", "[0.25, 0.3, 0.45]"),
        ("inner_product.json", "[]", "[0.355]"),
        ("trace.json", "[]", "[3.0]"),
        ("partial_trace.json", "[3]", "[7.0, 11.0, 15.0]"),
        ("outer_product.json", "[3, 3]", "[0.0625, 0.075, 0.1125, 0.075, 0.09, 0.135, 0.1125, 0.135, 0.2025]"),
        ("tensor_matrix.json", "[2, 3, 2]", "[2.0, 3.0, 0.0, 1.0, 4.0, 5.0, 8.0, 9.0, 6.0, 7.0, 10.0, 11.0]"),
        ("pairing_loop.json", "[]", "{\"pairs\": [], \"prefactor\": 2.0}"),
    ];
    for (file, slots, payload) in cases {
        let (code, out, err) = tt(&["eval", net(file).to_str().unwrap()], None);
        assert_eq!(code, 0, "{file}: {err}");
        assert_eq!(out, format!("{slots}\n{payload}\n"), "{file}");
    }
}

#[test]
fn every_order_gives_the_same_output() {
    let f = net("tensor_matrix.json");
    let base = tt(&["eval", f.to_str().unwrap()], None).1;
    for order in ["given", "random"] {
        let (code, out, _) = tt(&["eval", f.to_str().unwrap(), "--order", order, "--tol", "0"], None);
        assert_eq!(code, 0);
        assert_eq!(out, base);
    }
}

#[test]
fn exit_codes() {
    let bad = write_tmp("bad.json", "{\"type\": \"array\", ");
    let (code, _, err) = tt(&["eval", bad.to_str().unwrap()], None);
    assert_eq!(code, 2);
    assert!(err.starts_with("parse error"));
    assert_eq!(err.lines().count(), 1);

    let unknown = write_tmp("unknown.json", r#"{"type": "array", "ring": "quaternion"}"#);
    assert_eq!(tt(&["eval", unknown.to_str().unwrap()], None).0, 2);

    let short = write_tmp("short.json", r#"{"type": "array", "tensors": {"x": {"slots": [3], "data": [1, 2]}}, "atoms": ["x"], "open": [[0, 0]]}"#);
    let (code, _, err) = tt(&["eval", short.to_str().unwrap()], None);
    assert_eq!(code, 2);
    assert!(err.contains("tensor `x`"));

    let mismatch = write_tmp(
        "mismatch.json",
        r#"{"type": "array", "tensors": {"x": {"slots": [2], "data": [1, 2]}, "y": {"slots": [3], "data": [1, 2, 3]}},
            "atoms": ["x", "y"], "bonds": [[[0, 0], [1, 0]]]}"#,
    );
    let (code, _, err) = tt(&["eval", mismatch.to_str().unwrap()], None);
    assert_eq!(code, 3);
    assert!(err.contains("bond 0"));

    let dangling = write_tmp("dangling.json", r#"{"type": "array", "tensors": {"x": {"slots": [2], "data": [1, 2]}}, "atoms": ["x"]}"#);
    let (code, _, err) = tt(&["eval", dangling.to_str().unwrap()], None);
    assert_eq!(code, 3);
    assert!(err.contains("(0, 0)"));

    let singular = write_tmp(
        "singular.json",
        r#"{"type": "schur-rect", "params": {"u": [1, 1]},
            "tensors": {"x": {"slots": [[1, 0], [0, 1]], "data": {"matrix": [[1]]}}},
            "atoms": ["x"], "bonds": [[[0, 0], [0, 1]]]}"#,
    );
    let (code, _, err) = tt(&["eval", singular.to_str().unwrap()], None);
    assert_eq!(code, 4);
    assert!(err.contains("singular") && err.contains("bond 0"));

    assert_eq!(tt(&["eval", "/nonexistent/file.json"], None).0, 2);
    assert_eq!(tt(&["frobnicate"], None).0, 2);
    assert_eq!(tt(&["demo", "freefermion"], Some("abc")).0, 2);
}

#[test]
fn mappings_from_files() {
    let (code, out, _) = tt(&["map", net("pairing_loop.json").to_str().unwrap(), "pairing2array"], None);
    assert_eq!(code, 0);
    assert_eq!(out.lines().nth(1), Some("[2.0]"));
    assert!(out.contains("commutes"));
    for (file, mapping) in [
        ("free_fermion_chain.json", "det"),
        ("free_fermion_chain.json", "antisym"),
        ("majorana_pair.json", "pfaffian"),
    ] {
        let (code, out, err) = tt(&["map", net(file).to_str().unwrap(), mapping], None);
        assert_eq!(code, 0, "{mapping}: {err}");
        assert!(out.lines().last().unwrap().starts_with("commutes"));
    }
    // Wrong source type or hom ring.
    assert_eq!(tt(&["map", net("trace.json").to_str().unwrap(), "det"], None).0, 2);
    assert_eq!(tt(&["map", net("trace.json").to_str().unwrap(), "entrywise:complex-conjugate"], None).0, 2);
    assert_eq!(tt(&["map", net("trace.json").to_str().unwrap(), "nonsense"], None).0, 2);
}

#[test]
fn in_process_mapping_variants() {
    let doc: serde_json::Value = serde_json::from_str(
        r#"{"type": "array", "ring": "f64", "tensors": {"v": {"slots": [2], "data": [1.5, -2]}}, "atoms": ["v"], "open": [[0, 0]]}"#,
    )
    .unwrap();
    let o = map_doc(&doc, "entrywise:embed-real-in-complex", 3, 0, 0.0);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(o.stdout.lines().nth(1), Some("[[1.5, 0.0], [-2.0, 0.0]]"));

    let doc: serde_json::Value = serde_json::from_str(
        r#"{"type": "array", "ring": "int", "tensors": {"v": {"slots": [2], "data": [7, -1]}}, "atoms": ["v"], "open": [[0, 0]]}"#,
    )
    .unwrap();
    let o = map_doc(&doc, "entrywise:mod-3-reduce", 3, 0, 0.0);
    assert_eq!(o.stdout.lines().nth(1), Some("[1, 2]"));

    let doc: serde_json::Value = serde_json::from_str(
        r#"{"type": "schur-square", "params": {"u": [[0, 1], [-1, 0]], "prefactor": "det"},
            "tensors": {"x": {"slots": [1], "data": {"matrix": [[1]]}}}, "atoms": ["x"], "open": [[0, 0]]}"#,
    )
    .unwrap();
    let o = map_doc(&doc, "inoutpair", 3, 0, 1e-12);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(o.stdout.lines().next(), Some("[[1, 1]]"));
}

#[test]
fn complex_and_graded_literals_round_trip() {
    let doc: serde_json::Value = serde_json::from_str(
        r#"{"type": "array", "ring": "c64", "tensors": {"z": {"slots": [2], "data": [[1, 2], [0, -1]]}},
            "atoms": ["z", "z"], "bonds": [[[0, 0], [1, 0]]]}"#,
    )
    .unwrap();
    let o = eval_doc(&doc, Order::Greedy, None, 0);
    // (1+2i)^2 + (-i)^2 = -3 + 4i - 1
    assert_eq!(o.stdout, "[]\n[[-4.0, 4.0]]\n");

    let doc: serde_json::Value = serde_json::from_str(
        r#"{"type": "graded", "params": {"grading": "z2"},
            "tensors": {"v": {"slots": [[0, 1], {"grades": [0, 1], "dual": true}], "data": [1, 0, 0, 7]}},
            "atoms": ["v"], "bonds": [[[0, 0], [0, 1]]]}"#,
    )
    .unwrap();
    assert_eq!(eval_doc(&doc, Order::Greedy, None, 0).stdout, "[]\n[8.0]\n");

    let odd: serde_json::Value = serde_json::from_str(
        r#"{"type": "graded", "tensors": {"v": {"slots": [[0, 1]], "data": [1, 1]}}, "atoms": ["v"], "open": [[0, 0]]}"#,
    )
    .unwrap();
    assert_eq!(eval_doc(&odd, Order::Greedy, None, 0).code, 2);
}

#[test]
fn float_formatting() {
    assert_eq!(fmt_float(3.0), "3.0");
    assert_eq!(fmt_float(0.1 + 0.2), "0.3");
    assert_eq!(fmt_float(-0.0), "0.0");
    assert_eq!(fmt_float(1.0 / 3.0), "0.333333333333");
    assert_eq!(fmt_float(2.0e-20), "2e-20");
}

#[test]
fn seeds_come_from_flag_then_env_then_zero() {
    let a = tt(&["demo", "freefermion", "--modes", "2"], None).1;
    let b = tt(&["demo", "freefermion", "--modes", "2", "--seed", "0"], None).1;
    let c = tt(&["demo", "freefermion", "--modes", "2"], Some("9")).1;
    let d = tt(&["demo", "freefermion", "--modes", "2", "--seed", "9"], Some("0")).1;
    assert_eq!(a, b);
    assert_eq!(c, d);
    assert_eq!(run(["tt", "demo", "freefermion", "--modes", "2"], Some(9)).stdout, c);
}

#[test]
fn axioms_command() {
    let o = run(["tt", "axioms", "graded", "--cases", "20"], None);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.lines().filter(|l| l.contains(": pass")).count(), 7);
    assert!(o.stdout.contains("asymmetric"));
    assert_eq!(run(["tt", "axioms", "array:zmod:1"], None).code, 2);
    assert_eq!(run(["tt", "axioms", "widget"], None).code, 2);
}

#[test]
fn demos_are_deterministic() {
    for args in [
        vec!["tt", "demo", "ising", "--periodic", "--observe", "0,4"],
        vec!["tt", "demo", "dimer", "--width", "3", "--height", "2"],
        vec!["tt", "demo", "freefermion", "--modes", "3", "--seed", "7"],
    ] {
        let a = run(args.clone(), None);
        assert_eq!(a.code, 0, "{args:?}: {}", a.stderr);
        assert_eq!(a, run(args, None));
    }
    assert_eq!(run(["tt", "demo", "ising", "--width", "5", "--height", "4"], None).code, 2);
    assert_eq!(run(["tt", "demo", "dimer", "--width", "5"], None).code, 2);
    assert_eq!(run(["tt", "demo", "freefermion", "--modes", "5"], None).code, 2);
}
