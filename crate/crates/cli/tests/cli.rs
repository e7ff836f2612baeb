use std::process::{Command, Output};

use serde_json::Value;

fn ordzeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ordzeta")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn with_config(body: &str, extra: &[&str]) -> Output {
    let dir = std::env::temp_dir().join(format!("ordzeta-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(format!("{:x}.json", body.len() * 31 + body.bytes().map(usize::from).sum::<usize>()));
    std::fs::write(&path, body).unwrap();
    let mut args = vec!["--config", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    ordzeta(&args)
}

#[test]
fn tiled_two_by_two_determinant() {
    let out = ordzeta(&["zeta", "--order", "triangular:2", "--v", "1", "--truncation", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let det = &r["tasks"][0]["result"]["det"];
    assert_eq!(det["num"], serde_json::json!(["1"]));
    assert_eq!(det["den"], serde_json::json!(["1", "0", "-1"]));
    assert_eq!(r["config"]["precision"], 12);
}

#[test]
fn empty_task_list_passes() {
    let out = with_config(r#"{"tasks": []}"#, &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "pass");
}

#[test]
fn precision_below_truncation_plus_four() {
    let out = ordzeta(&["--truncation", "10", "--precision", "13", "zeta", "--order", "cusp:2"]);
    assert_eq!(out.status.code(), Some(2));
    let e = json(&out);
    assert_eq!(e["error"], "ConfigInvalid");
    assert_eq!(e["pointer"], "/precision");
    let ok = ordzeta(&["--truncation", "6", "--precision", "10", "zeta", "--order", "cusp:2"]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn config_errors_carry_pointers() {
    let cases = [
        (r#"{"prime": 4}"#, "/prime"),
        (r#"{"budget": {"samples": 0}}"#, "/budget/samples"),
        (r#"{"budget": {"samples": "many"}}"#, "/budget/samples"),
        (r#"{"flavor": "odd"}"#, "/flavor"),
        (r#"{"colour": 1}"#, "/colour"),
        (r#"{"tasks": [{"task": "zeta", "order": "cusp:2"}, {"task": "zeta", "order": "bogus:1"}]}"#, "/tasks/1/order"),
        (r#"{"tasks": [{"task": "hall", "mode": "number", "lambda": "1|1", "nu": "1", "mu": "2"}]}"#, "/tasks/0/nu"),
        (r#"{"tasks": [{"task": "verify-all", "only": [3, 16]}]}"#, "/tasks/0/only/1"),
        (r#"{"tasks": [{"task": "qha", "mode": "chain", "algebra": "matrix:2", "order": "cusp:2"}]}"#, "/tasks/0"),
        (r#"{"tasks": [{"task": "catalog", "order": "cusp:2", "w": 1}]}"#, "/tasks/0/w"),
    ];
    for (body, pointer) in cases {
        let out = with_config(body, &[]);
        assert_eq!(out.status.code(), Some(2), "{body}");
        let e = json(&out);
        assert_eq!(e["error"], "ConfigInvalid", "{body}");
        assert_eq!(e["pointer"], pointer, "{body}: {}", e["message"]);
    }
}

#[test]
fn reports_are_byte_identical() {
    let args = ["--seed", "7", "qha", "chain", "--order", "cusp:3", "--flavor", "equal", "--truncation", "6"];
    let a = ordzeta(&args);
    let b = ordzeta(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn wrong_module_size_is_an_input_error() {
    let out = ordzeta(&["zeta", "--order", "congruence:2", "--v", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let r = json(&out);
    assert_eq!(r["tasks"][0]["status"], "error");
    assert_eq!(r["tasks"][0]["error"]["kind"], "input");
}

#[test]
fn starved_budget_is_a_resource_error() {
    let out = ordzeta(&["zeta", "--order", "congruence:3", "--truncation", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let out = with_config(r#"{"budget": {"move_cap": 1}}"#, &["zeta", "--order", "congruence:3", "--truncation", "6"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["tasks"][0]["error"]["kind"], "resource");
}

#[test]
fn hall_and_qha_commands() {
    let out = ordzeta(&["hall", "polynomial", "--lambda", "2,1", "--nu", "1", "--mu", "2,1,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["tasks"][0]["status"], "pass");
    let out = ordzeta(&["hall", "number", "--lambda", "1", "--nu", "1", "--mu", "2", "--prime", "3"]);
    assert_eq!(json(&out)["tasks"][0]["result"]["count"], 1);
    let out = ordzeta(&["hall", "lie-check", "--n", "1", "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    for algebra in ["truncated-poly:3", "upper-triangular:2"] {
        let out = ordzeta(&["qha", "repdim", "--algebra", algebra]);
        assert_eq!(out.status.code(), Some(0), "{algebra}");
    }
    let out = ordzeta(&["qha", "auslander", "--algebra", "truncated-poly:3"]);
    assert_eq!(out.status.code(), Some(0));
    let out = ordzeta(&["catalog", "--order", "congruence:2"]);
    assert_eq!(out.status.code(), Some(0));
    let ind = &json(&out)["tasks"][0]["result"]["ind"];
    assert_eq!(ind.as_array().unwrap().len(), 4);
}

#[test]
fn table_and_output_files() {
    let dir = std::env::temp_dir().join(format!("ordzeta-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let jp = dir.join("r.json");
    let tp = dir.join("r.txt");
    let body = format!(
        r#"{{"emit": "table", "output": {{"json": {:?}, "table": {:?}}}, "tasks": [{{"task": "zeta", "order": "triangular:2", "v": [1]}}]}}"#,
        jp.to_str().unwrap(),
        tp.to_str().unwrap()
    );
    let out = with_config(&body, &[]);
    assert_eq!(out.status.code(), Some(0));
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.contains("1 tasks: 1 passed"), "{table}");
    assert_eq!(std::fs::read_to_string(&tp).unwrap(), table);
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&jp).unwrap()).unwrap();
    assert_eq!(r["exit_code"], 0);
}

#[test]
fn verify_subset() {
    let out = ordzeta(&["verify-all", "--only", "1,8"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["tasks"][0]["checks"].as_array().unwrap().len(), 2);
    let lines = String::from_utf8(out.stderr).unwrap();
    assert!(lines.contains("criterion  1") && lines.contains("PASS"));
}

#[test]
fn algebras_from_tables_and_quivers() {
    let body = r#"{"tasks": [
        {"task": "qha", "mode": "auslander", "algebra": {"kind": "quiver", "vertices": 3, "arrows": [[0, 1], [1, 2]], "zero_paths": [[0, 1]], "max_len": 2}},
        {"task": "qha", "mode": "repdim", "algebra": {"kind": "structure-constants", "one": [1, 0], "mult": [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]}}
    ]}"#;
    let out = with_config(body, &[]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    // F_2[x]/x^2 again, given by its table
    assert_eq!(r["tasks"][1]["result"]["layer_dims"], serde_json::json!([4, 2, 0]));

    let bad_unit = r#"{"tasks": [{"task": "qha", "mode": "repdim", "algebra": {"kind": "structure-constants", "one": [1, 1], "mult": [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]}}]}"#;
    let out = with_config(bad_unit, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["tasks"][0]["error"]["error"], "InvalidAlgebra");

    let bad_arrow = r#"{"tasks": [{"task": "qha", "mode": "repdim", "algebra": {"kind": "quiver", "vertices": 2, "arrows": [[0, 3]], "max_len": 2}}]}"#;
    let out = with_config(bad_arrow, &[]);
    assert_eq!(json(&out)["pointer"], "/tasks/0/algebra/arrows/0");
}
