use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn syndyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_syndyn"))
        .args(args)
        .env_remove("SYNDYN_N_MAX")
        .env_remove("SYNDYN_TAIL_TOL")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = syndyn(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn assert_schema(name: &str, v: &Value) {
    let path = root().join("schemas").join(format!("{name}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(v).map(|e| format!("{e} at {}", e.instance_path)).collect();
    assert!(errors.is_empty(), "{name}: {errors:#?}");
}

fn data(file: &str) -> String {
    root().join("data/which_books").join(file).to_string_lossy().into_owned()
}

#[test]
fn fib_examples() {
    let v = json(&["fib", "--n", "7"]);
    assert_eq!(v, serde_json::json!({"n": 7, "fib": 13}));
    assert_schema("fib", &v);
    let m = json(&["fib", "--n", "6", "--matrix"]);
    assert_eq!(m["matrix"], serde_json::json!([[13, 8], [8, 5]]));
    assert_schema("fib", &m);
    assert_eq!(syndyn(&["fib", "--n", "200"]).status.code(), Some(1));
}

#[test]
fn tree_outputs() {
    let v = json(&["tree", "--depth", "3", "--counts-only"]);
    assert_eq!(v["totals"], serde_json::json!([1, 1, 2, 3]));
    assert!(v.get("nodes").is_none());
    assert_schema("tree", &v);

    let full = json(&["tree", "--depth", "4"]);
    assert_eq!(full["nodes"].as_array().unwrap().len(), 1 + 1 + 2 + 3 + 5);
    assert_schema("tree", &full);
    let mirror = json(&["tree", "--depth", "4", "--symmetric"]);
    assert_eq!(mirror["nodes"][0]["state"], "ONE");
    assert_eq!(mirror["totals"], full["totals"]);
    assert_schema("tree", &mirror);

    let counts = json(&["tree", "--depth", "25", "--counts-only"]);
    assert_eq!(counts["totals"][25], 121_393);
    assert_eq!(syndyn(&["tree", "--depth", "40"]).status.code(), Some(1));
}

#[test]
fn dicke_ops() {
    let v = json(&["dicke", "--N", "10", "--l", "3", "--op", "sigma+"]);
    assert!((v["coefficient"].as_f64().unwrap() - 28f64.sqrt()).abs() < 1e-11);
    assert_eq!(v["state"], serde_json::json!({"n": 10, "l": 4}));
    assert_schema("dicke", &v);
    let hp = json(&["dicke", "--N", "10", "--l", "3", "--op", "sigma+", "--route", "hp"]);
    assert!((hp["coefficient"].as_f64().unwrap() - 28f64.sqrt()).abs() < 1e-11);
    let top = json(&["dicke", "--N", "4", "--l", "4", "--op", "sigma+"]);
    assert_eq!(top["state"], Value::Null);
    assert_schema("dicke", &top);
    let c = json(&["dicke", "--N", "10000", "--l", "10", "--op", "contraction"]);
    assert_eq!(c["coefficient"].as_f64(), Some(2e-3));
    for op in ["sigma-", "s3"] {
        assert_schema("dicke", &json(&["dicke", "--N", "5", "--l", "2", "--op", op]));
    }
    assert_eq!(syndyn(&["dicke", "--N", "3", "--l", "4", "--op", "s3"]).status.code(), Some(1));
    assert_eq!(syndyn(&["dicke", "--N", "3", "--l", "1", "--op", "sideways"]).status.code(), Some(64));
}

#[test]
fn bogoliubov_reports() {
    let v = json(&["bogoliubov", "--theta", "0.5", "--report"]);
    assert!((v["overlap_with_bare"].as_f64().unwrap() - 1.0 / 0.5f64.cosh()).abs() < 1e-11);
    assert_eq!(v["weights"].as_array().unwrap().len(), 61);
    assert_schema("bogoliubov", &v);

    let multi = json(&["bogoliubov", "--theta", "0.5", "--modes", "3", "--concept", "books", "--parallel-modes", "2"]);
    assert_eq!(multi["concept"], "books");
    let expect = (1.0 / 0.5f64.cosh()).powi(3);
    assert!((multi["overlap_with_bare"].as_f64().unwrap() - expect).abs() < 1e-11);
    assert_schema("bogoliubov", &multi);

    assert_eq!(syndyn(&["bogoliubov", "--theta", "3", "--n-max", "20"]).status.code(), Some(1));
}

#[test]
fn entropy_sweep() {
    let out = syndyn(&["entropy", "--theta-sweep", "0:0.5:0.25"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "theta,entropy,number,overlap_with_bare");
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[1], "0.0,0.0,0.0,1.0");
    assert!(lines[3].starts_with("0.5,0.659452959168,"));

    let v = json(&["entropy", "--theta-sweep", "0.1:0.3:0.1", "--format", "json", "--bits"]);
    assert_eq!(v["unit"], "bits");
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert_schema("entropy", &v);

    for bad in ["0:1", "1:0:0.1", "0:1:0", "a:b:c"] {
        assert_eq!(syndyn(&["entropy", "--theta-sweep", bad]).status.code(), Some(64), "{bad}");
    }
}

#[test]
fn heat_report() {
    let v = json(&["heat", "--omega", "1", "--beta", "1", "--ramp", "0:0.1:100"]);
    assert!(v["brackets_stationary"].as_bool().unwrap());
    assert!(v["max_residual"].as_f64().unwrap() <= 1e-4);
    assert_schema("heat", &v);
    assert_eq!(syndyn(&["heat", "--omega", "1", "--beta=-1", "--ramp", "0:1:10"]).status.code(), Some(1));
}

#[test]
fn derive_golden_and_crash() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("result.json");
    let out = syndyn(&[
        "derive",
        "--lexicon",
        &data("lexicon.json"),
        "--script",
        &data("script.json"),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(written, std::fs::read_to_string(data("expected.json")).unwrap());
    assert_schema("derive", &serde_json::from_str(&written).unwrap());

    let script = dir.path().join("crash.json");
    std::fs::write(
        &script,
        r#"[{"op":"em","args":["which","books"],"as":"wb"},
            {"op":"em","args":["read","@wb"],"as":"vp"},
            {"op":"em","args":["did","@vp"],"as":"cp"},
            {"op":"close","args":["@cp"]},
            {"op":"im","args":["@cp","books"]}]"#,
    )
    .unwrap();
    let out = syndyn(&["derive", "--lexicon", &data("lexicon.json"), "--script", script.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["errors"][0]["kind"], "pic");
    assert_schema("derive", &v);

    std::fs::write(&script, r#"[{"op":"em","args":["which","nothing"]}]"#).unwrap();
    let out = syndyn(&["derive", "--lexicon", &data("lexicon.json"), "--script", script.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let missing = syndyn(&["derive", "--lexicon", "/nonexistent.json", "--script", script.to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(syndyn(&[]).status.code(), Some(64));
    assert_eq!(syndyn(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(syndyn(&["fib", "--n", "3", "--bogus"]).status.code(), Some(64));
    assert_eq!(syndyn(&["fib", "--n", "3", "--tail-tol", "0"]).status.code(), Some(64));
    assert_eq!(syndyn(&["--help"]).status.code(), Some(0));
    assert_eq!(syndyn(&["--version"]).status.code(), Some(0));
}

#[test]
fn environment_overrides() {
    let run = |n_max: &str| {
        Command::new(env!("CARGO_BIN_EXE_syndyn"))
            .args(["bogoliubov", "--theta", "0.5", "--report"])
            .env("SYNDYN_N_MAX", n_max)
            .output()
            .unwrap()
    };
    let v: Value = serde_json::from_slice(&run("30").stdout).unwrap();
    assert_eq!(v["weights"].as_array().unwrap().len(), 31);
    assert_eq!(run("3").status.code(), Some(1));
    let flag_wins = Command::new(env!("CARGO_BIN_EXE_syndyn"))
        .args(["bogoliubov", "--theta", "0.5", "--report", "--n-max", "40"])
        .env("SYNDYN_N_MAX", "3")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&flag_wins.stdout).unwrap();
    assert_eq!(v["weights"].as_array().unwrap().len(), 41);
    let loose = Command::new(env!("CARGO_BIN_EXE_syndyn"))
        .args(["bogoliubov", "--theta", "0.5", "--n-max", "3"])
        .env("SYNDYN_TAIL_TOL", "0.5")
        .output()
        .unwrap();
    assert_eq!(loose.status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["tree", "--depth", "6"][..],
        &["bogoliubov", "--theta", "0.37", "--modes", "4", "--parallel-modes", "3"],
        &["heat", "--omega", "2", "--beta", "0.5", "--ramp", "0:1:20"],
    ] {
        assert_eq!(syndyn(args).stdout, syndyn(args).stdout, "{args:?}");
    }
}

#[test]
fn selftest_json_subset() {
    let v = json(&["selftest", "--only", "1,2,4", "--json"]);
    assert_eq!(v["passed"], 3);
    assert_schema("selftest", &v);
    assert_eq!(syndyn(&["selftest", "--only", "11"]).status.code(), Some(64));
}
