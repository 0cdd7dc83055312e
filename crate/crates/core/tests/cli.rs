use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use unitary_fl::instance::parse_instance;

fn ufl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ufl")).args(args).output().expect("run ufl")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn temp_file(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ufl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn error_of(out: &Output) -> (String, Option<String>) {
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(out);
    let e = &v["error"];
    (e["code"].as_str().unwrap().to_string(), e["path"].as_str().map(str::to_string))
}

#[test]
fn flverify_node3_passes() {
    let out = ufl(&["flverify", "corpus:NODE3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "PASS");
    assert_eq!(v["O_kappa"], "-3");
    assert_eq!(v["transfer"], "-3");
    assert_eq!(v["SO_H"], "1");
    assert_eq!(v["counts"]["1,1"], "4");
}

#[test]
fn orbital_counts_and_naive_agree() {
    for naive in [false, true] {
        let mut args = vec!["orbital", "corpus:NODE5", "--lambda", "1,1"];
        if naive {
            args.push("--naive");
        }
        let out = ufl(&args);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(stdout_json(&out)["count"], "6");
    }
}

#[test]
fn odd_class_is_rejected() {
    let out = ufl(&["orbital", "corpus:NODE3", "--lambda", "1,0"]);
    assert_eq!(error_of(&out).0, "ClassNotAdmissible");
}

#[test]
fn schema_errors_carry_paths() {
    let unknown = temp_file("unknown.json", r#"{"q": 3, "factors": [], "colour": 1}"#);
    let (code, path) = error_of(&ufl(&["invariants", unknown.to_str().unwrap()]));
    assert_eq!((code.as_str(), path.as_deref()), ("UnknownFieldError", Some("/colour")));

    let bad_q = temp_file("badq.json", r#"{"q": 9, "factors": [{"id": "1", "e": 1, "f": 1, "gamma": []}]}"#);
    let (code, path) = error_of(&ufl(&["invariants", bad_q.to_str().unwrap()]));
    assert_eq!((code.as_str(), path.as_deref()), ("SchemaError", Some("/q")));

    let (code, _) = error_of(&ufl(&["invariants", "/nonexistent/instance.json"]));
    assert_eq!(code, "IoError");
}

#[test]
fn outputs_are_deterministic() {
    for cmd in [
        vec!["invariants", "corpus:TAC3"],
        vec!["spectral", "corpus:TAC3"],
        vec!["flverify", "corpus:TRIPLE5", "--oracle"],
    ] {
        let a = ufl(&cmd);
        let b = ufl(&cmd);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{cmd:?}");
    }
}

#[test]
fn corpus_run_passes_and_show_round_trips() {
    let out = ufl(&["corpus", "run", "--jobs", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["all_pass"], true);

    let list = stdout_json(&ufl(&["corpus", "list"]));
    for name in list["instances"].as_array().unwrap() {
        let shown = ufl(&["corpus", "show", name.as_str().unwrap()]);
        let text = String::from_utf8(shown.stdout).unwrap();
        let inst = parse_instance(&text).unwrap();
        assert_eq!(inst.emit(), text);
        assert_eq!(parse_instance(&inst.emit()).unwrap(), inst);
    }
}

#[test]
fn spectral_reports_profile() {
    let v = stdout_json(&ufl(&["spectral", "corpus:NODE3"]));
    assert_eq!(v["intersection_profile"]["m"], 1);
    assert_eq!(v["intersection_profile"]["sign"], -1);
    assert_eq!(v["kostant_roundtrip"], true);
    assert_eq!(v["discriminant_identity"], true);
}
