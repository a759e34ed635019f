mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::{fixture_path, FIXTURES};

fn powerdiag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_powerdiag"))
        .args(args)
        .output()
        .expect("run powerdiag")
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, text: &str) -> PathBuf {
    let p = scratch(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn fixture(name: &str) -> String {
    fixture_path(name).to_string_lossy().into_owned()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout))
    })
}

#[test]
fn detect_exit_codes_follow_verdicts() {
    for name in FIXTURES {
        let out = powerdiag(&["detect", &fixture(name)]);
        let want = match name {
            "fig1-R.json" | "fig2-left.json" => 1,
            _ => 0,
        };
        assert_eq!(out.status.code(), Some(want), "{name}");
        let doc = json(&out);
        assert_eq!(doc["certificate"].is_object(), want == 0, "{name}");
    }
}

#[test]
fn malformed_input_exits_2_with_json_error() {
    let cases = [
        ("broken.json", "{\"schema_version\": \"1\", "),
        ("version.json", r#"{"schema_version":"9","dim":1,"mode":"paired","cells":[[],[]]}"#),
        (
            "float.json",
            r#"{"schema_version":"1","dim":1,"mode":"paired","cells":[[{"neighbor":1,"normal":[0.5],"offset":"0"}],[]]}"#,
        ),
        (
            "unknown.json",
            r#"{"schema_version":"1","dim":1,"mode":"paired","cells":[[{"neighbor":1,"normal":["1"],"offset":"0","extra":1}],[]]}"#,
        ),
        (
            "zero.json",
            r#"{"schema_version":"1","dim":1,"mode":"paired","cells":[[{"neighbor":1,"normal":["0"],"offset":"0"}],[]]}"#,
        ),
    ];
    for (name, text) in cases {
        let out = powerdiag(&["detect", &write(name, text).to_string_lossy()]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
        assert!(err["error"].is_string(), "{name}");
    }
    let missing = powerdiag(&["detect", "/nonexistent/complex.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn floats_allowed_when_document_opts_in() {
    let text = r#"{"schema_version":"1","dim":1,"mode":"paired","arithmetic":"float",
        "cells":[[{"neighbor":1,"normal":[1.0],"offset":0.5}],[]]}"#;
    let p = write("float-ok.json", text);
    let out = powerdiag(&["detect", &p.to_string_lossy(), "--float"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn generate_splits_line_at_zero() {
    let spec = write("line-spec.json", r#"{"schema_version":"1","sites":[["0"],["1"]],"gammas":["0","0"]}"#);
    let out = powerdiag(&["generate", "--spec", &spec.to_string_lossy()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["cells"][0][0]["neighbor"], 1);
    assert_eq!(doc["cells"][0][0]["normal"], serde_json::json!(["1"]));
    assert_eq!(doc["cells"][0][0]["offset"], "0");
    assert_eq!(doc["cells"][1][0]["normal"], serde_json::json!(["-1"]));
}

#[test]
fn coincident_sites_exit_2() {
    let spec = write("dup-spec.json", r#"{"schema_version":"1","sites":[["1","2"],["1","2"]],"gammas":["0","1"]}"#);
    let out = powerdiag(&["generate", "--spec", &spec.to_string_lossy()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let a = powerdiag(&["generate", "--random", "2", "5", "--seed", "42"]);
    let b = powerdiag(&["generate", "--random", "2", "5", "--seed", "42"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    for name in FIXTURES {
        let x = powerdiag(&["detect", &fixture(name), "--stats"]);
        let y = powerdiag(&["detect", &fixture(name), "--stats"]);
        assert_eq!(x.stdout, y.stdout, "{name}");
        let x = powerdiag(&["adjacency", &fixture(name)]);
        let y = powerdiag(&["adjacency", &fixture(name)]);
        assert_eq!(x.stdout, y.stdout, "{name}");
    }
}

#[test]
fn generated_complexes_are_detected() {
    for seed in 0..50u64 {
        let dim = ["2", "3"][(seed % 2) as usize];
        let k = (2 + seed % 5).to_string();
        let domain = ["--unit-box", "--simplex", ""][(seed % 3) as usize];
        let seed_s = seed.to_string();
        let mut args = vec!["generate", "--random", dim, &k, "--seed", &seed_s];
        if !domain.is_empty() {
            args.push(domain);
        }
        let gen = powerdiag(&args);
        assert_eq!(gen.status.code(), Some(0), "seed {seed}");
        let p = scratch(&format!("gen-{seed}.json"));
        std::fs::write(&p, &gen.stdout).unwrap();
        let det = powerdiag(&["detect", &p.to_string_lossy()]);
        assert_eq!(det.status.code(), Some(0), "seed {seed}: {}", String::from_utf8_lossy(&det.stdout));
    }
}

#[test]
fn adjacency_respects_domain() {
    let out = powerdiag(&["adjacency", &fixture("fig1-M.json")]);
    assert_eq!(json(&out)["neighbors"]["sun"], serde_json::json!(["rain"]));
    let out = powerdiag(&["adjacency", &fixture("fig1-M.json"), "--ignore-domain"]);
    assert_eq!(json(&out)["neighbors"]["sun"], serde_json::json!(["rain", "snow"]));
}

#[test]
fn verify_accepts_own_certificate_and_rejects_perturbed() {
    let complex = fixture("fig2-right.json");
    let out_path = scratch("fig2-right-verdict.json");
    let det = powerdiag(&["detect", &complex, "-o", &out_path.to_string_lossy()]);
    assert_eq!(det.status.code(), Some(0));
    assert!(det.stdout.is_empty());
    let ok = powerdiag(&["verify", &complex, &out_path.to_string_lossy()]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["verified"], true);

    let mut doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&out_path).unwrap()).unwrap();
    doc["certificate"]["gammas"][1] = serde_json::json!("21/10");
    let bad = write("fig2-right-bad.json", &doc.to_string());
    let no = powerdiag(&["verify", &complex, &bad.to_string_lossy()]);
    assert_eq!(no.status.code(), Some(1));
    assert_eq!(json(&no)["verified"], false);
}

#[test]
fn domain_flag_overrides_inline_domain() {
    let full = write("full-domain.json", r#"{"type":"full"}"#);
    let out = powerdiag(&["adjacency", &fixture("fig1-M.json"), "--domain", &full.to_string_lossy()]);
    assert_eq!(json(&out)["neighbors"]["sun"], serde_json::json!(["rain", "snow"]));
}
