use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn sepmac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sepmac"))
        .args(args)
        .env_remove("SEPMAC_SEED")
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Drops the timing field so two runs can be compared byte for byte.
fn without_time(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wall_time_ms");
    if let Some(p) = v.get_mut("payload").and_then(Value::as_object_mut) {
        p.remove("wall_time_ms");
    }
    v
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = write(dir.path(), "c3.txt", "2 2 3\n0 0 1\n0 1 0\n");
    let bad = write(dir.path(), "c4.txt", "2 2 4\n0 0 1 1\n0 1 0 1\n");
    let args = |p: &Path| {
        vec![
            "verify".to_string(),
            "--code".into(),
            p.to_str().unwrap().into(),
            "--s".into(),
            "2".into(),
            "--channel".into(),
            "B".into(),
            "--separable".into(),
        ]
    };
    let run = |p: &Path| {
        let a = args(p);
        sepmac(&a.iter().map(String::as_str).collect::<Vec<_>>())
    };
    let out = run(&good);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "sepmac/1");
    assert_eq!(v["payload"]["holds"], true);

    let out = run(&bad);
    assert_eq!(out.status.code(), Some(1));
    let w = &json(&out)["payload"]["witness"];
    assert_eq!(w["kind"], "message_pair");
    assert_eq!(w["first"], serde_json::json!([1, 4]));
    assert_eq!(w["second"], serde_json::json!([2, 3]));

    let g = good.to_str().unwrap();
    let out = sepmac(&["verify", "--code", g, "--s", "2", "--channel", "thr:2", "--hash"]);
    assert_eq!(out.status.code(), Some(2));
    let out = sepmac(&["verify", "--code", g, "--s", "2", "--separable"]);
    assert_eq!(out.status.code(), Some(2));
    let out = sepmac(&["verify", "--code", g, "--s", "2", "--hash", "--frameproof"]);
    assert_eq!(out.status.code(), Some(2));

    let broken = write(dir.path(), "broken.txt", "2 2 3\n0 0\n");
    let out = sepmac(&["verify", "--code", broken.to_str().unwrap(), "--s", "1", "--frameproof"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn verify_custom_channel() {
    let dir = TempDir::new().unwrap();
    let code = write(dir.path(), "c.txt", "2 2 3\n0 0 1\n0 1 0\n");
    let table = write(dir.path(), "or.txt", "2 2 2\n2 0 -> off\n1 1 -> on\n0 2 -> on\n");
    let spec = format!("custom:{}", table.display());
    let out = sepmac(&["verify", "--code", code.to_str().unwrap(), "--s", "2", "--channel", &spec, "--separable"]);
    let disj = sepmac(&["verify", "--code", code.to_str().unwrap(), "--s", "2", "--channel", "disj", "--separable"]);
    assert_eq!(out.status.code(), disj.status.code());
}

#[test]
fn bound_values() {
    let out = sepmac(&["bound", "--kind", "ld-lower", "--s", "2", "--L", "1", "--q", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["payload"]["value"].as_f64().unwrap() - 0.2939).abs() < 1e-4);
    assert_eq!(v["payload"]["witness"]["qprime"], 3);

    let out = sepmac(&["bound", "--kind", "entropy", "--channel", "disj", "--s", "3", "--q", "2"]);
    let value = json(&out)["payload"]["value"].as_f64().unwrap();
    assert!((value - 2f64.ln() / 3.0).abs() < 1e-6);

    let out = sepmac(&["bound", "--kind", "entropy", "--s", "3", "--q", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table1_csv() {
    let out = sepmac(&["table1"]);
    let text = stdout(&out);
    assert!(text.contains("\n2,1,2,0.1438,2,"));
    assert!(text.contains("\n4,1,3,0.0551,8,"));
}

#[test]
fn search_and_code_file() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("found.txt");
    let out = sepmac(&[
        "search", "--channel", "B", "--s", "2", "--q", "2", "--N", "2", "--mode", "exhaustive", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["payload"]["t_star"], 3);
    let verify = sepmac(&["verify", "--code", path.to_str().unwrap(), "--s", "2", "--channel", "B", "--separable"]);
    assert_eq!(verify.status.code(), Some(0));

    let out = sepmac(&["search", "--channel", "B", "--s", "2", "--q", "3", "--N", "13"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn gen_is_reproducible() {
    let a = sepmac(&["gen", "--q", "3", "--N", "5", "--t", "6", "--seed", "11"]);
    let b = sepmac(&["gen", "--q", "3", "--N", "5", "--t", "6", "--seed", "11"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("3 5 6\n"));
    let env = Command::new(env!("CARGO_BIN_EXE_sepmac"))
        .args(["gen", "--q", "3", "--N", "5", "--t", "6"])
        .env("SEPMAC_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);
    let fc = sepmac(&["gen", "--ensemble", "fc", "--q", "2", "--N", "4", "--t", "5", "--composition", "2,2"]);
    let text = stdout(&fc);
    let ones = text.lines().skip(1).flat_map(|l| l.split(' ')).filter(|&x| x == "1").count();
    assert_eq!(ones, 10);
}

#[test]
fn reduce_and_decode() {
    let dir = TempDir::new().unwrap();
    let code = write(dir.path(), "c4.txt", "4 2 3\n0 1 3\n2 2 0\n");
    let out = sepmac(&["reduce", "--code", code.to_str().unwrap(), "--q", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("3 4 3\n"));

    let word = write(dir.path(), "z.txt", "{0,1}\n{2}\n");
    let out = sepmac(&["decode", "--code", code.to_str().unwrap(), "--word", word.to_str().unwrap()]);
    assert_eq!(json(&out)["payload"]["decoded"], serde_json::json!([1, 2]));

    let out = sepmac(&["reduce", "--code", code.to_str().unwrap(), "--q", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exponent_sweep() {
    let out = sepmac(&["exponent", "--channel", "disj", "--s", "2", "--q", "2", "--R", "0.1", "--ensemble", "cr"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("R,E"));
    let row = lines.next().unwrap();
    let e: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!(row.starts_with("0.1,") && e >= 0.0);
    let grid = sepmac(&["exponent", "--channel", "B", "--s", "2", "--q", "3", "--grid", "0:0.5:6"]);
    assert_eq!(stdout(&grid).lines().count(), 7);
    let big = sepmac(&["exponent", "--channel", "B", "--s", "4", "--q", "2", "--R", "0.1"]);
    assert_eq!(big.status.code(), Some(3));
}

#[test]
fn thread_count_does_not_change_payload() {
    let dir = TempDir::new().unwrap();
    let gen = sepmac(&["gen", "--q", "3", "--N", "4", "--t", "12", "--seed", "4"]);
    let code = write(dir.path(), "c.txt", &stdout(&gen));
    let c = code.to_str().unwrap();
    let base = ["verify", "--code", c, "--s", "3", "--channel", "A", "--separable"];
    let one = sepmac(&[&["--threads", "1"][..], &base[..]].concat());
    let four = sepmac(&[&["--threads", "4"][..], &base[..]].concat());
    assert_eq!(one.status.code(), four.status.code());
    assert_eq!(without_time(json(&one)), without_time(json(&four)));
}

#[test]
fn stats_estimates_reference() {
    let dir = TempDir::new().unwrap();
    let code = write(dir.path(), "c.txt", "2 2 4\n0 0 1 1\n0 1 0 1\n");
    let out = sepmac(&["stats", "--code", code.to_str().unwrap(), "--s", "2", "--channel", "B"]);
    let v = json(&out);
    assert_eq!(v["payload"]["error_fraction"]["epsilon"], "1/3");
    let out = sepmac(&["estimates", "--q", "2", "--m", "2", "--s", "2"]);
    assert_eq!(json(&out)["payload"]["type_collision_exact"], "3/8");
    let out = sepmac(&["reference", "--s", "2", "--q", "2"]);
    assert!(stdout(&out).contains("b_mac_lower,"));
}
