//! The `scpkit` binary: exit codes, stdin input and JSON output.

use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn scpkit(args: &[&str], stdin: &str) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_scpkit"))
        .args(args)
        .env_remove("SCPKIT_SEED")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn json(r: &Run) -> Value {
    serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("{e}: {}", r.stdout))
}

const NONLINEAR: &str = "x:1, y:bot |- wait y. wait y. close x\n";

#[test]
fn check_exit_codes() {
    let r = scpkit(&["check", "-", "--calculus", "scp"], NONLINEAR);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("S⊥"));

    let r = scpkit(
        &["check", "-", "--calculus", "scp", "--lin", "y"],
        NONLINEAR,
    );
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("no linearity derivation for y"));

    let r = scpkit(&["check", "-", "--calculus", "scp", "--lin-all"], NONLINEAR);
    assert_eq!(r.code, 1);

    let r = scpkit(&["check", "-", "--calculus", "cp"], NONLINEAR);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("not typable"), "{}", r.stdout);

    let r = scpkit(&["check", "-", "--calculus", "cp", "--lin", "x"], NONLINEAR);
    assert_eq!(r.code, 2);
    let r = scpkit(&["check", "-", "--calculus", "scp"], "x:1 |- close");
    assert_eq!(r.code, 2);
    let r = scpkit(&["check", "-"], NONLINEAR);
    assert_eq!(r.code, 2, "no extension and no --calculus");
    let r = scpkit(&["frobnicate"], "");
    assert_eq!(r.code, 2);
    let r = scpkit(&["--help"], "");
    assert_eq!(r.code, 0);
}

#[test]
fn failure_locus_is_reported() {
    let r = scpkit(
        &["check", "-", "--calculus", "cp", "--json"],
        "x:1, y:bot |- wait y. wait y. close x",
    );
    assert_eq!(r.code, 1);
    let v = json(&r);
    assert_eq!(v["ok"], false);
    assert_eq!(
        v["error"],
        "not typable: no rule applies at x:1 |- wait y. close x"
    );
}

#[test]
fn json_documents() {
    let r = scpkit(
        &["check", "-", "--calculus", "scp", "--lin", "x", "--json"],
        NONLINEAR,
    );
    let v = json(&r);
    assert_eq!(v["ok"], true);
    assert_eq!(v["derivation"]["rule"], "S⊥");
    assert_eq!(v["lin"][0]["rule"], "Lwait2");

    let r = scpkit(
        &["normalize", "-", "--calculus", "cp", "--json"],
        "nu x:1 (close x | wait x. close z)",
    );
    let v = json(&r);
    assert_eq!(v["final"], "close z");
    assert_eq!(v["stuck"], true);
    assert_eq!(v["steps"][0]["rule"], "β1⊥");
}

#[test]
fn lin_subcommand() {
    let r = scpkit(&["lin", "-", "--channel", "x"], "x[inl>w]. close w");
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("Linl"), "{}", r.stdout);
    let r = scpkit(&["lin", "-", "--channel", "x"], "x[inl>w]. close x");
    assert_eq!(r.code, 1);
}

#[test]
fn step_lists_and_selects() {
    let src = "nu x:bot (fwd x y | close x)";
    let r = scpkit(&["step", "-", "--calculus", "cp"], src);
    assert_eq!(r.stdout, "0: βfwd [] close y\n");
    let r = scpkit(&["step", "-", "--calculus", "cp", "--index", "0"], src);
    assert_eq!(r.stdout, "βfwd: close y\n");
    let r = scpkit(&["step", "-", "--calculus", "cp", "--index", "1"], src);
    assert_eq!(r.code, 2);
    let r = scpkit(
        &["step", "-", "--calculus", "cp", "--strategy", "first"],
        "close y",
    );
    assert_eq!(r.code, 1);
    assert_eq!(r.stdout, "stuck\n");

    let r = scpkit(
        &[
            "step",
            "-",
            "--calculus",
            "cp",
            "--equiv-depth",
            "2",
            "--json",
        ],
        "nu y:1 (nu x:1 (close x | wait x. close y) | wait y. close z)",
    );
    let rules: Vec<String> = json(&r)
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["rule"].as_str().unwrap().to_string())
        .collect();
    assert!(rules.contains(&"β≡".to_string()), "{rules:?}");
}

#[test]
fn translate_both_ways() {
    let r = scpkit(&["translate", "-", "--to", "scp"], "x(y). wait y. close x");
    assert_eq!(r.code, 0);
    let scp = r.stdout.trim().to_string();
    let r = scpkit(&["translate", "-", "--to", "cp"], &scp);
    assert_eq!(r.stdout.trim(), "x(y). wait y. close x");

    let r = scpkit(
        &["translate", "-", "--to", "cp", "--with-derivation"],
        NONLINEAR,
    );
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("no linearity derivation for y"));

    let r = scpkit(
        &[
            "translate",
            "-",
            "--to",
            "scp",
            "--with-derivation",
            "--json",
        ],
        "z:1 |- nu x:1 (close x | wait x. close z)",
    );
    let v = json(&r);
    assert_eq!(v["derivation"]["rule"], "Scut");
    assert_eq!(v["lin"].as_array().unwrap().len(), 1);
}

#[test]
fn equiv_files() {
    let dir = std::env::temp_dir().join(format!("scpkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.cp");
    let b = dir.join("b.cp");
    let c = dir.join("c.cp");
    std::fs::write(&a, "nu x:1 (close x | wait x. close z)").unwrap();
    std::fs::write(&b, "nu x:bot (wait x. close z | close x)").unwrap();
    std::fs::write(&c, "close z").unwrap();
    let (a, b, c) = (
        a.to_str().unwrap(),
        b.to_str().unwrap(),
        c.to_str().unwrap(),
    );
    let r = scpkit(&["equiv", a, b], "");
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("comm"));
    let r = scpkit(&["equiv", a, c, "--depth", "3"], "");
    assert_eq!(r.code, 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn enumerate_and_properties() {
    let r = scpkit(&["enumerate", "--size", "1"], "");
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("x:1 |- close x\n"));
    assert_eq!(r.stdout.lines().count(), 9);
    let r = scpkit(
        &["enumerate", "--size", "3", "--calculus", "scp", "--json"],
        "",
    );
    assert_eq!(json(&r).as_array().unwrap().len(), 181);

    let r = scpkit(
        &[
            "properties",
            "--suite",
            "all",
            "--seed",
            "7",
            "--count",
            "20",
            "--size",
            "3",
            "--json",
        ],
        "",
    );
    assert_eq!(r.code, 0, "{}", r.stdout);
    let v = json(&r);
    assert_eq!(v["ok"], true);
    assert_eq!(v["reports"].as_array().unwrap().len(), 4);
    assert!(v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["violations"].as_array().unwrap().is_empty()));
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |seed: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_scpkit"))
            .args([
                "properties",
                "--suite",
                "lemmas",
                "--count",
                "5",
                "--size",
                "0",
                "--json",
            ])
            .env("SCPKIT_SEED", seed)
            .output()
            .unwrap();
        assert!(out.status.success());
        serde_json::from_slice::<Value>(&out.stdout).unwrap()
    };
    assert_eq!(run("3"), run("3"));
}
