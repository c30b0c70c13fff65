use std::process::Command;

fn fracwave() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fracwave"));
    c.env("FRACWAVE_THREADS", "2");
    c
}

#[test]
fn run_writes_every_requested_format() {
    let dir = std::env::temp_dir().join(format!("fracwave-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (csv, md, svg) = (dir.join("r.csv"), dir.join("r.md"), dir.join("r.svg"));
    let out = fracwave()
        .args(["run", "--example", "ex1", "--alpha", "0.5", "--beta", "1.5", "--refine", "time"])
        .args(["--n", "16,32,64", "--m", "16", "--backend", "fast"])
        .arg("--out")
        .arg(&csv)
        .arg("--out")
        .arg(&md)
        .arg("--out")
        .arg(&svg)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("| 64 |"), "{stdout}");
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 4);
    assert!(std::fs::read_to_string(&md).unwrap().contains("| N | E | Order | CPU(s) |"));
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn config_file_with_flag_override() {
    let dir = std::env::temp_dir().join(format!("fracwave-cli-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c.json");
    std::fs::write(
        &path,
        r#"{"example": {"id": "low_reg", "nu": 1.5, "alpha1": 0.75, "alpha2": 1.5},
            "refine": "time", "resolutions": [16, 32], "cells": 8}"#,
    )
    .unwrap();
    let out = fracwave().args(["run", "--backend", "stepping", "--config"]).arg(&path).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8(out.stdout).unwrap().contains("stepping backend"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn bad_input_exits_nonzero_with_a_message() {
    let out = fracwave().args(["run", "--example", "ex9", "--refine", "time", "--n", "8,16"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown example"));
    let out = fracwave().args(["run", "--example", "ex1", "--refine", "time", "--n", "16", "--m", "8,16"]).output().unwrap();
    assert!(!out.status.success());
    let out = fracwave().args(["run", "--example", "ex1", "--refine", "time", "--n", "32,16"]).output().unwrap();
    assert!(String::from_utf8_lossy(&out.stderr).contains("strictly increasing"));
}

#[test]
fn verify_passes() {
    let out = fracwave().args(["verify", "--json"]).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{stdout}");
    for line in stdout.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["passed"], true, "{line}");
    }
}

#[test]
fn bench_prints_ratios() {
    let out = fracwave().args(["bench", "--backend", "fast", "--n", "256,512", "--m", "8"]).output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 4, "{stdout}");
}
