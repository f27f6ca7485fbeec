//! End-to-end CLI tests: build/verify round trips, report rendering,
//! determinism of the JSON artifact, and the exit-code contract.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stgq"))
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("stgq_cli_test_{}_{name}", std::process::id()));
    p
}

#[test]
fn build_then_verify_geometry_file() {
    let geom = tmp("w2.geom");
    let out = bin()
        .args(["build", "--model", "w", "--q", "2", "--out"])
        .arg(&geom)
        .output()
        .unwrap();
    assert!(out.status.success(), "{:?}", out);
    assert!(String::from_utf8_lossy(&out.stdout).contains("order (2,2)"));

    let artifact = tmp("w2_run.json");
    let out = bin()
        .args(["verify", "--suite", "gq", "--geometry"])
        .arg(&geom)
        .arg("--out")
        .arg(&artifact)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("pass"));
}

#[test]
fn build_rejects_out_of_range_q() {
    let out = bin().args(["build", "--model", "w", "--q", "4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_artifact_is_deterministic_modulo_wall_time() {
    let a1 = tmp("det1.json");
    let a2 = tmp("det2.json");
    for a in [&a1, &a2] {
        let out = bin()
            .args(["verify", "--suite", "kantor", "--model", "w", "--q", "3", "--out"])
            .arg(a)
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    let strip = |s: String| -> String {
        s.lines()
            .map(|l| match l.find("\"wall_time_ms\"") {
                Some(i) => format!("{}...", &l[..i]),
                None => l.to_string(),
            })
            .collect::<Vec<_>>()
            .join("\n")
    };
    let t1 = strip(std::fs::read_to_string(&a1).unwrap());
    let t2 = strip(std::fs::read_to_string(&a2).unwrap());
    assert_eq!(t1, t2);
}

#[test]
fn report_json_reparses_to_the_same_records() {
    let artifact = tmp("roundtrip.json");
    let out = bin()
        .args(["verify", "--suite", "gq", "--model", "w", "--q", "2", "--format", "json", "--out"])
        .arg(&artifact)
        .output()
        .unwrap();
    assert!(out.status.success());
    let direct: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("verify --format json emits valid JSON");

    let out = bin().args(["report", "--format", "json", "--out"]).arg(&artifact).output().unwrap();
    assert!(out.status.success());
    let rendered: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();

    let records = |v: &serde_json::Value| -> Vec<(String, String, String)> {
        v["records"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| {
                (
                    r["check"].as_str().unwrap().to_string(),
                    r["subject"].as_str().unwrap().to_string(),
                    r["verdict"].as_str().unwrap().to_string(),
                )
            })
            .collect()
    };
    assert_eq!(records(&direct), records(&rendered));

    // text rendering has one line per check inside the frame
    let out = bin().args(["report", "--out"]).arg(&artifact).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 2 + records(&direct).len());
}

#[test]
fn expectations_drive_exit_codes() {
    let artifact = tmp("exp.json");
    let good = tmp("good.expect");
    let bad = tmp("bad.expect");
    std::fs::write(&good, "verify_gq:w2=pass\n").unwrap();
    std::fs::write(&bad, "verify_gq:w2=fail\n# comment\n").unwrap();

    let run = |expect: &PathBuf| {
        bin()
            .args(["verify", "--suite", "gq", "--model", "w", "--q", "2", "--out"])
            .arg(&artifact)
            .arg("--expect")
            .arg(expect)
            .output()
            .unwrap()
    };
    assert_eq!(run(&good).status.code(), Some(0));
    assert_eq!(run(&bad).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    let out = bin().args(["verify", "--suite", "nosuch", "--model", "w", "--q", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["verify", "--suite", "gq"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["report", "--out", "/nonexistent/nowhere.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn family_file_round_trip_through_suites() {
    let fam = tmp("w3.kantor");
    let out = bin()
        .args(["build", "--model", "classical-family", "--q", "3", "--out"])
        .arg(&fam)
        .output()
        .unwrap();
    assert!(out.status.success());
    let artifact = tmp("fam_run.json");
    let out = bin()
        .args(["verify", "--suite", "kantor", "--group"])
        .arg(&fam)
        .arg("--out")
        .arg(&artifact)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("kantor_axiom_c"));
    assert!(text.contains("elation_group"));
    assert!(text.contains("5 pass, 0 fail"));
}

#[test]
fn threads_env_is_honored() {
    let artifact = tmp("threads.json");
    let out = bin()
        .args(["verify", "--suite", "all", "--model", "w", "--q", "3", "--out"])
        .arg(&artifact)
        .env("STGQ_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    let single = tmp("threads1.json");
    let out1 = bin()
        .args(["verify", "--suite", "all", "--model", "w", "--q", "3", "--out"])
        .arg(&single)
        .env("STGQ_THREADS", "1")
        .output()
        .unwrap();
    assert!(out1.status.success());
    // identical check ordering regardless of parallelism
    assert_eq!(String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out1.stdout));
}
