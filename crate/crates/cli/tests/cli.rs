use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn linksched(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linksched"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn ok(args: &[&str]) -> Output {
    let out = linksched(args);
    assert_eq!(
        code(&out),
        0,
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn edit_json(p: &Path, f: impl FnOnce(&mut Value)) {
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    f(&mut v);
    std::fs::write(p, serde_json::to_string_pretty(&v).unwrap()).unwrap();
}

#[test]
fn generate_run_verify_round_trip() {
    let dir = TempDir::new().unwrap();
    let (inst, sched) = (path(&dir, "i.json"), path(&dir, "s.json"));
    ok(&[
        "generate",
        "--kind",
        "clustered",
        "-n",
        "15",
        "--seed",
        "4",
        "--out",
        s(&inst),
    ]);
    ok(&[
        "run",
        s(&inst),
        "--algo",
        "linear-partition",
        "--strict",
        "--out",
        s(&sched),
    ]);
    let out = ok(&["verify", s(&inst), s(&sched), "--strict"]);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], Value::Bool(true));
}

#[test]
fn same_seed_same_bytes() {
    let a = ok(&["generate", "--kind", "line", "-n", "9", "--seed", "31"]).stdout;
    let b = ok(&["generate", "--kind", "line", "-n", "9", "--seed", "31"]).stdout;
    let c = ok(&["generate", "--kind", "line", "-n", "9", "--seed", "32"]).stdout;
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&linksched(&["run"])), 2);
    assert_eq!(code(&linksched(&["frobnicate"])), 2);
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "i.json");
    ok(&["generate", "-n", "4", "--out", s(&inst)]);
    assert_eq!(code(&linksched(&["run", s(&inst), "--algo", "nope"])), 2);
    assert_eq!(
        code(&linksched(&[
            "run",
            s(&inst),
            "--algo",
            "linear-partition",
            "--strict",
            "--tolerance",
            "1e-6"
        ])),
        2
    );
}

#[test]
fn wrong_power_mode_exits_2() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "i.json");
    ok(&[
        "generate",
        "-n",
        "5",
        "--mode",
        "uniform",
        "--out",
        s(&inst),
    ]);
    let out = linksched(&["run", s(&inst), "--algo", "linear-partition"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("oblivious"));
}

#[test]
fn oracle_cap_exits_4() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "i.json");
    ok(&["generate", "-n", "20", "--out", s(&inst)]);
    assert_eq!(
        code(&linksched(&["run", s(&inst), "--algo", "bruteforce"])),
        4
    );
    assert_eq!(
        code(&linksched(&["run", s(&inst), "--algo", "fractional-lp"])),
        4
    );
}

#[test]
fn schedule_for_another_instance_exits_3() {
    let dir = TempDir::new().unwrap();
    let (a, b, sched) = (
        path(&dir, "a.json"),
        path(&dir, "b.json"),
        path(&dir, "s.json"),
    );
    ok(&["generate", "-n", "6", "--seed", "1", "--out", s(&a)]);
    ok(&["generate", "-n", "6", "--seed", "2", "--out", s(&b)]);
    ok(&[
        "run",
        s(&a),
        "--algo",
        "linear-partition",
        "--out",
        s(&sched),
    ]);
    assert_eq!(code(&linksched(&["verify", s(&b), s(&sched)])), 3);
}

#[test]
fn co_slotted_gadget_origin_links_fail_verification() {
    let dir = TempDir::new().unwrap();
    let (inst, sched) = (path(&dir, "g.json"), path(&dir, "s.json"));
    ok(&[
        "generate",
        "--kind",
        "gadget",
        "--integers",
        "1,2,3",
        "--out",
        s(&inst),
    ]);
    ok(&["run", s(&inst), "--algo", "ilp-cover", "--out", s(&sched)]);
    ok(&["verify", s(&inst), s(&sched)]);
    // links 3 and 4 are the two origin links
    edit_json(&sched, |v| {
        v["schedule"]["slots"] = serde_json::json!([[0, 1, 3, 4], [2]]);
    });
    let out = linksched(&["verify", s(&inst), s(&sched)]);
    assert_eq!(code(&out), 3);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], Value::Bool(false));
}

#[test]
fn fractional_shortfall_fails_verification() {
    let dir = TempDir::new().unwrap();
    let (spec, inst, sched) = (
        path(&dir, "spec.json"),
        path(&dir, "i.json"),
        path(&dir, "s.json"),
    );
    std::fs::write(
        &spec,
        r#"{"demand": {"kind": "uniform", "lo": 0.5, "hi": 2.0}}"#,
    )
    .unwrap();
    ok(&[
        "generate",
        "-n",
        "8",
        "--seed",
        "3",
        "--spec",
        s(&spec),
        "--out",
        s(&inst),
    ]);
    ok(&[
        "run",
        s(&inst),
        "--algo",
        "fractional-partition",
        "--out",
        s(&sched),
    ]);
    ok(&["verify", s(&inst), s(&sched)]);
    edit_json(&sched, |v| {
        let g = &mut v["schedule"]["entries"][0]["gamma"];
        *g = serde_json::json!(g.as_f64().unwrap() * 0.5);
    });
    assert_eq!(code(&linksched(&["verify", s(&inst), s(&sched)])), 3);
}

#[test]
fn export_lp_writes_a_model() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "i.json");
    ok(&[
        "generate",
        "-n",
        "4",
        "--mode",
        "arbitrary",
        "--out",
        s(&inst),
    ]);
    let text = String::from_utf8(ok(&["export-lp", s(&inst), "--slot-cap", "3"]).stdout).unwrap();
    for needle in ["Minimize", "Subject To", "sinr_4_3", "Binary", "End"] {
        assert!(text.contains(needle), "missing {needle}");
    }
    assert_eq!(
        code(&linksched(&[
            "export-lp",
            s(&inst).replace("i.json", "none.json").as_str()
        ])),
        2
    );
}
