use std::path::{Path, PathBuf};

use easyprove::demos::{barber_case_split_script, barber_script, barber_task, demo_tasks, union_of_powerset_script, union_of_powerset_task};
use easyprove::{ProofScript, TaskDef};
use easyprove_server::cli::{run, FAILED, OK, USAGE};

fn easyprove(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("easyprove").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p: PathBuf = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn files(script: &ProofScript, task: &TaskDef) -> (tempfile::TempDir, String, String) {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "proof.json", &script.to_json());
    let t = write(dir.path(), "task.json", &task.to_json());
    (dir, s, t)
}

#[test]
fn complete_scripts_are_proved() {
    for (script, task) in [
        (barber_script(), barber_task()),
        (barber_case_split_script(), barber_task()),
        (union_of_powerset_script(), union_of_powerset_task()),
    ] {
        let (_dir, s, t) = files(&script, &task);
        let (code, out, err) = easyprove(&["check", &s, &t]);
        assert_eq!(code, OK, "{out}{err}");
        assert_eq!(out.lines().count(), script.steps.len() + 1);
        assert_eq!(out.lines().last(), Some("PROVED"));
    }
}

#[test]
fn truncated_script_is_incomplete() {
    let mut script = barber_script();
    script.steps.pop();
    let (_dir, s, t) = files(&script, &barber_task());
    let (code, out, _) = easyprove(&["check", &s, &t]);
    assert_eq!(code, FAILED);
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(lines[lines.len() - 1], "INCOMPLETE");
    assert!(lines[lines.len() - 2].contains('3'), "{out}");
}

#[test]
fn bad_step_is_invalid() {
    let mut script = barber_script();
    script.steps[2].term = Some("B".into());
    let (_dir, s, t) = files(&script, &barber_task());
    let (code, out, _) = easyprove(&["check", &s, &t]);
    assert_eq!(code, FAILED);
    assert!(out.lines().last().unwrap().starts_with("INVALID at step 4: "), "{out}");

    let (code, pl, _) = easyprove(&["--lang", "pl", "check", &s, &t]);
    assert_eq!(code, FAILED);
    assert!(pl.lines().last().unwrap().starts_with("INVALID at step 4: "));
    assert_ne!(pl, out);
}

#[test]
fn output_is_deterministic() {
    let (_dir, s, t) = files(&union_of_powerset_script(), &union_of_powerset_task());
    for cmd in ["check", "replay"] {
        let a = easyprove(&[cmd, &s, &t]);
        let b = easyprove(&[cmd, &s, &t]);
        assert_eq!(a, b);
    }
    let (code, verbose, _) = easyprove(&["replay", "--verbose", &s, &t]);
    assert_eq!(code, OK);
    assert_eq!(verbose.matches("-- ").count(), union_of_powerset_script().steps.len());
}

#[test]
fn unreadable_inputs_are_usage_errors() {
    let (dir, s, t) = files(&barber_script(), &barber_task());
    let missing = dir.path().join("nope.json");
    let (code, _, err) = easyprove(&["check", missing.to_str().unwrap(), &t]);
    assert_eq!(code, USAGE);
    assert!(err.starts_with("error: "));
    let garbage = write(dir.path(), "garbage.json", "{");
    assert_eq!(easyprove(&["check", &s, &garbage]).0, USAGE);
    // a script for another task
    let (_d2, other, _) = files(&union_of_powerset_script(), &union_of_powerset_task());
    assert_eq!(easyprove(&["check", &other, &t]).0, USAGE);
    assert_eq!(easyprove(&["frobnicate"]).0, USAGE);
}

#[test]
fn tasks_import_export_and_demos() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    let data = data.to_str().unwrap();

    let (code, out, err) = easyprove(&["--data", data, "seed-demos"]);
    assert_eq!(code, OK, "{err}");
    assert_eq!(out, "barber\nunion-of-powerset\n");

    let mut extra = barber_task();
    extra.id = "barber-copy".into();
    let one = write(dir.path(), "one.json", &extra.to_json());
    let (code, out, _) = easyprove(&["--data", data, "tasks-import", &one]);
    assert_eq!((code, out.as_str()), (OK, "barber-copy\n"));

    let export = dir.path().join("all.json");
    let (code, out, _) = easyprove(&["--data", data, "tasks-export", export.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (OK, "3\n"));
    let exported: Vec<TaskDef> = serde_json::from_str(&std::fs::read_to_string(&export).unwrap()).unwrap();
    let mut ids: Vec<_> = exported.iter().map(|t| t.id.as_str()).collect();
    ids.sort();
    assert_eq!(ids, ["barber", "barber-copy", "union-of-powerset"]);
    let by_id = |id: &str| exported.iter().find(|t| t.id == id).unwrap().clone();
    for demo in demo_tasks() {
        let got = by_id(&demo.id);
        assert_eq!((got.goal, got.lemmas, got.symbols), (demo.goal, demo.lemmas, demo.symbols));
    }

    // an array imports into a fresh store
    let fresh = dir.path().join("fresh");
    let (code, out, _) = easyprove(&["--data", fresh.to_str().unwrap(), "tasks-import", export.to_str().unwrap()]);
    assert_eq!(code, OK);
    assert_eq!(out.lines().count(), 3);

    let (code, out, _) = easyprove(&["--data", data, "user-add", "tutor", "--password", "pw", "--role", "teacher"]);
    assert_eq!((code, out.as_str()), (OK, "tutor\n"));
    assert_eq!(easyprove(&["--data", data, "user-add", "tutor", "--password", "pw"]).0, USAGE);
}
