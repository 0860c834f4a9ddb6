//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod support;

use std::time::{Duration, Instant};

use axum::http::StatusCode;
use easyprove::demos::{barber_case_split_script, barber_script, barber_task, union_of_powerset_script, union_of_powerset_task};
use easyprove::simplify::simplify;
use easyprove::theory::builtin_theories;
use easyprove::{compile_lemma, parse, parse_formula, print, read_formula, Context, Expr, LemmaIndex, Path, Pattern, Signature};
use easyprove_server::catalog::{missing_keys, render, required_keys};
use easyprove_server::view::{descriptor_view, ProofView};
use easyprove_server::Locale;
use easyprove_testkit::checks::{discipline_case, index_queries, round_trip_case, simplifier_case, soundness_case, SoundnessStats};
use easyprove_testkit::gen::{rng, test_signature};
use serde_json::{json, Value};
use support::{allowed, runtime, service, Action, Api, Fixture, Who};

type Outcome = Result<String, String>;

fn barber() -> Outcome {
    let task = barber_task();
    let mut notes = Vec::new();
    for (name, script) in [("contradiction pair", barber_script()), ("case split", barber_case_split_script())] {
        if script.steps.len() > 6 {
            return Err(format!("{name}: {} steps", script.steps.len()));
        }
        let st = task.replay(&script).map_err(|e| format!("{name}: {e}"))?;
        if !st.is_complete() {
            return Err(format!("{name}: open goals {:?}", st.open_goals()));
        }
        notes.push(format!("{name} {} steps", script.steps.len()));
    }
    Ok(notes.join(", "))
}

fn union_of_powerset() -> Outcome {
    let script = union_of_powerset_script();
    let opening: Vec<_> = script.steps.iter().take(5).map(|r| (r.kind.as_str(), r.lemma.as_deref())).collect();
    let expected = [
        ("RewriteGoal", Some("zf/eq-two-inclusions")),
        ("ProveConjuncts", None),
        ("RewriteGoal", Some("zf/subseteq-def")),
        ("SetActiveGoal", None),
        ("RewriteGoal", Some("zf/subseteq-def")),
    ];
    if opening != expected {
        return Err(format!("opening {opening:?}"));
    }
    if script.steps.len() > 30 {
        return Err(format!("{} steps", script.steps.len()));
    }
    let st = union_of_powerset_task().replay(&script).map_err(|e| e.to_string())?;
    if !st.is_complete() {
        return Err(format!("open goals {:?}", st.open_goals()));
    }
    Ok(format!("{} steps", script.steps.len()))
}

fn read(s: &str) -> Expr {
    parse_formula(s, &Signature::builtin(), &Context::new()).expect("example parses")
}

fn simplifier() -> Outcome {
    for (input, output) in [("φ ∨ ⊤", "⊤"), ("φ ∧ ⊤", "φ")] {
        let got = print(&simplify(&read(input)));
        if got != output {
            return Err(format!("{input} ↦ {got}"));
        }
    }
    let mut r = rng(0xA3);
    for i in 0..10_000 {
        simplifier_case(&mut r).map_err(|e| format!("case {i}: {e}"))?;
    }
    Ok("10000 formulas".into())
}

fn lemma_index() -> Outcome {
    let patterns: Vec<Pattern> = builtin_theories()
        .iter()
        .flat_map(|t| &t.lemmas)
        .flat_map(|l| compile_lemma(&l.statement, &l.id).expect("library lemmas compile"))
        .collect();
    let index = LemmaIndex::from_patterns(patterns);
    let query = read("⋃(𝒫(A)) ⊆ A");
    let hits = index.lookup(&query);
    let hit = hits.iter().find(|m| m.pattern.lemma_id == "zf/subseteq-def").ok_or("inclusion definition not found")?;
    let bindings: Vec<_> = hit.bindings.iter().map(|(v, e)| format!("{v}↦{e}")).collect();
    if bindings != ["A↦⋃(𝒫(A))", "B↦A"] {
        return Err(format!("bindings {bindings:?}"));
    }
    let sig = test_signature();
    let mut r = rng(0xA4);
    for i in 0..1000 {
        index_queries(&mut r, &sig, 1).map_err(|e| format!("pair {i}: {e}"))?;
    }
    Ok("1000 pairs".into())
}

fn soundness() -> Outcome {
    let mut stats = SoundnessStats::default();
    let mut r = rng(0xA5);
    for i in 0..500 {
        soundness_case(&mut r, &mut stats).map_err(|e| format!("case {i}: {e}"))?;
    }
    Ok(format!(
        "{} proofs, {}/{} mutants rejected, {}/{} walks completed, no non-tautology accepted",
        stats.proved, stats.mutants_rejected, stats.mutants, stats.walk_completions, stats.walks
    ))
}

fn round_trips() -> Outcome {
    let sig = test_signature();
    let mut r = rng(0xA6);
    for i in 0..10_000 {
        round_trip_case(&mut r, &sig).map_err(|e| format!("case {i}: {e}"))?;
    }
    parse("{{a}} ∪ {a}", &Signature::builtin(), &Context::new()).map_err(|e| e.to_string())?;
    let barber_sig = barber_task().signature().map_err(|e| e.to_string())?;
    let typed = read_formula("¬∃A∀B(shaves(A,B) ⇔ ¬shaves(B,B))", &barber_sig).map_err(|e| e.to_string())?;
    let pasted = read_formula("\\neg \\exists A \\forall B (shaves(A,B) \\iff \\neg shaves(B,B))", &barber_sig)
        .map_err(|e| e.to_string())?;
    if typed != pasted {
        return Err("pasted barber formula differs".into());
    }
    Ok("10000 expressions".into())
}

fn discipline() -> Outcome {
    let mut r = rng(0xA7);
    for i in 0..300 {
        discipline_case(&mut r, 40).map_err(|e| format!("case {i}: {e}"))?;
    }
    Ok("300 sessions of 40 moves".into())
}

async fn service_round_trip() -> Outcome {
    let api = Api::new(service());
    let teacher = api.login("teacher").await;
    let alice = api.login("alice").await;
    let draft = json!({
        "id": "", "name": "Barber paradox",
        "goal": "¬∃A∀B(shaves(A,B) ⇔ ¬shaves(B,B))",
        "symbols": [{ "name": "shaves", "arity": 2, "kind": "predicate" }],
        "lemmas": ["logic/*"]
    });
    let (s, task) = api.call("POST", "/api/tasks", Some(&teacher), Some(draft)).await;
    if s != StatusCode::OK {
        return Err(format!("create task: {s} {task}"));
    }
    let task_id = task["id"].as_str().unwrap();
    let (s, sess) = api.call("POST", "/api/sessions", Some(&alice), Some(json!({ "taskId": task_id }))).await;
    if s != StatusCode::OK {
        return Err(format!("start session: {s} {sess}"));
    }
    let id = sess["sessionId"].as_str().unwrap().to_string();
    let view = |v: &Value| serde_json::from_value::<ProofView>(v["view"].clone()).unwrap();
    let mut live = vec![view(&sess)];
    for r in &barber_script().steps {
        let (s, v) = api.call("POST", &format!("/api/sessions/{id}/steps"), Some(&alice), Some(serde_json::to_value(r).unwrap())).await;
        if s != StatusCode::OK {
            return Err(format!("step {}: {s} {v}", r.kind));
        }
        live.push(view(&v));
    }
    if !live.last().unwrap().complete {
        return Err("live session is not complete".into());
    }
    let (_, saved) = api.call("POST", &format!("/api/sessions/{id}/save"), Some(&alice), None).await;
    let (s, loaded) = api.call("GET", &format!("/api/solutions/{}", saved["solutionId"].as_str().unwrap()), Some(&teacher), None).await;
    if s != StatusCode::OK {
        return Err(format!("teacher load: {s} {loaded}"));
    }
    let replayed: Vec<ProofView> = serde_json::from_value(loaded["views"].clone()).map_err(|e| e.to_string())?;
    if replayed != live {
        return Err("replayed views differ from the live ones".into());
    }

    // authorization matrix: every cell, then random cells
    let fx = Fixture::new().await;
    let mut n = 0;
    let mut cells: Vec<(Who, Action)> = Who::ALL.iter().flat_map(|w| Action::ALL.iter().map(|a| (*w, *a))).collect();
    let mut r = rng(0xA8);
    for _ in 0..200 {
        use rand::seq::IndexedRandom;
        cells.push((*Who::ALL.choose(&mut r).unwrap(), *Action::ALL.choose(&mut r).unwrap()));
    }
    for (who, action) in cells {
        n += 1;
        let (status, v) = fx.probe(who, action, n).await;
        let denied = status == StatusCode::UNAUTHORIZED || status == StatusCode::FORBIDDEN;
        if denied == allowed(who, action) {
            return Err(format!("{who:?} {action:?}: {status} {v}"));
        }
    }

    // catalogs
    let keys = required_keys();
    for l in Locale::ALL {
        let missing = missing_keys(l);
        if !missing.is_empty() {
            return Err(format!("{} catalog lacks {missing:?}", l.as_str()));
        }
        for k in &keys {
            let args: Vec<String> = (0..4).map(|i| format!("<{i}>")).collect();
            let m = render(l, k, &args);
            if m.text == *k || (0..4).any(|i| m.text.contains(&format!("{{{i}}}"))) {
                return Err(format!("{}: {k} renders as {:?}", l.as_str(), m.text));
            }
        }
        let st = barber_task().start().unwrap();
        for d in st.applicable_steps(1, &Path::root()).map_err(|e| e.to_string())? {
            let v = descriptor_view(l, &d);
            if v.label.text == v.label.key || v.effect.text == v.effect.key {
                return Err(format!("{}: unrendered menu entry {:?}", l.as_str(), v.label.key));
            }
        }
    }
    Ok(format!("{} views match, {n} authorization probes, {} catalog keys in en and pl", live.len(), keys.len()))
}

fn main() {
    let rt = runtime();
    let criteria: Vec<(&str, &str, Duration, Box<dyn Fn() -> Outcome>)> = vec![
        ("A1", "barber paradox", Duration::from_secs(1), Box::new(barber)),
        ("A2", "union of powerset", Duration::from_secs(1), Box::new(union_of_powerset)),
        ("A3", "simplifier oracle", Duration::from_secs(30), Box::new(simplifier)),
        ("A4", "lemma index differential", Duration::from_secs(10), Box::new(lemma_index)),
        ("A5", "soundness harness", Duration::from_secs(60), Box::new(soundness)),
        ("A6", "parser round trip", Duration::MAX, Box::new(round_trips)),
        ("A7", "kernel state discipline", Duration::MAX, Box::new(discipline)),
        ("A8", "service round trip", Duration::MAX, Box::new(move || rt.block_on(service_round_trip()))),
    ];
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        let t = Instant::now();
        let outcome = run();
        let took = t.elapsed();
        let limit = if budget == Duration::MAX { String::new() } else { format!(" (limit {:.0?})", budget) };
        let outcome = match outcome {
            Ok(_) if took > budget => Err(format!("took {took:.2?}")),
            o => o,
        };
        match outcome {
            Ok(detail) => println!("{id} PASS {name}: {detail} in {took:.2?}{limit}"),
            Err(why) => {
                failed += 1;
                println!("{id} FAIL {name}: {why} in {took:.2?}{limit}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
