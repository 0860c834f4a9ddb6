mod support;

use axum::http::StatusCode;
use easyprove::demos::{barber_script, union_of_powerset_script};
use easyprove_server::view::ProofView;
use proptest::prelude::*;
use proptest::test_runner::TestRunner;
use serde_json::{json, Value};
use support::{allowed, runtime, service, Action, Api, Fixture, Who};

fn view(v: &Value) -> ProofView {
    serde_json::from_value(v["view"].clone()).unwrap()
}

#[tokio::test]
async fn barber_round_trip() {
    let api = Api::new(service());
    let alice = api.login("alice").await;
    let teacher = api.login("teacher").await;

    let (s, tasks) = api.call("GET", "/api/tasks", Some(&alice), None).await;
    assert_eq!(s, StatusCode::OK);
    let names: Vec<_> = tasks.as_array().unwrap().iter().map(|t| t["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["Barber paradox", "Union of powerset"]);

    let (s, sess) = api.call("POST", "/api/sessions", Some(&alice), Some(json!({ "taskId": "barber" }))).await;
    assert_eq!(s, StatusCode::OK, "{sess}");
    let id = sess["sessionId"].as_str().unwrap().to_string();
    let mut live = vec![view(&sess)];

    let (s, menu) = api.call("GET", &format!("/api/sessions/{id}/applicable?formula=1&path="), Some(&alice), None).await;
    assert_eq!(s, StatusCode::OK);
    let labels: Vec<_> = menu["steps"].as_array().unwrap().iter().map(|d| d["label"]["text"].as_str().unwrap()).collect();
    assert_eq!(&labels[..2], ["Prove a lemma", "Prove by contradiction"]);

    for r in &barber_script().steps {
        let (s, v) = api.call("POST", &format!("/api/sessions/{id}/steps"), Some(&alice), Some(serde_json::to_value(r).unwrap())).await;
        assert_eq!(s, StatusCode::OK, "{v}");
        live.push(view(&v));
    }
    assert!(live.last().unwrap().complete);
    let after_contradiction = &live[1];
    assert_eq!(after_contradiction.formulas[2].text, "⊥");
    assert!(after_contradiction.formulas[1].in_scope);

    let (s, saved) = api.call("POST", &format!("/api/sessions/{id}/save"), Some(&alice), None).await;
    assert_eq!(s, StatusCode::OK);
    let sol = saved["solutionId"].as_str().unwrap();
    let (s, loaded) = api.call("GET", &format!("/api/solutions/{sol}"), Some(&teacher), None).await;
    assert_eq!(s, StatusCode::OK);
    let views: Vec<ProofView> = serde_json::from_value(loaded["views"].clone()).unwrap();
    assert_eq!(views.len(), 5);
    assert_eq!(views, live);
    assert_eq!(loaded["script"], serde_json::to_value(barber_script()).unwrap());
}

#[tokio::test]
async fn toolbar_and_errors() {
    let api = Api::new(service());
    let alice = api.login("alice").await;
    let (_, sess) = api.call("POST", "/api/sessions", Some(&alice), Some(json!({ "taskId": "union-of-powerset" }))).await;
    let id = sess["sessionId"].as_str().unwrap().to_string();
    let steps = union_of_powerset_script().steps;
    for r in &steps[..2] {
        api.call("POST", &format!("/api/sessions/{id}/steps"), Some(&alice), Some(serde_json::to_value(r).unwrap())).await;
    }
    // goals 3 and 4 are open; 3 is active
    let (s, v) = api.call("POST", &format!("/api/sessions/{id}/active-goal"), Some(&alice), Some(json!({ "goal": 4 }))).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["view"]["activeGoal"], 4);
    let (s, v) = api.call("POST", &format!("/api/sessions/{id}/undo"), Some(&alice), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["view"]["activeGoal"], 3);
    assert_eq!(v["view"]["canRedo"], true);
    let (_, v) = api.call("POST", &format!("/api/sessions/{id}/redo"), Some(&alice), None).await;
    assert_eq!(v["view"]["activeGoal"], 4);
    let (s, v) = api.call("POST", &format!("/api/sessions/{id}/delete-last"), Some(&alice), Some(json!({ "goal": 2 }))).await;
    assert_eq!(s, StatusCode::OK, "{v}");
    assert_eq!(v["view"]["activeGoal"], 2);

    let bad = json!({ "kind": "ProveConjuncts", "target": 1 });
    let (s, v) = api.call("POST", &format!("/api/sessions/{id}/steps?lang=pl"), Some(&alice), Some(bad)).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"]["code"], "not_applicable");
    assert!(v["error"]["message"]["text"].as_str().unwrap().starts_with("Krok nie ma zastosowania"));

    // an assumption of another branch is visible but inert
    let (_, v) = api.call("GET", &format!("/api/sessions/{id}"), Some(&alice), None).await;
    assert_eq!(v["view"]["activeGoal"], 2);
    for r in &steps[..2] {
        api.call("POST", &format!("/api/sessions/{id}/steps"), Some(&alice), Some(serde_json::to_value(r).unwrap())).await;
    }
    for r in &steps[2..9] {
        let (s, v) = api.call("POST", &format!("/api/sessions/{id}/steps"), Some(&alice), Some(serde_json::to_value(r).unwrap())).await;
        assert_eq!(s, StatusCode::OK, "{v}");
    }
    let (_, v) = api.call("POST", &format!("/api/sessions/{id}/active-goal"), Some(&alice), Some(json!({ "goal": 6 }))).await;
    let out: Vec<u64> = v["view"]["formulas"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|f| f["marker"] == "gray-star")
        .map(|f| f["number"].as_u64().unwrap())
        .collect();
    assert!(!out.is_empty());
    let (s, v) = api
        .call("GET", &format!("/api/sessions/{id}/applicable?formula={}&path=", out[0]), Some(&alice), None)
        .await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"]["code"], "out_of_scope");
    let (s, v) = api
        .call("GET", &format!("/api/sessions/{id}/applicable?formula=6&path=0"), Some(&alice), None)
        .await;
    assert_eq!(s, StatusCode::OK, "{v}");
}

#[tokio::test]
async fn task_creation_and_locale() {
    let api = Api::new(service());
    let teacher = api.login("teacher").await;
    let draft = json!({
        "id": "", "name": "Barber", "goal": "\\neg \\exists A \\forall B (shaves(A,B) \\iff \\neg shaves(B,B))",
        "symbols": [{ "name": "shaves", "arity": 2, "kind": "predicate" }], "lemmas": ["logic/*"]
    });
    let (s, t) = api.call("POST", "/api/tasks", Some(&teacher), Some(draft.clone())).await;
    assert_eq!(s, StatusCode::OK, "{t}");
    assert_eq!(t["goal"], "¬∃A∀B(shaves(A,B) ⇔ ¬shaves(B,B))");
    assert_eq!(t["author"], "teacher");
    let (s, got) = api.call("GET", &format!("/api/tasks/{}", t["id"].as_str().unwrap()), Some(&teacher), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(got, t);

    let mut broken = draft;
    broken["goal"] = json!("∀x (");
    let (s, v) = api.call("POST", "/api/tasks", Some(&teacher), Some(broken)).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(v["error"]["code"], "invalid_goal");

    let (s, v) = api.call("GET", "/api/tasks/nothing", Some(&teacher), None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert_eq!(v["error"]["message"]["key"], "error.not_found");

    let mut req = axum::http::Request::builder().uri("/api/tasks");
    req = req.header("accept-language", "pl-PL,pl;q=0.9");
    let resp = tower::ServiceExt::oneshot(api.router.clone(), req.body(axum::body::Body::empty()).unwrap()).await.unwrap();
    assert_eq!(resp.status(), StatusCode::UNAUTHORIZED);
    let bytes = http_body_util::BodyExt::collect(resp.into_body()).await.unwrap().to_bytes();
    let v: Value = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(v["error"]["message"]["text"], "Zaloguj się.");

    let (s, _) = api
        .call("POST", "/api/login", None, Some(json!({ "login": "teacher", "password": "nope" })))
        .await;
    assert_eq!(s, StatusCode::UNAUTHORIZED);
}

#[test]
fn authorization_matrix() {
    let rt = runtime();
    let fx = rt.block_on(Fixture::new());
    let mut runner = TestRunner::new(ProptestConfig::with_cases(200));
    let counter = std::cell::Cell::new(0u32);
    runner
        .run(&(who_strategy(), action_strategy()), |(who, action)| {
            counter.set(counter.get() + 1);
            let (status, v) = rt.block_on(fx.probe(who, action, counter.get()));
            let denied = status == StatusCode::UNAUTHORIZED || status == StatusCode::FORBIDDEN;
            prop_assert_eq!(!denied, allowed(who, action), "{:?} {:?}: {} {}", who, action, status, v);
            if who == Who::Anonymous {
                prop_assert_eq!(status, StatusCode::UNAUTHORIZED);
            }
            Ok(())
        })
        .unwrap();
}

fn who_strategy() -> impl Strategy<Value = Who> {
    proptest::sample::select(Who::ALL.to_vec())
}

fn action_strategy() -> impl Strategy<Value = Action> {
    proptest::sample::select(Action::ALL.to_vec())
}
