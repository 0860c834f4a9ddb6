//! Drives the JSON API in-process: log in, start a session on the barber
//! task, ask for the menu on the goal, submit the steps and save.
//!
//!     cargo run -p easyprove-server --example http_session

use std::sync::Arc;

use axum::body::Body;
use axum::http::Request;
use easyprove::demos::{barber_script, demo_tasks};
use easyprove_server::http::router;
use easyprove_server::{Locale, RedbStore, Service, UserRole};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(app: &axum::Router, method: &str, uri: &str, token: Option<&str>, body: Option<Value>) -> Value {
    let mut req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    if let Some(t) = token {
        req = req.header("authorization", format!("Bearer {t}"));
    }
    let body = body.map(|b| Body::from(b.to_string())).unwrap_or_default();
    let resp = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    println!("{method} {uri} -> {status}");
    serde_json::from_slice(&bytes).unwrap_or(Value::Null)
}

#[tokio::main(flavor = "current_thread")]
async fn main() {
    let svc = Service::new(Arc::new(RedbStore::in_memory().unwrap()));
    svc.import_tasks(demo_tasks()).unwrap();
    svc.register("ada", "pw", UserRole::Student, Locale::En).unwrap();
    let app = router(Arc::new(svc));

    let login = call(&app, "POST", "/api/login", None, Some(json!({ "login": "ada", "password": "pw" }))).await;
    let token = login["token"].as_str().unwrap();
    let session = call(&app, "POST", "/api/sessions", Some(token), Some(json!({ "taskId": "barber" }))).await;
    let id = session["sessionId"].as_str().unwrap().to_string();

    let menu = call(&app, "GET", &format!("/api/sessions/{id}/applicable?formula=1&lang=pl"), Some(token), None).await;
    for d in menu["steps"].as_array().unwrap() {
        println!("    {}: {}", d["label"]["text"], d["effect"]["text"]);
    }

    for r in barber_script().steps {
        let v = call(&app, "POST", &format!("/api/sessions/{id}/steps"), Some(token), Some(serde_json::to_value(&r).unwrap())).await;
        println!("    open goals {}", v["view"]["sidebar"]["goals"]);
    }
    let saved = call(&app, "POST", &format!("/api/sessions/{id}/save"), Some(token), None).await;
    println!("{saved:#}");

    let err = call(&app, "POST", &format!("/api/sessions/{id}/redo"), Some(token), None).await;
    println!("{err:#}");
}
