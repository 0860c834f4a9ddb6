#![allow(dead_code)]

use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use easyprove::demos::demo_tasks;
use easyprove_server::http::router;
use easyprove_server::{Locale, RedbStore, Service, UserRole};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

pub const PASSWORD: &str = "correct horse";

/// A service over an in-memory store with the demo tasks and three
/// accounts: `teacher`, `alice` and `bob` (students).
pub fn service() -> Arc<Service> {
    let svc = Service::new(Arc::new(RedbStore::in_memory().unwrap()));
    svc.import_tasks(demo_tasks()).unwrap();
    svc.register("teacher", PASSWORD, UserRole::Teacher, Locale::En).unwrap();
    svc.register("alice", PASSWORD, UserRole::Student, Locale::En).unwrap();
    svc.register("bob", PASSWORD, UserRole::Student, Locale::Pl).unwrap();
    Arc::new(svc)
}

pub struct Api {
    pub router: Router,
}

impl Api {
    pub fn new(svc: Arc<Service>) -> Api {
        Api { router: router(svc) }
    }

    pub async fn call(&self, method: &str, uri: &str, token: Option<&str>, body: Option<Value>) -> (StatusCode, Value) {
        let mut req = Request::builder().method(method).uri(uri);
        if let Some(t) = token {
            req = req.header("authorization", format!("Bearer {t}"));
        }
        let req = match body {
            Some(b) => req.header("content-type", "application/json").body(Body::from(b.to_string())),
            None => req.body(Body::empty()),
        }
        .unwrap();
        let resp = self.router.clone().oneshot(req).await.unwrap();
        let status = resp.status();
        let bytes = resp.into_body().collect().await.unwrap().to_bytes();
        let value = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
        (status, value)
    }

    pub async fn login(&self, login: &str) -> String {
        let (status, v) = self
            .call("POST", "/api/login", None, Some(serde_json::json!({ "login": login, "password": PASSWORD })))
            .await;
        assert_eq!(status, StatusCode::OK, "{v}");
        v["token"].as_str().unwrap().to_string()
    }
}

pub fn runtime() -> tokio::runtime::Runtime {
    tokio::runtime::Builder::new_current_thread().enable_all().build().unwrap()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Who {
    Anonymous,
    Teacher,
    Owner,
    Other,
}

impl Who {
    pub const ALL: [Who; 4] = [Who::Anonymous, Who::Teacher, Who::Owner, Who::Other];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    ListTasks,
    GetTask,
    CreateTask,
    CreateUser,
    GetSession,
    Applicable,
    Step,
    Undo,
    Save,
    LoadSolution,
}

impl Action {
    pub const ALL: [Action; 10] = [
        Action::ListTasks,
        Action::GetTask,
        Action::CreateTask,
        Action::CreateUser,
        Action::GetSession,
        Action::Applicable,
        Action::Step,
        Action::Undo,
        Action::Save,
        Action::LoadSolution,
    ];
}

/// Expected outcome of the authorization matrix.
pub fn allowed(who: Who, action: Action) -> bool {
    use Action::*;
    match (who, action) {
        (Who::Anonymous, _) => false,
        (_, ListTasks | GetTask) => true,
        (Who::Teacher, CreateTask | CreateUser | GetSession | Applicable | LoadSolution) => true,
        (Who::Owner, GetSession | Applicable | Step | Undo | Save | LoadSolution) => true,
        _ => false,
    }
}

/// A session and a saved solution of `alice`, plus tokens of the
/// teacher, alice and bob.
pub struct Fixture {
    pub api: Api,
    pub tokens: [String; 3],
    pub session: String,
    pub solution: String,
}

impl Fixture {
    pub async fn new() -> Fixture {
        let api = Api::new(service());
        let teacher = api.login("teacher").await;
        let alice = api.login("alice").await;
        let bob = api.login("bob").await;
        let (_, s) = api.call("POST", "/api/sessions", Some(&alice), Some(json!({ "taskId": "barber" }))).await;
        let session = s["sessionId"].as_str().unwrap().to_string();
        let (_, sol) = api.call("POST", &format!("/api/sessions/{session}/save"), Some(&alice), None).await;
        let solution = sol["solutionId"].as_str().unwrap().to_string();
        Fixture { api, tokens: [teacher, alice, bob], session, solution }
    }

    /// Performs `action` as `who`; `n` keeps created names unique.
    pub async fn probe(&self, who: Who, action: Action, n: u32) -> (StatusCode, Value) {
        let token = match who {
            Who::Anonymous => None,
            Who::Teacher => Some(self.tokens[0].as_str()),
            Who::Owner => Some(self.tokens[1].as_str()),
            Who::Other => Some(self.tokens[2].as_str()),
        };
        let session = &self.session;
        let (method, uri, body) = match action {
            Action::ListTasks => ("GET", "/api/tasks".to_string(), None),
            Action::GetTask => ("GET", "/api/tasks/barber".into(), None),
            Action::CreateTask => {
                ("POST", "/api/tasks".into(), Some(json!({ "id": format!("t{n}"), "name": "T", "goal": "p ⇒ p", "lemmas": [] })))
            }
            Action::CreateUser => {
                ("POST", "/api/users".into(), Some(json!({ "login": format!("u{n}"), "password": "pw", "role": "student" })))
            }
            Action::GetSession => ("GET", format!("/api/sessions/{session}"), None),
            Action::Applicable => ("GET", format!("/api/sessions/{session}/applicable?formula=1"), None),
            Action::Step => {
                ("POST", format!("/api/sessions/{session}/steps"), Some(json!({ "kind": "SetActiveGoal", "target": 1 })))
            }
            Action::Undo => ("POST", format!("/api/sessions/{session}/undo"), None),
            Action::Save => ("POST", format!("/api/sessions/{session}/save"), None),
            Action::LoadSolution => ("GET", format!("/api/solutions/{}", self.solution), None),
        };
        self.api.call(method, &uri, token, body).await
    }
}
