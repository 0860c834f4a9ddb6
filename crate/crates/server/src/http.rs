//! The JSON API over HTTP.

use std::collections::HashMap;
use std::sync::Arc;

use axum::extract::{FromRequestParts, Path as UrlPath, Query, State};
use axum::http::request::Parts;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use easyprove::{Path, ProofScript, StepRecord, TaskDef};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::catalog::Locale;
use crate::service::{LoadedSolution, Service, ServiceError, SessionSnapshot};
use crate::store::{UserAccount, UserRole};
use crate::view::{descriptor_view, ProofView};

pub type AppState = Arc<Service>;

pub fn router(service: Arc<Service>) -> Router {
    Router::new()
        .route("/api/login", post(login))
        .route("/api/users", post(create_user))
        .route("/api/tasks", get(list_tasks).post(create_task))
        .route("/api/tasks/{id}", get(get_task))
        .route("/api/sessions", post(start_session))
        .route("/api/sessions/{id}", get(get_session))
        .route("/api/sessions/{id}/steps", post(step))
        .route("/api/sessions/{id}/undo", post(undo))
        .route("/api/sessions/{id}/redo", post(redo))
        .route("/api/sessions/{id}/delete-last", post(delete_last))
        .route("/api/sessions/{id}/active-goal", post(active_goal))
        .route("/api/sessions/{id}/applicable", get(applicable))
        .route("/api/sessions/{id}/save", post(save))
        .route("/api/solutions/{id}", get(load_solution))
        .with_state(service)
}

/// Request locale: `?lang=`, then `Accept-Language`, then English.
pub struct Lang(pub Locale);

impl<S: Send + Sync> FromRequestParts<S> for Lang {
    type Rejection = std::convert::Infallible;

    async fn from_request_parts(parts: &mut Parts, _: &S) -> Result<Self, Self::Rejection> {
        let from_query = parts.uri.query().and_then(|q| {
            q.split('&').find_map(|kv| kv.strip_prefix("lang=")).and_then(|l| l.parse::<Locale>().ok())
        });
        let from_header = || {
            parts
                .headers
                .get(header::ACCEPT_LANGUAGE)
                .and_then(|h| h.to_str().ok())
                .and_then(Locale::from_accept_language)
        };
        Ok(Lang(from_query.or_else(from_header).unwrap_or_default()))
    }
}

pub struct ApiError(pub ServiceError, pub Locale);

impl ApiError {
    fn status(&self) -> StatusCode {
        match &self.0 {
            ServiceError::Unauthenticated | ServiceError::BadCredentials => StatusCode::UNAUTHORIZED,
            ServiceError::Unauthorized => StatusCode::FORBIDDEN,
            ServiceError::NotFound(_) => StatusCode::NOT_FOUND,
            ServiceError::Conflict(_) => StatusCode::CONFLICT,
            ServiceError::Storage(_) | ServiceError::Replay(_) => StatusCode::INTERNAL_SERVER_ERROR,
            ServiceError::BadRequest(_) | ServiceError::Task(_) => StatusCode::BAD_REQUEST,
            ServiceError::Kernel(_) => StatusCode::UNPROCESSABLE_ENTITY,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "error": { "code": self.0.code(), "message": self.0.message(self.1) } });
        (self.status(), Json(body)).into_response()
    }
}

type ApiResult = Result<Json<Value>, ApiError>;

/// The authenticated caller, from an `Authorization: Bearer` header.
pub struct Caller(pub UserAccount);

impl FromRequestParts<AppState> for Caller {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, state: &AppState) -> Result<Self, Self::Rejection> {
        let Lang(locale) = Lang::from_request_parts(parts, state).await.expect("infallible");
        let token = parts
            .headers
            .get(header::AUTHORIZATION)
            .and_then(|h| h.to_str().ok())
            .and_then(|h| h.strip_prefix("Bearer "))
            .ok_or(ApiError(ServiceError::Unauthenticated, locale))?;
        state.authenticate(token.trim()).map(Caller).map_err(|e| ApiError(e, locale))
    }
}

fn ok<T: Serialize>(value: T) -> ApiResult {
    Ok(Json(serde_json::to_value(value).expect("responses serialize")))
}

fn user_json(u: &UserAccount) -> Value {
    json!({ "id": u.id, "login": u.login, "role": u.role, "locale": u.locale })
}

fn session_json(s: &SessionSnapshot) -> Value {
    json!({ "sessionId": s.id, "owner": s.owner, "taskId": s.task, "view": s.view })
}

#[derive(Deserialize)]
struct LoginBody {
    login: String,
    password: String,
}

async fn login(State(svc): State<AppState>, Lang(l): Lang, Json(b): Json<LoginBody>) -> ApiResult {
    let (token, user) = svc.login(&b.login, &b.password).map_err(|e| ApiError(e, l))?;
    Ok(Json(json!({ "token": token, "user": user_json(&user) })))
}

#[derive(Deserialize)]
struct NewUser {
    login: String,
    password: String,
    role: UserRole,
    #[serde(default)]
    locale: Locale,
}

async fn create_user(State(svc): State<AppState>, Lang(l): Lang, Caller(c): Caller, Json(b): Json<NewUser>) -> ApiResult {
    let u = svc.create_user(&c, &b.login, &b.password, b.role, b.locale).map_err(|e| ApiError(e, l))?;
    Ok(Json(user_json(&u)))
}

async fn list_tasks(State(svc): State<AppState>, Lang(l): Lang, Caller(c): Caller) -> ApiResult {
    ok(svc.list_tasks(&c).map_err(|e| ApiError(e, l))?)
}

async fn create_task(State(svc): State<AppState>, Lang(l): Lang, Caller(c): Caller, Json(t): Json<TaskDef>) -> ApiResult {
    ok(svc.create_task(&c, t).map_err(|e| ApiError(e, l))?)
}

async fn get_task(State(svc): State<AppState>, Lang(l): Lang, Caller(c): Caller, UrlPath(id): UrlPath<String>) -> ApiResult {
    ok(svc.get_task(&c, &id).map_err(|e| ApiError(e, l))?)
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct NewSession {
    task_id: String,
}

async fn start_session(
    State(svc): State<AppState>,
    Lang(l): Lang,
    Caller(c): Caller,
    Json(b): Json<NewSession>,
) -> ApiResult {
    Ok(Json(session_json(&svc.start_session(&c, &b.task_id).map_err(|e| ApiError(e, l))?)))
}

async fn get_session(
    State(svc): State<AppState>,
    Lang(l): Lang,
    Caller(c): Caller,
    UrlPath(id): UrlPath<String>,
) -> ApiResult {
    Ok(Json(session_json(&svc.get_session(&c, &id).map_err(|e| ApiError(e, l))?)))
}

async fn step(
    State(svc): State<AppState>,
    Lang(l): Lang,
    Caller(c): Caller,
    UrlPath(id): UrlPath<String>,
    Json(r): Json<StepRecord>,
) -> ApiResult {
    Ok(Json(session_json(&svc.step(&c, &id, &r).map_err(|e| ApiError(e, l))?)))
}

async fn undo(State(svc): State<AppState>, Lang(l): Lang, Caller(c): Caller, UrlPath(id): UrlPath<String>) -> ApiResult {
    Ok(Json(session_json(&svc.undo(&c, &id).map_err(|e| ApiError(e, l))?)))
}

async fn redo(State(svc): State<AppState>, Lang(l): Lang, Caller(c): Caller, UrlPath(id): UrlPath<String>) -> ApiResult {
    Ok(Json(session_json(&svc.redo(&c, &id).map_err(|e| ApiError(e, l))?)))
}

#[derive(Deserialize, Default)]
struct GoalBody {
    goal: Option<u32>,
}

async fn delete_last(
    State(svc): State<AppState>,
    Lang(l): Lang,
    Caller(c): Caller,
    UrlPath(id): UrlPath<String>,
    body: Option<Json<GoalBody>>,
) -> ApiResult {
    let goal = body.and_then(|Json(b)| b.goal);
    Ok(Json(session_json(&svc.delete_last(&c, &id, goal).map_err(|e| ApiError(e, l))?)))
}

async fn active_goal(
    State(svc): State<AppState>,
    Lang(l): Lang,
    Caller(c): Caller,
    UrlPath(id): UrlPath<String>,
    Json(b): Json<GoalBody>,
) -> ApiResult {
    let goal = b.goal.ok_or_else(|| ApiError(ServiceError::BadRequest("goal is required".into()), l))?;
    Ok(Json(session_json(&svc.set_active_goal(&c, &id, goal).map_err(|e| ApiError(e, l))?)))
}

async fn applicable(
    State(svc): State<AppState>,
    Lang(l): Lang,
    Caller(c): Caller,
    UrlPath(id): UrlPath<String>,
    Query(q): Query<HashMap<String, String>>,
) -> ApiResult {
    let bad = |m: &str| ApiError(ServiceError::BadRequest(m.to_string()), l);
    let formula: u32 = q.get("formula").ok_or_else(|| bad("formula is required"))?.parse().map_err(|_| bad("formula"))?;
    let path: Path = q.get("path").map(|p| p.parse()).transpose().map_err(|_| bad("path"))?.unwrap_or_default();
    let menu = svc.applicable(&c, &id, formula, &path).map_err(|e| ApiError(e, l))?;
    let steps: Vec<_> = menu.iter().map(|d| descriptor_view(l, d)).collect();
    Ok(Json(json!({ "formula": formula, "path": path, "steps": steps })))
}

async fn save(State(svc): State<AppState>, Lang(l): Lang, Caller(c): Caller, UrlPath(id): UrlPath<String>) -> ApiResult {
    let s = svc.save_solution(&c, &id).map_err(|e| ApiError(e, l))?;
    Ok(Json(json!({ "solutionId": s.id, "taskId": s.task, "complete": s.complete, "savedAt": s.saved_at })))
}

/// Body of `GET /api/solutions/{id}`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SolutionBody {
    pub solution_id: String,
    pub owner: String,
    pub task_id: String,
    pub complete: bool,
    pub saved_at: i64,
    pub script: ProofScript,
    pub views: Vec<ProofView>,
}

impl From<LoadedSolution> for SolutionBody {
    fn from(l: LoadedSolution) -> Self {
        SolutionBody {
            solution_id: l.solution.id,
            owner: l.solution.owner,
            task_id: l.solution.task,
            complete: l.solution.complete,
            saved_at: l.solution.saved_at,
            script: l.script,
            views: l.views,
        }
    }
}

async fn load_solution(
    State(svc): State<AppState>,
    Lang(l): Lang,
    Caller(c): Caller,
    UrlPath(id): UrlPath<String>,
) -> ApiResult {
    ok(SolutionBody::from(svc.load_solution(&c, &id).map_err(|e| ApiError(e, l))?))
}

/// Serves the API on `port` until the process ends.
pub async fn serve(service: Arc<Service>, port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    axum::serve(listener, router(service)).await
}
