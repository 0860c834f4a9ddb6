//! The service model: accounts, tasks, sessions holding live proof states,
//! and stored solutions. Transport-independent; the HTTP layer and the CLI
//! both call into it.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{SystemTime, UNIX_EPOCH};

use easyprove::kernel::{FormulaNo, KernelError, ReplayError};
use easyprove::{Path, ProofScript, ProofState, StepDescriptor, StepRecord, TaskDef, TaskError};
use thiserror::Error;

use crate::auth::{hash_password, new_token, random_hex, verify_password};
use crate::catalog::{render, Locale, Message};
use crate::store::{Repository, SessionRecord, Solution, StoreError, UserAccount, UserRole};
use crate::view::{kernel_message, ProofView};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ServiceError {
    #[error("not logged in")]
    Unauthenticated,
    #[error("wrong login or password")]
    BadCredentials,
    #[error("not allowed")]
    Unauthorized,
    #[error("{0} not found")]
    NotFound(String),
    #[error("bad request: {0}")]
    BadRequest(String),
    #[error("{0} already exists")]
    Conflict(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Task(TaskError),
    #[error("stored proof cannot be replayed: {0}")]
    Replay(String),
    #[error("storage: {0}")]
    Storage(String),
}

impl From<TaskError> for ServiceError {
    fn from(e: TaskError) -> Self {
        match e {
            TaskError::Kernel(k) => ServiceError::Kernel(k),
            other => ServiceError::Task(other),
        }
    }
}

impl From<StoreError> for ServiceError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::Conflict(what) => ServiceError::Conflict(what),
            StoreError::Corrupt(what) => ServiceError::Replay(what),
            StoreError::Backend(msg) => ServiceError::Storage(msg),
        }
    }
}

pub fn replay_detail(locale: Locale, e: &ReplayError) -> String {
    format!("{} {}: {}", step_word(locale), e.index + 1, kernel_message(locale, &e.error).text)
}

fn step_word(locale: Locale) -> &'static str {
    match locale {
        Locale::En => "step",
        Locale::Pl => "krok",
    }
}

impl ServiceError {
    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::Unauthenticated => "unauthenticated",
            ServiceError::BadCredentials => "bad_credentials",
            ServiceError::Unauthorized => "unauthorized",
            ServiceError::NotFound(_) => "not_found",
            ServiceError::BadRequest(_) => "bad_request",
            ServiceError::Conflict(_) => "conflict",
            ServiceError::Kernel(e) => e.code(),
            ServiceError::Task(e) => e.code(),
            ServiceError::Replay(_) => "replay_error",
            ServiceError::Storage(_) => "storage",
        }
    }

    pub fn message(&self, locale: Locale) -> Message {
        let key = format!("error.{}", self.code());
        let args = match self {
            ServiceError::Kernel(e) => return kernel_message(locale, e),
            ServiceError::Task(TaskError::Replay(r)) => vec![replay_detail(locale, r)],
            ServiceError::Task(TaskError::InvalidGoal(e)) => vec![e.to_string()],
            ServiceError::Task(TaskError::UnknownLemma(id)) => vec![id.clone()],
            ServiceError::Task(TaskError::BadSymbol(e)) => vec![e.to_string()],
            ServiceError::Task(TaskError::TaskMismatch { found, .. }) => vec![found.clone()],
            ServiceError::Task(TaskError::Version(v)) => vec![v.to_string()],
            ServiceError::Task(_) => vec![],
            ServiceError::NotFound(s)
            | ServiceError::BadRequest(s)
            | ServiceError::Conflict(s)
            | ServiceError::Replay(s)
            | ServiceError::Storage(s) => vec![s.clone()],
            ServiceError::Unauthenticated | ServiceError::BadCredentials | ServiceError::Unauthorized => vec![],
        };
        render(locale, &key, &args)
    }
}

pub type Result<T> = std::result::Result<T, ServiceError>;

fn now() -> i64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs() as i64).unwrap_or(0)
}

struct Live {
    record: SessionRecord,
    state: ProofState,
}

/// A session as returned to its viewers.
#[derive(Debug, Clone, PartialEq)]
pub struct SessionSnapshot {
    pub id: String,
    pub owner: String,
    pub task: String,
    pub view: ProofView,
}

/// A stored solution with the views of its replay, one per prefix of the
/// script (the first shows the untouched task).
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedSolution {
    pub solution: Solution,
    pub script: ProofScript,
    pub views: Vec<ProofView>,
}

pub struct Service {
    store: Arc<dyn Repository>,
    tokens: Mutex<HashMap<String, String>>,
    live: Mutex<HashMap<String, Arc<Mutex<Live>>>>,
}

impl Service {
    pub fn new(store: Arc<dyn Repository>) -> Self {
        Service { store, tokens: Mutex::default(), live: Mutex::default() }
    }

    pub fn store(&self) -> &Arc<dyn Repository> {
        &self.store
    }

    // accounts

    /// Creates an account without an authorization check; for setup tools.
    pub fn register(&self, login: &str, password: &str, role: UserRole, locale: Locale) -> Result<UserAccount> {
        if login.trim().is_empty() || password.is_empty() {
            return Err(ServiceError::BadRequest("login and password are required".into()));
        }
        let user = UserAccount {
            id: random_hex(8),
            login: login.to_string(),
            role,
            password_hash: hash_password(password),
            locale,
        };
        self.store.insert_user(&user)?;
        Ok(user)
    }

    pub fn create_user(
        &self,
        caller: &UserAccount,
        login: &str,
        password: &str,
        role: UserRole,
        locale: Locale,
    ) -> Result<UserAccount> {
        if caller.role != UserRole::Teacher {
            return Err(ServiceError::Unauthorized);
        }
        self.register(login, password, role, locale)
    }

    pub fn login(&self, login: &str, password: &str) -> Result<(String, UserAccount)> {
        let user = self.store.get_user(login)?.ok_or(ServiceError::BadCredentials)?;
        if !verify_password(password, &user.password_hash) {
            return Err(ServiceError::BadCredentials);
        }
        let token = new_token();
        self.tokens.lock().expect("token table").insert(token.clone(), user.login.clone());
        Ok((token, user))
    }

    pub fn authenticate(&self, token: &str) -> Result<UserAccount> {
        let login = self.tokens.lock().expect("token table").get(token).cloned().ok_or(ServiceError::Unauthenticated)?;
        self.store.get_user(&login)?.ok_or(ServiceError::Unauthenticated)
    }

    // tasks

    pub fn create_task(&self, caller: &UserAccount, mut draft: TaskDef) -> Result<TaskDef> {
        if caller.role != UserRole::Teacher {
            return Err(ServiceError::Unauthorized);
        }
        draft.validate()?;
        if draft.id.trim().is_empty() {
            draft.id = self.fresh_task_id(&draft.name)?;
        }
        draft.author = caller.login.clone();
        draft.created_at = now();
        self.store.insert_task(&draft)?;
        Ok(draft)
    }

    fn fresh_task_id(&self, name: &str) -> Result<String> {
        let mut slug: String = name
            .chars()
            .map(|c| if c.is_alphanumeric() { c.to_ascii_lowercase() } else { '-' })
            .collect::<String>()
            .split('-')
            .filter(|s| !s.is_empty())
            .collect::<Vec<_>>()
            .join("-");
        if slug.is_empty() {
            slug = "task".into();
        }
        let mut id = slug.clone();
        let mut k = 2;
        while self.store.get_task(&id)?.is_some() {
            id = format!("{slug}-{k}");
            k += 1;
        }
        Ok(id)
    }

    /// Stores tasks as given after validation, replacing same-id tasks.
    pub fn import_tasks(&self, tasks: Vec<TaskDef>) -> Result<Vec<TaskDef>> {
        let mut out = Vec::new();
        for mut t in tasks {
            t.validate()?;
            if t.id.trim().is_empty() {
                t.id = self.fresh_task_id(&t.name)?;
            }
            self.store.put_task(&t)?;
            out.push(t);
        }
        Ok(out)
    }

    pub fn list_tasks(&self, _caller: &UserAccount) -> Result<Vec<TaskDef>> {
        Ok(self.store.list_tasks()?)
    }

    pub fn get_task(&self, _caller: &UserAccount, id: &str) -> Result<TaskDef> {
        self.task(id)
    }

    fn task(&self, id: &str) -> Result<TaskDef> {
        self.store.get_task(id)?.ok_or_else(|| ServiceError::NotFound(format!("task {id}")))
    }

    // sessions

    pub fn start_session(&self, caller: &UserAccount, task_id: &str) -> Result<SessionSnapshot> {
        let task = self.task(task_id)?;
        let state = task.start()?;
        let record = SessionRecord {
            id: random_hex(12),
            owner: caller.login.clone(),
            task: task.id.clone(),
            script: state.script(&task.id),
            modified: now(),
        };
        self.store.put_session(&record)?;
        let snap = snapshot(&record, &state);
        self.live.lock().expect("session table").insert(record.id.clone(), Arc::new(Mutex::new(Live { record, state })));
        Ok(snap)
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Live>>> {
        let mut live = self.live.lock().expect("session table");
        if let Some(s) = live.get(id) {
            return Ok(s.clone());
        }
        let record = self.store.get_session(id)?.ok_or_else(|| ServiceError::NotFound(format!("session {id}")))?;
        let task = self.task(&record.task)?;
        let state = task.replay(&record.script).map_err(|e| ServiceError::Replay(e.to_string()))?;
        let s = Arc::new(Mutex::new(Live { record, state }));
        live.insert(id.to_string(), s.clone());
        Ok(s)
    }

    fn read<T>(&self, caller: &UserAccount, id: &str, f: impl FnOnce(&Live) -> Result<T>) -> Result<T> {
        let s = self.session(id)?;
        let live = s.lock().expect("session lock");
        if live.record.owner != caller.login && caller.role != UserRole::Teacher {
            return Err(ServiceError::Unauthorized);
        }
        f(&live)
    }

    /// Runs a mutation as the session's single writer and persists the
    /// resulting script.
    fn write(
        &self,
        caller: &UserAccount,
        id: &str,
        f: impl FnOnce(&mut ProofState) -> std::result::Result<(), KernelError>,
    ) -> Result<SessionSnapshot> {
        let s = self.session(id)?;
        let mut live = s.lock().expect("session lock");
        if live.record.owner != caller.login {
            return Err(ServiceError::Unauthorized);
        }
        let mut next = live.state.clone();
        f(&mut next)?;
        let mut record = live.record.clone();
        record.script = next.script(&record.task);
        record.modified = now();
        self.store.put_session(&record)?;
        live.record = record;
        live.state = next;
        Ok(snapshot(&live.record, &live.state))
    }

    pub fn get_session(&self, caller: &UserAccount, id: &str) -> Result<SessionSnapshot> {
        self.read(caller, id, |l| Ok(snapshot(&l.record, &l.state)))
    }

    pub fn step(&self, caller: &UserAccount, id: &str, record: &StepRecord) -> Result<SessionSnapshot> {
        self.write(caller, id, |st| st.apply_record(record))
    }

    pub fn undo(&self, caller: &UserAccount, id: &str) -> Result<SessionSnapshot> {
        self.write(caller, id, |st| st.undo())
    }

    pub fn redo(&self, caller: &UserAccount, id: &str) -> Result<SessionSnapshot> {
        self.write(caller, id, |st| st.redo())
    }

    /// Deletes the last step on `goal`, or on the active goal.
    pub fn delete_last(&self, caller: &UserAccount, id: &str, goal: Option<FormulaNo>) -> Result<SessionSnapshot> {
        self.write(caller, id, |st| {
            let g = goal.or(st.active_goal()).ok_or(KernelError::NoActiveGoal)?;
            st.delete_last(g)
        })
    }

    pub fn set_active_goal(&self, caller: &UserAccount, id: &str, goal: FormulaNo) -> Result<SessionSnapshot> {
        self.write(caller, id, |st| st.set_active_goal(goal))
    }

    pub fn applicable(
        &self,
        caller: &UserAccount,
        id: &str,
        formula: FormulaNo,
        path: &Path,
    ) -> Result<Vec<StepDescriptor>> {
        self.read(caller, id, |l| Ok(l.state.applicable_steps(formula, path)?))
    }

    // solutions

    pub fn save_solution(&self, caller: &UserAccount, id: &str) -> Result<Solution> {
        let (record, complete) = self.read(caller, id, |l| Ok((l.record.clone(), l.state.is_complete())))?;
        if record.owner != caller.login {
            return Err(ServiceError::Unauthorized);
        }
        let solution = Solution {
            id: random_hex(12),
            owner: record.owner,
            task: record.task,
            saved_at: now(),
            complete,
            script: record.script.to_json(),
        };
        self.store.insert_solution(&solution)?;
        Ok(solution)
    }

    pub fn load_solution(&self, caller: &UserAccount, id: &str) -> Result<LoadedSolution> {
        let solution =
            self.store.get_solution(id)?.ok_or_else(|| ServiceError::NotFound(format!("solution {id}")))?;
        if solution.owner != caller.login && caller.role != UserRole::Teacher {
            return Err(ServiceError::Unauthorized);
        }
        let script = ProofScript::from_json(&solution.script).map_err(|e| ServiceError::Replay(e.to_string()))?;
        let task = self.task(&solution.task)?;
        task.check_script(&script)?;
        let mut state = task.start()?;
        let mut views = vec![ProofView::of(&state)];
        for (index, r) in script.steps.iter().enumerate() {
            state
                .apply_record(r)
                .map_err(|error| ServiceError::Replay(ReplayError { index, error }.to_string()))?;
            views.push(ProofView::of(&state));
        }
        Ok(LoadedSolution { solution, script, views })
    }
}

fn snapshot(record: &SessionRecord, state: &ProofState) -> SessionSnapshot {
    SessionSnapshot {
        id: record.id.clone(),
        owner: record.owner.clone(),
        task: record.task.clone(),
        view: ProofView::of(state),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::RedbStore;
    use easyprove::demos::{barber_script, barber_task};

    fn setup() -> (Service, UserAccount, UserAccount) {
        let svc = Service::new(Arc::new(RedbStore::in_memory().unwrap()));
        svc.import_tasks(vec![barber_task()]).unwrap();
        let t = svc.register("teacher", "pw", UserRole::Teacher, Locale::En).unwrap();
        let s = svc.register("student", "pw", UserRole::Student, Locale::Pl).unwrap();
        (svc, t, s)
    }

    #[test]
    fn barber_session_save_and_review() {
        let (svc, teacher, student) = setup();
        let sess = svc.start_session(&student, "barber").unwrap();
        let mut live = vec![sess.view.clone()];
        for r in &barber_script().steps {
            live.push(svc.step(&student, &sess.id, r).unwrap().view);
        }
        assert!(live.last().unwrap().complete);
        let sol = svc.save_solution(&student, &sess.id).unwrap();
        assert!(sol.complete);
        let loaded = svc.load_solution(&teacher, &sol.id).unwrap();
        assert_eq!(loaded.views.len(), 5);
        assert_eq!(loaded.views, live);
    }

    #[test]
    fn permissions() {
        let (svc, teacher, student) = setup();
        let other = svc.register("other", "pw", UserRole::Student, Locale::En).unwrap();
        let sess = svc.start_session(&student, "barber").unwrap();
        let r = &barber_script().steps[0];
        assert_eq!(svc.step(&other, &sess.id, r), Err(ServiceError::Unauthorized));
        assert_eq!(svc.step(&teacher, &sess.id, r), Err(ServiceError::Unauthorized));
        assert!(svc.get_session(&teacher, &sess.id).is_ok());
        assert_eq!(svc.get_session(&other, &sess.id), Err(ServiceError::Unauthorized));
        assert_eq!(svc.create_task(&student, barber_task()), Err(ServiceError::Unauthorized));
        let sol = svc.save_solution(&student, &sess.id).unwrap();
        assert_eq!(svc.load_solution(&other, &sol.id).unwrap_err(), ServiceError::Unauthorized);
        assert!(svc.login("student", "wrong").is_err());
        let (token, _) = svc.login("student", "pw").unwrap();
        assert_eq!(svc.authenticate(&token).unwrap().login, "student");
        assert_eq!(svc.authenticate("nope"), Err(ServiceError::Unauthenticated));
    }

    #[test]
    fn task_creation() {
        let (svc, teacher, _) = setup();
        let mut draft = barber_task();
        draft.id = String::new();
        draft.goal = "¬∃A ∀B (shaves(A,B) ⇔ ¬shaves(B,B))".into();
        let t = svc.create_task(&teacher, draft.clone()).unwrap();
        assert_eq!(t.id, "barber-paradox");
        assert_eq!(t.goal, "¬∃A∀B(shaves(A,B) ⇔ ¬shaves(B,B))");
        assert_eq!(svc.create_task(&teacher, draft.clone()).unwrap().id, "barber-paradox-2");
        draft.goal = "∀x (".into();
        assert_eq!(svc.create_task(&teacher, draft).unwrap_err().code(), "invalid_goal");
    }

    #[test]
    fn corrupt_solution_is_a_replay_error() {
        let (svc, teacher, student) = setup();
        let sess = svc.start_session(&student, "barber").unwrap();
        svc.step(&student, &sess.id, &barber_script().steps[0]).unwrap();
        let sol = svc.save_solution(&student, &sess.id).unwrap();
        let mut broken = sol.clone();
        broken.id = "broken".into();
        broken.script.truncate(broken.script.len() / 2);
        svc.store().insert_solution(&broken).unwrap();
        assert_eq!(svc.load_solution(&teacher, "broken").unwrap_err().code(), "replay_error");
    }

    #[test]
    fn sessions_survive_a_restart() {
        let store: Arc<dyn Repository> = Arc::new(RedbStore::in_memory().unwrap());
        let svc = Service::new(store.clone());
        svc.import_tasks(vec![barber_task()]).unwrap();
        let s = svc.register("s", "pw", UserRole::Student, Locale::En).unwrap();
        let sess = svc.start_session(&s, "barber").unwrap();
        let view = svc.step(&s, &sess.id, &barber_script().steps[0]).unwrap().view;
        let again = Service::new(store);
        assert_eq!(again.get_session(&s, &sess.id).unwrap().view, view);
    }
}
