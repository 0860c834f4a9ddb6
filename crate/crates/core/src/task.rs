//! Task definitions: the JSON document shared by the service, the CLI and
//! task files.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{KernelError, ProofScript, ProofState, ReplayError};
use crate::syntax::{print, read_formula, SyntaxError};
use crate::terms::{Expr, Signature, SignatureError, Sort, SymbolInfo};
use crate::theory::{select_lemmas, Lemma, TheoryError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolKind {
    Predicate,
    Function,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolDecl {
    pub name: String,
    pub arity: usize,
    pub kind: SymbolKind,
}

impl SymbolDecl {
    pub fn predicate(name: &str, arity: usize) -> Self {
        SymbolDecl { name: name.to_string(), arity, kind: SymbolKind::Predicate }
    }

    pub fn function(name: &str, arity: usize) -> Self {
        SymbolDecl { name: name.to_string(), arity, kind: SymbolKind::Function }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TaskDef {
    pub id: String,
    pub name: String,
    pub goal: String,
    #[serde(default)]
    pub symbols: Vec<SymbolDecl>,
    /// Lemma selectors such as `logic/*` or `zf/subseteq-def`.
    #[serde(default)]
    pub lemmas: Vec<String>,
    #[serde(default)]
    pub author: String,
    /// Seconds since the Unix epoch.
    #[serde(default)]
    pub created_at: i64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TaskError {
    #[error("the task name is empty")]
    EmptyName,
    #[error("invalid goal: {0}")]
    InvalidGoal(SyntaxError),
    #[error("the goal is not a formula")]
    GoalNotFormula,
    #[error("unknown lemma `{0}`")]
    UnknownLemma(String),
    #[error("bad symbol: {0}")]
    BadSymbol(#[from] SignatureError),
    #[error("script is for task `{found}`, not `{expected}`")]
    TaskMismatch { expected: String, found: String },
    #[error("unsupported script version {0}")]
    Version(u32),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("invalid at {0}")]
    Replay(#[from] ReplayError),
}

impl TaskError {
    pub fn code(&self) -> &'static str {
        match self {
            TaskError::EmptyName => "empty_name",
            TaskError::InvalidGoal(_) | TaskError::GoalNotFormula => "invalid_goal",
            TaskError::UnknownLemma(_) => "unknown_lemma",
            TaskError::BadSymbol(_) => "bad_symbol",
            TaskError::TaskMismatch { .. } => "task_mismatch",
            TaskError::Version(_) => "bad_version",
            TaskError::Kernel(e) => e.code(),
            TaskError::Replay(_) => "replay_error",
        }
    }
}

impl TaskDef {
    pub fn signature(&self) -> Result<Signature, TaskError> {
        let mut sig = Signature::builtin();
        for s in &self.symbols {
            let sort = match s.kind {
                SymbolKind::Predicate => Sort::Proposition,
                SymbolKind::Function => Sort::Individual,
            };
            sig.declare(SymbolInfo::declared(s.name.clone(), s.arity, sort))?;
        }
        Ok(sig)
    }

    pub fn parse_goal(&self) -> Result<Expr, TaskError> {
        let goal = read_formula(&self.goal, &self.signature()?).map_err(TaskError::InvalidGoal)?;
        if goal.sort() != Sort::Proposition {
            return Err(TaskError::GoalNotFormula);
        }
        Ok(goal)
    }

    pub fn resolve_lemmas(&self) -> Result<Vec<Lemma>, TaskError> {
        select_lemmas(&self.lemmas).map_err(|e| match e {
            TheoryError::NotFound(id) => TaskError::UnknownLemma(id),
            other => TaskError::UnknownLemma(other.to_string()),
        })
    }

    /// Checks the task and rewrites its goal in canonical printed form.
    pub fn validate(&mut self) -> Result<(), TaskError> {
        if self.name.trim().is_empty() {
            return Err(TaskError::EmptyName);
        }
        let goal = self.parse_goal()?;
        self.resolve_lemmas()?;
        self.goal = print(&goal);
        Ok(())
    }

    pub fn start(&self) -> Result<ProofState, TaskError> {
        Ok(ProofState::init(&self.parse_goal()?, self.signature()?, self.resolve_lemmas()?)?)
    }

    pub fn check_script(&self, script: &ProofScript) -> Result<(), TaskError> {
        if script.task != self.id {
            return Err(TaskError::TaskMismatch { expected: self.id.clone(), found: script.task.clone() });
        }
        if script.version != crate::kernel::SCRIPT_VERSION {
            return Err(TaskError::Version(script.version));
        }
        Ok(())
    }

    /// Starts the task and replays `script` on it.
    pub fn replay(&self, script: &ProofScript) -> Result<ProofState, TaskError> {
        self.check_script(script)?;
        let mut state = self.start()?;
        state.replay(&script.steps)?;
        Ok(state)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tasks always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn draft(goal: &str) -> TaskDef {
        TaskDef {
            id: "t".into(),
            name: "Barber".into(),
            goal: goal.into(),
            symbols: vec![SymbolDecl::predicate("shaves", 2)],
            lemmas: vec!["logic/*".into()],
            author: "teacher".into(),
            created_at: 0,
        }
    }

    #[test]
    fn validation() {
        let mut t = draft("\\neg \\exists A \\forall B (shaves(A,B) \\iff \\neg shaves(B,B))");
        t.validate().unwrap();
        assert_eq!(t.goal, "¬∃A∀B(shaves(A,B) ⇔ ¬shaves(B,B))");
        assert!(matches!(draft("∀x (").validate(), Err(TaskError::InvalidGoal(_))));
        let mut t = draft("p");
        t.lemmas.push("zf/nothing".into());
        assert_eq!(t.validate(), Err(TaskError::UnknownLemma("zf/nothing".into())));
        let mut t = draft("p");
        t.name = " ".into();
        assert_eq!(t.validate(), Err(TaskError::EmptyName));
    }

    #[test]
    fn json_shape() {
        let t = draft("p");
        let v: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["createdAt"], 0);
        assert_eq!(v["symbols"][0]["kind"], "predicate");
        assert_eq!(TaskDef::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn script_must_match_task() {
        let t = draft("p ⇒ p");
        let s = ProofScript::new("other", vec![]);
        assert!(matches!(t.replay(&s), Err(TaskError::TaskMismatch { .. })));
        let s = ProofScript::new("t", vec![]);
        assert_eq!(t.replay(&s).unwrap(), t.start().unwrap());
    }
}
