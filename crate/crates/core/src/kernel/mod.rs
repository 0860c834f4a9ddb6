//! Proof states, steps and scripts.
//!
//! A proof is a tree of goals. Each goal owns the assumptions introduced
//! while it was the leaf being worked on; the assumptions visible at a goal
//! are its own plus those of its ancestors, so nothing is ever taken away
//! from a branch. Every formula gets a global number in creation order;
//! formulas produced by steps are simplified before they are stored, while
//! the root goal keeps the shape it was entered in.

mod applicable;
mod apply;
pub mod rules;
pub mod step;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::index::IndexError;
use crate::syntax::{self, print, Context};
use crate::terms::{Expr, Path, Signature, Sort};
use crate::theory::Lemma;

pub use applicable::{Effect, StepDescriptor};
pub use rules::{Rule, RuleKind, RuleSet};
pub use step::{Action, Complement, Direction, ProofScript, RuleRef, Side, Step, StepRecord, SCRIPT_VERSION};

pub type FormulaNo = u32;
pub type NodeId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Goal,
    Assumption,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GoalStatus {
    Active,
    Open,
    Proved,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormulaEntry {
    pub number: FormulaNo,
    pub formula: Expr,
    pub role: Role,
    /// Owning goal of an assumption; a goal's own number for goals.
    pub branch: FormulaNo,
    /// Node that created the formula; `None` for the root goal.
    pub origin: Option<NodeId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Open,
    Closed(NodeId),
    Reduced(NodeId),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoalInfo {
    pub parent: Option<FormulaNo>,
    pub assumptions: Vec<FormulaNo>,
    /// Forward nodes applied while this goal was a leaf.
    pub steps: Vec<NodeId>,
    pub outcome: Outcome,
    pub children: Vec<FormulaNo>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum NodeKind {
    Forward,
    GoalChange,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProofNode {
    pub id: NodeId,
    pub kind: NodeKind,
    pub step: Step,
    pub goal: FormulaNo,
    pub added: Vec<FormulaNo>,
}

/// The part of a proof state that undo and redo restore.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ProofData {
    pub formulas: BTreeMap<FormulaNo, FormulaEntry>,
    pub goals: BTreeMap<FormulaNo, GoalInfo>,
    pub nodes: BTreeMap<NodeId, ProofNode>,
    pub active: Option<FormulaNo>,
}

/// Per-task data shared by every state of one proof.
#[derive(Debug, Clone)]
pub struct ProofEnv {
    pub signature: Signature,
    pub lemmas: Vec<Lemma>,
    pub rules: RuleSet,
    /// Free variables of the task goal, with their sorts.
    pub constants: BTreeMap<String, Sort>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase", tag = "code", content = "args")]
pub enum Shape {
    Conjunction,
    Disjunction,
    Implication,
    Equivalence,
    Universal,
    Existential,
    Equation,
    Falsum,
    Truth,
    Proposition,
}

impl Shape {
    pub fn as_str(&self) -> &'static str {
        match self {
            Shape::Conjunction => "conjunction",
            Shape::Disjunction => "disjunction",
            Shape::Implication => "implication",
            Shape::Equivalence => "equivalence",
            Shape::Universal => "universal",
            Shape::Existential => "existential",
            Shape::Equation => "equation",
            Shape::Falsum => "falsum",
            Shape::Truth => "truth",
            Shape::Proposition => "proposition",
        }
    }
}

/// Why a step does not apply.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reason {
    Shape(Shape),
    NotActiveGoal(FormulaNo),
    NotAssumption(FormulaNo),
    NotOpen(FormulaNo),
    Mismatch,
    UnknownRule(String),
    RuleContext,
    NoMatch,
    NoOp,
    Unbound,
    Captured,
    Constant,
    BadPath(String),
    BadTerm(String),
}

impl Reason {
    /// Message-catalog key.
    pub fn key(&self) -> String {
        match self {
            Reason::Shape(s) => format!("reason.shape.{}", s.as_str()),
            Reason::NotActiveGoal(_) => "reason.not-active-goal".into(),
            Reason::NotAssumption(_) => "reason.not-assumption".into(),
            Reason::NotOpen(_) => "reason.not-open".into(),
            Reason::Mismatch => "reason.mismatch".into(),
            Reason::UnknownRule(_) => "reason.unknown-rule".into(),
            Reason::RuleContext => "reason.rule-context".into(),
            Reason::NoMatch => "reason.no-match".into(),
            Reason::NoOp => "reason.no-op".into(),
            Reason::Unbound => "reason.unbound".into(),
            Reason::Captured => "reason.captured".into(),
            Reason::Constant => "reason.constant".into(),
            Reason::BadPath(_) => "reason.bad-path".into(),
            Reason::BadTerm(_) => "reason.bad-term".into(),
        }
    }

    pub fn args(&self) -> Vec<String> {
        match self {
            Reason::NotActiveGoal(n) | Reason::NotAssumption(n) | Reason::NotOpen(n) => vec![n.to_string()],
            Reason::UnknownRule(s) | Reason::BadPath(s) | Reason::BadTerm(s) => vec![s.clone()],
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::Shape(s) => write!(f, "the formula is not {} {}", article(s.as_str()), s.as_str()),
            Reason::NotActiveGoal(n) => write!(f, "formula {n} is not the active goal"),
            Reason::NotAssumption(n) => write!(f, "formula {n} is not an assumption"),
            Reason::NotOpen(n) => write!(f, "goal {n} is not open"),
            Reason::Mismatch => f.write_str("the formulas do not fit together"),
            Reason::UnknownRule(r) => write!(f, "no rule {r}"),
            Reason::RuleContext => f.write_str("the rule does not apply at this position"),
            Reason::NoMatch => f.write_str("the lemma does not match the selected subterm"),
            Reason::NoOp => f.write_str("the step would change nothing"),
            Reason::Unbound => f.write_str("the lemma would introduce an unknown variable"),
            Reason::Captured => f.write_str("the subterm mentions a variable bound outside it"),
            Reason::Constant => f.write_str("the subterm is a truth constant"),
            Reason::BadPath(p) => write!(f, "invalid position {p}"),
            Reason::BadTerm(t) => write!(f, "bad term: {t}"),
        }
    }
}

fn article(word: &str) -> &'static str {
    if word.starts_with(['a', 'e', 'i', 'o', 'u']) {
        "an"
    } else {
        "a"
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("ill-formed goal: {0}")]
    IllFormedGoal(String),
    #[error("not applicable: {0}")]
    NotApplicable(Reason),
    #[error("formula {0} does not exist")]
    StaleState(FormulaNo),
    #[error("formula {0} belongs to another branch")]
    OutOfScope(FormulaNo),
    #[error("no active goal")]
    NoActiveGoal,
    #[error("nothing to undo")]
    NothingToUndo,
    #[error("nothing to redo")]
    NothingToRedo,
    #[error("goal {0} has no step to delete")]
    EmptyBranch(FormulaNo),
    #[error("bad step record: {0}")]
    BadRecord(String),
    #[error(transparent)]
    Index(#[from] IndexError),
}

impl KernelError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            KernelError::IllFormedGoal(_) => "ill_formed_goal",
            KernelError::NotApplicable(_) => "not_applicable",
            KernelError::StaleState(_) => "stale_state",
            KernelError::OutOfScope(_) => "out_of_scope",
            KernelError::NoActiveGoal => "no_active_goal",
            KernelError::NothingToUndo => "nothing_to_undo",
            KernelError::NothingToRedo => "nothing_to_redo",
            KernelError::EmptyBranch(_) => "empty_branch",
            KernelError::BadRecord(_) => "bad_record",
            KernelError::Index(_) => "bad_lemma",
        }
    }

    pub(crate) fn not(reason: Reason) -> Self {
        KernelError::NotApplicable(reason)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {}: {error}", .index + 1)]
pub struct ReplayError {
    /// Zero-based position of the failing record.
    pub index: usize,
    pub error: KernelError,
}

#[derive(Debug, Clone)]
pub struct ProofState {
    env: Arc<ProofEnv>,
    data: ProofData,
    undo: Vec<(Action, ProofData)>,
    redo: Vec<(Action, ProofData)>,
}

impl PartialEq for ProofState {
    fn eq(&self, other: &Self) -> bool {
        self.data == other.data && self.undo == other.undo && self.redo == other.redo
    }
}

impl ProofState {
    /// A proof of `goal` with the given lemmas available.
    pub fn init(goal: &Expr, signature: Signature, lemmas: Vec<Lemma>) -> Result<Self, KernelError> {
        if goal.has_holes() {
            return Err(KernelError::IllFormedGoal("the goal contains a hole".into()));
        }
        if goal.sort() != Sort::Proposition {
            return Err(KernelError::IllFormedGoal("the goal is not a formula".into()));
        }
        let rules = RuleSet::new(&lemmas)?;
        let env = ProofEnv { signature, lemmas, rules, constants: goal.free_var_sorts() };
        Ok(Self::with_env(Arc::new(env), goal))
    }

    /// A fresh proof of `goal` sharing an existing environment.
    pub fn with_env(env: Arc<ProofEnv>, goal: &Expr) -> Self {
        let mut data = ProofData::default();
        data.formulas.insert(
            1,
            FormulaEntry { number: 1, formula: goal.clone(), role: Role::Goal, branch: 1, origin: None },
        );
        data.goals.insert(
            1,
            GoalInfo { parent: None, assumptions: Vec::new(), steps: Vec::new(), outcome: Outcome::Open, children: Vec::new() },
        );
        data.active = Some(1);
        ProofState { env, data, undo: Vec::new(), redo: Vec::new() }
    }

    /// The state before any action, sharing this state's environment.
    pub fn initial(&self) -> Self {
        Self::with_env(self.env.clone(), &self.data.formulas[&1].formula)
    }

    pub fn env(&self) -> &Arc<ProofEnv> {
        &self.env
    }

    pub fn data(&self) -> &ProofData {
        &self.data
    }

    pub fn root_goal(&self) -> &Expr {
        &self.data.formulas[&1].formula
    }

    pub fn formula(&self, n: FormulaNo) -> Option<&FormulaEntry> {
        self.data.formulas.get(&n)
    }

    pub fn formulas(&self) -> impl Iterator<Item = &FormulaEntry> {
        self.data.formulas.values()
    }

    pub fn goal(&self, g: FormulaNo) -> Option<&GoalInfo> {
        self.data.goals.get(&g)
    }

    pub fn active_goal(&self) -> Option<FormulaNo> {
        self.data.active
    }

    pub fn is_proved(&self, g: FormulaNo) -> bool {
        match self.data.goals.get(&g).map(|i| i.outcome) {
            Some(Outcome::Closed(_)) => true,
            Some(Outcome::Reduced(_)) => self.data.goals[&g].children.iter().all(|c| self.is_proved(*c)),
            _ => false,
        }
    }

    pub fn goal_status(&self, g: FormulaNo) -> Option<GoalStatus> {
        self.data.goals.get(&g)?;
        Some(if self.is_proved(g) {
            GoalStatus::Proved
        } else if self.data.active == Some(g) {
            GoalStatus::Active
        } else {
            GoalStatus::Open
        })
    }

    pub fn is_complete(&self) -> bool {
        self.is_proved(1)
    }

    /// Leaf goals still to be proved, in numbering order.
    pub fn open_goals(&self) -> Vec<FormulaNo> {
        self.data.goals.iter().filter(|(_, i)| i.outcome == Outcome::Open).map(|(g, _)| *g).collect()
    }

    /// `g` and its ancestors, root first.
    pub fn lineage(&self, g: FormulaNo) -> Vec<FormulaNo> {
        let mut out = Vec::new();
        let mut cur = Some(g);
        while let Some(c) = cur {
            out.push(c);
            cur = self.data.goals.get(&c).and_then(|i| i.parent);
        }
        out.reverse();
        out
    }

    /// Assumptions visible at goal `g`, in numbering order.
    pub fn context(&self, g: FormulaNo) -> Vec<FormulaNo> {
        let mut out: Vec<FormulaNo> =
            self.lineage(g).iter().flat_map(|a| self.data.goals[a].assumptions.iter().copied()).collect();
        out.sort_unstable();
        out
    }

    /// Whether `n` is an assumption usable at the active goal.
    pub fn in_scope(&self, n: FormulaNo) -> bool {
        match (self.data.formulas.get(&n), self.data.active) {
            (Some(e), Some(g)) if e.role == Role::Assumption => self.lineage(g).contains(&e.branch),
            _ => false,
        }
    }

    pub fn can_undo(&self) -> bool {
        !self.undo.is_empty()
    }

    pub fn can_redo(&self) -> bool {
        !self.redo.is_empty()
    }

    /// Actions on the undo stack, oldest first.
    pub fn history(&self) -> impl Iterator<Item = &Action> {
        self.undo.iter().map(|(a, _)| a)
    }

    pub fn script(&self, task: &str) -> ProofScript {
        ProofScript::new(task, self.history().map(Action::record).collect())
    }

    /// Names a fresh variable must avoid: free variables of the active
    /// goal, of the assumptions in scope, and the task constants.
    pub(crate) fn taken_names(&self) -> BTreeSet<String> {
        let mut taken: BTreeSet<String> = self.env.constants.keys().cloned().collect();
        if let Some(g) = self.data.active {
            for n in self.context(g).into_iter().chain([g]) {
                taken.extend(self.data.formulas[&n].formula.free_vars());
            }
        }
        taken
    }

    /// Sorts of the variables a user-entered term may refer to.
    pub fn term_context(&self) -> Context {
        let mut ctx: Context = self.env.constants.clone();
        if let Some(g) = self.data.active {
            for n in self.context(g).into_iter().chain([g]) {
                for (v, s) in self.data.formulas[&n].formula.free_var_sorts() {
                    ctx.entry(v).or_insert(s);
                }
            }
        }
        ctx
    }

    pub fn parse_term(&self, text: &str, sort: Option<Sort>) -> Result<Expr, KernelError> {
        let text = syntax::ShorthandTable::default().expand(text);
        let ctx = self.term_context();
        let parsed = match sort {
            Some(s) => syntax::parse_sorted(&text, s, &self.env.signature, &ctx),
            None => syntax::parse(&text, &self.env.signature, &ctx),
        };
        parsed.map_err(|e| KernelError::not(Reason::BadTerm(e.to_string())))
    }

    fn perform(&mut self, action: Action) -> Result<(), KernelError> {
        let before = self.data.clone();
        let result = match &action {
            Action::Step(step) => self.evaluate(step, false).map(|change| self.commit(step.clone(), change)),
            Action::SetActiveGoal(g) => self.switch_goal(*g),
            Action::DeleteLast(g) => self.remove_last(*g),
        };
        match result {
            Ok(()) => {
                self.undo.push((action, before));
                self.redo.clear();
                Ok(())
            }
            Err(e) => {
                self.data = before;
                Err(e)
            }
        }
    }

    pub fn apply(&mut self, step: Step) -> Result<(), KernelError> {
        self.perform(Action::Step(step))
    }

    /// Functional form of [`ProofState::apply`].
    pub fn apply_step(&self, step: Step) -> Result<ProofState, KernelError> {
        let mut next = self.clone();
        next.apply(step)?;
        Ok(next)
    }

    pub fn act(&mut self, action: Action) -> Result<(), KernelError> {
        self.perform(action)
    }

    pub fn set_active_goal(&mut self, g: FormulaNo) -> Result<(), KernelError> {
        self.perform(Action::SetActiveGoal(g))
    }

    /// Removes the most recent step of the branch ending in goal `g`.
    pub fn delete_last(&mut self, g: FormulaNo) -> Result<(), KernelError> {
        self.perform(Action::DeleteLast(g))
    }

    pub fn undo(&mut self) -> Result<(), KernelError> {
        let (action, before) = self.undo.pop().ok_or(KernelError::NothingToUndo)?;
        let after = std::mem::replace(&mut self.data, before);
        self.redo.push((action, after));
        Ok(())
    }

    pub fn redo(&mut self) -> Result<(), KernelError> {
        let (action, after) = self.redo.pop().ok_or(KernelError::NothingToRedo)?;
        let before = std::mem::replace(&mut self.data, after);
        self.undo.push((action, before));
        Ok(())
    }

    /// Decodes a stored record against this state.
    pub fn decode(&self, r: &StepRecord) -> Result<Action, KernelError> {
        let path = || Path(r.path.clone());
        let target = r.need_target();
        let step = match r.kind.as_str() {
            "SetActiveGoal" => return Ok(Action::SetActiveGoal(target?)),
            "DeleteLast" => return Ok(Action::DeleteLast(target?)),
            "ByContradiction" => Step::ByContradiction { goal: target? },
            "ProveConjuncts" => Step::ProveConjuncts { goal: target? },
            "IntroImplication" => Step::IntroImplication { goal: target? },
            "IntroEquivalence" => Step::IntroEquivalence { goal: target? },
            "IntroForall" => Step::IntroForall { goal: target? },
            "IntroExistsWitness" => {
                let goal = target?;
                let sort = self.bound_sort(goal)?;
                Step::IntroExistsWitness { goal, term: self.parse_term(r.need_term()?, sort)? }
            }
            "ProveDisjunctionClassical" => Step::ProveDisjunctionClassical { goal: target?, side: r.side()? },
            "ProveLemma" => Step::ProveLemma {
                goal: target?,
                formula: self.parse_term(r.need_term()?, Some(Sort::Proposition))?,
            },
            "CloseByAssumption" => Step::CloseByAssumption { assumption: target? },
            "RewriteGoal" => Step::RewriteGoal { goal: target?, rule: r.rule()?, path: path() },
            "TakeThis" => Step::TakeThis { assumption: target? },
            "Specialize" => {
                let assumption = target?;
                let sort = self.bound_sort(assumption)?;
                Step::Specialize { assumption, term: self.parse_term(r.need_term()?, sort)? }
            }
            "ElimConjunction" => Step::ElimConjunction { assumption: target? },
            "ElimEquivalence" => Step::ElimEquivalence { assumption: target? },
            "ModusPonens" => Step::ModusPonens { implication: target?, antecedent: r.number_ref()? },
            "CaseAnalysis" => Step::CaseAnalysis { assumption: target? },
            "ExcludedMiddleSplit" => Step::ExcludedMiddleSplit {
                formula: target?,
                path: path(),
                term: match &r.term {
                    Some(t) => Some(self.parse_term(t, Some(Sort::Proposition))?),
                    None => None,
                },
            },
            "ContradictionFromPair" => Step::ContradictionFromPair {
                formula: target?,
                complement: match r.lemma.as_deref() {
                    None => Complement::Falsum,
                    Some(l) if l.starts_with('#') => Complement::Assumption(r.number_ref()?),
                    Some(l) => Complement::Lemma(l.to_string()),
                },
            },
            "RewriteAssumption" => Step::RewriteAssumption { assumption: target?, rule: r.rule()?, path: path() },
            "EqualityRewrite" => Step::EqualityRewrite {
                equation: r.number_ref()?,
                direction: r.direction()?,
                target: target?,
                path: path(),
            },
            other => return Err(KernelError::BadRecord(format!("unknown step kind `{other}`"))),
        };
        Ok(Action::Step(step))
    }

    /// Sort of the outer bound variable of formula `n`, if it has one.
    fn bound_sort(&self, n: FormulaNo) -> Result<Option<Sort>, KernelError> {
        let e = self.data.formulas.get(&n).ok_or(KernelError::StaleState(n))?;
        Ok(match &e.formula {
            Expr::Quant(_, v, _) => Some(v.sort),
            _ => None,
        })
    }

    pub fn apply_record(&mut self, r: &StepRecord) -> Result<(), KernelError> {
        let action = self.decode(r)?;
        self.perform(action)
    }

    /// Applies `records` in order; on failure the state is left unchanged.
    pub fn replay(&mut self, records: &[StepRecord]) -> Result<(), ReplayError> {
        let mut next = self.clone();
        for (index, r) in records.iter().enumerate() {
            next.apply_record(r).map_err(|error| ReplayError { index, error })?;
        }
        *self = next;
        Ok(())
    }

    /// Deterministic JSON rendering of the whole state, history included.
    pub fn canonical(&self) -> String {
        let formulas: Vec<_> = self
            .data
            .formulas
            .values()
            .map(|e| {
                serde_json::json!({
                    "number": e.number,
                    "text": print(&e.formula),
                    "sorts": e.formula.free_var_sorts(),
                    "role": e.role,
                    "branch": e.branch,
                    "origin": e.origin,
                })
            })
            .collect();
        let goals: Vec<_> = self
            .data
            .goals
            .iter()
            .map(|(g, i)| {
                let outcome = match i.outcome {
                    Outcome::Open => serde_json::json!("open"),
                    Outcome::Closed(n) => serde_json::json!({ "closed": n }),
                    Outcome::Reduced(n) => serde_json::json!({ "reduced": n }),
                };
                serde_json::json!({
                    "goal": g,
                    "parent": i.parent,
                    "assumptions": i.assumptions,
                    "steps": i.steps,
                    "outcome": outcome,
                    "children": i.children,
                })
            })
            .collect();
        let nodes: Vec<_> = self
            .data
            .nodes
            .values()
            .map(|n| {
                serde_json::json!({
                    "id": n.id, "kind": n.kind, "goal": n.goal, "added": n.added, "step": n.step.record(),
                })
            })
            .collect();
        let stack = |s: &[(Action, ProofData)]| s.iter().map(|(a, _)| a.record()).collect::<Vec<_>>();
        serde_json::json!({
            "formulas": formulas,
            "goals": goals,
            "nodes": nodes,
            "active": self.data.active,
            "undo": stack(&self.undo),
            "redo": stack(&self.redo),
        })
        .to_string()
    }

    fn switch_goal(&mut self, g: FormulaNo) -> Result<(), KernelError> {
        let info = self.data.goals.get(&g).ok_or(KernelError::StaleState(g))?;
        if info.outcome != Outcome::Open {
            return Err(KernelError::not(Reason::NotOpen(g)));
        }
        self.data.active = Some(g);
        Ok(())
    }

    fn remove_last(&mut self, g: FormulaNo) -> Result<(), KernelError> {
        let info = self.data.goals.get(&g).ok_or(KernelError::StaleState(g))?;
        let parent = info.parent;
        match info.outcome {
            Outcome::Closed(node) => {
                self.data.nodes.remove(&node);
                self.data.goals.get_mut(&g).expect("goal exists").outcome = Outcome::Open;
                self.data.active = Some(g);
            }
            Outcome::Reduced(_) => {
                self.remove_below(g);
                self.data.active = Some(g);
            }
            Outcome::Open => {
                if let Some(node) = self.data.goals.get_mut(&g).expect("goal exists").steps.pop() {
                    let removed = self.data.nodes.remove(&node).expect("node exists");
                    for n in &removed.added {
                        self.data.formulas.remove(n);
                    }
                    self.data.goals.get_mut(&g).expect("goal exists").assumptions.retain(|a| !removed.added.contains(a));
                    self.data.active = Some(g);
                } else if let Some(p) = parent {
                    self.remove_below(p);
                    self.data.active = Some(p);
                } else {
                    return Err(KernelError::EmptyBranch(g));
                }
            }
        }
        Ok(())
    }

    /// Undoes the reduction of `g`, dropping every goal, formula and node
    /// beneath it.
    fn remove_below(&mut self, g: FormulaNo) {
        let info = self.data.goals.get_mut(&g).expect("goal exists");
        let children = std::mem::take(&mut info.children);
        if let Outcome::Reduced(node) | Outcome::Closed(node) = std::mem::replace(&mut info.outcome, Outcome::Open) {
            self.data.nodes.remove(&node);
        }
        for c in children {
            self.remove_below(c);
            let info = self.data.goals.remove(&c).expect("child exists");
            for n in info.assumptions.iter().chain([&c]) {
                self.data.formulas.remove(n);
            }
            for node in info.steps {
                self.data.nodes.remove(&node);
            }
        }
    }

    fn next_number(&self) -> FormulaNo {
        self.data.formulas.keys().next_back().map_or(1, |n| n + 1)
    }

    fn next_node(&self) -> NodeId {
        self.data.nodes.keys().next_back().map_or(0, |n| n + 1)
    }

    fn commit(&mut self, step: Step, change: apply::Change) {
        let g = self.data.active.expect("evaluate checked the active goal");
        let id = self.next_node();
        let mut numbers = self.next_number()..;
        let mut added = Vec::new();
        let mut push = |data: &mut ProofData, formula: Expr, role: Role, branch: Option<FormulaNo>| {
            let number = numbers.next().expect("unbounded range");
            data.formulas.insert(
                number,
                FormulaEntry { number, formula, role, branch: branch.unwrap_or(number), origin: Some(id) },
            );
            added.push(number);
            number
        };
        let kind = match change {
            apply::Change::Forward(formulas) => {
                let mut own = Vec::new();
                for f in formulas {
                    own.push(push(&mut self.data, f, Role::Assumption, Some(g)));
                }
                let info = self.data.goals.get_mut(&g).expect("active goal exists");
                info.assumptions.extend(own);
                info.steps.push(id);
                NodeKind::Forward
            }
            apply::Change::Reduce(branches) => {
                let mut children = Vec::new();
                let mut first = self.next_number();
                for b in branches {
                    let goal_no = first + b.assumptions.len() as FormulaNo;
                    first = goal_no + 1;
                    let assumptions: Vec<FormulaNo> = b
                        .assumptions
                        .into_iter()
                        .map(|a| push(&mut self.data, a, Role::Assumption, Some(goal_no)))
                        .collect();
                    push(&mut self.data, b.goal, Role::Goal, None);
                    self.data.goals.insert(
                        goal_no,
                        GoalInfo {
                            parent: Some(g),
                            assumptions,
                            steps: Vec::new(),
                            outcome: Outcome::Open,
                            children: Vec::new(),
                        },
                    );
                    children.push(goal_no);
                }
                self.data.active = children.first().copied();
                let info = self.data.goals.get_mut(&g).expect("active goal exists");
                info.outcome = Outcome::Reduced(id);
                info.children = children;
                NodeKind::GoalChange
            }
            apply::Change::Close => {
                self.data.goals.get_mut(&g).expect("active goal exists").outcome = Outcome::Closed(id);
                self.data.active = self.open_goals().first().copied();
                NodeKind::GoalChange
            }
        };
        self.data.nodes.insert(id, ProofNode { id, kind, step, goal: g, added });
    }
}
