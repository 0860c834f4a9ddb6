use std::fmt;

use serde::{Deserialize, Serialize};

use crate::index::Orientation;
use crate::syntax::print;
use crate::terms::{Expr, Path};

use super::{FormulaNo, KernelError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Replace the left side of the equation by the right side.
    Ltr,
    Rtl,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Ltr => "ltr",
            Direction::Rtl => "rtl",
        }
    }
}

/// A rewrite rule derived from a lemma.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleRef {
    pub lemma: String,
    pub orientation: Orientation,
}

impl RuleRef {
    pub fn new(lemma: impl Into<String>, orientation: Orientation) -> Self {
        RuleRef { lemma: lemma.into(), orientation }
    }
}

/// What the second formula of a contradiction is.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Complement {
    /// The formula itself is `⊥`.
    Falsum,
    /// An assumption equal to the negation of the formula.
    Assumption(FormulaNo),
    /// A lemma `∀…¬ψ` of which the formula is an instance of `ψ`.
    Lemma(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    ByContradiction { goal: FormulaNo },
    ProveConjuncts { goal: FormulaNo },
    IntroImplication { goal: FormulaNo },
    IntroEquivalence { goal: FormulaNo },
    IntroForall { goal: FormulaNo },
    IntroExistsWitness { goal: FormulaNo, term: Expr },
    /// Prove the disjunct on `side`, assuming the negation of the other.
    ProveDisjunctionClassical { goal: FormulaNo, side: Side },
    ProveLemma { goal: FormulaNo, formula: Expr },
    CloseByAssumption { assumption: FormulaNo },
    RewriteGoal { goal: FormulaNo, rule: RuleRef, path: Path },
    TakeThis { assumption: FormulaNo },
    Specialize { assumption: FormulaNo, term: Expr },
    ElimConjunction { assumption: FormulaNo },
    ElimEquivalence { assumption: FormulaNo },
    ModusPonens { implication: FormulaNo, antecedent: FormulaNo },
    CaseAnalysis { assumption: FormulaNo },
    /// Split on `term`, or on the subterm at `path` of `formula` when no
    /// term is given.
    ExcludedMiddleSplit { formula: FormulaNo, path: Path, term: Option<Expr> },
    ContradictionFromPair { formula: FormulaNo, complement: Complement },
    RewriteAssumption { assumption: FormulaNo, rule: RuleRef, path: Path },
    EqualityRewrite { equation: FormulaNo, direction: Direction, target: FormulaNo, path: Path },
}

impl Step {
    pub fn kind(&self) -> &'static str {
        match self {
            Step::ByContradiction { .. } => "ByContradiction",
            Step::ProveConjuncts { .. } => "ProveConjuncts",
            Step::IntroImplication { .. } => "IntroImplication",
            Step::IntroEquivalence { .. } => "IntroEquivalence",
            Step::IntroForall { .. } => "IntroForall",
            Step::IntroExistsWitness { .. } => "IntroExistsWitness",
            Step::ProveDisjunctionClassical { .. } => "ProveDisjunctionClassical",
            Step::ProveLemma { .. } => "ProveLemma",
            Step::CloseByAssumption { .. } => "CloseByAssumption",
            Step::RewriteGoal { .. } => "RewriteGoal",
            Step::TakeThis { .. } => "TakeThis",
            Step::Specialize { .. } => "Specialize",
            Step::ElimConjunction { .. } => "ElimConjunction",
            Step::ElimEquivalence { .. } => "ElimEquivalence",
            Step::ModusPonens { .. } => "ModusPonens",
            Step::CaseAnalysis { .. } => "CaseAnalysis",
            Step::ExcludedMiddleSplit { .. } => "ExcludedMiddleSplit",
            Step::ContradictionFromPair { .. } => "ContradictionFromPair",
            Step::RewriteAssumption { .. } => "RewriteAssumption",
            Step::EqualityRewrite { .. } => "EqualityRewrite",
        }
    }

    pub fn record(&self) -> StepRecord {
        let mut r = StepRecord::new(self.kind());
        let num = |k: FormulaNo| format!("#{k}");
        match self {
            Step::ByContradiction { goal }
            | Step::ProveConjuncts { goal }
            | Step::IntroImplication { goal }
            | Step::IntroEquivalence { goal }
            | Step::IntroForall { goal } => r.target = Some(*goal),
            Step::IntroExistsWitness { goal, term } => {
                r.target = Some(*goal);
                r.term = Some(print(term));
            }
            Step::ProveDisjunctionClassical { goal, side } => {
                r.target = Some(*goal);
                r.side = Some(side.as_str().into());
            }
            Step::ProveLemma { goal, formula } => {
                r.target = Some(*goal);
                r.term = Some(print(formula));
            }
            Step::CloseByAssumption { assumption }
            | Step::TakeThis { assumption }
            | Step::ElimConjunction { assumption }
            | Step::ElimEquivalence { assumption }
            | Step::CaseAnalysis { assumption } => r.target = Some(*assumption),
            Step::Specialize { assumption, term } => {
                r.target = Some(*assumption);
                r.term = Some(print(term));
            }
            Step::RewriteGoal { goal: n, rule, path } | Step::RewriteAssumption { assumption: n, rule, path } => {
                r.target = Some(*n);
                r.path = path.0.clone();
                r.lemma = Some(rule.lemma.clone());
                r.orientation = Some(rule.orientation);
            }
            Step::ModusPonens { implication, antecedent } => {
                r.target = Some(*implication);
                r.lemma = Some(num(*antecedent));
            }
            Step::ExcludedMiddleSplit { formula, path, term } => {
                r.target = Some(*formula);
                r.path = path.0.clone();
                r.term = term.as_ref().map(print);
            }
            Step::ContradictionFromPair { formula, complement } => {
                r.target = Some(*formula);
                r.lemma = match complement {
                    Complement::Falsum => None,
                    Complement::Assumption(k) => Some(num(*k)),
                    Complement::Lemma(id) => Some(id.clone()),
                };
            }
            Step::EqualityRewrite { equation, direction, target, path } => {
                r.target = Some(*target);
                r.path = path.0.clone();
                r.lemma = Some(num(*equation));
                r.direction = Some(direction.as_str().into());
            }
        }
        r
    }
}

/// Anything recorded in a proof script.
#[derive(Debug, Clone, PartialEq)]
pub enum Action {
    Step(Step),
    SetActiveGoal(FormulaNo),
    DeleteLast(FormulaNo),
}

impl Action {
    pub fn record(&self) -> StepRecord {
        match self {
            Action::Step(s) => s.record(),
            Action::SetActiveGoal(g) => StepRecord { target: Some(*g), ..StepRecord::new("SetActiveGoal") },
            Action::DeleteLast(g) => StepRecord { target: Some(*g), ..StepRecord::new("DeleteLast") },
        }
    }
}

impl From<Step> for Action {
    fn from(s: Step) -> Self {
        Action::Step(s)
    }
}

/// Persisted form of one action. Terms are stored as printed text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub kind: String,
    pub target: Option<FormulaNo>,
    #[serde(default)]
    pub path: Vec<usize>,
    #[serde(default)]
    pub term: Option<String>,
    #[serde(default)]
    pub lemma: Option<String>,
    #[serde(default)]
    pub orientation: Option<Orientation>,
    #[serde(default)]
    pub side: Option<String>,
    #[serde(default)]
    pub direction: Option<String>,
}

impl StepRecord {
    pub fn new(kind: &str) -> Self {
        StepRecord {
            kind: kind.to_string(),
            target: None,
            path: Vec::new(),
            term: None,
            lemma: None,
            orientation: None,
            side: None,
            direction: None,
        }
    }

    pub fn with_target(mut self, n: FormulaNo) -> Self {
        self.target = Some(n);
        self
    }

    pub fn with_path(mut self, path: &[usize]) -> Self {
        self.path = path.to_vec();
        self
    }

    pub fn with_term(mut self, term: &str) -> Self {
        self.term = Some(term.to_string());
        self
    }

    pub fn with_lemma(mut self, lemma: &str) -> Self {
        self.lemma = Some(lemma.to_string());
        self
    }

    pub fn with_orientation(mut self, o: Orientation) -> Self {
        self.orientation = Some(o);
        self
    }

    pub fn with_side(mut self, side: Side) -> Self {
        self.side = Some(side.as_str().to_string());
        self
    }

    pub fn with_direction(mut self, d: Direction) -> Self {
        self.direction = Some(d.as_str().to_string());
        self
    }

    pub(super) fn need_target(&self) -> Result<FormulaNo, KernelError> {
        self.target.ok_or_else(|| self.bad("missing target"))
    }

    pub(super) fn need_term(&self) -> Result<&str, KernelError> {
        self.term.as_deref().ok_or_else(|| self.bad("missing term"))
    }

    pub(super) fn need_lemma(&self) -> Result<&str, KernelError> {
        self.lemma.as_deref().ok_or_else(|| self.bad("missing lemma"))
    }

    /// Parses a `#k` reference stored in the lemma field.
    pub(super) fn number_ref(&self) -> Result<FormulaNo, KernelError> {
        self.need_lemma()?
            .strip_prefix('#')
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| self.bad("expected a #number reference"))
    }

    pub(super) fn rule(&self) -> Result<RuleRef, KernelError> {
        let orientation = self.orientation.ok_or_else(|| self.bad("missing orientation"))?;
        Ok(RuleRef::new(self.need_lemma()?, orientation))
    }

    pub(super) fn side(&self) -> Result<Side, KernelError> {
        match self.side.as_deref() {
            Some("left") => Ok(Side::Left),
            Some("right") => Ok(Side::Right),
            _ => Err(self.bad("side must be left or right")),
        }
    }

    pub(super) fn direction(&self) -> Result<Direction, KernelError> {
        match self.direction.as_deref() {
            Some("ltr") => Ok(Direction::Ltr),
            Some("rtl") => Ok(Direction::Rtl),
            _ => Err(self.bad("direction must be ltr or rtl")),
        }
    }

    pub(super) fn bad(&self, what: &str) -> KernelError {
        KernelError::BadRecord(format!("{}: {what}", self.kind))
    }
}

impl fmt::Display for StepRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.kind)?;
        if let Some(t) = self.target {
            write!(f, " {t}")?;
        }
        if !self.path.is_empty() {
            write!(f, " at {}", Path(self.path.clone()))?;
        }
        for s in [&self.lemma, &self.side, &self.direction].into_iter().flatten() {
            write!(f, " {s}")?;
        }
        if let Some(o) = self.orientation {
            write!(f, " ({o})")?;
        }
        if let Some(t) = &self.term {
            write!(f, " [{t}]")?;
        }
        Ok(())
    }
}

pub const SCRIPT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofScript {
    pub task: String,
    pub version: u32,
    pub steps: Vec<StepRecord>,
}

impl ProofScript {
    pub fn new(task: impl Into<String>, steps: Vec<StepRecord>) -> Self {
        ProofScript { task: task.into(), version: SCRIPT_VERSION, steps }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scripts always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
