//! Rewrite rules derived from the enabled lemmas.
//!
//! A lemma `∀x̄(L ⇔ R)` or `∀x̄(L = R)` gives two replacement rules (left
//! rewrites an instance of L to R, right the converse) and a fact rule for
//! its matrix. A lemma `∀x̄(P ⇒ Q)` gives a fact rule, a forward rule
//! (assumption P yields Q) and a backward rule (goal Q reduces to P). Any
//! other lemma is a fact, which rewrites its instances to `⊤`. Facts of the
//! form `¬ψ` also refute instances of ψ.

use std::collections::BTreeMap;

use crate::index::{compile_lemma, strip_universals, IndexError, LemmaIndex, Orientation, Pattern};
use crate::terms::{Connective, Expr, Substitution};
use crate::theory::Lemma;

use super::step::RuleRef;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    Replace,
    Fact,
    Forward,
    Backward,
}

#[derive(Debug, Clone)]
pub struct Rule {
    pub lemma: String,
    pub orientation: Orientation,
    pub kind: RuleKind,
    pub pattern: Pattern,
    /// Replacement side for `Replace`, consequent for `Forward`, antecedent
    /// for `Backward`.
    pub result: Option<Expr>,
}

impl Rule {
    pub fn reference(&self) -> RuleRef {
        RuleRef::new(self.lemma.clone(), self.orientation)
    }

    /// The expression an instance of the pattern turns into, or `None` when
    /// the result mentions a variable the match did not bind.
    pub fn instantiate(&self, bindings: &Substitution) -> Option<Expr> {
        match &self.result {
            None => Some(Expr::top()),
            Some(r) => {
                if r.free_vars().iter().any(|v| !bindings.contains_key(v)) {
                    return None;
                }
                r.substitute(bindings).ok()
            }
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RuleSet {
    rules: BTreeMap<RuleRef, Rule>,
    index: LemmaIndex,
    refuters: LemmaIndex,
}

impl RuleSet {
    pub fn new(lemmas: &[Lemma]) -> Result<RuleSet, IndexError> {
        let mut set = RuleSet::default();
        for lemma in lemmas {
            let (block, matrix) = strip_universals(&lemma.statement);
            let patterns = compile_lemma(&lemma.statement, &lemma.id)?;
            let id = lemma.id.as_str();
            let whole = Pattern::over_block(&block, matrix, id, Orientation::Whole);
            if let [left, right] = &patterns[..] {
                set.add(RuleKind::Replace, left.clone(), Some(right.skeleton.clone()));
                set.add(RuleKind::Replace, right.clone(), Some(left.skeleton.clone()));
            } else if let Some((p, q)) = matrix.as_binary(Connective::Implies) {
                set.add(RuleKind::Forward, Pattern::over_block(&block, p, id, Orientation::Left), Some(q.clone()));
                set.add(RuleKind::Backward, Pattern::over_block(&block, q, id, Orientation::Right), Some(p.clone()));
            }
            if let Some(psi) = matrix.as_not() {
                set.refuters.insert(Pattern::over_block(&block, psi, id, Orientation::Whole));
            }
            set.add(RuleKind::Fact, whole, None);
        }
        Ok(set)
    }

    fn add(&mut self, kind: RuleKind, pattern: Pattern, result: Option<Expr>) {
        let rule = Rule {
            lemma: pattern.lemma_id.clone(),
            orientation: pattern.orientation,
            kind,
            pattern: pattern.clone(),
            result,
        };
        self.index.insert(pattern);
        self.rules.insert(rule.reference(), rule);
    }

    pub fn get(&self, r: &RuleRef) -> Option<&Rule> {
        self.rules.get(r)
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.rules.values()
    }

    /// Rules whose pattern matches `e` at its root, ordered by lemma id then
    /// orientation.
    pub fn matching(&self, e: &Expr) -> Vec<(&Rule, Substitution)> {
        self.index
            .lookup(e)
            .into_iter()
            .filter_map(|m| {
                let r = RuleRef::new(m.pattern.lemma_id, m.pattern.orientation);
                self.rules.get(&r).map(|rule| (rule, m.bindings))
            })
            .collect()
    }

    /// Ids of `¬ψ` facts that `e` is an instance of ψ for.
    pub fn refuting(&self, e: &Expr) -> Vec<String> {
        self.refuters.lookup(e).into_iter().map(|m| m.pattern.lemma_id).collect()
    }

    pub fn refutes(&self, lemma: &str, e: &Expr) -> bool {
        self.refuters.get(lemma, Orientation::Whole).is_some_and(|p| p.matches(e).is_some())
    }
}
