//! A tableau-style driver that proves propositional tautologies using only
//! kernel steps.
//!
//! After refuting the goal, each branch saturates its assumptions: conjunctions
//! and equivalences are split, implications and negated equivalences are
//! rewritten into disjunctions, and disjunctions are case-split last. A branch
//! closes on ⊥ or on a complementary pair.

use std::collections::BTreeSet;

use easyprove::kernel::{Complement, FormulaNo, ProofState, RuleRef, Step};
use easyprove::simplify::simplify;
use easyprove::terms::{Connective, Expr, Path};
use easyprove::{Orientation, ProofScript};

const IMPL_AS_OR: &str = "logic/impl-as-or";
const NOT_EQUIV: &str = "logic/not-equiv";

/// Lemmas the driver needs in the task.
pub fn required_lemmas() -> Vec<String> {
    vec![IMPL_AS_OR.into(), NOT_EQUIV.into()]
}

/// Proves the root goal of `state`, or returns `None` if it is not a
/// tautology or `budget` steps do not suffice.
pub fn prove(state: &ProofState, budget: usize) -> Option<ProofState> {
    let mut st = state.clone();
    st.apply(Step::ByContradiction { goal: 1 }).ok()?;
    let g = st.active_goal()?;
    let mut budget = budget;
    branch(&mut st, g, BTreeSet::new(), &mut budget).then_some(st)
}

pub fn prove_script(state: &ProofState, task: &str, budget: usize) -> Option<ProofScript> {
    prove(state, budget).map(|s| s.script(task))
}

fn branch(st: &mut ProofState, g: FormulaNo, mut done: BTreeSet<FormulaNo>, budget: &mut usize) -> bool {
    if st.active_goal() != Some(g) && st.set_active_goal(g).is_err() {
        return false;
    }
    loop {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let ctx = st.context(g);
        if let Some(step) = closing_step(st, &ctx) {
            return st.apply(step).is_ok();
        }
        let todo: Vec<FormulaNo> = ctx.iter().copied().filter(|n| !done.contains(n)).collect();
        let mut progressed = false;
        for &n in &todo {
            let f = st.formula(n).expect("in context").formula.clone();
            let step = if f.as_binary(Connective::And).is_some() {
                Step::ElimConjunction { assumption: n }
            } else if f.as_binary(Connective::Iff).is_some() {
                Step::ElimEquivalence { assumption: n }
            } else if f.as_binary(Connective::Implies).is_some() {
                rewrite(n, IMPL_AS_OR)
            } else if f.as_not().is_some_and(|a| a.as_binary(Connective::Iff).is_some()) {
                rewrite(n, NOT_EQUIV)
            } else {
                continue;
            };
            done.insert(n);
            if st.apply(step).is_err() {
                return false;
            }
            progressed = true;
            break;
        }
        if progressed {
            continue;
        }
        let Some(&n) = todo.iter().find(|n| st.formula(**n).unwrap().formula.as_binary(Connective::Or).is_some())
        else {
            return false;
        };
        done.insert(n);
        if st.apply(Step::CaseAnalysis { assumption: n }).is_err() {
            return false;
        }
        let children = st.goal(g).expect("split goal").children.clone();
        return children.into_iter().all(|c| branch(st, c, done.clone(), budget));
    }
}

fn rewrite(n: FormulaNo, lemma: &str) -> Step {
    Step::RewriteAssumption { assumption: n, rule: RuleRef::new(lemma, Orientation::Left), path: Path::root() }
}

fn closing_step(st: &ProofState, ctx: &[FormulaNo]) -> Option<Step> {
    let f = |n: &FormulaNo| &st.formula(*n).expect("in context").formula;
    if let Some(n) = ctx.iter().find(|n| f(n).is_bot()) {
        return Some(Step::ContradictionFromPair { formula: *n, complement: Complement::Falsum });
    }
    for a in ctx {
        let neg = simplify(&Expr::not(f(a).clone()));
        if let Some(b) = ctx.iter().find(|b| f(b).alpha_eq(&neg)) {
            return Some(Step::ContradictionFromPair { formula: *a, complement: Complement::Assumption(*b) });
        }
    }
    None
}
