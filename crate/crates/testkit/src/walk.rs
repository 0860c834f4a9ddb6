//! Random interaction with a proof state: menu picks, holes filled from
//! context, and the occasional undo, redo, delete or goal switch.

use easyprove::kernel::{FormulaNo, ProofState, Step, StepDescriptor};
use easyprove::terms::{Expr, Sort};
use rand::seq::IndexedRandom;
use rand::Rng;

/// A formula number and path in scope at the active goal, with its
/// applicable steps.
pub fn random_menu(st: &ProofState, rng: &mut impl Rng) -> Vec<StepDescriptor> {
    let Some(g) = st.active_goal() else { return Vec::new() };
    let mut numbers = st.context(g);
    numbers.push(g);
    let n = *numbers.choose(rng).expect("goal is listed");
    let paths = st.formula(n).expect("in scope").formula.paths();
    let path = paths.choose(rng).expect("root path");
    st.applicable_steps(n, path).unwrap_or_default()
}

/// Candidate terms of `sort` a user could type at the active goal.
pub fn candidates(st: &ProofState, sort: Sort) -> Vec<Expr> {
    let mut out: Vec<Expr> =
        st.term_context().into_iter().filter(|(_, s)| *s == sort).map(|(v, s)| Expr::var(v, s)).collect();
    if sort == Sort::Proposition {
        if let Some(g) = st.active_goal() {
            for n in st.context(g).into_iter().chain([g]) {
                let f = &st.formula(n).expect("in scope").formula;
                for p in f.paths() {
                    let sub = f.subterm_at(&p).expect("listed path");
                    // only closed-in-place subterms make sense as typed input
                    if sub.sort() == Sort::Proposition && f.binders_above(&p).map(|b| b.is_empty()).unwrap_or(false) {
                        out.push(sub.clone());
                    }
                }
            }
        }
    }
    out
}

/// Replaces the hole in an incomplete step by a context term.
pub fn fill(step: &Step, st: &ProofState, rng: &mut impl Rng) -> Option<Step> {
    let mut pick = |hole: &Expr| -> Option<Expr> { candidates(st, hole.sort()).choose(rng).cloned() };
    Some(match step {
        Step::IntroExistsWitness { goal, term } => Step::IntroExistsWitness { goal: *goal, term: pick(term)? },
        Step::Specialize { assumption, term } => Step::Specialize { assumption: *assumption, term: pick(term)? },
        Step::ProveLemma { goal, formula } => Step::ProveLemma { goal: *goal, formula: pick(formula)? },
        Step::ExcludedMiddleSplit { formula, path, term: Some(t) } => {
            Step::ExcludedMiddleSplit { formula: *formula, path: path.clone(), term: Some(pick(t)?) }
        }
        other => other.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    Step,
    Undo,
    Redo,
    DeleteLast,
    SwitchGoal,
}

/// One random move; returns what was attempted and whether it succeeded.
pub fn random_move(st: &mut ProofState, rng: &mut impl Rng) -> (Move, bool) {
    let roll = rng.random_range(0..20);
    match roll {
        0 => (Move::Undo, st.undo().is_ok()),
        1 => (Move::Redo, st.redo().is_ok()),
        2 => {
            let ok = match st.active_goal() {
                Some(g) => st.delete_last(g).is_ok(),
                None => false,
            };
            (Move::DeleteLast, ok)
        }
        3 => {
            let open: Vec<FormulaNo> = st.open_goals();
            let ok = match open.choose(rng) {
                Some(g) => st.set_active_goal(*g).is_ok(),
                None => false,
            };
            (Move::SwitchGoal, ok)
        }
        _ => {
            let menu = random_menu(st, rng);
            let Some(d) = menu.choose(rng) else { return (Move::Step, false) };
            let step = if d.complete { Some(d.step.clone()) } else { fill(&d.step, st, rng) };
            let ok = match step {
                Some(s) => st.apply(s).is_ok(),
                None => false,
            };
            (Move::Step, ok)
        }
    }
}

/// Applies `moves` random moves.
pub fn random_walk(st: &mut ProofState, rng: &mut impl Rng, moves: usize) {
    for _ in 0..moves {
        random_move(st, rng);
    }
}
