//! Randomised checks shared by the property tests and the acceptance run.
//!
//! Each check draws its cases from the given generator and returns a
//! description of the first counterexample.

use std::collections::BTreeSet;

use easyprove::index::{LemmaIndex, Orientation, Pattern};
use easyprove::kernel::{ProofState, Role};
use easyprove::simplify::{is_simplified, simplify};
use easyprove::syntax::{parse, parse_formula, print, Context};
use easyprove::terms::{Expr, Sort, Substitution, Var};
use easyprove::theory::{builtin_theories, select_lemmas};
use easyprove::Signature;
use rand::seq::IndexedRandom;
use rand::Rng;

use crate::eval::{is_tautology, truth_table, valid_up_to};
use crate::gen::{self, IND_NAMES, PROP_NAMES};
use crate::matcher::brute_lookup;
use crate::prover;
use crate::walk::{self, Move};

pub type Check = Result<(), String>;

pub const ATOMS: &[&str] = &["p", "q", "r", "s"];

/// Simplification keeps the 16-row truth table and is idempotent.
pub fn simplifier_case(rng: &mut impl Rng) -> Check {
    let e = gen::prop_formula(rng, ATOMS, 6);
    let atoms: Vec<String> = ATOMS.iter().map(|a| a.to_string()).collect();
    let s = simplify(&e);
    if truth_table(&s, &atoms) != truth_table(&e, &atoms) {
        return Err(format!("truth table changed: {} ↦ {}", print(&e), print(&s)));
    }
    if simplify(&s) != s {
        return Err(format!("not idempotent on {}", print(&e)));
    }
    Ok(())
}

/// Printing then parsing gives back the expression.
pub fn round_trip_case(rng: &mut impl Rng, sig: &Signature) -> Check {
    let e = gen::expr(rng, sig, 5);
    round_trip(&e, sig)
}

pub fn round_trip(e: &Expr, sig: &Signature) -> Check {
    let text = print(e);
    // a lone variable has nothing to infer its sort from
    let parsed = match e {
        Expr::Var(v) if v.sort == Sort::Proposition => parse_formula(&text, sig, &Context::new()),
        _ => parse(&text, sig, &Context::new()),
    };
    match parsed {
        Ok(back) if back.alpha_eq(e) => Ok(()),
        Ok(back) => Err(format!("`{text}` read back as {back:?}, expected {e:?}")),
        Err(err) => Err(format!("`{text}` does not parse: {err}")),
    }
}

/// A random pattern over some of the free variables of a random skeleton.
pub fn random_pattern(rng: &mut impl Rng, sig: &Signature, id: usize) -> Pattern {
    let skeleton = loop {
        let e = gen::expr(rng, sig, 3);
        // a bare variable matches everything and says little
        if !matches!(e, Expr::Var(_)) {
            break e;
        }
    };
    let block: Vec<Var> = skeleton
        .free_var_sorts()
        .into_iter()
        .filter(|_| rng.random_bool(0.7))
        .map(|(n, s)| Var::new(n, s))
        .collect();
    let orientation = *[Orientation::Left, Orientation::Right, Orientation::Whole].choose(rng).expect("nonempty");
    Pattern::over_block(&block, &skeleton, &format!("r/{id:03}"), orientation)
}

/// A query that is often an instance of one of `patterns`.
pub fn random_query(rng: &mut impl Rng, sig: &Signature, patterns: &[Pattern]) -> Expr {
    let mut q = match patterns.choose(rng) {
        Some(p) if rng.random_bool(0.6) => {
            let mut s = Substitution::new();
            for v in &p.vars {
                let value = match v.sort {
                    // bare names often collide with binders of the skeleton
                    Sort::Individual if rng.random_bool(0.4) => Expr::ind(*IND_NAMES.choose(rng).expect("nonempty")),
                    Sort::Individual => gen::term(rng, sig, 2),
                    Sort::Proposition => gen::formula(rng, sig, 2),
                };
                s.insert(v.name.clone(), value);
            }
            p.skeleton.substitute(&s).expect("sorts agree")
        }
        _ => gen::expr(rng, sig, 3),
    };
    if rng.random_bool(0.2) && q.sort() == Sort::Proposition {
        let name = *IND_NAMES.choose(rng).expect("nonempty");
        q = Expr::forall(name, q);
    }
    q
}

/// Trie lookup agrees with the brute-force scan, over up to 50 patterns.
pub fn index_case(rng: &mut impl Rng, sig: &Signature) -> Check {
    index_queries(rng, sig, 5)
}

/// One random index of at most 50 patterns, probed with `queries` queries.
pub fn index_queries(rng: &mut impl Rng, sig: &Signature, queries: usize) -> Check {
    let mut patterns: Vec<Pattern> = (0..rng.random_range(1..=40)).map(|i| random_pattern(rng, sig, i)).collect();
    let library: Vec<Pattern> = builtin_theories()
        .iter()
        .flat_map(|t| t.lemmas.iter())
        .flat_map(|l| easyprove::compile_lemma(&l.statement, &l.id).expect("library lemmas compile"))
        .collect();
    patterns.extend(library.choose_multiple(rng, 10).cloned());
    patterns.truncate(50);
    let index = LemmaIndex::from_patterns(patterns.clone());
    for _ in 0..queries {
        let q = random_query(rng, sig, &patterns);
        let got: Vec<_> = index
            .lookup(&q)
            .into_iter()
            .map(|m| (m.pattern.lemma_id, m.pattern.orientation, m.bindings))
            .collect();
        let expected = brute_lookup(index.patterns(), &q);
        if got != expected {
            return Err(format!("query {}: index {got:?}, scan {expected:?}", print(&q)));
        }
    }
    Ok(())
}

/// A proof state for `goal` with the propositional schemas.
pub fn logic_state(goal: &Expr) -> ProofState {
    ProofState::init(goal, Signature::builtin(), select_lemmas(&["logic/*".to_string()]).expect("library"))
        .expect("well-formed goal")
}

/// A random tautology over three atoms.
pub fn random_tautology(rng: &mut impl Rng) -> Expr {
    loop {
        let e = gen::prop_formula(rng, &ATOMS[..3], 4);
        if is_tautology(&e) {
            return e;
        }
    }
}

/// A random formula that is not a tautology.
pub fn random_non_tautology(rng: &mut impl Rng) -> Expr {
    loop {
        let e = gen::prop_formula(rng, &ATOMS[..3], 4);
        if !is_tautology(&e) {
            return e;
        }
    }
}

/// Replaces one random atom occurrence or constant to change the formula.
pub fn mutate_formula(rng: &mut impl Rng, e: &Expr) -> Expr {
    let leaves: Vec<_> = e.paths().into_iter().filter(|p| e.subterm_at(p).unwrap().children().is_empty()).collect();
    let p = leaves.choose(rng).expect("a formula has leaves");
    let replacement = match rng.random_range(0..3) {
        0 => Expr::bot(),
        1 => Expr::prop(*ATOMS.choose(rng).expect("nonempty")),
        _ => Expr::not(e.subterm_at(p).unwrap().clone()),
    };
    e.replace_at(p, replacement).expect("leaf path")
}

#[derive(Debug, Default, Clone, Copy)]
pub struct SoundnessStats {
    pub proved: usize,
    pub mutants: usize,
    pub mutants_rejected: usize,
    pub walks: usize,
    pub walk_completions: usize,
}

/// One round of the soundness harness: a scripted proof of a random
/// tautology, mutated scripts and goals, and a random walk on a random
/// formula. Any completed proof must have a tautology as its goal.
pub fn soundness_case(rng: &mut impl Rng, stats: &mut SoundnessStats) -> Check {
    let goal = random_tautology(rng);
    let start = logic_state(&goal);
    let Some(script) = prover::prove_script(&start, "t", 10_000) else {
        return Err(format!("driver failed on tautology {}", print(&goal)));
    };
    let mut replayed = start.clone();
    replayed.replay(&script.steps).map_err(|e| format!("{}: {e}", print(&goal)))?;
    if !replayed.is_complete() {
        return Err(format!("script for {} does not complete", print(&goal)));
    }
    stats.proved += 1;

    // mutated scripts, on the goal itself and on changed goals
    for _ in 0..4 {
        let mut steps = script.steps.clone();
        let i = rng.random_range(0..steps.len());
        match rng.random_range(0..4) {
            0 => {
                steps.remove(i);
            }
            1 => {
                let j = rng.random_range(0..steps.len());
                steps.swap(i, j);
            }
            2 => {
                if let Some(t) = steps[i].target.as_mut() {
                    *t = (*t + rng.random_range(1..4)) % 12 + 1;
                }
            }
            _ => steps[i].kind = ["CloseByAssumption", "ElimConjunction", "CaseAnalysis"].choose(rng).unwrap().to_string(),
        }
        let target = if rng.random_bool(0.5) { goal.clone() } else { mutate_formula(rng, &goal) };
        let mut st = logic_state(&target);
        stats.mutants += 1;
        let accepted = st.replay(&steps).is_ok() && st.is_complete();
        if !accepted {
            stats.mutants_rejected += 1;
        } else if !is_tautology(&target) {
            return Err(format!("mutated script proved non-tautology {}", print(&target)));
        }
    }
    // the original script on a changed goal
    let changed = mutate_formula(rng, &goal);
    let mut st = logic_state(&changed);
    stats.mutants += 1;
    if st.replay(&script.steps).is_ok() && st.is_complete() {
        if !is_tautology(&changed) {
            return Err(format!("script proved non-tautology {}", print(&changed)));
        }
    } else {
        stats.mutants_rejected += 1;
    }

    // free exploration
    let target = if rng.random_bool(0.5) { random_non_tautology(rng) } else { gen::prop_formula(rng, &ATOMS[..2], 3) };
    let mut st = logic_state(&target);
    stats.walks += 1;
    for _ in 0..60 {
        walk::random_move(&mut st, rng);
        if st.is_complete() {
            stats.walk_completions += 1;
            if !is_tautology(&target) {
                return Err(format!("random walk proved non-tautology {}", print(&target)));
            }
            break;
        }
    }
    Ok(())
}

/// A set-free first-order formula over `P/1`, `R/2` whose terms are
/// variables.
pub fn fol_formula(rng: &mut impl Rng, sig: &Signature, depth: u32) -> Expr {
    let var = |rng: &mut dyn rand::RngCore| Expr::ind(*["x", "y", "z"].choose(rng).expect("nonempty"));
    if depth == 0 || rng.random_bool(0.2) {
        return match rng.random_range(0..4) {
            0 => Expr::App(sig.get("P").unwrap().clone(), vec![var(rng)]),
            1 => Expr::eq(var(rng), var(rng)),
            2 => Expr::prop(*PROP_NAMES.choose(rng).expect("nonempty")),
            _ => Expr::App(sig.get("R").unwrap().clone(), vec![var(rng), var(rng)]),
        };
    }
    let d = depth - 1;
    match rng.random_range(0..7) {
        0 => Expr::not(fol_formula(rng, sig, d)),
        1 => Expr::forall(*["x", "y", "z"].choose(rng).unwrap(), fol_formula(rng, sig, d)),
        2 => Expr::exists(*["x", "y", "z"].choose(rng).unwrap(), fol_formula(rng, sig, d)),
        3 => Expr::and(fol_formula(rng, sig, d), fol_formula(rng, sig, d)),
        4 => Expr::or(fol_formula(rng, sig, d), fol_formula(rng, sig, d)),
        5 => Expr::implies(fol_formula(rng, sig, d), fol_formula(rng, sig, d)),
        _ => Expr::iff(fol_formula(rng, sig, d), fol_formula(rng, sig, d)),
    }
}

/// Random walk on a first-order goal; a completed proof must hold in every
/// model of size at most three.
pub fn fol_soundness_case(rng: &mut impl Rng) -> Check {
    let sig = gen::test_signature();
    let goal = fol_formula(rng, &sig, 3);
    let lemmas = select_lemmas(&["logic/*".to_string(), "zf/eq-refl".to_string()]).expect("library");
    let mut st = ProofState::init(&goal, sig, lemmas).expect("well-formed goal");
    for _ in 0..60 {
        walk::random_move(&mut st, rng);
        if st.is_complete() {
            if !valid_up_to(&goal, 3) {
                return Err(format!("proved {}, which fails in a small model", print(&goal)));
            }
            break;
        }
    }
    Ok(())
}

/// Starting states used by the kernel discipline checks.
pub fn discipline_start(rng: &mut impl Rng) -> ProofState {
    use easyprove::demos;
    match rng.random_range(0..4) {
        0 => demos::barber_task().start().expect("demo task"),
        1 => demos::union_of_powerset_task().start().expect("demo task"),
        2 => logic_state(&random_tautology(rng)),
        _ => logic_state(&gen::prop_formula(rng, &ATOMS[..3], 4)),
    }
}

fn contexts(st: &ProofState) -> Vec<(u32, Option<u32>, BTreeSet<(u32, String)>)> {
    st.data()
        .goals
        .iter()
        .map(|(g, info)| {
            let ctx = st.context(*g).into_iter().map(|n| (n, print(&st.formula(n).unwrap().formula))).collect();
            (*g, info.parent, ctx)
        })
        .collect()
}

/// Random session checking undo/redo, monotone contexts, simplified
/// insertion, descriptor honesty and replay determinism.
pub fn discipline_case(rng: &mut impl Rng, moves: usize) -> Check {
    let start = discipline_start(rng);
    let mut st = start.clone();
    for _ in 0..moves {
        let before = st.clone();
        // descriptor honesty on a random menu
        let menu = walk::random_menu(&st, rng);
        if let Some(d) = menu.iter().filter(|d| d.complete).collect::<Vec<_>>().choose(rng) {
            let mut probe = st.clone();
            probe.apply(d.step.clone()).map_err(|e| format!("offered {} fails: {e}", d.step.kind()))?;
            let added: Vec<(Role, String)> = probe
                .formulas()
                .filter(|f| st.formula(f.number).is_none())
                .map(|f| (f.role, print(&f.formula)))
                .collect();
            let promised: Vec<(Role, String)> = d.effect.formulas.iter().map(|(r, f)| (*r, print(f))).collect();
            if added != promised {
                return Err(format!("{} promised {promised:?}, added {added:?}", d.step.kind()));
            }
        }
        let (mv, ok) = walk::random_move(&mut st, rng);
        if !ok {
            if st != before {
                return Err(format!("failed {mv:?} changed the state"));
            }
            continue;
        }
        if st.can_undo() {
            let mut back = st.clone();
            back.undo().map_err(|e| e.to_string())?;
            let mut again = back.clone();
            again.redo().map_err(|e| e.to_string())?;
            if again.data() != st.data() {
                return Err(format!("redo after undo differs after {mv:?}"));
            }
        }
        if mv == Move::Step {
            let mut back = st.clone();
            back.undo().map_err(|e| e.to_string())?;
            if back.data() != before.data() {
                return Err("undo does not restore the previous state".into());
            }
            // no weakening: a goal keeps its context and new goals extend their parent's
            let old = contexts(&before);
            for (g, parent, ctx) in contexts(&st) {
                let anchor = old.iter().find(|(h, _, _)| *h == g).or_else(|| old.iter().find(|(h, _, _)| Some(*h) == parent));
                if let Some((_, _, prev)) = anchor {
                    if !prev.is_subset(&ctx) {
                        return Err(format!("goal {g} lost assumptions"));
                    }
                }
            }
        }
        for f in st.formulas().filter(|f| f.number >= 2) {
            if !is_simplified(&f.formula) {
                return Err(format!("formula {} is stored unsimplified: {}", f.number, print(&f.formula)));
            }
        }
    }
    let script = st.script("t");
    let mut a = start.initial();
    let mut b = start.initial();
    a.replay(&script.steps).map_err(|e| format!("replay: {e}"))?;
    b.replay(&script.steps).map_err(|e| format!("replay: {e}"))?;
    if a.canonical() != b.canonical() {
        return Err("replays serialise differently".into());
    }
    if a.data() != st.data() {
        return Err("replay differs from the live state".into());
    }
    Ok(())
}
