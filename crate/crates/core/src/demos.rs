//! The two worked tasks shipped as seed data, with complete proofs.

use crate::index::Orientation;
use crate::kernel::{ProofScript, StepRecord};
use crate::task::{SymbolDecl, TaskDef};

pub const BARBER_ID: &str = "barber";
pub const UNION_OF_POWERSET_ID: &str = "union-of-powerset";

pub fn barber_task() -> TaskDef {
    TaskDef {
        id: BARBER_ID.into(),
        name: "Barber paradox".into(),
        goal: "¬∃A∀B(shaves(A,B) ⇔ ¬shaves(B,B))".into(),
        symbols: vec![SymbolDecl::predicate("shaves", 2)],
        lemmas: vec!["logic/*".into()],
        author: "demo".into(),
        created_at: 0,
    }
}

pub fn union_of_powerset_task() -> TaskDef {
    TaskDef {
        id: UNION_OF_POWERSET_ID.into(),
        name: "Union of powerset".into(),
        goal: "⋃(𝒫(A)) = A".into(),
        symbols: vec![],
        lemmas: vec!["zf/*".into()],
        author: "demo".into(),
        created_at: 1,
    }
}

pub fn demo_tasks() -> Vec<TaskDef> {
    vec![barber_task(), union_of_powerset_task()]
}

fn step(kind: &str, target: u32) -> StepRecord {
    StepRecord::new(kind).with_target(target)
}

fn rewrite(kind: &str, target: u32, lemma: &str) -> StepRecord {
    step(kind, target).with_lemma(lemma).with_orientation(Orientation::Left)
}

/// Contradiction, take this, specialize with A, then the equivalence
/// schema.
pub fn barber_script() -> ProofScript {
    ProofScript::new(
        BARBER_ID,
        vec![
            step("ByContradiction", 1),
            step("TakeThis", 2),
            step("Specialize", 4).with_term("A"),
            step("ContradictionFromPair", 5).with_lemma("logic/equiv-contradiction"),
        ],
    )
}

/// The same opening, finished by case analysis on shaves(A,A).
pub fn barber_case_split_script() -> ProofScript {
    ProofScript::new(
        BARBER_ID,
        vec![
            step("ByContradiction", 1),
            step("TakeThis", 2),
            step("Specialize", 4).with_term("A"),
            step("ExcludedMiddleSplit", 5).with_path(&[0]),
            step("CloseByAssumption", 7),
            step("CloseByAssumption", 10),
        ],
    )
}

/// Two inclusions, each unfolded through the membership definitions.
pub fn union_of_powerset_script() -> ProofScript {
    ProofScript::new(
        UNION_OF_POWERSET_ID,
        vec![
            rewrite("RewriteGoal", 1, "zf/eq-two-inclusions"),
            step("ProveConjuncts", 2),
            rewrite("RewriteGoal", 3, "zf/subseteq-def"),
            step("SetActiveGoal", 4),
            rewrite("RewriteGoal", 4, "zf/subseteq-def"),
            step("SetActiveGoal", 5),
            // ⋃(𝒫(A)) ⊆ A
            step("IntroForall", 5),
            step("IntroImplication", 7),
            rewrite("RewriteAssumption", 8, "zf/bigunion-def"),
            step("TakeThis", 10),
            step("ElimConjunction", 11),
            rewrite("RewriteAssumption", 12, "zf/powerset-def"),
            rewrite("RewriteAssumption", 14, "zf/subseteq-def"),
            step("Specialize", 15).with_term("x"),
            step("ModusPonens", 16).with_lemma("#13"),
            step("CloseByAssumption", 17),
            // A ⊆ ⋃(𝒫(A))
            step("IntroForall", 6),
            step("IntroImplication", 18),
            rewrite("RewriteGoal", 20, "zf/bigunion-def"),
            step("IntroExistsWitness", 21).with_term("A"),
            step("ProveConjuncts", 22),
            rewrite("RewriteGoal", 23, "zf/powerset-def"),
            rewrite("RewriteGoal", 25, "zf/subseteq-def"),
            step("IntroForall", 26),
            step("IntroImplication", 27),
            step("CloseByAssumption", 28),
            step("CloseByAssumption", 19),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_scripts_complete() {
        for (task, script) in [
            (barber_task(), barber_script()),
            (barber_task(), barber_case_split_script()),
            (union_of_powerset_task(), union_of_powerset_script()),
        ] {
            let state = task.replay(&script).unwrap_or_else(|e| panic!("{}: {e}", task.id));
            assert!(state.is_complete(), "{}", task.id);
        }
    }
}
