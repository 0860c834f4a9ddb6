use easyprove::simplify::{is_simplified, simplify};
use easyprove::{parse_formula, print, Context, Expr, Signature};
use easyprove_testkit::checks::{simplifier_case, ATOMS};
use easyprove_testkit::eval::{atoms, truth_table};
use easyprove_testkit::gen::{prop_strategy, rng};
use proptest::prelude::*;

fn read(s: &str) -> Expr {
    parse_formula(s, &Signature::builtin(), &Context::new()).unwrap()
}

#[test]
fn documented_examples() {
    assert_eq!(print(&simplify(&read("φ ∨ ⊤"))), "⊤");
    assert_eq!(print(&simplify(&read("φ ∧ ⊤"))), "φ");
    assert_eq!(print(&simplify(&read("¬(p ∧ q)"))), "¬p ∨ ¬q");
    assert_eq!(print(&simplify(&read("¬¬p"))), "p");
    assert_eq!(print(&simplify(&read("p ∧ (q ∧ r)"))), "p ∧ q ∧ r");
}

#[test]
fn seeded_cases() {
    let mut r = rng(7);
    for _ in 0..2000 {
        simplifier_case(&mut r).unwrap();
    }
}

proptest! {
    #[test]
    fn keeps_truth_table(e in prop_strategy(ATOMS)) {
        let names = atoms(&e);
        prop_assert_eq!(truth_table(&simplify(&e), &names), truth_table(&e, &names));
    }

    #[test]
    fn fixpoint(e in prop_strategy(ATOMS)) {
        let s = simplify(&e);
        prop_assert!(is_simplified(&s));
        prop_assert_eq!(simplify(&s), s);
    }
}
