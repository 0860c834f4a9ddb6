//! Normalisation applied to every formula entering a proof.
//!
//! Three passes run in a loop until nothing changes: negations are pushed
//! inward (de Morgan, quantifier duality, `¬(φ⇒ψ)` ↦ `φ∧¬ψ`, double negation
//! removed), truth constants are propagated or eliminated, and `∧`/`∨` chains
//! are re-nested to the left. Negated equivalences are left as they are.

use crate::terms::{Connective, Expr, Quantifier};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimplifierConfig {
    pub propagate_constants: bool,
    pub reassociate_left: bool,
    pub push_negations: bool,
    pub eliminate_double_negation: bool,
}

impl Default for SimplifierConfig {
    fn default() -> Self {
        SimplifierConfig {
            propagate_constants: true,
            reassociate_left: true,
            push_negations: true,
            eliminate_double_negation: true,
        }
    }
}

/// One bottom-up pass of the ⊤/⊥ rewrite table.
pub fn propagate_constants(e: &Expr) -> Expr {
    let e = match e {
        Expr::App(s, args) => Expr::App(s.clone(), args.iter().map(propagate_constants).collect()),
        Expr::Quant(q, v, body) => Expr::Quant(*q, v.clone(), Box::new(propagate_constants(body))),
        _ => return e.clone(),
    };
    fold_constants(e)
}

fn fold_constants(e: Expr) -> Expr {
    if let Expr::Quant(q, _, body) = &e {
        return match q {
            Quantifier::Forall if body.is_top() => Expr::top(),
            Quantifier::Exists if body.is_bot() => Expr::bot(),
            _ => e,
        };
    }
    let Some((c, args)) = e.connective() else {
        return e;
    };
    match (c, args) {
        (Connective::Not, [a]) if a.is_top() => Expr::bot(),
        (Connective::Not, [a]) if a.is_bot() => Expr::top(),
        (Connective::Or, [a, b]) if a.is_top() || b.is_top() => Expr::top(),
        (Connective::Or, [a, b]) if a.is_bot() => b.clone(),
        (Connective::Or, [a, b]) if b.is_bot() => a.clone(),
        (Connective::And, [a, b]) if a.is_bot() || b.is_bot() => Expr::bot(),
        (Connective::And, [a, b]) if a.is_top() => b.clone(),
        (Connective::And, [a, b]) if b.is_top() => a.clone(),
        (Connective::Implies, [a, b]) if a.is_bot() || b.is_top() => Expr::top(),
        (Connective::Implies, [a, b]) if a.is_top() => b.clone(),
        (Connective::Implies, [a, b]) if b.is_bot() => Expr::not(a.clone()),
        (Connective::Iff, [a, b]) if b.is_top() => a.clone(),
        (Connective::Iff, [a, b]) if a.is_top() => b.clone(),
        (Connective::Iff, [a, b]) if b.is_bot() => Expr::not(a.clone()),
        (Connective::Iff, [a, b]) if a.is_bot() => Expr::not(b.clone()),
        _ => e,
    }
}

/// Left-nests every `∧` and `∨` chain, keeping operand order.
pub fn reassociate_left(e: &Expr) -> Expr {
    match e {
        Expr::App(s, args) => {
            for c in [Connective::And, Connective::Or] {
                if e.as_binary(c).is_some() {
                    let mut operands = Vec::new();
                    flatten(e, c, &mut operands);
                    let mut it = operands.into_iter().map(reassociate_left);
                    let first = it.next().expect("binary chain has operands");
                    return it.fold(first, |acc, x| Expr::binary(c, acc, x));
                }
            }
            Expr::App(s.clone(), args.iter().map(reassociate_left).collect())
        }
        Expr::Quant(q, v, body) => Expr::Quant(*q, v.clone(), Box::new(reassociate_left(body))),
        _ => e.clone(),
    }
}

fn flatten<'a>(e: &'a Expr, c: Connective, out: &mut Vec<&'a Expr>) {
    match e.as_binary(c) {
        Some((a, b)) => {
            flatten(a, c, out);
            flatten(b, c, out);
        }
        None => out.push(e),
    }
}

/// Pushes negations to atoms (and to `⇔`, which is left negated), removing
/// double negations.
pub fn push_negations(e: &Expr) -> Expr {
    negations(e, true, true)
}

fn negations(e: &Expr, de_morgan: bool, double: bool) -> Expr {
    let recur = |x: &Expr| negations(x, de_morgan, double);
    let negate = |x: &Expr| negations(&Expr::not(x.clone()), de_morgan, double);
    if let Some(inner) = e.as_not() {
        if let Some(x) = inner.as_not() {
            if double {
                return recur(x);
            }
        } else if de_morgan {
            if let Some((a, b)) = inner.as_binary(Connective::And) {
                return Expr::or(negate(a), negate(b));
            }
            if let Some((a, b)) = inner.as_binary(Connective::Or) {
                return Expr::and(negate(a), negate(b));
            }
            if let Some((a, b)) = inner.as_binary(Connective::Implies) {
                return Expr::and(recur(a), negate(b));
            }
            if let Expr::Quant(q, v, body) = inner {
                return Expr::Quant(q.dual(), v.clone(), Box::new(negate(body)));
            }
        }
        return Expr::not(recur(inner));
    }
    match e {
        Expr::App(s, args) => Expr::App(s.clone(), args.iter().map(recur).collect()),
        Expr::Quant(q, v, body) => Expr::Quant(*q, v.clone(), Box::new(recur(body))),
        _ => e.clone(),
    }
}

/// Runs the enabled passes until a full round changes nothing.
pub fn simplify_with(e: &Expr, cfg: &SimplifierConfig) -> Expr {
    let mut cur = e.clone();
    loop {
        let mut next = cur.clone();
        if cfg.push_negations || cfg.eliminate_double_negation {
            next = negations(&next, cfg.push_negations, cfg.eliminate_double_negation);
        }
        if cfg.propagate_constants {
            next = propagate_constants(&next);
        }
        if cfg.reassociate_left {
            next = reassociate_left(&next);
        }
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// [`simplify_with`] under the default configuration.
pub fn simplify(e: &Expr) -> Expr {
    simplify_with(e, &SimplifierConfig::default())
}

pub fn is_simplified(e: &Expr) -> bool {
    simplify(e) == *e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, Context};
    use crate::terms::{Signature, Sort, SymbolInfo};

    fn p(s: &str) -> Expr {
        let mut sig = Signature::builtin();
        sig.declare(SymbolInfo::declared("shaves", 2, Sort::Proposition)).unwrap();
        parse(s, &sig, &Context::new()).unwrap()
    }

    #[test]
    fn constant_examples() {
        assert_eq!(propagate_constants(&p("φ ∨ ⊤")), Expr::top());
        assert_eq!(propagate_constants(&p("φ ∧ ⊤")), Expr::prop("φ"));
        assert_eq!(propagate_constants(&p("(⊥ ⇒ ψ) ∧ χ")), Expr::prop("χ"));
        assert_eq!(propagate_constants(&p("φ ⇒ ⊥")), p("¬φ"));
        assert_eq!(propagate_constants(&p("⊥ ⇔ φ")), p("¬φ"));
        assert_eq!(propagate_constants(&p("∀x(⊤)")), Expr::top());
        assert_eq!(propagate_constants(&p("∃x(⊥)")), Expr::bot());
    }

    #[test]
    fn reassociation_examples() {
        let (a, b, c, d) = (Expr::prop("a"), Expr::prop("b"), Expr::prop("c"), Expr::prop("d"));
        let e = Expr::and(a.clone(), Expr::and(b.clone(), c.clone()));
        assert_eq!(reassociate_left(&e), Expr::and(Expr::and(a.clone(), b.clone()), c.clone()));
        let e = Expr::or(a.clone(), Expr::or(b.clone(), Expr::or(c.clone(), d.clone())));
        let expected = Expr::or(Expr::or(Expr::or(a.clone(), b.clone()), c.clone()), d);
        assert_eq!(reassociate_left(&e), expected);
        let done = Expr::and(Expr::and(a, b), c);
        assert_eq!(reassociate_left(&done), done);
    }

    #[test]
    fn negation_examples() {
        assert_eq!(
            push_negations(&p("¬¬∃A∀B(shaves(A,B) ⇔ ¬shaves(B,B))")),
            p("∃A∀B(shaves(A,B) ⇔ ¬shaves(B,B))")
        );
        assert_eq!(push_negations(&p("¬(a ∧ b)")), p("¬a ∨ ¬b"));
        assert_eq!(push_negations(&p("¬∀x(x ∈ A ⇒ x ∈ B)")), p("∃x(x ∈ A ∧ ¬x ∈ B)"));
        assert_eq!(push_negations(&p("¬(a ⇔ b)")), p("¬(a ⇔ b)"));
    }

    #[test]
    fn simplify_examples() {
        assert_eq!(simplify(&p("¬(φ ∨ ⊤)")), Expr::bot());
        let s = p("shaves(A,A) ⇔ ¬shaves(A,A)");
        assert_eq!(simplify(&s), s);
        assert_eq!(simplify(&Expr::top()), Expr::top());
        // ⇒⊥ introduces a negation that the next round pushes inward
        assert_eq!(simplify(&p("(a ∧ b) ⇒ ⊥")), p("¬a ∨ ¬b"));
    }

    #[test]
    fn disabled_passes() {
        let cfg = SimplifierConfig { push_negations: false, ..Default::default() };
        assert_eq!(simplify_with(&p("¬(a ∧ ¬¬b)"), &cfg), p("¬(a ∧ b)"));
        let cfg = SimplifierConfig { eliminate_double_negation: false, ..Default::default() };
        assert_eq!(simplify_with(&p("¬¬a"), &cfg), p("¬¬a"));
    }
}
