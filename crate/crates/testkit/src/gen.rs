//! Random expressions.
//!
//! Free names come from disjoint pools per sort, and a proposition binder is
//! only kept when its variable is used, so every generated expression
//! prints to text that parses back to an alpha-equivalent expression.

use easyprove::terms::{builtin, Connective, Expr, Quantifier, Signature, Sort, Symbol, SymbolInfo};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const IND_NAMES: &[&str] = &["x", "y", "z", "A", "B", "C"];
pub const PROP_NAMES: &[&str] = &["p", "q", "r", "s"];

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Built-ins plus `P/1` and `R/2` (predicates), `f/1`, `g/2` and the
/// constant `c`.
pub fn test_signature() -> Signature {
    let mut sig = Signature::builtin();
    for (name, arity, sort) in [
        ("P", 1, Sort::Proposition),
        ("R", 2, Sort::Proposition),
        ("f", 1, Sort::Individual),
        ("g", 2, Sort::Individual),
        ("c", 0, Sort::Individual),
    ] {
        sig.declare(SymbolInfo::declared(name, arity, sort)).expect("fresh names");
    }
    sig
}

fn pick<'a, T>(rng: &mut impl Rng, xs: &'a [T]) -> &'a T {
    &xs[rng.random_range(0..xs.len())]
}

fn sym(sig: &Signature, name: &str) -> Symbol {
    sig.get(name).cloned().unwrap_or_else(|| builtin(name))
}

const CONNECTIVES: [Connective; 4] = [Connective::And, Connective::Or, Connective::Implies, Connective::Iff];

/// A formula over `atoms` built from ⊤, ⊥ and the connectives.
pub fn prop_formula(rng: &mut impl Rng, atoms: &[&str], depth: u32) -> Expr {
    if depth == 0 || rng.random_bool(0.25) {
        return match rng.random_range(0..10) {
            0 => Expr::top(),
            1 => Expr::bot(),
            _ => Expr::prop(*pick(rng, atoms)),
        };
    }
    if rng.random_bool(0.2) {
        return Expr::not(prop_formula(rng, atoms, depth - 1));
    }
    let c = *pick(rng, &CONNECTIVES);
    Expr::binary(c, prop_formula(rng, atoms, depth - 1), prop_formula(rng, atoms, depth - 1))
}

/// An individual term.
pub fn term(rng: &mut impl Rng, sig: &Signature, depth: u32) -> Expr {
    if depth == 0 || rng.random_bool(0.35) {
        return match rng.random_range(0..8) {
            0 => Expr::Const(sym(sig, "c")),
            1 => Expr::empty_set(),
            _ => Expr::ind(*pick(rng, IND_NAMES)),
        };
    }
    let d = depth - 1;
    match rng.random_range(0..7) {
        0 => Expr::App(sym(sig, "f"), vec![term(rng, sig, d)]),
        1 => Expr::App(sym(sig, "g"), vec![term(rng, sig, d), term(rng, sig, d)]),
        2 => Expr::union(term(rng, sig, d), term(rng, sig, d)),
        3 => Expr::inter(term(rng, sig, d), term(rng, sig, d)),
        4 => Expr::big_union(term(rng, sig, d)),
        5 => Expr::powerset(term(rng, sig, d)),
        _ => {
            let n = rng.random_range(1..=3);
            Expr::enumeration((0..n).map(|_| term(rng, sig, d)).collect())
        }
    }
}

/// A first-order formula with set-theoretic atoms.
pub fn formula(rng: &mut impl Rng, sig: &Signature, depth: u32) -> Expr {
    if depth == 0 || rng.random_bool(0.2) {
        let d = depth.min(2);
        return match rng.random_range(0..9) {
            0 => Expr::top(),
            1 => Expr::bot(),
            2 => Expr::prop(*pick(rng, PROP_NAMES)),
            3 => Expr::App(sym(sig, "P"), vec![term(rng, sig, d)]),
            4 => Expr::App(sym(sig, "R"), vec![term(rng, sig, d), term(rng, sig, d)]),
            5 => Expr::eq(term(rng, sig, d), term(rng, sig, d)),
            6 => Expr::member(term(rng, sig, d), term(rng, sig, d)),
            _ => Expr::subset(term(rng, sig, d), term(rng, sig, d)),
        };
    }
    let d = depth - 1;
    match rng.random_range(0..8) {
        0 => Expr::not(formula(rng, sig, d)),
        1 | 2 => {
            let q = if rng.random_bool(0.5) { Quantifier::Forall } else { Quantifier::Exists };
            let body = formula(rng, sig, d);
            let (name, sort) = if rng.random_bool(0.2) {
                (*pick(rng, PROP_NAMES), Sort::Proposition)
            } else {
                (*pick(rng, IND_NAMES), Sort::Individual)
            };
            // an unused binder reads back as an individual
            let sort = if body.free_vars().contains(name) { sort } else { Sort::Individual };
            Expr::quant(q, name, sort, body)
        }
        _ => Expr::binary(*pick(rng, &CONNECTIVES), formula(rng, sig, d), formula(rng, sig, d)),
    }
}

/// A formula or a term.
pub fn expr(rng: &mut impl Rng, sig: &Signature, depth: u32) -> Expr {
    if rng.random_bool(0.75) {
        formula(rng, sig, depth)
    } else {
        term(rng, sig, depth)
    }
}

/// Strategy over propositional formulas with shrinking.
pub fn prop_strategy(atoms: &'static [&'static str]) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        1 => Just(Expr::top()),
        1 => Just(Expr::bot()),
        6 => proptest::sample::select(atoms).prop_map(Expr::prop),
    ];
    leaf.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Expr::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::iff(a, b)),
        ]
    })
}

/// Strategy driving a seeded generator.
pub fn seeded<T: std::fmt::Debug>(f: impl Fn(&mut StdRng) -> T + Clone) -> impl Strategy<Value = T> {
    any::<u64>().prop_map(move |seed| f(&mut rng(seed)))
}
