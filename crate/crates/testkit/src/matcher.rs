//! Linear-scan matching by guess and check.
//!
//! A pattern variable can only be bound to the query subterm found at the
//! position of its first free occurrence in the skeleton. That guess is
//! confirmed by substituting it back and comparing up to alpha-equivalence,
//! so this never walks pattern and query together the way the index does.

use easyprove::index::{Orientation, Pattern};
use easyprove::terms::{Expr, Path, Substitution};

/// Bindings under which `pattern` becomes `query`.
pub fn brute_match(pattern: &Pattern, query: &Expr) -> Option<Substitution> {
    let mut bindings = Substitution::new();
    for v in &pattern.vars {
        let path = first_free_occurrence(&pattern.skeleton, &v.name)?;
        let value = query.subterm_at(&path).ok()?;
        // a value mentioning a variable bound above it would escape its binder
        let above = query.binders_above(&path).ok()?;
        let fv = value.free_vars();
        if above.iter().any(|b| fv.contains(&b.name)) {
            return None;
        }
        bindings.insert(v.name.clone(), value.clone());
    }
    let image = pattern.skeleton.substitute(&bindings).ok()?;
    image.alpha_eq(query).then_some(bindings)
}

fn first_free_occurrence(e: &Expr, name: &str) -> Option<Path> {
    e.paths().into_iter().find(|p| {
        matches!(e.subterm_at(p), Ok(Expr::Var(v)) if v.name == name)
            && !e.binders_above(p).map(|bs| bs.iter().any(|b| b.name == name)).unwrap_or(true)
    })
}

/// Every pattern matching `query`, sorted like index lookups.
pub fn brute_lookup(patterns: &[Pattern], query: &Expr) -> Vec<(String, Orientation, Substitution)> {
    let mut out: Vec<_> = patterns
        .iter()
        .filter_map(|p| brute_match(p, query).map(|b| (p.lemma_id.clone(), p.orientation, b)))
        .collect();
    out.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use easyprove::terms::Var;

    #[test]
    fn inclusion_example() {
        let (a, b) = (Expr::ind("A"), Expr::ind("B"));
        let pat = Pattern::over_block(
            &[Var::new("A", easyprove::Sort::Individual), Var::new("B", easyprove::Sort::Individual)],
            &Expr::subset(a.clone(), b.clone()),
            "zf/subseteq-def",
            Orientation::Left,
        );
        let query = Expr::subset(Expr::big_union(Expr::powerset(a.clone())), a.clone());
        let got = brute_match(&pat, &query).unwrap();
        assert_eq!(got["A"], Expr::big_union(Expr::powerset(a.clone())));
        assert_eq!(got["B"], a);
    }
}
