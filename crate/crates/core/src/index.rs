//! Prefix-tree index of lemma patterns.
//!
//! Patterns are keyed by their pre-order token sequence. Pattern variables
//! become per-sort wildcard tokens and bound variables become de Bruijn
//! indices, so alpha-equivalent skeletons share a key. Every token carries
//! its arity, which lets a wildcard edge skip one complete query subtree.
//! Trie hits are confirmed by a structural matcher that also produces the
//! bindings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::terms::{Expr, Quantifier, Sort, Substitution, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Left,
    Right,
    Whole,
}

impl Orientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::Left => "left",
            Orientation::Right => "right",
            Orientation::Whole => "whole",
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub skeleton: Expr,
    /// Pattern variables in binding order.
    pub vars: Vec<Var>,
    pub lemma_id: String,
    pub orientation: Orientation,
}

impl Pattern {
    /// A pattern over those variables of a universal block that occur free
    /// in `skeleton`; inner binders of the block shadow outer ones.
    pub fn over_block(block: &[Var], skeleton: &Expr, lemma_id: &str, orientation: Orientation) -> Pattern {
        let free = skeleton.free_vars();
        let mut vars: Vec<Var> = Vec::new();
        for v in block.iter().rev() {
            if free.contains(&v.name) && !vars.iter().any(|w| w.name == v.name) {
                vars.push(v.clone());
            }
        }
        vars.reverse();
        Pattern { skeleton: skeleton.clone(), vars, lemma_id: lemma_id.to_string(), orientation }
    }

    pub fn key(&self) -> Vec<KeyToken> {
        let mut out = Vec::new();
        key_tokens(&self.skeleton, &self.vars, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_var(&self, name: &str) -> bool {
        self.vars.iter().any(|v| v.name == name)
    }

    /// Root-anchored match of the skeleton against `query`.
    pub fn matches(&self, query: &Expr) -> Option<Substitution> {
        let mut m = Matcher { pattern: self, bindings: Substitution::new(), env: Vec::new() };
        m.go(&self.skeleton, query).then_some(m.bindings)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("lemma `{0}` has free variables")]
    NotClosed(String),
    #[error("lemma `{0}` contains a hole")]
    HolePresent(String),
}

/// Splits a closed lemma into its rewrite patterns: the two sides of a
/// `⇔`/`=` matrix, or the whole matrix otherwise.
pub fn compile_lemma(lemma: &Expr, id: &str) -> Result<Vec<Pattern>, IndexError> {
    if lemma.has_holes() {
        return Err(IndexError::HolePresent(id.to_string()));
    }
    if !lemma.free_vars().is_empty() {
        return Err(IndexError::NotClosed(id.to_string()));
    }
    let (block, matrix) = strip_universals(lemma);
    let side = |skeleton: &Expr, orientation| Pattern::over_block(&block, skeleton, id, orientation);
    let sides = matrix
        .as_binary(crate::terms::Connective::Iff)
        .or_else(|| matrix.as_equation());
    Ok(match sides {
        Some((l, r)) => vec![side(l, Orientation::Left), side(r, Orientation::Right)],
        None => vec![side(matrix, Orientation::Whole)],
    })
}

/// The outermost block of universally quantified variables and the matrix
/// below it.
pub fn strip_universals(e: &Expr) -> (Vec<Var>, &Expr) {
    let mut vars = Vec::new();
    let mut cur = e;
    while let Some((v, body)) = cur.as_quant(Quantifier::Forall) {
        vars.push(v.clone());
        cur = body;
    }
    (vars, cur)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KeyToken {
    Symbol { name: String, arity: usize },
    Free(String),
    /// de Bruijn index of a bound variable.
    Bound(usize),
    Binder(Quantifier, Sort),
    Wildcard(Sort),
}

impl fmt::Display for KeyToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KeyToken::Symbol { name, .. } => f.write_str(name),
            KeyToken::Free(name) => f.write_str(name),
            KeyToken::Bound(i) => write!(f, "#{i}"),
            KeyToken::Binder(q, _) => f.write_str(q.symbol()),
            KeyToken::Wildcard(Sort::Individual) => f.write_str("?ind"),
            KeyToken::Wildcard(Sort::Proposition) => f.write_str("?prop"),
        }
    }
}

fn key_tokens<'a>(e: &'a Expr, vars: &[Var], bound: &mut Vec<&'a str>, out: &mut Vec<KeyToken>) {
    match e {
        Expr::Var(v) => {
            if let Some(pos) = bound.iter().rposition(|b| *b == v.name) {
                out.push(KeyToken::Bound(bound.len() - 1 - pos));
            } else if vars.iter().any(|w| w.name == v.name) {
                out.push(KeyToken::Wildcard(v.sort));
            } else {
                out.push(KeyToken::Free(v.name.clone()));
            }
        }
        Expr::Const(s) => out.push(KeyToken::Symbol { name: s.name().to_string(), arity: 0 }),
        Expr::App(s, args) => {
            out.push(KeyToken::Symbol { name: s.name().to_string(), arity: args.len() });
            for a in args {
                key_tokens(a, vars, bound, out);
            }
        }
        Expr::Quant(q, v, body) => {
            out.push(KeyToken::Binder(*q, v.sort));
            bound.push(&v.name);
            key_tokens(body, vars, bound, out);
            bound.pop();
        }
        Expr::Hole(_) => unreachable!("holes are rejected before keying"),
    }
}

/// Flattened query node.
struct QueryToken {
    token: KeyToken,
    sort: Sort,
    /// Index one past the end of this node's subtree.
    end: usize,
    /// No bound variable inside refers to a binder outside the subtree.
    closed: bool,
}

fn flatten_query(e: &Expr) -> Vec<QueryToken> {
    fn go<'a>(e: &'a Expr, bound: &mut Vec<&'a str>, out: &mut Vec<QueryToken>) -> usize {
        let at = out.len();
        let depth = bound.len();
        let sort = e.sort();
        out.push(QueryToken { token: KeyToken::Bound(0), sort, end: 0, closed: true });
        // Lowest binder level referenced inside the subtree.
        let mut lowest = usize::MAX;
        let token = match e {
            Expr::Var(v) => match bound.iter().rposition(|b| *b == v.name) {
                Some(pos) => {
                    lowest = pos;
                    KeyToken::Bound(bound.len() - 1 - pos)
                }
                None => KeyToken::Free(v.name.clone()),
            },
            Expr::Const(s) => KeyToken::Symbol { name: s.name().to_string(), arity: 0 },
            Expr::App(s, args) => {
                for a in args {
                    lowest = lowest.min(go(a, bound, out));
                }
                KeyToken::Symbol { name: s.name().to_string(), arity: args.len() }
            }
            Expr::Quant(q, v, body) => {
                bound.push(&v.name);
                lowest = lowest.min(go(body, bound, out));
                bound.pop();
                KeyToken::Binder(*q, v.sort)
            }
            Expr::Hole(_) => unreachable!("holes are rejected before lookup"),
        };
        let end = out.len();
        out[at] = QueryToken { token, sort, end, closed: lowest == usize::MAX || lowest >= depth };
        lowest
    }
    let mut out = Vec::new();
    go(e, &mut Vec::new(), &mut out);
    out
}

struct Matcher<'p> {
    pattern: &'p Pattern,
    bindings: Substitution,
    /// Pairs of (skeleton binder, query binder) names, innermost last.
    env: Vec<(&'p str, String)>,
}

impl<'p> Matcher<'p> {
    fn go(&mut self, pat: &'p Expr, q: &Expr) -> bool {
        match pat {
            Expr::Var(v) => {
                let pat_pos = self.env.iter().rposition(|(p, _)| *p == v.name);
                if pat_pos.is_none() && self.pattern.is_var(&v.name) {
                    return self.bind(v, q);
                }
                let Expr::Var(w) = q else { return false };
                if v.sort != w.sort {
                    return false;
                }
                let q_pos = self.env.iter().rposition(|(_, n)| *n == w.name);
                match (pat_pos, q_pos) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => v.name == w.name,
                    _ => false,
                }
            }
            Expr::Const(s) => matches!(q, Expr::Const(t) if s == t),
            Expr::App(s, args) => match q {
                Expr::App(t, qargs) if s == t && args.len() == qargs.len() => {
                    args.iter().zip(qargs).all(|(a, b)| self.go(a, b))
                }
                _ => false,
            },
            Expr::Quant(k, v, body) => match q {
                Expr::Quant(r, w, qbody) if k == r && v.sort == w.sort => {
                    self.env.push((&v.name, w.name.clone()));
                    let ok = self.go(body, qbody);
                    self.env.pop();
                    ok
                }
                _ => false,
            },
            Expr::Hole(_) => false,
        }
    }

    fn bind(&mut self, v: &Var, q: &Expr) -> bool {
        if q.sort() != v.sort {
            return false;
        }
        let fv = q.free_vars();
        if self.env.iter().any(|(_, n)| fv.contains(n)) {
            return false;
        }
        match self.bindings.get(&v.name) {
            Some(prev) => prev.alpha_eq(q),
            None => {
                self.bindings.insert(v.name.clone(), q.clone());
                true
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchResult {
    pub pattern: Pattern,
    pub bindings: Substitution,
}

#[derive(Debug, Clone, Default)]
struct TrieNode {
    edges: BTreeMap<KeyToken, usize>,
    entries: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct LemmaIndex {
    nodes: Vec<TrieNode>,
    patterns: Vec<Pattern>,
    ids: BTreeSet<(String, Orientation)>,
}

impl Default for LemmaIndex {
    fn default() -> Self {
        LemmaIndex { nodes: vec![TrieNode::default()], patterns: Vec::new(), ids: BTreeSet::new() }
    }
}

impl LemmaIndex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `pat`; a second pattern with the same lemma id and orientation
    /// is ignored.
    pub fn insert(&mut self, pat: Pattern) {
        if !self.ids.insert((pat.lemma_id.clone(), pat.orientation)) {
            return;
        }
        let mut node = 0;
        for tok in pat.key() {
            node = match self.nodes[node].edges.get(&tok) {
                Some(&n) => n,
                None => {
                    self.nodes.push(TrieNode::default());
                    let n = self.nodes.len() - 1;
                    self.nodes[node].edges.insert(tok, n);
                    n
                }
            };
        }
        self.nodes[node].entries.push(self.patterns.len());
        self.patterns.push(pat);
    }

    pub fn with(mut self, pat: Pattern) -> Self {
        self.insert(pat);
        self
    }

    pub fn from_patterns(patterns: impl IntoIterator<Item = Pattern>) -> Self {
        let mut index = Self::new();
        for p in patterns {
            index.insert(p);
        }
        index
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Outgoing edge labels of the root node.
    pub fn root_tokens(&self) -> Vec<&KeyToken> {
        self.nodes[0].edges.keys().collect()
    }

    pub fn get(&self, lemma_id: &str, orientation: Orientation) -> Option<&Pattern> {
        self.patterns.iter().find(|p| p.lemma_id == lemma_id && p.orientation == orientation)
    }

    /// Every pattern matching `query` at its root, ordered by lemma id then
    /// orientation.
    pub fn lookup(&self, query: &Expr) -> Vec<MatchResult> {
        if query.has_holes() {
            return Vec::new();
        }
        let flat = flatten_query(query);
        let mut hits = Vec::new();
        self.walk(0, 0, &flat, &mut hits);
        hits.sort_unstable();
        hits.dedup();
        let mut out: Vec<MatchResult> = hits
            .into_iter()
            .filter_map(|i| {
                let pattern = &self.patterns[i];
                pattern.matches(query).map(|bindings| MatchResult { pattern: pattern.clone(), bindings })
            })
            .collect();
        out.sort_by(|a, b| {
            (&a.pattern.lemma_id, a.pattern.orientation).cmp(&(&b.pattern.lemma_id, b.pattern.orientation))
        });
        out
    }

    fn walk(&self, node: usize, at: usize, q: &[QueryToken], hits: &mut Vec<usize>) {
        let trie = &self.nodes[node];
        let Some(qt) = q.get(at) else {
            hits.extend(&trie.entries);
            return;
        };
        if let Some(&next) = trie.edges.get(&qt.token) {
            self.walk(next, at + 1, q, hits);
        }
        if qt.closed {
            if let Some(&next) = trie.edges.get(&KeyToken::Wildcard(qt.sort)) {
                self.walk(next, qt.end, q, hits);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, Context};
    use crate::terms::{Signature, SymbolInfo};

    fn p(s: &str) -> Expr {
        let mut sig = Signature::builtin();
        sig.declare(SymbolInfo::declared("shaves", 2, Sort::Proposition)).unwrap();
        parse(s, &sig, &Context::new()).unwrap()
    }

    fn key_text(pat: &Pattern) -> String {
        pat.key().iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
    }

    #[test]
    fn compiles_inclusion_definition() {
        let pats = compile_lemma(&p("∀A∀B(A ⊆ B ⇔ ∀x(x ∈ A ⇒ x ∈ B))"), "zf/subseteq-def").unwrap();
        assert_eq!(pats.len(), 2);
        assert_eq!(pats[0].orientation, Orientation::Left);
        assert_eq!(pats[0].skeleton, p("A ⊆ B"));
        assert_eq!(pats[1].orientation, Orientation::Right);
        assert!(pats[1].skeleton.alpha_eq(&p("∀x(x ∈ A ⇒ x ∈ B)")));
        let names: Vec<_> = pats[0].vars.iter().map(|v| v.name.as_str()).collect();
        assert_eq!(names, ["A", "B"]);
        assert_eq!(key_text(&pats[0]), "⊆, ?ind, ?ind");
    }

    #[test]
    fn compiles_degenerate_and_schema_lemmas() {
        let pats = compile_lemma(&p("∀x(x = x)"), "zf/eq-refl").unwrap();
        assert_eq!(pats.len(), 2);
        assert!(pats.iter().all(|pat| pat.skeleton == Expr::ind("x")));
        let pats = compile_lemma(&p("∀p(¬(p ⇔ ¬p))"), "logic/equiv-contradiction").unwrap();
        assert_eq!(pats.len(), 1);
        assert_eq!(pats[0].orientation, Orientation::Whole);
        assert_eq!(pats[0].vars, vec![Var::new("p", Sort::Proposition)]);
        assert_eq!(compile_lemma(&p("x ∈ A"), "bad"), Err(IndexError::NotClosed("bad".into())));
    }

    #[test]
    fn insert_is_idempotent_and_branches_on_heads() {
        let sub = compile_lemma(&p("∀A∀B(A ⊆ B ⇔ ⊤)"), "a").unwrap().remove(0);
        let mem = compile_lemma(&p("∀A∀B(A ∈ B ⇔ ⊤)"), "b").unwrap().remove(0);
        let mut index = LemmaIndex::new();
        index.insert(sub.clone());
        index.insert(sub);
        assert_eq!(index.len(), 1);
        index.insert(mem);
        let heads: Vec<String> = index.root_tokens().iter().map(|t| t.to_string()).collect();
        assert_eq!(heads.len(), 2);
        assert!(heads.contains(&"⊆".to_string()) && heads.contains(&"∈".to_string()));
    }

    #[test]
    fn matches_union_of_powerset_goal() {
        let index = LemmaIndex::from_patterns(
            compile_lemma(&p("∀A∀B(A ⊆ B ⇔ ∀x(x ∈ A ⇒ x ∈ B))"), "zf/subseteq-def").unwrap(),
        );
        let hits = index.lookup(&p("⋃(𝒫(A)) ⊆ A"));
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].pattern.orientation, Orientation::Left);
        assert_eq!(hits[0].bindings["A"], p("⋃(𝒫(A))"));
        assert_eq!(hits[0].bindings["B"], p("A"));
        assert!(index.lookup(&p("shaves(A,B)")).is_empty());
        // the right side matches modulo bound-variable names
        let hits = index.lookup(&p("∀y(y ∈ C ⇒ y ∈ D)"));
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].pattern.orientation, Orientation::Right);
        // but never binds a wildcard to a captured variable
        assert!(index.lookup(&p("∀y(y ∈ y ⇒ y ∈ D)")).is_empty());
    }

    #[test]
    fn nonlinear_patterns() {
        let schema = compile_lemma(&p("∀p(¬(p ⇔ ¬p))"), "s").unwrap();
        let eq = compile_lemma(&p("∀x∀y(x = y ⇒ ⊤)"), "e").unwrap();
        let index = LemmaIndex::from_patterns(schema.into_iter().chain(eq));
        assert!(index.lookup(&p("¬(a ⇔ ¬a)")).len() == 1);
        assert!(index.lookup(&p("¬(a ⇔ ¬b)")).is_empty());
        let index = LemmaIndex::from_patterns(compile_lemma(&p("∀x∀y(x = y ⇔ y = x)"), "sym").unwrap());
        let hits = index.lookup(&p("x = x"));
        assert_eq!(hits.len(), 2);
        assert_eq!(hits[0].bindings["x"], Expr::ind("x"));
        assert_eq!(hits[0].bindings["y"], Expr::ind("x"));
    }
}
