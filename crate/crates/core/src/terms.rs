//! Expression trees shared by terms and formulas.
//!
//! A single [`Expr`] type carries both individual-sorted terms (set
//! expressions, variables) and proposition-sorted formulas. Positions inside
//! an expression are addressed by [`Path`]s of child indices.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Syntactic category of an expression node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sort {
    Individual,
    Proposition,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Individual => f.write_str("individual"),
            Sort::Proposition => f.write_str("proposition"),
        }
    }
}

/// How a symbol is written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fixity {
    /// Prefix operator without parentheses (`¬`).
    Prefix,
    /// Binary infix operator.
    Infix,
    /// Unary set-forming operator written `⋃(A)`, `𝒫(A)`.
    BigOp,
    Quantifier,
    /// Variadic `{t₁,…,tₙ}`.
    Enumeration,
    /// Declared predicate, function or constant, written `f(t₁,…,tₙ)` or `c`.
    Function,
}

pub const NOT: &str = "¬";
pub const AND: &str = "∧";
pub const OR: &str = "∨";
pub const IMPLIES: &str = "⇒";
pub const IFF: &str = "⇔";
pub const TOP: &str = "⊤";
pub const BOT: &str = "⊥";
pub const FORALL: &str = "∀";
pub const EXISTS: &str = "∃";
pub const EQ: &str = "=";
pub const IN: &str = "∈";
pub const SUBSETEQ: &str = "⊆";
pub const UNION: &str = "∪";
pub const INTER: &str = "∩";
pub const BIGUNION: &str = "⋃";
pub const POWERSET: &str = "𝒫";
pub const EMPTYSET: &str = "∅";
pub const ENUMERATION: &str = "{}";

/// Binding strengths used by the parser and printer, loosest first.
pub mod prec {
    pub const IFF: u8 = 1;
    pub const IMPLIES: u8 = 2;
    pub const OR: u8 = 3;
    pub const AND: u8 = 4;
    pub const UNARY: u8 = 5;
    pub const RELATION: u8 = 6;
    pub const UNION: u8 = 7;
    pub const INTER: u8 = 8;
    pub const PREFIX: u8 = 9;
    pub const ATOM: u8 = 10;
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolInfo {
    pub name: String,
    pub arity: usize,
    pub sort: Sort,
    pub arg_sorts: Vec<Sort>,
    pub fixity: Fixity,
    pub precedence: u8,
    pub shorthand: Option<String>,
}

impl SymbolInfo {
    /// A user-declared predicate (`sort` = proposition) or function symbol
    /// over individuals.
    pub fn declared(name: impl Into<String>, arity: usize, sort: Sort) -> Self {
        SymbolInfo {
            name: name.into(),
            arity,
            sort,
            arg_sorts: vec![Sort::Individual; arity],
            fixity: Fixity::Function,
            precedence: prec::ATOM,
            shorthand: None,
        }
    }

    /// Whether an application with `n` arguments is well-formed.
    pub fn accepts(&self, n: usize) -> bool {
        match self.fixity {
            Fixity::Enumeration => n >= 1,
            _ => n == self.arity,
        }
    }

    /// Sort expected for argument `i`.
    pub fn arg_sort(&self, i: usize) -> Sort {
        match self.fixity {
            Fixity::Enumeration => Sort::Individual,
            _ => self.arg_sorts[i],
        }
    }
}

/// Shared handle to a [`SymbolInfo`]; compared and ordered by name.
#[derive(Clone)]
pub struct Symbol(Arc<SymbolInfo>);

impl Symbol {
    pub fn new(info: SymbolInfo) -> Self {
        Symbol(Arc::new(info))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn info(&self) -> &SymbolInfo {
        &self.0
    }

    pub fn sort(&self) -> Sort {
        self.0.sort
    }

    pub fn is(&self, name: &str) -> bool {
        self.0.name == name
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.name)
    }
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        self.0.name == other.0.name
    }
}

impl Eq for Symbol {}

impl std::hash::Hash for Symbol {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.name.hash(state)
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.name.cmp(&other.0.name)
    }
}

fn builtin_table() -> &'static BTreeMap<&'static str, Symbol> {
    static TABLE: OnceLock<BTreeMap<&'static str, Symbol>> = OnceLock::new();
    TABLE.get_or_init(|| {
        use Fixity::*;
        use Sort::*;
        let p = Proposition;
        let i = Individual;
        let entries: [(&'static str, Sort, Vec<Sort>, Fixity, u8, Option<&str>); 18] = [
            (NOT, p, vec![p], Prefix, prec::UNARY, Some("\\neg")),
            (AND, p, vec![p, p], Infix, prec::AND, Some("\\wedge")),
            (OR, p, vec![p, p], Infix, prec::OR, Some("\\vee")),
            (IMPLIES, p, vec![p, p], Infix, prec::IMPLIES, Some("\\Rightarrow")),
            (IFF, p, vec![p, p], Infix, prec::IFF, Some("\\Leftrightarrow")),
            (TOP, p, vec![], Function, prec::ATOM, Some("\\top")),
            (BOT, p, vec![], Function, prec::ATOM, Some("\\bot")),
            (FORALL, p, vec![p], Quantifier, prec::UNARY, Some("\\forall")),
            (EXISTS, p, vec![p], Quantifier, prec::UNARY, Some("\\exists")),
            (EQ, p, vec![i, i], Infix, prec::RELATION, None),
            (IN, p, vec![i, i], Infix, prec::RELATION, Some("\\in")),
            (SUBSETEQ, p, vec![i, i], Infix, prec::RELATION, Some("\\subseteq")),
            (UNION, i, vec![i, i], Infix, prec::UNION, Some("\\cup")),
            (INTER, i, vec![i, i], Infix, prec::INTER, Some("\\cap")),
            (BIGUNION, i, vec![i], BigOp, prec::PREFIX, Some("\\bigcup")),
            (POWERSET, i, vec![i], BigOp, prec::PREFIX, Some("\\powerset")),
            (EMPTYSET, i, vec![], Function, prec::ATOM, Some("\\emptyset")),
            (ENUMERATION, i, vec![], Enumeration, prec::ATOM, None),
        ];
        entries
            .into_iter()
            .map(|(name, sort, arg_sorts, fixity, precedence, shorthand)| {
                let info = SymbolInfo {
                    name: name.to_string(),
                    arity: arg_sorts.len(),
                    sort,
                    arg_sorts,
                    fixity,
                    precedence,
                    shorthand: shorthand.map(str::to_string),
                };
                (name, Symbol::new(info))
            })
            .collect()
    })
}

/// Built-in symbol by name. Panics on an unknown name; only used with the
/// constants of this module.
pub fn builtin(name: &str) -> Symbol {
    builtin_table()
        .get(name)
        .unwrap_or_else(|| panic!("unknown builtin symbol {name}"))
        .clone()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("symbol `{0}` is already declared")]
    Duplicate(String),
    #[error("symbol `{0}` is not a valid identifier")]
    BadName(String),
}

/// Set of symbols available for parsing, keyed by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    symbols: BTreeMap<String, Symbol>,
}

impl Signature {
    /// Connectives, quantifiers and the set-theory vocabulary.
    pub fn builtin() -> Self {
        Signature {
            symbols: builtin_table()
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
        }
    }

    pub fn declare(&mut self, info: SymbolInfo) -> Result<Symbol, SignatureError> {
        if self.symbols.contains_key(&info.name) {
            return Err(SignatureError::Duplicate(info.name));
        }
        if !is_identifier(&info.name) {
            return Err(SignatureError::BadName(info.name));
        }
        let sym = Symbol::new(info);
        self.symbols.insert(sym.name().to_string(), sym.clone());
        Ok(sym)
    }

    pub fn get(&self, name: &str) -> Option<&Symbol> {
        self.symbols.get(name)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.symbols.values()
    }

    /// Declared symbols that are not part of the built-in vocabulary.
    pub fn declared(&self) -> impl Iterator<Item = &Symbol> {
        self.symbols
            .values()
            .filter(|s| !builtin_table().contains_key(s.name()))
    }
}

impl Default for Signature {
    fn default() -> Self {
        Self::builtin()
    }
}

/// Characters that may continue an identifier after its first letter.
pub(crate) fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() && !is_operator_char(c)
        || c == '_'
        || matches!(c, '′' | '″' | '‴')
        || ('₀'..='₉').contains(&c)
}

pub(crate) fn is_ident_start(c: char) -> bool {
    (c.is_alphabetic() || c == '_') && !is_operator_char(c)
}

pub(crate) fn is_operator_char(c: char) -> bool {
    matches!(
        c,
        '¬' | '∧' | '∨' | '⇒' | '⇔' | '⊤' | '⊥' | '∀' | '∃' | '=' | '∈' | '⊆' | '∪' | '∩' | '⋃' | '𝒫' | '∅'
    )
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if is_ident_start(c)) && chars.all(is_ident_continue)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn symbol(self) -> &'static str {
        match self {
            Quantifier::Forall => FORALL,
            Quantifier::Exists => EXISTS,
        }
    }

    pub fn dual(self) -> Self {
        match self {
            Quantifier::Forall => Quantifier::Exists,
            Quantifier::Exists => Quantifier::Forall,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub name: String,
    pub sort: Sort,
}

impl Var {
    pub fn new(name: impl Into<String>, sort: Sort) -> Self {
        Var { name: name.into(), sort }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hole {
    pub id: u32,
    pub sort: Sort,
}

/// Propositional connectives, recognised by symbol name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Connective {
    Not,
    And,
    Or,
    Implies,
    Iff,
}

impl Connective {
    pub fn symbol(self) -> &'static str {
        match self {
            Connective::Not => NOT,
            Connective::And => AND,
            Connective::Or => OR,
            Connective::Implies => IMPLIES,
            Connective::Iff => IFF,
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            NOT => Connective::Not,
            AND => Connective::And,
            OR => Connective::Or,
            IMPLIES => Connective::Implies,
            IFF => Connective::Iff,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    Var(Var),
    Const(Symbol),
    App(Symbol, Vec<Expr>),
    Quant(Quantifier, Var, Box<Expr>),
    Hole(Hole),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("invalid path {path}: no child {index} at depth {depth}")]
    InvalidPath { path: Path, depth: usize, index: usize },
    #[error("sort mismatch: expected {expected}, found {found}")]
    SortMismatch { expected: Sort, found: Sort },
    #[error("expression contains a hole")]
    HolePresent,
    #[error("symbol `{symbol}` does not take {given} argument(s)")]
    Arity { symbol: String, given: usize },
}

impl Expr {
    pub fn var(name: impl Into<String>, sort: Sort) -> Self {
        Expr::Var(Var::new(name, sort))
    }

    /// Individual-sorted variable.
    pub fn ind(name: impl Into<String>) -> Self {
        Expr::var(name, Sort::Individual)
    }

    /// Proposition-sorted variable.
    pub fn prop(name: impl Into<String>) -> Self {
        Expr::var(name, Sort::Proposition)
    }

    pub fn hole(id: u32, sort: Sort) -> Self {
        Expr::Hole(Hole { id, sort })
    }

    pub fn top() -> Self {
        Expr::Const(builtin(TOP))
    }

    pub fn bot() -> Self {
        Expr::Const(builtin(BOT))
    }

    pub fn empty_set() -> Self {
        Expr::Const(builtin(EMPTYSET))
    }

    pub fn not(e: Expr) -> Self {
        Expr::App(builtin(NOT), vec![e])
    }

    pub fn and(a: Expr, b: Expr) -> Self {
        Expr::App(builtin(AND), vec![a, b])
    }

    pub fn or(a: Expr, b: Expr) -> Self {
        Expr::App(builtin(OR), vec![a, b])
    }

    pub fn implies(a: Expr, b: Expr) -> Self {
        Expr::App(builtin(IMPLIES), vec![a, b])
    }

    pub fn iff(a: Expr, b: Expr) -> Self {
        Expr::App(builtin(IFF), vec![a, b])
    }

    pub fn binary(c: Connective, a: Expr, b: Expr) -> Self {
        Expr::App(builtin(c.symbol()), vec![a, b])
    }

    pub fn quant(q: Quantifier, name: impl Into<String>, sort: Sort, body: Expr) -> Self {
        Expr::Quant(q, Var::new(name, sort), Box::new(body))
    }

    pub fn forall(name: impl Into<String>, body: Expr) -> Self {
        Expr::quant(Quantifier::Forall, name, Sort::Individual, body)
    }

    pub fn exists(name: impl Into<String>, body: Expr) -> Self {
        Expr::quant(Quantifier::Exists, name, Sort::Individual, body)
    }

    pub fn eq(a: Expr, b: Expr) -> Self {
        Expr::App(builtin(EQ), vec![a, b])
    }

    pub fn member(a: Expr, b: Expr) -> Self {
        Expr::App(builtin(IN), vec![a, b])
    }

    pub fn subset(a: Expr, b: Expr) -> Self {
        Expr::App(builtin(SUBSETEQ), vec![a, b])
    }

    pub fn union(a: Expr, b: Expr) -> Self {
        Expr::App(builtin(UNION), vec![a, b])
    }

    pub fn inter(a: Expr, b: Expr) -> Self {
        Expr::App(builtin(INTER), vec![a, b])
    }

    pub fn big_union(a: Expr) -> Self {
        Expr::App(builtin(BIGUNION), vec![a])
    }

    pub fn powerset(a: Expr) -> Self {
        Expr::App(builtin(POWERSET), vec![a])
    }

    pub fn enumeration(items: Vec<Expr>) -> Self {
        Expr::App(builtin(ENUMERATION), items)
    }

    /// Checked application of `sym` to `args`.
    pub fn apply(sym: Symbol, args: Vec<Expr>) -> Result<Self, TermError> {
        if !sym.info().accepts(args.len()) {
            return Err(TermError::Arity { symbol: sym.name().to_string(), given: args.len() });
        }
        for (i, a) in args.iter().enumerate() {
            let expected = sym.info().arg_sort(i);
            if a.sort() != expected {
                return Err(TermError::SortMismatch { expected, found: a.sort() });
            }
        }
        if args.is_empty() && sym.info().fixity != Fixity::Enumeration {
            Ok(Expr::Const(sym))
        } else {
            Ok(Expr::App(sym, args))
        }
    }

    pub fn sort(&self) -> Sort {
        match self {
            Expr::Var(v) => v.sort,
            Expr::Const(s) | Expr::App(s, _) => s.sort(),
            Expr::Quant(..) => Sort::Proposition,
            Expr::Hole(h) => h.sort,
        }
    }

    pub fn children(&self) -> &[Expr] {
        match self {
            Expr::App(_, args) => args,
            Expr::Quant(_, _, body) => std::slice::from_ref(body.as_ref()),
            _ => &[],
        }
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Expr::Const(s) if s.is(TOP))
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, Expr::Const(s) if s.is(BOT))
    }

    /// The connective at the root together with its operands.
    pub fn connective(&self) -> Option<(Connective, &[Expr])> {
        match self {
            Expr::App(s, args) => Connective::from_name(s.name()).map(|c| (c, args.as_slice())),
            _ => None,
        }
    }

    pub fn as_not(&self) -> Option<&Expr> {
        match self.connective() {
            Some((Connective::Not, [a])) => Some(a),
            _ => None,
        }
    }

    pub fn as_binary(&self, c: Connective) -> Option<(&Expr, &Expr)> {
        match self.connective() {
            Some((k, [a, b])) if k == c => Some((a, b)),
            _ => None,
        }
    }

    /// Operands of a root `=` node.
    pub fn as_equation(&self) -> Option<(&Expr, &Expr)> {
        match self {
            Expr::App(s, args) if s.is(EQ) => Some((&args[0], &args[1])),
            _ => None,
        }
    }

    pub fn as_quant(&self, q: Quantifier) -> Option<(&Var, &Expr)> {
        match self {
            Expr::Quant(k, v, body) if *k == q => Some((v, body)),
            _ => None,
        }
    }

    pub fn has_holes(&self) -> bool {
        match self {
            Expr::Hole(_) => true,
            _ => self.children().iter().any(Expr::has_holes),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(Expr::size).sum::<usize>()
    }

    pub fn subterm_at(&self, path: &Path) -> Result<&Expr, TermError> {
        let mut cur = self;
        for (depth, &index) in path.0.iter().enumerate() {
            cur = cur.children().get(index).ok_or_else(|| TermError::InvalidPath {
                path: path.clone(),
                depth,
                index,
            })?;
        }
        Ok(cur)
    }

    /// Copy of `self` with the node at `path` replaced by `replacement`.
    pub fn replace_at(&self, path: &Path, replacement: Expr) -> Result<Expr, TermError> {
        let old = self.subterm_at(path)?;
        if old.sort() != replacement.sort() {
            return Err(TermError::SortMismatch { expected: old.sort(), found: replacement.sort() });
        }
        Ok(self.rebuild_at(&path.0, replacement))
    }

    fn rebuild_at(&self, path: &[usize], replacement: Expr) -> Expr {
        let Some((&first, rest)) = path.split_first() else {
            return replacement;
        };
        match self {
            Expr::App(s, args) => {
                let mut args = args.clone();
                args[first] = args[first].rebuild_at(rest, replacement);
                Expr::App(s.clone(), args)
            }
            Expr::Quant(q, v, body) => Expr::Quant(*q, v.clone(), Box::new(body.rebuild_at(rest, replacement))),
            _ => unreachable!("path validated by subterm_at"),
        }
    }

    /// Names bound by the quantifiers enclosing `path`, outermost first.
    pub fn binders_above(&self, path: &Path) -> Result<Vec<Var>, TermError> {
        let mut out = Vec::new();
        let mut cur = self;
        for (depth, &index) in path.0.iter().enumerate() {
            if let Expr::Quant(_, v, _) = cur {
                out.push(v.clone());
            }
            cur = cur.children().get(index).ok_or_else(|| TermError::InvalidPath {
                path: path.clone(),
                depth,
                index,
            })?;
        }
        Ok(out)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            Expr::Var(v) => {
                if !bound.contains(&v.name.as_str()) {
                    out.insert(v.name.clone());
                }
            }
            Expr::Quant(_, v, body) => {
                bound.push(&v.name);
                body.collect_free(bound, out);
                bound.pop();
            }
            _ => {
                for c in self.children() {
                    c.collect_free(bound, out);
                }
            }
        }
    }

    /// Free variables with their sorts.
    pub fn free_var_sorts(&self) -> BTreeMap<String, Sort> {
        fn go<'a>(e: &'a Expr, bound: &mut Vec<&'a str>, out: &mut BTreeMap<String, Sort>) {
            match e {
                Expr::Var(v) if !bound.contains(&v.name.as_str()) => {
                    out.entry(v.name.clone()).or_insert(v.sort);
                }
                Expr::Quant(_, v, body) => {
                    bound.push(&v.name);
                    go(body, bound, out);
                    bound.pop();
                }
                _ => e.children().iter().for_each(|c| go(c, bound, out)),
            }
        }
        let mut out = BTreeMap::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Every variable name occurring in the expression, bound or free.
    pub fn all_names(&self) -> BTreeSet<String> {
        fn go(e: &Expr, out: &mut BTreeSet<String>) {
            match e {
                Expr::Var(v) => {
                    out.insert(v.name.clone());
                }
                Expr::Quant(_, v, body) => {
                    out.insert(v.name.clone());
                    go(body, out);
                }
                _ => e.children().iter().for_each(|c| go(c, out)),
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut out);
        out
    }

    /// Capture-avoiding simultaneous substitution.
    pub fn substitute(&self, s: &Substitution) -> Result<Expr, TermError> {
        if s.is_empty() {
            return Ok(self.clone());
        }
        match self {
            Expr::Var(v) => match s.get(&v.name) {
                Some(t) if t.sort() != v.sort => Err(TermError::SortMismatch { expected: v.sort, found: t.sort() }),
                Some(t) => Ok(t.clone()),
                None => Ok(self.clone()),
            },
            Expr::Const(_) | Expr::Hole(_) => Ok(self.clone()),
            Expr::App(sym, args) => Ok(Expr::App(
                sym.clone(),
                args.iter().map(|a| a.substitute(s)).collect::<Result<_, _>>()?,
            )),
            Expr::Quant(q, v, body) => {
                let body_free = body.free_vars();
                let mut inner = s.clone();
                inner.remove(&v.name);
                inner.retain(|k, _| body_free.contains(k));
                if inner.is_empty() {
                    return Ok(self.clone());
                }
                let incoming: BTreeSet<String> = inner.values().flat_map(|t| t.free_vars()).collect();
                if incoming.contains(&v.name) {
                    let mut taken = incoming;
                    taken.extend(body.all_names());
                    let fresh = fresh_name(&v.name, &taken);
                    inner.insert(v.name.clone(), Expr::var(fresh.clone(), v.sort));
                    let body = body.substitute(&inner)?;
                    Ok(Expr::Quant(*q, Var::new(fresh, v.sort), Box::new(body)))
                } else {
                    Ok(Expr::Quant(*q, v.clone(), Box::new(body.substitute(&inner)?)))
                }
            }
        }
    }

    /// Single-variable convenience over [`Expr::substitute`].
    pub fn instantiate(&self, name: &str, t: &Expr) -> Result<Expr, TermError> {
        let mut s = Substitution::new();
        s.insert(name.to_string(), t.clone());
        self.substitute(&s)
    }

    /// Equality up to consistent renaming of bound variables.
    pub fn alpha_eq(&self, other: &Expr) -> bool {
        alpha_eq_in(self, other, &mut Vec::new())
    }

    /// Root-first token listing.
    pub fn preorder_tokens(&self) -> Result<Vec<String>, TermError> {
        fn go(e: &Expr, out: &mut Vec<String>) -> Result<(), TermError> {
            match e {
                Expr::Var(v) => out.push(v.name.clone()),
                Expr::Const(s) => out.push(s.name().to_string()),
                Expr::App(s, args) => {
                    out.push(s.name().to_string());
                    for a in args {
                        go(a, out)?;
                    }
                }
                Expr::Quant(q, v, body) => {
                    out.push(q.symbol().to_string());
                    out.push(v.name.clone());
                    go(body, out)?;
                }
                Expr::Hole(_) => return Err(TermError::HolePresent),
            }
            Ok(())
        }
        let mut out = Vec::new();
        go(self, &mut out)?;
        Ok(out)
    }

    /// Replaces every occurrence of `target` (up to bound renaming) whose free
    /// variables are not captured by a binder between the root and the
    /// occurrence. Returns the result and whether anything changed.
    pub fn replace_occurrences(&self, target: &Expr, by: &Expr) -> (Expr, bool) {
        let fv = target.free_vars();
        fn go(e: &Expr, target: &Expr, by: &Expr, fv: &BTreeSet<String>, blocked: usize) -> (Expr, bool) {
            if blocked == 0 && e.alpha_eq(target) {
                return (by.clone(), true);
            }
            match e {
                Expr::App(s, args) => {
                    let mut changed = false;
                    let args = args
                        .iter()
                        .map(|a| {
                            let (a, c) = go(a, target, by, fv, blocked);
                            changed |= c;
                            a
                        })
                        .collect();
                    (Expr::App(s.clone(), args), changed)
                }
                Expr::Quant(q, v, body) => {
                    let blocked = blocked + usize::from(fv.contains(&v.name));
                    let (body, changed) = go(body, target, by, fv, blocked);
                    (Expr::Quant(*q, v.clone(), Box::new(body)), changed)
                }
                _ => (e.clone(), false),
            }
        }
        go(self, target, by, &fv, 0)
    }

    /// All paths in pre-order.
    pub fn paths(&self) -> Vec<Path> {
        fn go(e: &Expr, cur: &mut Vec<usize>, out: &mut Vec<Path>) {
            out.push(Path(cur.clone()));
            for (i, c) in e.children().iter().enumerate() {
                cur.push(i);
                go(c, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

fn alpha_eq_in<'a>(a: &'a Expr, b: &'a Expr, env: &mut Vec<(&'a str, &'a str)>) -> bool {
    match (a, b) {
        (Expr::Var(x), Expr::Var(y)) => {
            if x.sort != y.sort {
                return false;
            }
            let lx = env.iter().rposition(|(l, _)| *l == x.name);
            let ly = env.iter().rposition(|(_, r)| *r == y.name);
            match (lx, ly) {
                (Some(i), Some(j)) => i == j,
                (None, None) => x.name == y.name,
                _ => false,
            }
        }
        (Expr::Const(s), Expr::Const(t)) => s == t,
        (Expr::App(s, xs), Expr::App(t, ys)) => {
            s == t && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_eq_in(x, y, env))
        }
        (Expr::Quant(q, v, x), Expr::Quant(r, w, y)) => {
            if q != r || v.sort != w.sort {
                return false;
            }
            env.push((&v.name, &w.name));
            let eq = alpha_eq_in(x, y, env);
            env.pop();
            eq
        }
        (Expr::Hole(h), Expr::Hole(k)) => h == k,
        _ => false,
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print(self))
    }
}

/// Child-index address of a node; empty is the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(pub Vec<usize>);

impl Path {
    pub fn root() -> Self {
        Path(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: usize) -> Self {
        let mut p = self.0.clone();
        p.push(i);
        Path(p)
    }
}

impl From<Vec<usize>> for Path {
    fn from(v: Vec<usize>) -> Self {
        Path(v)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl std::str::FromStr for Path {
    type Err = std::num::ParseIntError;

    /// Parses the dotted form `0.1.0`; the empty string is the root.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().is_empty() {
            return Ok(Path::root());
        }
        s.split('.').map(|p| p.trim().parse()).collect::<Result<_, _>>().map(Path)
    }
}

/// Finite map from variable names to replacement expressions.
pub type Substitution = BTreeMap<String, Expr>;

fn prime_suffix(k: usize) -> String {
    match k {
        1 => "′".to_string(),
        2 => "″".to_string(),
        3 => "‴".to_string(),
        _ => k
            .to_string()
            .chars()
            .map(|d| char::from_u32('₀' as u32 + d.to_digit(10).unwrap()).unwrap())
            .collect(),
    }
}

/// `base` itself when free, else `base′`, `base″`, `base‴`, `base₄`, `base₅`, …
pub fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    if !taken.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|k| format!("{base}{}", prime_suffix(k)))
        .find(|c| !taken.contains(c))
        .expect("unbounded candidate sequence")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shaves(a: &str, b: &str) -> Expr {
        let s = Symbol::new(SymbolInfo::declared("shaves", 2, Sort::Proposition));
        Expr::App(s, vec![Expr::ind(a), Expr::ind(b)])
    }

    fn barber_body() -> Expr {
        Expr::iff(shaves("A", "B"), Expr::not(shaves("B", "B")))
    }

    #[test]
    fn subterm_paths() {
        let e = barber_body();
        assert_eq!(e.subterm_at(&Path::root()).unwrap(), &e);
        assert_eq!(e.subterm_at(&Path(vec![1, 0])).unwrap(), &shaves("B", "B"));
        let q = Expr::forall("B", e);
        assert!(matches!(q.subterm_at(&Path(vec![7])), Err(TermError::InvalidPath { .. })));
    }

    #[test]
    fn replace_examples() {
        let phi = Expr::prop("φ");
        let psi = Expr::prop("ψ");
        let e = Expr::and(phi, psi.clone());
        assert_eq!(e.replace_at(&Path(vec![0]), Expr::top()).unwrap(), Expr::and(Expr::top(), psi));
        assert_eq!(e.replace_at(&Path::root(), e.clone()).unwrap(), e);
        assert!(matches!(
            e.replace_at(&Path(vec![0]), Expr::ind("x")),
            Err(TermError::SortMismatch { .. })
        ));
    }

    #[test]
    fn free_variables() {
        let q = Expr::forall("B", barber_body());
        assert_eq!(q.free_vars(), BTreeSet::from(["A".to_string()]));
        assert_eq!(shaves("A", "A").free_vars(), BTreeSet::from(["A".to_string()]));
        assert!(Expr::bot().free_vars().is_empty());
    }

    #[test]
    fn specialize_to_barber() {
        let out = barber_body().instantiate("B", &Expr::ind("A")).unwrap();
        assert_eq!(out, Expr::iff(shaves("A", "A"), Expr::not(shaves("A", "A"))));
        assert_eq!(barber_body().substitute(&Substitution::new()).unwrap(), barber_body());
    }

    #[test]
    fn substitution_avoids_capture() {
        let e = Expr::forall("x", Expr::member(Expr::ind("x"), Expr::ind("A")));
        let out = e.instantiate("A", &Expr::ind("x")).unwrap();
        assert_eq!(out.free_vars(), BTreeSet::from(["x".to_string()]));
        assert_eq!(out, Expr::forall("x′", Expr::member(Expr::ind("x′"), Expr::ind("x"))));
    }

    #[test]
    fn substitution_checks_sorts() {
        let e = Expr::and(Expr::prop("p"), Expr::top());
        assert!(matches!(e.instantiate("p", &Expr::ind("a")), Err(TermError::SortMismatch { .. })));
    }

    #[test]
    fn alpha_equivalence() {
        let a = Expr::forall("x", Expr::member(Expr::ind("x"), Expr::ind("A")));
        let b = Expr::forall("y", Expr::member(Expr::ind("y"), Expr::ind("A")));
        assert!(a.alpha_eq(&b));
        assert!(!shaves("A", "B").alpha_eq(&shaves("B", "A")));
        let c = Expr::forall("x", Expr::exists("y", Expr::member(Expr::ind("x"), Expr::ind("y"))));
        let d = Expr::forall("y", Expr::exists("x", Expr::member(Expr::ind("y"), Expr::ind("x"))));
        assert!(c.alpha_eq(&d));
        // bound vs free
        let e = Expr::forall("x", Expr::member(Expr::ind("x"), Expr::ind("y")));
        let f = Expr::forall("y", Expr::member(Expr::ind("y"), Expr::ind("y")));
        assert!(!e.alpha_eq(&f));
    }

    #[test]
    fn fresh_names() {
        let t = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
        assert_eq!(fresh_name("A", &t(&[])), "A");
        assert_eq!(fresh_name("A", &t(&["A"])), "A′");
        assert_eq!(fresh_name("A", &t(&["A", "A′"])), "A″");
        assert_eq!(fresh_name("A", &t(&["A", "A′", "A″", "A‴"])), "A₄");
        assert_eq!(fresh_name("x", &t(&["x", "x′", "x″", "x‴", "x₄"])), "x₅");
        assert!(is_identifier("A₁₂"));
    }

    #[test]
    fn preorder() {
        let e = Expr::subset(Expr::ind("A"), Expr::ind("B"));
        assert_eq!(e.preorder_tokens().unwrap().join(", "), "⊆, A, B");
        assert_eq!(Expr::bot().preorder_tokens().unwrap(), vec!["⊥"]);
        let e = Expr::member(Expr::ind("x"), Expr::powerset(Expr::ind("A")));
        assert_eq!(e.preorder_tokens().unwrap().join(", "), "∈, x, 𝒫, A");
        assert_eq!(Expr::hole(0, Sort::Individual).preorder_tokens(), Err(TermError::HolePresent));
    }

    #[test]
    fn occurrence_replacement_respects_binders() {
        let s = shaves("A", "A");
        let e = Expr::iff(s.clone(), Expr::not(s.clone()));
        let (out, changed) = e.replace_occurrences(&s, &Expr::top());
        assert!(changed);
        assert_eq!(out, Expr::iff(Expr::top(), Expr::not(Expr::top())));
        // occurrence under a binder that captures A is left alone
        let g = Expr::forall("A", s.clone());
        assert!(!g.replace_occurrences(&s, &Expr::top()).1);
    }

    #[test]
    fn path_parsing() {
        assert_eq!("0.1.0".parse::<Path>().unwrap(), Path(vec![0, 1, 0]));
        assert_eq!("".parse::<Path>().unwrap(), Path::root());
    }
}
