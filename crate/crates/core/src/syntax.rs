//! Unicode surface syntax: shorthand expansion, tokenizer, precedence parser
//! and minimal-parenthesis printer.
//!
//! Binding strength, loosest first: `⇔` (non-associative), `⇒` (right),
//! `∨`, `∧` (left), `¬` and quantifiers, the relations `=`, `∈`, `⊆`
//! (non-associative), `∪`, `∩` (left), then `⋃`, `𝒫` and applications.
//! A quantifier body extends as far right as possible.

use std::collections::BTreeMap;

use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

use crate::terms::{
    self, builtin, is_ident_continue, is_ident_start, is_operator_char, prec, Expr, Fixity, Quantifier, Signature,
    Sort, Symbol, Var,
};

/// Placeholder glyph for holes.
pub const HOLE_GLYPH: char = '▢';

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("parse error at {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("sort error at {offset}: expected {expected}, found {found}")]
    Sort { offset: usize, expected: Sort, found: Sort },
}

impl SyntaxError {
    pub fn offset(&self) -> usize {
        match self {
            SyntaxError::Parse { offset, .. } | SyntaxError::Sort { offset, .. } => *offset,
        }
    }

    fn parse(offset: usize, message: impl Into<String>) -> Self {
        SyntaxError::Parse { offset, message: message.into() }
    }
}

/// Map from ASCII escapes to Unicode symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShorthandTable {
    entries: BTreeMap<String, String>,
}

impl Default for ShorthandTable {
    fn default() -> Self {
        let pairs = [
            ("\\forall", "∀"),
            ("\\exists", "∃"),
            ("\\neg", "¬"),
            ("\\wedge", "∧"),
            ("\\and", "∧"),
            ("\\vee", "∨"),
            ("\\or", "∨"),
            ("\\Rightarrow", "⇒"),
            ("\\implies", "⇒"),
            ("\\Leftrightarrow", "⇔"),
            ("\\iff", "⇔"),
            ("\\in", "∈"),
            ("\\subseteq", "⊆"),
            ("\\cup", "∪"),
            ("\\cap", "∩"),
            ("\\bigcup", "⋃"),
            ("\\powerset", "𝒫"),
            ("\\mathcal{P}", "𝒫"),
            ("\\emptyset", "∅"),
            ("\\top", "⊤"),
            ("\\bot", "⊥"),
        ];
        ShorthandTable { entries: pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect() }
    }
}

impl ShorthandTable {
    pub fn get(&self, escape: &str) -> Option<&str> {
        self.entries.get(escape).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Replaces every complete escape by its symbol. An escape matches only
    /// when it is not immediately followed by another ASCII letter, so
    /// `\inA` and unknown escapes are left untouched.
    pub fn expand(&self, input: &str) -> String {
        let mut out = String::with_capacity(input.len());
        let mut rest = input;
        while let Some(pos) = rest.find('\\') {
            out.push_str(&rest[..pos]);
            rest = &rest[pos..];
            let hit = self
                .entries
                .iter()
                .filter(|(k, _)| {
                    rest.starts_with(k.as_str())
                        && (k.ends_with('}')
                            || !rest[k.len()..].chars().next().is_some_and(|c| c.is_ascii_alphabetic()))
                })
                .max_by_key(|(k, _)| k.len());
            match hit {
                Some((k, v)) => {
                    out.push_str(v);
                    rest = &rest[k.len()..];
                }
                None => {
                    let len = 1 + rest[1..].chars().take_while(|c| c.is_ascii_alphabetic()).count();
                    out.push_str(&rest[..len]);
                    rest = &rest[len..];
                }
            }
        }
        out.push_str(rest);
        out
    }
}

pub fn expand_shorthands(input: &str, table: &ShorthandTable) -> String {
    table.expand(input)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Symbol,
    Identifier,
    Punct,
    HoleMark,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    /// Byte offsets into the normalized input.
    pub span: (usize, usize),
}

pub fn tokenize(input: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut tokens = Vec::new();
    let mut iter = input.char_indices().peekable();
    while let Some((start, c)) = iter.next() {
        if c.is_whitespace() {
            continue;
        }
        let (kind, end) = if c == HOLE_GLYPH {
            (TokenKind::HoleMark, start + c.len_utf8())
        } else if matches!(c, '(' | ')' | '{' | '}' | ',') {
            (TokenKind::Punct, start + c.len_utf8())
        } else if is_operator_char(c) {
            (TokenKind::Symbol, start + c.len_utf8())
        } else if is_ident_start(c) {
            let mut end = start + c.len_utf8();
            while let Some(&(i, d)) = iter.peek() {
                if !is_ident_continue(d) {
                    break;
                }
                end = i + d.len_utf8();
                iter.next();
            }
            (TokenKind::Identifier, end)
        } else {
            return Err(SyntaxError::parse(start, format!("unexpected character `{c}`")));
        };
        tokens.push(Token { kind, text: input[start..end].to_string(), span: (start, end) });
    }
    Ok(tokens)
}

/// Sort-free syntax tree produced before elaboration.
#[derive(Debug, Clone)]
enum Ast {
    Ident(String, usize),
    Call(String, Vec<Ast>, usize),
    Builtin(&'static str, Vec<Ast>, usize),
    Quant(Quantifier, String, Box<Ast>, usize),
    Enum(Vec<Ast>, usize),
    Hole(usize),
}

impl Ast {
    fn offset(&self) -> usize {
        match self {
            Ast::Ident(_, o) | Ast::Call(_, _, o) | Ast::Builtin(_, _, o) | Ast::Quant(_, _, _, o) => *o,
            Ast::Enum(_, o) | Ast::Hole(o) => *o,
        }
    }
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    end: usize,
}

const BUILTIN_NAMES: [&str; 17] = [
    terms::NOT,
    terms::AND,
    terms::OR,
    terms::IMPLIES,
    terms::IFF,
    terms::TOP,
    terms::BOT,
    terms::FORALL,
    terms::EXISTS,
    terms::EQ,
    terms::IN,
    terms::SUBSETEQ,
    terms::UNION,
    terms::INTER,
    terms::BIGUNION,
    terms::POWERSET,
    terms::EMPTYSET,
];

fn static_name(text: &str) -> &'static str {
    BUILTIN_NAMES.iter().find(|n| **n == text).copied().expect("operator token")
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn offset(&self) -> usize {
        self.peek().map_or(self.end, |t| t.span.0)
    }

    fn at(&self, text: &str) -> bool {
        self.peek().is_some_and(|t| t.text == text)
    }

    fn eat(&mut self, text: &str) -> bool {
        if self.at(text) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, text: &str) -> Result<(), SyntaxError> {
        if self.eat(text) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected `{text}`")))
        }
    }

    fn unexpected(&self, what: &str) -> SyntaxError {
        match self.peek() {
            Some(t) => SyntaxError::parse(t.span.0, format!("{what}, found `{}`", t.text)),
            None => SyntaxError::parse(self.end, format!("{what}, found end of input")),
        }
    }

    fn formula(&mut self) -> Result<Ast, SyntaxError> {
        let off = self.offset();
        let lhs = self.implication()?;
        if self.eat(terms::IFF) {
            let rhs = self.implication()?;
            if self.at(terms::IFF) {
                return Err(self.unexpected("`⇔` is not associative; add parentheses"));
            }
            return Ok(Ast::Builtin(terms::IFF, vec![lhs, rhs], off));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Ast, SyntaxError> {
        let off = self.offset();
        let lhs = self.disjunction()?;
        if self.eat(terms::IMPLIES) {
            let rhs = self.implication()?;
            return Ok(Ast::Builtin(terms::IMPLIES, vec![lhs, rhs], off));
        }
        Ok(lhs)
    }

    fn left_chain(
        &mut self,
        op: &'static str,
        next: fn(&mut Self) -> Result<Ast, SyntaxError>,
    ) -> Result<Ast, SyntaxError> {
        let off = self.offset();
        let mut lhs = next(self)?;
        while self.eat(op) {
            let rhs = next(self)?;
            lhs = Ast::Builtin(op, vec![lhs, rhs], off);
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Ast, SyntaxError> {
        self.left_chain(terms::OR, Self::conjunction)
    }

    fn conjunction(&mut self) -> Result<Ast, SyntaxError> {
        self.left_chain(terms::AND, Self::unary)
    }

    fn unary(&mut self) -> Result<Ast, SyntaxError> {
        let off = self.offset();
        if self.eat(terms::NOT) {
            let body = self.unary()?;
            return Ok(Ast::Builtin(terms::NOT, vec![body], off));
        }
        let q = if self.at(terms::FORALL) {
            Some(Quantifier::Forall)
        } else if self.at(terms::EXISTS) {
            Some(Quantifier::Exists)
        } else {
            None
        };
        if let Some(q) = q {
            self.pos += 1;
            let name = match self.peek() {
                Some(t) if t.kind == TokenKind::Identifier => t.text.clone(),
                _ => return Err(self.unexpected("expected a variable after the quantifier")),
            };
            self.pos += 1;
            let body = self.formula()?;
            return Ok(Ast::Quant(q, name, Box::new(body), off));
        }
        self.relation()
    }

    fn relation(&mut self) -> Result<Ast, SyntaxError> {
        let off = self.offset();
        let lhs = self.union()?;
        for op in [terms::EQ, terms::IN, terms::SUBSETEQ] {
            if self.eat(op) {
                let rhs = self.union()?;
                if self.at(terms::EQ) || self.at(terms::IN) || self.at(terms::SUBSETEQ) {
                    return Err(self.unexpected("relations do not chain; add parentheses"));
                }
                return Ok(Ast::Builtin(op, vec![lhs, rhs], off));
            }
        }
        Ok(lhs)
    }

    fn union(&mut self) -> Result<Ast, SyntaxError> {
        self.left_chain(terms::UNION, Self::intersection)
    }

    fn intersection(&mut self) -> Result<Ast, SyntaxError> {
        self.left_chain(terms::INTER, Self::prefix)
    }

    fn prefix(&mut self) -> Result<Ast, SyntaxError> {
        let off = self.offset();
        for op in [terms::BIGUNION, terms::POWERSET] {
            if self.eat(op) {
                let arg = self.prefix()?;
                return Ok(Ast::Builtin(op, vec![arg], off));
            }
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Ast, SyntaxError> {
        let off = self.offset();
        let Some(tok) = self.peek() else {
            return Err(self.unexpected("expected an expression"));
        };
        match tok.kind {
            TokenKind::HoleMark => {
                self.pos += 1;
                Ok(Ast::Hole(off))
            }
            TokenKind::Punct if tok.text == "(" => {
                self.pos += 1;
                let inner = self.formula()?;
                self.expect(")")?;
                Ok(inner)
            }
            TokenKind::Punct if tok.text == "{" => {
                self.pos += 1;
                let mut items = vec![self.union()?];
                while self.eat(",") {
                    items.push(self.union()?);
                }
                self.expect("}")?;
                Ok(Ast::Enum(items, off))
            }
            TokenKind::Symbol if matches!(tok.text.as_str(), terms::TOP | terms::BOT | terms::EMPTYSET) => {
                self.pos += 1;
                Ok(Ast::Builtin(static_name(&tok.text), vec![], off))
            }
            TokenKind::Identifier => {
                self.pos += 1;
                let name = tok.text.clone();
                if self.eat("(") {
                    let mut args = vec![self.formula()?];
                    while self.eat(",") {
                        args.push(self.formula()?);
                    }
                    self.expect(")")?;
                    Ok(Ast::Call(name, args, off))
                } else {
                    Ok(Ast::Ident(name, off))
                }
            }
            _ => Err(self.unexpected("expected an expression")),
        }
    }
}

/// Variables in scope at parse time, with their sorts.
pub type Context = BTreeMap<String, Sort>;

struct Elaborator<'a> {
    signature: &'a Signature,
    context: &'a Context,
    /// Binders in scope; the sort is fixed by the first use.
    scope: Vec<(String, Option<Sort>)>,
    free: BTreeMap<String, Sort>,
    allow_holes: bool,
    next_hole: u32,
}

impl Elaborator<'_> {
    fn check(&self, found: Sort, expected: Option<Sort>, offset: usize) -> Result<(), SyntaxError> {
        match expected {
            Some(e) if e != found => Err(SyntaxError::Sort { offset, expected: e, found }),
            _ => Ok(()),
        }
    }

    fn symbol(&self, name: &str, offset: usize) -> Result<Symbol, SyntaxError> {
        self.signature
            .get(name)
            .cloned()
            .ok_or_else(|| SyntaxError::parse(offset, format!("unknown symbol `{name}`")))
    }

    fn elab(&mut self, ast: &Ast, expected: Option<Sort>) -> Result<Expr, SyntaxError> {
        match ast {
            Ast::Hole(off) => {
                if !self.allow_holes {
                    return Err(SyntaxError::parse(*off, "the expression is incomplete"));
                }
                let id = self.next_hole;
                self.next_hole += 1;
                Ok(Expr::hole(id, expected.unwrap_or(Sort::Individual)))
            }
            Ast::Ident(name, off) => self.identifier(name, expected, *off),
            Ast::Call(name, args, off) => {
                let sym = self.symbol(name, *off)?;
                if sym.info().fixity != Fixity::Function || !sym.info().accepts(args.len()) {
                    return Err(SyntaxError::parse(
                        *off,
                        format!("`{name}` takes {} argument(s), {} given", sym.info().arity, args.len()),
                    ));
                }
                self.check(sym.sort(), expected, *off)?;
                self.application(sym, args)
            }
            Ast::Builtin(name, args, off) => {
                let sym = builtin(name);
                self.check(sym.sort(), expected, *off)?;
                self.application(sym, args)
            }
            Ast::Enum(items, off) => {
                self.check(Sort::Individual, expected, *off)?;
                self.application(builtin(terms::ENUMERATION), items)
            }
            Ast::Quant(q, name, body, off) => {
                self.check(Sort::Proposition, expected, *off)?;
                self.scope.push((name.clone(), None));
                let body = self.elab(body, Some(Sort::Proposition));
                let (name, sort) = self.scope.pop().expect("pushed above");
                Ok(Expr::Quant(*q, Var::new(name, sort.unwrap_or(Sort::Individual)), Box::new(body?)))
            }
        }
    }

    fn application(&mut self, sym: Symbol, args: &[Ast]) -> Result<Expr, SyntaxError> {
        let mut out = Vec::with_capacity(args.len());
        for (i, a) in args.iter().enumerate() {
            out.push(self.elab(a, Some(sym.info().arg_sort(i)))?);
        }
        if out.is_empty() && sym.info().fixity != Fixity::Enumeration {
            Ok(Expr::Const(sym))
        } else {
            Ok(Expr::App(sym, out))
        }
    }

    fn identifier(&mut self, name: &str, expected: Option<Sort>, off: usize) -> Result<Expr, SyntaxError> {
        if let Some(slot) = self.scope.iter_mut().rev().find(|(n, _)| n == name) {
            let sort = match slot.1 {
                Some(s) => s,
                None => {
                    let s = expected.unwrap_or(Sort::Individual);
                    slot.1 = Some(s);
                    s
                }
            };
            self.check(sort, expected, off)?;
            return Ok(Expr::var(name, sort));
        }
        if let Some(sym) = self.signature.get(name) {
            if sym.info().arity > 0 || sym.info().fixity != Fixity::Function {
                return Err(SyntaxError::parse(off, format!("`{name}` needs arguments")));
            }
            self.check(sym.sort(), expected, off)?;
            return Ok(Expr::Const(sym.clone()));
        }
        let sort = match (self.context.get(name), self.free.get(name)) {
            (Some(s), _) | (None, Some(s)) => *s,
            (None, None) => expected.unwrap_or(Sort::Individual),
        };
        self.check(sort, expected, off)?;
        self.free.insert(name.to_string(), sort);
        Ok(Expr::var(name, sort))
    }
}

fn parse_impl(
    input: &str,
    signature: &Signature,
    context: &Context,
    expected: Option<Sort>,
    allow_holes: bool,
) -> Result<Expr, SyntaxError> {
    let normalized: String = input.nfc().collect();
    let tokens = tokenize(&normalized)?;
    let mut parser = Parser { tokens: &tokens, pos: 0, end: normalized.len() };
    let ast = parser.formula()?;
    if parser.pos < tokens.len() {
        return Err(parser.unexpected("unexpected trailing input"));
    }
    let mut elab = Elaborator {
        signature,
        context,
        scope: Vec::new(),
        free: BTreeMap::new(),
        allow_holes,
        next_hole: 0,
    };
    let expr = elab.elab(&ast, expected)?;
    if let Some(e) = expected {
        elab.check(expr.sort(), Some(e), ast.offset())?;
    }
    Ok(expr)
}

/// Parses shorthand-expanded text into a hole-free expression whose sort is
/// inferred. Unknown identifiers become free variables: individuals, or
/// propositions when they stand where a formula is required.
pub fn parse(input: &str, signature: &Signature, context: &Context) -> Result<Expr, SyntaxError> {
    parse_impl(input, signature, context, None, false)
}

/// Parses a proposition.
pub fn parse_formula(input: &str, signature: &Signature, context: &Context) -> Result<Expr, SyntaxError> {
    parse_impl(input, signature, context, Some(Sort::Proposition), false)
}

/// Parses an expression of the given sort.
pub fn parse_sorted(input: &str, sort: Sort, signature: &Signature, context: &Context) -> Result<Expr, SyntaxError> {
    parse_impl(input, signature, context, Some(sort), false)
}

/// Parses a partially entered expression; `▢` marks become holes numbered
/// left to right.
pub fn parse_partial(
    input: &str,
    expected: Option<Sort>,
    signature: &Signature,
    context: &Context,
) -> Result<Expr, SyntaxError> {
    parse_impl(input, signature, context, expected, true)
}

/// Expands shorthands then parses a proposition; the usual entry point for
/// user input.
pub fn read_formula(input: &str, signature: &Signature) -> Result<Expr, SyntaxError> {
    parse_formula(&ShorthandTable::default().expand(input), signature, &Context::new())
}

/// Minimal-parenthesis Unicode rendering.
pub fn print(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(e, 0, false, &mut out);
    out
}

fn own_prec(e: &Expr) -> u8 {
    match e {
        Expr::App(s, _) => s.info().precedence,
        Expr::Quant(..) => prec::UNARY,
        _ => prec::ATOM,
    }
}

/// `min` is the weakest binding the context tolerates without parentheses;
/// `followed` is true when more input follows at the enclosing level, which
/// would otherwise be swallowed by a quantifier body.
fn write_expr(e: &Expr, min: u8, followed: bool, out: &mut String) {
    let p = own_prec(e);
    let needs_parens = p < min || (followed && matches!(e, Expr::Quant(..)));
    if needs_parens {
        out.push('(');
        write_bare(e, false, out);
        out.push(')');
    } else {
        write_bare(e, followed, out);
    }
}

fn write_bare(e: &Expr, followed: bool, out: &mut String) {
    match e {
        Expr::Var(v) => out.push_str(&v.name),
        Expr::Hole(_) => out.push(HOLE_GLYPH),
        Expr::Const(s) => out.push_str(s.name()),
        Expr::Quant(q, v, body) => {
            out.push_str(q.symbol());
            out.push_str(&v.name);
            if matches!(**body, Expr::Quant(..)) {
                write_expr(body, prec::UNARY, followed, out);
            } else {
                out.push('(');
                write_expr(body, 0, false, out);
                out.push(')');
            }
        }
        Expr::App(s, args) => {
            let info = s.info();
            match info.fixity {
                Fixity::Prefix => {
                    out.push_str(s.name());
                    write_expr(&args[0], prec::UNARY, followed, out);
                }
                Fixity::Infix => {
                    let p = info.precedence;
                    let (lmin, rmin) = match s.name() {
                        terms::IMPLIES => (p + 1, p),
                        terms::AND | terms::OR | terms::UNION | terms::INTER => (p, p + 1),
                        _ => (p + 1, p + 1),
                    };
                    write_expr(&args[0], lmin, true, out);
                    out.push(' ');
                    out.push_str(s.name());
                    out.push(' ');
                    write_expr(&args[1], rmin, followed, out);
                }
                Fixity::BigOp | Fixity::Function | Fixity::Quantifier => {
                    out.push_str(s.name());
                    out.push('(');
                    write_list(args, out);
                    out.push(')');
                }
                Fixity::Enumeration => {
                    out.push('{');
                    write_list(args, out);
                    out.push('}');
                }
            }
        }
    }
}

fn write_list(args: &[Expr], out: &mut String) {
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_expr(a, 0, false, out);
    }
}
