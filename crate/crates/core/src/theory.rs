//! Built-in theories and the lemma file format.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{parse_formula, read_formula, Context, SyntaxError};
use crate::terms::{Expr, Signature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LemmaKind {
    Schema,
    Axiom,
    Definition,
    Lemma,
}

impl LemmaKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LemmaKind::Schema => "schema",
            LemmaKind::Axiom => "axiom",
            LemmaKind::Definition => "definition",
            LemmaKind::Lemma => "lemma",
        }
    }
}

impl fmt::Display for LemmaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LemmaKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "schema" => Ok(LemmaKind::Schema),
            "axiom" => Ok(LemmaKind::Axiom),
            "definition" => Ok(LemmaKind::Definition),
            "lemma" => Ok(LemmaKind::Lemma),
            other => Err(format!("unknown lemma kind `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma {
    /// Qualified id, `<theory>/<name>`.
    pub id: String,
    pub statement: Expr,
    pub kind: LemmaKind,
    /// Message-catalog key of the display name.
    pub name_key: String,
}

impl Lemma {
    pub fn local_id(&self) -> &str {
        self.id.split_once('/').map_or(&self.id, |(_, l)| l)
    }
}

#[derive(Debug, Clone)]
pub struct Theory {
    pub id: String,
    pub signature: Signature,
    pub lemmas: Vec<Lemma>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("no lemma `{0}`")]
    NotFound(String),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}: {source}")]
    Syntax { line: usize, source: SyntaxError },
}

impl Theory {
    pub fn get_lemma(&self, id: &str) -> Result<&Lemma, TheoryError> {
        let qualified = format!("{}/{}", self.id, id);
        self.lemmas
            .iter()
            .find(|l| l.id == id || l.id == qualified)
            .ok_or_else(|| TheoryError::NotFound(qualified))
    }

    /// Reads one lemma per line, `<id>\t<kind>\t<formula>`. Blank lines and
    /// lines starting with `#` are skipped.
    pub fn from_text(id: &str, text: &str, signature: Signature) -> Result<Theory, TheoryError> {
        let mut lemmas = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line_no = n + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.splitn(3, '\t');
            let (Some(name), Some(kind), Some(formula)) = (fields.next(), fields.next(), fields.next()) else {
                return Err(TheoryError::Format { line: line_no, message: "expected three tab-separated fields".into() });
            };
            let kind = kind.parse().map_err(|message| TheoryError::Format { line: line_no, message })?;
            let statement =
                read_formula(formula, &signature).map_err(|source| TheoryError::Syntax { line: line_no, source })?;
            if !statement.free_vars().is_empty() {
                return Err(TheoryError::Format { line: line_no, message: "statement is not closed".into() });
            }
            lemmas.push(Lemma {
                id: format!("{id}/{name}"),
                statement,
                kind,
                name_key: format!("lemma.{id}.{name}"),
            });
        }
        Ok(Theory { id: id.to_string(), signature, lemmas })
    }

    pub fn to_text(&self) -> String {
        self.lemmas
            .iter()
            .map(|l| format!("{}\t{}\t{}\n", l.local_id(), l.kind, l.statement))
            .collect()
    }
}

const LOGIC: &[(&str, LemmaKind, &str)] = &[
    ("equiv-contradiction", LemmaKind::Schema, "∀p(¬(p ⇔ ¬p))"),
    ("excluded-middle", LemmaKind::Schema, "∀p(p ∨ ¬p)"),
    ("equiv-elim-left", LemmaKind::Schema, "∀p∀q((p ⇔ q) ⇒ p ⇒ q)"),
    ("equiv-elim-right", LemmaKind::Schema, "∀p∀q((p ⇔ q) ⇒ q ⇒ p)"),
    ("impl-as-or", LemmaKind::Schema, "∀p∀q((p ⇒ q) ⇔ ¬p ∨ q)"),
    ("not-equiv", LemmaKind::Schema, "∀p∀q(¬(p ⇔ q) ⇔ p ∧ ¬q ∨ ¬p ∧ q)"),
];

const ZF: &[(&str, LemmaKind, &str)] = &[
    ("subseteq-def", LemmaKind::Definition, "∀A∀B(A ⊆ B ⇔ ∀x(x ∈ A ⇒ x ∈ B))"),
    ("extensionality", LemmaKind::Axiom, "∀A∀B(∀x(x ∈ A ⇔ x ∈ B) ⇒ A = B)"),
    ("eq-two-inclusions", LemmaKind::Lemma, "∀A∀B(A = B ⇔ A ⊆ B ∧ B ⊆ A)"),
    ("bigunion-def", LemmaKind::Definition, "∀A∀x(x ∈ ⋃(A) ⇔ ∃y(y ∈ A ∧ x ∈ y))"),
    ("powerset-def", LemmaKind::Definition, "∀A∀x(x ∈ 𝒫(A) ⇔ x ⊆ A)"),
    ("union-def", LemmaKind::Definition, "∀A∀B∀x(x ∈ A ∪ B ⇔ x ∈ A ∨ x ∈ B)"),
    ("intersection-def", LemmaKind::Definition, "∀A∀B∀x(x ∈ A ∩ B ⇔ x ∈ A ∧ x ∈ B)"),
    ("empty-set", LemmaKind::Axiom, "∀x(¬x ∈ ∅)"),
    ("enum1", LemmaKind::Definition, "∀x∀a(x ∈ {a} ⇔ x = a)"),
    ("enum2", LemmaKind::Definition, "∀x∀a∀b(x ∈ {a,b} ⇔ x = a ∨ x = b)"),
    ("enum3", LemmaKind::Definition, "∀x∀a∀b∀c(x ∈ {a,b,c} ⇔ x = a ∨ x = b ∨ x = c)"),
    ("enum4", LemmaKind::Definition, "∀x∀a∀b∀c∀d(x ∈ {a,b,c,d} ⇔ x = a ∨ x = b ∨ x = c ∨ x = d)"),
    ("eq-refl", LemmaKind::Axiom, "∀x(x = x)"),
];

fn build(id: &str, table: &[(&str, LemmaKind, &str)]) -> Theory {
    let signature = Signature::builtin();
    let lemmas = table
        .iter()
        .map(|(name, kind, text)| Lemma {
            id: format!("{id}/{name}"),
            statement: parse_formula(text, &signature, &Context::new())
                .unwrap_or_else(|e| panic!("built-in lemma {name}: {e}")),
            kind: *kind,
            name_key: format!("lemma.{id}.{name}"),
        })
        .collect();
    Theory { id: id.to_string(), signature, lemmas }
}

/// The `logic` and `zf` theories.
pub fn builtin_theories() -> &'static [Theory] {
    static THEORIES: OnceLock<Vec<Theory>> = OnceLock::new();
    THEORIES.get_or_init(|| vec![build("logic", LOGIC), build("zf", ZF)])
}

pub fn theory(id: &str) -> Option<&'static Theory> {
    builtin_theories().iter().find(|t| t.id == id)
}

/// Looks up `theory/name` across the built-in theories.
pub fn find_lemma(qualified: &str) -> Result<&'static Lemma, TheoryError> {
    let not_found = || TheoryError::NotFound(qualified.to_string());
    let (t, name) = qualified.split_once('/').ok_or_else(not_found)?;
    theory(t).ok_or_else(not_found)?.get_lemma(name).map_err(|_| not_found())
}

/// Resolves selectors such as `logic/*` or `zf/subseteq-def` to lemmas,
/// without duplicates, in selector order.
pub fn select_lemmas(selectors: &[String]) -> Result<Vec<Lemma>, TheoryError> {
    let mut out: Vec<Lemma> = Vec::new();
    let mut push = |l: &Lemma| {
        if !out.iter().any(|m| m.id == l.id) {
            out.push(l.clone());
        }
    };
    for sel in selectors {
        match sel.strip_suffix("/*") {
            Some(t) => {
                let th = theory(t).ok_or_else(|| TheoryError::NotFound(sel.clone()))?;
                th.lemmas.iter().for_each(&mut push);
            }
            None if sel == "*" => builtin_theories().iter().flat_map(|t| &t.lemmas).for_each(&mut push),
            None => push(find_lemma(sel)?),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::compile_lemma;
    use crate::syntax::print;
    use crate::terms::{Quantifier, Sort};

    #[test]
    fn library_statements() {
        let zf = theory("zf").unwrap();
        assert_eq!(print(&zf.get_lemma("subseteq-def").unwrap().statement), "∀A∀B(A ⊆ B ⇔ ∀x(x ∈ A ⇒ x ∈ B))");
        assert_eq!(print(&zf.get_lemma("eq-two-inclusions").unwrap().statement), "∀A∀B(A = B ⇔ A ⊆ B ∧ B ⊆ A)");
        assert_eq!(zf.get_lemma("no-such"), Err(TheoryError::NotFound("zf/no-such".into())));
        let logic = theory("logic").unwrap();
        assert_eq!(print(&logic.get_lemma("excluded-middle").unwrap().statement), "∀p(p ∨ ¬p)");
        assert_eq!(print(&logic.get_lemma("equiv-contradiction").unwrap().statement), "∀p(¬(p ⇔ ¬p))");
    }

    #[test]
    fn every_lemma_compiles_and_round_trips() {
        for th in builtin_theories() {
            for l in &th.lemmas {
                let reparsed = parse_formula(&print(&l.statement), &th.signature, &Context::new()).unwrap();
                assert!(reparsed.alpha_eq(&l.statement), "{}", l.id);
                let pats = compile_lemma(&l.statement, &l.id).unwrap();
                let (_, matrix) = crate::index::strip_universals(&l.statement);
                if matrix.as_binary(crate::terms::Connective::Iff).is_some() {
                    assert_eq!(pats.len(), 2, "{}", l.id);
                }
            }
        }
    }

    #[test]
    fn only_schemas_quantify_propositions() {
        for th in builtin_theories() {
            for l in &th.lemmas {
                let mut e = &l.statement;
                let mut prop = false;
                while let Some((v, body)) = e.as_quant(Quantifier::Forall) {
                    prop |= v.sort == Sort::Proposition;
                    e = body;
                }
                assert_eq!(prop, l.kind == LemmaKind::Schema, "{}", l.id);
            }
        }
    }

    #[test]
    fn selectors_and_text_format() {
        let sel = select_lemmas(&["logic/*".into(), "logic/excluded-middle".into()]).unwrap();
        assert_eq!(sel.len(), LOGIC.len());
        assert!(matches!(select_lemmas(&["zf/nope".into()]), Err(TheoryError::NotFound(_))));
        let zf = theory("zf").unwrap();
        let again = Theory::from_text("zf", &zf.to_text(), Signature::builtin()).unwrap();
        assert_eq!(again.lemmas.len(), zf.lemmas.len());
        for (a, b) in again.lemmas.iter().zip(&zf.lemmas) {
            assert_eq!(a.id, b.id);
            assert!(a.statement.alpha_eq(&b.statement));
        }
        let err = Theory::from_text("t", "refl\taxiom\t\\forall x (x = y)\n", Signature::builtin());
        assert!(matches!(err, Err(TheoryError::Format { line: 1, .. })));
        let ok = Theory::from_text("t", "# comment\nrefl\taxiom\t\\forall x (x = x)\n", Signature::builtin()).unwrap();
        assert_eq!(ok.lemmas[0].id, "t/refl");
    }
}
