//! Message catalogs: flat key → template maps, one per locale. Templates
//! refer to arguments as `{0}`, `{1}`, ….

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use easyprove::theory::builtin_theories;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Locale {
    #[default]
    En,
    Pl,
}

impl Locale {
    pub const ALL: [Locale; 2] = [Locale::En, Locale::Pl];

    pub fn as_str(self) -> &'static str {
        match self {
            Locale::En => "en",
            Locale::Pl => "pl",
        }
    }

    /// The first supported language in an `Accept-Language` header.
    pub fn from_accept_language(header: &str) -> Option<Locale> {
        header
            .split(',')
            .filter_map(|part| part.split(';').next())
            .map(|tag| tag.trim().to_ascii_lowercase())
            .find_map(|tag| tag.split('-').next().and_then(|l| l.parse().ok()))
    }
}

impl FromStr for Locale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "en" => Ok(Locale::En),
            "pl" => Ok(Locale::Pl),
            other => Err(format!("unsupported locale `{other}`")),
        }
    }
}

impl fmt::Display for Locale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub type Catalog = BTreeMap<String, String>;

pub fn catalog(locale: Locale) -> &'static Catalog {
    static EN: OnceLock<Catalog> = OnceLock::new();
    static PL: OnceLock<Catalog> = OnceLock::new();
    let (cell, text) = match locale {
        Locale::En => (&EN, include_str!("../catalogs/en.json")),
        Locale::Pl => (&PL, include_str!("../catalogs/pl.json")),
    };
    cell.get_or_init(|| serde_json::from_str(text).expect("bundled catalogs are valid JSON"))
}

/// Fills `{i}` placeholders; other braces are kept.
pub fn fill(template: &str, args: &[String]) -> String {
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        match after.find('}').map(|close| (close, after[..close].parse::<usize>())) {
            Some((close, Ok(i))) if i < args.len() => {
                out.push_str(&args[i]);
                rest = &after[close + 1..];
            }
            _ => {
                out.push('{');
                rest = after;
            }
        }
    }
    out.push_str(rest);
    out
}

/// A user-visible message: catalog key, arguments and the rendered text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub key: String,
    pub args: Vec<String>,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MissingKey(pub String);

pub fn try_render(locale: Locale, key: &str, args: &[String]) -> Result<Message, MissingKey> {
    let template = catalog(locale).get(key).ok_or_else(|| MissingKey(key.to_string()))?;
    Ok(Message { key: key.to_string(), args: args.to_vec(), text: fill(template, args) })
}

/// Renders `key`; a missing key renders as the key itself.
pub fn render(locale: Locale, key: &str, args: &[String]) -> Message {
    try_render(locale, key, args).unwrap_or_else(|_| Message {
        key: key.to_string(),
        args: args.to_vec(),
        text: key.to_string(),
    })
}

/// The rendered text of `key` without arguments, or the fallback.
pub fn text_or(locale: Locale, key: &str, fallback: &str) -> String {
    catalog(locale).get(key).cloned().unwrap_or_else(|| fallback.to_string())
}

pub const STEP_KINDS: &[&str] = &[
    "ProveLemma",
    "ByContradiction",
    "ProveConjuncts",
    "IntroImplication",
    "IntroEquivalence",
    "IntroForall",
    "IntroExistsWitness",
    "ProveDisjunctionClassical",
    "CloseByAssumption",
    "RewriteGoal",
    "TakeThis",
    "Specialize",
    "ElimConjunction",
    "ElimEquivalence",
    "ModusPonens",
    "CaseAnalysis",
    "ExcludedMiddleSplit",
    "ContradictionFromPair",
    "RewriteAssumption",
    "EqualityRewrite",
];

pub const SHAPES: &[&str] = &[
    "conjunction",
    "disjunction",
    "implication",
    "equivalence",
    "universal",
    "existential",
    "equation",
    "falsum",
    "truth",
    "proposition",
];

pub const REASONS: &[&str] = &[
    "not-active-goal",
    "not-assumption",
    "not-open",
    "mismatch",
    "unknown-rule",
    "rule-context",
    "no-match",
    "no-op",
    "unbound",
    "captured",
    "constant",
    "bad-path",
    "bad-term",
];

pub const ERROR_CODES: &[&str] = &[
    "not_applicable",
    "ill_formed_goal",
    "stale_state",
    "out_of_scope",
    "no_active_goal",
    "nothing_to_undo",
    "nothing_to_redo",
    "empty_branch",
    "bad_record",
    "bad_lemma",
    "empty_name",
    "invalid_goal",
    "unknown_lemma",
    "bad_symbol",
    "task_mismatch",
    "bad_version",
    "replay_error",
    "unauthenticated",
    "unauthorized",
    "bad_credentials",
    "not_found",
    "bad_request",
    "conflict",
    "storage",
];

/// Every key the service and the CLI can emit.
pub fn required_keys() -> Vec<String> {
    let mut keys: Vec<String> = Vec::new();
    for kind in STEP_KINDS.iter().chain(&["SetActiveGoal", "DeleteLast"]) {
        keys.push(format!("step.{kind}"));
    }
    keys.extend(STEP_KINDS.iter().map(|k| format!("effect.{k}")));
    keys.extend(SHAPES.iter().map(|s| format!("reason.shape.{s}")));
    keys.extend(REASONS.iter().map(|r| format!("reason.{r}")));
    keys.extend(ERROR_CODES.iter().map(|c| format!("error.{c}")));
    for t in builtin_theories() {
        keys.extend(t.lemmas.iter().map(|l| l.name_key.clone()));
    }
    for k in ["step-ok", "step-failed", "proved", "incomplete", "invalid", "open-goals"] {
        keys.push(format!("check.{k}"));
    }
    for k in [
        "goal",
        "assumption",
        "status.active",
        "status.open",
        "status.proved",
        "out-of-scope",
        "complete",
        "incomplete",
    ] {
        keys.push(format!("view.{k}"));
    }
    keys
}

/// Keys of `locale` missing from its catalog.
pub fn missing_keys(locale: Locale) -> Vec<String> {
    let cat = catalog(locale);
    required_keys().into_iter().filter(|k| !cat.contains_key(k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogs_are_total() {
        for l in Locale::ALL {
            assert_eq!(missing_keys(l), Vec::<String>::new(), "{l}");
        }
        let en: Vec<_> = catalog(Locale::En).keys().collect();
        let pl: Vec<_> = catalog(Locale::Pl).keys().collect();
        assert_eq!(en, pl);
    }

    #[test]
    fn placeholders() {
        assert_eq!(fill("{1} then {0}", &["a".into(), "b".into()]), "b then a");
        assert_eq!(fill("membership in {a}", &[]), "membership in {a}");
        assert_eq!(fill("{0} and {3}", &["x".into()]), "x and {3}");
    }

    #[test]
    fn accept_language() {
        assert_eq!(Locale::from_accept_language("pl-PL,pl;q=0.9,en;q=0.8"), Some(Locale::Pl));
        assert_eq!(Locale::from_accept_language("de, en-GB;q=0.5"), Some(Locale::En));
        assert_eq!(Locale::from_accept_language("fr"), None);
    }
}
