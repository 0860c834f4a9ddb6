//! Looks a term up in the index of every library lemma and prints the
//! matching rewrite rules with their bindings.
//!
//!     cargo run -p easyprove --example lemma_index -- '⋃(𝒫(A)) ⊆ A'

use easyprove::theory::{builtin_theories, find_lemma};
use easyprove::{compile_lemma, parse, print, Context, LemmaIndex, Signature};

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| "⋃(𝒫(A)) ⊆ A".into());
    let patterns = builtin_theories()
        .iter()
        .flat_map(|t| &t.lemmas)
        .flat_map(|l| compile_lemma(&l.statement, &l.id).expect("library lemmas compile"));
    let index = LemmaIndex::from_patterns(patterns);
    println!("{} rewrite rules indexed", index.patterns().len());

    let query = match parse(&text, &Signature::builtin(), &Context::new()) {
        Ok(q) => q,
        Err(err) => {
            eprintln!("{err}");
            std::process::exit(2);
        }
    };
    let hits = index.lookup(&query);
    if hits.is_empty() {
        println!("no lemma applies to {}", print(&query));
    }
    for m in hits {
        let bindings: Vec<_> = m.bindings.iter().map(|(v, e)| format!("{v} ↦ {e}")).collect();
        println!("{} ({:?}): {}", m.pattern.lemma_id, m.pattern.orientation, bindings.join(", "));
        let lemma = find_lemma(&m.pattern.lemma_id).expect("indexed lemmas exist");
        println!("    pattern {}  from  {}", print(&m.pattern.skeleton), print(&lemma.statement));
    }
}
