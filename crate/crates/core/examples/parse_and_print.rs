//! Parses each argument, accepting typed Unicode or pasted `\`-shorthands,
//! and prints it back with its sort.
//!
//!     cargo run -p easyprove --example parse_and_print -- '\forall x (x \in A \implies x \in A \cup B)'

use easyprove::syntax::ShorthandTable;
use easyprove::{parse, print, Context, Signature};

fn main() {
    let mut inputs: Vec<String> = std::env::args().skip(1).collect();
    if inputs.is_empty() {
        inputs = vec![
            "{{a}} ∪ {a}".into(),
            "\\neg \\exists A \\forall B (B \\in A \\iff \\neg B \\in B)".into(),
            "∀x ∃y (x ∈ y ∧ y ⊆ 𝒫(x))".into(),
            "p ∧ q ∨ r ⇒ s".into(),
            "∀x (".into(),
        ];
    }
    let sig = Signature::builtin();
    let shorthands = ShorthandTable::default();
    for text in inputs {
        match parse(&shorthands.expand(&text), &sig, &Context::new()) {
            Ok(e) => println!("{text}\n    {}  : {:?}", print(&e), e.sort()),
            Err(err) => println!("{text}\n    error: {err}"),
        }
    }
}
