//! Shows each simplifier pass on a formula.
//!
//!     cargo run -p easyprove --example simplifier -- '¬(p ∧ (q ∨ ⊥)) ⇒ r'

use easyprove::simplify::{propagate_constants, push_negations, reassociate_left, simplify};
use easyprove::{parse_formula, print, Context, Signature};

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| "¬(p ∧ (q ∨ ⊥)) ∨ ¬¬(r ∧ (s ∧ ⊤))".into());
    let e = match parse_formula(&text, &Signature::builtin(), &Context::new()) {
        Ok(e) => e,
        Err(err) => {
            eprintln!("{err}");
            std::process::exit(2);
        }
    };
    println!("input             {}", print(&e));
    println!("push negations    {}", print(&push_negations(&e)));
    println!("constants         {}", print(&propagate_constants(&e)));
    println!("reassociate       {}", print(&reassociate_left(&e)));
    println!("fixpoint          {}", print(&simplify(&e)));
}
