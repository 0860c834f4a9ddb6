//! Lists the built-in theories in their text format.
//!
//!     cargo run -p easyprove --example theories

use easyprove::theory::builtin_theories;

fn main() {
    for t in builtin_theories() {
        println!("[{}]\n{}", t.id, t.to_text());
    }
}
