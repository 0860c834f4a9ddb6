//! Replays the proof that the union of the powerset of A is A, printing the
//! open goals as the two inclusions are unfolded.
//!
//!     cargo run -p easyprove --example union_of_powerset

use easyprove::demos::{union_of_powerset_script, union_of_powerset_task};
use easyprove::print;

fn main() {
    let task = union_of_powerset_task();
    let mut st = task.start().expect("demo task is well formed");
    println!("goal: {}", print(st.root_goal()));
    for (i, r) in union_of_powerset_script().steps.iter().enumerate() {
        st.apply_record(r).unwrap_or_else(|e| panic!("step {}: {e}", i + 1));
        let lemma = r.lemma.as_deref().map(|l| format!(" {l}")).unwrap_or_default();
        let open: Vec<String> = st
            .open_goals()
            .into_iter()
            .map(|g| format!("{g}: {}", print(&st.formula(g).unwrap().formula)))
            .collect();
        println!("{:>2}. {}{lemma} on {}", i + 1, r.kind, r.target.unwrap_or(0));
        for g in open {
            println!("      {g}");
        }
    }
    println!("complete: {}", st.is_complete());
}
