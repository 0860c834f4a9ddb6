//! Proof by pointing on the barber paradox: for each step, print what the
//! kernel offers on the chosen formula, then take one of the offers.
//!
//!     cargo run -p easyprove --example barber

use easyprove::demos::{barber_script, barber_task};
use easyprove::{print, Path, ProofState};

fn show(st: &ProofState) {
    for f in st.formulas() {
        let mark = match st.goal_status(f.number) {
            Some(s) => format!("{s:?}"),
            None if st.in_scope(f.number) => "assumption".into(),
            None => "assumption, other branch".into(),
        };
        println!("  {:>2}. {}  [{mark}]", f.number, print(&f.formula));
    }
}

fn main() {
    let task = barber_task();
    let mut st = task.start().expect("demo task is well formed");
    show(&st);
    for r in &barber_script().steps {
        let target = r.target.expect("barber records point at a formula");
        let menu = st.applicable_steps(target, &Path::root()).expect("target is usable");
        let kinds: Vec<_> = menu.iter().map(|d| d.step.kind()).collect();
        println!("\nformula {target} offers {}", kinds.join(", "));
        println!("taking {}{}", r.kind, r.term.as_deref().map(|t| format!(" with {t}")).unwrap_or_default());
        st.apply_record(r).expect("scripted step applies");
        show(&st);
    }
    println!("\ncomplete: {}", st.is_complete());

    st.undo().unwrap();
    println!("after undo, open goals {:?}", st.open_goals());
    st.redo().unwrap();
    println!("after redo, complete: {}", st.is_complete());
    println!("\n{}", st.script(&task.id).to_json());
}
