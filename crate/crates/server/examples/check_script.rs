//! Writes a task and a script to a scratch directory and runs the `check`
//! and `replay` subcommands on them, as the `easyprove` binary would.
//!
//!     cargo run -p easyprove-server --example check_script

use easyprove::demos::{barber_case_split_script, barber_task};
use easyprove_server::cli::run;

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let task = dir.path().join("barber.task");
    let script = dir.path().join("barber.script");
    std::fs::write(&task, barber_task().to_json()).unwrap();
    std::fs::write(&script, barber_case_split_script().to_json()).unwrap();
    let (task, script) = (task.to_str().unwrap(), script.to_str().unwrap());

    let mut bad = barber_case_split_script();
    bad.steps.swap(3, 4);
    let broken = dir.path().join("broken.script");
    std::fs::write(&broken, bad.to_json()).unwrap();

    for args in [
        vec!["check", script, task],
        vec!["--lang", "pl", "check", broken.to_str().unwrap(), task],
        vec!["replay", script, task],
    ] {
        println!("$ easyprove {}", args.join(" "));
        let mut out = Vec::new();
        let code = run(std::iter::once("easyprove").chain(args), &mut out, &mut std::io::stderr());
        print!("{}", String::from_utf8(out).unwrap());
        println!("exit {code}\n");
    }
}
