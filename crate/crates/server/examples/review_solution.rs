//! A student saves a proof; the teacher loads it and steps through the
//! replayed views, here rendered as Polish text.
//!
//!     cargo run -p easyprove-server --example review_solution

use std::sync::Arc;

use easyprove::demos::{demo_tasks, union_of_powerset_script};
use easyprove_server::{Locale, RedbStore, Service, UserRole};

fn main() {
    let svc = Service::new(Arc::new(RedbStore::in_memory().unwrap()));
    svc.import_tasks(demo_tasks()).unwrap();
    let student = svc.register("ola", "pw", UserRole::Student, Locale::Pl).unwrap();
    let teacher = svc.register("prof", "pw", UserRole::Teacher, Locale::Pl).unwrap();

    let session = svc.start_session(&student, "union-of-powerset").unwrap();
    let script = union_of_powerset_script();
    for r in &script.steps[..9] {
        svc.step(&student, &session.id, r).unwrap();
    }
    let saved = svc.save_solution(&student, &session.id).unwrap();
    println!("saved {} (complete: {})", saved.id, saved.complete);

    let loaded = svc.load_solution(&teacher, &saved.id).unwrap();
    for (i, view) in loaded.views.iter().enumerate() {
        match i {
            0 => println!("== start"),
            _ => println!("== {}. {}", i, loaded.script.steps[i - 1].kind),
        }
        print!("{}", view.to_text(Locale::Pl));
    }
}
