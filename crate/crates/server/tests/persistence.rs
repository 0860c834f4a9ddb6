mod support;

use std::sync::Arc;

use easyprove::demos::demo_tasks;
use easyprove_server::view::ProofView;
use easyprove_server::{Locale, RedbStore, Service, UserRole};
use easyprove_testkit::gen::rng;
use easyprove_testkit::walk::random_walk;
use proptest::prelude::*;
use proptest::test_runner::TestRunner;
use rand::Rng;

#[test]
fn saved_solutions_replay_to_the_live_state() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("db.redb");
    let svc = Service::new(Arc::new(RedbStore::open(&path).unwrap()));
    svc.import_tasks(demo_tasks()).unwrap();
    let owner = svc.register("alice", support::PASSWORD, UserRole::Student, Locale::En).unwrap();
    let teacher = svc.register("teacher", support::PASSWORD, UserRole::Teacher, Locale::En).unwrap();

    let mut runner = TestRunner::new(ProptestConfig::with_cases(32));
    runner
        .run(&any::<u64>(), |seed| {
            let mut r = rng(seed);
            let task = demo_tasks()[r.random_range(0..2)].clone();
            let mut walked = task.start().unwrap();
            random_walk(&mut walked, &mut r, 25);
            // the redo stack is not part of a session
            let local = task.replay(&walked.script(&task.id)).unwrap();

            let session = svc.start_session(&owner, &task.id).unwrap();
            for rec in &local.script(&task.id).steps {
                svc.step(&owner, &session.id, rec).unwrap();
            }
            if local.can_undo() {
                svc.undo(&owner, &session.id).unwrap();
                svc.redo(&owner, &session.id).unwrap();
            }
            let live = svc.get_session(&owner, &session.id).unwrap();
            prop_assert_eq!(&live.view, &ProofView::of(&local));

            let saved = svc.save_solution(&owner, &session.id).unwrap();
            prop_assert_eq!(saved.complete, local.is_complete());
            let loaded = svc.load_solution(&teacher, &saved.id).unwrap();
            let replayed = task.replay(&loaded.script).unwrap();
            prop_assert_eq!(replayed.data(), local.data());
            prop_assert_eq!(loaded.views.len(), loaded.script.steps.len() + 1);
            prop_assert_eq!(loaded.views.last(), Some(&live.view));
            Ok(())
        })
        .unwrap();
}
