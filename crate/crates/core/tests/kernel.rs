use easyprove::demos::{barber_script, barber_task};
use easyprove_testkit::checks::{discipline_case, fol_soundness_case, soundness_case, SoundnessStats};
use easyprove_testkit::gen::rng;
use proptest::prelude::*;

#[test]
fn barber_replay_is_byte_stable() {
    let task = barber_task();
    let a = task.replay(&barber_script()).unwrap();
    let b = task.replay(&barber_script()).unwrap();
    assert!(a.is_complete());
    assert_eq!(a.canonical(), b.canonical());
}

#[test]
fn scripted_proofs_are_sound() {
    let mut r = rng(5);
    let mut stats = SoundnessStats::default();
    for _ in 0..60 {
        soundness_case(&mut r, &mut stats).unwrap();
    }
    assert_eq!(stats.proved, 60);
    assert!(stats.mutants_rejected > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn state_discipline(seed in any::<u64>()) {
        prop_assert_eq!(discipline_case(&mut rng(seed), 30), Ok(()));
    }

    #[test]
    fn first_order_walks_are_sound(seed in any::<u64>()) {
        prop_assert_eq!(fol_soundness_case(&mut rng(seed)), Ok(()));
    }
}
