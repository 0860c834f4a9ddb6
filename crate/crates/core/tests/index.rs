use easyprove::theory::builtin_theories;
use easyprove::{compile_lemma, parse, Context, LemmaIndex, Pattern, Signature};
use easyprove_testkit::checks::{index_case, random_pattern, random_query};
use easyprove_testkit::gen::{rng, test_signature};
use easyprove_testkit::matcher::brute_lookup;
use proptest::prelude::*;
use rand::seq::SliceRandom;

#[test]
fn inclusion_definition_on_union_of_powerset() {
    let patterns: Vec<Pattern> = builtin_theories()
        .iter()
        .flat_map(|t| &t.lemmas)
        .flat_map(|l| compile_lemma(&l.statement, &l.id).unwrap())
        .collect();
    let index = LemmaIndex::from_patterns(patterns);
    let query = parse("⋃(𝒫(A)) ⊆ A", &Signature::builtin(), &Context::new()).unwrap();
    let hits = index.lookup(&query);
    let hit = hits.iter().find(|m| m.pattern.lemma_id == "zf/subseteq-def").unwrap();
    assert_eq!(hit.bindings["A"].to_string(), "⋃(𝒫(A))");
    assert_eq!(hit.bindings["B"].to_string(), "A");
    assert_eq!(hit.bindings.len(), 2);
}

#[test]
fn seeded_differential() {
    let sig = test_signature();
    let mut r = rng(3);
    for _ in 0..200 {
        index_case(&mut r, &sig).unwrap();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lookup_equals_scan(seed in any::<u64>()) {
        prop_assert_eq!(index_case(&mut rng(seed), &test_signature()), Ok(()));
    }

    #[test]
    fn insertion_order_is_irrelevant(seed in any::<u64>()) {
        let sig = test_signature();
        let mut r = rng(seed);
        let mut patterns: Vec<Pattern> = (0..20).map(|i| random_pattern(&mut r, &sig, i)).collect();
        let a = LemmaIndex::from_patterns(patterns.clone());
        patterns.shuffle(&mut r);
        let b = LemmaIndex::from_patterns(patterns.clone());
        for _ in 0..10 {
            let q = random_query(&mut r, &sig, &patterns);
            prop_assert_eq!(a.lookup(&q), b.lookup(&q));
            prop_assert_eq!(a.lookup(&q).len(), brute_lookup(&patterns, &q).len());
        }
    }
}
