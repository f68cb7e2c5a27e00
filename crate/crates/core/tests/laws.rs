use fibgirth::laws::catalog::{bundled, bundled_nilpotent};
use fibgirth::laws::{is_law, load_group, nilpotency_class, nilpotent_law_word, law_length_table, GroupError, NilpotencyClass};
use fibgirth::construction::{build_pair, Variant};
use fibgirth::Word;

#[test]
fn law_for_order_sixteen_holds_on_the_catalog() {
    let law = nilpotent_law_word(16);
    assert_eq!(law.word.len(), 14);
    let groups = bundled_nilpotent().unwrap();
    assert_eq!(groups.len(), 36);
    for g in &groups {
        let word = nilpotent_law_word(g.order().max(2) as u64).word;
        assert!(is_law(g, &word).holds, "{}", g.name());
        assert!(is_law(g, &law.word).holds, "{}", g.name());
    }
}

#[test]
fn commutator_is_not_a_law_on_s3() {
    let s3 = bundled("s3").unwrap().unwrap();
    let cert = is_law(&s3, &"abAB".parse().unwrap());
    assert!(!cert.holds);
    assert_eq!(cert.pairs_checked, 36);
    assert!(matches!(nilpotency_class(&s3), NilpotencyClass::NotNilpotent { .. }));
}

#[test]
fn law_words_fail_just_above_their_depth() {
    // a₁ has depth 2, so it is not a law on class-2 groups
    let a1: Word = "BabA".parse().unwrap();
    let d4 = bundled("d4").unwrap().unwrap();
    assert!(!is_law(&d4, &a1).holds);
    let a2 = build_pair(2, Variant::Standard).unwrap().a;
    assert!(is_law(&d4, &a2).holds);
}

#[test]
fn group_files_load_and_bad_tables_are_rejected() {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let good = dir.join("z4_test.json");
    std::fs::write(&good, bundled("z4").unwrap().unwrap().to_json()).unwrap();
    assert_eq!(load_group(&good).unwrap().order(), 4);
    let bad = dir.join("bad_test.json");
    std::fs::write(&bad, r#"{"name":"bad","order":3,"table":[[0,1,2],[1,1,2],[2,2,0]]}"#).unwrap();
    assert!(load_group(&bad).is_err());
    assert!(matches!(load_group(&dir.join("missing.json")), Err(GroupError::Io(_))));
}

#[test]
fn law_lengths_grow_like_a_power_of_log() {
    let rows = law_length_table(4, 20);
    let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    let max = ratios.iter().cloned().fold(0.0, f64::max);
    assert!(max < 10.0, "{ratios:?}");
}
