use fibgirth::construction::{
    build_levels, build_pair, exponent_table, predicted_length, verify_level, DepthMode, Variant, Which,
    DEFAULT_MAX_LEVEL,
};
use fibgirth::magnus::{lcs_depth, lcs_member, DepthResult};
use fibgirth::Word;

#[test]
fn lengths_follow_closed_forms_up_to_level_twenty() {
    for variant in [Variant::Standard, Variant::Primed] {
        let levels = build_levels(20, variant, DEFAULT_MAX_LEVEL).unwrap();
        for (n, (a, b)) in levels.iter().enumerate() {
            assert_eq!(a.len() as u128, predicted_length(n, Which::A, variant), "a_{n} {variant:?}");
            assert_eq!(b.len() as u128, predicted_length(n, Which::B, variant), "b_{n} {variant:?}");
        }
    }
    let p6 = build_pair(6, Variant::Standard).unwrap();
    assert_eq!((p6.a.len(), p6.b.len()), (118, 120));
    assert_eq!(build_pair(5, Variant::Primed).unwrap().a.len(), 32);
}

#[test]
fn every_level_identity_holds_to_twelve() {
    for n in 0..=12 {
        let report = verify_level(n).unwrap();
        assert!(report.passed(), "{report}");
    }
}

#[test]
fn depth_ladder() {
    let levels = build_levels(5, Variant::Standard, DEFAULT_MAX_LEVEL).unwrap();
    let depths: Vec<DepthResult> = levels.iter().map(|(a, _)| lcs_depth(a, 14)).collect();
    let expected: Vec<DepthResult> = [1, 2, 3, 5, 8, 13].into_iter().map(DepthResult::Exact).collect();
    assert_eq!(depths, expected);
    for (a, b) in &levels {
        assert_eq!(lcs_depth(a, 14), lcs_depth(b, 14));
    }
}

#[test]
fn primed_words_reach_the_shifted_bound() {
    let levels = build_levels(4, Variant::Primed, DEFAULT_MAX_LEVEL).unwrap();
    for (n, (a, _)) in levels.iter().enumerate().skip(1) {
        let bound = fibgirth::construction::depth_lower_bound(n, Variant::Primed) as usize;
        assert!(lcs_member(a, bound), "a'_{n} ∉ γ_{bound}");
    }
}

#[test]
fn exponent_row_for_level_four() {
    let rows = exponent_table(4, Variant::Standard, DepthMode::Magnus, 10).unwrap();
    let r = &rows[4];
    assert_eq!((r.len_a, r.depth_exact), (30, Some(8)));
    let e = r.estimate.unwrap();
    assert_eq!((e * 1e4).floor(), 6113.0);
}

#[test]
fn first_level_is_the_commutator_of_b_inverse_and_a() {
    let a = Word::generator_a();
    let b = Word::generator_b();
    assert_eq!(build_pair(1, Variant::Standard).unwrap().a, b.invert().commutator(&a));
}

#[test]
fn exponent_estimates_trend_upwards() {
    let rows = exponent_table(6, Variant::Standard, DepthMode::Bound, 14).unwrap();
    let est: Vec<f64> = rows[3..=6].iter().map(|r| r.estimate.unwrap()).collect();
    assert!(est.windows(2).all(|p| p[0] < p[1]), "{est:?}");
    assert!(est.iter().all(|&e| e < 1.0 / ((1.0 + 5f64.sqrt()) / 2.0).log2()));
}
