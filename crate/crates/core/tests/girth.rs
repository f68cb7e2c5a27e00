use fibgirth::girth::{alpha, alpha_naive, alpha_upper_bound, girth_of, GirthValue, Symmetries};
use fibgirth::magnus::lcs_member;

#[test]
fn small_girths_agree_with_the_naive_search() {
    for (n, expected) in [(1, 1), (2, 4), (3, 8)] {
        let fast = alpha(n, 10, 0).unwrap();
        let slow = alpha_naive(n, 8).unwrap();
        assert_eq!(fast.value, GirthValue::Found(expected));
        assert_eq!(slow.value, GirthValue::Found(expected));
        let witness = fast.witness.unwrap();
        assert_eq!(witness.len(), expected);
        assert!(lcs_member(&witness, n));
        assert!(lcs_member(&slow.witness.unwrap(), n));
    }
}

#[test]
fn short_radius_reports_unknown() {
    let rec = alpha(3, 6, 1).unwrap();
    assert_eq!(rec.value, GirthValue::UnknownAbove(6));
    assert_eq!(serde_json::to_value(rec.deterministic()).unwrap()["value"], "unknown above 6");
}

#[test]
fn records_do_not_depend_on_thread_count() {
    let one = serde_json::to_string(&alpha(4, 16, 1).unwrap().deterministic()).unwrap();
    let four = serde_json::to_string(&alpha(4, 16, 4).unwrap().deterministic()).unwrap();
    assert_eq!(one, four);
}

#[test]
fn upper_bounds_come_from_the_construction() {
    let bounds: Vec<usize> = (1..=6).map(alpha_upper_bound).collect();
    assert_eq!(bounds, [1, 4, 8, 14, 14, 30]);
}

#[test]
fn symmetry_choice_does_not_change_the_girth() {
    let pred = |w: &fibgirth::Word| lcs_member(w, 3);
    let all = girth_of(pred, 8, Symmetries::ALL, 1).unwrap();
    let none = girth_of(pred, 8, Symmetries::NONE, 1).unwrap();
    assert_eq!(all.value, none.value);
    assert!(all.candidates < none.candidates);
}
