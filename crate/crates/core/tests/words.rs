use fibgirth::magnus::{lcs_depth, magnus_expand, DepthResult, Monomial};
use fibgirth::word::{reduce_letters, Letter};
use fibgirth::Word;
use proptest::prelude::*;

fn letters(max: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((0u8..4).prop_map(Letter::from_code), 0..=max)
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    letters(max).prop_map(Word::from_letters)
}

fn depth(w: &Word) -> usize {
    match lcs_depth(w, 8) {
        DepthResult::Exact(d) => d,
        DepthResult::AtLeast(d) => d,
        DepthResult::Identity => usize::MAX,
    }
}

proptest! {
    #[test]
    fn commutator_absorbs_powers(w1 in word(10), w2 in word(10), n in -3i64..=3) {
        let c = w1.commutator(&w2);
        prop_assert_eq!(&w1.concat(&w2.power(n)).commutator(&w2), &c);
        prop_assert_eq!(&w1.commutator(&w2.concat(&w1.power(n))), &c);
    }

    #[test]
    fn words_are_reduced_and_invertible(raw in letters(20), other in word(20)) {
        let w = Word::from_letters(raw.clone());
        prop_assert_eq!(w.letters(), &reduce_letters(&raw)[..]);
        prop_assert!(w.letters().windows(2).all(|p| !p[0].is_inverse_of(p[1])));
        prop_assert!(w.concat(&w.invert()).is_identity());
        prop_assert_eq!(w.invert().invert(), w.clone());
        prop_assert_eq!(w.concat(&other).invert(), other.invert().concat(&w.invert()));
        let text = w.to_string();
        prop_assert_eq!(text.parse::<Word>().unwrap(), w);
    }

    #[test]
    fn cyclic_reduction_is_a_conjugation(w in word(16)) {
        let (core, conj) = w.cyclic_reduce();
        prop_assert!(core.is_cyclically_reduced());
        prop_assert_eq!(core.conjugate_by(&conj), w);
    }

    #[test]
    fn degree_one_terms_are_exponent_sums(w in word(20)) {
        let s = magnus_expand(&w, 2);
        let (ea, eb) = w.exponent_sums();
        prop_assert_eq!(s.coefficient(Monomial::parse("X").unwrap()), ea.into());
        prop_assert_eq!(s.coefficient(Monomial::parse("Y").unwrap()), eb.into());
    }

    #[test]
    fn depth_is_superadditive(u in word(6), v in word(6)) {
        let c = u.commutator(&v);
        prop_assume!(!c.is_identity());
        let expected = depth(&u).saturating_add(depth(&v)).min(9);
        prop_assert!(depth(&c) >= expected, "{} {} {}", u, v, c);
    }

    #[test]
    fn depth_is_invariant_under_automorphisms_and_conjugation(w in word(10), c in word(6)) {
        let a = Word::generator_a();
        let b = Word::generator_b();
        let d = lcs_depth(&w, 8);
        prop_assert_eq!(lcs_depth(&w.apply_endomorphism(&b, &a), 8), d);
        prop_assert_eq!(lcs_depth(&w.apply_endomorphism(&a.invert(), &b), 8), d);
        prop_assert_eq!(lcs_depth(&w.apply_endomorphism(&a.concat(&b), &b), 8), d);
        prop_assert_eq!(lcs_depth(&w.conjugate_by(&c), 8), d);
    }

    #[test]
    fn series_multiply_like_words(u in word(8), v in word(8)) {
        let product = magnus_expand(&u, 6).mul(&magnus_expand(&v, 6));
        prop_assert_eq!(product, magnus_expand(&u.concat(&v), 6));
    }
}
