//! The full battery of identity checks, grouped into reports.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::construction::{
    build_levels, build_pair, depth_lower_bound, exponent_estimate, exponent_table, fibonacci, predicted_length, verify_level_with,
    DepthMode, Variant, Which, DEFAULT_MAX_LEVEL,
};
use crate::girth::{alpha, alpha_naive, girth_of, verify_girth_facts, Symmetries};
use crate::laws::catalog::{bundled, bundled_nilpotent};
use crate::laws::{is_law, nilpotency_class, nilpotent_law_word, NilpotencyClass};
use crate::magnus::{lcs_depth, lcs_member, magnus_expand, DepthResult, Monomial, DEFAULT_CAP};
use crate::report::Report;
use crate::unitary::almost::{commutator_contraction, level_norms, product_form_counterexample};
use crate::word::{Letter, Word};

/// Default highest level for the per-level construction checks.
pub const DEFAULT_LEVEL: usize = 12;
/// Fixed seed of the randomized checks.
pub const SUITE_SEED: u64 = 20_240_601;
pub const CONTRACTION_SAMPLES: usize = 10_000;

/// Level `n ≤ level_max` checks need `a_{n+3}`.
pub fn max_level() -> usize {
    DEFAULT_MAX_LEVEL - 3
}

fn w(s: &str) -> Word {
    s.parse().expect("literal word")
}

pub fn random_word<R: Rng>(rng: &mut R, max_len: usize) -> Word {
    let len = rng.random_range(0..=max_len);
    Word::from_letters((0..len).map(|_| Letter::from_code(rng.random_range(0..4))))
}

/// Parsing, printing and the commutator identities on random words.
pub fn words(seed: u64) -> Report {
    let mut r = Report::new("words");
    let a1 = w("BabA");
    r.check_eq("BabA = b⁻¹aba⁻¹", &a1, &w("b").invert().concat(&w("ab")).concat(&w("A")));
    r.check_eq("ℓ(BabA) = 4", &a1.len(), &4);
    r.check_eq("a₁ prints as BabA", &build_pair(1, Variant::Standard).expect("small").a.to_string(), &"BabA".to_string());
    let p2 = build_pair(2, Variant::Standard).expect("small");
    let p3 = build_pair(3, Variant::Standard).expect("small");
    let prod = p2.a.concat(&p2.b);
    r.check_eq("a₂·b₂ = a₃", &prod, &p3.a);
    r.check_eq("ℓ(a₂·b₂) = 8 + 8 − 2", &prod.len(), &14);
    let (a, b) = (Word::generator_a(), Word::generator_b());
    r.check_eq("[a·b³, b] = [a, b]", &a.concat(&b.power(3)).commutator(&b), &a.commutator(&b));
    r.check_eq("τ(a₁) = baBA", &a1.apply_endomorphism(&a, &b.invert()), &w("baBA"));
    let p0 = build_pair(0, Variant::Standard).expect("small");
    let sigma_a0 = p0.a.apply_endomorphism(&a.invert(), &b.invert());
    r.check_eq("a·σ(a₀)·a⁻¹ = b₀", &sigma_a0.conjugate_by(&a), &p0.b);
    r.check_eq("b₀ = abA", &p0.b, &w("abA"));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = true;
    let mut detail = String::new();
    'outer: for _ in 0..200 {
        let w1 = random_word(&mut rng, 12);
        let w2 = random_word(&mut rng, 12);
        let c = w1.commutator(&w2);
        for n in -3..=3 {
            let left = w1.concat(&w2.power(n)).commutator(&w2);
            let right = w1.commutator(&w2.concat(&w1.power(n)));
            if left != c || right != c {
                ok = false;
                detail = format!("w1 = {w1}, w2 = {w2}, n = {n}");
                break 'outer;
            }
        }
    }
    r.check("[w₁, w₂] = [w₁w₂ⁿ, w₂] = [w₁, w₂w₁ⁿ] on 200 random pairs, n ∈ −3..3", ok, detail);
    r
}

/// Length closed forms, Fibonacci numbers and depth bounds.
pub fn lengths() -> Report {
    let mut r = Report::new("lengths");
    r.check_eq("f₀ = 0", &fibonacci(0), &0);
    r.check_eq("f₁ = 1", &fibonacci(1), &1);
    r.check_eq("closed form ℓ(a₀) = 1", &predicted_length(0, Which::A, Variant::Standard), &1);
    r.check_eq("closed form ℓ(a₄) = 30", &predicted_length(4, Which::A, Variant::Standard), &30);
    for (n, d) in [(2, 3), (3, 5), (4, 8)] {
        r.check_eq(format!("depth bound at level {n}"), &depth_lower_bound(n, Variant::Standard), &d);
    }
    for variant in [Variant::Standard, Variant::Primed] {
        let levels = build_levels(20, variant, DEFAULT_MAX_LEVEL).expect("level 20 is allowed");
        let bad: Vec<usize> = levels
            .iter()
            .enumerate()
            .filter(|(n, (a, b))| {
                a.len() as u128 != predicted_length(*n, Which::A, variant)
                    || b.len() as u128 != predicted_length(*n, Which::B, variant)
            })
            .map(|(n, _)| n)
            .collect();
        r.check(format!("{} lengths match closed forms for n ≤ 20", variant.name()), bad.is_empty(), format!("{bad:?}"));
        if variant == Variant::Standard {
            let got: Vec<(usize, usize)> = levels[3..=6].iter().map(|(a, b)| (a.len(), b.len())).collect();
            r.check_eq(
                "ℓ(a₃..a₆), ℓ(b₃..b₆)",
                &format!("{got:?}"),
                &format!("{:?}", [(14, 16), (30, 30), (60, 60), (118, 120)]),
            );
        } else {
            r.check_eq("ℓ(a′₅) = 32", &levels[5].0.len(), &32);
        }
    }
    let rows = exponent_table(6, Variant::Standard, DepthMode::Bound, DEFAULT_CAP).expect("small");
    let est: Vec<f64> = rows[3..=6].iter().filter_map(|row| row.estimate).collect();
    r.check("exponent estimates increase over levels 3..6", est.windows(2).all(|p| p[0] < p[1]), format!("{est:?}"));
    r
}

/// Per-level structural identities of the standard construction.
pub fn levels(level_max: usize) -> Report {
    let mut r = Report::new(format!("levels 0..={level_max}"));
    let levels = build_levels(level_max + 3, Variant::Standard, DEFAULT_MAX_LEVEL).expect("level within bounds");
    for n in 0..=level_max {
        r.merge(verify_level_with(&levels, n));
    }
    r
}

/// Magnus expansion examples and the depth ladder `a₀..a₅`.
pub fn magnus(seed: u64) -> Report {
    let mut r = Report::new("magnus");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = Monomial::parse("X").expect("monomial");
    let y = Monomial::parse("Y").expect("monomial");
    let mut ok = true;
    for _ in 0..100 {
        let word = random_word(&mut rng, 16);
        let s = magnus_expand(&word, 3);
        let (ea, eb) = word.exponent_sums();
        ok &= s.coefficient(x) == ea.into() && s.coefficient(y) == eb.into();
    }
    r.check("degree-one coefficients are exponent sums", ok, String::new());
    let ab = w("abAB");
    r.check_eq("γ([a, b]²) = 2", &lcs_depth(&ab.concat(&ab), 4), &DepthResult::Exact(2));

    let levels = build_levels(5, Variant::Standard, DEFAULT_MAX_LEVEL).expect("small");
    r.check_eq("γ(a₃) at cap 8", &lcs_depth(&levels[3].0, 8), &DepthResult::Exact(5));
    r.check_eq("γ(a₄) at cap 10", &lcs_depth(&levels[4].0, 10), &DepthResult::Exact(8));
    for (n, (a, b)) in levels.iter().enumerate() {
        let da = lcs_depth(a, 14);
        let db = lcs_depth(b, 14);
        let expected = DepthResult::Exact(fibonacci(n + 2) as usize);
        r.check_eq(format!("γ(a_{n}) = f_{}", n + 2), &da, &expected);
        r.check(
            format!("γ(a_{n}) ≥ depth bound"),
            da.lower_bound() as u128 >= depth_lower_bound(n, Variant::Standard),
            format!("{da}"),
        );
        r.check_eq(format!("γ(b_{n}) = γ(a_{n})"), &db, &da);
    }
    r
}

/// Small girth values and the facts about `w₂₈` and `[γ₃, γ₂]`.
pub fn girth() -> Report {
    let mut r = Report::new("girth");
    let mut alphas = Vec::new();
    for n in 1..=3 {
        let canonical = alpha(n, 10, 0).ok();
        let naive = alpha_naive(n, 8).ok();
        let value = canonical.as_ref().and_then(|rec| rec.value.found());
        let witness_ok = canonical
            .as_ref()
            .and_then(|rec| rec.witness.as_ref())
            .is_some_and(|wit| !wit.is_identity() && Some(wit.len()) == value && lcs_member(wit, n));
        r.check(format!("α({n}) witness is a nontrivial element of γ_{n}"), witness_ok, format!("{canonical:?}"));
        r.check_eq(
            format!("α({n}) canonical = naive"),
            &format!("{value:?}"),
            &format!("{:?}", naive.and_then(|rec| rec.value.found())),
        );
        alphas.push(value);
    }
    r.check_eq("α(1), α(2), α(3)", &format!("{alphas:?}"), &format!("{:?}", [Some(1), Some(4), Some(8)]));
    let a1 = alpha(1, 1, 0).ok().and_then(|rec| rec.witness);
    r.check_eq("α(1) witness", &format!("{a1:?}"), &format!("{:?}", Some(w("a"))));
    let g2 = girth_of(|wd| lcs_member(wd, 2), 6, Symmetries::ALL, 0).ok().and_then(|rec| rec.value.found());
    r.check_eq("girth of γ₂ membership", &format!("{g2:?}"), &"Some(4)".to_string());
    let levels = build_levels(2, Variant::Standard, DEFAULT_MAX_LEVEL).expect("small");
    for (n, alpha_n) in alphas.iter().enumerate() {
        let a = &levels[n].0;
        r.check(
            format!("α(γ(a_{n})) ≤ ℓ(a_{n})"),
            alpha_n.is_some_and(|v| v <= a.len()),
            format!("{alpha_n:?} vs {}", a.len()),
        );
    }
    let est = exponent_estimate(8, 30).expect("long word");
    r.check("exponent estimate at level 4 is 0.611", (est * 1000.0).floor() == 611.0, format!("{est}"));
    r.merge(verify_girth_facts());
    r
}

/// Nilpotent laws on the bundled catalog.
pub fn laws() -> Report {
    let mut r = Report::new("laws");
    let a3 = build_pair(3, Variant::Standard).expect("small").a;
    let law = nilpotent_law_word(16);
    r.check_eq("law word for order ≤ 16 is a₃", &law.word, &a3);
    r.check_eq("law word for order ≤ 4 has length 4", &nilpotent_law_word(4).word.len(), &4);
    match bundled_nilpotent() {
        Ok(groups) => {
            for g in &groups {
                let class = nilpotency_class(g);
                r.check(format!("{} is nilpotent", g.name()), matches!(class, NilpotencyClass::Class(_)), format!("{class:?}"));
                let word = if g.order() <= 16 { &law.word } else { &nilpotent_law_word(g.order() as u64).word };
                let cert = is_law(g, word);
                r.check(format!("law holds on {}", g.name()), cert.holds, format!("{:?}", cert.counterexample));
            }
        }
        Err(e) => r.check("bundled catalog loads", false, e.to_string()),
    }
    match bundled("s3") {
        Some(Ok(s3)) => {
            let cert = is_law(&s3, &w("abAB"));
            r.check("[a, b] is not a law on s3", !cert.holds && cert.counterexample.is_some(), String::new());
        }
        other => r.check("s3 loads", false, format!("{other:?}")),
    }
    r
}

/// The contraction inequality and its use in the decay recursion.
pub fn unitary(seed: u64) -> Report {
    let mut r = Report::new("unitary");
    let stats = commutator_contraction(2, CONTRACTION_SAMPLES, seed);
    r.check(
        format!("‖1 − [u, v]‖ ≤ 2‖1 − u‖‖1 − v‖ on {} samples", stats.samples),
        stats.violations == 0,
        format!("{} violations", stats.violations),
    );
    let (lhs, rhs) = product_form_counterexample(2);
    r.check("product form fails at u₂ = 1", lhs > rhs, format!("{lhs} vs {rhs}"));
    let levels = build_levels(8, Variant::Standard, DEFAULT_MAX_LEVEL).expect("small");
    let ok = (0..=6).all(|n| levels[n + 1].0.commutator(&levels[n].1) == levels[n + 2].0);
    r.check("a_{n+2} = [a_{n+1}, b_n] for n ≤ 6", ok, String::new());
    let norms = level_norms(2, 6, 200, seed);
    let worst = norms.iter().flatten().map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    r.check("‖1 − a_n‖ = ‖1 − b_n‖ pointwise", worst < 1e-9, format!("max gap {worst:e}"));
    r
}

/// Every suite. `level_max` bounds the per-level construction checks.
pub fn all(level_max: usize) -> Vec<Report> {
    vec![
        words(SUITE_SEED),
        lengths(),
        levels(level_max),
        magnus(SUITE_SEED),
        girth(),
        laws(),
        unitary(SUITE_SEED),
    ]
}
