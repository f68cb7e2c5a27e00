//! One PASS/FAIL line per acceptance criterion.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use fibgirth::construction::{build_pair, depth_lower_bound, exponent_estimate, fibonacci, predicted_length, Variant, Which};
use fibgirth::girth::{alpha, alpha_naive, w28, GirthValue};
use fibgirth::laws::catalog::{bundled, bundled_nilpotent};
use fibgirth::laws::{is_law, nilpotent_law_word};
use fibgirth::magnus::{lcs_depth, lcs_member, DepthResult};
use fibgirth::suite;
use fibgirth::unitary::almost::{
    commutator_contraction, decay_report, find_seed_pair, monotonicity_violations, product_form_counterexample,
    recursion_violations,
};

type Verdict = (bool, String);

fn fibgirth(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let o = Command::new(env!("CARGO_BIN_EXE_fibgirth"))
        .args(args)
        .env_remove("FIBGIRTH_CACHE_DIR")
        .output()
        .expect("binary runs");
    (o.status.code(), o.stdout)
}

fn within(t: Instant, limit: Duration) -> (bool, String) {
    let e = t.elapsed();
    (e < limit, format!("{:.2} s", e.as_secs_f64()))
}

fn lengths() -> Verdict {
    let t = Instant::now();
    let mut ok = true;
    for n in 0..=20 {
        let p = build_pair(n, Variant::Standard).expect("level 20 is allowed");
        ok &= p.a.len() as u128 == predicted_length(n, Which::A, Variant::Standard);
        ok &= p.b.len() as u128 == predicted_length(n, Which::B, Variant::Standard);
    }
    let got: Vec<(usize, usize)> = (3..=6)
        .map(|n| build_pair(n, Variant::Standard).map(|p| (p.a.len(), p.b.len())).expect("small"))
        .collect();
    ok &= got == [(14, 16), (30, 30), (60, 60), (118, 120)];
    let (fast, time) = within(t, Duration::from_secs(1));
    (ok && fast, format!("ℓ(a₃..a₆, b₃..b₆) = {got:?}, {time}"))
}

fn identities() -> Verdict {
    let t = Instant::now();
    let words = suite::words(suite::SUITE_SEED);
    let levels = suite::levels(12);
    let checks = words.checks.len() + levels.checks.len();
    let failed: Vec<String> = words.failures().chain(levels.failures()).map(|c| c.name.clone()).collect();
    let (fast, time) = within(t, Duration::from_secs(1));
    (failed.is_empty() && fast, format!("{checks} word equalities, failures {failed:?}, {time}"))
}

fn ladder() -> Verdict {
    let t = Instant::now();
    let mut ok = true;
    let mut depths = Vec::new();
    for n in 0..=5 {
        let p = build_pair(n, Variant::Standard).expect("small");
        let da = lcs_depth(&p.a, 14);
        let db = lcs_depth(&p.b, 14);
        ok &= da.lower_bound() as u128 >= fibonacci(n + 2) && da.lower_bound() as u128 >= depth_lower_bound(n, Variant::Standard);
        ok &= da == db;
        depths.push(da);
    }
    ok &= depths == [1, 2, 3, 5, 8, 13].map(DepthResult::Exact);
    let (fast, time) = within(t, Duration::from_secs(120));
    (ok && fast, format!("{depths:?}, {time}"))
}

fn girth_values() -> Verdict {
    let t = Instant::now();
    let mut ok = true;
    let mut values = Vec::new();
    for (n, expected) in [(1, 1), (2, 4), (3, 8)] {
        let fast = alpha(n, 10, 0).expect("valid index");
        let slow = alpha_naive(n, 8).expect("valid index");
        ok &= fast.value == GirthValue::Found(expected) && slow.value == fast.value;
        ok &= fast.witness.as_ref().is_some_and(|w| w.len() == expected && lcs_member(w, n));
        values.push(format!("α({n}) = {} by {}", expected, fast.witness.map(|w| w.to_string()).unwrap_or_default()));
    }
    let (fast_small, small_time) = within(t, Duration::from_secs(60));
    let t4 = Instant::now();
    let first = fibgirth(&["alpha", "-n", "4", "--radius", "16", "-j", "8"]);
    let second = fibgirth(&["alpha", "-n", "4", "--radius", "16", "-j", "8"]);
    let (fast4, time4) = within(t4, Duration::from_secs(2 * 30 * 60));
    let same = first.0 == Some(0) && first == second;
    let record = String::from_utf8_lossy(&first.1).trim().to_string();
    (
        ok && fast_small && fast4 && same,
        format!("{}, {small_time}; α(4) record {record} reproduced: {same}, {time4}", values.join(", ")),
    )
}

fn w28_fixture() -> Verdict {
    let w = w28();
    let a4 = build_pair(4, Variant::Standard).expect("small").a;
    let est_a4 = exponent_estimate(8, a4.len()).expect("long");
    let est_w = exponent_estimate(7, w.len()).expect("long");
    let three = |x: f64| (x * 1000.0).floor() as i64;
    let ok = w.len() == 28 && lcs_member(&w, 7) && three(est_a4) == 611 && three(est_w) == 583;
    (ok, format!("ℓ(w₂₈) = {}, depth {}, estimates {est_a4:.5} and {est_w:.5}", w.len(), lcs_depth(&w, 10)))
}

fn girth_bound() -> Verdict {
    let p = |n| build_pair(n, Variant::Standard).expect("small");
    let (a2, b1, a3) = (p(2).a, p(1).b, p(3).a);
    let ok = a2.commutator(&b1) == a3 && lcs_member(&a2, 3) && lcs_member(&b1, 2) && a3.len() == 14;
    let g = |n| alpha(n, 8, 0).ok().and_then(|r| r.value.found()).unwrap_or(0);
    let (g2, g3) = (g(2), g(3));
    let lines = format!("girth([γ₃, γ₂]) ≤ {} < 2·α(3) = {}; {} > 3·α(2) = {}", a3.len(), 2 * g3, a3.len(), 3 * g2);
    (ok && a3.len() < 2 * g3 && a3.len() > 3 * g2, lines)
}

fn nilpotent_laws() -> Verdict {
    let t = Instant::now();
    let law = nilpotent_law_word(16);
    let mut ok = law.word == build_pair(3, Variant::Standard).expect("small").a;
    let groups = bundled_nilpotent().expect("catalog loads");
    let mut checked = 0;
    for g in groups.iter().filter(|g| g.order() <= 16 || g.name() == "heis3") {
        ok &= is_law(g, &law.word).holds;
        checked += 1;
    }
    let s3 = bundled("s3").expect("bundled").expect("valid");
    let control = is_law(&s3, &"abAB".parse().expect("word"));
    ok &= !control.holds;
    let (fast, time) = within(t, Duration::from_secs(10));
    (ok && fast, format!("a₃ holds on {checked} groups, [a, b] fails on s3 at {:?}, {time}", control.counterexample))
}

fn almost_law() -> Verdict {
    let t = Instant::now();
    let (budget, seed) = (10_000, 42);
    let stats = commutator_contraction(2, budget, seed);
    let (lhs, rhs) = product_form_counterexample(2);
    let rows = find_seed_pair(2, 4096, budget, 8, seed).and_then(|pair| decay_report(&pair, 2, 8, budget, 8, seed));
    let (fast, time) = within(t, Duration::from_secs(300));
    match rows {
        Ok(rows) => {
            let rec = recursion_violations(&rows);
            let mono = monotonicity_violations(&rows);
            let ok = stats.violations == 0 && lhs > rhs && rec.is_empty() && mono.is_empty() && rows.len() == 9;
            let last = rows.last().map_or(0.0, |r| r.l_hat);
            (
                ok && fast,
                format!(
                    "contraction {}/{} ok, product form {lhs:.3} > {rhs}, recursion violations {rec:?}, \
                     monotonicity violations {mono:?}, L̂₈ = {last:e}, {time}",
                    stats.samples - stats.violations,
                    stats.samples
                ),
            )
        }
        Err(e) => (false, e.to_string()),
    }
}

fn determinism() -> Verdict {
    let runs: [(&str, Vec<&str>, Vec<&str>); 3] = [
        ("verify", vec!["verify", "--json", "-j", "1"], vec!["verify", "--json", "-j", "3"]),
        ("alpha", vec!["alpha", "-n", "4", "--radius", "16", "-j", "1"], vec!["alpha", "-n", "4", "--radius", "16", "-j", "8"]),
        (
            "almost",
            vec!["almost", "--n-max", "8", "--budget", "2000", "--seed", "7", "--json", "-j", "1"],
            vec!["almost", "--n-max", "8", "--budget", "2000", "--seed", "7", "--json", "-j", "4"],
        ),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, one, many) in runs {
        let a = fibgirth(&one);
        let b = fibgirth(&many);
        let c = fibgirth(&one);
        let same = a.0 == Some(0) && a == b && a == c && serde_json::from_slice::<serde_json::Value>(&a.1).is_ok();
        ok &= same;
        detail.push(format!("{name} {}", if same { "identical" } else { "differs" }));
    }
    (ok, detail.join(", "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("length closed forms", lengths),
        ("word identities", identities),
        ("depth ladder", ladder),
        ("girth values", girth_values),
        ("w₂₈ fixture", w28_fixture),
        ("girth of [γ₃, γ₂]", girth_bound),
        ("nilpotent laws", nilpotent_laws),
        ("almost-law decay", almost_law),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = check();
        failed += usize::from(!ok);
        println!("{} {}. {name}: {detail}", if ok { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
