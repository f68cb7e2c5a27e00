//! The Fibonacci commutator words `a_n`, `b_n`.
//!
//! Both variants use the recursion `a_n = a_{n−1} b_{n−1}`,
//! `b_n = a_{n−1}⁻¹ b_{n−1}⁻¹`. The standard variant starts from
//! `a_0 = b⁻¹`, `b_0 = a b a⁻¹`; the primed one from `a_0 = a`, `b_0 = b`.
//! Since `a_{n+2} = [a_n, b_n] = [a_{n+1}, b_n]` and `b_n` is conjugate to
//! `a_n⁻¹`, depth grows at least like the Fibonacci numbers while length
//! only doubles.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::magnus::{lcs_depth, DepthResult};
use crate::program::{NodeId, WordProgram};
use crate::report::Report;
use crate::word::{Letter, Word};

/// Default largest level accepted by [`build_pair`].
pub const DEFAULT_MAX_LEVEL: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Standard,
    Primed,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Standard => "standard",
            Variant::Primed => "primed",
        }
    }

    fn base(self) -> (Word, Word) {
        let a = Word::generator_a();
        let b = Word::generator_b();
        match self {
            Variant::Standard => (b.invert(), b.conjugate_by(&a)),
            Variant::Primed => (a, b),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Which {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("level {level} exceeds the maximum {max} (a_{level} would have {predicted_len} letters)")]
    TooLarge { level: usize, max: usize, predicted_len: u128 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionPair {
    pub level: usize,
    pub variant: Variant,
    pub a: Word,
    pub b: Word,
    pub predicted_len_a: u128,
    pub predicted_len_b: u128,
    pub depth_bound: u128,
}

/// `f_0 = 0`, `f_1 = 1`, `f_{m+2} = f_{m+1} + f_m`. Exact for `m ≤ 186`.
pub fn fibonacci(m: usize) -> u128 {
    assert!(m <= 186, "fibonacci({m}) overflows u128");
    let (mut x, mut y) = (0u128, 1u128);
    for _ in 1..m {
        let z = x + y;
        x = y;
        y = z;
    }
    if m == 0 { x } else { y }
}

/// Closed-form length of `a_n` / `b_n`.
pub fn predicted_length(n: usize, which: Which, variant: Variant) -> u128 {
    match variant {
        Variant::Primed => 1u128 << n,
        Variant::Standard => {
            let base = 13 * (1u128 << n);
            let num = match (which, n % 3) {
                (Which::A, 0) => base - 6,
                (Which::B, 0) => base + 8,
                (_, 1) => base + 2,
                (_, _) => base + 4,
            };
            debug_assert_eq!(num % 7, 0);
            num / 7
        }
    }
}

/// Guaranteed depth of the level-`n` words: `γ(a_n) = γ(b_n) ≥ f_{n+2}` for
/// the standard variant. The primed base pair `a, ab` sits at depth 1 in
/// levels 0 and 1, giving `f_{n+1}`.
pub fn depth_lower_bound(n: usize, variant: Variant) -> u128 {
    match variant {
        Variant::Standard => fibonacci(n + 2),
        Variant::Primed => fibonacci(n + 1),
    }
}

/// All levels `0..=n` in order.
pub fn build_levels(n: usize, variant: Variant, max_level: usize) -> Result<Vec<(Word, Word)>, BuildError> {
    if n > max_level {
        return Err(BuildError::TooLarge {
            level: n,
            max: max_level,
            predicted_len: predicted_length(n.min(120), Which::A, variant),
        });
    }
    let mut levels = Vec::with_capacity(n + 1);
    let (mut a, mut b) = variant.base();
    levels.push((a.clone(), b.clone()));
    for _ in 0..n {
        let next_a = a.concat(&b);
        let next_b = a.invert().concat(&b.invert());
        a = next_a;
        b = next_b;
        levels.push((a.clone(), b.clone()));
    }
    Ok(levels)
}

pub fn build_pair_with_max(n: usize, variant: Variant, max_level: usize) -> Result<ConstructionPair, BuildError> {
    let (a, b) = build_levels(n, variant, max_level)?.pop().expect("level n exists");
    Ok(ConstructionPair {
        level: n,
        variant,
        a,
        b,
        predicted_len_a: predicted_length(n, Which::A, variant),
        predicted_len_b: predicted_length(n, Which::B, variant),
        depth_bound: depth_lower_bound(n, variant),
    })
}

pub fn build_pair(n: usize, variant: Variant) -> Result<ConstructionPair, BuildError> {
    build_pair_with_max(n, variant, DEFAULT_MAX_LEVEL)
}

/// Appends the level-`0..=n_max` words of `variant`, evaluated at the pair
/// `(x, y)`, to `program`. From level 2 on, `a_n = [a_{n−1}, b_{n−2}]` and
/// `b_n = a_{n−1}⁻¹ a_n⁻¹ a_{n−1}`: the factors of each commutator are as
/// small as the result allows, which matters for evaluation near the
/// identity in floating point.
pub fn fibonacci_program(
    program: &mut WordProgram,
    x: NodeId,
    y: NodeId,
    n_max: usize,
    variant: Variant,
) -> Vec<(NodeId, NodeId)> {
    let mut levels: Vec<(NodeId, NodeId)> = Vec::with_capacity(n_max + 1);
    let (a0, b0) = match variant {
        Variant::Standard => (program.inv(y), program.conj(y, x)),
        Variant::Primed => (x, y),
    };
    levels.push((a0, b0));
    for n in 1..=n_max {
        let (pa, _) = levels[n - 1];
        let a = match (n, variant) {
            // b⁻¹ · a b a⁻¹ = [b⁻¹, a]
            (1, Variant::Standard) => program.comm(a0, x),
            (1, Variant::Primed) => program.mul(a0, b0),
            _ => program.comm(pa, levels[n - 2].1),
        };
        let ai = program.inv(a);
        let pai = program.inv(pa);
        let b = program.conj(ai, pai);
        levels.push((a, b));
    }
    levels
}

fn sigma(w: &Word) -> Word {
    w.apply_endomorphism(&Word::letter(Letter::AInv), &Word::letter(Letter::BInv))
}

fn tau(w: &Word) -> Word {
    w.apply_endomorphism(&Word::generator_a(), &Word::letter(Letter::BInv))
}

fn starts_with(w: &Word, s: &str) -> bool {
    let p: Vec<char> = s.chars().collect();
    w.len() >= p.len() && w.letters().iter().zip(&p).all(|(l, c)| l.to_char() == *c)
}

fn ends_with(w: &Word, s: &str) -> bool {
    let p: Vec<char> = s.chars().collect();
    w.len() >= p.len() && w.letters()[w.len() - p.len()..].iter().zip(&p).all(|(l, c)| l.to_char() == *c)
}

/// Head/tail spelling of the reduced standard words at level `n > 0`.
fn reduced_form_patterns(n: usize) -> [(&'static str, &'static str); 2] {
    match n % 3 {
        0 => [("B", "B"), ("ab", "bA")],
        1 => [("B", "bA"), ("b", "BA")],
        _ => [("B", "BA"), ("aB", "B")],
    }
}

/// Checks the structural identities of the standard construction at level `n`
/// (which uses levels up to `n + 3`).
pub fn verify_level(n: usize) -> Result<Report, BuildError> {
    let levels = build_levels(n + 3, Variant::Standard, DEFAULT_MAX_LEVEL)?;
    Ok(verify_level_with(&levels, n))
}

pub(crate) fn verify_level_with(levels: &[(Word, Word)], n: usize) -> Report {
    let mut report = Report::new(format!("level {n}"));
    let (a, b) = &levels[n];
    let a_gen = Word::generator_a();
    match n % 3 {
        0 => report.check_eq(format!("a·σ(a_{n})·a⁻¹ = b_{n}"), &sigma(a).conjugate_by(&a_gen), b),
        1 => report.check_eq(format!("τ(a_{n}) = b_{n}"), &tau(a), b),
        _ => report.check_eq(format!("τ(a_{n}) = b_{n}⁻¹"), &tau(a), &b.invert()),
    }
    if n > 0 {
        let [(ah, at), (bh, bt)] = reduced_form_patterns(n);
        report.check(
            format!("reduced form of a_{n} is {ah}⋯{at}"),
            starts_with(a, ah) && ends_with(a, at),
            a.to_string(),
        );
        report.check(
            format!("reduced form of b_{n} is {bh}⋯{bt}"),
            starts_with(b, bh) && ends_with(b, bt),
            b.to_string(),
        );
    }
    report.check(
        format!("ℓ(a_{n}) = closed form"),
        a.len() as u128 == predicted_length(n, Which::A, Variant::Standard),
        format!("{} vs {}", a.len(), predicted_length(n, Which::A, Variant::Standard)),
    );
    report.check(
        format!("ℓ(b_{n}) = closed form"),
        b.len() as u128 == predicted_length(n, Which::B, Variant::Standard),
        format!("{} vs {}", b.len(), predicted_length(n, Which::B, Variant::Standard)),
    );
    let cancel = a.junction_cancellation(b);
    let expected_cancel = if n % 3 == 2 { 1 } else { 0 };
    report.check(
        format!("a_{n}·b_{n} cancels {} letter pair(s)", expected_cancel),
        cancel == expected_cancel,
        format!("cancelled {cancel}"),
    );
    report.check(
        format!("a_{n}⁻¹·b_{n}⁻¹ has no cancellation"),
        a.invert().junction_cancellation(&b.invert()) == 0,
        String::new(),
    );
    if let Some((a3, b3)) = levels.get(n + 3) {
        let ab = a.concat(b);
        let ab_inv = a.invert().concat(&b.invert());
        report.check_eq(format!("a_{} = [a_{n}b_{n}, a_{n}⁻¹b_{n}⁻¹]", n + 3), &ab.commutator(&ab_inv), a3);
        let ba = b.concat(a);
        let ba_inv = b.invert().concat(&a.invert());
        report.check_eq(format!("b_{} = [b_{n}a_{n}, b_{n}⁻¹a_{n}⁻¹]", n + 3), &ba.commutator(&ba_inv), b3);
    }
    if let (Some((a1, _)), Some((a2, _))) = (levels.get(n + 1), levels.get(n + 2)) {
        report.check_eq(format!("a_{} = [a_{n}, b_{n}]", n + 2), &a.commutator(b), a2);
        report.check_eq(format!("a_{} = [a_{}, b_{n}]", n + 2, n + 1), &a1.commutator(b), a2);
        report.check_eq(
            format!("a_{} = [a_{n}b_{n}, b_{n}]", n + 2),
            &a.concat(b).commutator(b),
            a2,
        );
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DepthMode {
    Bound,
    Magnus,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentRow {
    pub n: usize,
    pub variant: Variant,
    pub len_a: usize,
    pub len_b: usize,
    pub depth_bound: u128,
    /// Measured depth when the Magnus expansion was run and decided it.
    pub depth_exact: Option<usize>,
    /// Set when the cap ran out; the row then uses `depth_bound`.
    pub cap_exhausted: bool,
    /// `ln γ̂ / ln ℓ(a_n)`, absent for `ℓ < 2`.
    pub estimate: Option<f64>,
}

impl ExponentRow {
    pub fn depth_used(&self) -> u128 {
        self.depth_exact.map_or(self.depth_bound, |d| d as u128)
    }
}

/// `ln(depth) / ln(length)`.
pub fn exponent_estimate(depth: u128, length: usize) -> Option<f64> {
    (length >= 2 && depth >= 1).then(|| (depth as f64).ln() / (length as f64).ln())
}

/// Rows for levels `0..=n_max`. In Magnus mode the exact depth is measured
/// with the given cap; rows whose depth exceeds the cap fall back to the
/// Fibonacci bound and are flagged.
pub fn exponent_table(
    n_max: usize,
    variant: Variant,
    depth_mode: DepthMode,
    cap: usize,
) -> Result<Vec<ExponentRow>, BuildError> {
    let levels = build_levels(n_max, variant, DEFAULT_MAX_LEVEL)?;
    let rows = levels
        .iter()
        .enumerate()
        .map(|(n, (a, b))| {
            let depth_bound = depth_lower_bound(n, variant);
            let (depth_exact, cap_exhausted) = match depth_mode {
                DepthMode::Bound => (None, false),
                DepthMode::Magnus => match lcs_depth(a, cap) {
                    DepthResult::Exact(d) => (Some(d), false),
                    _ => (None, true),
                },
            };
            let depth = depth_exact.map_or(depth_bound, |d| d as u128);
            ExponentRow {
                n,
                variant,
                len_a: a.len(),
                len_b: b.len(),
                depth_bound,
                depth_exact,
                cap_exhausted,
                estimate: exponent_estimate(depth, a.len()),
            }
        })
        .collect();
    Ok(rows)
}
