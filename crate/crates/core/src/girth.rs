//! Girth of `F₂/γ_n`: the length `α(n)` of the shortest nontrivial word in
//! `γ_n`, found by exhaustive enumeration.
//!
//! Membership in `γ_n` is invariant under conjugation, inversion and every
//! automorphism of `F₂`, so only one cyclically reduced word per orbit of
//! rotations, inversion and the eight signed generator permutations is
//! tested. The representative of an orbit is its lexicographically least
//! member, with letters ordered `a < A < b < B`.

use std::cmp::Ordering;
use std::time::Instant;

use rayon::prelude::*;
use serde::ser::{Serialize, SerializeMap, Serializer};
use thiserror::Error;

use crate::construction::{build_pair, depth_lower_bound, exponent_estimate, Variant};
use crate::magnus::{lcs_depth, lcs_member, DepthResult};
use crate::report::Report;
use crate::word::{Letter, Word};

/// Largest series index accepted by [`alpha`] (the dense Magnus tracker
/// holds `2^n` coefficients per letter).
pub const MAX_ALPHA_N: usize = 16;
/// Lengths explored before the search forks into parallel subtrees.
const PARTITION_DEPTH: usize = 5;
/// Radius limit of the unpruned reference enumerator.
pub const NAIVE_MAX_RADIUS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GirthError {
    #[error("series index must be in 1..={MAX_ALPHA_N}, got {0}")]
    BadIndex(usize),
    #[error("radius {radius} is too large for {what}")]
    RadiusTooLarge { radius: usize, what: &'static str },
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

/// Symmetries a membership predicate is known to respect.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Symmetries {
    /// Invariance under conjugation; only cyclically reduced words are
    /// enumerated and rotations are identified.
    pub conjugation: bool,
    pub inversion: bool,
    /// Invariance under `a ↦ a^{±1}`, `b ↦ b^{±1}` and `a ↔ b`.
    pub letter_maps: bool,
}

impl Symmetries {
    pub const ALL: Symmetries = Symmetries { conjugation: true, inversion: true, letter_maps: true };
    pub const NONE: Symmetries = Symmetries { conjugation: false, inversion: false, letter_maps: false };
}

/// The eight signed permutations of the generators, as tables on letter codes.
fn letter_maps() -> Vec<[u8; 4]> {
    let mut maps = Vec::with_capacity(8);
    for swap in 0..2u8 {
        for flip_a in 0..2u8 {
            for flip_b in 0..2u8 {
                let mut t = [0u8; 4];
                for code in 0..4u8 {
                    let generator = code >> 1;
                    let flip = if generator == 0 { flip_a } else { flip_b };
                    t[code as usize] = ((generator ^ swap) << 1) | ((code & 1) ^ flip);
                }
                maps.push(t);
            }
        }
    }
    maps
}

fn cmp_seq(lhs: impl Iterator<Item = u8>, rhs: impl Iterator<Item = u8>) -> Ordering {
    lhs.cmp(rhs)
}

#[derive(Clone, Debug)]
struct Canon {
    sym: Symmetries,
    maps: Vec<[u8; 4]>,
}

impl Canon {
    fn new(sym: Symmetries) -> Self {
        let maps = if sym.letter_maps { letter_maps() } else { vec![[0, 1, 2, 3]] };
        Canon { sym, maps }
    }

    /// False when some image of every extension of `p` is already known to be
    /// smaller than the extension itself. Backward readings starting before
    /// the last letter were checked when `p` was shorter.
    fn prefix_survives(&self, p: &[u8]) -> bool {
        let i = p.len();
        let starts = if self.sym.conjugation { i } else { 1 };
        for t in &self.maps {
            for j in 0..starts {
                let image = p[j..].iter().map(|&c| t[c as usize]);
                if cmp_seq(image, p[..i - j].iter().copied()) == Ordering::Less {
                    return false;
                }
            }
            if self.sym.conjugation && self.sym.inversion {
                let image = p.iter().rev().map(|&c| t[(c ^ 1) as usize]);
                if cmp_seq(image, p.iter().copied()) == Ordering::Less {
                    return false;
                }
            }
        }
        true
    }

    fn is_canonical(&self, w: &[u8]) -> bool {
        let l = w.len();
        let starts = if self.sym.conjugation { l } else { 1 };
        for t in &self.maps {
            for j in 0..starts {
                let image = (0..l).map(|k| t[w[(j + k) % l] as usize]);
                if cmp_seq(image, w.iter().copied()) == Ordering::Less {
                    return false;
                }
                if self.sym.inversion {
                    let s = if self.sym.conjugation { j } else { l - 1 };
                    let image = (0..l).map(|k| t[(w[(s + l - k) % l] ^ 1) as usize]);
                    if cmp_seq(image, w.iter().copied()) == Ordering::Less {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Incremental state carried along the enumeration path.
pub trait Tracker: Clone + Send {
    fn push(&mut self, l: Letter);
    fn pop(&mut self);
    /// Decides membership of the current (nonempty, reduced) path.
    fn accepts(&mut self, path: &[Letter]) -> bool;
}

#[derive(Clone, Copy, Debug, Default)]
struct NoTracker;

impl Tracker for NoTracker {
    fn push(&mut self, _: Letter) {}
    fn pop(&mut self) {}
    fn accepts(&mut self, _: &[Letter]) -> bool {
        true
    }
}

struct PredicateTracker<'a, F>(&'a F);

impl<F> Clone for PredicateTracker<'_, F> {
    fn clone(&self) -> Self {
        PredicateTracker(self.0)
    }
}

impl<F: Fn(&Word) -> bool + Sync> Tracker for PredicateTracker<'_, F> {
    fn push(&mut self, _: Letter) {}
    fn pop(&mut self) {}
    fn accepts(&mut self, path: &[Letter]) -> bool {
        (self.0)(&Word::from_reduced_unchecked(path.to_vec()))
    }
}

/// Magnus expansion truncated at degree `cap` with `i64` coefficients, one
/// dense layer per path position. Monomial `x_1⋯x_d` (bits, `X = 0`,
/// `Y = 1`) sits at index `2^d + bits`, so appending `x` maps index `i` to
/// `2i + x`.
#[derive(Clone, Debug)]
pub struct MagnusTracker {
    size: usize,
    depth: usize,
    layers: Vec<i64>,
}

impl MagnusTracker {
    /// Tracker deciding `γ_{cap+1}` membership for words up to `max_len`
    /// letters. `None` if coefficients could overflow `i64`.
    pub fn new(cap: usize, max_len: usize) -> Option<Self> {
        // a coefficient of degree d after L letters is bounded by C(L+d, d)
        if cap > MAX_ALPHA_N {
            return None;
        }
        let mut bound: u128 = 1;
        for i in 1..=cap as u128 {
            bound = bound.checked_mul(max_len as u128 + i)? / i;
        }
        if bound >= i64::MAX as u128 / 2 {
            return None;
        }
        let size = 1usize << (cap + 1);
        let mut layers = vec![0i64; size * (max_len + 1)];
        layers[1] = 1;
        Some(MagnusTracker { size, depth: 0, layers })
    }
}

impl Tracker for MagnusTracker {
    fn push(&mut self, l: Letter) {
        let (size, d) = (self.size, self.depth);
        let (lower, upper) = self.layers.split_at_mut((d + 1) * size);
        let s = &mut upper[..size];
        s.copy_from_slice(&lower[d * size..]);
        let half = size / 2;
        let x = (l.code() >> 1) as usize;
        if l.sign() > 0 {
            for idx in (1..half).rev() {
                s[2 * idx + x] += s[idx];
            }
        } else {
            for idx in 1..half {
                s[2 * idx + x] -= s[idx];
            }
        }
        self.depth += 1;
    }

    fn pop(&mut self) {
        self.depth -= 1;
    }

    fn accepts(&mut self, path: &[Letter]) -> bool {
        let s = &self.layers[self.depth * self.size..(self.depth + 1) * self.size];
        !path.is_empty() && s[2..].iter().all(|&c| c == 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    /// Stop at partial prefixes; no cyclic closure or leaf canonicity.
    Prefix,
    Leaf,
}

struct Walker<'c, T> {
    canon: &'c Canon,
    len: usize,
    floor: usize,
    mode: Mode,
    path: Vec<Letter>,
    codes: Vec<u8>,
    cursor: Vec<u8>,
    tracker: T,
}

impl<'c, T: Tracker> Walker<'c, T> {
    fn new(canon: &'c Canon, len: usize, prefix: &[Letter], mode: Mode, mut tracker: T) -> Self {
        assert!(prefix.len() < len);
        for &l in prefix {
            tracker.push(l);
        }
        Walker {
            canon,
            len,
            floor: prefix.len(),
            mode,
            path: prefix.to_vec(),
            codes: prefix.iter().map(|l| l.code()).collect(),
            cursor: vec![0; len + 1],
            tracker,
        }
    }

    fn retreat(&mut self) {
        self.path.pop();
        self.codes.pop();
        self.tracker.pop();
    }

    /// Advances to the next surviving word of full length.
    fn advance(&mut self) -> bool {
        loop {
            let d = self.path.len();
            if d == self.len {
                self.retreat();
                continue;
            }
            if self.cursor[d] == 4 {
                if d == self.floor {
                    return false;
                }
                self.retreat();
                continue;
            }
            let l = Letter::from_code(self.cursor[d]);
            self.cursor[d] += 1;
            if d > 0 && l.is_inverse_of(self.path[d - 1]) {
                continue;
            }
            let closing = self.mode == Mode::Leaf && self.canon.sym.conjugation && d + 1 == self.len && d > 0;
            if closing && l.is_inverse_of(self.path[0]) {
                continue;
            }
            self.codes.push(l.code());
            if !self.canon.prefix_survives(&self.codes) {
                self.codes.pop();
                continue;
            }
            self.path.push(l);
            self.tracker.push(l);
            if d + 1 == self.len {
                if self.mode == Mode::Prefix || self.canon.is_canonical(&self.codes) {
                    return true;
                }
                self.retreat();
                continue;
            }
            self.cursor[d + 1] = 0;
        }
    }
}

/// Iterator over orbit representatives of one length.
pub struct CanonicalWords {
    canon: Box<Canon>,
    len: usize,
    state: Option<(Vec<Letter>, Vec<u8>, Vec<u8>)>,
    done: bool,
}

impl Iterator for CanonicalWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        let mut walker = Walker::new(&self.canon, self.len, &[], Mode::Leaf, NoTracker);
        if let Some((path, codes, cursor)) = self.state.take() {
            walker.path = path;
            walker.codes = codes;
            walker.cursor = cursor;
        }
        if walker.advance() {
            let word = Word::from_reduced_unchecked(walker.path.clone());
            self.state = Some((walker.path, walker.codes, walker.cursor));
            Some(word)
        } else {
            self.done = true;
            None
        }
    }
}

/// One representative per orbit of cyclically reduced words of length `len`
/// under rotation, inversion and letter maps, in increasing order.
pub fn enumerate_canonical(len: usize) -> CanonicalWords {
    enumerate_canonical_with(len, Symmetries::ALL)
}

/// As [`enumerate_canonical`] for a subset of the symmetries. Without
/// conjugation every reduced word of length `len` is a candidate.
pub fn enumerate_canonical_with(len: usize, sym: Symmetries) -> CanonicalWords {
    CanonicalWords { canon: Box::new(Canon::new(sym)), len, state: None, done: len == 0 }
}

/// Outcome of a girth search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GirthValue {
    Found(usize),
    /// No member up to this length.
    UnknownAbove(usize),
}

impl GirthValue {
    pub fn found(self) -> Option<usize> {
        match self {
            GirthValue::Found(v) => Some(v),
            GirthValue::UnknownAbove(_) => None,
        }
    }
}

impl Serialize for GirthValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            GirthValue::Found(v) => s.serialize_u64(*v as u64),
            GirthValue::UnknownAbove(r) => s.serialize_str(&format!("unknown above {r}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GirthRecord {
    /// Series index for `α(n)` searches; `None` for a generic predicate.
    pub n: Option<usize>,
    pub value: GirthValue,
    /// Lexicographically least representative of minimal length.
    pub witness: Option<Word>,
    /// Largest length enumerated.
    pub radius: usize,
    /// Canonical words tested, over every enumerated length.
    pub candidates: u64,
    pub seconds: f64,
}

impl GirthRecord {
    /// The record without its wall time: identical across runs and thread
    /// counts.
    pub fn deterministic(&self) -> TimelessRecord<'_> {
        TimelessRecord(self)
    }
}

fn serialize_record<S: Serializer>(r: &GirthRecord, s: S, with_time: bool) -> Result<S::Ok, S::Error> {
    let mut m = s.serialize_map(None)?;
    match r.n {
        Some(n) => {
            m.serialize_entry("kind", "alpha")?;
            m.serialize_entry("n", &n)?;
        }
        None => m.serialize_entry("kind", "girth")?,
    }
    m.serialize_entry("value", &r.value)?;
    m.serialize_entry("witness", &r.witness)?;
    m.serialize_entry("radius", &r.radius)?;
    m.serialize_entry("candidates", &r.candidates)?;
    if with_time {
        m.serialize_entry("seconds", &r.seconds)?;
    }
    m.end()
}

impl Serialize for GirthRecord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_record(self, s, true)
    }
}

pub struct TimelessRecord<'a>(&'a GirthRecord);

impl Serialize for TimelessRecord<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_record(self.0, s, false)
    }
}

/// Tests every representative of length `len`; returns the count and the
/// least accepted one.
fn search_length<T: Tracker + Sync>(canon: &Canon, len: usize, tracker: &T) -> (u64, Option<Vec<Letter>>) {
    let run = |prefix: &[Letter]| {
        let mut walker = Walker::new(canon, len, prefix, Mode::Leaf, tracker.clone());
        let mut count = 0u64;
        let mut best = None;
        while walker.advance() {
            count += 1;
            if best.is_none() {
                let path = walker.path.clone();
                if walker.tracker.accepts(&path) {
                    best = Some(path);
                }
            }
        }
        (count, best)
    };
    if len <= PARTITION_DEPTH + 1 {
        return run(&[]);
    }
    let mut prefixes = Vec::new();
    let mut walker = Walker::new(canon, PARTITION_DEPTH, &[], Mode::Prefix, NoTracker);
    while walker.advance() {
        prefixes.push(walker.path.clone());
    }
    let parts: Vec<(u64, Option<Vec<Letter>>)> = prefixes.par_iter().map(|p| run(p)).collect();
    let count = parts.iter().map(|p| p.0).sum();
    let best = parts.into_iter().find_map(|p| p.1);
    (count, best)
}

fn with_pool<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> Result<R, GirthError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| GirthError::Pool(e.to_string()))?;
    Ok(pool.install(f))
}

fn run_search<T: Tracker + Sync>(
    n: Option<usize>,
    sym: Symmetries,
    radius: usize,
    tracker: T,
    threads: usize,
) -> Result<GirthRecord, GirthError> {
    let start = Instant::now();
    let canon = Canon::new(sym);
    let (value, witness, searched, candidates) = with_pool(threads, || {
        let mut candidates = 0u64;
        for len in 1..=radius {
            let (count, best) = search_length(&canon, len, &tracker);
            candidates += count;
            if let Some(path) = best {
                return (GirthValue::Found(len), Some(Word::from_reduced_unchecked(path)), len, candidates);
            }
        }
        (GirthValue::UnknownAbove(radius), None, radius, candidates)
    })?;
    Ok(GirthRecord { n, value, witness, radius: searched, candidates, seconds: start.elapsed().as_secs_f64() })
}

/// Girth of `{w : membership(w)}` over lengths `1..=max_radius`. Only the
/// declared symmetries are used for pruning. `threads = 0` uses the rayon
/// default.
pub fn girth_of<F>(membership: F, max_radius: usize, sym: Symmetries, threads: usize) -> Result<GirthRecord, GirthError>
where
    F: Fn(&Word) -> bool + Sync,
{
    run_search(None, sym, max_radius, PredicateTracker(&membership), threads)
}

/// `ℓ(a_m)` for the least `m` with `f_{m+2} ≥ n`. Since `a_m ∈ γ_n`, no
/// longer word needs to be enumerated.
pub fn alpha_upper_bound(n: usize) -> usize {
    let m = (0..).find(|&m| depth_lower_bound(m, Variant::Standard) >= n as u128).expect("fibonacci grows");
    build_pair(m, Variant::Standard).expect("small level").a.len()
}

/// `α(n)` searched up to `min(radius, alpha_upper_bound(n))`.
pub fn alpha(n: usize, radius: usize, threads: usize) -> Result<GirthRecord, GirthError> {
    if n == 0 || n > MAX_ALPHA_N {
        return Err(GirthError::BadIndex(n));
    }
    let limit = radius.min(alpha_upper_bound(n));
    let tracker =
        MagnusTracker::new(n - 1, limit).ok_or(GirthError::RadiusTooLarge { radius, what: "i64 Magnus coefficients" })?;
    run_search(Some(n), Symmetries::ALL, limit, tracker, threads)
}

/// Every reduced word of length `len`, in increasing order.
pub fn all_reduced_words(len: usize) -> Vec<Word> {
    let mut words: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..len {
        words = words
            .into_iter()
            .flat_map(|w| {
                Letter::ALL.into_iter().filter_map(move |l| {
                    if w.last().is_some_and(|&p| p.is_inverse_of(l)) {
                        return None;
                    }
                    let mut v = w.clone();
                    v.push(l);
                    Some(v)
                })
            })
            .collect();
    }
    words.into_iter().map(Word::from_reduced_unchecked).collect()
}

/// Reference search: every reduced word, arbitrary-precision membership.
pub fn alpha_naive(n: usize, radius: usize) -> Result<GirthRecord, GirthError> {
    if n == 0 {
        return Err(GirthError::BadIndex(n));
    }
    if radius > NAIVE_MAX_RADIUS {
        return Err(GirthError::RadiusTooLarge { radius, what: "the naive enumerator" });
    }
    let start = Instant::now();
    let mut candidates = 0u64;
    for len in 1..=radius {
        let words = all_reduced_words(len);
        candidates += words.len() as u64;
        if let Some(w) = words.into_iter().find(|w| lcs_member(w, n)) {
            let seconds = start.elapsed().as_secs_f64();
            return Ok(GirthRecord {
                n: Some(n),
                value: GirthValue::Found(len),
                witness: Some(w),
                radius: len,
                candidates,
                seconds,
            });
        }
    }
    let seconds = start.elapsed().as_secs_f64();
    Ok(GirthRecord { n: Some(n), value: GirthValue::UnknownAbove(radius), witness: None, radius, candidates, seconds })
}

/// `[[b⁻¹, a][a, b], [a, b⁻¹][b, a]]`, a word of length 28 in `γ_7`.
pub fn w28() -> Word {
    let a = Word::generator_a();
    let b = Word::generator_b();
    let bi = b.invert();
    let u = bi.commutator(&a).concat(&a.commutator(&b));
    let v = a.commutator(&bi).concat(&b.commutator(&a));
    u.commutator(&v)
}

/// `⌊x · 10^digits⌋`, to compare against figures quoted to a fixed number
/// of decimals.
fn truncate(x: f64, digits: i32) -> i64 {
    (x * 10f64.powi(digits) + 1e-9).floor() as i64
}

/// Checks the girth facts about `w₂₈`, `a₄` and `[γ₃, γ₂]`.
pub fn verify_girth_facts() -> Report {
    let mut r = Report::new("girth facts");
    let w = w28();
    let pairs: Vec<_> = (0..=4).map(|n| build_pair(n, Variant::Standard).expect("small level")).collect();
    let (a2, a3, a4) = (&pairs[2].a, &pairs[3].a, &pairs[4].a);
    let b1 = &pairs[1].b;

    r.check_eq("ℓ(w₂₈) = 28", &w.len(), &28);
    r.check("w₂₈ ∈ γ₇", lcs_member(&w, 7), w.to_string());
    let depth = lcs_depth(&w, 10);
    r.check("γ(w₂₈) measured", depth.exact().is_some(), format!("{depth:?}"));
    r.check_eq("ℓ(a₄) = 30", &a4.len(), &30);
    r.check("a₄ ∈ γ₈", lcs_member(a4, 8), a4.to_string());
    r.check("ℓ(w₂₈) < ℓ(a₄)", w.len() < a4.len(), String::new());

    let est_a4 = exponent_estimate(8, a4.len()).expect("long word");
    let est_w = exponent_estimate(7, w.len()).expect("long word");
    r.check(
        "ln 8 / ln 30 = 0.6113…",
        truncate(est_a4, 4) == 6113 || (est_a4 - 0.6113).abs() < 1e-3,
        format!("{est_a4:.6}"),
    );
    r.check("ln 7 / ln 28 = 0.583…", truncate(est_w, 3) == 583, format!("{est_w:.6}"));

    r.check_eq("a₃ = [a₂, b₁]", &a2.commutator(b1), a3);
    r.check("a₂ ∈ γ₃", lcs_member(a2, 3), a2.to_string());
    r.check("b₁ ∈ γ₂", lcs_member(b1, 2), b1.to_string());
    r.check_eq("girth([γ₃, γ₂]) ≤ ℓ(a₃) = 14", &a3.len(), &14);

    let girth = |n: usize| alpha(n, 8, 1).ok().and_then(|rec| rec.value.found());
    match (girth(2), girth(3)) {
        (Some(g2), Some(g3)) => {
            r.check_eq("α(2) = 4", &g2, &4);
            r.check_eq("α(3) = 8", &g3, &8);
            r.check("14 < 2·α(3)", a3.len() < 2 * g3, format!("2·α(3) = {}", 2 * g3));
            r.check("14 > 3·α(2)", a3.len() > 3 * g2, format!("3·α(2) = {}", 3 * g2));
        }
        other => r.check("α(2), α(3) found", false, format!("{other:?}")),
    }
    r
}

/// Exact depth of `w₂₈`, which is known to lie in `γ₇`.
pub fn w28_depth() -> DepthResult {
    lcs_depth(&w28(), 10)
}
