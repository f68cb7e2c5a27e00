//! Word maps on `SU(k)` and sampled estimates of
//! `L_k(w) = max_{u,v} ‖1 − w(u, v)‖`.
//!
//! Deep commutators evaluate to matrices within `10⁻³⁰` of the identity,
//! far below double precision around `1`. [`DeviationGroup`] therefore
//! stores `D = W − I` and never forms `W` explicitly:
//! `(I + D₁)(I + D₂) = I + D₁ + D₂ + D₁D₂`, `(I + D)⁻¹ = I + D*` and
//! `[I + D₁, I + D₂] = I + (D₁D₂ − D₂D₁)(I + D₁*)(I + D₂*)`, which keeps the
//! relative accuracy of tiny deviations. Conjugation `C(I + D)C⁻¹ = I + CDC*`
//! is exact in the same sense; products of two nearly inverse elements are
//! the one operation that still cancels.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::matrix::{dist_identity, random_su, Mat, UnitaryError, UnitaryMatrix, MAX_DIM};
use crate::construction::{fibonacci_program, Variant};
use crate::program::{GroupOps, NodeId, WordProgram};
use crate::word::{Letter, Word};

/// Multiplications after which [`word_map`] checks for drift.
const REORTHONORMALIZE_EVERY: usize = 1000;
const DRIFT_TOL: f64 = 1e-12;
/// Starting scale of the hill-climbing perturbation.
const INITIAL_STEP: f64 = 0.25;
/// Seed pairs must have sampled `L_k` at most this (below `1/3`).
pub const SEED_THRESHOLD: f64 = 0.30;
/// Default hill-climbing steps per sample.
pub const DEFAULT_REFINE: usize = 8;
/// Hill climbs per level in [`decay_report`].
pub const DECAY_CLIMBS: usize = 32;
/// First RNG stream used by climbs, above every sample index.
const CLIMB_STREAMS: u64 = 1 << 48;
/// Relations of at most this length are checked on seed pairs.
pub const RELATION_LENGTH: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlmostLawError {
    #[error(transparent)]
    Unitary(#[from] UnitaryError),
    #[error("SU(1) is trivial: every word is a law there")]
    TrivialGroup,
    #[error("budget must be at least 1")]
    EmptyBudget,
    #[error(
        "no seed pair with sampled L ≤ {SEED_THRESHOLD} up to length {length_cap} \
         (best was {best:.4} at length {best_len}); raise the length cap"
    )]
    SeedNotFound { length_cap: usize, best: f64, best_len: usize },
}

/// `w(u, v)`, multiplied left to right.
pub fn word_map(w: &Word, u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<UnitaryMatrix, UnitaryError> {
    if u.dim() != v.dim() {
        return Err(UnitaryError::DimensionMismatch(u.dim(), v.dim()));
    }
    let (ui, vi) = (u.inverse(), v.inverse());
    let mut acc = UnitaryMatrix::identity(u.dim());
    for (i, l) in w.letters().iter().enumerate() {
        let x = match l {
            Letter::A => u,
            Letter::AInv => &ui,
            Letter::B => v,
            Letter::BInv => &vi,
        };
        acc = acc.mul(x);
        if (i + 1) % REORTHONORMALIZE_EVERY == 0 && acc.drift() > DRIFT_TOL {
            acc = acc.reorthonormalize();
        }
    }
    UnitaryMatrix::new(acc.as_mat().clone())
}

/// `SU(k)` with elements stored as deviations from the identity.
#[derive(Clone, Copy, Debug)]
pub struct DeviationGroup {
    pub k: usize,
}

impl DeviationGroup {
    pub fn deviation(u: &UnitaryMatrix) -> Mat {
        u.as_mat().sub(&Mat::identity(u.dim()))
    }
}

impl GroupOps for DeviationGroup {
    type Elem = Mat;

    fn identity(&self) -> Mat {
        Mat::zeros(self.k)
    }

    fn mul(&self, x: &Mat, y: &Mat) -> Mat {
        x.add(y).add(&x.mul(y))
    }

    fn inv(&self, x: &Mat) -> Mat {
        x.adjoint()
    }

    fn comm(&self, x: &Mat, y: &Mat) -> Mat {
        let c = x.mul(y).sub(&y.mul(x));
        let id = Mat::identity(self.k);
        let tail = id.add(&x.adjoint()).mul(&id.add(&y.adjoint()));
        c.mul(&tail)
    }

    fn conj(&self, x: &Mat, c: &Mat) -> Mat {
        let id = Mat::identity(self.k);
        id.add(c).mul(x).mul(&id.add(&c.adjoint()))
    }
}

/// `‖D‖` for a deviation `D = W − I`.
pub fn deviation_norm(d: &Mat) -> f64 {
    d.op_norm()
}

fn check_budget(k: usize, budget: usize) -> Result<(), AlmostLawError> {
    if k == 0 || k > MAX_DIM {
        return Err(UnitaryError::UnsupportedDimension(k).into());
    }
    if budget == 0 {
        return Err(AlmostLawError::EmptyBudget);
    }
    Ok(())
}

/// RNG of sample `index` under `seed`; independent of scheduling.
fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Hill climbing from `(u, v)`: perturb, keep improvements, halve the scale
/// on failure. Returns the final point and value.
fn climb<F>(
    f: &F,
    mut u: UnitaryMatrix,
    mut v: UnitaryMatrix,
    steps: usize,
    rng: &mut ChaCha8Rng,
) -> (UnitaryMatrix, UnitaryMatrix, f64)
where
    F: Fn(&UnitaryMatrix, &UnitaryMatrix) -> f64,
{
    let mut best = f(&u, &v);
    let mut scale = INITIAL_STEP;
    for _ in 0..steps {
        let (u2, v2) = (u.perturb(scale, rng), v.perturb(scale, rng));
        let val = f(&u2, &v2);
        if val > best {
            best = val;
            u = u2;
            v = v2;
        } else {
            scale /= 2.0;
        }
    }
    (u, v, best)
}

/// Sampled lower bound on `max f` over `SU(k)²`: `budget` Haar pairs, each
/// refined by `refine` hill-climbing steps. Deterministic in `seed`.
pub fn estimate_max<F>(f: &F, k: usize, budget: usize, refine: usize, seed: u64) -> f64
where
    F: Fn(&UnitaryMatrix, &UnitaryMatrix) -> f64 + Sync,
{
    (0..budget as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i);
            let u = random_su(k, &mut rng);
            let v = random_su(k, &mut rng);
            climb(f, u, v, refine, &mut rng).2
        })
        .reduce(|| 0.0, f64::max)
}

/// Sampled lower bound on `L_k(w)`.
pub fn estimate_l(w: &Word, k: usize, budget: usize, refine: usize, seed: u64) -> Result<f64, AlmostLawError> {
    check_budget(k, budget)?;
    if w.is_identity() {
        return Ok(0.0);
    }
    let f = |u: &UnitaryMatrix, v: &UnitaryMatrix| dist_identity(&word_map(w, u, v).expect("same dimension"));
    Ok(estimate_max(&f, k, budget, refine, seed))
}

/// A word program evaluated in deviation form; `targets` are the nodes whose
/// distance to the identity is measured.
#[derive(Clone, Debug)]
pub struct ProgramProbe {
    pub program: WordProgram,
    pub targets: Vec<NodeId>,
}

impl ProgramProbe {
    /// `‖1 − t(u, v)‖` for every target.
    pub fn distances(&self, k: usize, u: &UnitaryMatrix, v: &UnitaryMatrix) -> Vec<f64> {
        let g = DeviationGroup { k };
        let values = self.program.evaluate(&g, DeviationGroup::deviation(u), DeviationGroup::deviation(v));
        self.targets.iter().map(|t| deviation_norm(&values[t.index()])).collect()
    }
}

/// `[a^j, b a^j b⁻¹]` for `j = 1..=leaves`, combined by a balanced
/// commutator tree (adjacent pairs, an odd last element carried up).
/// Each leaf is small when some power `u^j` is close to the identity, which
/// Dirichlet's theorem guarantees for some `j ≤ leaves` when `k = 2`.
pub fn seed_node(program: &mut WordProgram, x: NodeId, y: NodeId, leaves: usize) -> NodeId {
    assert!(leaves >= 1);
    let mut level: Vec<NodeId> = (1..=leaves as i64)
        .map(|j| {
            let xj = program.power(x, j);
            let conj = program.conj(xj, y);
            program.comm(xj, conj)
        })
        .collect();
    while level.len() > 1 {
        let mut next: Vec<NodeId> = level.chunks(2).filter(|c| c.len() == 2).map(|c| program.comm(c[0], c[1])).collect();
        if level.len() % 2 == 1 {
            next.push(*level.last().expect("nonempty"));
        }
        level = next;
    }
    level[0]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FreenessCertificate {
    /// `ℓ([w, v])`; nonzero means `w` and `v` do not commute, so the
    /// subgroup they generate is free of rank two.
    pub commutator_length: usize,
    /// Nontrivial reduced relations `r(x, y)` with `r(w, v) ≠ e` checked.
    pub relations_checked: usize,
    pub max_relation_length: usize,
}

/// Exact freeness check: two elements of a free group generate a free
/// subgroup of rank two iff they do not commute. As a second check every
/// reduced relation of length `≤ max_len` is evaluated in `F₂`.
pub fn certify_free(w: &Word, v: &Word, max_len: usize) -> Option<FreenessCertificate> {
    let commutator_length = w.commutator(v).len();
    if commutator_length == 0 {
        return None;
    }
    let images = [w.clone(), w.invert(), v.clone(), v.invert()];
    let mut checked = 0usize;
    // depth-first over relation words, carrying the reduced image
    let mut stack: Vec<(Option<Letter>, usize, Word)> = vec![(None, 0, Word::identity())];
    while let Some((last, len, image)) = stack.pop() {
        if len == max_len {
            continue;
        }
        for l in Letter::ALL {
            if last.is_some_and(|p| p.is_inverse_of(l)) {
                continue;
            }
            let next = image.concat(&images[l.code() as usize]);
            if next.is_identity() {
                return None;
            }
            checked += 1;
            stack.push((Some(l), len + 1, next));
        }
    }
    Some(FreenessCertificate { commutator_length, relations_checked: checked, max_relation_length: max_len })
}

#[derive(Clone, Debug, Serialize)]
pub struct SeedPair {
    pub leaves: usize,
    pub w: Word,
    pub v: Word,
    pub estimate_w: f64,
    pub estimate_v: f64,
    pub budget: usize,
    pub refine: usize,
    pub seed: u64,
    /// Sampled lower estimates, not certified maxima.
    pub sampled: bool,
    pub freeness: FreenessCertificate,
}

impl SeedPair {
    pub fn estimate(&self) -> f64 {
        self.estimate_w.max(self.estimate_v)
    }

    /// Program computing `w` and `v` from the generators.
    pub fn program(&self) -> (WordProgram, NodeId, NodeId) {
        let mut p = WordProgram::new();
        let (a, b) = (p.a(), p.b());
        let w = seed_node(&mut p, a, b, self.leaves);
        let v = seed_node(&mut p, b, a, self.leaves);
        (p, w, v)
    }
}

/// Searches the seed family by increasing number of leaves for a pair whose
/// sampled `L_k` values are both at most [`SEED_THRESHOLD`].
pub fn find_seed_pair(
    k: usize,
    length_cap: usize,
    budget: usize,
    refine: usize,
    seed: u64,
) -> Result<SeedPair, AlmostLawError> {
    if k == 1 {
        return Err(AlmostLawError::TrivialGroup);
    }
    check_budget(k, budget)?;
    let mut best = (f64::INFINITY, 0usize);
    for leaves in 2.. {
        let mut p = WordProgram::new();
        let (a, b) = (p.a(), p.b());
        let wn = seed_node(&mut p, a, b, leaves);
        let vn = seed_node(&mut p, b, a, leaves);
        let words = p.expand_many(&[wn, vn]);
        let len = words[0].len().max(words[1].len());
        if len > length_cap {
            break;
        }
        let probe = ProgramProbe { program: p, targets: vec![wn, vn] };
        let fw = |u: &UnitaryMatrix, v: &UnitaryMatrix| probe.distances(k, u, v)[0];
        let fv = |u: &UnitaryMatrix, v: &UnitaryMatrix| probe.distances(k, u, v)[1];
        let estimate_w = estimate_max(&fw, k, budget, refine, seed);
        if estimate_w > SEED_THRESHOLD {
            if estimate_w < best.0 {
                best = (estimate_w, len);
            }
            continue;
        }
        let estimate_v = estimate_max(&fv, k, budget, refine, seed);
        let worst = estimate_w.max(estimate_v);
        if worst < best.0 {
            best = (worst, len);
        }
        if worst > SEED_THRESHOLD {
            continue;
        }
        let [w, v]: [Word; 2] = words.try_into().expect("two words");
        let Some(freeness) = certify_free(&w, &v, RELATION_LENGTH) else {
            continue;
        };
        return Ok(SeedPair { leaves, w, v, estimate_w, estimate_v, budget, refine, seed, sampled: true, freeness });
    }
    Err(AlmostLawError::SeedNotFound { length_cap, best: best.0, best_len: best.1 })
}

/// Program for `a_n(w, v)` and `b_n(w, v)`, `n = 0..=n_max`.
pub fn decay_program(pair: &SeedPair, n_max: usize) -> (WordProgram, Vec<(NodeId, NodeId)>) {
    let (mut p, w, v) = pair.program();
    let levels = fibonacci_program(&mut p, w, v, n_max, Variant::Standard);
    (p, levels)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayRow {
    pub n: usize,
    /// `ℓ(a_n(w, v))` as a reduced word.
    pub len: usize,
    #[serde(rename = "L_hat")]
    pub l_hat: f64,
    /// `−ln(2 L̂)`; absent below the float floor.
    pub neg_log: Option<f64>,
    pub samples: usize,
    pub seed: u64,
    pub below_float_floor: bool,
}

/// Sampled decay of `w_n = a_n(w, v)`. The point set is the `budget` Haar
/// samples plus, for every level, hill climbs of `refine` steps from the
/// [`DECAY_CLIMBS`] best samples of that level. Every level is evaluated on
/// every point, so `L̂_{n+2} ≤ 2 L̂_{n+1} L̂_n` holds exactly as it does
/// pointwise.
pub fn decay_report(
    pair: &SeedPair,
    k: usize,
    n_max: usize,
    budget: usize,
    refine: usize,
    seed: u64,
) -> Result<Vec<DecayRow>, AlmostLawError> {
    if k == 1 {
        return Err(AlmostLawError::TrivialGroup);
    }
    check_budget(k, budget)?;
    let (program, levels) = decay_program(pair, n_max);
    let targets: Vec<NodeId> = levels.iter().map(|&(a, _)| a).collect();
    let lens: Vec<usize> = program.expand_many(&targets).iter().map(Word::len).collect();
    let probe = ProgramProbe { program, targets };

    let haar_point = |i: u64| {
        let mut rng = sample_rng(seed, i);
        let u = random_su(k, &mut rng);
        let v = random_su(k, &mut rng);
        (u, v)
    };
    let haar: Vec<Vec<f64>> = (0..budget as u64)
        .into_par_iter()
        .map(|i| {
            let (u, v) = haar_point(i);
            probe.distances(k, &u, &v)
        })
        .collect();
    let mut starts: Vec<(usize, usize, u64)> = Vec::new();
    for level in 0..=n_max {
        let mut order: Vec<usize> = (0..budget).collect();
        order.sort_by(|&x, &y| haar[y][level].total_cmp(&haar[x][level]).then(x.cmp(&y)));
        for (rank, &i) in order.iter().take(DECAY_CLIMBS).enumerate() {
            starts.push((level, i, CLIMB_STREAMS + (level * DECAY_CLIMBS + rank) as u64));
        }
    }
    let climbed: Vec<Vec<f64>> = starts
        .par_iter()
        .map(|&(level, i, stream)| {
            let (u, v) = haar_point(i as u64);
            let mut rng = sample_rng(seed, stream);
            let f = |x: &UnitaryMatrix, y: &UnitaryMatrix| probe.distances(k, x, y)[level];
            let (u2, v2, _) = climb(&f, u, v, refine, &mut rng);
            probe.distances(k, &u2, &v2)
        })
        .collect();
    let samples = budget + climbed.len();
    let rows = (0..=n_max)
        .map(|n| {
            let l_hat = haar.iter().chain(&climbed).map(|s| s[n]).fold(0.0, f64::max);
            let below = l_hat < f64::MIN_POSITIVE;
            DecayRow {
                n,
                len: lens[n],
                l_hat,
                neg_log: (!below).then(|| -(2.0 * l_hat).ln()),
                samples,
                seed,
                below_float_floor: below,
            }
        })
        .collect();
    Ok(rows)
}

/// Largest `C` and `D` consistent with every row:
/// `L̂ ≤ exp(−C ℓ^{log₂ φ})` and `−ln(2L̂) ≥ D φ^n`. Rows at or below the
/// float floor, and rows with `2L̂ ≥ 1`, are skipped.
pub fn empirical_constants(rows: &[DecayRow]) -> (Option<f64>, Option<f64>) {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let exponent = phi.log2();
    let usable: Vec<&DecayRow> = rows.iter().filter(|r| r.neg_log.is_some_and(|x| x > 0.0)).collect();
    let c = usable.iter().map(|r| -r.l_hat.ln() / (r.len as f64).powf(exponent)).reduce(f64::min);
    let d = usable.iter().map(|r| r.neg_log.expect("usable") / phi.powi(r.n as i32)).reduce(f64::min);
    (c, d)
}

/// Rows violating `−ln(2L̂_n) ≥ −ln(2L̂_{n−1}) − ln(2L̂_{n−2})`, among rows
/// where all three values are above the float floor.
pub fn recursion_violations(rows: &[DecayRow]) -> Vec<usize> {
    rows.windows(3)
        .filter_map(|w| match (w[0].neg_log, w[1].neg_log, w[2].neg_log) {
            (Some(x), Some(y), Some(z)) if z < x + y - 1e-9 * (x + y).abs().max(1.0) => Some(w[2].n),
            _ => None,
        })
        .collect()
}

/// Rows `n ≥ 2` with `L̂_n ≥ L̂_{n−1}`.
pub fn monotonicity_violations(rows: &[DecayRow]) -> Vec<usize> {
    rows.windows(2).filter(|w| w[1].n >= 2 && w[1].l_hat >= w[0].l_hat).map(|w| w[1].n).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContractionStats {
    pub samples: usize,
    pub violations: usize,
    /// Largest `‖1 − [u, v]‖ / min(2, 2‖1 − u‖‖1 − v‖)`.
    pub max_ratio: f64,
}

/// Samples `‖1 − [u, v]‖ ≤ min(2, 2‖1 − u‖‖1 − v‖)` with `10⁻⁹` slack.
/// Half the pairs are Haar, half are pulled towards the identity so that
/// the product bound is the binding one.
pub fn commutator_contraction(k: usize, samples: usize, seed: u64) -> ContractionStats {
    let results: Vec<(bool, f64)> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i);
            let (u, v) = if i % 2 == 0 {
                (random_su(k, &mut rng), random_su(k, &mut rng))
            } else {
                let scale = 10f64.powi(-(((i / 2) % 6) as i32));
                let id = UnitaryMatrix::identity(k);
                (id.perturb(scale, &mut rng), id.perturb(scale, &mut rng))
            };
            let du = DeviationGroup::deviation(&u);
            let dv = DeviationGroup::deviation(&v);
            let lhs = deviation_norm(&DeviationGroup { k }.comm(&du, &dv));
            let rhs = (2.0 * deviation_norm(&du) * deviation_norm(&dv)).min(2.0);
            let ok = lhs <= rhs + 1e-9;
            (ok, if rhs > 0.0 { lhs / rhs } else { 0.0 })
        })
        .collect();
    ContractionStats {
        samples,
        violations: results.iter().filter(|r| !r.0).count(),
        max_ratio: results.iter().map(|r| r.1).fold(0.0, f64::max),
    }
}

/// The product inequality `‖1 − u₁u₂‖ ≤ 2‖1 − u₁‖‖1 − u₂‖` fails at
/// `u₂ = I` for any `u₁ ≠ I`. Returns `(lhs, rhs)` at `u₁ = diag(i, −i)`.
pub fn product_form_counterexample(k: usize) -> (f64, f64) {
    let u1 = UnitaryMatrix::rotation(k, std::f64::consts::FRAC_PI_2);
    let u2 = UnitaryMatrix::identity(k);
    let lhs = dist_identity(&u1.mul(&u2));
    let rhs = 2.0 * dist_identity(&u1) * dist_identity(&u2);
    (lhs, rhs)
}

/// `‖1 − a_n(u, v)‖` and `‖1 − b_n(u, v)‖` on `samples` Haar pairs, for
/// `n = 0..=n_max` of the standard construction.
pub fn level_norms(k: usize, n_max: usize, samples: usize, seed: u64) -> Vec<Vec<(f64, f64)>> {
    let mut p = WordProgram::new();
    let (a, b) = (p.a(), p.b());
    let levels = fibonacci_program(&mut p, a, b, n_max, Variant::Standard);
    let targets = levels.iter().flat_map(|&(x, y)| [x, y]).collect();
    let probe = ProgramProbe { program: p, targets };
    (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i);
            let u = random_su(k, &mut rng);
            let v = random_su(k, &mut rng);
            probe.distances(k, &u, &v).chunks(2).map(|c| (c[0], c[1])).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;

    fn real(rows: &[&[f64]]) -> Mat {
        let rows: Vec<Vec<Complex64>> = rows.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect();
        Mat::from_rows(&rows)
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn word_map_basics() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = random_su(2, &mut rng);
        let v = random_su(2, &mut rng);
        let id = UnitaryMatrix::identity(2);
        assert_eq!(dist_identity(&word_map(&Word::identity(), &u, &v).unwrap()), 0.0);
        let d = UnitaryMatrix::rotation(2, 0.7);
        let e = UnitaryMatrix::rotation(2, -1.9);
        assert!(dist_identity(&word_map(&w("abAB"), &d, &e).unwrap()) < 1e-14);
        assert!(dist_identity(&word_map(&w("abAAbbaBBa"), &id, &id).unwrap()) < 1e-15);
        let three = random_su(3, &mut rng);
        assert!(matches!(word_map(&w("ab"), &u, &three), Err(UnitaryError::DimensionMismatch(2, 3))));
    }

    #[test]
    fn long_words_stay_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = random_su(3, &mut rng);
        let v = random_su(3, &mut rng);
        let long = w("abAbbaBA").power(700);
        let m = word_map(&long, &u, &v).unwrap();
        assert!(m.drift() < 1e-10);
    }

    #[test]
    fn deviation_arithmetic_matches_plain_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = DeviationGroup { k: 3 };
        for _ in 0..20 {
            let u = random_su(3, &mut rng);
            let v = random_su(3, &mut rng);
            let (du, dv) = (DeviationGroup::deviation(&u), DeviationGroup::deviation(&v));
            let plain = DeviationGroup::deviation(&word_map(&w("abAB"), &u, &v).unwrap());
            assert!(g.comm(&du, &dv).sub(&plain).op_norm() < 1e-13);
            let plain = DeviationGroup::deviation(&word_map(&w("aB"), &u, &v).unwrap());
            assert!(g.mul(&du, &g.inv(&dv)).sub(&plain).op_norm() < 1e-13);
        }
    }

    #[test]
    fn deviations_keep_relative_accuracy_near_identity() {
        // [exp(εX), exp(εY)] − I ≈ ε²[X, Y] for tiny ε
        let eps = 1e-12;
        let x = real(&[&[0.0, eps], &[-eps, 0.0]]);
        let i = Complex64::new(0.0, 1.0);
        let y = Mat::diagonal(&[i * eps, -i * eps]);
        let g = DeviationGroup { k: 2 };
        let c = g.comm(&x, &y);
        let expected = x.mul(&y).sub(&y.mul(&x));
        let rel = c.sub(&expected).op_norm() / expected.op_norm();
        assert!(rel < 1e-9, "relative error {rel}");
        assert!(deviation_norm(&c) > 1e-25);
    }

    #[test]
    fn estimates() {
        assert_eq!(estimate_l(&Word::identity(), 2, 10, 0, 1).unwrap(), 0.0);
        let a = estimate_l(&w("a"), 2, 2000, 4, 7).unwrap();
        assert!(a > 1.99 && a <= 2.0 + 1e-12, "{a}");
        let c = estimate_l(&w("abAB"), 2, 2000, 4, 7).unwrap();
        assert!(c > 1.0 && c <= 2.0 + 1e-12, "{c}");
        assert!(matches!(estimate_l(&w("a"), 2, 0, 0, 1), Err(AlmostLawError::EmptyBudget)));
    }

    #[test]
    fn estimate_is_monotone_in_budget() {
        let c = w("abAB");
        let small = estimate_l(&c, 2, 100, 2, 9).unwrap();
        let large = estimate_l(&c, 2, 400, 2, 9).unwrap();
        assert!(large >= small);
        assert_eq!(small, estimate_l(&c, 2, 100, 2, 9).unwrap());
    }

    #[test]
    fn product_form_is_false_and_commutator_form_holds() {
        let (lhs, rhs) = product_form_counterexample(2);
        assert!(lhs > rhs, "{lhs} vs {rhs}");
        assert!((lhs - 2f64.sqrt()).abs() < 1e-12);
        let stats = commutator_contraction(2, 2000, 3);
        assert_eq!(stats.violations, 0);
        assert!(stats.max_ratio <= 1.0 + 1e-9);
    }

    #[test]
    fn cyclic_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let u = random_su(3, &mut rng);
            let v = random_su(3, &mut rng);
            assert!((dist_identity(&u.mul(&v)) - dist_identity(&v.mul(&u))).abs() < 1e-9);
        }
    }

    #[test]
    fn a_n_and_b_n_have_equal_distance() {
        for sample in level_norms(2, 6, 200, 5) {
            for (x, y) in sample {
                assert!((x - y).abs() <= 1e-9 * x.max(1e-300) + 1e-15, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn freeness() {
        assert!(certify_free(&w("ab"), &w("abab"), 4).is_none());
        let cert = certify_free(&w("abAB"), &w("aabAAB"), 4).unwrap();
        assert_eq!(cert.relations_checked, 4 + 12 + 36 + 108);
        assert!(cert.commutator_length > 0);
    }

    #[test]
    fn seed_leaves_have_expected_lengths() {
        let mut p = WordProgram::new();
        let (a, b) = (p.a(), p.b());
        let n1 = seed_node(&mut p, a, b, 1);
        assert_eq!(p.expand(n1).to_string(), "abaBAbAB");
        let n3 = seed_node(&mut p, a, b, 3);
        let leaf = |j: i64| {
            let aj = Word::generator_a().power(j);
            aj.commutator(&aj.conjugate_by(&Word::generator_b()))
        };
        let expected = leaf(1).commutator(&leaf(2)).commutator(&leaf(3));
        assert_eq!(p.expand(n3), expected);
    }

    #[test]
    fn trivial_group_rejected() {
        assert!(matches!(find_seed_pair(1, 100, 10, 0, 1), Err(AlmostLawError::TrivialGroup)));
        let err = find_seed_pair(2, 10, 10, 0, 1).unwrap_err();
        assert!(err.to_string().contains("raise the length cap"));
    }
}
