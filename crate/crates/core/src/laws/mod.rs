//! Word maps on finite groups given by multiplication tables, and short laws
//! for nilpotent groups built from the Fibonacci construction.

pub mod catalog;

use std::collections::{BTreeSet, HashMap};
use std::hash::Hash;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construction::{build_pair, fibonacci, Variant};
use crate::word::{Letter, Word};

/// Above this order associativity is spot-checked on random triples.
pub const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 64;
const RANDOM_TRIPLES: usize = 200_000;
pub const MAX_ORDER: usize = 512;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("cannot read group file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed group file: {0}")]
    Schema(#[from] serde_json::Error),
    #[error("order must be in 1..={MAX_ORDER}, got {0}")]
    BadOrder(usize),
    #[error("table has {rows} rows, expected {order}")]
    RowCount { rows: usize, order: usize },
    #[error("row {row} has {len} entries, expected {order}")]
    RowLength { row: usize, len: usize, order: usize },
    #[error("entry ({row}, {col}) = {value} is not an element id")]
    OutOfRange { row: usize, col: usize, value: usize },
    #[error("element 0 is not an identity: 0·{0} or {0}·0 differs from {0}")]
    Identity(usize),
    #[error("element {0} has no two-sided inverse")]
    Inverse(usize),
    #[error("associativity fails at ({0}, {1}, {2})")]
    Associativity(usize, usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct GroupFile {
    name: String,
    order: usize,
    table: Vec<Vec<usize>>,
}

/// A finite group on ids `0..order`, with `0` the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    table: Vec<Vec<u16>>,
    inverse: Vec<u16>,
}

impl FiniteGroup {
    /// Validates a table: identity row and column, inverses, associativity.
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let order = table.len();
        if order == 0 || order > MAX_ORDER {
            return Err(GroupError::BadOrder(order));
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != order {
                return Err(GroupError::RowLength { row, len: r.len(), order });
            }
            if let Some((col, &value)) = r.iter().enumerate().find(|(_, &v)| v >= order) {
                return Err(GroupError::OutOfRange { row, col, value });
            }
        }
        for x in 0..order {
            if table[0][x] != x || table[x][0] != x {
                return Err(GroupError::Identity(x));
            }
        }
        let mut inverse = vec![0u16; order];
        for x in 0..order {
            let y = (0..order).find(|&y| table[x][y] == 0).ok_or(GroupError::Inverse(x))?;
            if table[y][x] != 0 {
                return Err(GroupError::Inverse(x));
            }
            inverse[x] = y as u16;
        }
        let g = FiniteGroup {
            name: name.into(),
            table: table.into_iter().map(|r| r.into_iter().map(|v| v as u16).collect()).collect(),
            inverse,
        };
        g.check_associativity()?;
        Ok(g)
    }

    fn check_associativity(&self) -> Result<(), GroupError> {
        let m = self.order();
        let assoc = |x: usize, y: usize, z: usize| self.mul(self.mul(x, y), z) == self.mul(x, self.mul(y, z));
        if m <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
            for x in 0..m {
                for y in 0..m {
                    for z in 0..m {
                        if !assoc(x, y, z) {
                            return Err(GroupError::Associativity(x, y, z));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(m as u64);
            for _ in 0..RANDOM_TRIPLES {
                let (x, y, z) = (rng.random_range(0..m), rng.random_range(0..m), rng.random_range(0..m));
                if !assoc(x, y, z) {
                    return Err(GroupError::Associativity(x, y, z));
                }
            }
        }
        Ok(())
    }

    /// Builds the table of a group given by concrete elements and a product.
    /// `elements[0]` must be the identity.
    pub fn from_elements<T, F>(name: impl Into<String>, elements: &[T], mul: F) -> Result<Self, GroupError>
    where
        T: Eq + Hash + Clone,
        F: Fn(&T, &T) -> T,
    {
        let index: HashMap<&T, usize> = elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let table = elements
            .iter()
            .map(|x| elements.iter().map(|y| index[&mul(x, y)]).collect())
            .collect();
        FiniteGroup::from_table(name, table)
    }

    pub fn from_json(text: &str) -> Result<Self, GroupError> {
        let file: GroupFile = serde_json::from_str(text)?;
        if file.order != file.table.len() {
            return Err(GroupError::RowCount { rows: file.table.len(), order: file.order });
        }
        FiniteGroup::from_table(file.name, file.table)
    }

    pub fn to_json(&self) -> String {
        let file = GroupFile {
            name: self.name.clone(),
            order: self.order(),
            table: self.table.iter().map(|r| r.iter().map(|&v| v as usize).collect()).collect(),
        };
        serde_json::to_string(&file).expect("group tables serialize")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y] as usize
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x] as usize
    }

    pub fn commutator(&self, x: usize, y: usize) -> usize {
        self.mul(self.mul(x, y), self.mul(self.inv(x), self.inv(y)))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|x| (0..x).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Closure of `gens` under multiplication (finite, so this is the
    /// generated subgroup).
    pub fn subgroup_generated(&self, gens: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut members: BTreeSet<usize> = BTreeSet::from([0]);
        let mut frontier: Vec<usize> = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if members.insert(y) {
                    frontier.push(y);
                }
            }
        }
        members
    }
}

/// `load_group` for a file on disk.
pub fn load_group(path: &Path) -> Result<FiniteGroup, GroupError> {
    let text = std::fs::read_to_string(path)?;
    FiniteGroup::from_json(&text)
}

/// Evaluates `w` at `a ↦ g`, `b ↦ h`.
pub fn evaluate_word(group: &FiniteGroup, w: &Word, g: usize, h: usize) -> usize {
    evaluate_letters(group, w.letters(), g, h)
}

/// Same as [`evaluate_word`] for an arbitrary, possibly unreduced, spelling.
pub fn evaluate_letters(group: &FiniteGroup, letters: &[Letter], g: usize, h: usize) -> usize {
    let (gi, hi) = (group.inv(g), group.inv(h));
    letters.iter().fold(0, |acc, l| {
        let x = match l {
            Letter::A => g,
            Letter::AInv => gi,
            Letter::B => h,
            Letter::BInv => hi,
        };
        group.mul(acc, x)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawCertificate {
    pub word: Word,
    pub group: String,
    pub pairs_checked: usize,
    pub holds: bool,
    /// First failing `(g, h)` in g-major order.
    pub counterexample: Option<(usize, usize)>,
}

/// Checks `w(g, h) = 1` over all pairs. Rows are scanned in parallel; the
/// reported counterexample is always the first one in g-major order.
pub fn is_law(group: &FiniteGroup, w: &Word) -> LawCertificate {
    let m = group.order();
    let counterexample = (0..m)
        .into_par_iter()
        .find_map_first(|g| (0..m).find(|&h| evaluate_word(group, w, g, h) != 0).map(|h| (g, h)));
    LawCertificate {
        word: w.clone(),
        group: group.name().to_string(),
        pairs_checked: m * m,
        holds: counterexample.is_none(),
        counterexample,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NilpotencyClass {
    Class(usize),
    /// The lower central series stalls at a nontrivial subgroup of this order.
    NotNilpotent { stalled_at: usize },
}

/// Lower central series computed by subgroup generation:
/// `γ_{i+1} = ⟨[x, y] : x ∈ γ_i, y ∈ G⟩`. The trivial group has class 0.
pub fn nilpotency_class(group: &FiniteGroup) -> NilpotencyClass {
    let all: BTreeSet<usize> = (0..group.order()).collect();
    let mut current = all.clone();
    let mut class = 0;
    while current.len() > 1 {
        let gens: BTreeSet<usize> =
            current.iter().flat_map(|&x| all.iter().map(move |&y| group.commutator(x, y))).collect();
        let next = group.subgroup_generated(&gens);
        if next == current {
            return NilpotencyClass::NotNilpotent { stalled_at: current.len() };
        }
        current = next;
        class += 1;
    }
    NilpotencyClass::Class(class)
}

/// Depth a word must reach to be a law on every nilpotent group of order
/// at most `n`. A nilpotent group is the product of its Sylow subgroups, a
/// group of order `p^k` with `k ≥ 2` has class at most `k − 1`, and groups of
/// prime order are abelian, so the class is at most
/// `max(1, ⌊log₂ n⌋ − 1)`.
pub fn required_law_depth(n: u64) -> u32 {
    assert!(n >= 2, "size bound must be at least 2");
    (63 - n.leading_zeros()).max(2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NilpotentLaw {
    pub size_bound: u64,
    pub level: usize,
    pub required_depth: u32,
    pub word: Word,
}

/// `a_m` for the least `m` with `f_{m+2}` at least [`required_law_depth`].
pub fn nilpotent_law_word(n: u64) -> NilpotentLaw {
    let required = required_law_depth(n);
    let level = (0..).find(|&m| fibonacci(m + 2) >= required as u128).expect("fibonacci grows");
    let word = build_pair(level, Variant::Standard).expect("levels needed for u64 sizes are small").a;
    NilpotentLaw { size_bound: n, level, required_depth: required, word }
}

/// Golden ratio exponent `log_φ 2`.
pub fn log_phi_2() -> f64 {
    2f64.ln() / ((1.0 + 5f64.sqrt()) / 2.0).ln()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LawLengthRow {
    pub size_bound: u64,
    pub level: usize,
    pub length: usize,
    /// `ℓ / (log₂ n)^{log_φ 2}`
    pub ratio: f64,
}

/// Law lengths for `n = 2^lo ..= 2^hi`, with the length normalised by
/// `(log₂ n)^{log_φ 2}`.
pub fn law_length_table(lo: u32, hi: u32) -> Vec<LawLengthRow> {
    (lo..=hi)
        .map(|e| {
            let n = 1u64 << e;
            let law = nilpotent_law_word(n);
            LawLengthRow {
                size_bound: n,
                level: law.level,
                length: law.word.len(),
                ratio: law.word.len() as f64 / (e as f64).powf(log_phi_2()),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::catalog::{cyclic, dihedral, symmetric3};
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn evaluation_basics() {
        let s3 = symmetric3();
        let z4 = cyclic(4);
        for g in 0..4 {
            for h in 0..4 {
                assert_eq!(evaluate_word(&z4, &Word::identity(), g, h), 0);
                assert_eq!(evaluate_word(&z4, &w("abAB"), g, h), 0);
            }
        }
        let nontrivial = (0..6).any(|g| (0..6).any(|h| evaluate_word(&s3, &w("abAB"), g, h) != 0));
        assert!(nontrivial);
    }

    #[test]
    fn law_certificates() {
        let d4 = dihedral(4);
        let a2 = build_pair(2, Variant::Standard).unwrap().a;
        let cert = is_law(&d4, &a2);
        assert!(cert.holds);
        assert_eq!(cert.pairs_checked, 64);
        assert!(is_law(&cyclic(4), &w("abAB")).holds);
        let bad = is_law(&symmetric3(), &w("abAB"));
        assert!(!bad.holds);
        let (g, h) = bad.counterexample.unwrap();
        assert_ne!(evaluate_word(&symmetric3(), &w("abAB"), g, h), 0);
        // first in g-major order
        let s3 = symmetric3();
        for g2 in 0..=g {
            let hmax = if g2 == g { h } else { 6 };
            for h2 in 0..hmax {
                assert_eq!(evaluate_word(&s3, &w("abAB"), g2, h2), 0);
            }
        }
    }

    #[test]
    fn classes() {
        assert_eq!(nilpotency_class(&cyclic(4)), NilpotencyClass::Class(1));
        assert_eq!(nilpotency_class(&dihedral(4)), NilpotencyClass::Class(2));
        assert_eq!(nilpotency_class(&dihedral(8)), NilpotencyClass::Class(3));
        assert_eq!(nilpotency_class(&symmetric3()), NilpotencyClass::NotNilpotent { stalled_at: 3 });
        assert_eq!(nilpotency_class(&cyclic(1)), NilpotencyClass::Class(0));
    }

    #[test]
    fn law_words() {
        assert_eq!(nilpotent_law_word(4).level, 1);
        assert_eq!(nilpotent_law_word(4).word.len(), 4);
        assert_eq!(nilpotent_law_word(16).level, 3);
        assert_eq!(nilpotent_law_word(16).word.len(), 14);
        // prime orders still need a commutator
        assert_eq!(nilpotent_law_word(2).level, 1);
        assert_eq!(nilpotent_law_word(3).level, 1);
    }

    #[test]
    fn table_validation_errors() {
        let broken = vec![vec![0, 1, 2], vec![1, 1, 2], vec![2, 2, 0]];
        assert!(matches!(FiniteGroup::from_table("x", broken), Err(GroupError::Inverse(1))));
        let no_identity = vec![vec![1, 0], vec![0, 1]];
        assert!(matches!(FiniteGroup::from_table("x", no_identity), Err(GroupError::Identity(0))));
        let ragged = vec![vec![0, 1], vec![1]];
        assert!(matches!(FiniteGroup::from_table("x", ragged), Err(GroupError::RowLength { row: 1, .. })));
        // a Latin square with identity and inverses that is not associative
        let quasi = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroup::from_table("x", quasi), Err(GroupError::Associativity(..))));
    }

    #[test]
    fn json_round_trip() {
        let d4 = dihedral(4);
        assert_eq!(FiniteGroup::from_json(&d4.to_json()).unwrap(), d4);
        let bad = r#"{"name":"x","order":3,"table":[[0,1],[1,0]]}"#;
        assert!(matches!(FiniteGroup::from_json(bad), Err(GroupError::RowCount { .. })));
        assert!(matches!(FiniteGroup::from_json("{"), Err(GroupError::Schema(_))));
    }

    #[test]
    fn unreduced_spelling_evaluates_the_same() {
        let d4 = dihedral(4);
        let raw = [Letter::A, Letter::B, Letter::BInv, Letter::A, Letter::AInv, Letter::B];
        let reduced = Word::from_letters(raw);
        for g in 0..8 {
            for h in 0..8 {
                assert_eq!(evaluate_letters(&d4, &raw, g, h), evaluate_word(&d4, &reduced, g, h));
            }
        }
    }
}
