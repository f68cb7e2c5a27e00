//! Lower central series depth through the Magnus embedding.
//!
//! `a ↦ 1 + X`, `b ↦ 1 + Y` embeds F₂ into the ring of noncommutative power
//! series with integer coefficients, and `w ∈ γ_n(F₂)` exactly when the
//! expansion of `w − 1` has no terms of degree below `n`. Series are
//! truncated at a degree cap and carry exact big-integer coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::word::{Generator, Letter, Word};

/// Hard limit imposed by the monomial encoding.
pub const MAX_CAP: usize = 30;
/// Caps above this need an explicit opt-in at the command line.
pub const UNGATED_CAP: usize = 20;
pub const DEFAULT_CAP: usize = 14;

/// A monomial in the noncommuting variables `X` (bit 0) and `Y` (bit 1),
/// stored as its degree and the letters packed most-significant first.
/// The derived order is (degree, lexicographic with `X < Y`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    degree: u8,
    bits: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { degree: 0, bits: 0 };

    pub fn degree(self) -> usize {
        self.degree as usize
    }

    /// Parses a monomial such as `"XYX"`; `"1"` is the empty monomial.
    pub fn parse(s: &str) -> Option<Monomial> {
        if s == "1" {
            return Some(Monomial::ONE);
        }
        let mut m = Monomial::ONE;
        for c in s.chars() {
            m = m.times(match c {
                'X' => Generator::A,
                'Y' => Generator::B,
                _ => return None,
            });
        }
        Some(m)
    }

    #[inline]
    fn times(self, g: Generator) -> Monomial {
        let bit = match g {
            Generator::A => 0,
            Generator::B => 1,
        };
        Monomial { degree: self.degree + 1, bits: (self.bits << 1) | bit }
    }

    fn concat(self, other: Monomial) -> Monomial {
        Monomial {
            degree: self.degree + other.degree,
            bits: (self.bits << other.degree) | other.bits,
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 0 {
            return f.write_str("1");
        }
        for i in (0..self.degree).rev() {
            f.write_str(if (self.bits >> i) & 1 == 0 { "X" } else { "Y" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A truncated series: sorted terms, no zero coefficients, degrees ≤ cap.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    cap: usize,
    terms: Vec<(Monomial, BigInt)>,
}

fn check_cap(cap: usize) {
    assert!((1..=MAX_CAP).contains(&cap), "degree cap must be in 1..={MAX_CAP}, got {cap}");
}

impl TruncatedSeries {
    pub fn zero(cap: usize) -> Self {
        check_cap(cap);
        TruncatedSeries { cap, terms: Vec::new() }
    }

    pub fn one(cap: usize) -> Self {
        check_cap(cap);
        TruncatedSeries { cap, terms: vec![(Monomial::ONE, BigInt::one())] }
    }

    /// Builds a series from `(monomial, coefficient)` pairs, merging duplicates
    /// and dropping zero or over-cap terms.
    pub fn from_terms<I>(cap: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigInt)>,
    {
        check_cap(cap);
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in terms {
            if m.degree() <= cap {
                *acc.entry(m).or_default() += c;
            }
        }
        TruncatedSeries { cap, terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn coefficient(&self, m: Monomial) -> BigInt {
        self.terms
            .binary_search_by(|(k, _)| k.cmp(&m))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_default()
    }

    /// Lowest degree `≥ 1` carrying a nonzero coefficient.
    pub fn lowest_nonconstant_degree(&self) -> Option<usize> {
        self.terms.iter().map(|(m, _)| m.degree()).find(|&d| d >= 1)
    }

    pub fn sub(&self, other: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.cap, other.cap, "caps must agree");
        let negated = other.terms.iter().map(|(m, c)| (*m, -c.clone()));
        TruncatedSeries::from_terms(self.cap, self.terms.iter().cloned().chain(negated))
    }

    /// Truncated noncommutative product.
    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.cap, other.cap, "caps must agree");
        let cap = self.cap;
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                // terms are sorted by degree, so the rest of `other` is too long
                if m1.degree() + m2.degree() > cap {
                    break;
                }
                *acc.entry(m1.concat(*m2)).or_default() += c1 * c2;
            }
        }
        TruncatedSeries { cap, terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    /// Right multiplication by `1 + Z` where `Z` is `X` or `Y`: `s + s·Z`.
    /// Shifting by a letter is order preserving, so this is a sorted merge.
    fn mul_one_plus(&self, g: Generator) -> TruncatedSeries {
        let shifted: Vec<(Monomial, BigInt)> = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() < self.cap)
            .map(|(m, c)| (m.times(g), c.clone()))
            .collect();
        TruncatedSeries { cap: self.cap, terms: merge_add(&self.terms, shifted) }
    }

    /// Right multiplication by `(1 + Z)⁻¹`: the result `t` satisfies
    /// `t = s − t·Z`, solved degree by degree.
    fn mul_one_plus_inverse(&self, g: Generator) -> TruncatedSeries {
        let mut out: Vec<(Monomial, BigInt)> = Vec::with_capacity(self.terms.len() * 2);
        // degree-d block of the result, kept to produce degree d+1
        let mut prev_block: Vec<(Monomial, BigInt)> = Vec::new();
        let mut idx = 0;
        for d in 0..=self.cap {
            let start = idx;
            while idx < self.terms.len() && self.terms[idx].0.degree() == d {
                idx += 1;
            }
            let s_block = &self.terms[start..idx];
            let shifted: Vec<(Monomial, BigInt)> =
                prev_block.iter().map(|(m, c)| (m.times(g), -c)).collect();
            let block = merge_add(s_block, shifted);
            out.extend(block.iter().cloned());
            prev_block = block;
        }
        TruncatedSeries { cap: self.cap, terms: out }
    }

    pub(crate) fn mul_letter(&self, l: Letter) -> TruncatedSeries {
        if l.sign() > 0 {
            self.mul_one_plus(l.generator())
        } else {
            self.mul_one_plus_inverse(l.generator())
        }
    }
}

/// Merges two sorted term lists, adding coefficients of equal monomials.
fn merge_add(left: &[(Monomial, BigInt)], right: Vec<(Monomial, BigInt)>) -> Vec<(Monomial, BigInt)> {
    let mut out = Vec::with_capacity(left.len() + right.len());
    let mut li = left.iter().peekable();
    let mut ri = right.into_iter().peekable();
    loop {
        match (li.peek(), ri.peek()) {
            (Some((lm, _)), Some((rm, _))) => {
                if lm < rm {
                    out.push(li.next().cloned().unwrap());
                } else if rm < lm {
                    out.push(ri.next().unwrap());
                } else {
                    let (m, lc) = li.next().unwrap();
                    let (_, rc) = ri.next().unwrap();
                    let c = lc + rc;
                    if !c.is_zero() {
                        out.push((*m, c));
                    }
                }
            }
            (Some(_), None) => out.push(li.next().cloned().unwrap()),
            (None, Some(_)) => out.push(ri.next().unwrap()),
            (None, None) => break,
        }
    }
    out
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            match (m.degree(), abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (_, true) => write!(f, "{m}")?,
                _ => write!(f, "{abs}{m}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries(cap {}: {self})", self.cap)
    }
}

/// Image of a single letter: `1 + X`, or `1 − X + X² − ⋯ ± X^cap` for `a⁻¹`.
pub fn generator_series(letter: Letter, cap: usize) -> TruncatedSeries {
    TruncatedSeries::one(cap).mul_letter(letter)
}

/// Magnus expansion of `w`, truncated at degree `cap`.
pub fn magnus_expand(w: &Word, cap: usize) -> TruncatedSeries {
    w.letters().iter().fold(TruncatedSeries::one(cap), |s, &l| s.mul_letter(l))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "n")]
pub enum DepthResult {
    /// The word is the identity.
    Identity,
    /// `w ∈ γ_n \ γ_{n+1}`.
    Exact(usize),
    /// `w ∈ γ_m`, and the cap was too small to say more.
    AtLeast(usize),
}

impl DepthResult {
    /// A lower bound on the depth (`usize::MAX` for the identity).
    pub fn lower_bound(self) -> usize {
        match self {
            DepthResult::Identity => usize::MAX,
            DepthResult::Exact(n) | DepthResult::AtLeast(n) => n,
        }
    }

    pub fn exact(self) -> Option<usize> {
        match self {
            DepthResult::Exact(n) => Some(n),
            _ => None,
        }
    }
}

impl fmt::Display for DepthResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DepthResult::Identity => f.write_str("Identity"),
            DepthResult::Exact(n) => write!(f, "Exact({n})"),
            DepthResult::AtLeast(n) => write!(f, "AtLeast({n})"),
        }
    }
}

/// `γ(w) = max{n : w ∈ γ_n(F₂)}` as far as the cap can see.
pub fn lcs_depth(w: &Word, cap: usize) -> DepthResult {
    check_cap(cap);
    if w.is_identity() {
        return DepthResult::Identity;
    }
    match magnus_expand(w, cap).lowest_nonconstant_degree() {
        Some(d) => DepthResult::Exact(d),
        None => DepthResult::AtLeast(cap + 1),
    }
}

/// Whether `w ∈ γ_n(F₂)`. Only degrees below `n` matter, so the expansion is
/// truncated at `n − 1`.
pub fn lcs_member(w: &Word, n: usize) -> bool {
    assert!(n >= 1, "series index starts at 1");
    if n == 1 || w.is_identity() {
        return true;
    }
    magnus_expand(w, n - 1).lowest_nonconstant_degree().is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn series(cap: usize, terms: &[(&str, i64)]) -> TruncatedSeries {
        TruncatedSeries::from_terms(
            cap,
            terms.iter().map(|(m, c)| (Monomial::parse(m).unwrap(), BigInt::from(*c))),
        )
    }

    #[test]
    fn generator_images() {
        assert_eq!(generator_series(Letter::A, 3), series(3, &[("1", 1), ("X", 1)]));
        assert_eq!(
            generator_series(Letter::AInv, 3),
            series(3, &[("1", 1), ("X", -1), ("XX", 1), ("XXX", -1)])
        );
        assert_eq!(
            generator_series(Letter::BInv, 2),
            series(2, &[("1", 1), ("Y", -1), ("YY", 1)])
        );
        let p = generator_series(Letter::A, 3).mul(&generator_series(Letter::AInv, 3));
        assert_eq!(p, TruncatedSeries::one(3));
    }

    #[test]
    fn products() {
        let x = generator_series(Letter::A, 3);
        let y = generator_series(Letter::B, 3);
        let xy = x.mul(&y);
        assert_eq!(xy, series(3, &[("1", 1), ("X", 1), ("Y", 1), ("XY", 1)]));
        assert_eq!(xy.sub(&y.mul(&x)), series(3, &[("XY", 1), ("YX", -1)]));
        assert_eq!(xy.mul(&TruncatedSeries::one(3)), xy);
    }

    #[test]
    fn fast_letter_multiplication_matches_general_product() {
        let s = magnus_expand(&w("abAAbBaB"), 5);
        for l in Letter::ALL {
            assert_eq!(s.mul_letter(l), s.mul(&generator_series(l, 5)), "letter {l:?}");
        }
    }

    #[test]
    fn expansions() {
        assert_eq!(magnus_expand(&Word::identity(), 4), TruncatedSeries::one(4));
        assert_eq!(magnus_expand(&w("abAB"), 2), series(2, &[("1", 1), ("XY", 1), ("YX", -1)]));
        assert_eq!(magnus_expand(&w("abAB"), 2).to_string(), "1 + XY - YX");
    }

    #[test]
    fn depth_examples() {
        assert_eq!(lcs_depth(&w("a"), 4), DepthResult::Exact(1));
        assert_eq!(lcs_depth(&w("abAB").power(2), 4), DepthResult::Exact(2));
        assert_eq!(lcs_depth(&Word::identity(), 4), DepthResult::Identity);
        assert_eq!(lcs_depth(&w("abAB"), 1), DepthResult::AtLeast(2));
    }

    #[test]
    fn membership_examples() {
        assert!(lcs_member(&w("aBBa"), 1));
        assert!(lcs_member(&w("abAB"), 2));
        assert!(!lcs_member(&w("abAB"), 3));
        assert!(lcs_member(&Word::identity(), 9));
    }

    #[test]
    #[should_panic(expected = "degree cap")]
    fn zero_cap_rejected() {
        let _ = magnus_expand(&w("a"), 0);
    }

    #[test]
    fn monomial_display_round_trip() {
        for s in ["1", "X", "YXY", "XXYYX"] {
            assert_eq!(Monomial::parse(s).unwrap().to_string(), s);
        }
    }
}
