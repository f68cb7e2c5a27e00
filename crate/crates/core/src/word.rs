//! Reduced words in the free group on two generators `a`, `b`.
//!
//! Text format: lowercase letters are generators, uppercase letters are their
//! inverses (`A` = a⁻¹, `B` = b⁻¹), no separators, and `e` is the identity.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// One of the two free generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    A,
    B,
}

/// A generator or its inverse.
///
/// The derived order is `a < A < b < B`; canonical orbit representatives in the
/// girth search are lexicographic minima with respect to it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Letter {
    A = 0,
    AInv = 1,
    B = 2,
    BInv = 3,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::AInv, Letter::B, Letter::BInv];

    #[inline]
    pub fn code(self) -> u8 {
        self as u8
    }

    #[inline]
    pub fn from_code(code: u8) -> Letter {
        match code & 3 {
            0 => Letter::A,
            1 => Letter::AInv,
            2 => Letter::B,
            _ => Letter::BInv,
        }
    }

    #[inline]
    pub fn inverse(self) -> Letter {
        Letter::from_code(self.code() ^ 1)
    }

    #[inline]
    pub fn generator(self) -> Generator {
        if self.code() < 2 {
            Generator::A
        } else {
            Generator::B
        }
    }

    /// `+1` for a generator, `-1` for an inverse.
    #[inline]
    pub fn sign(self) -> i8 {
        if self.code() & 1 == 0 {
            1
        } else {
            -1
        }
    }

    #[inline]
    pub fn is_inverse_of(self, other: Letter) -> bool {
        self.code() ^ other.code() == 1
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::AInv => 'A',
            Letter::B => 'b',
            Letter::BInv => 'B',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a' => Some(Letter::A),
            'A' => Some(Letter::AInv),
            'b' => Some(Letter::B),
            'B' => Some(Letter::BInv),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input (use \"e\" for the identity)")]
    Empty,
    #[error("invalid character {ch:?} at position {pos}")]
    InvalidChar { pos: usize, ch: char },
}

/// A freely reduced word.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn letter(l: Letter) -> Self {
        Word { letters: vec![l] }
    }

    pub fn generator_a() -> Self {
        Word::letter(Letter::A)
    }

    pub fn generator_b() -> Self {
        Word::letter(Letter::B)
    }

    /// Reduces an arbitrary letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut w = Word::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    /// Wraps a sequence that the caller guarantees is already reduced.
    pub(crate) fn from_reduced_unchecked(letters: Vec<Letter>) -> Self {
        debug_assert!(letters.windows(2).all(|p| !p[0].is_inverse_of(p[1])));
        Word { letters }
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        text.parse()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    /// Appends a letter, cancelling against the last one if needed.
    #[inline]
    pub fn push(&mut self, l: Letter) {
        match self.letters.last() {
            Some(&last) if last.is_inverse_of(l) => {
                self.letters.pop();
            }
            _ => self.letters.push(l),
        }
    }

    /// In-place right multiplication. Cancellation only happens at the
    /// junction, so this is linear in the shorter cancelled prefix plus the
    /// appended tail.
    pub fn mul_assign(&mut self, rhs: &Word) {
        let cancel = self.junction_cancellation(rhs);
        self.letters.truncate(self.letters.len() - cancel);
        self.letters.extend_from_slice(&rhs.letters[cancel..]);
    }

    /// Number of letters each side loses when `self` and `rhs` are multiplied.
    pub fn junction_cancellation(&self, rhs: &Word) -> usize {
        self.letters
            .iter()
            .rev()
            .zip(rhs.letters.iter())
            .take_while(|(x, y)| x.is_inverse_of(**y))
            .count()
    }

    pub fn concat(&self, rhs: &Word) -> Word {
        let cancel = self.junction_cancellation(rhs);
        let mut letters = Vec::with_capacity(self.len() + rhs.len() - 2 * cancel);
        letters.extend_from_slice(&self.letters[..self.len() - cancel]);
        letters.extend_from_slice(&rhs.letters[cancel..]);
        Word { letters }
    }

    pub fn invert(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// `[self, other] = self · other · self⁻¹ · other⁻¹`.
    pub fn commutator(&self, other: &Word) -> Word {
        let mut w = self.concat(other);
        w.mul_assign(&self.invert());
        w.mul_assign(&other.invert());
        w
    }

    /// `self · other · self⁻¹`.
    pub fn conjugate_by(&self, conjugator: &Word) -> Word {
        let mut w = conjugator.concat(self);
        w.mul_assign(&conjugator.invert());
        w
    }

    pub fn power(&self, n: i64) -> Word {
        let base = if n < 0 { self.invert() } else { self.clone() };
        let mut e = n.unsigned_abs();
        if e <= 8 {
            let mut acc = Word::identity();
            for _ in 0..e {
                acc.mul_assign(&base);
            }
            return acc;
        }
        let mut acc = Word::identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc.mul_assign(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.concat(&sq);
            }
        }
        acc
    }

    /// Substitutes `a ↦ image_a`, `b ↦ image_b` (and inverses) and reduces.
    pub fn apply_endomorphism(&self, image_a: &Word, image_b: &Word) -> Word {
        let inv_a = image_a.invert();
        let inv_b = image_b.invert();
        let mut out = Word::identity();
        for &l in &self.letters {
            let img = match l {
                Letter::A => image_a,
                Letter::AInv => &inv_a,
                Letter::B => image_b,
                Letter::BInv => &inv_b,
            };
            out.mul_assign(img);
        }
        out
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(f), Some(l)) => self.len() == 1 || !f.is_inverse_of(l),
            _ => true,
        }
    }

    /// Returns `(core, conjugator)` with `self = conjugator · core · conjugator⁻¹`
    /// and `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let n = self.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.letters[k].is_inverse_of(self.letters[n - 1 - k]) {
            k += 1;
        }
        let core = Word { letters: self.letters[k..n - k].to_vec() };
        let conjugator = Word { letters: self.letters[..k].to_vec() };
        (core, conjugator)
    }

    /// Exponent sums `(Σ a-exponents, Σ b-exponents)`.
    pub fn exponent_sums(&self) -> (i64, i64) {
        self.letters.iter().fold((0, 0), |(sa, sb), l| match l.generator() {
            Generator::A => (sa + l.sign() as i64, sb),
            Generator::B => (sa, sb + l.sign() as i64),
        })
    }
}

/// Reduces a letter sequence with a plain stack. Kept separate from
/// [`Word::push`] so the two reduction routes can be compared in tests.
pub fn reduce_letters(letters: &[Letter]) -> Vec<Letter> {
    let mut stack: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        if stack.last().is_some_and(|t| t.is_inverse_of(l)) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    stack
}

impl FromStr for Word {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, ParseError> {
        if text.is_empty() {
            return Err(ParseError::Empty);
        }
        if text == "e" {
            return Ok(Word::identity());
        }
        let mut w = Word::identity();
        for (pos, ch) in text.chars().enumerate() {
            let l = Letter::from_char(ch).ok_or(ParseError::InvalidChar { pos, ch })?;
            w.push(l);
        }
        Ok(w)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        let s: String = self.letters.iter().map(|l| l.to_char()).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
