//! Fibonacci commutator words in the free group of rank two.
//!
//! The crate builds the words `a_n`, `b_n` defined by `a_n = a_{n−1} b_{n−1}`,
//! `b_n = a_{n−1}⁻¹ b_{n−1}⁻¹`, measures their lower central series depth
//! through the Magnus embedding, searches for the girth `α(n)` of the
//! quotients `F₂/γ_n`, checks the resulting laws on small nilpotent groups
//! and estimates how fast the words shrink as word maps on `SU(k)`.

pub mod construction;
pub mod girth;
pub mod laws;
pub mod magnus;
pub mod program;
pub mod report;
pub mod suite;
pub mod unitary;
pub mod word;

pub use construction::{build_pair, ConstructionPair, Variant};
pub use magnus::{lcs_depth, lcs_member, DepthResult, TruncatedSeries};
pub use word::{Letter, Word};
