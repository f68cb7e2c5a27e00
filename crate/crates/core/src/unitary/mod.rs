//! Word maps on `SU(k)` and almost laws.

pub mod almost;
pub mod matrix;

pub use almost::{
    decay_report, estimate_l, find_seed_pair, word_map, AlmostLawError, DecayRow, SeedPair,
};
pub use matrix::{dist_identity, random_su, Mat, UnitaryError, UnitaryMatrix};
