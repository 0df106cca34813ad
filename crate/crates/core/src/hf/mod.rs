//! Hereditarily finite sets: an interned set kernel, rank, the finite
//! von Neumann levels, and the rank-exact injection used to build flat
//! models.

mod checks;
mod level;
mod set;

use thiserror::Error;

pub use checks::{
    bound_checks, check_axioms, double_exponential_bound, level_size, rank_count_by_recurrence,
    AxiomReport, AxiomViolation, BoundCheck, BoundReport, TriplePredicate, AXIOMS,
};
pub use level::{
    chain, count_rank_exact, enumerate_level, im_inject, im_inject_bits, LevelTable,
    MAX_ENUMERATED_LEVEL,
};
pub use set::{HfSet, ParseHfError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HfError {
    #[error("level {n} is too large to enumerate (limit {max})")]
    LevelTooLarge { n: u32, max: u32 },
    #[error("region index {index} is outside 1..2^{} for flat rank {flat_rank}", flat_rank.saturating_sub(1))]
    IndexOutOfRange { index: u128, flat_rank: u32 },
    #[error("flat rank {flat_rank} is too small, need at least {needed}")]
    FlatRankTooSmall { flat_rank: u32, needed: u32 },
}
