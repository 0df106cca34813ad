//! Set assignments, and the constructions that turn a witness for the
//! translated problem into a model of the original one and back.

mod assignment;
mod extend;
mod flat;
mod lift;
mod order;
mod pipeline;
mod transform;

use thiserror::Error;

use crate::decide::DecideError;
use crate::hf::HfError;
use crate::syntax::{SingletonAtom, Var};

pub use assignment::SetAssignment;
pub use extend::extend;
pub use flat::{flatten, is_flat, region_signatures, FlatParams};
pub use lift::{lift, lift_with, LiftOptions, LiftStep, Lifted};
pub use order::{order, AtomOrder};
pub use pipeline::{
    flat_rank_for, solve_nested, solve_nested_with, NestedOutcome, NestedVerdict, PipelineOptions,
    PipelineStats, StageTimings,
};
pub use transform::transform;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("variable `{0}` has no value")]
    MissingVariable(Var),
    #[error("flat rank {flat_rank} is too small, need at least {needed}")]
    FlatRankTooSmall { flat_rank: u32, needed: u32 },
    #[error("assignment is not {flat_rank}-flat")]
    NotFlat { flat_rank: u32 },
    #[error("atom order has a cycle through {}", join(atoms))]
    CycleDetected { atoms: Vec<SingletonAtom> },
    #[error("the member value is already an element of `{var}`")]
    PreconditionViolated { var: Var },
    #[error("assignment does not model {0}")]
    NotAModel(&'static str),
    #[error("lifting invariant broken: {0}")]
    LiftInvariantBroken(String),
    #[error("extended assignment does not model the translation")]
    ExtensionFailed,
    #[error(transparent)]
    Hf(#[from] HfError),
    #[error(transparent)]
    Decide(#[from] DecideError),
}

fn join(atoms: &[SingletonAtom]) -> String {
    atoms
        .iter()
        .map(|a| format!("`{a}`"))
        .collect::<Vec<_>>()
        .join(", ")
}
