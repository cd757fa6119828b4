use alloc::string::String;

use crate::model::{Player, ValidationReport};

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid arena: {0}")]
    InvalidArena(ValidationReport),
    #[error("invalid objective: {0}")]
    InvalidObjective(String),
    #[error("{0} colors exceed the configured cap of {1}")]
    CapExceeded(usize, usize),
    #[error("game has no initial vertex")]
    NoInit,
    #[error("vertex {0} is owned by Eve; the opponent-player solver needs an all-Adam arena")]
    NotOpponentPlayer(usize),
    #[error("vertex {0} is owned by Adam; the one-player solver needs an all-Eve arena")]
    NotOnePlayer(usize),
    #[error("color {0} is not a singleton")]
    NotSingleton(usize),
    #[error("color {0} has {1} vertices; at most 2 are allowed")]
    ColorTooLarge(usize, usize),
    #[error("strategy has no move at vertex {vertex} in memory state {state}")]
    StrategyPartial { vertex: usize, state: usize },
    #[error("strategy is malformed: {0}")]
    MalformedStrategy(String),
    #[error("strategy belongs to {found:?}, expected {expected:?}")]
    WrongPlayer { expected: Player, found: Player },
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
    #[error("every strict color subset is a stopping set")]
    NoMissingSubset,
    #[error("machine has {0} states; the flower adversary needs fewer than {1}")]
    StateCountTooLarge(usize, usize),
    #[error("Adam's product region is not downward closed at vertex {vertex}, mask {mask:#b}")]
    NotDownwardClosed { vertex: usize, mask: u64 },
    #[error("antichain compression needs a fully materialized product")]
    IncompleteProduct,
    #[error("formula has an empty quantifier prefix")]
    EmptyPrefix,
    #[error("invalid formula: {0}")]
    InvalidFormula(String),
    #[error("{family} does not accept k = {k}")]
    BadK { family: &'static str, k: usize },
    #[error("invalid generator parameters: {0}")]
    BadParams(String),
}
