//! Simulation and verification of strategies, the bounded minimax oracle,
//! exhaustive minimal-memory search, and the flower adversary.

mod flower;
mod minimax;
mod search;
mod simulate;
mod verify;

pub use flower::{flower_adversary, stopping_sets, Refutation};
pub use minimax::minimax_oracle;
pub use search::{min_memory_search, MachineClass, SearchOutcome};
pub use simulate::{simulate, SimOutcome, SimReason};
pub use verify::{verify_strategy, Counterexample, Verdict};
