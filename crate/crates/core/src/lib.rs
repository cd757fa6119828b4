//! Solvers for generalized reachability games.
//!
//! A generalized reachability game is played on a finite directed graph whose
//! vertices are split between two players, Eve and Adam. Eve wins a play when it
//! visits each of `k` designated vertex sets (the *colors*) at least once.
//!
//! The crate is `no_std` and only needs an allocator. It contains:
//!
//! - [`model`]: arenas, objectives, games and plays;
//! - [`attractor`]: attractors, plain reachability games and the all-Adam solver;
//! - [`memory`]: memory structures and finite-memory strategies;
//! - [`product`]: the subset memory, the synchronized product, the FPT solver and
//!   antichain compression of Adam's strategies;
//! - [`lab`]: simulation, strategy verification, the bounded minimax oracle,
//!   minimal-memory search and the flower adversary;
//! - [`subclasses`]: polynomial solvers for singleton colors and for one-player
//!   games with colors of size two (via 2-SAT);
//! - [`qbf`]: quantified boolean formulas and their reduction to games;
//! - [`generators`]: the lower-bound arena families and random instances.
//!
//! Text formats, JSON and the command-line tool live in the `genreach` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod attractor;
pub mod error;
pub mod generators;
pub mod graph;
pub mod lab;
pub mod limits;
pub mod memory;
pub mod model;
pub mod product;
pub mod qbf;
pub mod result;
pub mod subclasses;

pub use error::{Error, Result};
pub use limits::Limits;
pub use memory::{FiniteMemoryStrategy, MemoryStructure};
pub use model::{Arena, ColorMask, Game, Objective, Play, Player, VertexSet};
pub use result::{Method, SolveResult, SolveStats};
