use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use crate::memory::FiniteMemoryStrategy;
use crate::model::{Game, Player, VertexSet};

/// Which algorithm produced a [`SolveResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Reachability,
    Fpt,
    Opponent,
    Singleton,
    OnePlayerSize2,
    Minimax,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Reachability => "reachability",
            Method::Fpt => "fpt",
            Method::Opponent => "opponent",
            Method::Singleton => "singleton",
            Method::OnePlayerSize2 => "oneplayer2",
            Method::Minimax => "minimax",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub product_vertices: usize,
    pub product_edges: usize,
    /// Attractor layers; color-subset levels for the FPT solver; attractor
    /// calls for the polynomial solvers.
    pub iterations: usize,
    /// Filled in by callers that have a clock.
    pub elapsed: Option<Duration>,
}

/// Winning regions for both players, with optional witnesses.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub method: Method,
    pub eve_region: VertexSet,
    pub adam_region: VertexSet,
    pub eve_strategy: Option<FiniteMemoryStrategy>,
    pub adam_strategy: Option<FiniteMemoryStrategy>,
    /// A winning play prefix from the initial vertex, when the method produces one.
    pub witness: Option<Vec<usize>>,
    pub stats: SolveStats,
}

impl SolveResult {
    pub(crate) fn from_eve_region(method: Method, eve_region: VertexSet) -> SolveResult {
        SolveResult {
            method,
            adam_region: eve_region.complement(),
            eve_region,
            eve_strategy: None,
            adam_strategy: None,
            witness: None,
            stats: SolveStats::default(),
        }
    }

    pub fn winner(&self, v: usize) -> Player {
        if self.eve_region.contains(v) {
            Player::Eve
        } else {
            Player::Adam
        }
    }

    pub fn winner_from_init(&self, game: &Game) -> Option<Player> {
        game.init().map(|v| self.winner(v))
    }

    pub fn region(&self, player: Player) -> &VertexSet {
        match player {
            Player::Eve => &self.eve_region,
            Player::Adam => &self.adam_region,
        }
    }

    pub fn strategy(&self, player: Player) -> Option<&FiniteMemoryStrategy> {
        match player {
            Player::Eve => self.eve_strategy.as_ref(),
            Player::Adam => self.adam_strategy.as_ref(),
        }
    }

    /// Regions are disjoint and cover every vertex.
    pub fn is_partition(&self) -> bool {
        self.eve_region.is_disjoint(&self.adam_region)
            && self.eve_region.union(&self.adam_region).len() == self.eve_region.universe()
    }
}
