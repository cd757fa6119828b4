//! Attractors and plain reachability games.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::GameGraph;
use crate::memory::{FiniteMemoryStrategy, Initial, MemoryStructure};
use crate::model::{Arena, Game, Player, VertexSet};
use crate::result::{Method, SolveResult};

const INF: u32 = u32::MAX;

/// Eve's attractor of a target set, with the layer index of every vertex.
#[derive(Debug, Clone)]
pub struct AttractorResult {
    rank: Vec<u32>,
    eve_moves: Vec<u32>,
    /// Number of non-empty layers `Attr_0 .. Attr_r`.
    pub layers: usize,
    /// Predecessor edges inspected; bounded by the edge count.
    pub edge_visits: usize,
}

impl AttractorResult {
    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.rank[v] != INF
    }

    /// Smallest `i` with `v` in `Attr_i`, or `None` outside the attractor.
    #[inline]
    pub fn rank(&self, v: usize) -> Option<u32> {
        match self.rank[v] {
            INF => None,
            r => Some(r),
        }
    }

    /// Eve's rank-decreasing move at a vertex of positive finite rank.
    #[inline]
    pub fn eve_move(&self, v: usize) -> Option<usize> {
        match self.eve_moves[v] {
            INF => None,
            s => Some(s as usize),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.rank.len()
    }

    pub fn members(&self) -> VertexSet {
        VertexSet::from_indices(self.rank.len(), (0..self.rank.len()).filter(|&v| self.contains(v)))
    }

    pub fn len(&self) -> usize {
        self.rank.iter().filter(|&&r| r != INF).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Lowest-index successor of `v` outside the attractor, if any.
    pub fn escape_move<G: GameGraph>(&self, graph: &G, v: usize) -> Option<usize> {
        graph
            .successors(v)
            .iter()
            .map(|&s| s as usize)
            .filter(|&s| !self.contains(s))
            .min()
    }
}

/// Computes `Attr(target)` with successor counters in `O(n + m)`.
///
/// Ranks follow the layer recurrence: Eve vertices get one more than their
/// best successor, Adam vertices one more than their worst.
pub fn attractor<G: GameGraph>(graph: &G, target: impl Fn(usize) -> bool) -> AttractorResult {
    let n = graph.vertex_count();
    let mut rank = vec![INF; n];
    let mut remaining: Vec<u32> = (0..n)
        .map(|v| match graph.owner(v) {
            Player::Adam => graph.successors(v).len() as u32,
            Player::Eve => 0,
        })
        .collect();
    let mut queue = VecDeque::new();
    for (v, r) in rank.iter_mut().enumerate() {
        if target(v) {
            *r = 0;
            queue.push_back(v as u32);
        }
    }
    let mut edge_visits = 0usize;
    let mut max_rank = 0;
    while let Some(u) = queue.pop_front() {
        let r = rank[u as usize];
        max_rank = max_rank.max(r);
        for &p in graph.predecessors(u as usize) {
            edge_visits += 1;
            let p = p as usize;
            if rank[p] != INF {
                continue;
            }
            let admit = match graph.owner(p) {
                Player::Eve => true,
                Player::Adam => {
                    remaining[p] -= 1;
                    remaining[p] == 0
                }
            };
            if admit {
                rank[p] = r + 1;
                queue.push_back(p as u32);
            }
        }
    }

    let mut eve_moves = vec![INF; n];
    for v in 0..n {
        let r = rank[v];
        if r == INF || r == 0 || graph.owner(v) != Player::Eve {
            continue;
        }
        eve_moves[v] = graph
            .successors(v)
            .iter()
            .copied()
            .filter(|&s| rank[s as usize] < r)
            .min()
            .unwrap_or(INF);
        debug_assert!(eve_moves[v] != INF);
    }

    let layers = if rank.iter().any(|&r| r != INF) {
        max_rank as usize + 1
    } else {
        0
    };
    AttractorResult {
        rank,
        eve_moves,
        layers,
        edge_visits,
    }
}

/// Attractor of an explicit vertex set.
pub fn attractor_of<G: GameGraph>(graph: &G, target: &VertexSet) -> AttractorResult {
    attractor(graph, |v| target.contains(v))
}

/// Solves `Reach(target)` with positional strategies for both players.
pub fn solve_reachability(arena: &Arena, target: &VertexSet) -> SolveResult {
    let attr = attractor_of(arena, target);
    let eve_moves: Vec<Option<usize>> = (0..arena.n()).map(|v| attr.eve_move(v)).collect();
    let adam_moves: Vec<Option<usize>> = (0..arena.n())
        .map(|v| match arena.owner(v) {
            Player::Adam if !attr.contains(v) => attr.escape_move(arena, v),
            _ => None,
        })
        .collect();
    let mut eve = FiniteMemoryStrategy::memoryless(arena, Player::Eve, &eve_moves);
    eve.fill_defaults(arena);
    let mut adam = FiniteMemoryStrategy::memoryless(arena, Player::Adam, &adam_moves);
    adam.fill_defaults(arena);

    let mut result = SolveResult::from_eve_region(Method::Reachability, attr.members());
    result.eve_strategy = Some(eve);
    result.adam_strategy = Some(adam);
    result.stats.iterations = attr.layers;
    result
}

/// Adam strategy that, from each start vertex, keeps the play out of the
/// first attractor not containing it. The memory state is the index of that
/// attractor and never changes.
pub(crate) fn avoidance_strategy(arena: &Arena, attractors: &[AttractorResult]) -> FiniteMemoryStrategy {
    let states = attractors.len().max(1);
    let initial: Vec<u32> = (0..arena.n())
        .map(|v| attractors.iter().position(|a| !a.contains(v)).unwrap_or(0) as u32)
        .collect();
    let next: Vec<u32> = (0..states).flat_map(|s| core::iter::repeat_n(s as u32, arena.m())).collect();
    let memory =
        MemoryStructure::table(states, Initial::PerVertex(initial), arena.m(), next).expect("identity update is well formed");
    let mut strategy = FiniteMemoryStrategy::new(Player::Adam, memory, arena.n());
    for v in (0..arena.n()).filter(|&v| arena.owner(v) == Player::Adam) {
        for (s, attr) in attractors.iter().enumerate() {
            if let Some(succ) = attr.escape_move(arena, v).filter(|_| !attr.contains(v)) {
                strategy.set_move(v, s, succ);
            }
        }
    }
    strategy.fill_defaults(arena);
    strategy
}

/// Solves a game in which Adam owns every vertex: Eve wins exactly on the
/// intersection of the attractors of the colors.
pub fn solve_opponent_player(game: &Game) -> Result<SolveResult> {
    let arena = game.arena();
    if let Some(v) = (0..arena.n()).find(|&v| arena.owner(v) == Player::Eve) {
        return Err(Error::NotOpponentPlayer(v));
    }
    let attractors: Vec<AttractorResult> = (0..game.k())
        .map(|i| attractor(arena, |v| game.objective().mask(v) & (1 << i) != 0))
        .collect();
    let eve_region = VertexSet::from_indices(
        arena.n(),
        (0..arena.n()).filter(|&v| attractors.iter().all(|a| a.contains(v))),
    );

    let mut result = SolveResult::from_eve_region(Method::Opponent, eve_region);
    result.eve_strategy = Some(FiniteMemoryStrategy::memoryless(arena, Player::Eve, &[]));
    result.adam_strategy = Some(avoidance_strategy(arena, &attractors));
    result.stats.iterations = attractors.len();
    Ok(result)
}
