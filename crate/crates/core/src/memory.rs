//! Memory structures and finite-memory strategies.
//!
//! A memory structure reads the edges of a play and updates its state on every
//! edge, whoever chose it. A finite-memory strategy pairs a memory structure
//! with a next-move table indexed by (vertex, memory state).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{Arena, ColorMask, Player};

const NONE: u32 = u32::MAX;

/// Initial memory state, either shared or chosen per start vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Initial {
    Fixed(u32),
    PerVertex(Vec<u32>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UpdateRule {
    /// `next[state * edges + edge_id]`.
    Table { edges: usize, next: Vec<u32> },
    /// States are color subsets; entering a vertex adds its colors. Subsets
    /// that are not states of the structure leave the state unchanged.
    Subset {
        vertex_colors: Vec<ColorMask>,
        state_masks: Vec<ColorMask>,
        lookup: Vec<u32>,
    },
    /// The update only observes the color mask of the entered vertex, through
    /// its class index: `next[state * classes + vertex_class[target]]`.
    ColorObs {
        vertex_class: Vec<u32>,
        classes: usize,
        next: Vec<u32>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemoryStructure {
    states: usize,
    initial: Initial,
    rule: UpdateRule,
}

impl MemoryStructure {
    /// The one-state memory of positional strategies.
    pub fn trivial(arena: &Arena) -> MemoryStructure {
        MemoryStructure {
            states: 1,
            initial: Initial::Fixed(0),
            rule: UpdateRule::Table {
                edges: arena.m(),
                next: vec![0; arena.m()],
            },
        }
    }

    pub fn table(states: usize, initial: Initial, edges: usize, next: Vec<u32>) -> Result<MemoryStructure> {
        let mem = MemoryStructure {
            states,
            initial,
            rule: UpdateRule::Table { edges, next },
        };
        mem.check()?;
        Ok(mem)
    }

    pub fn color_obs(
        states: usize,
        initial: Initial,
        vertex_class: Vec<u32>,
        classes: usize,
        next: Vec<u32>,
    ) -> Result<MemoryStructure> {
        let mem = MemoryStructure {
            states,
            initial,
            rule: UpdateRule::ColorObs {
                vertex_class,
                classes,
                next,
            },
        };
        mem.check()?;
        Ok(mem)
    }

    /// Subset memory over the given state masks (state `i` is `state_masks[i]`).
    pub fn subset(
        k: usize,
        vertex_colors: Vec<ColorMask>,
        state_masks: Vec<ColorMask>,
        initial: Initial,
    ) -> Result<MemoryStructure> {
        let mut lookup = vec![NONE; 1usize << k];
        for (s, &mask) in state_masks.iter().enumerate() {
            let slot = lookup
                .get_mut(mask as usize)
                .ok_or_else(|| Error::MalformedStrategy(format!("state mask {mask:#b} exceeds {k} colors")))?;
            *slot = s as u32;
        }
        let mem = MemoryStructure {
            states: state_masks.len(),
            initial,
            rule: UpdateRule::Subset {
                vertex_colors,
                state_masks,
                lookup,
            },
        };
        mem.check()?;
        Ok(mem)
    }

    fn check(&self) -> Result<()> {
        if self.states == 0 {
            return Err(Error::MalformedStrategy("memory needs at least one state".into()));
        }
        let in_range = |s: &u32| (*s as usize) < self.states;
        let initial_ok = match &self.initial {
            Initial::Fixed(s) => in_range(s),
            Initial::PerVertex(v) => v.iter().all(in_range),
        };
        if !initial_ok {
            return Err(Error::MalformedStrategy("initial state out of range".into()));
        }
        let rule_ok = match &self.rule {
            UpdateRule::Table { edges, next } => next.len() == self.states * edges && next.iter().all(in_range),
            UpdateRule::ColorObs {
                vertex_class,
                classes,
                next,
            } => {
                next.len() == self.states * classes
                    && next.iter().all(in_range)
                    && vertex_class.iter().all(|&c| (c as usize) < *classes)
            }
            UpdateRule::Subset { .. } => true,
        };
        if !rule_ok {
            return Err(Error::MalformedStrategy(
                "update table is not total or leaves the state range".into(),
            ));
        }
        Ok(())
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn initial(&self) -> &Initial {
        &self.initial
    }

    pub fn rule(&self) -> &UpdateRule {
        &self.rule
    }

    #[inline]
    pub fn initial_for(&self, v: usize) -> u32 {
        match &self.initial {
            Initial::Fixed(s) => *s,
            Initial::PerVertex(per) => per[v],
        }
    }

    /// Memory update on traversing edge `edge` into `target`.
    #[inline]
    pub fn step(&self, state: u32, edge: usize, target: usize) -> u32 {
        match &self.rule {
            UpdateRule::Table { edges, next } => next[state as usize * edges + edge],
            UpdateRule::Subset {
                vertex_colors,
                state_masks,
                lookup,
            } => {
                let mask = state_masks[state as usize] | vertex_colors[target];
                match lookup[mask as usize] {
                    NONE => state,
                    s => s,
                }
            }
            UpdateRule::ColorObs {
                vertex_class,
                classes,
                next,
            } => next[state as usize * classes + vertex_class[target] as usize],
        }
    }

    /// The color subset a subset-memory state stands for.
    pub fn state_mask(&self, state: u32) -> Option<ColorMask> {
        match &self.rule {
            UpdateRule::Subset { state_masks, .. } => Some(state_masks[state as usize]),
            _ => None,
        }
    }

    /// Keeps only the states flagged in `keep`, renumbered in order. Updates
    /// into a dropped state leave the state unchanged. Returns the new
    /// structure and the old-to-new state map.
    pub fn restrict(&self, keep: &[bool]) -> (MemoryStructure, Vec<Option<u32>>) {
        let mut remap = vec![None; self.states];
        let mut count = 0u32;
        for (s, &k) in keep.iter().enumerate() {
            if k {
                remap[s] = Some(count);
                count += 1;
            }
        }
        if count == 0 {
            remap[0] = Some(0);
            count = 1;
        }
        let kept: Vec<usize> = (0..self.states).filter(|&s| remap[s].is_some()).collect();
        let map_initial = |s: u32| remap[s as usize].unwrap_or(0);
        let initial = match &self.initial {
            Initial::Fixed(s) => Initial::Fixed(map_initial(*s)),
            Initial::PerVertex(per) => Initial::PerVertex(per.iter().map(|&s| map_initial(s)).collect()),
        };
        let remap_table = |next: &Vec<u32>, width: usize| -> Vec<u32> {
            let mut out = Vec::with_capacity(kept.len() * width);
            for &s in &kept {
                let own = remap[s].unwrap();
                for x in 0..width {
                    out.push(remap[next[s * width + x] as usize].unwrap_or(own));
                }
            }
            out
        };
        let rule = match &self.rule {
            UpdateRule::Table { edges, next } => UpdateRule::Table {
                edges: *edges,
                next: remap_table(next, *edges),
            },
            UpdateRule::ColorObs {
                vertex_class,
                classes,
                next,
            } => UpdateRule::ColorObs {
                vertex_class: vertex_class.clone(),
                classes: *classes,
                next: remap_table(next, *classes),
            },
            UpdateRule::Subset {
                vertex_colors,
                state_masks,
                lookup,
            } => {
                let masks: Vec<ColorMask> = kept.iter().map(|&s| state_masks[s]).collect();
                let mut new_lookup = vec![NONE; lookup.len()];
                for (i, &mask) in masks.iter().enumerate() {
                    new_lookup[mask as usize] = i as u32;
                }
                UpdateRule::Subset {
                    vertex_colors: vertex_colors.clone(),
                    state_masks: masks,
                    lookup: new_lookup,
                }
            }
        };
        (
            MemoryStructure {
                states: count as usize,
                initial,
                rule,
            },
            remap,
        )
    }

    /// The update as an explicit `state * m + edge` table over `arena`.
    pub fn to_table(&self, arena: &Arena) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.states * arena.m());
        for s in 0..self.states as u32 {
            for e in 0..arena.m() {
                out.push(self.step(s, e, arena.edge(e).1));
            }
        }
        out
    }
}

/// A strategy given by a memory structure and a next-move table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMemoryStrategy {
    player: Player,
    memory: MemoryStructure,
    n: usize,
    /// `moves[state * n + v]`, `NO_MOVE` where undefined.
    moves: Vec<u32>,
}

const NO_MOVE: u32 = u32::MAX;

impl FiniteMemoryStrategy {
    /// A strategy with no moves yet.
    pub fn new(player: Player, memory: MemoryStructure, n: usize) -> Self {
        let moves = vec![NO_MOVE; n * memory.states()];
        FiniteMemoryStrategy {
            player,
            memory,
            n,
            moves,
        }
    }

    /// A positional strategy; `moves[v]` is the successor chosen at `v`.
    pub fn memoryless(arena: &Arena, player: Player, moves: &[Option<usize>]) -> Self {
        let mut strategy = Self::new(player, MemoryStructure::trivial(arena), arena.n());
        for (v, mv) in moves.iter().enumerate() {
            if let Some(succ) = mv {
                strategy.set_move(v, 0, *succ);
            }
        }
        strategy
    }

    pub fn player(&self) -> Player {
        self.player
    }

    pub fn memory(&self) -> &MemoryStructure {
        &self.memory
    }

    pub fn states(&self) -> usize {
        self.memory.states()
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn set_move(&mut self, v: usize, state: usize, successor: usize) {
        self.moves[state * self.n + v] = successor as u32;
    }

    #[inline]
    pub fn next_move(&self, v: usize, state: u32) -> Option<usize> {
        match self.moves[state as usize * self.n + v] {
            NO_MOVE => None,
            s => Some(s as usize),
        }
    }

    /// `next_move`, failing with [`Error::StrategyPartial`] when undefined.
    #[inline]
    pub fn require_move(&self, v: usize, state: u32) -> Result<usize> {
        self.next_move(v, state).ok_or(Error::StrategyPartial {
            vertex: v,
            state: state as usize,
        })
    }

    /// Fills every undefined move at the player's vertices with the first successor.
    pub fn fill_defaults(&mut self, arena: &Arena) {
        let n = self.n;
        for (i, mv) in self.moves.iter_mut().enumerate() {
            let v = i % n;
            if *mv == NO_MOVE && arena.owner(v) == self.player {
                *mv = arena.successors(v)[0];
            }
        }
    }

    /// Every prescribed move is an arena edge out of one of the player's vertices.
    pub fn check_moves(&self, arena: &Arena) -> Result<()> {
        if self.n != arena.n() {
            return Err(Error::MalformedStrategy(format!(
                "strategy has {} vertices, arena has {}",
                self.n,
                arena.n()
            )));
        }
        for v in 0..self.n {
            for s in 0..self.states() as u32 {
                if let Some(succ) = self.next_move(v, s) {
                    if arena.owner(v) != self.player {
                        return Err(Error::MalformedStrategy(format!("move defined at opponent vertex {v}")));
                    }
                    if !arena.has_edge(v, succ) {
                        return Err(Error::MalformedStrategy(format!("move {v} -> {succ} is not an edge")));
                    }
                }
            }
        }
        Ok(())
    }

    /// All defined moves as `(vertex, state, successor)`, by state, then vertex.
    pub fn moves(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let n = self.n;
        self.moves
            .iter()
            .enumerate()
            .filter(|&(_, &mv)| mv != NO_MOVE)
            .map(move |(i, &succ)| (i % n, i / n, succ as usize))
    }
}
