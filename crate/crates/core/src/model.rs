//! Arenas, objectives, games and plays.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::graph::GameGraph;

/// Bit `i` set means color `i` (0-based) is present.
pub type ColorMask = u64;

/// Objectives are stored as 64-bit masks, which bounds the number of colors.
pub const MAX_COLORS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Player {
    Eve,
    Adam,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Eve => Player::Adam,
            Player::Adam => Player::Eve,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Eve => "eve",
            Player::Adam => "adam",
        })
    }
}

/// Mask with the lowest `k` bits set.
pub fn full_mask(k: usize) -> ColorMask {
    if k >= 64 {
        ColorMask::MAX
    } else {
        (1 << k) - 1
    }
}

/// A set of vertex indices over a fixed universe `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    words: Vec<u64>,
    universe: usize,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet {
            words: vec![0; universe.div_ceil(64)],
            universe,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = Self::empty(universe);
        for v in 0..universe {
            set.insert(v);
        }
        set
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, indices: I) -> Self {
        let mut set = Self::empty(universe);
        for v in indices {
            set.insert(v);
        }
        set
    }

    pub fn from_flags(flags: &[bool]) -> Self {
        Self::from_indices(flags.len(), flags.iter().enumerate().filter(|(_, &b)| b).map(|(v, _)| v))
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.universe && self.words[v / 64] & (1 << (v % 64)) != 0
    }

    #[inline]
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(v < self.universe, "vertex {v} outside universe {}", self.universe);
        let word = &mut self.words[v / 64];
        let bit = 1 << (v % 64);
        let fresh = *word & bit == 0;
        *word |= bit;
        fresh
    }

    pub fn remove(&mut self, v: usize) {
        if v < self.universe {
            self.words[v / 64] &= !(1 << (v % 64));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe).filter(move |&v| self.contains(v))
    }

    pub fn complement(&self) -> Self {
        Self::from_indices(self.universe, (0..self.universe).filter(|&v| !self.contains(v)))
    }

    pub fn intersection(&self, other: &Self) -> Self {
        assert_eq!(self.universe, other.universe);
        VertexSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
            universe: self.universe,
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        assert_eq!(self.universe, other.universe);
        VertexSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
            universe: self.universe,
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// One reason an arena description is not a legal arena.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DeadEnd(usize),
    DuplicateEdge(usize, usize),
    EndpointOutOfRange(usize, usize),
    DuplicateName(usize),
    NameCountMismatch { names: usize, owners: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DeadEnd(v) => write!(f, "dead end at vertex {v}"),
            Violation::DuplicateEdge(u, v) => write!(f, "duplicate edge {u} -> {v}"),
            Violation::EndpointOutOfRange(u, v) => write!(f, "edge {u} -> {v} has an endpoint out of range"),
            Violation::DuplicateName(v) => write!(f, "vertex {v} reuses an earlier name"),
            Violation::NameCountMismatch { names, owners } => {
                write!(f, "{names} names given for {owners} vertices")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks a raw arena description: endpoints in range, no duplicate edges and
/// no dead ends.
pub fn validate_arena(owners: &[Player], edges: &[(usize, usize)]) -> ValidationReport {
    let n = owners.len();
    let mut violations = Vec::new();
    let mut out_degree = vec![0usize; n];
    let mut seen = Vec::with_capacity(edges.len());
    for &(u, v) in edges {
        if u >= n || v >= n {
            violations.push(Violation::EndpointOutOfRange(u, v));
            continue;
        }
        seen.push((u, v));
        out_degree[u] += 1;
    }
    seen.sort_unstable();
    for pair in seen.windows(2) {
        if pair[0] == pair[1] {
            violations.push(Violation::DuplicateEdge(pair[0].0, pair[0].1));
        }
    }
    violations.dedup();
    violations.extend(
        out_degree
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == 0)
            .map(|(v, _)| Violation::DeadEnd(v)),
    );
    ValidationReport { violations }
}

/// A finite graph whose vertices are split between Eve and Adam.
///
/// Edges are stored grouped by source and sorted by target; the position of an
/// edge in that order is its edge id.
#[derive(Clone, PartialEq, Eq)]
pub struct Arena {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    owners: Vec<Player>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    sources: Vec<u32>,
    pred_offsets: Vec<usize>,
    pred_sources: Vec<u32>,
}

impl Arena {
    pub fn new(names: Vec<String>, owners: Vec<Player>, edges: Vec<(usize, usize)>) -> Result<Arena> {
        let mut report = validate_arena(&owners, &edges);
        if names.len() != owners.len() {
            report.violations.push(Violation::NameCountMismatch {
                names: names.len(),
                owners: owners.len(),
            });
        }
        let mut index = BTreeMap::new();
        for (v, name) in names.iter().enumerate() {
            if index.insert(name.clone(), v).is_some() {
                report.violations.push(Violation::DuplicateName(v));
            }
        }
        if !report.is_ok() {
            return Err(Error::InvalidArena(report));
        }

        let n = owners.len();
        let mut edges = edges;
        edges.sort_unstable();
        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in &edges {
            offsets[u + 1] += 1;
        }
        for v in 0..n {
            offsets[v + 1] += offsets[v];
        }
        let targets: Vec<u32> = edges.iter().map(|&(_, v)| v as u32).collect();
        let sources: Vec<u32> = edges.iter().map(|&(u, _)| u as u32).collect();

        let mut pred_offsets = vec![0usize; n + 1];
        for &(_, v) in &edges {
            pred_offsets[v + 1] += 1;
        }
        for v in 0..n {
            pred_offsets[v + 1] += pred_offsets[v];
        }
        let mut fill = pred_offsets.clone();
        let mut pred_sources = vec![0u32; edges.len()];
        for &(u, v) in &edges {
            pred_sources[fill[v]] = u as u32;
            fill[v] += 1;
        }

        Ok(Arena {
            names,
            index,
            owners,
            offsets,
            targets,
            sources,
            pred_offsets,
            pred_sources,
        })
    }

    /// Builds an arena whose vertex names are the decimal indices.
    pub fn unnamed(owners: Vec<Player>, edges: Vec<(usize, usize)>) -> Result<Arena> {
        let names = (0..owners.len()).map(|v| v.to_string()).collect();
        Self::new(names, owners, edges)
    }

    pub fn n(&self) -> usize {
        self.owners.len()
    }

    pub fn m(&self) -> usize {
        self.targets.len()
    }

    pub fn owner(&self, v: usize) -> Player {
        self.owners[v]
    }

    pub fn owners(&self) -> &[Player] {
        &self.owners
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    #[inline]
    pub fn successors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn predecessors(&self, v: usize) -> &[u32] {
        &self.pred_sources[self.pred_offsets[v]..self.pred_offsets[v + 1]]
    }

    /// Edge ids leaving `v`, paired with their targets.
    #[inline]
    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        (self.offsets[v]..self.offsets[v + 1]).map(move |e| (e, self.targets[e] as usize))
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        let succ = self.successors(u);
        succ.binary_search(&(v as u32)).ok().map(|i| self.offsets[u] + i)
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        (self.sources[e] as usize, self.targets[e] as usize)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.sources
            .iter()
            .zip(&self.targets)
            .map(|(&u, &v)| (u as usize, v as usize))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_id(u, v).is_some()
    }

    /// Re-checks the invariants of an already-built arena.
    pub fn validate(&self) -> ValidationReport {
        let edges: Vec<_> = self.edges().collect();
        validate_arena(&self.owners, &edges)
    }

    pub fn all_owned_by(&self, player: Player) -> bool {
        self.owners.iter().all(|&p| p == player)
    }
}

impl fmt::Debug for Arena {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Arena")
            .field("n", &self.n())
            .field("m", &self.m())
            .field("owners", &self.owners)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl GameGraph for Arena {
    fn vertex_count(&self) -> usize {
        self.n()
    }

    fn owner(&self, v: usize) -> Player {
        self.owners[v]
    }

    fn successors(&self, v: usize) -> &[u32] {
        Arena::successors(self, v)
    }

    fn predecessors(&self, v: usize) -> &[u32] {
        Arena::predecessors(self, v)
    }
}

/// The colors `F_1..F_k` of a generalized reachability objective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Objective {
    color_sets: Vec<Vec<usize>>,
    masks: Vec<ColorMask>,
}

impl Objective {
    /// `color_sets[i]` lists the vertices of color `i` (0-based). Sets are
    /// sorted and deduplicated; they may overlap and may be empty.
    pub fn new(n: usize, color_sets: Vec<Vec<usize>>) -> Result<Objective> {
        if color_sets.len() > MAX_COLORS {
            return Err(Error::InvalidObjective(format!(
                "{} colors, at most {MAX_COLORS} are supported",
                color_sets.len()
            )));
        }
        let mut masks = vec![0; n];
        let mut sets = Vec::with_capacity(color_sets.len());
        for (i, mut set) in color_sets.into_iter().enumerate() {
            set.sort_unstable();
            set.dedup();
            if let Some(&v) = set.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidObjective(format!(
                    "color {} contains vertex {v} out of range",
                    i + 1
                )));
            }
            for &v in &set {
                masks[v] |= 1 << i;
            }
            sets.push(set);
        }
        Ok(Objective { color_sets: sets, masks })
    }

    /// Builds the objective from per-vertex color masks.
    pub fn from_masks(k: usize, masks: Vec<ColorMask>) -> Result<Objective> {
        if k > MAX_COLORS {
            return Err(Error::InvalidObjective(format!(
                "{k} colors, at most {MAX_COLORS} are supported"
            )));
        }
        let mut sets = vec![Vec::new(); k];
        for (v, &mask) in masks.iter().enumerate() {
            if mask & !full_mask(k) != 0 {
                return Err(Error::InvalidObjective(format!("vertex {v} has a color above {k}")));
            }
            for (i, set) in sets.iter_mut().enumerate() {
                if mask & (1 << i) != 0 {
                    set.push(v);
                }
            }
        }
        Ok(Objective { color_sets: sets, masks })
    }

    pub fn k(&self) -> usize {
        self.color_sets.len()
    }

    pub fn color_set(&self, i: usize) -> &[usize] {
        &self.color_sets[i]
    }

    pub fn color_sets(&self) -> &[Vec<usize>] {
        &self.color_sets
    }

    #[inline]
    pub fn mask(&self, v: usize) -> ColorMask {
        self.masks[v]
    }

    pub fn masks(&self) -> &[ColorMask] {
        &self.masks
    }

    pub fn full_mask(&self) -> ColorMask {
        full_mask(self.k())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    arena: Arena,
    objective: Objective,
    init: Option<usize>,
}

impl Game {
    pub fn new(arena: Arena, objective: Objective, init: Option<usize>) -> Result<Game> {
        if objective.masks().len() != arena.n() {
            return Err(Error::InvalidObjective(format!(
                "objective covers {} vertices, arena has {}",
                objective.masks().len(),
                arena.n()
            )));
        }
        if let Some(v) = init {
            if v >= arena.n() {
                return Err(Error::InvalidObjective(format!("initial vertex {v} out of range")));
            }
        }
        Ok(Game { arena, objective, init })
    }

    pub fn arena(&self) -> &Arena {
        &self.arena
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn init(&self) -> Option<usize> {
        self.init
    }

    pub fn k(&self) -> usize {
        self.objective.k()
    }

    pub fn n(&self) -> usize {
        self.arena.n()
    }

    pub fn with_init(mut self, init: Option<usize>) -> Result<Game> {
        if matches!(init, Some(v) if v >= self.n()) {
            return Err(Error::InvalidObjective(String::from("initial vertex out of range")));
        }
        self.init = init;
        Ok(self)
    }

    pub fn require_init(&self) -> Result<usize> {
        self.init.ok_or(Error::NoInit)
    }

    /// Replaces the owner of every vertex, keeping graph and colors.
    pub fn with_owners(&self, owners: Vec<Player>) -> Result<Game> {
        let arena = Arena::new(self.arena.names.clone(), owners, self.arena.edges().collect())?;
        Game::new(arena, self.objective.clone(), self.init)
    }
}

/// A finite prefix of a play together with the colors seen so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Play {
    vertices: Vec<usize>,
    visited: Vec<ColorMask>,
}

impl Play {
    pub fn new(game: &Game, vertices: Vec<usize>) -> Result<Play> {
        let arena = game.arena();
        if let Some(&v) = vertices.iter().find(|&&v| v >= arena.n()) {
            return Err(Error::InvalidObjective(format!("play visits vertex {v} out of range")));
        }
        if let Some(w) = vertices.windows(2).find(|w| !arena.has_edge(w[0], w[1])) {
            return Err(Error::InvalidObjective(format!(
                "play uses missing edge {} -> {}",
                w[0], w[1]
            )));
        }
        let mut acc = 0;
        let visited = vertices
            .iter()
            .map(|&v| {
                acc |= game.objective().mask(v);
                acc
            })
            .collect();
        Ok(Play { vertices, visited })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Colors visited up to and including each position.
    pub fn visited(&self) -> &[ColorMask] {
        &self.visited
    }

    pub fn final_mask(&self) -> ColorMask {
        self.visited.last().copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators as fixtures;

    #[test]
    fn single_self_loop_is_valid() {
        assert!(validate_arena(&[Player::Eve], &[(0, 0)]).is_ok());
    }

    #[test]
    fn dead_end_is_reported() {
        let report = validate_arena(&[Player::Eve], &[]);
        assert_eq!(report.violations, vec![Violation::DeadEnd(0)]);
        assert_eq!(report.to_string(), "dead end at vertex 0");
    }

    #[test]
    fn duplicate_and_out_of_range_edges() {
        let report = validate_arena(&[Player::Eve, Player::Adam], &[(0, 1), (0, 1), (1, 0), (1, 7)]);
        assert!(report.violations.contains(&Violation::DuplicateEdge(0, 1)));
        assert!(report.violations.contains(&Violation::EndpointOutOfRange(1, 7)));
        assert!(Arena::unnamed(vec![Player::Eve], vec![]).is_err());
    }

    #[test]
    fn fig1_is_valid() {
        let game = fixtures::fig1();
        assert!(game.arena().validate().is_ok());
        assert_eq!(game.n(), 4);
        assert_eq!(game.arena().m(), 8);
        assert_eq!(game.k(), 2);
    }

    #[test]
    fn masks_agree_with_sets() {
        let game = fixtures::fig1();
        let obj = game.objective();
        for v in 0..game.n() {
            let expected: ColorMask = (0..obj.k()).filter(|&i| obj.color_set(i).contains(&v)).map(|i| 1 << i).sum();
            assert_eq!(obj.mask(v), expected);
        }
        let rebuilt = Objective::from_masks(obj.k(), obj.masks().to_vec()).unwrap();
        assert_eq!(&rebuilt, obj);
    }

    #[test]
    fn objective_range_check() {
        assert!(Objective::new(2, vec![vec![0, 2]]).is_err());
        let empty = Objective::new(3, vec![vec![], vec![1, 1]]).unwrap();
        assert_eq!(empty.color_set(1), &[1]);
        assert_eq!(empty.full_mask(), 0b11);
    }

    #[test]
    fn play_tracks_monotone_masks() {
        let game = fixtures::fig1();
        let c = game.arena().index_of("c").unwrap();
        let b = game.arena().index_of("b").unwrap();
        let d = game.arena().index_of("d").unwrap();
        let play = Play::new(&game, vec![c, b, d, d]).unwrap();
        assert_eq!(play.visited(), &[0, 0b01, 0b11, 0b11]);
        assert!(Play::new(&game, vec![d, c]).is_err());
    }

    #[test]
    fn vertex_set_ops() {
        let a = VertexSet::from_indices(70, [1, 65]);
        let b = VertexSet::from_indices(70, [65, 3]);
        assert_eq!(a.intersection(&b).iter().collect::<Vec<_>>(), vec![65]);
        assert_eq!(a.union(&b).len(), 3);
        assert_eq!(a.complement().len(), 68);
        assert!(!a.is_subset(&b));
    }
}
