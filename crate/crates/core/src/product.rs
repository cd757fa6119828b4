//! The subset memory structure and the synchronized product.
//!
//! Tracking the set of colors seen so far turns a generalized reachability game
//! into a plain reachability game on the product arena, whose target is every
//! product vertex carrying the full color set. Positional strategies of the
//! product lift back to finite-memory strategies of the original game.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::attractor::{attractor, AttractorResult};
use crate::error::{Error, Result};
use crate::graph::{Csr, GameGraph};
use crate::limits::Limits;
use crate::memory::{FiniteMemoryStrategy, Initial, MemoryStructure};
use crate::model::{Arena, ColorMask, Game, Objective, Player, VertexSet};
use crate::result::{Method, SolveResult};

/// Products up to this many (vertex, state) slots use a dense index.
const DENSE_INDEX_LIMIT: usize = 1 << 26;

/// The subset memory for a start at `v0`: states are the `2^k` color subsets,
/// the initial state is the colors of `v0`, and entering a vertex adds its colors.
pub fn subset_memory(objective: &Objective, v0: usize, limits: &Limits) -> Result<MemoryStructure> {
    limits.check_k(objective.k())?;
    subset_memory_with(objective, Initial::Fixed(objective.mask(v0) as u32))
}

/// The subset memory started at every vertex with that vertex's colors.
pub fn subset_memory_all(objective: &Objective, limits: &Limits) -> Result<MemoryStructure> {
    limits.check_k(objective.k())?;
    let initial = objective.masks().iter().map(|&m| m as u32).collect();
    subset_memory_with(objective, Initial::PerVertex(initial))
}

fn subset_memory_with(objective: &Objective, initial: Initial) -> Result<MemoryStructure> {
    let k = objective.k();
    let masks: Vec<ColorMask> = (0..1u64 << k).collect();
    MemoryStructure::subset(k, objective.masks().to_vec(), masks, initial)
}

enum ProductIndex {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

/// The arena `A × M`, restricted to the part reachable from its start pairs.
pub struct ProductArena<'a> {
    arena: &'a Arena,
    states: usize,
    pairs: Vec<(u32, u32)>,
    index: ProductIndex,
    csr: Csr,
    complete: bool,
}

impl<'a> ProductArena<'a> {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.csr.edge_count()
    }

    pub fn arena(&self) -> &'a Arena {
        self.arena
    }

    /// `(vertex, memory state)` of a product vertex.
    #[inline]
    pub fn pair(&self, p: usize) -> (usize, u32) {
        let (v, s) = self.pairs[p];
        (v as usize, s)
    }

    pub fn index_of(&self, v: usize, state: u32) -> Option<usize> {
        let key = v * self.states + state as usize;
        let found = match &self.index {
            ProductIndex::Dense(slots) => slots[key],
            ProductIndex::Sparse(map) => *map.get(&(key as u64))?,
        };
        (found != u32::MAX).then_some(found as usize)
    }

    /// True when every `(vertex, state)` pair is materialized.
    pub fn is_complete(&self) -> bool {
        self.complete
    }
}

impl GameGraph for ProductArena<'_> {
    fn vertex_count(&self) -> usize {
        self.pairs.len()
    }

    fn owner(&self, p: usize) -> Player {
        self.arena.owner(self.pairs[p].0 as usize)
    }

    fn successors(&self, p: usize) -> &[u32] {
        self.csr.successors(p)
    }

    fn predecessors(&self, p: usize) -> &[u32] {
        self.csr.predecessors(p)
    }
}

/// Builds `arena × memory` by forward exploration from `starts`, or the whole
/// product (indexed `vertex * states + state`) when `starts` is `None`.
pub fn build_product<'a>(arena: &'a Arena, memory: &MemoryStructure, starts: Option<&[(usize, u32)]>) -> ProductArena<'a> {
    let states = memory.states();
    let slots = arena.n() * states;
    let mut index = if slots <= DENSE_INDEX_LIMIT {
        ProductIndex::Dense(vec![u32::MAX; slots])
    } else {
        ProductIndex::Sparse(HashMap::new())
    };
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    let mut intern = |v: usize, s: u32, pairs: &mut Vec<(u32, u32)>| -> u32 {
        let key = v * states + s as usize;
        let slot = match &mut index {
            ProductIndex::Dense(d) => &mut d[key],
            ProductIndex::Sparse(m) => m.entry(key as u64).or_insert(u32::MAX),
        };
        if *slot == u32::MAX {
            *slot = pairs.len() as u32;
            pairs.push((v as u32, s));
        }
        *slot
    };

    let complete = starts.is_none();
    match starts {
        Some(starts) => {
            for &(v, s) in starts {
                intern(v, s, &mut pairs);
            }
        }
        None => {
            for v in 0..arena.n() {
                for s in 0..states as u32 {
                    intern(v, s, &mut pairs);
                }
            }
        }
    }

    let mut offsets = vec![0usize];
    let mut targets: Vec<u32> = Vec::new();
    let mut next = 0;
    while next < pairs.len() {
        let (v, s) = pairs[next];
        for (e, t) in arena.out_edges(v as usize) {
            let s2 = memory.step(s, e, t);
            targets.push(intern(t, s2, &mut pairs));
        }
        offsets.push(targets.len());
        next += 1;
    }

    ProductArena {
        arena,
        states,
        pairs,
        index,
        csr: Csr::from_forward(offsets, targets),
        complete,
    }
}

/// Lifts a positional product strategy for `player` to a finite-memory
/// strategy on the arena. Only memory states that occur in the product and
/// are not `pruned` are kept; missing moves default to the first successor.
pub fn lift_strategy(
    product: &ProductArena<'_>,
    memory: &MemoryStructure,
    player: Player,
    positional: impl Fn(usize) -> Option<usize>,
    pruned: impl Fn(u32) -> bool,
) -> FiniteMemoryStrategy {
    let arena = product.arena();
    let mut keep = vec![false; memory.states()];
    for p in 0..product.len() {
        let (_, s) = product.pair(p);
        keep[s as usize] = true;
    }
    for (s, k) in keep.iter_mut().enumerate() {
        *k = *k && !pruned(s as u32);
    }
    let (lifted_memory, remap) = memory.restrict(&keep);
    let mut strategy = FiniteMemoryStrategy::new(player, lifted_memory, arena.n());
    for p in 0..product.len() {
        let (v, s) = product.pair(p);
        if arena.owner(v) != player {
            continue;
        }
        if let (Some(state), Some(q)) = (remap[s as usize].filter(|_| keep[s as usize]), positional(p)) {
            strategy.set_move(v, state as usize, product.pair(q).0);
        }
    }
    strategy.fill_defaults(arena);
    strategy
}

/// Which product vertices to materialize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductScope {
    /// Everything reachable from `(v, colors(v))` for every vertex `v`.
    Reachable,
    /// All `n * 2^k` pairs.
    Complete,
}

/// The solved product game.
pub struct ProductSolution<'a> {
    pub memory: MemoryStructure,
    pub product: ProductArena<'a>,
    /// Eve's attractor of the full-color product vertices.
    pub attractor: AttractorResult,
    full: ColorMask,
}

impl ProductSolution<'_> {
    /// Winner of the product from `(v, state)`, if that pair was materialized.
    pub fn winner(&self, v: usize, state: u32) -> Option<Player> {
        let p = self.product.index_of(v, state)?;
        Some(if self.attractor.contains(p) {
            Player::Eve
        } else {
            Player::Adam
        })
    }

    /// Adam's winning product vertices as `(vertex, color subset)`.
    pub fn adam_region(&self) -> impl Iterator<Item = (usize, ColorMask)> + '_ {
        (0..self.product.len()).filter(|&p| !self.attractor.contains(p)).map(|p| {
            let (v, s) = self.product.pair(p);
            (v, s as ColorMask)
        })
    }

    pub fn full_mask(&self) -> ColorMask {
        self.full
    }
}

pub fn solve_product<'a>(game: &'a Game, scope: ProductScope, limits: &Limits) -> Result<ProductSolution<'a>> {
    let objective = game.objective();
    let memory = subset_memory_all(objective, limits)?;
    let product = match scope {
        ProductScope::Complete => build_product(game.arena(), &memory, None),
        ProductScope::Reachable => {
            let starts: Vec<(usize, u32)> = (0..game.n()).map(|v| (v, objective.mask(v) as u32)).collect();
            build_product(game.arena(), &memory, Some(&starts))
        }
    };
    let full = objective.full_mask();
    let attractor = attractor(&product, |p| product.pair(p).1 as ColorMask == full);
    Ok(ProductSolution {
        memory,
        product,
        attractor,
        full,
    })
}

/// Products with more `(vertex, color subset)` slots than this are solved on
/// an explicit sparse product instead of level-wise bit matrices.
const LEVEL_SLOTS_LIMIT: usize = 1 << 28;

/// One bit per `(vertex, color subset)`, stored row by row.
struct BitRows {
    words: usize,
    bits: Vec<u64>,
}

impl BitRows {
    fn new(rows: usize, n: usize) -> Self {
        let words = n.div_ceil(64);
        BitRows {
            words,
            bits: vec![0; rows * words],
        }
    }

    #[inline]
    fn get(&self, row: usize, v: usize) -> bool {
        self.bits[row * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    /// Sets the bit; true if it was clear.
    #[inline]
    fn set(&mut self, row: usize, v: usize) -> bool {
        let w = &mut self.bits[row * self.words + v / 64];
        let fresh = *w >> (v % 64) & 1 == 0;
        *w |= 1 << (v % 64);
        fresh
    }

    fn ones(&self, row: usize, out: &mut Vec<u32>) {
        out.clear();
        for (i, &w) in self.bits[row * self.words..(row + 1) * self.words].iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push((i * 64) as u32 + w.trailing_zeros());
                w &= w - 1;
            }
        }
    }
}

/// Solves the game from every vertex on the subset product.
///
/// Colors seen only accumulate, so a product vertex `(v, S)` only leads to
/// subsets `S' ⊇ S`. The product is therefore solved one color subset at a
/// time, from the full set down: within a level it is an ordinary attractor
/// on the arena, where edges into a larger subset are already decided. Only
/// pairs reachable from some `(v, colors(v))` are visited, and every level
/// costs `O(n + m)`.
///
/// Eve's strategy moves to an already won larger subset or closer to one
/// within the level; the full-color state is pruned. Adam's strategy stays
/// among the pairs Eve does not win.
pub fn solve_fpt(game: &Game, limits: &Limits) -> Result<SolveResult> {
    let k = game.k();
    limits.check_k(k)?;
    let n = game.n();
    let levels = 1usize << k;
    if n.saturating_mul(levels) > LEVEL_SLOTS_LIMIT {
        return solve_fpt_explicit(game, limits);
    }
    let arena = game.arena();
    let objective = game.objective();
    let colors: Vec<usize> = objective.masks().iter().map(|&m| m as usize).collect();
    let full = objective.full_mask() as usize;

    let mut reached = BitRows::new(levels, n);
    for (v, &c) in colors.iter().enumerate() {
        reached.set(c, v);
    }
    let mut live = vec![false; levels];
    let mut level: Vec<u32> = Vec::new();
    let (mut pairs, mut edges) = (0, 0);
    for (s, live) in live.iter_mut().enumerate() {
        reached.ones(s, &mut level);
        let mut i = 0;
        while i < level.len() {
            let v = level[i] as usize;
            i += 1;
            let succ = arena.successors(v);
            edges += succ.len();
            for &t in succ {
                let s2 = s | colors[t as usize];
                if reached.set(s2, t as usize) && s2 == s {
                    level.push(t);
                }
            }
        }
        pairs += level.len();
        *live = !level.is_empty();
    }

    let keep: Vec<bool> = (0..levels).map(|s| live[s] && s != full).collect();
    let (memory, remap) = subset_memory_all(objective, limits)?.restrict(&keep);
    let mut eve = FiniteMemoryStrategy::new(Player::Eve, memory.clone(), n);
    let mut adam = FiniteMemoryStrategy::new(Player::Adam, memory, n);

    let mut won = BitRows::new(levels, n);
    let mut remaining = vec![0u32; n];
    let mut frontier: Vec<u32> = Vec::new();
    for s in (0..levels).rev().filter(|&s| live[s]) {
        reached.ones(s, &mut level);
        if s == full {
            for &v in &level {
                won.set(s, v as usize);
            }
            continue;
        }
        let state = remap[s].expect("live levels are kept") as usize;
        let exit_won = |won: &BitRows, t: u32| {
            let s2 = s | colors[t as usize];
            s2 != s && won.get(s2, t as usize)
        };
        frontier.clear();
        for &v in &level {
            let v = v as usize;
            let succ = arena.successors(v);
            let seed = match arena.owner(v) {
                Player::Eve => match succ.iter().find(|&&t| exit_won(&won, t)) {
                    Some(&t) => {
                        eve.set_move(v, state, t as usize);
                        true
                    }
                    None => false,
                },
                Player::Adam => {
                    remaining[v] = succ.iter().filter(|&&t| !exit_won(&won, t)).count() as u32;
                    remaining[v] == 0
                }
            };
            if seed {
                won.set(s, v);
                frontier.push(v as u32);
            }
        }
        let mut head = 0;
        while head < frontier.len() {
            let u = frontier[head] as usize;
            head += 1;
            if colors[u] & !s != 0 {
                // Entering u leaves this level.
                continue;
            }
            for &p in arena.predecessors(u) {
                let p = p as usize;
                if !reached.get(s, p) || won.get(s, p) {
                    continue;
                }
                let admit = match arena.owner(p) {
                    Player::Eve => {
                        eve.set_move(p, state, u);
                        true
                    }
                    Player::Adam => {
                        remaining[p] -= 1;
                        remaining[p] == 0
                    }
                };
                if admit {
                    won.set(s, p);
                    frontier.push(p as u32);
                }
            }
        }
        for &v in &level {
            let v = v as usize;
            if arena.owner(v) == Player::Adam && !won.get(s, v) {
                let t = arena
                    .successors(v)
                    .iter()
                    .find(|&&t| !won.get(s | colors[t as usize], t as usize));
                adam.set_move(v, state, *t.expect("a losing Adam pair has a losing successor") as usize);
            }
        }
    }
    eve.fill_defaults(arena);
    adam.fill_defaults(arena);

    let eve_region = VertexSet::from_indices(n, (0..n).filter(|&v| won.get(colors[v], v)));
    let mut result = SolveResult::from_eve_region(Method::Fpt, eve_region);
    result.eve_strategy = Some(eve);
    result.adam_strategy = Some(adam);
    result.stats.product_vertices = pairs;
    result.stats.product_edges = edges;
    result.stats.iterations = live.iter().filter(|&&l| l).count();
    Ok(result)
}

/// [`solve_fpt`] on an explicitly built product arena. Used for products too
/// large for the level-wise bit matrices, and as an independent cross-check.
pub fn solve_fpt_explicit(game: &Game, limits: &Limits) -> Result<SolveResult> {
    let solution = solve_product(game, ProductScope::Reachable, limits)?;
    let ProductSolution {
        memory,
        product,
        attractor: attr,
        full,
    } = &solution;
    let objective = game.objective();
    let eve_region = VertexSet::from_indices(
        game.n(),
        (0..game.n()).filter(|&v| solution.winner(v, objective.mask(v) as u32) == Some(Player::Eve)),
    );

    let is_full = |s: u32| s as ColorMask == *full;
    let eve = lift_strategy(product, memory, Player::Eve, |p| attr.eve_move(p), is_full);
    let adam = lift_strategy(
        product,
        memory,
        Player::Adam,
        |p| {
            if attr.contains(p) {
                None
            } else {
                attr.escape_move(product, p)
            }
        },
        is_full,
    );

    let mut result = SolveResult::from_eve_region(Method::Fpt, eve_region);
    result.eve_strategy = Some(eve);
    result.adam_strategy = Some(adam);
    result.stats.product_vertices = product.len();
    result.stats.product_edges = product.edge_count();
    result.stats.iterations = attr.layers;
    Ok(result)
}

/// Per vertex, the inclusion-maximal color subsets from which Adam wins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntichainTable {
    entries: Vec<Vec<ColorMask>>,
}

impl AntichainTable {
    /// Maximal subsets at `v`, sorted as integers.
    pub fn entries(&self, v: usize) -> &[ColorMask] {
        &self.entries[v]
    }

    /// Largest antichain over all vertices.
    pub fn width(&self) -> usize {
        self.entries.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Index of the numerically smallest maximal subset containing `mask`.
    pub fn superset_index(&self, v: usize, mask: ColorMask) -> Option<usize> {
        self.entries[v].iter().position(|&s| s & mask == mask)
    }
}

/// Builds the antichain table of Adam's product region. The region must be
/// closed under taking subsets of the color coordinate.
pub fn antichain_table(n: usize, k: usize, region: impl IntoIterator<Item = (usize, ColorMask)>) -> Result<AntichainTable> {
    let mut sets: Vec<Vec<ColorMask>> = vec![Vec::new(); n];
    for (v, mask) in region {
        sets[v].push(mask);
    }
    for list in &mut sets {
        list.sort_unstable();
        list.dedup();
    }
    let mut entries = Vec::with_capacity(n);
    for (v, list) in sets.iter().enumerate() {
        let has = |m: ColorMask| list.binary_search(&m).is_ok();
        for &mask in list {
            let mut bits = mask;
            while bits != 0 {
                let bit = bits & bits.wrapping_neg();
                bits ^= bit;
                if !has(mask ^ bit) {
                    return Err(Error::NotDownwardClosed { vertex: v, mask });
                }
            }
        }
        let maximal: Vec<ColorMask> = list
            .iter()
            .copied()
            .filter(|&mask| (0..k).all(|i| mask & (1 << i) != 0 || !has(mask | (1 << i))))
            .collect();
        entries.push(maximal);
    }
    Ok(AntichainTable { entries })
}

/// Compresses Adam's product strategy to one memory state per antichain
/// entry. Needs a complete product; returns `None` when Adam wins nowhere.
pub fn compress_adam(game: &Game, solution: &ProductSolution<'_>) -> Result<Option<FiniteMemoryStrategy>> {
    if !solution.product.is_complete() {
        return Err(Error::IncompleteProduct);
    }
    let arena = game.arena();
    let objective = game.objective();
    let table = antichain_table(arena.n(), game.k(), solution.adam_region())?;
    let adam_wins_somewhere = (0..arena.n()).any(|v| table.superset_index(v, objective.mask(v)).is_some());
    if !adam_wins_somewhere {
        return Ok(None);
    }
    let states = table.width().max(1);
    let initial: Vec<u32> = (0..arena.n())
        .map(|v| table.superset_index(v, objective.mask(v)).unwrap_or(0) as u32)
        .collect();

    let mut next = vec![0u32; states * arena.m()];
    for e in 0..arena.m() {
        let (u, t) = arena.edge(e);
        for (i, &s) in table.entries(u).iter().enumerate() {
            if let Some(j) = table.superset_index(t, s | objective.mask(t)) {
                next[i * arena.m() + e] = j as u32;
            }
        }
    }
    let memory = MemoryStructure::table(states, Initial::PerVertex(initial), arena.m(), next)?;
    let mut strategy = FiniteMemoryStrategy::new(Player::Adam, memory, arena.n());
    for v in (0..arena.n()).filter(|&v| arena.owner(v) == Player::Adam) {
        for (i, &s) in table.entries(v).iter().enumerate() {
            let stay = arena
                .successors(v)
                .iter()
                .map(|&t| t as usize)
                .find(|&t| table.superset_index(t, s | objective.mask(t)).is_some());
            if let Some(t) = stay {
                strategy.set_move(v, i, t);
            }
        }
    }
    strategy.fill_defaults(arena);
    Ok(Some(strategy))
}

/// Binomial coefficient `C(k, k/2)`, the width bound for Adam's antichains.
pub fn central_binomial(k: usize) -> usize {
    let half = k / 2;
    let mut c: usize = 1;
    for i in 0..half {
        c = c * (k - i) / (i + 1);
    }
    c
}

/// Product states reached by forward search, for tests and diagnostics.
pub fn reachable_pairs(arena: &Arena, memory: &MemoryStructure, start: usize) -> Vec<(usize, u32)> {
    let mut seen = hashbrown::HashSet::new();
    let mut queue = VecDeque::new();
    let s0 = memory.initial_for(start);
    seen.insert((start, s0));
    queue.push_back((start, s0));
    let mut out = Vec::new();
    while let Some((v, s)) = queue.pop_front() {
        out.push((v, s));
        for (e, t) in arena.out_edges(v) {
            let next = (t, memory.step(s, e, t));
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    out
}
