use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::error::{Error, Result};
use crate::lab::verify::verify_strategy;
use crate::memory::{FiniteMemoryStrategy, Initial, MemoryStructure};
use crate::model::{ColorMask, Game, Player, VertexSet};
use crate::product::{solve_product, ProductScope};
use crate::Limits;

/// Which memory updates a candidate machine may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MachineClass {
    /// Update on every (state, edge) pair.
    Full,
    /// Update on (state, color mask of the entered vertex) only.
    ColorObs,
}

impl MachineClass {
    pub fn tag(self) -> &'static str {
        match self {
            MachineClass::Full => "full",
            MachineClass::ColorObs => "color-obs",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub player: Player,
    pub class: MachineClass,
    pub bound: usize,
    /// Smallest winning machine within the bound, if any.
    pub found: Option<FiniteMemoryStrategy>,
    /// Partial machines shown losing; each stands for every completion of it.
    pub refuted: u64,
    /// Search-tree nodes visited.
    pub nodes: u64,
    /// Refuted partial machines per state count `1..`.
    pub refuted_by_size: Vec<u64>,
}

impl SearchOutcome {
    pub fn states(&self) -> Option<usize> {
        self.found.as_ref().map(|s| s.states())
    }
}

const UNSET: u32 = u32::MAX;

#[derive(Clone, Copy)]
enum Entry {
    Update(usize),
    Move(usize, u32),
}

enum Step {
    Conflict,
    Need(Entry),
    Complete,
}

struct Search<'a> {
    game: &'a Game,
    player: Player,
    class: MachineClass,
    width: usize,
    vertex_class: Vec<u32>,
    /// Product winner per `v << k | colors seen`.
    eve_wins: Vec<bool>,
    k: usize,
    states: usize,
    update: Vec<u32>,
    moves: Vec<u32>,
    used: u32,
    nodes: u64,
    refuted: u64,
    budget: u64,
}

impl Search<'_> {
    fn update_index(&self, state: u32, edge: usize, target: usize) -> usize {
        let key = match self.class {
            MachineClass::Full => edge,
            MachineClass::ColorObs => self.vertex_class[target] as usize,
        };
        state as usize * self.width + key
    }

    fn lost(&self, v: usize, seen: ColorMask) -> bool {
        let eve = self.eve_wins[(v << self.k) | seen as usize];
        eve != (self.player == Player::Eve)
    }

    /// Explores the configurations reachable under the partial machine.
    fn explore(&self) -> Step {
        let arena = self.game.arena();
        let objective = self.game.objective();
        let full = objective.full_mask();
        let v0 = self.game.init().expect("checked by caller");
        let start = (v0 as u32, 0u32, objective.mask(v0));
        if self.lost(v0, start.2) {
            return Step::Conflict;
        }
        let mut ids: HashMap<(u32, u32, ColorMask), u32> = HashMap::new();
        let mut configs = vec![start];
        let mut adj: Vec<Vec<u32>> = vec![Vec::new()];
        ids.insert(start, 0);
        let mut queue = VecDeque::from([0u32]);
        let mut need = None;

        while let Some(id) = queue.pop_front() {
            let (v, m, seen) = configs[id as usize];
            if seen == full {
                continue;
            }
            let v = v as usize;
            let succ = arena.successors(v);
            let chosen: &[u32] = if arena.owner(v) == self.player {
                if succ.len() == 1 {
                    succ
                } else {
                    let mv = self.moves[v * self.states + m as usize];
                    if mv == UNSET {
                        need.get_or_insert(Entry::Move(v, m));
                        continue;
                    }
                    core::slice::from_ref(&succ[mv as usize])
                }
            } else {
                succ
            };
            for &t in chosen {
                let t = t as usize;
                let e = arena.edge_id(v, t).expect("successor edge");
                let idx = self.update_index(m, e, t);
                let m2 = self.update[idx];
                if m2 == UNSET {
                    need.get_or_insert(Entry::Update(idx));
                    continue;
                }
                let seen2 = seen | objective.mask(t);
                if self.lost(t, seen2) {
                    return Step::Conflict;
                }
                let c = (t as u32, m2, seen2);
                let next = match ids.get(&c) {
                    Some(&j) => j,
                    None => {
                        let j = configs.len() as u32;
                        ids.insert(c, j);
                        configs.push(c);
                        adj.push(Vec::new());
                        queue.push_back(j);
                        j
                    }
                };
                adj[id as usize].push(next);
            }
        }

        if self.player == Player::Eve && has_cycle(&adj, |i| configs[i].2 != full) {
            return Step::Conflict;
        }
        match need {
            Some(e) => Step::Need(e),
            None => Step::Complete,
        }
    }

    fn dfs(&mut self) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        match self.explore() {
            Step::Conflict => {
                self.refuted += 1;
                Ok(false)
            }
            Step::Complete => Ok(true),
            Step::Need(Entry::Move(v, m)) => {
                let slot = v * self.states + m as usize;
                for i in 0..self.game.arena().successors(v).len() {
                    self.moves[slot] = i as u32;
                    if self.dfs()? {
                        return Ok(true);
                    }
                }
                self.moves[slot] = UNSET;
                Ok(false)
            }
            Step::Need(Entry::Update(idx)) => {
                // Canonical numbering: a fresh state is always the next unused one.
                let limit = (self.used as usize + 1).min(self.states) as u32;
                for s in 0..limit {
                    let fresh = s == self.used;
                    if fresh {
                        self.used += 1;
                    }
                    self.update[idx] = s;
                    let won = self.dfs()?;
                    if fresh {
                        self.used -= 1;
                    }
                    if won {
                        return Ok(true);
                    }
                }
                self.update[idx] = UNSET;
                Ok(false)
            }
        }
    }

    fn machine(&self) -> Result<FiniteMemoryStrategy> {
        let arena = self.game.arena();
        let s = self.states;
        let next: Vec<u32> = self
            .update
            .iter()
            .enumerate()
            .map(|(i, &t)| if t == UNSET { (i / self.width) as u32 } else { t })
            .collect();
        let memory = match self.class {
            MachineClass::Full => MemoryStructure::table(s, Initial::Fixed(0), self.width, next)?,
            MachineClass::ColorObs => {
                MemoryStructure::color_obs(s, Initial::Fixed(0), self.vertex_class.clone(), self.width, next)?
            }
        };
        let mut strategy = FiniteMemoryStrategy::new(self.player, memory, arena.n());
        for v in (0..arena.n()).filter(|&v| arena.owner(v) == self.player) {
            for m in 0..s {
                let mv = self.moves[v * s + m];
                if mv != UNSET {
                    strategy.set_move(v, m, arena.successors(v)[mv as usize] as usize);
                }
            }
        }
        strategy.fill_defaults(arena);
        Ok(strategy)
    }
}

/// Kahn's algorithm on the subgraph induced by `keep`.
fn has_cycle(adj: &[Vec<u32>], keep: impl Fn(usize) -> bool) -> bool {
    let n = adj.len();
    let mut indeg = vec![0u32; n];
    for u in (0..n).filter(|&u| keep(u)) {
        for &w in &adj[u] {
            if keep(w as usize) {
                indeg[w as usize] += 1;
            }
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&u| keep(u) && indeg[u] == 0).collect();
    let mut removed = 0;
    while let Some(u) = stack.pop() {
        removed += 1;
        for &w in &adj[u] {
            let w = w as usize;
            if keep(w) {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
    }
    removed < (0..n).filter(|&u| keep(u)).count()
}

/// Color classes: vertices with equal color masks share a class.
pub(crate) fn color_classes(game: &Game) -> (Vec<u32>, usize) {
    let mut masks: Vec<ColorMask> = game.objective().masks().to_vec();
    masks.sort_unstable();
    masks.dedup();
    let class = game
        .objective()
        .masks()
        .iter()
        .map(|m| masks.binary_search(m).unwrap() as u32)
        .collect();
    (class, masks.len())
}

/// Finds a winning machine for `player` from the initial vertex with as few
/// states as possible, up to `bound`.
///
/// Machines are enumerated lazily: an update or move entry is fixed only when
/// a reachable configuration needs it, and a partial machine is abandoned as
/// soon as the configurations it already determines lose (a reachable
/// configuration lost even with full information, or for Eve a cycle that
/// never completes the colors). State numbers are introduced in order of first
/// use, so each machine is met once up to renaming of states. The found
/// machine is re-checked with [`verify_strategy`].
pub fn min_memory_search(
    game: &Game,
    player: Player,
    bound: usize,
    class: MachineClass,
    limits: &Limits,
) -> Result<SearchOutcome> {
    let v0 = game.require_init()?;
    let k = game.k();
    let solution = solve_product(game, ProductScope::Complete, limits)?;
    let n = game.n();
    let eve_wins: Vec<bool> = (0..n << k)
        .map(|i| solution.winner(i >> k, (i & ((1 << k) - 1)) as u32) == Some(Player::Eve))
        .collect();
    let (vertex_class, classes) = color_classes(game);
    let width = match class {
        MachineClass::Full => game.arena().m(),
        MachineClass::ColorObs => classes,
    };

    let mut outcome = SearchOutcome {
        player,
        class,
        bound,
        found: None,
        refuted: 0,
        nodes: 0,
        refuted_by_size: Vec::new(),
    };
    for states in 1..=bound {
        let mut search = Search {
            game,
            player,
            class,
            width,
            vertex_class: vertex_class.clone(),
            eve_wins: eve_wins.clone(),
            k,
            states,
            update: vec![UNSET; states * width],
            moves: vec![UNSET; n * states],
            used: 1,
            nodes: 0,
            refuted: 0,
            budget: limits.search_budget.saturating_sub(outcome.nodes),
        };
        let won = search.dfs();
        outcome.nodes += search.nodes;
        outcome.refuted += search.refuted;
        outcome.refuted_by_size.push(search.refuted);
        if won? {
            let machine = search.machine()?;
            let verdict = verify_strategy(game, &machine, &VertexSet::from_indices(n, [v0]))?;
            if !verdict.is_winning() {
                return Err(Error::MalformedStrategy(
                    "search produced a machine that fails verification".into(),
                ));
            }
            outcome.found = Some(machine);
            break;
        }
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{fig1, gen_flower};

    #[test]
    fn flower2_needs_three_states() {
        let game = gen_flower(2).unwrap();
        let lim = Limits::default();
        let out = min_memory_search(&game, Player::Eve, 3, MachineClass::ColorObs, &lim).unwrap();
        assert_eq!(out.states(), Some(3));
        let out = min_memory_search(&game, Player::Eve, 2, MachineClass::Full, &lim).unwrap();
        assert!(out.found.is_none());
        assert!(out.refuted > 0);
    }

    #[test]
    fn fig1_positional_suffices_for_eve() {
        let out = min_memory_search(&fig1(), Player::Eve, 3, MachineClass::Full, &Limits::default()).unwrap();
        assert!(out.states().is_some());
    }

    #[test]
    fn losing_player_gets_nothing() {
        let out = min_memory_search(&fig1(), Player::Adam, 2, MachineClass::Full, &Limits::default()).unwrap();
        assert!(out.found.is_none());
    }
}
