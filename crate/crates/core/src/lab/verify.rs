use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::error::{Error, Result};
use crate::memory::FiniteMemoryStrategy;
use crate::model::{ColorMask, Game, Player, VertexSet};

/// A play consistent with the strategy that the strategy's owner loses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub start: usize,
    /// Vertices of the play prefix, starting at `start`.
    pub play: Vec<usize>,
    /// For Eve strategies: the play ends by jumping back to `play[i]` and
    /// repeats forever without a new color.
    pub loop_start: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Winning,
    Refuted(Counterexample),
}

impl Verdict {
    pub fn is_winning(&self) -> bool {
        matches!(self, Verdict::Winning)
    }
}

type Config = (u32, u32, ColorMask);

struct Explorer<'a> {
    game: &'a Game,
    strategy: &'a FiniteMemoryStrategy,
    ids: HashMap<Config, u32>,
    configs: Vec<Config>,
}

impl<'a> Explorer<'a> {
    fn new(game: &'a Game, strategy: &'a FiniteMemoryStrategy) -> Self {
        Explorer {
            game,
            strategy,
            ids: HashMap::new(),
            configs: Vec::new(),
        }
    }

    fn intern(&mut self, c: Config) -> (u32, bool) {
        if let Some(&id) = self.ids.get(&c) {
            return (id, false);
        }
        let id = self.configs.len() as u32;
        self.ids.insert(c, id);
        self.configs.push(c);
        (id, true)
    }

    fn start(&mut self, v: usize) -> (u32, bool) {
        let m = self.strategy.memory().initial_for(v);
        self.intern((v as u32, m, self.game.objective().mask(v)))
    }

    /// Successor configurations of the product of arena and strategy.
    fn successors(&mut self, id: u32) -> Result<Vec<u32>> {
        let (v, m, seen) = self.configs[id as usize];
        let v = v as usize;
        let arena = self.game.arena();
        let memory = self.strategy.memory();
        let targets: Vec<usize> = if arena.owner(v) == self.strategy.player() {
            let t = self.strategy.require_move(v, m)?;
            if !arena.has_edge(v, t) {
                return Err(Error::MalformedStrategy(alloc::format!("move {v} -> {t} is not an edge")));
            }
            vec![t]
        } else {
            arena.successors(v).iter().map(|&t| t as usize).collect()
        };
        let mut out = Vec::with_capacity(targets.len());
        for t in targets {
            let e = arena.edge_id(v, t).expect("successor edge");
            let c = (t as u32, memory.step(m, e, t), seen | self.game.objective().mask(t));
            out.push(self.intern(c).0);
        }
        Ok(out)
    }
}

/// Checks that `strategy` wins from every vertex of `starts`, exploring the
/// product of the arena, the strategy's memory and the visited colors.
///
/// An Eve strategy wins iff the non-complete configurations reachable under it
/// form an acyclic graph; an Adam strategy wins iff no reachable configuration
/// has seen every color.
pub fn verify_strategy(game: &Game, strategy: &FiniteMemoryStrategy, starts: &VertexSet) -> Result<Verdict> {
    if strategy.vertex_count() != game.n() {
        return Err(Error::MalformedStrategy(alloc::format!(
            "strategy covers {} vertices, arena has {}",
            strategy.vertex_count(),
            game.n()
        )));
    }
    match strategy.player() {
        Player::Eve => verify_eve(game, strategy, starts),
        Player::Adam => verify_adam(game, strategy, starts),
    }
}

fn verify_eve(game: &Game, strategy: &FiniteMemoryStrategy, starts: &VertexSet) -> Result<Verdict> {
    const OPEN: u8 = 1;
    const DONE: u8 = 2;
    let full = game.objective().full_mask();
    let mut ex = Explorer::new(game, strategy);
    let mut mark: Vec<u8> = Vec::new();

    for start in starts.iter() {
        let (root, _) = ex.start(start);
        mark.resize(ex.configs.len(), 0);
        if mark[root as usize] == DONE || ex.configs[root as usize].2 == full {
            continue;
        }
        // Iterative DFS; frames hold a config and its unexplored successors.
        let mut stack: Vec<(u32, Vec<u32>)> = Vec::new();
        let succ = ex.successors(root)?;
        mark.resize(ex.configs.len(), 0);
        mark[root as usize] = OPEN;
        stack.push((root, succ));
        while let Some((_, pending)) = stack.last_mut() {
            let Some(next) = pending.pop() else {
                let (id, _) = stack.pop().unwrap();
                mark[id as usize] = DONE;
                continue;
            };
            if ex.configs[next as usize].2 == full || mark[next as usize] == DONE {
                continue;
            }
            if mark[next as usize] == OPEN {
                let mut play: Vec<usize> = stack.iter().map(|(id, _)| ex.configs[*id as usize].0 as usize).collect();
                let loop_start = stack.iter().position(|(id, _)| *id == next);
                play.push(ex.configs[next as usize].0 as usize);
                return Ok(Verdict::Refuted(Counterexample { start, play, loop_start }));
            }
            let succ = ex.successors(next)?;
            mark.resize(ex.configs.len(), 0);
            mark[next as usize] = OPEN;
            stack.push((next, succ));
        }
    }
    Ok(Verdict::Winning)
}

fn verify_adam(game: &Game, strategy: &FiniteMemoryStrategy, starts: &VertexSet) -> Result<Verdict> {
    const ROOT: u32 = u32::MAX;
    let full = game.objective().full_mask();
    let mut ex = Explorer::new(game, strategy);
    let mut parent: Vec<u32> = Vec::new();
    let mut queue = alloc::collections::VecDeque::new();

    let path_to = |ex: &Explorer<'_>, parent: &[u32], mut id: u32| {
        let mut play = vec![ex.configs[id as usize].0 as usize];
        while parent[id as usize] != ROOT {
            id = parent[id as usize];
            play.push(ex.configs[id as usize].0 as usize);
        }
        play.reverse();
        play
    };

    for start in starts.iter() {
        let (root, fresh) = ex.start(start);
        if !fresh {
            continue;
        }
        parent.push(ROOT);
        queue.push_back(root);
        while let Some(id) = queue.pop_front() {
            if ex.configs[id as usize].2 == full {
                let play = path_to(&ex, &parent, id);
                return Ok(Verdict::Refuted(Counterexample {
                    start: play[0],
                    play,
                    loop_start: None,
                }));
            }
            let before = ex.configs.len();
            for next in ex.successors(id)? {
                if next as usize >= before && parent.len() <= next as usize {
                    parent.push(id);
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(Verdict::Winning)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{canonical_fig5_adam, canonical_flower_eve, fig1, gen_fig5, gen_flower};
    use crate::product::solve_fpt;
    use crate::Limits;

    #[test]
    fn fpt_strategies_verify_on_fig1() {
        let game = fig1();
        let res = solve_fpt(&game, &Limits::default()).unwrap();
        let eve = res.eve_strategy.as_ref().unwrap();
        assert!(verify_strategy(&game, eve, &res.eve_region).unwrap().is_winning());
        let adam = res.adam_strategy.as_ref().unwrap();
        assert!(verify_strategy(&game, adam, &res.adam_region).unwrap().is_winning());
    }

    #[test]
    fn canonical_machines_verify() {
        for k in 1..=4 {
            let game = gen_flower(k).unwrap();
            let h = game.arena().index_of("h").unwrap();
            let sigma = canonical_flower_eve(k).unwrap();
            assert!(verify_strategy(&game, &sigma, &VertexSet::from_indices(game.n(), [h]))
                .unwrap()
                .is_winning());
        }
        let game = gen_fig5();
        let s = game.arena().index_of("s").unwrap();
        let tau = canonical_fig5_adam();
        assert!(verify_strategy(&game, &tau, &VertexSet::from_indices(game.n(), [s]))
            .unwrap()
            .is_winning());
    }

    #[test]
    fn positional_eve_on_flower_is_refuted_with_a_lasso() {
        let game = gen_flower(2).unwrap();
        let a = game.arena();
        let mut moves = vec![None; a.n()];
        for i in 1..=2 {
            let v = a.index_of(&alloc::format!("v{i}")).unwrap();
            moves[v] = Some(a.index_of(&alloc::format!("c{i}")).unwrap());
        }
        let mut sigma = FiniteMemoryStrategy::memoryless(a, Player::Eve, &moves);
        sigma.fill_defaults(a);
        let h = a.index_of("h").unwrap();
        match verify_strategy(&game, &sigma, &VertexSet::from_indices(a.n(), [h])).unwrap() {
            Verdict::Refuted(cx) => {
                assert_eq!(cx.start, h);
                let i = cx.loop_start.unwrap();
                assert_eq!(cx.play[i], *cx.play.last().unwrap());
            }
            Verdict::Winning => panic!("positional strategy cannot win the flower"),
        }
    }

    #[test]
    fn adam_refutation_reaches_all_colors() {
        let game = fig1();
        let a = game.arena();
        let moves: Vec<Option<usize>> = (0..a.n()).map(|v| a.successors(v).first().map(|&s| s as usize)).collect();
        let tau = FiniteMemoryStrategy::memoryless(a, Player::Adam, &moves);
        let verdict = verify_strategy(&game, &tau, &VertexSet::full(a.n())).unwrap();
        let Verdict::Refuted(cx) = verdict else {
            panic!("Eve wins fig1 everywhere")
        };
        let play = crate::model::Play::new(&game, cx.play).unwrap();
        assert_eq!(play.final_mask(), game.objective().full_mask());
    }
}
