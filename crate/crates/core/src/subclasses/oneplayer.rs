use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::twosat::{Lit, TwoSatFormula, TwoSatResult};
use super::{reach_matrix, ReachMatrix};
use crate::error::{Error, Result};
use crate::memory::{FiniteMemoryStrategy, Initial, MemoryStructure};
use crate::model::{Arena, Game, Player, VertexSet};
use crate::result::{Method, SolveResult};

fn reachable_from(arena: &Arena, v0: usize) -> Vec<bool> {
    let mut seen = vec![false; arena.n()];
    seen[v0] = true;
    let mut queue = VecDeque::from([v0]);
    while let Some(u) = queue.pop_front() {
        for &w in arena.successors(u) {
            if !core::mem::replace(&mut seen[w as usize], true) {
                queue.push_back(w as usize);
            }
        }
    }
    seen
}

/// Shortest path from `a` to `b`, both endpoints included.
fn shortest_path(arena: &Arena, a: usize, b: usize) -> Option<Vec<usize>> {
    const NONE: usize = usize::MAX;
    let mut parent = vec![NONE; arena.n()];
    parent[a] = a;
    let mut queue = VecDeque::from([a]);
    while let Some(u) = queue.pop_front() {
        if u == b {
            let mut path = vec![b];
            let mut x = b;
            while x != a {
                x = parent[x];
                path.push(x);
            }
            path.reverse();
            return Some(path);
        }
        for &w in arena.successors(u) {
            let w = w as usize;
            if parent[w] == NONE {
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    None
}

/// The formula for a start vertex: one variable per colored vertex, true when
/// the play should visit it. Chosen vertices must be pairwise comparable,
/// reachable from the start, and cover every color.
fn formula(game: &Game, matrix: &ReachMatrix, reach: &[bool]) -> TwoSatFormula {
    let r = matrix.len();
    let mut phi = TwoSatFormula::new(r);
    for i in 0..r {
        for j in i + 1..r {
            if !matrix.comparable(i, j) {
                phi.add_clause(Lit::neg(i), Lit::neg(j));
            }
        }
        if !reach[matrix.vertices()[i]] {
            phi.add_unit(Lit::neg(i));
        }
    }
    for set in game.objective().color_sets() {
        let lits: Vec<Lit> = set.iter().map(|&v| Lit::pos(matrix.position(v).unwrap())).collect();
        phi.push(&lits).expect("colors have one or two vertices here");
    }
    phi
}

fn witness(game: &Game, matrix: &ReachMatrix, v0: usize, assignment: &[bool]) -> Vec<usize> {
    let arena = game.arena();
    // One chosen vertex per color, then sort into a chain.
    let mut picked: Vec<usize> = game
        .objective()
        .color_sets()
        .iter()
        .map(|set| {
            set.iter()
                .map(|&v| matrix.position(v).unwrap())
                .find(|&i| assignment[i])
                .expect("assignment covers every color")
        })
        .collect();
    picked.sort_unstable();
    picked.dedup();
    let chain = matrix.chain(&picked).expect("chosen vertices are pairwise comparable");
    let mut path = vec![v0];
    for i in chain {
        let hop = shortest_path(arena, *path.last().unwrap(), matrix.vertices()[i]).expect("reachable");
        path.extend_from_slice(&hop[1..]);
    }
    path
}

/// Eve's strategy that follows `path` from its first vertex: the state is the
/// position along the path.
pub fn witness_strategy(arena: &Arena, path: &[usize]) -> Result<FiniteMemoryStrategy> {
    let states = path.len().max(1);
    let mut next = Vec::with_capacity(states * arena.m());
    for t in 0..states {
        let step = path.get(t + 1).and_then(|&b| arena.edge_id(path[t], b));
        next.extend((0..arena.m()).map(|e| if Some(e) == step { t as u32 + 1 } else { t as u32 }));
    }
    let memory = MemoryStructure::table(states, Initial::Fixed(0), arena.m(), next)?;
    let mut strategy = FiniteMemoryStrategy::new(Player::Eve, memory, arena.n());
    for t in 0..path.len().saturating_sub(1) {
        if !arena.has_edge(path[t], path[t + 1]) {
            return Err(Error::MalformedStrategy(alloc::format!(
                "{} -> {} is not an edge",
                path[t],
                path[t + 1]
            )));
        }
        strategy.set_move(path[t], t, path[t + 1]);
    }
    strategy.fill_defaults(arena);
    Ok(strategy)
}

/// Solves a one-player game whose colors have at most two vertices each,
/// through one 2-SAT instance per start vertex.
///
/// Eve wins from `v0` iff she can choose one vertex per color such that the
/// chosen vertices are reachable from `v0` and pairwise connected by paths;
/// they then lie on a single path. From the initial vertex the result carries
/// a witness play of length at most `n * k` that visits every color.
pub fn solve_oneplayer_size2(game: &Game) -> Result<SolveResult> {
    let arena = game.arena();
    if let Some(v) = (0..arena.n()).find(|&v| arena.owner(v) != Player::Eve) {
        return Err(Error::NotOnePlayer(v));
    }
    for (i, set) in game.objective().color_sets().iter().enumerate() {
        if set.len() > 2 {
            return Err(Error::ColorTooLarge(i, set.len()));
        }
    }
    let colored: Vec<usize> = game.objective().color_sets().iter().flatten().copied().collect();
    let matrix = reach_matrix(arena, &colored);
    let has_empty = game.objective().color_sets().iter().any(|s| s.is_empty());

    let mut eve_region = VertexSet::empty(arena.n());
    let mut witness_path = None;
    for v0 in 0..arena.n() {
        if has_empty {
            break;
        }
        let reach = reachable_from(arena, v0);
        let TwoSatResult::Sat(assignment) = formula(game, &matrix, &reach).solve() else {
            continue;
        };
        eve_region.insert(v0);
        if game.init() == Some(v0) {
            witness_path = Some(witness(game, &matrix, v0, &assignment));
        }
    }

    let mut result = SolveResult::from_eve_region(Method::OnePlayerSize2, eve_region);
    result.adam_strategy = Some(FiniteMemoryStrategy::memoryless(arena, Player::Adam, &[]));
    if let Some(path) = &witness_path {
        result.eve_strategy = Some(witness_strategy(arena, path)?);
    }
    result.witness = witness_path;
    result.stats.iterations = matrix.len();
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Objective, Play};

    fn game(edges: Vec<(usize, usize)>, n: usize, colors: Vec<Vec<usize>>) -> Game {
        let arena = Arena::unnamed(vec![Player::Eve; n], edges).unwrap();
        let obj = Objective::new(n, colors).unwrap();
        Game::new(arena, obj, Some(0)).unwrap()
    }

    #[test]
    fn line_witness() {
        let g = game(vec![(0, 1), (1, 2), (2, 3), (3, 3)], 4, vec![vec![1, 3], vec![2]]);
        let res = solve_oneplayer_size2(&g).unwrap();
        assert!(res.eve_region.contains(0));
        let w = res.witness.clone().unwrap();
        let play = Play::new(&g, w.clone()).unwrap();
        assert_eq!(play.final_mask(), g.objective().full_mask());
        assert!(w.len() - 1 <= g.n() * g.k());
    }

    #[test]
    fn fork_is_unsat() {
        let g = game(vec![(0, 1), (0, 2), (1, 1), (2, 2)], 3, vec![vec![1], vec![2]]);
        let res = solve_oneplayer_size2(&g).unwrap();
        assert!(res.eve_region.is_empty());
        assert!(res.witness.is_none());
    }

    #[test]
    fn unreachable_choice_is_excluded() {
        // From 0 only 1 is reachable; 2 and 3 are comparable with each other
        // but not with 0's side.
        let g = game(vec![(0, 1), (1, 1), (2, 3), (3, 3)], 4, vec![vec![1, 2], vec![1, 3]]);
        let res = solve_oneplayer_size2(&g).unwrap();
        assert!(res.eve_region.contains(0));
        let g = game(vec![(0, 1), (1, 1), (2, 3), (3, 3)], 4, vec![vec![1, 2], vec![3]]);
        assert!(!solve_oneplayer_size2(&g).unwrap().eve_region.contains(0));
    }

    #[test]
    fn guards() {
        let arena = Arena::unnamed(vec![Player::Adam, Player::Eve], vec![(0, 1), (1, 0)]).unwrap();
        let g = Game::new(arena, Objective::new(2, vec![vec![0]]).unwrap(), None).unwrap();
        assert!(matches!(solve_oneplayer_size2(&g), Err(Error::NotOnePlayer(0))));
        let g = game(vec![(0, 1), (1, 2), (2, 0)], 3, vec![vec![0, 1, 2]]);
        assert!(matches!(solve_oneplayer_size2(&g), Err(Error::ColorTooLarge(0, 3))));
    }
}
