use alloc::vec::Vec;

use super::ReachMatrix;
use crate::attractor::{attractor, avoidance_strategy, AttractorResult};
use crate::error::{Error, Result};
use crate::memory::{FiniteMemoryStrategy, Initial, MemoryStructure};
use crate::model::{Arena, Game, Player, VertexSet};
use crate::result::{Method, SolveResult};

/// Solves a game whose colors are single vertices.
///
/// If the targets are totally ordered by `⪯`, Eve wins exactly on the
/// intersection of their attractors by visiting them in sorted order.
/// Otherwise two targets are incomparable and Adam wins everywhere by
/// avoiding one of them.
pub fn solve_singleton(game: &Game) -> Result<SolveResult> {
    let arena = game.arena();
    let objective = game.objective();
    let mut targets = Vec::with_capacity(game.k());
    for (i, set) in objective.color_sets().iter().enumerate() {
        match set.as_slice() {
            [v] => targets.push(*v),
            _ => return Err(Error::NotSingleton(i)),
        }
    }
    let mut distinct = targets.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let attractors: Vec<AttractorResult> = distinct.iter().map(|&w| attractor(arena, |v| v == w)).collect();
    let matrix = ReachMatrix::from_attractors(distinct.clone(), &attractors);
    let positions: Vec<usize> = (0..distinct.len()).collect();

    let mut result = match matrix.chain(&positions) {
        Some(order) => {
            let eve_region = VertexSet::from_indices(
                arena.n(),
                (0..arena.n()).filter(|&v| attractors.iter().all(|a| a.contains(v))),
            );
            let mut result = SolveResult::from_eve_region(Method::Singleton, eve_region);
            let sorted: Vec<usize> = order.iter().map(|&i| distinct[i]).collect();
            let sorted_attr: Vec<&AttractorResult> = order.iter().map(|&i| &attractors[i]).collect();
            result.eve_strategy = Some(visit_in_order(arena, &sorted, &sorted_attr)?);
            result.adam_strategy = Some(avoidance_strategy(arena, &attractors));
            result
        }
        None => {
            let (i, j) = incomparable_pair(&matrix).expect("a non-chain has an incomparable pair");
            let mut result = SolveResult::from_eve_region(Method::Singleton, VertexSet::empty(arena.n()));
            let mut eve = FiniteMemoryStrategy::memoryless(arena, Player::Eve, &[]);
            eve.fill_defaults(arena);
            result.eve_strategy = Some(eve);
            result.adam_strategy = Some(avoid_one_of(arena, distinct[i], &attractors[i], &attractors[j])?);
            result
        }
    };
    result.stats.iterations = distinct.len();
    Ok(result)
}

fn incomparable_pair(m: &ReachMatrix) -> Option<(usize, usize)> {
    let r = m.len();
    (0..r)
        .flat_map(|i| (i + 1..r).map(move |j| (i, j)))
        .find(|&(i, j)| !m.comparable(i, j))
}

/// Eve's strategy with one state per target: in state `t` she plays the
/// attractor move toward `targets[t]` and advances once she enters it.
fn visit_in_order(arena: &Arena, targets: &[usize], attractors: &[&AttractorResult]) -> Result<FiniteMemoryStrategy> {
    let states = targets.len().max(1);
    let advance = |mut t: usize, v: usize| {
        while t + 1 < targets.len() && targets[t] == v {
            t += 1;
        }
        t as u32
    };
    let mut next = Vec::with_capacity(states * arena.m());
    for t in 0..states {
        next.extend(arena.edges().map(|(_, v)| advance(t, v)));
    }
    let initial = (0..arena.n()).map(|v| advance(0, v)).collect();
    let memory = MemoryStructure::table(states, Initial::PerVertex(initial), arena.m(), next)?;
    let mut strategy = FiniteMemoryStrategy::new(Player::Eve, memory, arena.n());
    for (t, attr) in attractors.iter().enumerate() {
        for v in (0..arena.n()).filter(|&v| arena.owner(v) == Player::Eve) {
            if let Some(s) = attr.eve_move(v) {
                strategy.set_move(v, t, s);
            }
        }
    }
    strategy.fill_defaults(arena);
    Ok(strategy)
}

/// Adam's two-state strategy against incomparable targets `a` and `b`
/// (`a ∉ Attr(b)`, `b ∉ Attr(a)`). The state records whether `a` was seen.
///
/// Before `a`: outside `Attr(a)` he keeps out of it; otherwise, outside
/// `Attr(b)` he keeps out of that. After `a` he keeps out of `Attr(b)`,
/// which he is outside of on entering `a`. Each avoided set stays avoided, so
/// at most one of the targets is ever visited.
fn avoid_one_of(arena: &Arena, a: usize, attr_a: &AttractorResult, attr_b: &AttractorResult) -> Result<FiniteMemoryStrategy> {
    let mut next = Vec::with_capacity(2 * arena.m());
    for s in 0..2u32 {
        next.extend(arena.edges().map(|(_, v)| if v == a { 1 } else { s }));
    }
    let initial = (0..arena.n()).map(|v| u32::from(v == a)).collect();
    let memory = MemoryStructure::table(2, Initial::PerVertex(initial), arena.m(), next)?;
    let mut strategy = FiniteMemoryStrategy::new(Player::Adam, memory, arena.n());
    for v in (0..arena.n()).filter(|&v| arena.owner(v) == Player::Adam) {
        let before = if !attr_a.contains(v) {
            attr_a.escape_move(arena, v)
        } else if !attr_b.contains(v) {
            attr_b.escape_move(arena, v)
        } else {
            None
        };
        if let Some(s) = before {
            strategy.set_move(v, 0, s);
        }
        if let Some(s) = attr_b.escape_move(arena, v).filter(|_| !attr_b.contains(v)) {
            strategy.set_move(v, 1, s);
        }
    }
    strategy.fill_defaults(arena);
    Ok(strategy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::verify_strategy;
    use crate::model::Objective;
    use alloc::vec;

    fn game(owners: Vec<Player>, edges: Vec<(usize, usize)>, colors: Vec<Vec<usize>>) -> Game {
        let arena = Arena::unnamed(owners, edges).unwrap();
        let obj = Objective::new(arena.n(), colors).unwrap();
        Game::new(arena, obj, Some(0)).unwrap()
    }

    #[test]
    fn chain_eve_wins() {
        let g = game(vec![Player::Eve; 3], vec![(0, 1), (1, 2), (2, 2)], vec![vec![2], vec![1]]);
        let res = solve_singleton(&g).unwrap();
        assert!(res.eve_region.contains(0));
        let eve = res.eve_strategy.as_ref().unwrap();
        assert!(verify_strategy(&g, eve, &res.eve_region).unwrap().is_winning());
    }

    #[test]
    fn fork_adam_wins_with_two_states() {
        let g = game(
            vec![Player::Eve; 3],
            vec![(0, 1), (0, 2), (1, 1), (2, 2)],
            vec![vec![1], vec![2]],
        );
        let res = solve_singleton(&g).unwrap();
        assert!(res.eve_region.is_empty());
        let adam = res.adam_strategy.as_ref().unwrap();
        assert_eq!(adam.states(), 2);
        assert!(verify_strategy(&g, adam, &res.adam_region).unwrap().is_winning());
    }

    #[test]
    fn rejects_larger_colors() {
        let g = game(vec![Player::Eve; 2], vec![(0, 1), (1, 0)], vec![vec![0, 1]]);
        assert!(matches!(solve_singleton(&g), Err(Error::NotSingleton(0))));
    }
}
