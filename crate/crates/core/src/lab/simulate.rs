use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashSet;

use crate::error::{Error, Result};
use crate::memory::FiniteMemoryStrategy;
use crate::model::{ColorMask, Game, Player};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimReason {
    /// Every color was visited.
    AllColors,
    /// A joint configuration repeated before every color was visited.
    StateRepeat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimOutcome {
    pub winner: Player,
    /// Vertices from the initial one up to the completing or repeating step.
    pub play: Vec<usize>,
    pub steps: usize,
    pub reason: SimReason,
}

pub(crate) fn check_player(strategy: &FiniteMemoryStrategy, expected: Player) -> Result<()> {
    if strategy.player() != expected {
        return Err(Error::WrongPlayer {
            expected,
            found: strategy.player(),
        });
    }
    Ok(())
}

/// Plays `sigma` against `tau` from the initial vertex and decides the winner
/// of the resulting infinite play exactly.
///
/// Both strategies are finite-memory, so the configuration (vertex, Eve's
/// state, Adam's state, colors seen) eventually repeats; from then on the play
/// is periodic and sees no new color.
pub fn simulate(game: &Game, sigma: &FiniteMemoryStrategy, tau: &FiniteMemoryStrategy) -> Result<SimOutcome> {
    check_player(sigma, Player::Eve)?;
    check_player(tau, Player::Adam)?;
    let arena = game.arena();
    let full = game.objective().full_mask();
    let start = game.require_init()?;

    let mut v = start;
    let mut eve_state = sigma.memory().initial_for(v);
    let mut adam_state = tau.memory().initial_for(v);
    let mut visited: ColorMask = game.objective().mask(v);
    let mut play = vec![v];
    let mut seen = HashSet::new();
    loop {
        if visited == full {
            return Ok(SimOutcome {
                winner: Player::Eve,
                steps: play.len() - 1,
                play,
                reason: SimReason::AllColors,
            });
        }
        if !seen.insert((v, eve_state, adam_state, visited)) {
            return Ok(SimOutcome {
                winner: Player::Adam,
                steps: play.len() - 1,
                play,
                reason: SimReason::StateRepeat,
            });
        }
        let next = match arena.owner(v) {
            Player::Eve => sigma.require_move(v, eve_state)?,
            Player::Adam => tau.require_move(v, adam_state)?,
        };
        let edge = arena
            .edge_id(v, next)
            .ok_or_else(|| Error::MalformedStrategy(alloc::format!("move {v} -> {next} is not an edge")))?;
        eve_state = sigma.memory().step(eve_state, edge, next);
        adam_state = tau.memory().step(adam_state, edge, next);
        visited |= game.objective().mask(next);
        v = next;
        play.push(v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{canonical_flower_eve, gen_flower};
    use crate::memory::FiniteMemoryStrategy;
    use crate::model::{Arena, Objective};

    #[test]
    fn flower_canonical_beats_always_petal_one() {
        let game = gen_flower(2).unwrap();
        let arena = game.arena();
        let sigma = canonical_flower_eve(2).unwrap();
        let h = arena.index_of("h").unwrap();
        let v1 = arena.index_of("v1").unwrap();
        let mut moves = vec![None; arena.n()];
        moves[h] = Some(v1);
        let tau = FiniteMemoryStrategy::memoryless(arena, Player::Adam, &moves);
        let out = simulate(&game, &sigma, &tau).unwrap();
        assert_eq!(out.winner, Player::Eve);
        assert_eq!(out.reason, SimReason::AllColors);
        // h v1 c1 h v1 not1
        assert_eq!(out.steps, 5);
    }

    #[test]
    fn zero_colors_eve_wins_immediately() {
        let arena = Arena::unnamed(vec![Player::Adam], vec![(0, 0)]).unwrap();
        let game = Game::new(arena.clone(), Objective::new(1, vec![]).unwrap(), Some(0)).unwrap();
        let sigma = FiniteMemoryStrategy::memoryless(&arena, Player::Eve, &[]);
        let tau = FiniteMemoryStrategy::memoryless(&arena, Player::Adam, &[Some(0)]);
        let out = simulate(&game, &sigma, &tau).unwrap();
        assert_eq!((out.winner, out.steps), (Player::Eve, 0));
    }

    #[test]
    fn empty_color_means_repeat() {
        let arena = Arena::unnamed(vec![Player::Eve, Player::Eve], vec![(0, 1), (1, 0)]).unwrap();
        let game = Game::new(arena.clone(), Objective::new(2, vec![vec![1], vec![]]).unwrap(), Some(0)).unwrap();
        let sigma = FiniteMemoryStrategy::memoryless(&arena, Player::Eve, &[Some(1), Some(0)]);
        let tau = FiniteMemoryStrategy::memoryless(&arena, Player::Adam, &[]);
        let out = simulate(&game, &sigma, &tau).unwrap();
        assert_eq!(out.winner, Player::Adam);
        assert_eq!(out.reason, SimReason::StateRepeat);
        assert_eq!(simulate(&game, &sigma, &tau).unwrap(), out);
    }

    #[test]
    fn partial_strategy_is_an_error() {
        let game = gen_flower(1).unwrap();
        let sigma = FiniteMemoryStrategy::memoryless(game.arena(), Player::Eve, &[]);
        let tau = FiniteMemoryStrategy::memoryless(game.arena(), Player::Adam, &[Some(1)]);
        assert!(matches!(simulate(&game, &sigma, &tau), Err(Error::StrategyPartial { .. })));
        assert!(matches!(simulate(&game, &tau, &sigma), Err(Error::WrongPlayer { .. })));
    }
}
