use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::generators::gen_flower;
use crate::lab::simulate::{check_player, simulate, SimOutcome};
use crate::memory::FiniteMemoryStrategy;
use crate::model::{full_mask, ColorMask, Game, Player};

/// Adam's answer to an Eve machine on the flower.
#[derive(Debug, Clone)]
pub struct Refutation {
    /// The strict subset of petals that is no state's stopping set.
    pub x: ColorMask,
    /// Stopping set of every state of Eve's machine.
    pub stopping_sets: Vec<ColorMask>,
    /// Petals (1-based) Adam offered at the heart, in order.
    pub moves: Vec<usize>,
    /// The play of Eve's machine against Adam's answer.
    pub outcome: SimOutcome,
}

struct Petals {
    heart: usize,
    v: Vec<usize>,
    stop: Vec<usize>,
}

fn petals(game: &Game, k: usize) -> Petals {
    let a = game.arena();
    let find = |s: &str| a.index_of(s).expect("flower vertex");
    Petals {
        heart: find("h"),
        v: (1..=k).map(|i| find(&format!("v{i}"))).collect(),
        stop: (1..=k).map(|i| find(&format!("not{i}"))).collect(),
    }
}

/// For every memory state `m`, the petals `i` on which Eve stops right after
/// Adam offers `i` in state `m` (bit `i - 1`).
pub fn stopping_sets(k: usize, eve: &FiniteMemoryStrategy) -> Result<Vec<ColorMask>> {
    let game = gen_flower(k)?;
    check_player(eve, Player::Eve)?;
    if eve.vertex_count() != game.n() {
        return Err(Error::MalformedStrategy(format!(
            "machine covers {} vertices, the flower has {}",
            eve.vertex_count(),
            game.n()
        )));
    }
    let p = petals(&game, k);
    let a = game.arena();
    let mut sets = Vec::with_capacity(eve.states());
    for m in 0..eve.states() as u32 {
        let mut s = 0;
        for i in 0..k {
            let e = a.edge_id(p.heart, p.v[i]).expect("heart edge");
            let m2 = eve.memory().step(m, e, p.v[i]);
            if eve.require_move(p.v[i], m2)? == p.stop[i] {
                s |= 1 << i;
            }
        }
        sets.push(s);
    }
    Ok(sets)
}

/// Refutes an Eve machine with fewer than `2^k - 1` states on the flower.
///
/// Some strict subset `X` of the petals is nobody's stopping set. Adam runs
/// Eve's own memory and, in state `m`, offers a petal in the symmetric
/// difference of `X` and `S_m`: Eve either returns from a petal of `X`, or
/// stops on a petal outside `X` whose color she has never seen.
pub fn flower_adversary(k: usize, eve: &FiniteMemoryStrategy) -> Result<Refutation> {
    let threshold = (1usize << k) - 1;
    if eve.states() >= threshold {
        return Err(Error::StateCountTooLarge(eve.states(), threshold));
    }
    let sets = stopping_sets(k, eve)?;
    let full = full_mask(k);
    let x = (0..full).find(|x| !sets.contains(x)).ok_or(Error::NoMissingSubset)?;

    let game = gen_flower(k)?;
    let p = petals(&game, k);
    let mut adam = FiniteMemoryStrategy::new(Player::Adam, eve.memory().clone(), game.n());
    for (m, &s) in sets.iter().enumerate() {
        let diff = x ^ s;
        let i = diff.trailing_zeros() as usize;
        adam.set_move(p.heart, m, p.v[i]);
    }
    let outcome = simulate(&game, eve, &adam)?;
    let moves = outcome
        .play
        .windows(2)
        .filter(|w| w[0] == p.heart)
        .map(|w| p.v.iter().position(|&v| v == w[1]).unwrap() + 1)
        .collect();
    Ok(Refutation {
        x,
        stopping_sets: sets,
        moves,
        outcome,
    })
}
