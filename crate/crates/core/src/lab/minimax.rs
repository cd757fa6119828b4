use hashbrown::HashMap;

use crate::error::{Error, Result};
use crate::model::{ColorMask, Game, Player};
use crate::Limits;

struct Minimax<'a> {
    game: &'a Game,
    full: ColorMask,
    memo: HashMap<(u32, ColorMask, u32), bool>,
    nodes: u64,
    budget: u64,
}

impl Minimax<'_> {
    /// Whether Eve can force all colors within `depth` more moves.
    fn eve_wins(&mut self, v: usize, seen: ColorMask, depth: u32) -> Result<bool> {
        if seen == self.full {
            return Ok(true);
        }
        if depth == 0 {
            return Ok(false);
        }
        if let Some(&w) = self.memo.get(&(v as u32, seen, depth)) {
            return Ok(w);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        let arena = self.game.arena();
        let eve = arena.owner(v) == Player::Eve;
        let mut result = !eve;
        for &t in arena.successors(v) {
            let t = t as usize;
            let w = self.eve_wins(t, seen | self.game.objective().mask(t), depth - 1)?;
            if w == eve {
                result = eve;
                break;
            }
        }
        self.memo.insert((v as u32, seen, depth), result);
        Ok(result)
    }
}

/// Decides the game from its initial vertex by exhaustive game-tree search.
///
/// If Eve wins at all she wins within `n * k` moves: an optimal play visits
/// each (vertex, colors seen) pair at most once and the colors seen change at
/// most `k` times. Independent of the product construction, so it serves as
/// an oracle for small games.
pub fn minimax_oracle(game: &Game, limits: &Limits) -> Result<Player> {
    let v0 = game.require_init()?;
    let depth = (game.n() * game.k().max(1)) as u32;
    let mut mm = Minimax {
        game,
        full: game.objective().full_mask(),
        memo: HashMap::new(),
        nodes: 0,
        budget: limits.minimax_budget,
    };
    Ok(if mm.eve_wins(v0, game.objective().mask(v0), depth)? {
        Player::Eve
    } else {
        Player::Adam
    })
}
