//! JSON documents for strategies, solve results and refutations.
//!
//! A strategy is stored as an edge-driven memory table. Update entries that
//! keep the state are omitted, so `update` lists only actual state changes.

use std::collections::BTreeMap;

use genreach_core::lab::{Counterexample, Refutation, SimOutcome, SimReason};
use genreach_core::memory::{Initial, MemoryStructure};
use genreach_core::{FiniteMemoryStrategy, Game, Player, SolveResult};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StrategyError {
    #[error("invalid strategy JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpdateEntry {
    pub state: u32,
    pub from: String,
    pub to: String,
    pub next_state: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveEntry {
    pub vertex: String,
    pub state: u32,
    pub successor: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyDoc {
    pub player: String,
    pub states: usize,
    /// Initial state; overridden per start vertex by `initial_by_vertex`.
    pub initial: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_by_vertex: Option<BTreeMap<String, u32>>,
    #[serde(default)]
    pub update: Vec<UpdateEntry>,
    #[serde(default)]
    pub moves: Vec<MoveEntry>,
}

pub fn player_name(p: Player) -> &'static str {
    match p {
        Player::Eve => "eve",
        Player::Adam => "adam",
    }
}

pub fn parse_player(s: &str) -> Option<Player> {
    match s {
        "eve" => Some(Player::Eve),
        "adam" => Some(Player::Adam),
        _ => None,
    }
}

pub fn strategy_to_doc(game: &Game, strategy: &FiniteMemoryStrategy) -> StrategyDoc {
    let arena = game.arena();
    let memory = strategy.memory();
    let table = memory.to_table(arena);
    let m = arena.m();
    let mut update = Vec::new();
    for s in 0..memory.states() {
        for e in 0..m {
            let next = table[s * m + e];
            if next as usize != s {
                let (u, v) = arena.edge(e);
                update.push(UpdateEntry {
                    state: s as u32,
                    from: arena.name(u).into(),
                    to: arena.name(v).into(),
                    next_state: next,
                });
            }
        }
    }
    let (initial, initial_by_vertex) = match memory.initial() {
        Initial::Fixed(s) => (*s, None),
        Initial::PerVertex(per) => {
            let by_name = (0..arena.n()).map(|v| (arena.name(v).to_string(), per[v])).collect();
            (memory.initial_for(game.init().unwrap_or(0)), Some(by_name))
        }
    };
    let moves = strategy
        .moves()
        .filter(|&(v, _, _)| arena.owner(v) == strategy.player())
        .map(|(v, s, t)| MoveEntry {
            vertex: arena.name(v).into(),
            state: s as u32,
            successor: arena.name(t).into(),
        })
        .collect();
    StrategyDoc {
        player: player_name(strategy.player()).into(),
        states: memory.states(),
        initial,
        initial_by_vertex,
        update,
        moves,
    }
}

pub fn strategy_from_doc(game: &Game, doc: &StrategyDoc) -> Result<FiniteMemoryStrategy, StrategyError> {
    let invalid = |msg: String| StrategyError::Invalid(msg);
    let arena = game.arena();
    let player = parse_player(&doc.player).ok_or_else(|| invalid(format!("unknown player `{}`", doc.player)))?;
    let states = doc.states;
    if states == 0 {
        return Err(invalid("a strategy needs at least one state".into()));
    }
    let vertex = |name: &str| {
        arena
            .index_of(name)
            .ok_or_else(|| invalid(format!("unknown vertex `{name}`")))
    };
    let state = |s: u32| {
        if (s as usize) < states {
            Ok(s)
        } else {
            Err(invalid(format!("state {s} outside 0..{states}")))
        }
    };
    let m = arena.m();
    let mut next: Vec<u32> = (0..states).flat_map(|s| std::iter::repeat_n(s as u32, m)).collect();
    for u in &doc.update {
        let e = arena
            .edge_id(vertex(&u.from)?, vertex(&u.to)?)
            .ok_or_else(|| invalid(format!("{} -> {} is not an edge", u.from, u.to)))?;
        next[state(u.state)? as usize * m + e] = state(u.next_state)?;
    }
    let initial = match &doc.initial_by_vertex {
        None => Initial::Fixed(state(doc.initial)?),
        Some(map) => {
            let mut per = vec![state(doc.initial)?; arena.n()];
            for (name, &s) in map {
                per[vertex(name)?] = state(s)?;
            }
            Initial::PerVertex(per)
        }
    };
    let memory = MemoryStructure::table(states, initial, m, next).map_err(|e| invalid(e.to_string()))?;
    let mut strategy = FiniteMemoryStrategy::new(player, memory, arena.n());
    for mv in &doc.moves {
        let (v, t) = (vertex(&mv.vertex)?, vertex(&mv.successor)?);
        if arena.owner(v) != player {
            return Err(invalid(format!("move at `{}`, which {} does not own", mv.vertex, doc.player)));
        }
        if !arena.has_edge(v, t) {
            return Err(invalid(format!("move {} -> {} is not an edge", mv.vertex, mv.successor)));
        }
        strategy.set_move(v, state(mv.state)? as usize, t);
    }
    // Vertices with a single successor need no listed move.
    for v in (0..arena.n()).filter(|&v| arena.owner(v) == player && arena.successors(v).len() == 1) {
        for s in 0..states {
            if strategy.next_move(v, s as u32).is_none() {
                strategy.set_move(v, s, arena.successors(v)[0] as usize);
            }
        }
    }
    Ok(strategy)
}

#[derive(Debug, Clone, Serialize)]
pub struct VertexWinner {
    pub vertex: String,
    pub winner: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct StatsDoc {
    pub product_vertices: usize,
    pub product_edges: usize,
    pub iterations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResultDoc {
    pub method: &'static str,
    pub n: usize,
    pub k: usize,
    pub init: Option<String>,
    pub winner_from_init: Option<&'static str>,
    pub winners: Vec<VertexWinner>,
    pub eve_region: Vec<String>,
    pub adam_region: Vec<String>,
    pub stats: StatsDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eve_strategy: Option<StrategyDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adam_strategy: Option<StrategyDoc>,
}

pub fn names(game: &Game, vertices: impl IntoIterator<Item = usize>) -> Vec<String> {
    vertices.into_iter().map(|v| game.arena().name(v).to_string()).collect()
}

pub fn result_to_doc(game: &Game, res: &SolveResult, with_strategies: bool) -> ResultDoc {
    let arena = game.arena();
    ResultDoc {
        method: res.method.tag(),
        n: game.n(),
        k: game.k(),
        init: game.init().map(|v| arena.name(v).to_string()),
        winner_from_init: res.winner_from_init(game).map(player_name),
        winners: (0..game.n())
            .map(|v| VertexWinner {
                vertex: arena.name(v).into(),
                winner: player_name(res.winner(v)),
            })
            .collect(),
        eve_region: names(game, res.eve_region.iter()),
        adam_region: names(game, res.adam_region.iter()),
        stats: StatsDoc {
            product_vertices: res.stats.product_vertices,
            product_edges: res.stats.product_edges,
            iterations: res.stats.iterations,
        },
        witness: res.witness.as_ref().map(|w| names(game, w.iter().copied())),
        eve_strategy: with_strategies
            .then(|| res.eve_strategy.as_ref().map(|s| strategy_to_doc(game, s)))
            .flatten(),
        adam_strategy: with_strategies
            .then(|| res.adam_strategy.as_ref().map(|s| strategy_to_doc(game, s)))
            .flatten(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PlayDoc {
    pub winner: &'static str,
    pub steps: usize,
    pub reason: &'static str,
    pub play: Vec<String>,
}

pub fn sim_to_doc(game: &Game, out: &SimOutcome) -> PlayDoc {
    PlayDoc {
        winner: player_name(out.winner),
        steps: out.steps,
        reason: match out.reason {
            SimReason::AllColors => "all_colors",
            SimReason::StateRepeat => "state_repeat",
        },
        play: names(game, out.play.iter().copied()),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleDoc {
    pub start: String,
    pub play: Vec<String>,
    /// Index into `play` where the repeated cycle starts.
    pub loop_start: Option<usize>,
}

pub fn counterexample_to_doc(game: &Game, cx: &Counterexample) -> CounterexampleDoc {
    CounterexampleDoc {
        start: game.arena().name(cx.start).into(),
        play: names(game, cx.play.iter().copied()),
        loop_start: cx.loop_start,
    }
}

/// `{X, moves, play}` for a flower refutation; petals and colors are 1-based.
#[derive(Debug, Clone, Serialize)]
pub struct RefutationDoc {
    #[serde(rename = "X")]
    pub x: Vec<usize>,
    pub stopping_sets: Vec<Vec<usize>>,
    pub moves: Vec<usize>,
    pub play: PlayDoc,
}

fn mask_to_list(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect()
}

pub fn refutation_to_doc(game: &Game, r: &Refutation) -> RefutationDoc {
    RefutationDoc {
        x: mask_to_list(r.x),
        stopping_sets: r.stopping_sets.iter().map(|&m| mask_to_list(m)).collect(),
        moves: r.moves.clone(),
        play: sim_to_doc(game, &r.outcome),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use genreach_core::generators::{canonical_fig5_adam, canonical_flower_eve, gen_fig5, gen_flower};
    use genreach_core::product::solve_fpt;
    use genreach_core::Limits;

    fn round_trip(game: &Game, s: &FiniteMemoryStrategy) {
        let doc = strategy_to_doc(game, s);
        let text = serde_json::to_string(&doc).unwrap();
        let back: StrategyDoc = serde_json::from_str(&text).unwrap();
        let parsed = strategy_from_doc(game, &back).unwrap();
        assert_eq!(strategy_to_doc(game, &parsed), doc);
        assert_eq!(parsed.states(), s.states());
    }

    #[test]
    fn canonical_strategies_round_trip() {
        round_trip(&gen_flower(3).unwrap(), &canonical_flower_eve(3).unwrap());
        round_trip(&gen_fig5(), &canonical_fig5_adam());
        let g = genreach_core::generators::fig1();
        let res = solve_fpt(&g, &Limits::default()).unwrap();
        round_trip(&g, res.eve_strategy.as_ref().unwrap());
        round_trip(&g, res.adam_strategy.as_ref().unwrap());
    }

    #[test]
    fn omitted_updates_keep_state() {
        let g = gen_flower(1).unwrap();
        let doc: StrategyDoc = serde_json::from_str(
            r#"{"player":"eve","states":1,"initial":0,"moves":[{"vertex":"v1","state":0,"successor":"c1"}]}"#,
        )
        .unwrap();
        let s = strategy_from_doc(&g, &doc).unwrap();
        assert_eq!(s.memory().step(0, 0, 1), 0);
    }

    #[test]
    fn rejects_bad_references() {
        let g = gen_flower(1).unwrap();
        let bad = |json: &str| strategy_from_doc(&g, &serde_json::from_str(json).unwrap()).is_err();
        assert!(bad(r#"{"player":"bob","states":1,"initial":0}"#));
        assert!(bad(r#"{"player":"eve","states":1,"initial":2}"#));
        assert!(bad(
            r#"{"player":"eve","states":1,"initial":0,"moves":[{"vertex":"h","state":0,"successor":"v1"}]}"#
        ));
        assert!(bad(
            r#"{"player":"eve","states":1,"initial":0,"moves":[{"vertex":"v1","state":0,"successor":"h"}]}"#
        ));
    }
}
