//! Arena families used as fixtures and lower-bound witnesses, plus seeded
//! random instances.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::memory::{FiniteMemoryStrategy, Initial, MemoryStructure};
use crate::model::{Arena, Game, Objective, Player};

/// Incremental builder for named fixtures.
struct Builder {
    names: Vec<String>,
    owners: Vec<Player>,
    colors: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    fn new(k: usize) -> Self {
        Builder {
            names: Vec::new(),
            owners: Vec::new(),
            colors: vec![Vec::new(); k],
            edges: Vec::new(),
        }
    }

    /// Adds a vertex; `colors` are 1-based.
    fn vertex(&mut self, name: String, owner: Player, colors: &[usize]) -> usize {
        let v = self.names.len();
        self.names.push(name);
        self.owners.push(owner);
        for &c in colors {
            self.colors[c - 1].push(v);
        }
        v
    }

    fn edge(&mut self, u: usize, v: usize) {
        self.edges.push((u, v));
    }

    fn build(self, init: usize) -> Game {
        let n = self.names.len();
        let arena = Arena::new(self.names, self.owners, self.edges).expect("fixture arena is valid");
        let objective = Objective::new(n, self.colors).expect("fixture colors are valid");
        Game::new(arena, objective, Some(init)).expect("fixture game is valid")
    }
}

/// The four-vertex example game: Eve must see one of `a`, `b` and also `d`.
pub fn fig1() -> Game {
    let mut b = Builder::new(2);
    let c = b.vertex("c".into(), Player::Eve, &[]);
    let a = b.vertex("a".into(), Player::Adam, &[1]);
    let bb = b.vertex("b".into(), Player::Eve, &[1]);
    let d = b.vertex("d".into(), Player::Adam, &[2]);
    for (u, v) in [(c, a), (c, bb), (c, d), (a, bb), (bb, a), (a, d), (bb, d), (d, d)] {
        b.edge(u, v);
    }
    b.build(c)
}

/// Adam picks a petal `i` at the heart; Eve then either visits color `i` and
/// returns, or stops in a sink carrying every color but `i`.
pub fn gen_flower(k: usize) -> Result<Game> {
    if k == 0 {
        return Err(Error::BadK { family: "flower", k });
    }
    let mut b = Builder::new(k);
    let heart = b.vertex("h".into(), Player::Adam, &[]);
    for i in 1..=k {
        let v = b.vertex(format!("v{i}"), Player::Eve, &[]);
        let color = b.vertex(format!("c{i}"), Player::Eve, &[i]);
        let others: Vec<usize> = (1..=k).filter(|&j| j != i).collect();
        let stop = b.vertex(format!("not{i}"), Player::Eve, &others);
        b.edge(heart, v);
        b.edge(v, color);
        b.edge(v, stop);
        b.edge(color, heart);
        b.edge(stop, stop);
    }
    Ok(b.build(heart))
}

/// Eve's `2^k - 1` state strategy on the flower: return from a petal the
/// first time Adam offers it and stop the second time. The state is the set
/// of petals already returned from; the full set is never stored.
pub fn canonical_flower_eve(k: usize) -> Result<FiniteMemoryStrategy> {
    let game = gen_flower(k)?;
    let arena = game.arena();
    let full = (1usize << k) - 1;
    let states = full;
    let petal = |i: usize| {
        (
            arena.index_of(&format!("v{i}")).unwrap(),
            arena.index_of(&format!("c{i}")).unwrap(),
        )
    };
    let mut next: Vec<u32> = (0..states).flat_map(|s| core::iter::repeat_n(s as u32, arena.m())).collect();
    for i in 1..=k {
        let (v, c) = petal(i);
        let e = arena.edge_id(v, c).unwrap();
        for s in 0..states {
            let t = s | (1 << (i - 1));
            if t != full {
                next[s * arena.m() + e] = t as u32;
            }
        }
    }
    let memory = MemoryStructure::table(states, Initial::Fixed(0), arena.m(), next)?;
    let mut strategy = FiniteMemoryStrategy::new(Player::Eve, memory, arena.n());
    for i in 1..=k {
        let (v, c) = petal(i);
        let stop = arena.index_of(&format!("not{i}")).unwrap();
        for s in 0..states {
            strategy.set_move(v, s, if s & (1 << (i - 1)) != 0 { stop } else { c });
        }
    }
    strategy.fill_defaults(arena);
    Ok(strategy)
}

/// Three stages of `p` picks each (`k = 2p + 1`): Eve, then Adam, then Eve.
/// Every choice vertex fans out to `k` one-color pass-through vertices that
/// all lead to the next choice vertex, so positions never record past picks.
pub fn gen_picker(k: usize) -> Result<Game> {
    if k < 3 || k.is_multiple_of(2) {
        return Err(Error::BadK { family: "picker", k });
    }
    let p = k / 2;
    let mut b = Builder::new(k);
    let stages = [("e1", Player::Eve), ("a", Player::Adam), ("e3", Player::Eve)];
    let mut choices = Vec::new();
    for (tag, owner) in stages {
        for j in 1..=p {
            choices.push((b.vertex(format!("{tag}_{j}"), owner, &[]), tag, j));
        }
    }
    let sink = b.vertex("end".into(), Player::Eve, &[]);
    b.edge(sink, sink);
    for (idx, &(choice, tag, j)) in choices.iter().enumerate() {
        let next = choices.get(idx + 1).map_or(sink, |c| c.0);
        for c in 1..=k {
            let t = b.vertex(format!("{tag}_{j}_c{c}"), Player::Eve, &[c]);
            b.edge(choice, t);
            b.edge(t, next);
        }
    }
    Ok(b.build(choices[0].0))
}

/// Eve-owned heart with `k/2` Adam petals (petal `i` offers colors `2i-1`
/// and `2i`), and a one-player chain choosing one color of each pair.
pub fn gen_fig4(k: usize) -> Result<Game> {
    if k < 2 || !k.is_multiple_of(2) {
        return Err(Error::BadK { family: "fig4", k });
    }
    let pairs = k / 2;
    let mut b = Builder::new(k);
    let heart = b.vertex("h".into(), Player::Eve, &[]);
    for i in 1..=pairs {
        let petal = b.vertex(format!("p{i}"), Player::Adam, &[]);
        b.edge(heart, petal);
        for c in [2 * i - 1, 2 * i] {
            let v = b.vertex(format!("a{c}"), Player::Eve, &[c]);
            b.edge(petal, v);
            b.edge(v, heart);
        }
    }
    let mut prev: Option<[usize; 2]> = None;
    for i in 1..=pairs {
        let r = b.vertex(format!("r{i}"), Player::Eve, &[]);
        match prev {
            None => b.edge(heart, r),
            Some(ends) => ends.iter().for_each(|&u| b.edge(u, r)),
        }
        let ends = [2 * i - 1, 2 * i].map(|c| b.vertex(format!("b{c}"), Player::Eve, &[c]));
        for &u in &ends {
            b.edge(r, u);
        }
        prev = Some(ends);
    }
    for u in prev.unwrap() {
        b.edge(u, u);
    }
    Ok(b.build(heart))
}

/// Eve's `2^(k/2 + 1) - 1` state strategy on [`gen_fig4`]: ask every petal
/// in order, remember Adam's answers as a path in a complete binary tree, then
/// pick the unseen color of every pair on the right.
pub fn canonical_fig4_eve(k: usize) -> Result<FiniteMemoryStrategy> {
    let game = gen_fig4(k)?;
    let arena = game.arena();
    let pairs = k / 2;
    let states = (1usize << (pairs + 1)) - 1;
    let node = |depth: usize, bits: usize| (1usize << depth) - 1 + bits;
    let idx = |name: String| arena.index_of(&name).unwrap();

    let mut next: Vec<u32> = (0..states).flat_map(|s| core::iter::repeat_n(s as u32, arena.m())).collect();
    for depth in 0..pairs {
        let petal = idx(format!("p{}", depth + 1));
        for bit in 0..2 {
            let color = 2 * depth + 1 + bit;
            let e = arena.edge_id(petal, idx(format!("a{color}"))).unwrap();
            for bits in 0..(1 << depth) {
                next[node(depth, bits) * arena.m() + e] = node(depth + 1, bits | (bit << depth)) as u32;
            }
        }
    }
    let memory = MemoryStructure::table(states, Initial::Fixed(0), arena.m(), next)?;
    let mut strategy = FiniteMemoryStrategy::new(Player::Eve, memory, arena.n());
    let heart = idx("h".into());
    for depth in 0..=pairs {
        for bits in 0..(1 << depth) {
            let target = if depth < pairs {
                idx(format!("p{}", depth + 1))
            } else {
                idx("r1".into())
            };
            strategy.set_move(heart, node(depth, bits), target);
        }
    }
    for bits in 0..(1 << pairs) {
        for i in 0..pairs {
            // Adam showed color 2i+1 when bit i is 0, so Eve takes 2i+2.
            let color = if bits & (1 << i) == 0 { 2 * i + 2 } else { 2 * i + 1 };
            strategy.set_move(idx(format!("r{}", i + 1)), node(pairs, bits), idx(format!("b{color}")));
        }
    }
    strategy.fill_defaults(arena);
    Ok(strategy)
}

/// The fixed 14-vertex game in which Adam needs four memory states: Eve shows
/// three of four colors, then Adam's hub repeatedly offers all colors but one.
pub fn gen_fig5() -> Game {
    let mut b = Builder::new(4);
    let start = b.vertex("s".into(), Player::Eve, &[]);
    let first: Vec<usize> = (1..=4).map(|c| b.vertex(format!("a{c}"), Player::Eve, &[c])).collect();
    let second: Vec<usize> = (1..=4).map(|c| b.vertex(format!("b{c}"), Player::Eve, &[c])).collect();
    let options: Vec<usize> = (1..=4).map(|c| b.vertex(format!("n{c}"), Player::Eve, &[])).collect();
    let hub = b.vertex("c".into(), Player::Adam, &[]);
    let (a, s) = (|c: usize| first[c - 1], |c: usize| second[c - 1]);
    b.edge(start, a(1));
    b.edge(start, a(3));
    b.edge(a(1), a(2));
    b.edge(a(3), a(4));
    b.edge(a(2), s(4));
    b.edge(a(2), s(3));
    b.edge(a(4), s(2));
    b.edge(a(4), s(1));
    for c in 1..=4 {
        b.edge(s(c), hub);
        b.edge(hub, options[c - 1]);
        for d in (1..=4).filter(|&d| d != c) {
            b.edge(options[c - 1], s(d));
        }
    }
    b.build(start)
}

/// Adam's four-state strategy on [`gen_fig5`]: remember which color Eve left
/// out and always offer the option that excludes it.
pub fn canonical_fig5_adam() -> FiniteMemoryStrategy {
    let game = gen_fig5();
    let arena = game.arena();
    let idx = |name: &str| arena.index_of(name).unwrap();
    let mut next: Vec<u32> = (0..4).flat_map(|s| core::iter::repeat_n(s as u32, arena.m())).collect();
    // (edge, missing color): after 1,2 then 4 the color 3 is missing, etc.
    for (from, to, missing) in [("a2", "b4", 3), ("a2", "b3", 4), ("a4", "b2", 1), ("a4", "b1", 2)] {
        let e = arena.edge_id(idx(from), idx(to)).unwrap();
        for s in 0..4 {
            next[s * arena.m() + e] = missing - 1;
        }
    }
    let memory = MemoryStructure::table(4, Initial::Fixed(0), arena.m(), next).expect("valid table");
    let mut strategy = FiniteMemoryStrategy::new(Player::Adam, memory, arena.n());
    for s in 0..4 {
        strategy.set_move(idx("c"), s, idx(&format!("n{}", s + 1)));
    }
    strategy
}

/// How random edges are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeModel {
    /// Every ordered pair (self-loops included) independently.
    Probability(f64),
    /// Exactly this many distinct successors per vertex (capped at `n`).
    OutDegree(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomParams {
    pub n: usize,
    pub k: usize,
    pub edges: EdgeModel,
    /// Probability that a vertex belongs to Eve.
    pub eve_ratio: f64,
    /// Inclusive bounds on the size of each color set.
    pub color_size: (usize, usize),
    pub seed: u64,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            n: 10,
            k: 2,
            edges: EdgeModel::Probability(0.2),
            eve_ratio: 0.5,
            color_size: (1, 3),
            seed: 0,
        }
    }
}

/// A seeded random game. Vertices left without successors get a self-loop;
/// the initial vertex is uniform.
pub fn gen_random(params: &RandomParams) -> Result<Game> {
    let RandomParams {
        n,
        k,
        edges,
        eve_ratio,
        color_size: (lo, hi),
        seed,
    } = *params;
    if n == 0 {
        return Err(Error::BadParams("n must be positive".into()));
    }
    if lo > hi {
        return Err(Error::BadParams(format!("color size bounds {lo}..{hi} are empty")));
    }
    if !(0.0..=1.0).contains(&eve_ratio) {
        return Err(Error::BadParams(format!("eve ratio {eve_ratio} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let owners: Vec<Player> = (0..n)
        .map(|_| {
            if rng.random_bool(eve_ratio) {
                Player::Eve
            } else {
                Player::Adam
            }
        })
        .collect();
    let mut edge_list = Vec::new();
    for u in 0..n {
        let before = edge_list.len();
        match edges {
            EdgeModel::Probability(p) => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::BadParams(format!("edge probability {p} outside [0, 1]")));
                }
                edge_list.extend((0..n).filter(|_| rng.random_bool(p)).map(|v| (u, v)));
            }
            EdgeModel::OutDegree(d) => {
                let mut targets = sample(&mut rng, n, d.min(n)).into_vec();
                targets.sort_unstable();
                edge_list.extend(targets.into_iter().map(|v| (u, v)));
            }
        }
        if edge_list.len() == before {
            edge_list.push((u, u));
        }
    }
    let colors: Vec<Vec<usize>> = (0..k)
        .map(|_| {
            let size = rng.random_range(lo..=hi).min(n);
            let mut set = sample(&mut rng, n, size).into_vec();
            set.sort_unstable();
            set
        })
        .collect();
    let init = rng.random_range(0..n);
    let names = (0..n).map(|v| format!("v{v}")).collect();
    let arena = Arena::new(names, owners, edge_list)?;
    let objective = Objective::new(n, colors)?;
    Game::new(arena, objective, Some(init))
}

/// Arena family tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Flower,
    Picker,
    Fig4,
    Fig5,
    Random,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub family: Family,
    pub k: usize,
    /// Required for [`Family::Random`]; its `k` is overridden by `self.k`.
    pub random: Option<RandomParams>,
}

pub fn generate(params: &GenParams) -> Result<Game> {
    match params.family {
        Family::Flower => gen_flower(params.k),
        Family::Picker => gen_picker(params.k),
        Family::Fig4 => gen_fig4(params.k),
        Family::Fig5 if params.k == 4 => Ok(gen_fig5()),
        Family::Fig5 => Err(Error::BadK {
            family: "fig5",
            k: params.k,
        }),
        Family::Random => {
            let mut random = params
                .random
                .clone()
                .ok_or_else(|| Error::BadParams("random family needs random parameters and a seed".into()))?;
            random.k = params.k;
            gen_random(&random)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flower_sizes() {
        let g = gen_flower(5).unwrap();
        assert_eq!(g.n(), 16);
        assert_eq!(g.arena().successors(g.init().unwrap()).len(), 5);
        let g1 = gen_flower(1).unwrap();
        assert_eq!(g1.n(), 4);
        let stop = g1.arena().index_of("not1").unwrap();
        assert_eq!(g1.objective().mask(stop), 0);
    }

    #[test]
    fn flower_strategy_sizes() {
        assert_eq!(canonical_flower_eve(1).unwrap().states(), 1);
        assert_eq!(canonical_flower_eve(2).unwrap().states(), 3);
        assert_eq!(canonical_flower_eve(3).unwrap().states(), 7);
    }

    #[test]
    fn picker_shape() {
        let g = gen_picker(3).unwrap();
        assert_eq!(g.n(), 3 + 9 + 1);
        assert!(gen_picker(4).is_err());
        assert!(gen_picker(1).is_err());
        assert_eq!(gen_picker(5).unwrap().n(), 6 + 30 + 1);
    }

    #[test]
    fn fig4_shape() {
        let g = gen_fig4(4).unwrap();
        assert_eq!(g.n(), 13);
        assert!(g.objective().color_sets().iter().all(|s| s.len() == 2));
        assert!(gen_fig4(3).is_err());
        assert_eq!(canonical_fig4_eve(4).unwrap().states(), 7);
        assert_eq!(canonical_fig4_eve(2).unwrap().states(), 3);
    }

    #[test]
    fn fig5_shape() {
        let g = gen_fig5();
        assert_eq!(g.n(), 14);
        assert!(g.objective().color_sets().iter().all(|s| s.len() == 2));
        assert_eq!(canonical_fig5_adam().states(), 4);
    }

    #[test]
    fn random_is_seed_deterministic() {
        let p = RandomParams {
            seed: 7,
            n: 20,
            k: 3,
            ..RandomParams::default()
        };
        assert_eq!(gen_random(&p).unwrap(), gen_random(&p).unwrap());
        let other = RandomParams { seed: 8, ..p.clone() };
        assert_ne!(gen_random(&p).unwrap(), gen_random(&other).unwrap());
    }

    #[test]
    fn random_singleton_colors() {
        let p = RandomParams {
            color_size: (1, 1),
            k: 4,
            ..RandomParams::default()
        };
        let g = gen_random(&p).unwrap();
        assert!(g.objective().color_sets().iter().all(|s| s.len() == 1));
    }

    #[test]
    fn random_out_degree() {
        let p = RandomParams {
            n: 50,
            edges: EdgeModel::OutDegree(4),
            ..RandomParams::default()
        };
        assert_eq!(gen_random(&p).unwrap().arena().m(), 200);
    }
}
