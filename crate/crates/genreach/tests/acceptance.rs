//! The acceptance suite: ten criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so that the verdict lines are always
//! printed, and exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use genreach::dimacs::{parse_qdimacs, write_qdimacs};
use genreach::format::{parse_game, serialize_game};
use genreach_core::attractor::solve_opponent_player;
use genreach_core::generators::{
    canonical_flower_eve, fig1, gen_fig4, gen_fig5, gen_flower, gen_picker, gen_random, EdgeModel, RandomParams,
};
use genreach_core::lab::{flower_adversary, min_memory_search, minimax_oracle, verify_strategy, MachineClass, SimReason};
use genreach_core::memory::{Initial, MemoryStructure};
use genreach_core::product::{central_binomial, compress_adam, solve_fpt, solve_product, ProductScope};
use genreach_core::qbf::{eval_qbf_bruteforce, qbf1, qbf_to_game, random_qbf, RandomQbfParams};
use genreach_core::subclasses::{solve_oneplayer_size2, solve_singleton, Lit, TwoSatFormula, TwoSatResult};
use genreach_core::{Arena, FiniteMemoryStrategy, Game, Limits, Objective, Player, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {{
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    }};
}

fn random_game(n: usize, k: usize, edges: EdgeModel, eve: f64, size: (usize, usize), seed: u64) -> Game {
    gen_random(&RandomParams {
        n,
        k,
        edges,
        eve_ratio: eve,
        color_size: size,
        seed,
    })
    .unwrap()
}

/// Fixtures, each paired with a label.
fn fixtures() -> Vec<(String, Game)> {
    let mut out = vec![
        ("FIG1".to_string(), fig1()),
        ("QBF1".into(), qbf_to_game(&qbf1()).unwrap()),
        ("PICKER(3)".into(), gen_picker(3).unwrap()),
        ("FIG4(2)".into(), gen_fig4(2).unwrap()),
        ("FIG4(4)".into(), gen_fig4(4).unwrap()),
        ("FIG5".into(), gen_fig5()),
    ];
    for k in 1..=3 {
        out.push((format!("FLOWER({k})"), gen_flower(k).unwrap()));
    }
    out
}

/// The 200 random two-player games of the memory-bound suites (k ≤ 4).
fn memory_suite() -> Vec<Game> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    (0..200)
        .map(|i| {
            let n = rng.random_range(2..=25);
            let k = rng.random_range(1..=4);
            let p = rng.random_range(0.05..0.3);
            random_game(n, k, EdgeModel::Probability(p), 0.5, (1, 4), 4000 + i)
        })
        .collect()
}

/// Every arena on `n` vertices whose successor sets come from `menu`, with
/// every owner assignment and every objective drawn from `colorings`.
fn tiny_games(n: usize, menu: &[Vec<usize>], colorings: &[Vec<Vec<usize>>]) -> Vec<Game> {
    let mut games = Vec::new();
    let choices = menu.len().pow(n as u32);
    for pick in 0..choices {
        let mut edges = Vec::new();
        for v in 0..n {
            let succ = &menu[(pick / menu.len().pow(v as u32)) % menu.len()];
            let mut targets: Vec<usize> = succ.iter().map(|d| (v + d) % n).collect();
            targets.sort_unstable();
            targets.dedup();
            edges.extend(targets.into_iter().map(|t| (v, t)));
        }
        for owners in 0u32..1 << n {
            let owners: Vec<Player> = (0..n)
                .map(|v| if owners >> v & 1 == 1 { Player::Eve } else { Player::Adam })
                .collect();
            let arena = Arena::unnamed(owners, edges.clone()).unwrap();
            for colors in colorings {
                let objective = Objective::new(n, colors.clone()).unwrap();
                games.push(Game::new(arena.clone(), objective, Some(0)).unwrap());
            }
        }
    }
    games
}

fn subsets(n: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).map(|s| (0..n).filter(|v| s >> v & 1 == 1).collect()).collect()
}

/// k ≤ 2 objectives over the given color-set menu.
fn colorings(sets: &[Vec<usize>]) -> Vec<Vec<Vec<usize>>> {
    let mut out = vec![vec![]];
    out.extend(sets.iter().map(|s| vec![s.clone()]));
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i..] {
            out.push(vec![a.clone(), b.clone()]);
        }
    }
    out
}

fn check_partition(game: &Game, lim: &Limits) -> Result<(), String> {
    let res = solve_fpt(game, lim).map_err(|e| e.to_string())?;
    let n = game.n();
    ensure!(
        res.eve_region.universe() == n && res.adam_region.universe() == n,
        "region universe mismatch"
    );
    ensure!(res.is_partition(), "regions do not partition V:\n{}", serialize_game(game));
    ensure!(
        res.eve_region.len() + res.adam_region.len() == n && res.eve_region.is_disjoint(&res.adam_region),
        "regions overlap or miss vertices:\n{}",
        serialize_game(game)
    );
    Ok(())
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let lim = Limits::default();
    let mut count = 0;
    // n ≤ 3: every successor set, every owner assignment, every color choice.
    for n in 1..=3 {
        let nonempty: Vec<Vec<usize>> = subsets(n).into_iter().filter(|s| !s.is_empty()).collect();
        for game in tiny_games(n, &nonempty, &colorings(&subsets(n))) {
            check_partition(&game, &lim)?;
            count += 1;
        }
    }
    // n = 4: a menu of successor shapes relative to each vertex.
    let menu = vec![vec![1], vec![0], vec![1, 2], vec![0, 3], vec![1, 2, 3]];
    let sets = vec![vec![0], vec![3], vec![1, 2], vec![0, 2], vec![1, 2, 3]];
    for game in tiny_games(4, &menu, &colorings(&sets)) {
        check_partition(&game, &lim)?;
        count += 1;
    }
    let exhaustive = count;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..500 {
        let n = rng.random_range(1..=30);
        let k = rng.random_range(0..=4);
        let p = rng.random_range(0.03..0.4);
        let eve = rng.random_range(0.0..=1.0);
        let game = random_game(n, k, EdgeModel::Probability(p), eve, (1, 5), 1000 + i);
        check_partition(&game, &lim)?;
        count += 1;
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:.1?}, limit 1 min");
    Ok(format!(
        "{exhaustive} exhaustive tiny games + {} random partition V ({elapsed:.1?})",
        count - exhaustive
    ))
}

fn criterion_2() -> Verdict {
    let lim = Limits::default();
    let mut checked = 0;
    for (name, game) in fixtures() {
        let fpt = solve_fpt(&game, &lim).map_err(|e| e.to_string())?.winner_from_init(&game);
        let oracle = minimax_oracle(&game, &lim).map_err(|e| format!("{name}: {e}"))?;
        ensure!(fpt == Some(oracle), "{name}: fpt says {fpt:?}, minimax says {oracle:?}");
        checked += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut random = 0;
    while random < 200 {
        let k = rng.random_range(1..=4);
        let n = rng.random_range(1..=40 / k);
        let p = rng.random_range(0.05..0.5);
        let eve = rng.random_range(0.0..=1.0);
        let game = random_game(n, k, EdgeModel::Probability(p), eve, (1, 3), 2000 + random);
        assert!(n * k <= 40);
        let fpt = solve_fpt(&game, &lim).map_err(|e| e.to_string())?.winner_from_init(&game);
        let oracle = minimax_oracle(&game, &lim).map_err(|e| e.to_string())?;
        ensure!(fpt == Some(oracle), "random game disagrees:\n{}", serialize_game(&game));
        random += 1;
    }
    Ok(format!(
        "{checked} fixtures + {random} random games (n·k ≤ 40), zero mismatches"
    ))
}

fn criterion_3() -> Verdict {
    let lim = Limits::default();
    let q1 = qbf_to_game(&qbf1()).unwrap();
    ensure!(eval_qbf_bruteforce(&qbf1(), &lim).unwrap(), "QBF1 evaluates false");
    ensure!(
        solve_fpt(&q1, &lim).unwrap().winner_from_init(&q1) == Some(Player::Eve),
        "Adam wins the QBF1 game"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut truths, mut count) = (0, 0);
    for i in 0..300 {
        let params = RandomQbfParams {
            vars: rng.random_range(1..=12),
            clauses: rng.random_range(1..=20),
            max_width: rng.random_range(1..=4),
            forall_ratio: rng.random_range(0.0..=1.0),
            seed: 3000 + i,
        };
        let formula = random_qbf(&params).unwrap();
        // Through the QDIMACS text, as the CLI would see it.
        let parsed = parse_qdimacs(&write_qdimacs(&formula)).map_err(|e| e.to_string())?.formula;
        ensure!(parsed == formula, "QDIMACS round trip changed {params:?}");
        let truth = eval_qbf_bruteforce(&parsed, &lim).unwrap();
        let game = qbf_to_game(&parsed).unwrap();
        let eve = solve_fpt(&game, &lim).unwrap().winner_from_init(&game) == Some(Player::Eve);
        ensure!(truth == eve, "mismatch on {params:?}: brute force {truth}, game {eve}");
        truths += truth as usize;
        count += 1;
    }
    Ok(format!(
        "QBF1 true and won by Eve; {count} random formulas agree ({truths} true)"
    ))
}

fn criterion_4() -> Verdict {
    let lim = Limits::default();
    let mut games: Vec<(String, Game)> = fixtures();
    games.extend(
        memory_suite()
            .into_iter()
            .enumerate()
            .map(|(i, g)| (format!("random #{i}"), g)),
    );
    let (mut solvable, mut max_ratio) = (0, 0.0f64);
    for (name, game) in &games {
        let res = solve_fpt(game, &lim).unwrap();
        if res.eve_region.is_empty() {
            continue;
        }
        solvable += 1;
        let sigma = res.eve_strategy.as_ref().ok_or(format!("{name}: no Eve strategy"))?;
        let bound = ((1usize << game.k()) - 1).max(1);
        ensure!(sigma.states() <= bound, "{name}: {} states > {bound}", sigma.states());
        ensure!(
            verify_strategy(game, sigma, &res.eve_region).unwrap().is_winning(),
            "{name}: lifted Eve strategy refuted on her region"
        );
        max_ratio = max_ratio.max(sigma.states() as f64 / bound as f64);
    }
    Ok(format!(
        "{solvable} games with Eve wins: states ≤ 2^k−1 (max fill {:.0}%), all verified",
        max_ratio * 100.0
    ))
}

fn criterion_5() -> Verdict {
    let lim = Limits::default();
    let mut games: Vec<(String, Game)> = fixtures();
    games.extend(
        memory_suite()
            .into_iter()
            .enumerate()
            .map(|(i, g)| (format!("random #{i}"), g)),
    );
    let mut count = 0;
    for (name, game) in &games {
        let solution = solve_product(game, ProductScope::Complete, &lim).unwrap();
        let region = solve_fpt(game, &lim).unwrap().adam_region;
        match compress_adam(game, &solution).map_err(|e| format!("{name}: {e}"))? {
            Some(tau) => {
                let bound = central_binomial(game.k());
                ensure!(tau.states() <= bound, "{name}: {} states > C(k,k/2) = {bound}", tau.states());
                ensure!(
                    verify_strategy(game, &tau, &region).unwrap().is_winning(),
                    "{name}: compressed Adam strategy refuted on his region"
                );
                count += 1;
            }
            None => ensure!(region.is_empty(), "{name}: Adam wins somewhere but no strategy was built"),
        }
    }
    Ok(format!("{count} games with Adam wins: states ≤ C(k,⌊k/2⌋), all verified"))
}

fn flower_choices(game: &Game, k: usize) -> Vec<(usize, usize, usize)> {
    let a = game.arena();
    let id = |s: String| a.index_of(&s).unwrap();
    (1..=k)
        .map(|i| (id(format!("v{i}")), id(format!("c{i}")), id(format!("not{i}"))))
        .collect()
}

fn refutes(game: &Game, k: usize, machine: &FiniteMemoryStrategy) -> Result<(), String> {
    let r = flower_adversary(k, machine).map_err(|e| e.to_string())?;
    ensure!(
        r.outcome.winner == Player::Adam && r.outcome.reason == SimReason::StateRepeat,
        "adversary lost against a {}-state machine",
        machine.states()
    );
    let h = VertexSet::from_indices(game.n(), [game.init().unwrap()]);
    ensure!(
        !verify_strategy(game, machine, &h).unwrap().is_winning(),
        "verifier accepts a refuted machine"
    );
    Ok(())
}

fn criterion_6() -> Verdict {
    let start = Instant::now();
    let lim = Limits::default();
    let f2 = gen_flower(2).unwrap();
    let two = min_memory_search(&f2, Player::Eve, 2, MachineClass::Full, &lim).map_err(|e| e.to_string())?;
    ensure!(two.found.is_none(), "a 2-state FULL Eve machine wins FLOWER(2)");
    let three = min_memory_search(&f2, Player::Eve, 3, MachineClass::Full, &lim).map_err(|e| e.to_string())?;
    ensure!(three.states() == Some(3), "minimum at bound 3 is {:?}", three.states());

    // k = 2: every machine with at most two states that updates on edges.
    // Updates on the absorbing sinks cannot matter and the initial state is
    // state 0 up to renaming, so only the other edges are enumerated.
    let a = f2.arena();
    let m = a.m();
    let choices = flower_choices(&f2, 2);
    let live: Vec<usize> = (0..m).filter(|&e| a.edge(e).0 != a.edge(e).1).collect();
    let mut exhaustive = 0u64;
    for states in 1..=2usize {
        let cells = states * live.len();
        for update in 0u64..(states as u64).pow(cells as u32) {
            let mut next: Vec<u32> = (0..states).flat_map(|s| std::iter::repeat_n(s as u32, m)).collect();
            for (c, &(s, e)) in (0..states)
                .flat_map(|s| live.iter().map(move |&e| (s, e)))
                .collect::<Vec<_>>()
                .iter()
                .enumerate()
            {
                next[s * m + e] = ((update / (states as u64).pow(c as u32)) % states as u64) as u32;
            }
            let mem = MemoryStructure::table(states, Initial::Fixed(0), m, next).unwrap();
            for moves in 0u32..1 << (2 * states) {
                let mut s = FiniteMemoryStrategy::new(Player::Eve, mem.clone(), a.n());
                for (i, &(v, c, stop)) in choices.iter().enumerate() {
                    for st in 0..states {
                        s.set_move(v, st, if moves >> (i * states + st) & 1 == 1 { stop } else { c });
                    }
                }
                s.fill_defaults(a);
                refutes(&f2, 2, &s)?;
                exhaustive += 1;
            }
        }
    }

    let f3 = gen_flower(3).unwrap();
    let a = f3.arena();
    let choices = flower_choices(&f3, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..1000 {
        let states = rng.random_range(1..7);
        let next = (0..states * a.m()).map(|_| rng.random_range(0..states) as u32).collect();
        let mem = MemoryStructure::table(states, Initial::Fixed(rng.random_range(0..states) as u32), a.m(), next).unwrap();
        let mut s = FiniteMemoryStrategy::new(Player::Eve, mem, a.n());
        for &(v, c, stop) in &choices {
            for st in 0..states {
                s.set_move(v, st, if rng.random_bool(0.5) { stop } else { c });
            }
        }
        s.fill_defaults(a);
        refutes(&f3, 3, &s)?;
    }
    // The canonical machines sit exactly at the threshold and win.
    for k in 2..=3 {
        let g = gen_flower(k).unwrap();
        let sigma = canonical_flower_eve(k).unwrap();
        let h = VertexSet::from_indices(g.n(), [g.init().unwrap()]);
        ensure!(
            verify_strategy(&g, &sigma, &h).unwrap().is_winning(),
            "canonical FLOWER({k}) machine loses"
        );
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(300), "took {elapsed:.1?}, target 5 min");
    Ok(format!(
        "FLOWER(2) FULL: none at 2 states, minimum 3; adversary refutes all {exhaustive} FULL machines with ≤ 2 states (k=2) and 1000 random ones with ≤ 6 states (k=3) ({elapsed:.1?})"
    ))
}

fn criterion_7() -> Verdict {
    let lim = Limits::default();
    let mut lines = Vec::new();
    for (name, game, below, need) in [("FIG5", gen_fig5(), 3, 4), ("PICKER(3)", gen_picker(3).unwrap(), 2, 3)] {
        let class = MachineClass::ColorObs;
        let low = min_memory_search(&game, Player::Adam, below, class, &lim).map_err(|e| e.to_string())?;
        ensure!(
            low.found.is_none(),
            "{name}: a {}-state {} Adam machine wins",
            low.states().unwrap(),
            class.tag()
        );
        let high = min_memory_search(&game, Player::Adam, need, class, &lim).map_err(|e| e.to_string())?;
        ensure!(
            high.states() == Some(need),
            "{name}: minimum is {:?}, expected {need}",
            high.states()
        );
        lines.push(format!(
            "{name} needs {need} (class {}, {} partial machines refuted)",
            high.class.tag(),
            high.refuted
        ));
    }
    Ok(lines.join("; "))
}

fn criterion_8() -> Verdict {
    let lim = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..200 {
        let (n, k) = (rng.random_range(1..=30), rng.random_range(0..=5));
        let game = random_game(
            n,
            k,
            EdgeModel::Probability(rng.random_range(0.03..0.3)),
            rng.random_range(0.0..=1.0),
            (1, 1),
            8000 + i,
        );
        let a = solve_singleton(&game).map_err(|e| e.to_string())?;
        let b = solve_fpt(&game, &lim).unwrap();
        ensure!(a.eve_region == b.eve_region, "singleton mismatch:\n{}", serialize_game(&game));
    }
    for i in 0..300 {
        let (n, k) = (rng.random_range(1..=30), rng.random_range(0..=6));
        let game = random_game(
            n,
            k,
            EdgeModel::Probability(rng.random_range(0.03..0.25)),
            1.0,
            (1, 2),
            8200 + i,
        );
        let a = solve_oneplayer_size2(&game).map_err(|e| e.to_string())?;
        let b = solve_fpt(&game, &lim).unwrap();
        ensure!(
            a.eve_region == b.eve_region,
            "one-player mismatch:\n{}",
            serialize_game(&game)
        );
    }
    for i in 0..200 {
        let (n, k) = (rng.random_range(1..=30), rng.random_range(0..=4));
        let game = random_game(
            n,
            k,
            EdgeModel::Probability(rng.random_range(0.03..0.3)),
            0.0,
            (1, 4),
            8500 + i,
        );
        let a = solve_opponent_player(&game).map_err(|e| e.to_string())?;
        let b = solve_fpt(&game, &lim).unwrap();
        ensure!(a.eve_region == b.eve_region, "opponent mismatch:\n{}", serialize_game(&game));
    }
    Ok("200 singleton, 300 one-player size-2, 200 all-Adam games match solve_fpt".into())
}

fn criterion_9() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut sat = 0;
    for _ in 0..500 {
        let vars = rng.random_range(1..=12);
        let mut phi = TwoSatFormula::new(vars);
        for _ in 0..rng.random_range(0..=3 * vars) {
            let lit = |rng: &mut ChaCha8Rng| Lit {
                var: rng.random_range(0..vars),
                positive: rng.random_bool(0.5),
            };
            let width = rng.random_range(1..=2);
            let clause: Vec<Lit> = (0..width).map(|_| lit(&mut rng)).collect();
            phi.push(&clause).unwrap();
        }
        let truth = (0u32..1 << vars).any(|bits| {
            let a: Vec<bool> = (0..vars).map(|i| bits >> i & 1 == 1).collect();
            phi.satisfied_by(&a)
        });
        match phi.solve() {
            TwoSatResult::Sat(a) => {
                ensure!(truth, "solver claims SAT on an unsatisfiable formula");
                ensure!(phi.satisfied_by(&a), "returned assignment violates the formula");
                sat += 1;
            }
            TwoSatResult::Unsat { .. } => ensure!(!truth, "solver claims UNSAT on a satisfiable formula"),
        }
    }
    Ok(format!(
        "500 formulas agree with truth tables ({sat} satisfiable, all assignments valid)"
    ))
}

fn timed_solve(n: usize, seed: u64) -> Result<(Duration, usize, usize), String> {
    let game = random_game(n, 10, EdgeModel::OutDegree(4), 0.5, (1, n / 10), seed);
    // Through the file format once, as a user would feed it.
    let game = parse_game(&serialize_game(&game)).map_err(|e| e.to_string())?;
    let lim = Limits::default();
    let mut best = Duration::MAX;
    let mut product = 0;
    for _ in 0..3 {
        let start = Instant::now();
        let res = solve_fpt(&game, &lim).map_err(|e| e.to_string())?;
        best = best.min(start.elapsed());
        product = res.stats.product_vertices;
    }
    Ok((best, product, game.arena().m()))
}

fn criterion_10() -> Verdict {
    let (t1, p1, m1) = timed_solve(2000, 10)?;
    let (t2, p2, m2) = timed_solve(4000, 10)?;
    ensure!(p1 <= 2000 << 10 && p2 <= 4000 << 10, "product exceeds n·2^k");
    ensure!(t1 < Duration::from_secs(10), "n = 2000 took {t1:.2?}");
    let ratio = t2.as_secs_f64() / t1.as_secs_f64();
    ensure!(
        ratio <= 2.5,
        "doubling n multiplied the runtime by {ratio:.2} ({t1:.2?} vs {t2:.2?}, product {p1} vs {p2}, m {m1} vs {m2})"
    );
    Ok(format!(
        "n=2000 m={m1}: {t1:.2?}, product {p1} ≤ {}; n=4000 m={m2}: {t2:.2?}, product {p2}; ratio {ratio:.2}",
        2000 << 10
    ))
}

fn main() {
    // `cargo test -- <filter>` passes arguments; run everything regardless,
    // but honour `--list` so test discovery sees nothing to list.
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let criteria: [Criterion; 10] = [
        ("determinacy", criterion_1),
        ("oracle agreement", criterion_2),
        ("QBF soundness", criterion_3),
        ("Eve memory upper bound", criterion_4),
        ("Adam memory upper bound", criterion_5),
        ("Eve lower bound (flower)", criterion_6),
        ("Adam lower bound (FIG5, picker)", criterion_7),
        ("subclass equivalence", criterion_8),
        ("2-SAT correctness", criterion_9),
        ("FPT scaling", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let verdict = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match verdict {
            Ok(detail) => println!("PASS criterion {:>2} ({name}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2} ({name}): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
