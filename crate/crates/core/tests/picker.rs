//! The picker gadget punishes Adam for leaving Eve's colors: as soon as he
//! picks one she has not visited, she can visit everything that is left.

use genreach_core::generators::gen_picker;
use genreach_core::lab::simulate;
use genreach_core::memory::MemoryStructure;
use genreach_core::product::{solve_fpt, solve_product, ProductScope};
use genreach_core::{FiniteMemoryStrategy, Game, Limits, Player};

fn vertex(game: &Game, name: &str) -> usize {
    game.arena().index_of(name).unwrap()
}

/// Eve's last stage from colors `M` is won iff `|M| + p ≥ k`.
#[test]
fn last_stage_is_won_exactly_after_a_deviation() {
    for k in [3usize, 5] {
        let p = k / 2;
        let game = gen_picker(k).unwrap();
        let sol = solve_product(&game, ProductScope::Complete, &Limits::default()).unwrap();
        let e3 = vertex(&game, "e3_1");
        let a = vertex(&game, "a_1");
        for mask in 0u32..1 << k {
            let size = mask.count_ones() as usize;
            let expected = if size + p >= k { Player::Eve } else { Player::Adam };
            assert_eq!(sol.winner(e3, mask), Some(expected), "k={k} mask={mask:#b}");
            if size == p {
                // Adam can always stay inside the p colors Eve picked.
                assert_eq!(sol.winner(a, mask), Some(Player::Adam));
            }
        }
    }
}

/// Eve picks `p` distinct colors, then every positional Adam machine plays
/// against the solver's strategy: Eve wins exactly when Adam strays outside
/// her colors.
#[test]
fn deviating_adam_machines_lose() {
    for k in [3usize, 5] {
        let p = k / 2;
        let game = gen_picker(k).unwrap();
        let arena = game.arena();
        let res = solve_fpt(&game, &Limits::default()).unwrap();
        assert_eq!(res.winner_from_init(&game), Some(Player::Adam));
        // The solver's strategy, except that stage one picks colors 1..=p.
        let mut sigma = res.eve_strategy.clone().unwrap();
        for j in 1..=p {
            for state in 0..sigma.states() {
                sigma.set_move(
                    vertex(&game, &format!("e1_{j}")),
                    state,
                    vertex(&game, &format!("e1_{j}_c{j}")),
                );
            }
        }
        let (mut deviations, mut loyal) = (0, 0);
        for picks in 0..k.pow(p as u32) {
            let mut tau = FiniteMemoryStrategy::new(Player::Adam, MemoryStructure::trivial(arena), arena.n());
            let mut adam_colors = 0u64;
            for j in 1..=p {
                let c = picks / k.pow(j as u32 - 1) % k + 1;
                adam_colors |= 1 << (c - 1);
                tau.set_move(vertex(&game, &format!("a_{j}")), 0, vertex(&game, &format!("a_{j}_c{c}")));
            }
            let out = simulate(&game, &sigma, &tau).unwrap();
            let eve_colors = (1..=p)
                .map(|j| {
                    let after = out.play.iter().position(|&v| v == vertex(&game, &format!("e1_{j}"))).unwrap() + 1;
                    game.objective().mask(out.play[after])
                })
                .fold(0, |acc, m| acc | m);
            assert_eq!(eve_colors, (1 << p) - 1);
            if adam_colors & !eve_colors != 0 {
                assert_eq!(
                    out.winner,
                    Player::Eve,
                    "k={k}: Adam strayed with {adam_colors:#b} and still won"
                );
                deviations += 1;
            } else {
                assert_eq!(out.winner, Player::Adam);
                loyal += 1;
            }
        }
        assert_eq!(loyal, p.pow(p as u32));
        assert_eq!(deviations + loyal, k.pow(p as u32));
    }
}

/// With Adam's stage handed to Eve she controls everything and wins.
#[test]
fn without_adam_eve_wins() {
    let game = gen_picker(3).unwrap();
    let all_eve = game.with_owners(vec![Player::Eve; game.n()]).unwrap();
    let res = solve_fpt(&all_eve, &Limits::default()).unwrap();
    assert_eq!(res.winner_from_init(&all_eve), Some(Player::Eve));
}
