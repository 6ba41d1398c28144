//! Shared helpers for integration tests.
#![allow(dead_code)]

pub mod ltl;

use assumekit::bench::{random_game, RandomParams};
use assumekit::{EdgeSet, GameGraph, LassoWord, Letter, Player};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Parameters for small seeded games: 2 to 6 states, up to `max_prio`
/// priorities.
pub fn small_params(seed: u64, max_prio: u32, prob_fraction: f64) -> RandomParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    RandomParams {
        num_states: rng.gen_range(2..=6),
        edge_density: [0.25, 0.4, 0.55][rng.gen_range(0..3)],
        num_priorities: rng.gen_range(1..=max_prio),
        prob_fraction,
    }
}

pub fn small_game(seed: u64, max_prio: u32, prob_fraction: f64) -> GameGraph {
    random_game(&small_params(seed, max_prio, prob_fraction), seed).expect("valid parameters")
}

/// A random subset of the player-2 edges.
pub fn random_fair(g: &GameGraph, seed: u64) -> EdgeSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(31).wrapping_add(7));
    g.player_edges(Player::P2)
        .into_iter()
        .filter(|_| rng.gen_bool(0.5))
        .collect()
}

/// A random lasso word over `props`.
pub fn random_word(rng: &mut impl Rng, props: &[String], max_stem: usize, max_cycle: usize) -> LassoWord {
    let letters = Letter::all_over(props);
    let stem = rng.gen_range(0..=max_stem);
    let cycle = rng.gen_range(1..=max_cycle);
    let mut pick = |k: usize| -> Vec<Letter> {
        (0..k).map(|_| letters[rng.gen_range(0..letters.len())].clone()).collect()
    };
    let s = pick(stem);
    let c = pick(cycle);
    LassoWord::new(s, c)
}

pub fn word(stem: &[&[&str]], cycle: &[&[&str]]) -> LassoWord {
    let l = |xs: &[&[&str]]| {
        xs.iter()
            .map(|x| Letter::from_props(x.iter().copied()))
            .collect()
    };
    LassoWord::new(l(stem), l(cycle))
}
