#![allow(dead_code)]

use hodge_shapley::{Coalition, Game};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn c(labels: &[usize]) -> Coalition {
    Coalition::from_labels(labels.iter().copied())
}

pub fn seeded_game(players: usize, seed: u64) -> Game {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Game::random(players, &mut rng).unwrap()
}

/// Random game with `lo..=hi` players and values in [-1, 1).
pub fn game(lo: usize, hi: usize) -> impl Strategy<Value = Game> {
    (lo..=hi).prop_flat_map(|n| {
        prop::collection::vec(-1.0f64..1.0, (1usize << n) - 1).prop_map(move |tail| {
            let mut values = vec![0.0];
            values.extend(tail);
            Game::from_values(n, values).unwrap()
        })
    })
}

/// Random game paired with a random coalition of the same size.
pub fn game_and_coalition(lo: usize, hi: usize) -> impl Strategy<Value = (Game, Coalition)> {
    game(lo, hi).prop_flat_map(|g| {
        let n = g.players();
        (Just(g), 0u32..(1u32 << n)).prop_map(|(g, m)| (g, Coalition::from_mask(m)))
    })
}

/// Random game with two players picked from it.
pub fn game_and_pair(lo: usize, hi: usize) -> impl Strategy<Value = (Game, usize, usize)> {
    game(lo, hi).prop_flat_map(|g| {
        let n = g.players();
        (Just(g), 0..n, 0..n)
    })
}
