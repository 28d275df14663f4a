//! Classical Shapley values: the subset-weighted formula and the
//! permutation average.

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::Game;
use crate::numeric::CompensatedSum;

/// Default player cap for [`shapley_by_permutations`] (it visits `N!` orders).
pub const DEFAULT_PERMUTATION_CAP: usize = 10;

/// Per-player allocation of the grand-coalition value.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapleyAllocation {
    pub phi: Vec<f64>,
}

impl ShapleyAllocation {
    pub fn players(&self) -> usize {
        self.phi.len()
    }

    pub fn total(&self) -> f64 {
        self.phi.iter().copied().collect::<CompensatedSum>().value()
    }

    pub fn max_abs_diff(&self, other: &ShapleyAllocation) -> f64 {
        self.phi
            .iter()
            .zip(&other.phi)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `|S|!(N−1−|S|)!/N! = 1 / (N · C(N−1, |S|))` for every coalition size.
fn subset_weights(players: usize) -> Vec<f64> {
    let n = players as u64;
    let mut binom = 1u64;
    (0..players as u64)
        .map(|s| {
            let w = 1.0 / (n * binom) as f64;
            binom = binom * (n - 1 - s) / (s + 1);
            w
        })
        .collect()
}

/// Shapley values by the explicit subset formula with compensated summation.
pub fn shapley_direct(game: &Game) -> ShapleyAllocation {
    let n = game.players();
    let weights = subset_weights(n);
    let phi = (0..n)
        .map(|i| {
            Coalition::all_without(n, i)
                .map(|s| weights[s.len()] * game.marginal(s, i))
                .collect::<CompensatedSum>()
                .value()
        })
        .collect();
    ShapleyAllocation { phi }
}

/// Shapley values as the average marginal contribution over all join orders.
pub fn shapley_by_permutations(game: &Game) -> Result<ShapleyAllocation> {
    shapley_by_permutations_capped(game, DEFAULT_PERMUTATION_CAP)
}

pub fn shapley_by_permutations_capped(game: &Game, cap: usize) -> Result<ShapleyAllocation> {
    let n = game.players();
    if n > cap {
        return Err(Error::EnumerationCap { players: n, cap });
    }
    let mut sums = vec![CompensatedSum::default(); n];
    let mut order: Vec<usize> = (0..n).collect();
    let mut count = 0u64;
    let mut visit = |order: &[usize]| {
        let mut formed = Coalition::EMPTY;
        for &i in order {
            sums[i].add(game.marginal(formed, i));
            formed = formed.with(i);
        }
        count += 1;
    };
    // Heap's algorithm, iterative form.
    let mut c = vec![0usize; n];
    visit(&order);
    let mut k = 1;
    while k < n {
        if c[k] < k {
            if k % 2 == 0 {
                order.swap(0, k);
            } else {
                order.swap(c[k], k);
            }
            visit(&order);
            c[k] += 1;
            k = 1;
        } else {
            c[k] = 0;
            k += 1;
        }
    }
    let total = count as f64;
    Ok(ShapleyAllocation {
        phi: sums.into_iter().map(|s| s.value() / total).collect(),
    })
}
