//! Path integrals of marginal contributions along the uniform random walk
//! on the coalition hypercube.
//!
//! From the current coalition the walk toggles one uniformly drawn player,
//! so each of the `N` neighbors is reached with probability `1/N`. Along a
//! walk stopped at its first visit to a target `S`, player `i` collects
//! `v(X ∪ {i}) − v(X)` every time they join and the negation every time
//! they leave. The expectation of that total equals the component game
//! value `v_i(S)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::{check_coalition, check_player, Game};
use crate::solver::{solve_grounded, GroundedFactor, DENSE_MAX_PLAYERS};

/// Default per-sample step cap.
pub const DEFAULT_MAX_STEPS: u64 = 10_000_000;

/// Samples per reduction block; blocks are merged in a fixed tree.
const SAMPLE_BLOCK: u64 = 4096;

/// Tolerance for the first-step linear solves.
const EXACT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainConfig {
    pub players: usize,
    pub start: Coalition,
    pub seed: u64,
    pub max_steps: u64,
}

impl ChainConfig {
    pub fn new(players: usize, seed: u64) -> Self {
        ChainConfig {
            players,
            start: Coalition::EMPTY,
            seed,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }

    pub fn with_start(mut self, start: Coalition) -> Self {
        self.start = start;
        self
    }

    pub fn with_max_steps(mut self, max_steps: u64) -> Self {
        self.max_steps = max_steps;
        self
    }

    fn validate(&self, game: &Game) -> Result<()> {
        if self.players != game.players() {
            return Err(Error::PlayerCountMismatch {
                left: self.players,
                right: game.players(),
            });
        }
        check_coalition(self.players, self.start)?;
        if self.max_steps == 0 {
            return Err(Error::InvalidConfig("max_steps must be at least 1".into()));
        }
        Ok(())
    }

    /// The random stream of one sample path: keyed by the seed, with the
    /// sample index selecting the ChaCha stream and the step count advancing
    /// the block counter. Paths do not depend on evaluation order.
    pub fn stream(&self, sample_index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(sample_index);
        rng
    }
}

/// Monte Carlo estimate of one expected path contribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathEstimate {
    pub target: Coalition,
    pub player: usize,
    pub samples: u64,
    pub mean: f64,
    /// Sample standard deviation over `sqrt(samples)`; 0 for a single sample.
    pub std_error: f64,
}

/// Uniform player draw used by every walk step.
pub fn draw_player<R: Rng + ?Sized>(rng: &mut R, players: usize) -> usize {
    rng.random_range(0..players)
}

/// One step of the walk: toggle the drawn (0-based) player.
pub fn step_chain(state: Coalition, draw: usize) -> Coalition {
    state.toggle(draw)
}

/// Player contributions along one sampled path from `config.start` to the
/// first visit of `target`. The entries sum to `v(target) − v(start)`.
pub fn sample_path_contributions(
    game: &Game,
    target: Coalition,
    config: &ChainConfig,
    sample_index: u64,
) -> Result<Vec<f64>> {
    config.validate(game)?;
    check_coalition(config.players, target)?;
    walk(game, target, config, sample_index)
}

fn walk(game: &Game, target: Coalition, config: &ChainConfig, sample_index: u64) -> Result<Vec<f64>> {
    let n = config.players;
    let v = game.values();
    let mut totals = vec![0.0; n];
    let mut state = config.start;
    if state == target {
        return Ok(totals);
    }
    let mut rng = config.stream(sample_index);
    for _ in 0..config.max_steps {
        let i = draw_player(&mut rng, n);
        let next = step_chain(state, i);
        totals[i] += v[next.index()] - v[state.index()];
        state = next;
        if state == target {
            return Ok(totals);
        }
    }
    Err(Error::StepCapExceeded {
        sample: sample_index,
        steps: config.max_steps,
    })
}

/// `D_i v(target)` on one sampled path.
pub fn sample_path_contribution(
    game: &Game,
    player: usize,
    target: Coalition,
    config: &ChainConfig,
    sample_index: u64,
) -> Result<f64> {
    check_player(game.players(), player)?;
    Ok(sample_path_contributions(game, target, config, sample_index)?[player])
}

/// Running count, mean and centered second moment.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1.0;
        let delta = x - self.mean;
        self.mean += delta / self.count;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(a: Moments, b: Moments) -> Moments {
        if a.count == 0.0 {
            return b;
        }
        if b.count == 0.0 {
            return a;
        }
        let count = a.count + b.count;
        let delta = b.mean - a.mean;
        Moments {
            count,
            mean: a.mean + delta * b.count / count,
            m2: a.m2 + b.m2 + delta * delta * a.count * b.count / count,
        }
    }

    fn std_error(&self) -> f64 {
        if self.count < 2.0 {
            return 0.0;
        }
        (self.m2 / (self.count - 1.0)).sqrt() / self.count.sqrt()
    }
}

/// Pairwise merge in a tree whose shape depends only on the block count.
fn merge_tree(mut level: Vec<Vec<Moments>>) -> Vec<Moments> {
    while level.len() > 1 {
        level = level
            .chunks(2)
            .map(|pair| match pair {
                [a, b] => a.iter().zip(b).map(|(x, y)| Moments::merge(*x, *y)).collect(),
                [a] => a.clone(),
                _ => unreachable!(),
            })
            .collect();
    }
    level.pop().unwrap_or_default()
}

/// Estimates `V_i(target)` for every player from shared sample paths.
pub fn estimate_all(
    game: &Game,
    target: Coalition,
    config: &ChainConfig,
    samples: u64,
) -> Result<Vec<PathEstimate>> {
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    config.validate(game)?;
    check_coalition(config.players, target)?;
    let n = config.players;
    let blocks = samples.div_ceil(SAMPLE_BLOCK);
    let per_block: Vec<Result<Vec<Moments>>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut m = vec![Moments::default(); n];
            let end = ((b + 1) * SAMPLE_BLOCK).min(samples);
            for k in b * SAMPLE_BLOCK..end {
                let contrib = walk(game, target, config, k)?;
                for (acc, x) in m.iter_mut().zip(contrib) {
                    acc.push(x);
                }
            }
            Ok(m)
        })
        .collect();
    let mut level = Vec::with_capacity(per_block.len());
    for r in per_block {
        level.push(r?);
    }
    let merged = merge_tree(level);
    Ok(merged
        .into_iter()
        .enumerate()
        .map(|(player, m)| PathEstimate {
            target,
            player,
            samples,
            mean: m.mean,
            std_error: m.std_error(),
        })
        .collect())
}

/// Estimates `V_i(target) = E[D_i v(target)]` by Monte Carlo.
pub fn estimate_value(
    game: &Game,
    player: usize,
    target: Coalition,
    config: &ChainConfig,
    samples: u64,
) -> Result<PathEstimate> {
    check_player(game.players(), player)?;
    Ok(estimate_all(game, target, config, samples)?[player])
}

/// First-step analysis: `h(target) = 0` and, elsewhere,
/// `N·h(x) − Σ_{y∼x} h(y) = Σ_{y∼x} d_i v(x, y) = v(x ⊕ i) − v(x)`.
/// Returns `h` over all coalitions for every player.
pub fn expected_contributions(game: &Game, target: Coalition) -> Result<Vec<Vec<f64>>> {
    let n = game.players();
    check_coalition(n, target)?;
    let v = game.values();
    let rhs_for = |i: usize| -> Vec<f64> {
        Coalition::all(n)
            .map(|x| {
                if x == target {
                    0.0
                } else {
                    v[x.toggle(i).index()] - v[x.index()]
                }
            })
            .collect()
    };
    if n <= DENSE_MAX_PLAYERS {
        let factor = GroundedFactor::new(n, target)?;
        (0..n)
            .map(|i| {
                let rhs = rhs_for(i);
                let h = factor.solve(&rhs)?;
                let residual = crate::solver::grounded_residual(n, target, &h, &rhs);
                if residual > EXACT_TOLERANCE {
                    return Err(Error::SolveFailure { residual });
                }
                Ok(h)
            })
            .collect()
    } else {
        (0..n)
            .map(|i| Ok(solve_grounded(n, target, &rhs_for(i), EXACT_TOLERANCE)?.0))
            .collect()
    }
}

/// Exact `E[D_i v(target)]` for the walk started at `start`.
pub fn exact_value(game: &Game, player: usize, target: Coalition, start: Coalition) -> Result<f64> {
    check_player(game.players(), player)?;
    check_coalition(game.players(), start)?;
    let h = expected_contributions(game, target)?;
    Ok(h[player][start.index()])
}

/// Checks `V_i(T) − V_i(S) = V_i^S(T)` and `V_i^S(T) = −V_i^T(S)` with exact
/// first-step values; returns the larger absolute defect.
pub fn check_transition_formula(game: &Game, player: usize, s: Coalition, t: Coalition) -> Result<f64> {
    check_player(game.players(), player)?;
    let to_t = expected_contributions(game, t)?;
    let to_s = expected_contributions(game, s)?;
    let v_t = to_t[player][Coalition::EMPTY.index()];
    let v_s = to_s[player][Coalition::EMPTY.index()];
    let v_s_t = to_t[player][s.index()];
    let v_t_s = to_s[player][t.index()];
    let formula = (v_t - v_s - v_s_t).abs();
    let antisymmetry = (v_s_t + v_t_s).abs();
    Ok(formula.max(antisymmetry))
}
