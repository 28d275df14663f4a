//! Component games: one game per player, summing to the source game, with
//! each player's grand-coalition value equal to their Shapley value.
//!
//! Three independent routes produce them:
//! * [`decompose`] solves `d*d v_i = d*d_i v` for every player;
//! * [`bargaining_closed_form`] evaluates the symmetric recursion for the
//!   pure bargaining game in exact rationals;
//! * [`decompose_axiomatic`] expands a game in the basis games and builds
//!   each basis solution from the null-player lifting of smaller games.

use std::collections::HashMap;
use std::rc::Rc;

use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::coalition::{Coalition, MAX_PLAYERS};
use crate::error::{Error, Result};
use crate::game::{check_players, Game};
use crate::hodge::divergence_of_partial;
use crate::solver::{solve_least_squares, SolverConfig};

/// Default player cap for [`decompose_axiomatic`].
pub const DEFAULT_DEPTH_CAP: usize = 8;

/// A game split into per-player component games.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub source: Game,
    pub components: Vec<Game>,
    /// Relative residual of each player's solve (0 for exact routes).
    pub residuals: Vec<f64>,
}

impl Decomposition {
    pub fn players(&self) -> usize {
        self.source.players()
    }

    pub fn component(&self, player: usize) -> &Game {
        &self.components[player]
    }

    /// `v_i([N])` for every player.
    pub fn grand_values(&self) -> Vec<f64> {
        self.components.iter().map(Game::grand_value).collect()
    }

    /// `Σ_i v_i(S)`.
    pub fn row_sum(&self, s: Coalition) -> f64 {
        self.components.iter().map(|g| g.value(s)).sum()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Largest entrywise difference across all components.
    pub fn max_abs_diff(&self, other: &Decomposition) -> f64 {
        if self.components.len() != other.components.len() {
            return f64::INFINITY;
        }
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }
}

/// Anything that maps a game to its component games.
pub trait Decomposer: Sync {
    fn decompose(&self, game: &Game) -> Result<Decomposition>;
}

impl Decomposer for SolverConfig {
    fn decompose(&self, game: &Game) -> Result<Decomposition> {
        decompose(game, self)
    }
}

/// The axiomatic recursion as a [`Decomposer`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Axiomatic {
    pub depth_cap: usize,
}

impl Default for Axiomatic {
    fn default() -> Self {
        Axiomatic {
            depth_cap: DEFAULT_DEPTH_CAP,
        }
    }
}

impl Decomposer for Axiomatic {
    fn decompose(&self, game: &Game) -> Result<Decomposition> {
        decompose_axiomatic(game, self.depth_cap)
    }
}

/// Solves the least-squares system for every player, in parallel.
pub fn decompose(game: &Game, config: &SolverConfig) -> Result<Decomposition> {
    config.validate()?;
    let n = game.players();
    let solved: Vec<Result<(Game, f64)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let wrap = |e: Error| Error::Component {
                player: i,
                source: Box::new(e),
            };
            let rhs = divergence_of_partial(game, i)?;
            let sol = solve_least_squares(&rhs, config).map_err(wrap)?;
            Ok((sol.field.into_game()?, sol.residual))
        })
        .collect();
    let mut components = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    for r in solved {
        let (g, res) = r?;
        components.push(g);
        residuals.push(res);
    }
    Ok(Decomposition {
        source: game.clone(),
        components,
        residuals,
    })
}

/// Exact component values of the pure bargaining game.
///
/// By symmetry `v_i(T)` depends only on `|T|` and on whether `i ∈ T`, so two
/// rational sequences describe the whole decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct BargainingProfile {
    players: usize,
    /// `v_i(T)` for `i ∈ T`, indexed by `|T|` (entry 0 unused, set to 0).
    pub inside: Vec<BigRational>,
    /// `v_i(T)` for `i ∉ T`, indexed by `|T|` (entry N unused, set to 0).
    pub outside: Vec<BigRational>,
}

impl BargainingProfile {
    /// Runs the recursion on `u_i = v_i − 1/(N·2^N)`:
    /// `u(∅) = −1/(N·2^N)`, `c_k = −a_{k−1}` for members, and
    /// `a_k = (−2^{−N} − k·c_k)/(N−k)` for non-members, which is the balance
    /// `Σ_i u_i(T) = δ(T) − 2^{−N}` at `|T| = k < N`.
    pub fn new(players: usize) -> Result<Self> {
        check_players(players)?;
        let n = players;
        let rat = |num: i64, den: BigInt| BigRational::new(BigInt::from(num), den);
        let two_n = BigInt::one() << n;
        let shift = rat(1, BigInt::from(n) * &two_n);
        let inv_two_n = rat(1, two_n);

        let mut a = vec![BigRational::zero(); n + 1];
        let mut c = vec![BigRational::zero(); n + 1];
        a[0] = -shift.clone();
        for k in 1..=n {
            c[k] = -a[k - 1].clone();
            if k < n {
                let kk = BigRational::from_integer(BigInt::from(k));
                let rest = BigRational::from_integer(BigInt::from(n - k));
                a[k] = (-inv_two_n.clone() - kk * &c[k]) / rest;
            }
        }
        let inside = c
            .iter()
            .enumerate()
            .map(|(k, x)| if k == 0 { BigRational::zero() } else { x + &shift })
            .collect();
        let outside = a
            .iter()
            .enumerate()
            .map(|(k, x)| if k == 0 || k == n { BigRational::zero() } else { x + &shift })
            .collect();
        Ok(BargainingProfile {
            players,
            inside,
            outside,
        })
    }

    pub fn players(&self) -> usize {
        self.players
    }

    /// Exact `v_player(s)`.
    pub fn value(&self, player: usize, s: Coalition) -> &BigRational {
        if s.contains(player) {
            &self.inside[s.len()]
        } else {
            &self.outside[s.len()]
        }
    }

    pub fn to_decomposition(&self) -> Decomposition {
        let n = self.players;
        let inside: Vec<f64> = self.inside.iter().map(to_f64).collect();
        let outside: Vec<f64> = self.outside.iter().map(to_f64).collect();
        let components = (0..n)
            .map(|i| {
                let values = Coalition::all(n)
                    .map(|s| if s.contains(i) { inside[s.len()] } else { outside[s.len()] })
                    .collect();
                Game::from_values(n, values).expect("v_i(∅) is exactly 0")
            })
            .collect();
        Decomposition {
            source: Game::pure_bargaining(n).expect("player count checked"),
            components,
            residuals: vec![0.0; n],
        }
    }
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Component games of the pure bargaining game from the exact recursion.
pub fn bargaining_closed_form(players: usize) -> Result<Decomposition> {
    Ok(BargainingProfile::new(players)?.to_decomposition())
}

type BasisSolution = Rc<Vec<Vec<f64>>>;

/// Memoized basis solutions `Φ[δ_{S,n}]`, keyed by `(n, S)`.
struct BasisSolver {
    memo: HashMap<(usize, u32), BasisSolution>,
}

impl BasisSolver {
    fn solve(&mut self, n: usize, support: Coalition) -> BasisSolution {
        if let Some(hit) = self.memo.get(&(n, support.mask())) {
            return hit.clone();
        }
        let full = Coalition::grand(n);
        let result = if support == full {
            let d = bargaining_closed_form(n).expect("n within range");
            d.components.iter().map(|g| g.values().to_vec()).collect()
        } else {
            // δ_{S,n} = Δ_{(S, S∪{i})} − δ_{S∪{i},n} for the first i ∉ S
            let i = (!support.mask()).trailing_zeros() as usize;
            let top = self.solve(n, support.with(i));
            let lower = self.solve(n - 1, support.compress(i));
            let mut out = vec![vec![0.0; 1 << n]; n];
            for j in (0..n).filter(|&j| j != i) {
                let jj = if j < i { j } else { j - 1 };
                for s in Coalition::all(n) {
                    // the lifted edge-game solution is flat across direction i
                    let lifted = lower[jj][s.without(i).compress(i).index()];
                    out[j][s.index()] = lifted - top[j][s.index()];
                }
            }
            for s in Coalition::all(n) {
                out[i][s.index()] = -top[i][s.index()];
            }
            out
        };
        let result = Rc::new(result);
        self.memo.insert((n, support.mask()), result.clone());
        result
    }
}

/// Component games built from the uniqueness recursion: basis expansion,
/// null-player lifting of `(N−1)`-player solutions, the exact bargaining
/// solution at the top, and linear combination.
pub fn decompose_axiomatic(game: &Game, depth_cap: usize) -> Result<Decomposition> {
    let n = game.players();
    if n > depth_cap.min(MAX_PLAYERS) {
        return Err(Error::DepthCap {
            players: n,
            cap: depth_cap,
        });
    }
    let mut solver = BasisSolver {
        memo: HashMap::new(),
    };
    let mut acc = vec![vec![0.0; 1 << n]; n];
    // larger supports first so each δ_{S∪{i}} is cached before δ_S needs it
    let mut supports: Vec<Coalition> = Coalition::all(n).skip(1).collect();
    supports.sort_by_key(|s| std::cmp::Reverse(s.len()));
    for s in supports {
        let weight = game.value(s);
        let basis = solver.solve(n, s);
        if weight == 0.0 {
            continue;
        }
        for (a, b) in acc.iter_mut().zip(basis.iter()) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += weight * y;
            }
        }
    }
    let components = acc
        .into_iter()
        .map(|mut values| {
            values[0] = 0.0;
            Game::from_values(n, values)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Decomposition {
        source: game.clone(),
        components,
        residuals: vec![0.0; n],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::SolverConfig;

    fn c(labels: &[usize]) -> Coalition {
        Coalition::from_labels(labels.iter().copied())
    }

    fn q(num: i64, den: i64) -> BigRational {
        BigRational::new(num.into(), den.into())
    }

    #[test]
    fn profile_two_players() {
        let p = BargainingProfile::new(2).unwrap();
        assert_eq!(p.value(0, c(&[1])), &q(1, 4));
        assert_eq!(p.value(0, c(&[2])), &q(-1, 4));
        assert_eq!(p.value(0, c(&[1, 2])), &q(1, 2));
        assert_eq!(p.value(1, Coalition::EMPTY), &q(0, 1));
    }

    #[test]
    fn profile_three_players() {
        let p = BargainingProfile::new(3).unwrap();
        assert_eq!(p.value(0, c(&[1])), &q(1, 12));
        assert_eq!(p.value(0, c(&[2])), &q(-1, 24));
        assert_eq!(p.value(0, c(&[2, 3])), &q(-1, 4));
        assert_eq!(p.value(2, c(&[1, 2])), &q(-1, 4));
        assert_eq!(p.value(0, c(&[1, 3])), &q(1, 8));
        assert_eq!(p.value(0, c(&[1, 2, 3])), &q(1, 3));
    }

    #[test]
    fn profile_one_player() {
        let d = bargaining_closed_form(1).unwrap();
        assert_eq!(d.components[0].values(), &[0.0, 1.0]);
        assert!(bargaining_closed_form(0).is_err());
    }

    #[test]
    fn profile_is_efficient_exactly() {
        for n in 1..=12 {
            let p = BargainingProfile::new(n).unwrap();
            for k in 1..n {
                // Σ_i v_i(T) = 0 for |T| = k < n
                let total = BigRational::from_integer(k.into()) * &p.inside[k]
                    + BigRational::from_integer((n - k).into()) * &p.outside[k];
                assert!(total.is_zero(), "n={n} k={k}");
            }
            let grand = BigRational::from_integer(n.into()) * &p.inside[n];
            assert!(grand.is_one());
        }
    }

    #[test]
    fn decompose_bargaining_two() {
        let d = decompose(&Game::pure_bargaining(2).unwrap(), &SolverConfig::default()).unwrap();
        let expected = [0.0, 0.25, -0.25, 0.5];
        for (x, y) in d.components[0].values().iter().zip(expected) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!((d.components[1].value(c(&[2])) - 0.25).abs() < 1e-12);
        assert!((d.components[1].value(c(&[1])) + 0.25).abs() < 1e-12);
    }

    #[test]
    fn decompose_additive_is_exact_split() {
        let w = [1.5, -2.0, 0.25, 3.0];
        let d = decompose(&Game::additive(&w).unwrap(), &SolverConfig::default()).unwrap();
        for (i, comp) in d.components.iter().enumerate() {
            for s in Coalition::all(4) {
                let expected = if s.contains(i) { w[i] } else { 0.0 };
                assert!((comp.value(s) - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn decompose_propagates_player_on_failure() {
        let cfg = SolverConfig::default().with_max_iterations(1);
        let err = decompose(&Game::pure_bargaining(5).unwrap(), &cfg).unwrap_err();
        assert!(matches!(err, Error::Component { .. }), "{err:?}");
    }

    #[test]
    fn axiomatic_bargaining_matches_closed_form() {
        for n in 1..=5 {
            let a = decompose_axiomatic(&Game::pure_bargaining(n).unwrap(), 8).unwrap();
            let b = bargaining_closed_form(n).unwrap();
            assert_eq!(a.max_abs_diff(&b), 0.0);
        }
    }

    #[test]
    fn axiomatic_edge_game_lifts_null_player() {
        let e = Game::edge(2, c(&[2]), 0).unwrap();
        let d = decompose_axiomatic(&e, 8).unwrap();
        assert!(d.components[0].values().iter().all(|&x| x == 0.0));
        // restricted game is δ on the single remaining player: Φ = 1 at {2}
        assert_eq!(d.components[1].values(), &[0.0, 0.0, 1.0, 1.0]);
    }

    #[test]
    fn axiomatic_depth_cap() {
        assert!(matches!(
            decompose_axiomatic(&Game::zero(9).unwrap(), 8),
            Err(Error::DepthCap { players: 9, cap: 8 })
        ));
    }

    #[test]
    fn negativity_witness() {
        let d = decompose(&Game::pure_bargaining(3).unwrap(), &SolverConfig::default()).unwrap();
        assert!(d.components[0].value(c(&[2, 3])) < 0.0);
    }
}
