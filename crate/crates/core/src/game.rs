//! Cooperative games as dense value tables over the coalition hypercube.

use rand::Rng;

use crate::coalition::{Coalition, MAX_PLAYERS};
use crate::error::{Error, Result};

/// A cooperative game: one value per coalition, indexed by bitmask, with
/// `v(∅) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Game {
    players: usize,
    values: Vec<f64>,
}

pub(crate) fn check_players(players: usize) -> Result<()> {
    if players == 0 {
        return Err(Error::NoPlayers(players));
    }
    if players > MAX_PLAYERS {
        return Err(Error::TooManyPlayers {
            players,
            max: MAX_PLAYERS,
        });
    }
    Ok(())
}

pub(crate) fn check_player(players: usize, player: usize) -> Result<()> {
    if player >= players {
        return Err(Error::PlayerOutOfRange { player, players });
    }
    Ok(())
}

pub(crate) fn check_coalition(players: usize, coalition: Coalition) -> Result<()> {
    if !coalition.fits(players) {
        return Err(Error::CoalitionOutOfRange {
            coalition: coalition.to_string(),
            players,
        });
    }
    Ok(())
}

impl Game {
    /// Builds a game from a partial table; unspecified coalitions are 0.
    pub fn new<I>(players: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Coalition, f64)>,
    {
        let mut game = Game::zero(players)?;
        for (coalition, value) in entries {
            check_coalition(players, coalition)?;
            if coalition.is_empty() {
                if value != 0.0 {
                    return Err(Error::NonzeroEmptyValue(value));
                }
                continue;
            }
            game.values[coalition.index()] = value;
        }
        Ok(game)
    }

    /// Wraps a full table of `2^players` values in mask order.
    pub fn from_values(players: usize, values: Vec<f64>) -> Result<Self> {
        check_players(players)?;
        let expected = 1usize << players;
        if values.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: values.len(),
            });
        }
        if values[0] != 0.0 {
            return Err(Error::NonzeroEmptyValue(values[0]));
        }
        Ok(Game { players, values })
    }

    pub fn zero(players: usize) -> Result<Self> {
        check_players(players)?;
        Ok(Game {
            players,
            values: vec![0.0; 1 << players],
        })
    }

    /// The pure bargaining game: 1 at the grand coalition, 0 elsewhere.
    pub fn pure_bargaining(players: usize) -> Result<Self> {
        Game::basis(players, Coalition::grand(players.min(MAX_PLAYERS)))
    }

    /// The basis game supported on a single nonempty coalition.
    pub fn basis(players: usize, support: Coalition) -> Result<Self> {
        let mut game = Game::zero(players)?;
        check_coalition(players, support)?;
        if support.is_empty() {
            return Err(Error::EmptySupport);
        }
        game.values[support.index()] = 1.0;
        Ok(game)
    }

    /// The edge game: 1 at `base` and at `base ∪ {player}`, 0 elsewhere.
    /// `player` is a null player of the result.
    pub fn edge(players: usize, base: Coalition, player: usize) -> Result<Self> {
        let mut game = Game::zero(players)?;
        check_player(players, player)?;
        check_coalition(players, base)?;
        if base.is_empty() {
            return Err(Error::EmptySupport);
        }
        if base.contains(player) {
            return Err(Error::PlayerInBase { player });
        }
        game.values[base.index()] = 1.0;
        game.values[base.with(player).index()] = 1.0;
        Ok(game)
    }

    /// `v(S) = Σ_{i∈S} weights[i]`.
    pub fn additive(weights: &[f64]) -> Result<Self> {
        let players = weights.len();
        check_players(players)?;
        let mut values = vec![0.0; 1 << players];
        for m in 1..values.len() {
            let low = m.trailing_zeros() as usize;
            values[m] = values[m & (m - 1)] + weights[low];
        }
        Ok(Game { players, values })
    }

    /// A game with values drawn uniformly from `[-1, 1)`.
    pub fn random<R: Rng + ?Sized>(players: usize, rng: &mut R) -> Result<Self> {
        check_players(players)?;
        let mut values: Vec<f64> = (0..1usize << players)
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        values[0] = 0.0;
        Ok(Game { players, values })
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn value(&self, coalition: Coalition) -> f64 {
        self.values[coalition.index()]
    }

    /// The table in mask order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn grand_value(&self) -> f64 {
        *self.values.last().expect("tables are never empty")
    }

    /// `v(S ∪ {i}) − v(S)` for `i ∉ S`.
    pub fn marginal(&self, coalition: Coalition, player: usize) -> f64 {
        self.value(coalition.with(player)) - self.value(coalition)
    }

    /// Largest absolute marginal contribution of `player`; zero exactly for a null player.
    pub fn max_marginal(&self, player: usize) -> f64 {
        Coalition::all_without(self.players, player)
            .map(|s| self.marginal(s, player).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_null_player(&self, player: usize) -> bool {
        self.max_marginal(player) == 0.0
    }

    /// `v^{ij}(S) = v(S^{ij})`: the game with the roles of `i` and `j` exchanged.
    pub fn swap_players(&self, i: usize, j: usize) -> Result<Self> {
        check_player(self.players, i)?;
        check_player(self.players, j)?;
        let values = Coalition::all(self.players)
            .map(|s| self.value(s.swap(i, j)))
            .collect();
        Ok(Game {
            players: self.players,
            values,
        })
    }

    /// The game restricted to `[N] \ {player}`, relabeled onto `[N-1]`.
    pub fn restrict(&self, player: usize) -> Result<Self> {
        check_player(self.players, player)?;
        if self.players < 2 {
            return Err(Error::RestrictSinglePlayer);
        }
        let values = Coalition::all_without(self.players, player)
            .map(|s| self.value(s))
            .collect();
        Ok(Game {
            players: self.players - 1,
            values,
        })
    }

    /// `w(S) = v(S \ {player})`, a game in which `player` is null.
    pub fn nullify(&self, player: usize) -> Result<Self> {
        check_player(self.players, player)?;
        let values = Coalition::all(self.players)
            .map(|s| self.value(s.without(player)))
            .collect();
        Ok(Game {
            players: self.players,
            values,
        })
    }

    /// `alpha·self + beta·other`.
    pub fn combine(&self, alpha: f64, other: &Game, beta: f64) -> Result<Self> {
        if self.players != other.players {
            return Err(Error::PlayerCountMismatch {
                left: self.players,
                right: other.players,
            });
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        Ok(Game {
            players: self.players,
            values,
        })
    }

    /// Largest absolute entrywise difference; infinite on a player-count mismatch.
    pub fn max_abs_diff(&self, other: &Game) -> f64 {
        if self.players != other.players {
            return f64::INFINITY;
        }
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}
