//! Calculus on the coalition hypercube.
//!
//! Vertices are coalitions; each edge `(S, S ∪ {i})` is oriented along
//! inclusion. Vertex fields live in `ℓ²(V)`, edge fields in `ℓ²(E)`, and
//! reading an edge against its orientation negates the stored value.

use rayon::prelude::*;

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::{check_player, check_players, Game};
use crate::numeric::{self, BLOCK};

/// A real function on all `2^N` coalitions, with no constraint at `∅`.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexField {
    players: usize,
    values: Vec<f64>,
}

impl VertexField {
    pub fn zeros(players: usize) -> Result<Self> {
        check_players(players)?;
        Ok(VertexField {
            players,
            values: vec![0.0; 1 << players],
        })
    }

    pub fn constant(players: usize, value: f64) -> Result<Self> {
        check_players(players)?;
        Ok(VertexField {
            players,
            values: vec![value; 1 << players],
        })
    }

    pub fn from_values(players: usize, values: Vec<f64>) -> Result<Self> {
        check_players(players)?;
        if values.len() != 1 << players {
            return Err(Error::LengthMismatch {
                expected: 1 << players,
                found: values.len(),
            });
        }
        Ok(VertexField { players, values })
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn get(&self, s: Coalition) -> f64 {
        self.values[s.index()]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// `⟨u, w⟩ = Σ_S u(S) w(S)`.
    pub fn dot(&self, other: &VertexField) -> f64 {
        numeric::dot(&self.values, &other.values)
    }

    pub fn sum(&self) -> f64 {
        numeric::sum(&self.values)
    }

    pub fn norm(&self) -> f64 {
        numeric::norm(&self.values)
    }

    /// Shifts by a constant so that the value at `∅` becomes exactly 0.
    pub fn pin_empty(&mut self) {
        let base = self.values[0];
        for x in &mut self.values {
            *x -= base;
        }
        self.values[0] = 0.0;
    }

    /// Converts to a game; fails unless the value at `∅` is 0.
    pub fn into_game(self) -> Result<Game> {
        Game::from_values(self.players, self.values)
    }
}

impl From<&Game> for VertexField {
    fn from(game: &Game) -> Self {
        VertexField {
            players: game.players(),
            values: game.values().to_vec(),
        }
    }
}

/// A real function on the `N·2^(N−1)` inclusion-oriented edges.
///
/// Direction-`i` edges are stored contiguously, indexed by the base
/// coalition with bit `i` squeezed out.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeField {
    players: usize,
    values: Vec<f64>,
}

impl EdgeField {
    pub fn zeros(players: usize) -> Result<Self> {
        check_players(players)?;
        Ok(EdgeField {
            players,
            values: vec![0.0; players << (players - 1)],
        })
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn edge_count(&self) -> usize {
        self.values.len()
    }

    fn slot(&self, base: Coalition, player: usize) -> usize {
        debug_assert!(!base.contains(player));
        (player << (self.players - 1)) + base.compress(player).index()
    }

    /// `f(S, S ∪ {i})` for `i ∉ S`.
    pub fn get(&self, base: Coalition, player: usize) -> f64 {
        self.values[self.slot(base, player)]
    }

    pub fn set(&mut self, base: Coalition, player: usize, value: f64) {
        let k = self.slot(base, player);
        self.values[k] = value;
    }

    /// `f(from, to)` for adjacent coalitions, negated against orientation.
    pub fn between(&self, from: Coalition, to: Coalition) -> f64 {
        let diff = from.mask() ^ to.mask();
        assert!(diff.count_ones() == 1, "{from} and {to} are not adjacent");
        let player = diff.trailing_zeros() as usize;
        if to.contains(player) {
            self.get(from, player)
        } else {
            -self.get(to, player)
        }
    }

    /// The direction-`player` block, indexed by compressed base coalition.
    pub fn direction(&self, player: usize) -> &[f64] {
        let half = 1 << (self.players - 1);
        &self.values[player * half..(player + 1) * half]
    }

    /// `⟨f, g⟩ = Σ_{(a,b)∈E} f(a,b) g(a,b)`.
    pub fn dot(&self, other: &EdgeField) -> f64 {
        numeric::dot(&self.values, &other.values)
    }

    pub fn max_abs_diff(&self, other: &EdgeField) -> f64 {
        numeric::max_abs_diff(&self.values, &other.values)
    }
}

impl std::ops::Add for &EdgeField {
    type Output = EdgeField;

    fn add(self, rhs: &EdgeField) -> EdgeField {
        assert_eq!(self.players, rhs.players);
        EdgeField {
            players: self.players,
            values: self.values.iter().zip(&rhs.values).map(|(a, b)| a + b).collect(),
        }
    }
}

fn fill_edges(players: usize, mut f: impl FnMut(usize, Coalition) -> f64) -> EdgeField {
    let half = 1usize << (players - 1);
    let mut values = Vec::with_capacity(players * half);
    for i in 0..players {
        values.extend((0..half as u32).map(|m| f(i, Coalition::from_mask(m).expand(i))));
    }
    EdgeField { players, values }
}

/// `d u(S, S ∪ {i}) = u(S ∪ {i}) − u(S)`.
pub fn gradient(u: &VertexField) -> EdgeField {
    fill_edges(u.players, |i, s| u.get(s.with(i)) - u.get(s))
}

/// `d_i u`: the gradient on direction-`player` edges, zero elsewhere.
pub fn partial_gradient(u: &VertexField, player: usize) -> Result<EdgeField> {
    check_player(u.players, player)?;
    Ok(fill_edges(u.players, |i, s| {
        if i == player {
            u.get(s.with(i)) - u.get(s)
        } else {
            0.0
        }
    }))
}

/// Fills a vertex table entry by entry, in parallel over fixed blocks for
/// large tables. Each entry is computed independently, so the result does
/// not depend on the thread count.
fn fill_vertices(players: usize, f: impl Fn(Coalition) -> f64 + Sync) -> Vec<f64> {
    let len = 1usize << players;
    let mut out = vec![0.0; len];
    if len <= BLOCK {
        for (m, x) in out.iter_mut().enumerate() {
            *x = f(Coalition::from_mask(m as u32));
        }
    } else {
        out.par_chunks_mut(BLOCK).enumerate().for_each(|(b, chunk)| {
            for (k, x) in chunk.iter_mut().enumerate() {
                *x = f(Coalition::from_mask((b * BLOCK + k) as u32));
            }
        });
    }
    out
}

/// `(d* f)(a) = Σ_{b∼a} f(b, a)`.
pub fn divergence(f: &EdgeField) -> VertexField {
    let n = f.players;
    let values = fill_vertices(n, |a| {
        (0..n)
            .map(|i| {
                if a.contains(i) {
                    // b = a \ {i}: f(b, a) is stored as oriented
                    f.get(a.without(i), i)
                } else {
                    // b = a ∪ {i}: f(b, a) = −f(a, b)
                    -f.get(a, i)
                }
            })
            .sum()
    });
    VertexField { players: n, values }
}

/// Matrix-free `(d* d u)(S) = N·u(S) − Σ_{b∼S} u(b)`.
pub fn laplacian_apply(u: &VertexField) -> VertexField {
    VertexField {
        players: u.players,
        values: laplacian_values(u.players, &u.values),
    }
}

pub(crate) fn laplacian_values(players: usize, u: &[f64]) -> Vec<f64> {
    // Σ_j (u(S) − u(S ⊕ j)) vanishes exactly on constants
    fill_vertices(players, |s| {
        let x = u[s.index()];
        (0..players).map(|i| x - u[s.toggle(i).index()]).sum()
    })
}

/// `d* d_i v` in closed form: `v(S) − v(S ∪ {i})` where `i ∉ S`, and the
/// negation of that at `S ∪ {i}`.
pub fn divergence_of_partial(game: &Game, player: usize) -> Result<VertexField> {
    let n = game.players();
    check_player(n, player)?;
    let v = game.values();
    let values = fill_vertices(n, |s| v[s.index()] - v[s.toggle(player).index()]);
    Ok(VertexField { players: n, values })
}
