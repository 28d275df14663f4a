//! Cooperative games on the coalition hypercube.
//!
//! A game `v` on `N` players assigns a value to every coalition, with the
//! empty coalition worth 0. This crate splits a game into per-player
//! component games `v_i` by solving the least-squares system
//! `d*d v_i = d*d_i v` on the hypercube graph, where `d` is the gradient,
//! `d*` its adjoint and `d_i` the gradient restricted to player `i`'s edges.
//! The components add up to `v`, and `v_i([N])` is player `i`'s Shapley value.
//!
//! Alongside the solver the crate carries independent checks:
//!
//! * [`shapley`]: the subset formula and the permutation average;
//! * [`components`]: an exact rational recursion for the pure bargaining
//!   game and a basis-expansion recursion for arbitrary small games;
//! * [`markov`]: the expected marginal contributions collected along a
//!   uniform random walk stopped at a target coalition, both sampled and
//!   solved exactly by first-step analysis;
//! * [`axioms`]: efficiency, symmetry, null-player, linearity and reflection
//!   as max-defect predicates.
//!
//! Players are 0-based in the API and 1-based in every text format.
//!
//! ```
//! use hodge_shapley::{decompose, Coalition, Game, SolverConfig};
//!
//! let game = Game::pure_bargaining(2)?;
//! let d = decompose(&game, &SolverConfig::default())?;
//! let v1 = d.component(0);
//! assert!((v1.value(Coalition::from_labels([1])) - 0.25).abs() < 1e-12);
//! assert!((v1.value(Coalition::from_labels([1, 2])) - 0.5).abs() < 1e-12);
//! # Ok::<(), hodge_shapley::Error>(())
//! ```

pub mod axioms;
pub mod cli;
pub mod coalition;
pub mod components;
pub mod error;
pub mod game;
pub mod hodge;
pub mod io;
pub mod markov;
pub mod numeric;
pub mod shapley;
pub mod solver;

pub use axioms::{Axiom, AxiomReport};
pub use coalition::{Coalition, MAX_PLAYERS};
pub use components::{
    bargaining_closed_form, decompose, decompose_axiomatic, Axiomatic, BargainingProfile, Decomposer,
    Decomposition,
};
pub use error::{Error, Result};
pub use game::Game;
pub use hodge::{EdgeField, VertexField};
pub use markov::{ChainConfig, PathEstimate};
pub use shapley::{shapley_by_permutations, shapley_direct, ShapleyAllocation};
pub use solver::{SolveMethod, SolverConfig};
