//! Linear solves against the hypercube Laplacian.
//!
//! The least-squares system `d*d u = b` is singular with the constants as
//! its nullspace. The default path runs conjugate gradient directly on the
//! singular, consistent system; the dense path grounds one vertex (deletes
//! its row and column) and factors the remaining SPD block. Grounded solves
//! are also what the first-step hitting-time oracle needs.

use nalgebra::{DMatrix, DVector};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::hodge::{laplacian_values, VertexField};
use crate::numeric;

/// Largest player count accepted by the dense factorization.
pub const DENSE_MAX_PLAYERS: usize = 10;

/// Iterations between re-projections of the CG iterate onto mean-zero fields.
const REPROJECT_EVERY: usize = 50;

const RESIDUAL_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    ConjugateGradient,
    DenseDirect,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Relative residual target `‖L u − b‖ / ‖b‖`.
    pub tolerance: f64,
    /// Iteration cap for CG; `None` means `10 · 2^N`.
    pub max_iterations: Option<usize>,
    pub method: SolveMethod,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tolerance: 1e-12,
            max_iterations: None,
            method: SolveMethod::ConjugateGradient,
        }
    }
}

impl SolverConfig {
    pub fn dense() -> Self {
        SolverConfig {
            method: SolveMethod::DenseDirect,
            ..SolverConfig::default()
        }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = Some(max_iterations);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == Some(0) {
            return Err(Error::InvalidConfig("max_iterations must be at least 1".into()));
        }
        Ok(())
    }

    fn iteration_cap(&self, players: usize) -> usize {
        self.max_iterations.unwrap_or(10 << players)
    }
}

/// A solution together with its relative residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub field: VertexField,
    pub residual: f64,
    pub iterations: usize,
}

fn relative_residual(players: usize, u: &[f64], rhs: &[f64]) -> f64 {
    let lu = laplacian_values(players, u);
    let r: Vec<f64> = lu.iter().zip(rhs).map(|(a, b)| a - b).collect();
    numeric::norm(&r) / numeric::norm(rhs).max(RESIDUAL_FLOOR)
}

/// Solves `d*d u = rhs` with `u(∅) = 0`.
///
/// `rhs` must sum to zero (every divergence does); a relative imbalance above
/// `sqrt(tolerance)` is rejected as inconsistent, and smaller imbalances are
/// projected away before solving.
pub fn solve_least_squares(rhs: &VertexField, config: &SolverConfig) -> Result<Solution> {
    config.validate()?;
    let n = rhs.players();
    let total = rhs.sum();
    let scale = numeric::abs_sum(rhs.values());
    if total.abs() > config.tolerance.sqrt() * scale.max(RESIDUAL_FLOOR) {
        return Err(Error::InconsistentRhs { sum: total });
    }
    if scale == 0.0 {
        return Ok(Solution {
            field: VertexField::zeros(n)?,
            residual: 0.0,
            iterations: 0,
        });
    }
    let mean = total / rhs.values().len() as f64;
    let b: Vec<f64> = rhs.values().iter().map(|x| x - mean).collect();

    let (mut u, iterations) = match config.method {
        SolveMethod::ConjugateGradient => {
            let (u, it) = conjugate_gradient(
                |x| laplacian_values(n, x),
                subtract_mean,
                &b,
                config.tolerance,
                config.iteration_cap(n),
            )?;
            (u, it)
        }
        SolveMethod::DenseDirect => (grounded_dense(n, Coalition::EMPTY, &b)?, 1),
    };
    let mut field = VertexField::from_values(n, std::mem::take(&mut u))?;
    field.pin_empty();
    let residual = relative_residual(n, field.values(), rhs.values());
    Ok(Solution {
        field,
        residual,
        iterations,
    })
}

fn subtract_mean(x: &mut [f64]) {
    let mean = numeric::sum(x) / x.len() as f64;
    for v in x.iter_mut() {
        *v -= mean;
    }
}

/// Plain CG from a zero start. `project` keeps the iterate in the subspace
/// the operator is definite on; it runs every [`REPROJECT_EVERY`] iterations.
fn conjugate_gradient(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    project: impl Fn(&mut [f64]),
    b: &[f64],
    tolerance: f64,
    max_iterations: usize,
) -> Result<(Vec<f64>, usize)> {
    let b_norm = numeric::norm(b).max(RESIDUAL_FLOOR);
    let mut x = vec![0.0; b.len()];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rr = numeric::dot(&r, &r);
    let mut rel = rr.sqrt() / b_norm;
    for it in 1..=max_iterations {
        if rel <= tolerance {
            return Ok((x, it - 1));
        }
        let ap = apply(&p);
        let pap = numeric::dot(&p, &ap);
        if pap <= 0.0 {
            break;
        }
        let alpha = rr / pap;
        for k in 0..x.len() {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        }
        if it % REPROJECT_EVERY == 0 {
            project(&mut x);
            // refresh the recurrence residual against drift
            let ax = apply(&x);
            for k in 0..r.len() {
                r[k] = b[k] - ax[k];
            }
        }
        let rr_next = numeric::dot(&r, &r);
        rel = rr_next.sqrt() / b_norm;
        let beta = rr_next / rr;
        rr = rr_next;
        for k in 0..p.len() {
            p[k] = r[k] + beta * p[k];
        }
    }
    if rel <= tolerance {
        return Ok((x, max_iterations));
    }
    Err(Error::NonConvergence {
        iterations: max_iterations,
        residual: rel,
    })
}

/// Dense solve of the grounded system: `L u = rhs` on every vertex except
/// `ground`, with `u(ground) = 0`.
fn grounded_dense(players: usize, ground: Coalition, rhs: &[f64]) -> Result<Vec<f64>> {
    let factor = GroundedFactor::new(players, ground)?;
    factor.solve(rhs)
}

/// Cholesky factor of the hypercube Laplacian with one vertex grounded.
/// The grounded block is SPD because the hypercube is connected.
pub struct GroundedFactor {
    players: usize,
    ground: Coalition,
    cholesky: nalgebra::Cholesky<f64, nalgebra::Dyn>,
}

impl GroundedFactor {
    pub fn new(players: usize, ground: Coalition) -> Result<Self> {
        if players > DENSE_MAX_PLAYERS {
            return Err(Error::DenseTooLarge {
                players,
                max: DENSE_MAX_PLAYERS,
            });
        }
        let len = 1usize << players;
        let g = ground.index();
        // reduced index: skip the grounded vertex
        let reduce = |m: usize| if m < g { m } else { m - 1 };
        let mut a = DMatrix::<f64>::zeros(len - 1, len - 1);
        for m in (0..len).filter(|&m| m != g) {
            let row = reduce(m);
            a[(row, row)] = players as f64;
            for i in 0..players {
                let nb = m ^ (1 << i);
                if nb != g {
                    a[(row, reduce(nb))] = -1.0;
                }
            }
        }
        let cholesky = a.cholesky().ok_or(Error::SolveFailure {
            residual: f64::INFINITY,
        })?;
        Ok(GroundedFactor {
            players,
            ground,
            cholesky,
        })
    }

    /// Solves for `u` with `u(ground) = 0`; `rhs(ground)` is ignored.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let len = 1usize << self.players;
        if rhs.len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                found: rhs.len(),
            });
        }
        let g = self.ground.index();
        let b = DVector::from_iterator(
            len - 1,
            rhs.iter().enumerate().filter(|&(m, _)| m != g).map(|(_, &x)| x),
        );
        let x = self.cholesky.solve(&b);
        let mut u = Vec::with_capacity(len);
        u.extend_from_slice(&x.as_slice()[..g]);
        u.push(0.0);
        u.extend_from_slice(&x.as_slice()[g..]);
        Ok(u)
    }
}

/// Solves the grounded system `L u = rhs` off `ground`, `u(ground) = 0`.
///
/// Dense Cholesky up to [`DENSE_MAX_PLAYERS`], matrix-free CG on the
/// grounded (SPD) operator above that. Returns the solution and its
/// relative residual over the free vertices.
pub fn solve_grounded(
    players: usize,
    ground: Coalition,
    rhs: &[f64],
    tolerance: f64,
) -> Result<(Vec<f64>, f64)> {
    let g = ground.index();
    let u = if players <= DENSE_MAX_PLAYERS {
        grounded_dense(players, ground, rhs)?
    } else {
        let mut b = rhs.to_vec();
        b[g] = 0.0;
        let apply = |x: &[f64]| {
            let mut y = laplacian_values(players, x);
            y[g] = 0.0;
            y
        };
        let (u, _) = conjugate_gradient(
            apply,
            |x| x[g] = 0.0,
            &b,
            tolerance,
            10 << players,
        )?;
        u
    };
    let residual = grounded_residual(players, ground, &u, rhs);
    if residual > tolerance {
        return Err(Error::SolveFailure { residual });
    }
    Ok((u, residual))
}

pub(crate) fn grounded_residual(players: usize, ground: Coalition, u: &[f64], rhs: &[f64]) -> f64 {
    let g = ground.index();
    let lu = laplacian_values(players, u);
    let mut r2 = 0.0;
    let mut b2 = 0.0;
    for m in (0..lu.len()).filter(|&m| m != g) {
        r2 += (lu[m] - rhs[m]).powi(2);
        b2 += rhs[m] * rhs[m];
    }
    r2.sqrt() / b2.sqrt().max(RESIDUAL_FLOOR)
}
