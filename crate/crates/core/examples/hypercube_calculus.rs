// Gradient, divergence and Laplacian on the coalition hypercube, and one
// component solve written out by hand.

use hodge_shapley::hodge::{divergence, divergence_of_partial, gradient, laplacian_apply, partial_gradient};
use hodge_shapley::solver::solve_least_squares;
use hodge_shapley::{decompose, Coalition, Game, SolverConfig, VertexField};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let v = Game::random(4, &mut rng)?;
    let u = VertexField::from(&v);

    let du = gradient(&u);
    println!("{} edges, {} vertices", du.edge_count(), u.values().len());

    // the gradient splits into one piece per player
    let mut sum = partial_gradient(&u, 0)?;
    for i in 1..4 {
        sum = &sum + &partial_gradient(&u, i)?;
    }
    assert_eq!(sum, du);

    let lap = laplacian_apply(&u);
    let div_grad = divergence(&du);
    let gap = lap
        .values()
        .iter()
        .zip(div_grad.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("|d*d u - laplacian u| = {gap:.1e}");

    // player 2's component: solve d*d v_2 = d* d_2 v with v_2(empty) = 0
    let rhs = divergence_of_partial(&v, 1)?;
    let sol = solve_least_squares(&rhs, &SolverConfig::default())?;
    println!("CG: {} iterations, relative residual {:.1e}", sol.iterations, sol.residual);
    let d = decompose(&v, &SolverConfig::default())?;
    let grand = Coalition::grand(4);
    println!("v_2([4]) = {:.6}", sol.field.get(grand));
    assert!((sol.field.get(grand) - d.component(1).value(grand)).abs() < 1e-12);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
