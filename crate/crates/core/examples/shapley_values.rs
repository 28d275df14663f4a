// Shapley values of a three-player glove game, by the subset formula and by
// averaging marginal contributions over every joining order.

use hodge_shapley::{shapley_by_permutations, shapley_direct, Coalition, Game};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // player 1 holds a left glove, players 2 and 3 each hold a right glove
    let glove = Game::new(
        3,
        [
            (Coalition::from_labels([1, 2]), 1.0),
            (Coalition::from_labels([1, 3]), 1.0),
            (Coalition::from_labels([1, 2, 3]), 1.0),
        ],
    )?;
    let direct = shapley_direct(&glove);
    let orders = shapley_by_permutations(&glove)?;
    for (i, (a, b)) in direct.phi.iter().zip(&orders.phi).enumerate() {
        println!("player {}: formula {a:.6}, orders {b:.6}", i + 1);
    }
    assert!(direct.max_abs_diff(&orders) < 1e-12);
    assert!((direct.total() - glove.grand_value()).abs() < 1e-12);
    assert!((direct.phi[0] - 2.0 / 3.0).abs() < 1e-12);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
