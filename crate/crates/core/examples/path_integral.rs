// Expected marginal contributions along a uniform random walk on the
// hypercube: Monte Carlo, first-step analysis and the component games.

use hodge_shapley::markov::{estimate_all, expected_contributions, sample_path_contributions};
use hodge_shapley::{decompose, ChainConfig, Coalition, Game, SolverConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let game = Game::pure_bargaining(3)?;
    let target = Coalition::from_labels([2, 3]);
    let config = ChainConfig::new(3, 42);

    let path = sample_path_contributions(&game, target, &config, 0)?;
    println!("one path to {target}: contributions {path:?}, total {}", path.iter().sum::<f64>());

    let estimates = estimate_all(&game, target, &config, 200_000)?;
    let exact = expected_contributions(&game, target)?;
    let d = decompose(&game, &SolverConfig::default())?;
    for e in &estimates {
        let i = e.player;
        println!(
            "player {}: {:+.4} ± {:.4}  exact {:+.6}  component {:+.6}",
            i + 1,
            e.mean,
            e.std_error,
            exact[i][Coalition::EMPTY.index()],
            d.component(i).value(target)
        );
        assert!((e.mean - d.component(i).value(target)).abs() < 5.0 * e.std_error);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
