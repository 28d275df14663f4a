// Axiom defects for the least-squares components of a random game, and
// what a single corrupted entry does to them.

use hodge_shapley::axioms::{check_all, check_classical_shapley, check_efficiency, check_reflection};
use hodge_shapley::{decompose, Game, SolverConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let v = Game::random(5, &mut rng)?;
    let solver = SolverConfig::default();

    for r in check_all(&v, &solver)?.iter().chain(&check_classical_shapley(&v)) {
        println!("{:<24} {:.2e}", r.axiom.name(), r.max_defect);
        assert!(r.passes(1e-9));
    }

    let mut d = decompose(&v, &solver)?;
    let mut values = d.components[2].values().to_vec();
    values[0b01101] += 1e-3;
    d.components[2] = Game::from_values(5, values)?;
    let a1 = check_efficiency(&v, &d)?;
    let a5 = check_reflection(&d);
    println!(
        "after corrupting v_3({{1,3,4}}): A1 {:.1e} at {}, A5 {:.1e} at {}",
        a1.max_defect,
        a1.witness.as_deref().unwrap_or("-"),
        a5.max_defect,
        a5.witness.as_deref().unwrap_or("-")
    );
    assert!(!a1.passes(1e-9));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
