// Component games of the pure bargaining game: exact rationals from the
// closed-form recursion next to the least-squares solve and the
// basis-expansion recursion.

use hodge_shapley::{
    bargaining_closed_form, decompose, decompose_axiomatic, BargainingProfile, Coalition, Game, SolverConfig,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 3;
    let profile = BargainingProfile::new(n)?;
    println!("v_1(S) for the {n}-player pure bargaining game:");
    for s in Coalition::all(n) {
        println!("  {s:<8} {}", profile.value(0, s));
    }

    let game = Game::pure_bargaining(n)?;
    let solved = decompose(&game, &SolverConfig::default())?;
    let recursive = decompose_axiomatic(&game, n)?;
    let exact = bargaining_closed_form(n)?;
    println!("least squares vs closed form: {:.1e}", solved.max_abs_diff(&exact));
    println!("basis recursion vs closed form: {:.1e}", recursive.max_abs_diff(&exact));

    // nonnegative game, negative component value
    let v1 = solved.component(0).value(Coalition::from_labels([2, 3]));
    println!("v_1({{2,3}}) = {v1:.6}");
    assert!(v1 < 0.0);
    assert!(solved.max_abs_diff(&exact) < 1e-10);

    for m in [4, 6, 8] {
        let grand = bargaining_closed_form(m)?.grand_values();
        println!("N={m}: v_i([N]) = {:.6} for every player", grand[0]);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
