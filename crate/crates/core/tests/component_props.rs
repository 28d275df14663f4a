mod common;

use common::{c, game, game_and_pair};
use hodge_shapley::axioms::check_reflection;
use hodge_shapley::hodge::divergence_of_partial;
use hodge_shapley::solver::solve_least_squares;
use hodge_shapley::{
    bargaining_closed_form, decompose, decompose_axiomatic, shapley_direct, Coalition, Game, SolverConfig,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oracle_triangle(v in game(1, 6)) {
        let cg = decompose(&v, &SolverConfig::default()).unwrap();
        let dense = decompose(&v, &SolverConfig::dense()).unwrap();
        let axiomatic = decompose_axiomatic(&v, 6).unwrap();
        prop_assert!(cg.max_abs_diff(&dense) <= 1e-9);
        prop_assert!(cg.max_abs_diff(&axiomatic) <= 1e-9);
        prop_assert!(dense.max_abs_diff(&axiomatic) <= 1e-9);
    }

    #[test]
    fn grand_values_are_shapley(v in game(1, 8)) {
        let d = decompose(&v, &SolverConfig::default()).unwrap();
        let phi = shapley_direct(&v);
        for (a, b) in d.grand_values().iter().zip(&phi.phi) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn components_add_up(v in game(1, 8)) {
        let d = decompose(&v, &SolverConfig::default()).unwrap();
        for s in Coalition::all(v.players()) {
            prop_assert!((d.row_sum(s) - v.value(s)).abs() <= 1e-9);
        }
    }

    #[test]
    fn reflection_sums_are_constant(v in game(1, 8)) {
        let d = decompose(&v, &SolverConfig::default()).unwrap();
        prop_assert!(check_reflection(&d).max_defect <= 1e-9);
    }

    #[test]
    fn solution_is_pinned_and_solves(v in game(1, 8), i in 0usize..8) {
        let i = i % v.players();
        let rhs = divergence_of_partial(&v, i).unwrap();
        let sol = solve_least_squares(&rhs, &SolverConfig::default()).unwrap();
        prop_assert_eq!(sol.field.get(Coalition::EMPTY), 0.0);
        prop_assert!(sol.residual <= 1e-12);
    }

    #[test]
    fn lifted_null_player_components((v, i, _) in game_and_pair(2, 6)) {
        let w = v.nullify(i).unwrap();
        let d = decompose(&w, &SolverConfig::default()).unwrap();
        let r = decompose(&w.restrict(i).unwrap(), &SolverConfig::default()).unwrap();
        let n = w.players();
        for s in Coalition::all(n) {
            prop_assert!(d.component(i).value(s).abs() <= 1e-9);
            for j in (0..n).filter(|&j| j != i) {
                let jj = if j < i { j } else { j - 1 };
                let want = r.component(jj).value(s.without(i).compress(i));
                prop_assert!((d.component(j).value(s) - want).abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn closed_form_matches_solver() {
    for n in 1..=10 {
        let exact = bargaining_closed_form(n).unwrap();
        let solved = decompose(&Game::pure_bargaining(n).unwrap(), &SolverConfig::default()).unwrap();
        assert!(exact.max_abs_diff(&solved) <= 1e-10, "N={n}");
    }
}

#[test]
fn negativity_witness() {
    let d = decompose(&Game::pure_bargaining(3).unwrap(), &SolverConfig::default()).unwrap();
    assert!(d.component(0).value(c(&[2, 3])) < 0.0);
}
