mod common;

use common::{c, game, game_and_coalition};
use hodge_shapley::markov::{
    check_transition_formula, draw_player, estimate_all, exact_value, expected_contributions,
    sample_path_contributions, step_chain,
};
use hodge_shapley::{decompose, ChainConfig, Coalition, Game, SolverConfig};
use proptest::prelude::*;

fn integer_game(lo: usize, hi: usize) -> impl Strategy<Value = Game> {
    (lo..=hi).prop_flat_map(|n| {
        prop::collection::vec(-50i32..50, (1usize << n) - 1).prop_map(move |tail| {
            let mut values = vec![0.0];
            values.extend(tail.into_iter().map(f64::from));
            Game::from_values(n, values).unwrap()
        })
    })
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_values_are_components(v in game(1, 6)) {
        let n = v.players();
        let d = decompose(&v, &SolverConfig::default()).unwrap();
        for s in Coalition::all(n) {
            let h = expected_contributions(&v, s).unwrap();
            for i in 0..n {
                let got = h[i][Coalition::EMPTY.index()];
                prop_assert!((got - d.component(i).value(s)).abs() <= 1e-9, "i={i} S={s}");
            }
        }
    }

    #[test]
    fn transition_formula_holds(
        (v, s) in game_and_coalition(2, 5),
        t in 0u32..32,
        i in 0usize..5,
    ) {
        let n = v.players();
        let t = Coalition::from_mask(t & ((1 << n) - 1));
        prop_assert!(check_transition_formula(&v, i % n, s, t).unwrap() <= 1e-10);
    }

    #[test]
    fn reflected_paths((v, s) in game_and_coalition(2, 5), t in 0u32..32, i in 0usize..5) {
        let n = v.players();
        let i = i % n;
        let s = s.without(i);
        let t = Coalition::from_mask(t & ((1 << n) - 1)).without(i);
        let at = |x: Coalition| exact_value(&v, i, x, Coalition::EMPTY).unwrap();
        let lhs = at(t.with(i)) - at(s.with(i));
        let rhs = -(at(t) - at(s));
        prop_assert!((lhs - rhs).abs() <= 1e-10);
    }

    #[test]
    fn null_player_has_zero_value((v, s) in game_and_coalition(2, 5), i in 0usize..5) {
        let i = i % v.players();
        let w = v.nullify(i).unwrap();
        prop_assert!(exact_value(&w, i, s, Coalition::EMPTY).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn path_efficiency_exact_on_integer_games(
        (v, target) in integer_game(1, 5).prop_flat_map(|g| {
            let n = g.players();
            (Just(g), 0u32..(1 << n))
        }),
        seed in any::<u64>(),
    ) {
        let target = Coalition::from_mask(target);
        let cfg = ChainConfig::new(v.players(), seed);
        for k in 0..32 {
            let contrib = sample_path_contributions(&v, target, &cfg, k).unwrap();
            prop_assert_eq!(contrib.iter().sum::<f64>(), v.value(target));
        }
    }

    #[test]
    fn path_efficiency_on_real_games((v, target) in game_and_coalition(1, 5), seed in any::<u64>()) {
        let cfg = ChainConfig::new(v.players(), seed);
        for k in 0..32 {
            let contrib = sample_path_contributions(&v, target, &cfg, k).unwrap();
            prop_assert!((contrib.iter().sum::<f64>() - v.value(target)).abs() <= 1e-12);
        }
    }

    #[test]
    fn additive_paths_telescope(weights in prop::collection::vec(-20i32..20, 1..5), seed in any::<u64>()) {
        let w: Vec<f64> = weights.iter().map(|&x| f64::from(x)).collect();
        let v = Game::additive(&w).unwrap();
        let cfg = ChainConfig::new(w.len(), seed);
        let target = c(&[1]);
        for k in 0..16 {
            let contrib = sample_path_contributions(&v, target, &cfg, k).unwrap();
            prop_assert_eq!(contrib[0], w[0]);
            for x in &contrib[1..] {
                prop_assert_eq!(*x, 0.0);
            }
        }
    }
}

#[test]
fn monte_carlo_within_four_standard_errors() {
    let mut checks = 0;
    let mut misses = 0;
    for run in 0..60u64 {
        let n = 2 + (run % 3) as usize;
        let v = common::seeded_game(n, 1000 + run);
        let target = Coalition::from_mask((run as u32).wrapping_mul(2654435761) & ((1 << n) - 1));
        let est = estimate_all(&v, target, &ChainConfig::new(n, run), 100_000).unwrap();
        for e in &est {
            let exact = exact_value(&v, e.player, target, Coalition::EMPTY).unwrap();
            checks += 1;
            if (e.mean - exact).abs() > 4.0 * e.std_error + 1e-12 {
                misses += 1;
            }
        }
    }
    assert!(misses * 100 <= checks, "{misses} of {checks} estimates outside 4 SE");
}

#[test]
fn estimates_do_not_depend_on_thread_count() {
    let v = common::seeded_game(4, 7);
    let target = c(&[1, 3]);
    let cfg = ChainConfig::new(4, 99);
    let one = in_pool(1, || estimate_all(&v, target, &cfg, 50_000).unwrap());
    let four = in_pool(4, || estimate_all(&v, target, &cfg, 50_000).unwrap());
    let again = in_pool(3, || estimate_all(&v, target, &cfg, 50_000).unwrap());
    for ((a, b), d) in one.iter().zip(&four).zip(&again) {
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
        assert_eq!(a.mean.to_bits(), d.mean.to_bits());
    }
}

#[test]
fn neighbor_frequencies_are_uniform() {
    let cfg = ChainConfig::new(4, 2024);
    let draws = 1_000_000u64;
    let mut counts = [0u64; 4];
    for k in 0..draws {
        let mut rng = cfg.stream(k);
        let next = step_chain(Coalition::EMPTY, draw_player(&mut rng, 4));
        counts[next.mask().trailing_zeros() as usize] += 1;
    }
    let expected = draws as f64 / 4.0;
    let chi2: f64 = counts.iter().map(|&k| (k as f64 - expected).powi(2) / expected).sum();
    for &k in &counts {
        assert!((k as f64 / draws as f64 - 0.25).abs() <= 0.002, "{counts:?}");
    }
    // 3 degrees of freedom, 0.999 quantile
    assert!(chi2 < 16.27, "chi2 = {chi2}");
}
