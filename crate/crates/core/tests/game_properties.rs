//! Structural properties of the two-network game: equilibrium existence and
//! uniqueness, label symmetry, threshold monotonicity, and the equivalence
//! between the fixed-rate game and its transformed form.

use proptest::prelude::*;
use specshare::game::{
    best_response, classify_regime, cooperative_baseline, max_deviation_gain, price_of_anarchy,
    solve_equilibrium, utility_random_access, utility_transformed, utility_variable,
};
use specshare::numerics::{
    f_ratio, solve_lambda_double_prime, solve_lambda_prime, solve_lambda_star,
};
use specshare::{Density, GameConfig, Model, PathlossExponent, Regime};

fn d(x: f64) -> Density {
    Density::new(x).unwrap()
}
fn a(x: f64) -> PathlossExponent {
    PathlossExponent::new(x).unwrap()
}

fn model() -> impl Strategy<Value = Model> {
    prop_oneof![Just(Model::FixedRate), Just(Model::VariableRate)]
}

/// Canonical configuration with node counts spread over four decades.
fn config() -> impl Strategy<Value = GameConfig> {
    (2.1f64..8.0, -1.3f64..1.7, 0.0f64..2.0, model()).prop_map(|(alpha, log_n1, log_ratio, m)| {
        let n1 = 10f64.powf(log_n1);
        GameConfig::new(alpha, n1, n1 * 10f64.powf(log_ratio), m).unwrap()
    })
}

/// Alternate best responses from `(x1, x2)` until the pair stops moving.
fn best_response_dynamics(cfg: &GameConfig, mut x1: f64, mut x2: f64) -> (f64, f64) {
    for _ in 0..500 {
        let y1 = best_response(d(x2), cfg.n1, cfg).unwrap().get();
        let y2 = best_response(d(y1), cfg.n2, cfg).unwrap().get();
        let moved = (y1 - x1).abs() + (y2 - x2).abs();
        x1 = y1;
        x2 = y2;
        if moved < 1e-13 * (1.0 + x1 + x2) {
            break;
        }
    }
    (x1, x2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn equilibrium_admits_no_profitable_deviation(cfg in config()) {
        let eq = solve_equilibrium(&cfg).unwrap();
        prop_assert!(eq.lambda1 <= cfg.n1 && eq.lambda2 <= cfg.n2);
        let gain = max_deviation_gain(&eq, &cfg, 200).unwrap();
        prop_assert!(gain <= 1e-7, "deviation gain {gain} for {cfg:?}");
    }

    #[test]
    fn best_response_dynamics_reach_the_same_point(
        cfg in config(),
        starts in prop::collection::vec((0.0f64..=1.0, 0.0f64..=1.0), 20),
    ) {
        let eq = solve_equilibrium(&cfg).unwrap();
        let (e1, e2) = (eq.lambda1.get(), eq.lambda2.get());
        for (f1, f2) in starts {
            let (x1, x2) = best_response_dynamics(&cfg, f1 * cfg.n1.get(), f2 * cfg.n2.get());
            prop_assert!((x1 - e1).abs() <= 1e-6 * (1.0 + e1), "{x1} vs {e1} for {cfg:?}");
            prop_assert!((x2 - e2).abs() <= 1e-6 * (1.0 + e2), "{x2} vs {e2} for {cfg:?}");
        }
    }

    #[test]
    fn relabelling_networks_relabels_the_equilibrium(cfg in config()) {
        let swapped = GameConfig { n1: cfg.n2, n2: cfg.n1, ..cfg };
        let (canon, labels) = swapped.canonicalize();
        prop_assert_eq!(canon, cfg);
        let direct = solve_equilibrium(&cfg).unwrap();
        let back = direct.relabel(labels);
        prop_assert_eq!(back.lambda1, direct.lambda2);
        prop_assert_eq!(back.u2, direct.u1);
        prop_assert_eq!(back.relabel(labels), direct);
    }

    #[test]
    fn equal_node_counts_give_symmetric_equilibrium(alpha in 2.1f64..8.0, n in 0.01f64..50.0, m in model()) {
        let cfg = GameConfig::new(alpha, n, n, m).unwrap();
        let eq = solve_equilibrium(&cfg).unwrap();
        prop_assert!((eq.lambda1.get() - eq.lambda2.get()).abs() <= 1e-9 * n);
        prop_assert!((eq.u1 - eq.u2).abs() <= 1e-9 * eq.u1.abs().max(1e-300));
        prop_assert_ne!(eq.regime, Regime::FullPartial);
    }

    #[test]
    fn cooperation_never_loses_welfare(cfg in config()) {
        let poa = price_of_anarchy(&cfg).unwrap();
        prop_assert!(poa >= 1.0 - 1e-9, "PoA {poa} for {cfg:?}");
        let (split, _) = cooperative_baseline(&cfg).unwrap();
        let r = split.lambda1.get() / split.lambda2.get();
        prop_assert!((r - cfg.n1.get() / cfg.n2.get()).abs() <= 1e-12 * r);
    }

    #[test]
    fn variable_rate_payoff_dominates_fixed_rate(
        alpha in 2.1f64..8.0, l1 in 0.0f64..20.0, l2 in 0.01f64..20.0,
    ) {
        let (v1, v2) = utility_variable(d(l1), d(l2), a(alpha)).unwrap();
        let (f1, f2) = utility_random_access(d(l1), d(l2), a(alpha)).unwrap();
        prop_assert!(v1 >= f1 * (1.0 - 1e-9) && v2 >= f2 * (1.0 - 1e-9));
    }

    #[test]
    fn fixed_rate_best_response_is_transformed_best_response(
        alpha in 2.1f64..8.0, other in 0.0f64..10.0, n_self in 0.05f64..20.0,
    ) {
        let cfg = GameConfig::new(alpha, n_self, n_self, Model::FixedRate).unwrap();
        let br = best_response(d(other), d(n_self), &cfg).unwrap().get();
        let u = |x: f64| utility_transformed(d(x), d(other), cfg.alpha).0;
        let best = u(br);
        for k in 0..=400 {
            let x = n_self * k as f64 / 400.0;
            prop_assert!(u(x) <= best * (1.0 + 1e-9), "x {x} beats {br}");
        }
    }
}

#[test]
fn single_network_thresholds_decrease_with_alpha() {
    let mut prev = (f64::INFINITY, f64::INFINITY, f64::INFINITY);
    for k in 21..=80 {
        let alpha = a(k as f64 / 10.0);
        let ls = solve_lambda_star(alpha).unwrap().get();
        let lp = solve_lambda_prime(alpha).unwrap().get();
        assert!(ls < prev.0 && lp < prev.1, "alpha {}", alpha.get());
        // Rate adaptation tolerates more interference than a fixed target.
        assert!(lp > ls, "alpha {}", alpha.get());
        if let Some(lpp) = solve_lambda_double_prime(alpha).unwrap() {
            assert!(lpp.get() < prev.2);
            prev.2 = lpp.get();
        }
        prev.0 = ls;
        prev.1 = lp;
    }
}

#[test]
fn symmetric_ratio_exceeds_one_exactly_up_to_four() {
    for k in 21..=80 {
        let alpha = k as f64 / 10.0;
        let has_root = solve_lambda_double_prime(a(alpha)).unwrap().is_some();
        assert_eq!(has_root, alpha > 4.0, "alpha {alpha}");
        if !has_root {
            for s in [1e-3, 0.1, 1.0, 10.0, 1e3] {
                assert!(
                    f_ratio(d(s), d(s), a(alpha)).unwrap() > 1.0,
                    "alpha {alpha} s {s}"
                );
            }
        }
    }
}

#[test]
fn regime_anchors() {
    for m in [Model::FixedRate, Model::VariableRate] {
        let r =
            |alpha, n1, n2| classify_regime(&GameConfig::new(alpha, n1, n2, m).unwrap()).unwrap();
        assert_eq!(r(3.0, 0.05, 0.06), Regime::FullFull);
        assert_eq!(r(3.0, 20.0, 2000.0), Regime::FullPartial);
        assert_eq!(r(6.0, 50.0, 60.0), Regime::PartialPartial);
        assert_eq!(r(4.0, 1e3, 1e3), Regime::FullFull);
    }
    let cfg = GameConfig::new(6.0, 50.0, 60.0, Model::FixedRate).unwrap();
    let eq = solve_equilibrium(&cfg).unwrap();
    let root = solve_lambda_star(a(3.0)).unwrap().get().sqrt();
    assert!((eq.lambda1.get() - root).abs() < 1e-12);
}

#[test]
fn fixed_rate_equilibrium_found_by_transformed_grid_search() {
    // Exhaustive search on a grid: the cell with the least regret under the
    // transformed payoffs sits next to the solved equilibrium.
    let cfg = GameConfig::new(3.5, 2.0, 9.0, Model::FixedRate).unwrap();
    let eq = solve_equilibrium(&cfg).unwrap();
    let steps = 120;
    let fine = 600;
    let (n1, n2) = (cfg.n1.get(), cfg.n2.get());
    let u1 = |x: f64, y: f64| utility_transformed(d(x), d(y), cfg.alpha).0;
    let u2 = |x: f64, y: f64| utility_transformed(d(x), d(y), cfg.alpha).1;
    let best1 = |y: f64| {
        (0..=fine)
            .map(|k| u1(n1 * k as f64 / fine as f64, y))
            .fold(0.0, f64::max)
    };
    let best2 = |x: f64| {
        (0..=fine)
            .map(|k| u2(x, n2 * k as f64 / fine as f64))
            .fold(0.0, f64::max)
    };
    let mut argmin = (f64::INFINITY, 0.0, 0.0);
    let b2: Vec<f64> = (0..=steps)
        .map(|i| best2(n1 * i as f64 / steps as f64))
        .collect();
    let b1: Vec<f64> = (0..=steps)
        .map(|j| best1(n2 * j as f64 / steps as f64))
        .collect();
    for i in 0..=steps {
        let x = n1 * i as f64 / steps as f64;
        for j in 0..=steps {
            let y = n2 * j as f64 / steps as f64;
            let regret = (b1[j] - u1(x, y)).max(0.0) + (b2[i] - u2(x, y)).max(0.0);
            if regret < argmin.0 {
                argmin = (regret, x, y);
            }
        }
    }
    assert!(
        (argmin.1 - eq.lambda1.get()).abs() <= 2.0 * n1 / steps as f64,
        "{argmin:?} vs {eq:?}"
    );
    assert!(
        (argmin.2 - eq.lambda2.get()).abs() <= 2.0 * n2 / steps as f64,
        "{argmin:?} vs {eq:?}"
    );
}
