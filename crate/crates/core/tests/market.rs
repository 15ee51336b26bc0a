mod common;

use choquet_nash::market::*;
use choquet_nash::{Distortion, LambdaSchedule, MarketParams};
use common::*;
use proptest::prelude::*;

fn one_step(horizon: f64, y0: f64) -> SimConfig {
    SimConfig {
        horizon,
        n_steps: 1,
        seed: 0,
        x1_0: 1.0,
        x2_0: 0.5,
        y_0: y0,
    }
}

#[test]
fn one_step_moments_match_exploratory_sde() {
    let m = MarketParams::table1();
    let agents = table1_agents();
    let pols = [
        FixedLaw {
            mean: 1.2,
            std: 0.4,
            distortion: Distortion::normal(),
        },
        FixedLaw {
            mean: 0.7,
            std: 0.6,
            distortion: Distortion::gini(),
        },
    ];
    let cfg = one_step(0.01, 0.3);
    let dt = cfg.dt();
    let mut rng = episode_rng(21, 0);
    for i in 0..2 {
        let (j, k) = (1 - i, agents[i].k);
        let m_hat = pols[i].mean - k * pols[j].mean;
        let q = m_hat * m_hat + pols[i].std.powi(2) + k * k * pols[j].std.powi(2);
        let (mut d1, mut d2) = (Vec::new(), Vec::new());
        for _ in 0..100_000 {
            let t = simulate_game(&m, [&pols[0] as &dyn GamePolicy, &pols[1]], &cfg, &mut rng).unwrap();
            let gap = t.wealth_gap(i, k);
            let d = gap[1] - gap[0];
            d1.push(d / dt);
            d2.push(d * d / dt);
        }
        let (mean, se) = mean_se(&d1);
        let drift = m.sigma * cfg.y_0 * m_hat;
        assert!(((mean - drift) / se).abs() < 3.0, "drift {mean} vs {drift}");
        let (qv, se) = mean_se(&d2);
        let target = m.sigma * m.sigma * q;
        assert!(((qv - target) / se).abs() < 3.0, "quadratic variation {qv} vs {target}");
    }
}

#[test]
fn doubling_lambda_adds_the_analytic_regularizer() {
    let m = MarketParams::table1();
    let mut agents = table1_agents();
    let pols = [
        FixedLaw {
            mean: 0.5,
            std: 0.3,
            distortion: Distortion::normal(),
        },
        FixedLaw {
            mean: 0.2,
            std: 0.1,
            distortion: Distortion::gini(),
        },
    ];
    let cfg = SimConfig {
        horizon: 1.0,
        n_steps: 50,
        seed: 0,
        x1_0: 1.0,
        x2_0: 1.0,
        y_0: 0.273,
    };
    let refs: [&dyn GamePolicy; 2] = [&pols[0], &pols[1]];
    agents[0].lambda = LambdaSchedule::Constant { value: 0.01 };
    let one = estimate_objective(0, &agents, refs, &m, &cfg, 500, &mut episode_rng(1, 0)).unwrap();
    agents[0].lambda = LambdaSchedule::Constant { value: 0.02 };
    let two = estimate_objective(0, &agents, refs, &m, &cfg, 500, &mut episode_rng(1, 0)).unwrap();
    let added = 0.01 * pols[0].std * Distortion::normal().l2_norm() * 1.0;
    assert!((two.value - one.value - added).abs() < 1e-12);
    assert_eq!(two.var_terminal_gap, one.var_terminal_gap);
}

#[test]
fn mismatched_shape_uses_quadrature_factor() {
    let m = MarketParams::table1();
    let agents = table1_agents();
    // agent 1 scores with the normal distortion but plays a uniform law
    let pols = [
        FixedLaw {
            mean: 0.0,
            std: 0.5,
            distortion: Distortion::gini(),
        },
        FixedLaw::point_mass(0.0),
    ];
    let cfg = SimConfig {
        horizon: 1.0,
        n_steps: 10,
        seed: 0,
        x1_0: 0.0,
        x2_0: 0.0,
        y_0: 0.0,
    };
    let est = estimate_objective(0, &agents, [&pols[0], &pols[1]], &m, &cfg, 2, &mut episode_rng(0, 0)).unwrap();
    let factor = agents[0].regularizer_factor(&Distortion::gini()).unwrap();
    assert!(factor < 1.0 && factor > 0.9);
    let analytic: f64 = (0..10).map(|k| agents[0].lambda.at(k as f64 / 10.0, 1.0) * 0.5 * factor * 0.1).sum();
    assert!((est.mean_regularizer - analytic).abs() < 1e-12);
}

#[test]
fn single_step_matches_hand_computed_return() {
    // one investment of 0.6 over a relative price change of 0.4%
    let x = step_wealth(1.0, 0.6, 1.0, 1.004).unwrap();
    assert!((x - (1.0 + 0.6 * 0.004)).abs() < 1e-12);
    assert!(step_wealth(1.0, 0.6, 0.0, 1.0).is_err());
}

#[test]
fn zero_investment_keeps_discounted_wealth_constant() {
    let m = MarketParams::table1();
    let z = FixedLaw::point_mass(0.0);
    let cfg = SimConfig {
        horizon: 1.0,
        n_steps: 100,
        seed: 3,
        x1_0: 1.5,
        x2_0: -0.5,
        y_0: 0.273,
    };
    let t = simulate_game(&m, [&z, &z], &cfg, &mut episode_rng(3, 0)).unwrap();
    assert!(t.x1.iter().all(|&x| x == 1.5));
    assert!(t.x2.iter().all(|&x| x == -0.5));
}

#[test]
fn identical_seeds_give_identical_trajectories() {
    let m = MarketParams::table1();
    let p = FixedLaw {
        mean: 0.3,
        std: 0.2,
        distortion: Distortion::normal(),
    };
    let cfg = one_step(1.0, 0.2);
    let cfg = SimConfig { n_steps: 40, ..cfg };
    let a = simulate_game(&m, [&p, &p], &cfg, &mut episode_rng(9, 4)).unwrap();
    let b = simulate_game(&m, [&p, &p], &cfg, &mut episode_rng(9, 4)).unwrap();
    let c = simulate_game(&m, [&p, &p], &cfg, &mut episode_rng(9, 5)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

proptest! {
    #[test]
    fn step_wealth_is_affine_in_action(x in -10.0..10.0f64, u in -5.0..5.0f64, r in -0.1..0.1f64) {
        let a = step_wealth(x, u, 1.0, 1.0 + r).unwrap();
        let b = step_wealth(x, 2.0 * u, 1.0, 1.0 + r).unwrap();
        prop_assert!(((b - x) - 2.0 * (a - x)).abs() < 1e-12);
    }

    #[test]
    fn price_path_stays_positive(seed in 0u64..1000) {
        let m = MarketParams::table1();
        let cfg = SimConfig { horizon: 1.0, n_steps: 100, seed, x1_0: 0.0, x2_0: 0.0, y_0: 0.273 };
        let p = simulate_state_and_price(&m, &cfg, &mut episode_rng(seed, 0)).unwrap();
        prop_assert!(p.s_disc.iter().all(|&s| s > 0.0));
    }

    #[test]
    fn coupled_means_solve_the_linear_system(b1 in -3.0..3.0f64, b2 in -3.0..3.0f64, k1 in 0.0..0.99f64, k2 in 0.0..0.99f64) {
        let l1 = ActionLaw { base: b1, coupling: k1, std: 0.0 };
        let l2 = ActionLaw { base: b2, coupling: k2, std: 0.0 };
        let [m1, m2] = resolve_means(&l1, &l2).unwrap();
        prop_assert!((m1 - k1 * m2 - b1).abs() < 1e-9);
        prop_assert!((m2 - k2 * m1 - b2).abs() < 1e-9);
    }
}
