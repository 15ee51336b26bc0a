mod common;

use choquet_nash::equilibrium::*;
use choquet_nash::market::GamePolicy;
use choquet_nash::MarketParams;
use common::*;
use proptest::prelude::*;

#[test]
fn coefficients_match_independent_rk4() {
    let m = MarketParams::table1();
    for agent in table1_agents() {
        let (_, a1, a2) = solve_a_coeffs(&agent, &m, 20.0, 2001).unwrap();
        for (t, o1, o2) in rk4_a_oracle(agent.gamma, &m, 20.0, 4000) {
            assert!((a1.eval(t) - o1).abs() < 1e-9);
            assert!((a2.eval(t) - o2).abs() < 1e-9);
        }
    }
}

#[test]
fn hjb_residual_is_small_on_a_coarse_grid() {
    let m = MarketParams::table1();
    let agents = table1_agents();
    let coeffs = solve_coefficients(&agents, &m, 20.0, 1001).unwrap();
    for n in 0..50 {
        let t = 0.37 * n as f64;
        for i in 0..2 {
            let r = hjb_residuals(i, t, 0.4, 0.1 + 0.01 * n as f64, &agents, &m, &coeffs);
            assert!(r.iter().all(|x| x.abs() < 1e-6), "{r:?} at t={t}");
        }
    }
}

#[test]
fn uncorrelated_constant_state_reduces_to_constant_drift_game() {
    let mut m = MarketParams::table1();
    m.v = 0.0;
    m.rho = 0.0;
    let agents = table1_agents();
    let coeffs = solve_coefficients(&agents, &m, 5.0, 501).unwrap();
    let pols = equilibrium_pair(&agents, &m, &coeffs).unwrap();
    let bs = black_scholes_policy(&agents, m.r + m.sigma * m.y_bar, m.sigma, m.r, 5.0).unwrap();
    for t in [0.0, 1.3, 4.9] {
        for i in 0..2 {
            assert!((pols[i].mean(t, m.y_bar) - bs[i].mean(t, m.y_bar)).abs() < 1e-12);
            assert!((pols[i].std(t) - bs[i].std(t)).abs() < 1e-15);
        }
    }
}

#[test]
fn density_peak_sits_at_the_mean() {
    let m = MarketParams::table1();
    let agents = table1_agents();
    let coeffs = solve_coefficients(&agents, &m, 20.0, 401).unwrap();
    let p = equilibrium_policy(0, &agents, &m, &coeffs).unwrap();
    let pts = p.density_grid(0.1, m.y_bar, 2001).unwrap();
    let peak = pts.iter().cloned().fold((0.0, f64::MIN), |a, b| if b.1 > a.1 { b } else { a });
    assert!((peak.0 - p.mean(0.1, m.y_bar)).abs() < 1e-12);
    assert!((trapezoid(&pts) - 1.0).abs() < 1e-9);
}

#[test]
fn policy_law_matches_game_interface() {
    let m = MarketParams::table1();
    let agents = table1_agents();
    let coeffs = solve_coefficients(&agents, &m, 20.0, 401).unwrap();
    let pols = equilibrium_pair(&agents, &m, &coeffs).unwrap();
    let laws = [pols[0].law(3.0, 0.2), pols[1].law(3.0, 0.2)];
    let means = choquet_nash::market::resolve_means(&laws[0], &laws[1]).unwrap();
    assert!((means[0] - pols[0].mean(3.0, 0.2)).abs() < 1e-12);
    assert!((means[1] - pols[1].mean(3.0, 0.2)).abs() < 1e-12);
}

proptest! {
    #[test]
    fn means_solve_the_coupled_system(t in 0.0..20.0f64, y in -1.0..1.0f64, k1 in 0.01..0.9f64, k2 in 0.01..0.9f64) {
        let m = MarketParams::table1();
        let mut agents = table1_agents();
        agents[0].k = k1;
        agents[1].k = k2;
        let coeffs = solve_coefficients(&agents, &m, 20.0, 201).unwrap();
        let mu = equilibrium_means(t, y, &agents, &m, &coeffs).unwrap();
        for i in 0..2 {
            let (a1, a2) = a_closed_form(&agents[i], &m, 20.0 - t);
            let c = individual_response(&agents[i], &m, a1, a2, y);
            prop_assert!((mu[i] - agents[i].k * mu[1 - i] - c).abs() < 1e-6);
        }
    }

    #[test]
    fn std_decreases_in_time_for_decaying_weight(t in 0.0..19.0f64) {
        let agents = table1_agents();
        for a in &agents {
            prop_assert!(equilibrium_std(a, 0.15, t + 0.5, 20.0) < equilibrium_std(a, 0.15, t, 20.0));
        }
    }
}
