mod common;

use choquet_nash::equilibrium::solve_coefficients;
use choquet_nash::grid::TimeGrid;
use choquet_nash::policy_iter::*;
use choquet_nash::MarketParams;
use common::*;

#[test]
fn table1_response_iteration_is_certified() {
    let m = MarketParams::table1();
    let grid = TimeGrid::new(20.0, 2001).unwrap();
    for agent in table1_agents() {
        let h = run_response_iteration(&agent, &m, 20.0, 2001, ResponseInit::zero(grid, 1.0), 25, 1e-6).unwrap();
        assert!(h.certified());
        let errs: Vec<f64> = h.states.iter().map(|s| s.sup_error()).collect();
        assert!(errs.last().unwrap() < &1e-6);
    }
}

#[test]
fn uncorrelated_market_converges_in_one_step() {
    let mut m = MarketParams::table1();
    m.rho = 0.0;
    let grid = TimeGrid::new(20.0, 801).unwrap();
    for agent in table1_agents() {
        let h = run_response_iteration(&agent, &m, 20.0, 801, ResponseInit::zero(grid, 1.0), 25, 1e-6).unwrap();
        assert!(h.certified());
        assert_eq!(h.iterations(), 1);
    }
}

#[test]
fn strong_coupling_still_contracts_geometrically() {
    let m = MarketParams::table1();
    let mut agents = table1_agents();
    agents[0].k = 0.99;
    agents[1].k = 0.99;
    let coeffs = solve_coefficients(&agents, &m, 20.0, 101).unwrap();
    let h = simultaneous_mean_iteration(&agents, &m, &coeffs, &[0.0, 0.273], &|_, _, _| 0.0, 40).unwrap();
    assert_eq!(h.rate, 0.99);
    assert!(h.certified());
    assert!(h.ratios().iter().all(|&r| (r - 0.99).abs() < 1e-9));
}

#[test]
fn history_csv_has_both_bounds() {
    let m = MarketParams::table1();
    let agents = table1_agents();
    let grid = TimeGrid::new(20.0, 401).unwrap();
    let r = run_response_iteration(&agents[0], &m, 20.0, 401, ResponseInit::zero(grid, 1.0), 25, 1e-6).unwrap();
    let coeffs = solve_coefficients(&agents, &m, 20.0, 401).unwrap();
    let mh = simultaneous_mean_iteration(&agents, &m, &coeffs, &[0.273], &|_, _, _| 1.0, 8).unwrap();
    let mut out = Vec::new();
    write_history_csv(&mut out, Some(&r), Some(&mh)).unwrap();
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,sup_err_a1,sup_err_a2,factorial_bound,sup_err_mu,geometric_bound");
    assert_eq!(lines.len(), 1 + r.states.len().max(mh.errors.len()));
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 6));
}
