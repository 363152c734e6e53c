use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use varbvp_core::energy::{energy_J, ProblemSpec};
use varbvp_core::expr::Nonlinearity;
use varbvp_core::hypothesis::{applicability, ConditionId, ConditionParams, Theorem};
use varbvp_core::sequence_space::InteriorVector;
use varbvp_core::solvers::{
    find_far_endpoint, grid_census, grid_step, mountain_pass, multistart, solve_auto, CriticalPoint, Kind, Sense,
    SolverConfig, Variant,
};

fn problem(n: usize, p: Vec<f64>, f: &str) -> ProblemSpec {
    let len = p.len() - n;
    ProblemSpec::new(n, len, p, Nonlinearity::parse(f).unwrap(), None).unwrap()
}

fn close(a: &CriticalPoint, b: &CriticalPoint, tol: f64) -> bool {
    let d: f64 = a.x.as_slice().iter().zip(b.x.as_slice()).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
    d <= tol && (a.J - b.J).abs() <= 1e-8
}

// Descent and ascent only settle at extrema or flat points, so a strict saddle
// found by the grid is not expected from multistart.
#[test]
fn multistart_and_grid_census_agree() {
    let cases = [
        problem(1, vec![1.0; 3], "x^3"),
        problem(1, vec![1.0, 2.0, 0.5], "x^3 - k*x^2"),
        problem(1, vec![1.0; 4], "-x^3 + 2*x"),
        problem(2, vec![1.0, 0.5, 1.0, 2.0, 1.0], "x^3"),
    ];
    for prob in &cases {
        let cfg = SolverConfig { box_radius: 3.0, starts: 1000, ..Default::default() };
        let grid = grid_census(prob, &cfg, grid_step(prob.interior_len(), cfg.box_radius)).unwrap();
        let mut found = multistart(prob, Sense::Minimize, &cfg).unwrap().points;
        found.extend(multistart(prob, Sense::Maximize, &cfg).unwrap().points);
        let tol = 1e-3;
        for m in &found {
            assert!(m.residual_norm_inf <= 1e-8);
            assert!(grid.points.iter().any(|g| close(g, m, tol)), "{:?}: grid misses {m:?}", prob.f().expr());
        }
        for g in grid.points.iter().filter(|g| g.kind != Kind::Saddle) {
            assert!(found.iter().any(|m| close(g, m, tol)), "{:?}: multistart misses {g:?}", prob.f().expr());
        }
    }
}

#[test]
fn theorem_1_yields_two_solutions() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for _ in 0..12 {
        let n = rng.random_range(1..=2);
        let len = rng.random_range(2..=5);
        let p: Vec<f64> = (0..len + n).map(|_| rng.random_range(0.5..2.0)).collect();
        let a: f64 = rng.random_range(0.5..2.0);
        let prob = problem(n, p, &format!("{a}*x^3"));
        let claim = (ConditionId::A3_2, ConditionParams::new(0.2 * a).with_q(4.0));
        let report = applicability(&prob, &[claim], Some(0.0)).unwrap();
        if !report.has(Theorem::TwoSolutionsTheorem1) {
            continue;
        }
        checked += 1;
        let cfg = SolverConfig { box_radius: 4.0, starts: 100, ..Default::default() };
        let sol = solve_auto(&prob, &report, &cfg).unwrap();
        let good: Vec<_> = sol.set.points.iter().filter(|p| p.residual_norm_inf <= 1e-8).collect();
        assert!(good.len() >= 2, "{:?}", sol.set);
        assert!(good.iter().any(|p| p.J > 0.0));
    }
    assert!(checked >= 10);
}

#[test]
fn mountain_pass_sandwich_on_random_endpoints() {
    let prob = problem(1, vec![1.0; 3], "x^3");
    for seed in 0..5 {
        let cfg = SolverConfig { box_radius: 3.0, seed, ..Default::default() };
        let theta = InteriorVector::zeros(2).unwrap();
        let x_b = find_far_endpoint(&prob, Variant::InfMax, &cfg).unwrap();
        let r = mountain_pass(&prob, &theta, &x_b, Variant::InfMax, &cfg).unwrap();
        let t = &r.trace;
        assert!(t.history.windows(2).all(|w| w[1] <= w[0]));
        let low = energy_J(&prob, &theta).unwrap().max(energy_J(&prob, &x_b).unwrap());
        assert!(low < r.point.J && t.final_max <= t.initial_max);
        assert!((r.point.J - 0.5).abs() < 1e-6);
    }
}

#[test]
fn solver_output_is_deterministic() {
    let prob = problem(1, vec![1.0, 0.7, 1.3, 1.0], "x^3 - k*x/3");
    let report = applicability(&prob, &[], None).unwrap();
    let cfg = SolverConfig { box_radius: 3.0, starts: 100, ..Default::default() };
    let a = solve_auto(&prob, &report, &cfg).unwrap();
    let b = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| solve_auto(&prob, &report, &cfg).unwrap());
    assert_eq!(a, b);
}
