use fraclane::{
    absolute_error_vs_oracle, assemble, builtin_experiment, builtin_experiments, convergence_sweep,
    newton_solve, published_orders, residual_at, residual_system, run, table_grid, BoundarySpec,
    CoefficientVector, FractionalOrders, InitialGuess, ProblemSpec, ResolutionParams, Rhs,
    SingularTerm, SolverConfig,
};
use fraclane_oracles::classical;
use fraclane_oracles::quadrature::gamma_quadrature as g;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params(j: u32) -> ResolutionParams {
    ResolutionParams::new(j).unwrap()
}

/// `y = x^p1`, `z = x^p2` with the forcing built from closed-form Caputo
/// derivatives of powers; `coupled` adds terms that vanish on the exact
/// solution but make the system nonlinear.
fn power_problem(o: FractionalOrders<f64>, p1: f64, p2: f64, coupled: bool) -> ProblemSpec<f64> {
    let (k1, g1, k2, g2) = (1.0, 1.0, 2.0, 0.5);
    let c1a = g(p1 + 1.0) / g(p1 + 1.0 - o.alpha1);
    let c1b = g(p1 + 1.0) / g(p1 + 1.0 - o.beta1);
    let c2a = g(p2 + 1.0) / g(p2 + 1.0 - o.alpha2);
    let c2b = g(p2 + 1.0) / g(p2 + 1.0 - o.beta2);
    let f1 = move |x: f64, y: f64, z: f64| {
        let base = c1a * x.powf(p1 - o.alpha1) + k1 / x.powf(g1) * c1b * x.powf(p1 - o.beta1);
        if coupled {
            base + y * z - x.powf(p1 + p2)
        } else {
            base
        }
    };
    let f2 = move |x: f64, y: f64, _z: f64| {
        let base = c2a * x.powf(p2 - o.alpha2) + k2 / x.powf(g2) * c2b * x.powf(p2 - o.beta2);
        if coupled {
            base + y * y - x.powf(2.0 * p1)
        } else {
            base
        }
    };
    ProblemSpec {
        name: "power".into(),
        orders: o,
        sing1: SingularTerm::new(k1, g1),
        sing2: SingularTerm::new(k2, g2),
        f1: Rhs::native("power-law forcing", f1),
        f2: Rhs::native("power-law forcing", f2),
        boundary: BoundarySpec::PureIvp {
            y0: 0.0,
            yp0: 0.0,
            z0: 0.0,
            zp0: 0.0,
        },
        residual_weight_exponent: 0.0,
    }
}

fn manufactured(coupled: bool) -> ProblemSpec<f64> {
    let o = FractionalOrders::new(1.7, 0.6, 1.5, 0.8);
    power_problem(o, o.alpha1, o.alpha2, coupled)
}

#[test]
fn manufactured_solution_is_recovered() {
    for coupled in [false, true] {
        let spec = manufactured(coupled);
        for j in [2, 3, 4] {
            let res = run(&spec, params(j), &SolverConfig::default()).unwrap();
            assert!(res.diagnostics.converged);
            assert!(res.diagnostics.iterations <= 10);
            assert!(res.diagnostics.final_residual_norm <= 1e-10);
            assert!(
                res.tables.table.e_max <= 1e-9,
                "J={j}: {}",
                res.tables.table.e_max
            );
            assert!(res.tables.dense.e_max <= 1e-9);
            let a1 = spec.orders.alpha1;
            let a2 = spec.orders.alpha2;
            let (ey, ez) =
                absolute_error_vs_oracle(&res.state, |x| (x.powf(a1), x.powf(a2)), &table_grid());
            assert!(ey.iter().chain(&ez).all(|&e| e <= 1e-9));
        }
    }
}

#[test]
fn newton_converges_quadratically() {
    let spec = manufactured(true);
    let out = newton_solve(&spec, params(3), &SolverConfig::default()).unwrap();
    let h = &out.diagnostics.residual_history;
    assert!(h.len() >= 3, "{h:?}");
    // ratios e_{n+1} / e_n^2 stay bounded while the error is above rounding
    let pairs: Vec<_> = h.windows(2).filter(|w| w[1] > 1e-13).collect();
    assert!(!pairs.is_empty(), "{h:?}");
    for w in pairs {
        assert!(w[1] <= 10.0 * w[0] * w[0], "{h:?}");
    }
}

#[test]
fn rate_for_solution_outside_trial_space() {
    let o = FractionalOrders::new(1.7, 0.6, 1.5, 0.8);
    let spec = power_problem(o, 3.2, 2.9, false);
    let tab = convergence_sweep(&spec, &[3, 4, 5, 6], &SolverConfig::default()).unwrap();
    assert!(tab.all_converged());
    // the off-grid residual of a piecewise-constant expansion is first order;
    // the sampled rate approaches 1 from below
    let rates = tab.empirical_orders();
    for &rate in &rates {
        assert!((0.9..=1.1).contains(&rate), "{rates:?}");
    }
    assert!(
        rates
            .windows(2)
            .all(|w| (w[1] - 1.0).abs() <= (w[0] - 1.0).abs()),
        "{rates:?}"
    );
}

#[test]
fn collocation_residuals_vanish_but_off_grid_do_not() {
    let spec = builtin_experiment::<f64>("5.1").unwrap();
    let cfg = SolverConfig::default();
    let res = run(&spec, params(3), &cfg).unwrap();
    let n = 16;
    let mut off_max: f64 = 0.0;
    for c in 0..n {
        let x = (c as f64 + 0.5) / n as f64;
        let at = residual_at(&res.state, &spec, x).unwrap();
        assert!(at.r <= 10.0 * cfg.tol, "{x}: {}", at.r);
        off_max = off_max.max(
            residual_at(&res.state, &spec, c as f64 / n as f64 + 0.01)
                .unwrap()
                .r,
        );
    }
    assert!(off_max > 1e3 * cfg.tol);
    let phi = residual_system(res.state.coefficients(), &spec, params(3)).unwrap();
    assert!(phi.iter().all(|v| v.abs() <= 1e-10));
}

#[test]
fn reported_anchor_values() {
    let spec = builtin_experiment::<f64>("5.1").unwrap();
    let res = run(&spec, params(3), &SolverConfig::default()).unwrap();
    let r01 = residual_at(&res.state, &spec, 0.1).unwrap().r;
    let r05 = residual_at(&res.state, &spec, 0.5).unwrap().r;
    assert!((r01 - 0.014275).abs() < 5e-7, "{r01}");
    assert!((r05 - 0.03011).abs() < 5e-6, "{r05}");
    assert!(res.tables.dense.e_max >= res.tables.table.e_max);

    let spec = builtin_experiment::<f64>("5.2").unwrap();
    let res = run(&spec, params(3), &SolverConfig::default()).unwrap();
    assert!((res.tables.table.e_max - 0.253668907).abs() < 1e-6);

    let spec = builtin_experiment::<f64>("5.4").unwrap();
    let tab = convergence_sweep(&spec, &[3, 4, 5], &SolverConfig::default()).unwrap();
    let want = [0.026592868, 0.016519758, 0.006607277];
    for (row, w) in tab.rows.iter().zip(want) {
        assert!((row.e_max - w).abs() < 1e-7, "{} vs {w}", row.e_max);
    }
}

#[test]
fn random_initial_guesses_reach_same_solution() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for spec in builtin_experiments::<f64>() {
        let p = params(3);
        let mut sols = Vec::new();
        for _ in 0..2 {
            let guess = CoefficientVector {
                a: (0..16).map(|_| rng.gen_range(-0.1..0.1)).collect(),
                b: (0..16).map(|_| rng.gen_range(-0.1..0.1)).collect(),
            };
            let cfg = SolverConfig {
                initial_guess: InitialGuess::Given(guess),
                ..SolverConfig::default()
            };
            let out = newton_solve(&spec, p, &cfg).unwrap();
            assert!(out.diagnostics.converged, "{}", spec.name);
            sols.push(out.coeffs.to_flat());
        }
        for (u, v) in sols[0].iter().zip(&sols[1]) {
            assert!((u - v).abs() <= 1e-8, "{}", spec.name);
        }
    }
}

#[test]
fn builtins_converge_with_bounded_condition() {
    for spec in builtin_experiments::<f64>() {
        for o in published_orders(&spec.name).unwrap() {
            let s = spec.clone().with_orders(o);
            let tab = convergence_sweep(&s, &[3, 4, 5], &SolverConfig::default()).unwrap();
            for row in &tab.rows {
                assert!(row.converged, "{} {o} J={}", s.name, row.level);
                assert!(row.condition_estimate.is_finite() && row.condition_estimate < 1e8);
            }
        }
    }
}

#[test]
fn classical_limit_matches_runge_kutta() {
    let grid: Vec<f64> = (1..=20).map(|i| i as f64 / 20.0).collect();
    let ivp = classical::initial_value_problem();
    let spec = builtin_experiment::<f64>("5.1")
        .unwrap()
        .with_orders(FractionalOrders::classical());
    let res = run(&spec, params(5), &SolverConfig::default()).unwrap();
    let (ey, ez) = absolute_error_vs_oracle(&res.state, |x| (ivp.y(x), ivp.z(x)), &grid);
    let worst = ey.iter().chain(&ez).fold(0.0f64, |m, &e| m.max(e));
    assert!(worst <= 5e-3, "{worst}");

    let bvp = classical::four_point_problem().unwrap();
    let spec = builtin_experiment::<f64>("5.3")
        .unwrap()
        .with_orders(FractionalOrders::classical());
    let res = run(&spec, params(5), &SolverConfig::default()).unwrap();
    let (ey, ez) = absolute_error_vs_oracle(&res.state, |x| (bvp.y(x), bvp.z(x)), &grid);
    let worst = ey.iter().chain(&ez).fold(0.0f64, |m, &e| m.max(e));
    assert!(worst <= 5e-3, "{worst}");
}

#[test]
fn single_precision_run() {
    let spec = builtin_experiment::<f32>("5.4").unwrap();
    let cfg = SolverConfig::<f32> {
        tol: 1e-4,
        ..SolverConfig::default()
    };
    let res = run(&spec, params(3), &cfg).unwrap();
    assert!(res.diagnostics.converged);
    assert!((res.tables.table.e_max - 0.026592868).abs() < 1e-3);
}

#[test]
fn damping_reaches_same_solution() {
    let spec = builtin_experiment::<f64>("5.2").unwrap();
    let p = params(3);
    let plain = newton_solve(&spec, p, &SolverConfig::default()).unwrap();
    let damped = newton_solve(
        &spec,
        p,
        &SolverConfig {
            damping: true,
            ..SolverConfig::default()
        },
    )
    .unwrap();
    assert!(damped.diagnostics.converged);
    let s1 = assemble(&plain.coeffs, &spec, p).unwrap();
    let s2 = assemble(&damped.coeffs, &spec, p).unwrap();
    assert!((s1.y(0.5) - s2.y(0.5)).abs() < 1e-10);
}
