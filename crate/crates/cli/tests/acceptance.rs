//! Acceptance checks, one line per criterion:
//!
//! ```text
//! criterion N: PASS|FAIL  detail
//! ```
//!
//! A criterion listed in `KNOWN_RED` is expected to fail for reasons
//! recorded with it; it still prints FAIL, and the process only exits
//! non-zero on an unexpected outcome in either direction.

use std::fs;
use std::time::Instant;

use fraclane::{
    absolute_error_vs_oracle, assemble, builtin_experiment, case1_intercepts, frac_integral_haar,
    haar_eval, pairwise_inner_product, published_orders, run, BoundarySpec, CaseIData, CaseIIData,
    CoefficientVector, FracOrder, FractionalOrders, InitialGuess, ProblemSpec, ResolutionParams,
    Rhs, SingularTerm, SolverConfig, EXPERIMENT_NAMES,
};
use fraclane_cli::{parse_table_csv, run_cli, table_csv, RunDocument};
use fraclane_oracles::classical;
use fraclane_oracles::quadrature::{gamma_quadrature, riemann_liouville};
use fraclane_oracles::reference::REFERENCE_COLUMNS;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Strict monotonicity of E over J = 3, 4, 5 is violated by the reference
/// tables themselves in two rows; the computed values match those tables.
const KNOWN_RED: &[u32] = &[2];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn params(j: u32) -> ResolutionParams {
    ResolutionParams::new(j).unwrap()
}

fn orders(o: [f64; 4]) -> FractionalOrders<f64> {
    FractionalOrders::new(o[0], o[1], o[2], o[3])
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn table_reproduction() -> Verdict {
    let mut worst_e = 0.0f64;
    let mut worst_r = 0.0f64;
    let mut slowest = 0.0f64;
    let mut misses = Vec::new();
    for col in &REFERENCE_COLUMNS {
        let spec = builtin_experiment::<f64>(col.experiment)
            .unwrap()
            .with_orders(orders(col.orders));
        let t = Instant::now();
        let res = match run(&spec, params(col.level), &SolverConfig::default()) {
            Ok(r) => r,
            Err(e) => {
                misses.push(format!(
                    "T{} {:?} J={}: {e}",
                    col.table, col.orders, col.level
                ));
                continue;
            }
        };
        slowest = slowest.max(t.elapsed().as_secs_f64());
        let de = rel(res.tables.table.e_max, col.e);
        worst_e = worst_e.max(de);
        let dr = res
            .tables
            .table
            .r
            .iter()
            .zip(&col.r)
            .map(|(&a, &b)| rel(a, b))
            .fold(0.0, f64::max);
        worst_r = worst_r.max(dr);
        if de > 0.25 || dr > 0.5 || !res.diagnostics.converged {
            misses.push(format!("T{} {:?} J={}", col.table, col.orders, col.level));
        }
    }
    verdict(
        misses.is_empty() && slowest < 5.0,
        format!(
            "{} cells, worst E rel err {worst_e:.2e}, worst r rel err {worst_r:.2e}, slowest cell {slowest:.2}s{}",
            REFERENCE_COLUMNS.len(),
            if misses.is_empty() { String::new() } else { format!(", misses: {misses:?}") }
        ),
    )
}

fn monotone_convergence() -> Verdict {
    let mut bad = Vec::new();
    let mut rows = 0;
    for name in EXPERIMENT_NAMES {
        for o in published_orders(name).unwrap() {
            rows += 1;
            let spec = builtin_experiment::<f64>(name).unwrap().with_orders(o);
            let e: Vec<f64> = [3, 4, 5]
                .iter()
                .map(|&j| {
                    run(&spec, params(j), &SolverConfig::default())
                        .map(|r| r.tables.table.e_max)
                        .unwrap_or(f64::NAN)
                })
                .collect();
            if !(e[0] > e[1] && e[1] > e[2]) {
                bad.push(format!(
                    "{name} {o}: E = {:.6e}, {:.6e}, {:.6e}",
                    e[0], e[1], e[2]
                ));
            }
        }
    }
    verdict(
        bad.is_empty(),
        format!(
            "{} of {rows} rows strictly decreasing{}",
            rows - bad.len(),
            if bad.is_empty() {
                String::new()
            } else {
                format!("; violations: {}", bad.join("; "))
            }
        ),
    )
}

/// `y = x^α1`, `z = x^α2` with the forcing from the power rule, plus
/// coupling terms that vanish on the exact solution.
fn manufactured(o: FractionalOrders<f64>) -> ProblemSpec<f64> {
    let g = gamma_quadrature;
    let (p1, p2) = (o.alpha1, o.alpha2);
    let (k1, g1, k2, g2) = (1.0, 1.0, 2.0, 0.5);
    let c1a = g(p1 + 1.0);
    let c1b = g(p1 + 1.0) / g(p1 + 1.0 - o.beta1);
    let c2a = g(p2 + 1.0);
    let c2b = g(p2 + 1.0) / g(p2 + 1.0 - o.beta2);
    ProblemSpec {
        name: "manufactured".into(),
        orders: o,
        sing1: SingularTerm::new(k1, g1),
        sing2: SingularTerm::new(k2, g2),
        f1: Rhs::native("power law", move |x: f64, y: f64, z: f64| {
            c1a + k1 / x.powf(g1) * c1b * x.powf(p1 - o.beta1) + y * z - x.powf(p1 + p2)
        }),
        f2: Rhs::native("power law", move |x: f64, y: f64, _z: f64| {
            c2a + k2 / x.powf(g2) * c2b * x.powf(p2 - o.beta2) + y * y - x.powf(2.0 * p1)
        }),
        boundary: BoundarySpec::PureIvp {
            y0: 0.0,
            yp0: 0.0,
            z0: 0.0,
            zp0: 0.0,
        },
        residual_weight_exponent: 0.0,
    }
}

fn manufactured_exactness() -> Verdict {
    let mut worst_e = 0.0f64;
    let mut worst_y = 0.0f64;
    let mut max_iter = 0;
    let mut ok = true;
    for o in [
        FractionalOrders::new(1.7, 0.6, 1.5, 0.8),
        FractionalOrders::new(1.58, 0.58, 1.59, 0.59),
        FractionalOrders::new(1.99, 0.98, 1.2, 0.3),
    ] {
        let spec = manufactured(o);
        for j in [2, 3, 4] {
            let Ok(res) = run(&spec, params(j), &SolverConfig::default()) else {
                ok = false;
                continue;
            };
            let grid = fraclane::dense_grid::<f64>();
            let (ey, ez) = absolute_error_vs_oracle(
                &res.state,
                |x| (x.powf(o.alpha1), x.powf(o.alpha2)),
                &grid,
            );
            worst_y = ey.iter().chain(&ez).fold(worst_y, |m, &e| m.max(e));
            worst_e = worst_e
                .max(res.tables.table.e_max)
                .max(res.tables.dense.e_max);
            max_iter = max_iter.max(res.diagnostics.iterations);
            ok &= res.diagnostics.converged && res.diagnostics.iterations <= 10;
        }
    }
    ok &= worst_e <= 1e-9;
    verdict(
        ok,
        format!("3 order tuples x J=2,3,4: max E {worst_e:.2e}, max |y - exact| {worst_y:.2e}, max iterations {max_iter}"),
    )
}

fn haar_breaks(l: usize) -> Vec<f64> {
    if l == 1 {
        return vec![];
    }
    let m = (l - 1).next_power_of_two();
    let m = if m == l - 1 { m } else { m / 2 };
    let k = (l - 1 - m) as f64;
    let m = m as f64;
    vec![k / m, (k + 0.5) / m, (k + 1.0) / m]
}

fn quadrature_oracle() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let t = Instant::now();
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let upsilon = rng.gen_range(0.05..=2.0);
        let l = rng.gen_range(1..=32);
        let x: f64 = rng.gen_range(0.0..=1.0);
        let got = frac_integral_haar(FracOrder::new(upsilon).unwrap(), l, x).unwrap();
        let want = riemann_liouville(&|s| haar_eval(l, s), upsilon, x, &haar_breaks(l));
        worst = worst.max((got - want).abs());
    }
    let secs = t.elapsed().as_secs_f64();
    verdict(
        worst <= 1e-8 && secs < 30.0,
        format!("200 triples, max abs err {worst:.2e}, {secs:.2}s"),
    )
}

fn orthogonality() -> Verdict {
    // independent check: h_l is constant on cells of width 1/128 for l <= 64
    let cells = 128;
    let samples: Vec<Vec<f64>> = (1..=64)
        .map(|l| {
            (0..cells)
                .map(|c| haar_eval(l, (c as f64 + 0.5) / cells as f64))
                .collect()
        })
        .collect();
    let mut worst = 0.0f64;
    for l in 1..=64usize {
        let j = if l == 1 { 0 } else { (l - 1).ilog2() };
        for r in 1..=64usize {
            let law = if l == r { 2f64.powi(-(j as i32)) } else { 0.0 };
            let exact: f64 = pairwise_inner_product(l, r).unwrap();
            let sum: f64 = samples[l - 1]
                .iter()
                .zip(&samples[r - 1])
                .map(|(a, b)| a * b)
                .sum::<f64>()
                / cells as f64;
            worst = worst.max((exact - law).abs()).max((sum - law).abs());
        }
    }
    verdict(
        worst <= 1e-12,
        format!("4096 pairs, max deviation {worst:.2e}"),
    )
}

fn random_coeffs(rng: &mut ChaCha8Rng, n: usize) -> CoefficientVector<f64> {
    CoefficientVector {
        a: (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect(),
        b: (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect(),
    }
}

fn closure_problem(boundary: BoundarySpec<f64>) -> ProblemSpec<f64> {
    ProblemSpec {
        name: "closure".into(),
        orders: FractionalOrders::new(1.6, 0.7, 1.8, 0.4),
        sing1: SingularTerm::new(1.0, 1.0),
        sing2: SingularTerm::new(2.0, 0.5),
        f1: Rhs::parse("y*z + x").unwrap(),
        f2: Rhs::parse("y - z^2").unwrap(),
        boundary,
        residual_weight_exponent: 0.0,
    }
}

fn boundary_closure() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let c1 = CaseIData {
        a: 1.0,
        b: 2.0,
        c: 0.5,
        d: 1.5,
        mu1: 0.3,
        mu2: 0.7,
        mu3: 0.9,
        mu4: 1.1,
        eta1: 0.8,
        eta2: 0.6,
        nu1: 0.4,
        nu2: 0.7,
    };
    let c2 = CaseIIData {
        ratio_ba: 0.25,
        ratio_dc: 0.5,
        mu1_over_a: 0.2,
        mu2_over_c: 0.0,
        mu3: 1.0,
        mu4: 0.5,
        eta1: 0.9,
        eta2: 1.2,
        nu1: 0.3,
        nu2: 0.6,
    };
    let (nd_y1, nd_z1) = (0.4, -0.3);
    let modes = [
        BoundarySpec::CaseI(c1),
        BoundarySpec::CaseII(c2),
        BoundarySpec::NeumannDirichlet {
            yp0: 0.2,
            zp0: -0.1,
            y1: nd_y1,
            z1: nd_z1,
        },
        BoundarySpec::PureIvp {
            y0: 0.5,
            yp0: -0.25,
            z0: 1.5,
            zp0: 0.75,
        },
    ];
    let zero = closure_problem(BoundarySpec::PureIvp {
        y0: 0.0,
        yp0: 0.0,
        z0: 0.0,
        zp0: 0.0,
    });
    let mut worst = 0.0f64;
    let mut worst_2x2 = 0.0f64;
    for mode in modes {
        let spec = closure_problem(mode);
        for _ in 0..100 {
            let j = rng.gen_range(0..=3);
            let c = random_coeffs(&mut rng, params(j).basis_size());
            let st = assemble(&c, &spec, params(j)).unwrap();
            let v = st.boundary_values();
            let gaps = match mode {
                BoundarySpec::CaseI(d) => vec![
                    d.a * v.y0 + d.b * v.yp0 - d.mu1,
                    d.c * v.z0 + d.d * v.zp0 - d.mu2,
                    st.y(1.0) - d.mu3 * d.eta1 * st.z(d.nu1),
                    st.z(1.0) - d.mu4 * d.eta2 * st.y(d.nu2),
                ],
                BoundarySpec::CaseII(d) => vec![
                    v.y0 + d.ratio_ba * v.yp0 - d.mu1_over_a,
                    v.z0 + d.ratio_dc * v.zp0 - d.mu2_over_c,
                    st.y(1.0) - d.mu3 * d.eta1 * st.z(d.nu1),
                    st.z(1.0) - d.mu4 * d.eta2 * st.y(d.nu2),
                ],
                BoundarySpec::NeumannDirichlet { yp0, zp0, y1, z1 } => {
                    vec![v.yp0 - yp0, v.zp0 - zp0, st.y(1.0) - y1, st.z(1.0) - z1]
                }
                BoundarySpec::PureIvp { y0, yp0, z0, zp0 } => {
                    vec![st.y(0.0) - y0, v.yp0 - yp0, st.z(0.0) - z0, v.zp0 - zp0]
                }
            };
            worst = gaps.iter().fold(worst, |m, g| m.max(g.abs()));

            if let BoundarySpec::CaseI(d) = mode {
                let w = assemble(&c, &zero, params(j)).unwrap();
                let m = [
                    [1.0 - d.a / d.b, -d.mu3 * d.eta1 * (1.0 - d.c * d.nu1 / d.d)],
                    [-d.mu4 * d.eta2 * (1.0 - d.a * d.nu2 / d.b), 1.0 - d.c / d.d],
                ];
                let r = [
                    d.mu3 * d.eta1 * (w.z(d.nu1) + d.mu2 * d.nu1 / d.d) - w.y(1.0) - d.mu1 / d.b,
                    d.mu4 * d.eta2 * (w.y(d.nu2) + d.mu1 * d.nu2 / d.b) - w.z(1.0) - d.mu2 / d.d,
                ];
                let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
                let want = [
                    (r[0] * m[1][1] - m[0][1] * r[1]) / det,
                    (m[0][0] * r[1] - r[0] * m[1][0]) / det,
                ];
                let (y0, z0) = case1_intercepts(&c, &spec.orders, &d).unwrap();
                worst_2x2 = worst_2x2
                    .max((y0 - want[0]).abs())
                    .max((z0 - want[1]).abs());
            }
        }
    }
    verdict(
        worst <= 1e-12 && worst_2x2 <= 1e-12,
        format!("4 modes x 100 vectors, max condition gap {worst:.2e}, Case I intercepts vs 2x2 solve {worst_2x2:.2e}"),
    )
}

fn classical_limit() -> Verdict {
    let grid: Vec<f64> = (1..=20).map(|i| i as f64 / 20.0).collect();
    let mut parts = Vec::new();
    let mut ok = true;
    let oracles = [
        ("5.1", Some(classical::initial_value_problem())),
        ("5.3", classical::four_point_problem()),
    ];
    for (name, oracle) in oracles {
        let Some(oracle) = oracle else {
            ok = false;
            parts.push(format!("{name}: oracle shooting failed"));
            continue;
        };
        let spec = builtin_experiment::<f64>(name)
            .unwrap()
            .with_orders(FractionalOrders::classical());
        let res = run(&spec, params(5), &SolverConfig::default()).unwrap();
        let (ey, ez) = absolute_error_vs_oracle(&res.state, |x| (oracle.y(x), oracle.z(x)), &grid);
        let wy = ey.iter().cloned().fold(0.0, f64::max);
        let wz = ez.iter().cloned().fold(0.0, f64::max);
        ok &= wy <= 5e-3 && wz <= 5e-3;
        parts.push(format!("{name}: max |dy| {wy:.2e}, max |dz| {wz:.2e}"));
    }
    verdict(ok, parts.join("; "))
}

fn stability() -> Verdict {
    let mut worst_cond = 0.0f64;
    let mut runs = 0;
    let mut ok = true;
    for name in EXPERIMENT_NAMES {
        for o in published_orders(name).unwrap() {
            let spec = builtin_experiment::<f64>(name).unwrap().with_orders(o);
            for j in 0..=5 {
                runs += 1;
                match run(&spec, params(j), &SolverConfig::default()) {
                    Ok(r) => {
                        let c = r.diagnostics.condition_estimate;
                        ok &= c.is_finite() && c < 1e8 && r.diagnostics.converged;
                        worst_cond = worst_cond.max(c);
                    }
                    Err(_) => ok = false,
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_gap = 0.0f64;
    let grid = fraclane::dense_grid::<f64>();
    for name in EXPERIMENT_NAMES {
        let spec = builtin_experiment::<f64>(name).unwrap();
        for j in [3, 5] {
            let n = params(j).basis_size();
            let sols: Vec<_> = (0..2)
                .map(|_| {
                    let guess = CoefficientVector {
                        a: (0..n).map(|_| rng.gen_range(-0.1..0.1)).collect(),
                        b: (0..n).map(|_| rng.gen_range(-0.1..0.1)).collect(),
                    };
                    let cfg = SolverConfig {
                        initial_guess: InitialGuess::Given(guess),
                        ..SolverConfig::default()
                    };
                    run(&spec, params(j), &cfg)
                })
                .collect();
            match (&sols[0], &sols[1]) {
                (Ok(a), Ok(b)) if a.diagnostics.converged && b.diagnostics.converged => {
                    for &x in &grid {
                        worst_gap = worst_gap
                            .max((a.state.y(x) - b.state.y(x)).abs())
                            .max((a.state.z(x) - b.state.z(x)).abs());
                    }
                }
                _ => ok = false,
            }
        }
    }
    ok &= worst_gap <= 1e-8;
    verdict(
        ok,
        format!("{runs} runs, max condition estimate {worst_cond:.3e}; random starts differ by at most {worst_gap:.2e}"),
    )
}

fn cli_bytes(dir: &std::path::Path, tag: &str) -> (i32, Vec<u8>) {
    let table = dir.join(format!("{tag}.csv"));
    let json = dir.join(format!("{tag}.json"));
    let mut out = Vec::new();
    let code = run_cli(
        [
            "fraclane",
            "--experiment",
            "5.2",
            "--J",
            "4",
            "--alpha1",
            "1.83",
            "--beta1",
            "0.83",
            "--alpha2",
            "1.84",
            "--beta2",
            "0.84",
            "--summary",
            "--table",
            table.to_str().unwrap(),
            "--json",
            json.to_str().unwrap(),
        ],
        &mut out,
        &mut Vec::new(),
    );
    let mut bytes = out;
    bytes.extend(fs::read(&table).unwrap_or_default());
    bytes.extend(fs::read(&json).unwrap_or_default());
    (code, bytes)
}

fn determinism_and_format() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let (c1, b1) = cli_bytes(dir.path(), "first");
    let (c2, b2) = cli_bytes(dir.path(), "second");
    let identical = c1 == 0 && c2 == 0 && b1 == b2;

    let csv = fs::read_to_string(dir.path().join("first.csv")).unwrap_or_default();
    let csv_ok = parse_table_csv(&csv)
        .map(|t| {
            let mut rows = String::from("x,r1,r2,r\n");
            for i in 0..t.x.len() {
                let f = fraclane_cli::format_sig9;
                rows += &format!(
                    "{},{},{},{}\n",
                    f(t.x[i]),
                    f(t.r1[i]),
                    f(t.r2[i]),
                    f(t.r[i])
                );
            }
            rows += &format!("E,,,{}\n", fraclane_cli::format_sig9(t.e_max));
            t.x.len() == 9 && rows == csv
        })
        .unwrap_or(false);

    let schema_path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/run-schema.json");
    let schema: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(schema_path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let json = fs::read_to_string(dir.path().join("first.json")).unwrap_or_default();
    let json_ok = serde_json::from_str::<serde_json::Value>(&json)
        .map(|v| validator.is_valid(&v))
        .unwrap_or(false)
        && RunDocument::from_json(&json)
            .and_then(|d| d.reassemble().map(|(_, st)| st.y(0.5).is_finite()))
            .unwrap_or(false);

    // the writer refuses an empty report
    let empty = fraclane::Report {
        grid: vec![],
        r1: vec![],
        r2: vec![],
        r: vec![],
        e_max: 0.0,
    };
    let empty_rejected = table_csv(&empty).is_err();

    verdict(
        identical && csv_ok && json_ok && empty_rejected,
        format!(
            "byte-identical reruns: {identical}, CSV reparse: {csv_ok}, JSON schema + reparse: {json_ok}, empty table rejected: {empty_rejected}"
        ),
    )
}

fn main() {
    let criteria: [(u32, fn() -> Verdict); 9] = [
        (1, table_reproduction),
        (2, monotone_convergence),
        (3, manufactured_exactness),
        (4, quadrature_oracle),
        (5, orthogonality),
        (6, boundary_closure),
        (7, classical_limit),
        (8, stability),
        (9, determinism_and_format),
    ];
    let mut unexpected = Vec::new();
    for (n, check) in criteria {
        let v = check();
        println!(
            "criterion {n}: {}  {}",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
        let expected_red = KNOWN_RED.contains(&n);
        if v.pass == expected_red {
            unexpected.push(n);
        }
    }
    if !KNOWN_RED.is_empty() {
        println!("known red (see the decisions ledger): {KNOWN_RED:?}");
    }
    if !unexpected.is_empty() {
        println!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
