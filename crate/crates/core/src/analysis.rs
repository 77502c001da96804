//! Pointwise residuals of a computed solution, residual tables and
//! resolution sweeps.

use std::thread;

use crate::assembly::{assemble, AssembledState};
use crate::error::Error;
use crate::haar::ResolutionParams;
use crate::problem::{FractionalOrders, ProblemSpec};
use crate::scalar::Scalar;
use crate::solver::{newton_solve, SolverConfig};

/// Number of interior points in the dense residual grid.
pub const DENSE_POINTS: usize = 401;

/// Residual components at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualPoint<T> {
    pub x: T,
    pub r1: T,
    pub r2: T,
    /// `√(r1² + r2²)`.
    pub r: T,
}

/// `|D^α y + k/x^γ D^β y - f|` for both equations at `x ∈ (0, 1]`,
/// scaled by the problem's residual weight.
pub fn residual_at<T: Scalar>(
    state: &AssembledState<T>,
    spec: &ProblemSpec<T>,
    x: T,
) -> Result<ResidualPoint<T>, Error> {
    if !(x > T::zero() && x <= T::one()) {
        return Err(Error::InvalidArgument(format!(
            "residuals are evaluated on (0, 1], got x = {x}"
        )));
    }
    let (y, z) = (state.y(x), state.z(x));
    let xf = x.to_f64_lossy();
    let f1 = spec
        .f1
        .eval(x, y, z)
        .map_err(|source| Error::RhsEvaluation {
            equation: 1,
            x: xf,
            source,
        })?;
    let f2 = spec
        .f2
        .eval(x, y, z)
        .map_err(|source| Error::RhsEvaluation {
            equation: 2,
            x: xf,
            source,
        })?;
    let w = spec.residual_weight(x);
    let r1 = w * (state.d_alpha_y(x) + spec.sing1.factor(x) * state.d_beta_y(x) - f1).abs();
    let r2 = w * (state.d_alpha_z(x) + spec.sing2.factor(x) * state.d_beta_z(x) - f2).abs();
    let r = r1.hypot(r2);
    if !r.is_finite() {
        return Err(Error::NonFinite {
            equation: if r1.is_finite() { 2 } else { 1 },
            x: xf,
        });
    }
    Ok(ResidualPoint { x, r1, r2, r })
}

/// Residuals on a grid together with `E = max r`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport<T> {
    pub grid: Vec<T>,
    pub r1: Vec<T>,
    pub r2: Vec<T>,
    pub r: Vec<T>,
    pub e_max: T,
}

impl<T: Scalar> ResidualReport<T> {
    pub fn points(&self) -> impl Iterator<Item = ResidualPoint<T>> + '_ {
        (0..self.grid.len()).map(move |i| ResidualPoint {
            x: self.grid[i],
            r1: self.r1[i],
            r2: self.r2[i],
            r: self.r[i],
        })
    }
}

/// `0.1, 0.2, …, 0.9`.
pub fn table_grid<T: Scalar>() -> Vec<T> {
    (1..=9).map(|i| T::from_count(i) / T::lit(10.0)).collect()
}

/// `i / 402` for `i = 1..=401`.
pub fn dense_grid<T: Scalar>() -> Vec<T> {
    let d = T::from_count(DENSE_POINTS + 1);
    (1..=DENSE_POINTS).map(|i| T::from_count(i) / d).collect()
}

/// Residuals on an arbitrary non-empty grid in `(0, 1]`.
pub fn residual_report<T: Scalar>(
    state: &AssembledState<T>,
    spec: &ProblemSpec<T>,
    grid: &[T],
) -> Result<ResidualReport<T>, Error> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty residual grid".to_string()));
    }
    let mut rep = ResidualReport {
        grid: grid.to_vec(),
        r1: Vec::with_capacity(grid.len()),
        r2: Vec::with_capacity(grid.len()),
        r: Vec::with_capacity(grid.len()),
        e_max: T::zero(),
    };
    for &x in grid {
        let p = residual_at(state, spec, x)?;
        rep.r1.push(p.r1);
        rep.r2.push(p.r2);
        rep.r.push(p.r);
        rep.e_max = rep.e_max.max(p.r);
    }
    Ok(rep)
}

/// Sampled table on `0.1..0.9` plus the dense grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualTables<T> {
    pub table: ResidualReport<T>,
    pub dense: ResidualReport<T>,
}

pub fn residual_table<T: Scalar>(
    state: &AssembledState<T>,
    spec: &ProblemSpec<T>,
) -> Result<ResidualTables<T>, Error> {
    Ok(ResidualTables {
        table: residual_report(state, spec, &table_grid())?,
        dense: residual_report(state, spec, &dense_grid())?,
    })
}

/// Everything produced by one solve at one resolution.
#[derive(Debug, Clone)]
pub struct RunResult<T> {
    pub params: ResolutionParams,
    pub state: AssembledState<T>,
    pub diagnostics: crate::solver::SolveDiagnostics<T>,
    pub tables: ResidualTables<T>,
}

/// Solves and evaluates the residual tables.
pub fn run<T: Scalar>(
    spec: &ProblemSpec<T>,
    params: ResolutionParams,
    config: &SolverConfig<T>,
) -> Result<RunResult<T>, Error> {
    let out = newton_solve(spec, params, config)?;
    let state = assemble(&out.coeffs, spec, params)?;
    let tables = residual_table(&state, spec)?;
    Ok(RunResult {
        params,
        state,
        diagnostics: out.diagnostics,
        tables,
    })
}

/// One level of a sweep. A failed solve leaves `E` as NaN and records the
/// error text.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow<T> {
    pub level: u32,
    /// `E` on the nine table points.
    pub e_max: T,
    pub e_dense: T,
    pub iterations: usize,
    pub converged: bool,
    pub condition_estimate: T,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable<T> {
    pub orders: FractionalOrders<T>,
    pub rows: Vec<ConvergenceRow<T>>,
}

impl<T: Scalar> ConvergenceTable<T> {
    /// `log2(E_J / E_{J+1})` between consecutive rows.
    pub fn empirical_orders(&self) -> Vec<T> {
        self.rows
            .windows(2)
            .map(|w| (w[0].e_max / w[1].e_max).log2())
            .collect()
    }

    /// Whether `E` strictly decreases from each row to the next.
    pub fn strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].e_max < w[0].e_max)
    }

    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(|r| r.converged)
    }
}

/// Solves at every level (in parallel) and tabulates `E`.
///
/// Levels must be non-empty and strictly increasing. Results do not depend
/// on scheduling: each level is an independent sequential computation.
pub fn convergence_sweep<T: Scalar>(
    spec: &ProblemSpec<T>,
    levels: &[u32],
    config: &SolverConfig<T>,
) -> Result<ConvergenceTable<T>, Error> {
    if levels.is_empty() {
        return Err(Error::InvalidArgument(
            "no resolution levels given".to_string(),
        ));
    }
    if levels.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "resolution levels must be strictly increasing".to_string(),
        ));
    }
    let params = levels
        .iter()
        .map(|&j| ResolutionParams::new(j))
        .collect::<Result<Vec<_>, _>>()?;
    let results: Vec<Result<RunResult<T>, Error>> = thread::scope(|s| {
        let handles: Vec<_> = params
            .iter()
            .map(|&p| s.spawn(move || run(spec, p, config)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    let rows = params
        .iter()
        .zip(results)
        .map(|(p, res)| match res {
            Ok(res) => ConvergenceRow {
                level: p.level(),
                e_max: res.tables.table.e_max,
                e_dense: res.tables.dense.e_max,
                iterations: res.diagnostics.iterations,
                converged: res.diagnostics.converged,
                condition_estimate: res.diagnostics.condition_estimate,
                error: None,
            },
            Err(e) => ConvergenceRow {
                level: p.level(),
                e_max: T::nan(),
                e_dense: T::nan(),
                iterations: 0,
                converged: false,
                condition_estimate: T::nan(),
                error: Some(e.to_string()),
            },
        })
        .collect();
    Ok(ConvergenceTable {
        orders: spec.orders,
        rows,
    })
}

/// `|y - y_ref|` and `|z - z_ref|` on `grid`.
pub fn absolute_error_vs_oracle<T, F>(
    state: &AssembledState<T>,
    oracle: F,
    grid: &[T],
) -> (Vec<T>, Vec<T>)
where
    T: Scalar,
    F: Fn(T) -> (T, T),
{
    grid.iter()
        .map(|&x| {
            let (yr, zr) = oracle(x);
            ((state.y(x) - yr).abs(), (state.z(x) - zr).abs())
        })
        .unzip()
}
