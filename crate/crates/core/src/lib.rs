//! Fractional Haar wavelet collocation for coupled singular Lane-Emden
//! systems of Caputo type.
//!
//! Numerical routines are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix the working precision to `f64`.
//!
//! ```
//! use fraclane::{builtin_experiment, run, ResolutionParams, SolverConfig};
//!
//! let spec = builtin_experiment::<f64>("5.1").unwrap();
//! let res = run(&spec, ResolutionParams::new(3).unwrap(), &SolverConfig::default()).unwrap();
//! assert!(res.diagnostics.converged);
//! assert!(res.tables.table.e_max < 0.05);
//! ```

pub mod analysis;
pub mod assembly;
pub mod error;
pub mod expr;
pub mod fractional;
pub mod haar;
pub mod linalg;
pub mod problem;
pub mod scalar;
pub mod solver;

pub use analysis::{
    absolute_error_vs_oracle, convergence_sweep, dense_grid, residual_at, residual_report,
    residual_table, run, table_grid, ConvergenceRow, ConvergenceTable, ResidualPoint,
    ResidualReport, ResidualTables, RunResult, DENSE_POINTS,
};
pub use assembly::{
    assemble, boundary_values, case1_intercepts, case2_slopes, residual_system, AssembledState,
    BoundaryValues, ClosureSums, CoefficientVector, Discretization,
};
pub use error::Error;
pub use expr::{parse as parse_expr, Expr, ExprError};
pub use fractional::{
    caputo_linear_term, frac_integral_haar, gamma, integration_matrix, rl_integral_monomial,
    FracOrder,
};
pub use haar::{
    breakpoints, collocation_points, decompose_index, haar_eval, haar_matrix,
    pairwise_inner_product, Breakpoints, ResolutionParams, WaveletIndex, MAX_LEVEL,
};
pub use linalg::{condition_estimate_1norm, lu_solve, Lu, Matrix};
pub use problem::{
    builtin_experiment, builtin_experiments, published_orders, BoundarySpec, CaseIData, CaseIIData,
    FractionalOrders, ProblemConfig, ProblemSpec, Rhs, SingularTerm, ValidationReport,
    EXPERIMENT_NAMES,
};
pub use scalar::Scalar;
pub use solver::{
    jacobian_fd, newton_on, newton_solve, InitialGuess, NewtonOutcome, SolveDiagnostics,
    SolverConfig,
};

pub type Problem = ProblemSpec<f64>;
pub type Orders = FractionalOrders<f64>;
pub type Boundary = BoundarySpec<f64>;
pub type Coefficients = CoefficientVector<f64>;
pub type State = AssembledState<f64>;
pub type Config = SolverConfig<f64>;
pub type Diagnostics = SolveDiagnostics<f64>;
pub type Report = ResidualReport<f64>;
pub type Run = RunResult<f64>;
pub type Sweep = ConvergenceTable<f64>;
