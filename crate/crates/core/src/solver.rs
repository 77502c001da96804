//! Newton-Raphson on the collocation system with a finite-difference Jacobian.

use crate::assembly::{CoefficientVector, Discretization};
use crate::error::Error;
use crate::haar::ResolutionParams;
use crate::linalg::{norm_inf, Lu, Matrix};
use crate::problem::ProblemSpec;
use crate::scalar::Scalar;

/// Starting point of the iteration.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum InitialGuess<T> {
    #[default]
    Zeros,
    Given(CoefficientVector<T>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig<T> {
    /// Stop once `‖Φ‖∞` is at or below this.
    pub tol: T,
    pub max_iter: usize,
    /// Finite-difference step is `fd_scale * (1 + |c_i|)`; defaults to `√ε`.
    pub fd_scale: T,
    pub initial_guess: InitialGuess<T>,
    /// Halve the step (up to 20 times) while the residual norm grows.
    pub damping: bool,
}

impl<T: Scalar> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            tol: T::lit(1e-12),
            max_iter: 50,
            fd_scale: T::epsilon().sqrt(),
            initial_guess: InitialGuess::Zeros,
            damping: false,
        }
    }
}

impl<T: Scalar> SolverConfig<T> {
    fn check(&self) -> Result<(), Error> {
        if !(self.tol > T::zero()) {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if !(self.fd_scale > T::zero()) {
            return Err(Error::InvalidArgument(
                "finite-difference scale must be positive".to_string(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveDiagnostics<T> {
    pub iterations: usize,
    pub converged: bool,
    /// `‖Φ‖∞` at the returned iterate.
    pub final_residual_norm: T,
    /// `‖Φ‖∞` before the first step and after each step.
    pub residual_history: Vec<T>,
    /// 1-norm condition estimate of the Jacobian at the last factorized iterate.
    pub condition_estimate: T,
}

#[derive(Debug, Clone)]
pub struct NewtonOutcome<T> {
    pub coeffs: CoefficientVector<T>,
    pub diagnostics: SolveDiagnostics<T>,
}

const MAX_HALVINGS: usize = 20;

/// Forward-difference Jacobian of `f` at `c`, with `f(c)` supplied.
///
/// The step for column `i` is `scale * (1 + |c_i|)`, rounded so that
/// `c_i + h` is exactly representable relative to `c_i`.
pub fn jacobian_fd<T, F>(f: F, c: &[T], f0: &[T], scale: T) -> Result<Matrix<T>, Error>
where
    T: Scalar,
    F: Fn(&[T]) -> Result<Vec<T>, Error>,
{
    let m = f0.len();
    let n = c.len();
    let mut jac = Matrix::zeros(m, n);
    let mut probe = c.to_vec();
    for i in 0..n {
        let ci = c[i];
        let target = ci + scale * (T::one() + ci.abs());
        let h = target - ci;
        probe[i] = target;
        let fi = f(&probe)?;
        probe[i] = ci;
        if fi.len() != m {
            return Err(Error::Dimension {
                expected: m,
                actual: fi.len(),
            });
        }
        for r in 0..m {
            jac.row_mut(r)[i] = (fi[r] - f0[r]) / h;
        }
    }
    Ok(jac)
}

/// Solves `Φ(c) = 0` on a prepared discretization.
///
/// Running out of iterations is not an error: the best iterate comes back
/// with `converged == false`. A singular Jacobian is.
pub fn newton_on<T: Scalar>(
    disc: &Discretization<T>,
    config: &SolverConfig<T>,
) -> Result<NewtonOutcome<T>, Error> {
    config.check()?;
    let n = disc.system_size();
    let mut c = match &config.initial_guess {
        InitialGuess::Zeros => vec![T::zero(); n],
        InitialGuess::Given(g) => {
            let v = g.to_flat();
            if v.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    actual: v.len(),
                });
            }
            v
        }
    };
    let resid = |v: &[T]| disc.residual(v);
    let mut f = resid(&c)?;
    let mut norm = norm_inf(&f);
    let mut history = vec![norm];
    let mut best = (c.clone(), norm);
    let mut cond = T::nan();
    let mut iterations = 0;

    while norm > config.tol && iterations < config.max_iter {
        let jac = jacobian_fd(resid, &c, &f, config.fd_scale)?;
        let lu = Lu::factor(&jac)?;
        cond = lu.condition_estimate_1norm();
        let dx = lu.solve(&f)?;
        iterations += 1;

        let mut lambda = T::one();
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let trial: Vec<T> = c
                .iter()
                .zip(&dx)
                .map(|(&ci, &di)| ci - lambda * di)
                .collect();
            match resid(&trial) {
                Ok(ft) => {
                    let nt = norm_inf(&ft);
                    if !config.damping || nt < norm {
                        accepted = Some((trial, ft, nt));
                        break;
                    }
                }
                Err(e) if !config.damping => return Err(e),
                Err(_) => {}
            }
            lambda = lambda / T::lit(2.0);
        }
        let Some((trial, ft, nt)) = accepted else {
            // no halving reduced the residual; stop at the best point so far
            break;
        };
        c = trial;
        f = ft;
        norm = nt;
        history.push(norm);
        if !(norm >= best.1) {
            best = (c.clone(), norm);
        }
        if !norm.is_finite() {
            break;
        }
    }

    let converged = best.1 <= config.tol;
    if cond.is_nan() || best.0 != c {
        // condition of the Jacobian at the iterate actually returned
        let jac = jacobian_fd(resid, &best.0, &resid(&best.0)?, config.fd_scale)?;
        cond = Lu::factor(&jac)?.condition_estimate_1norm();
    }
    Ok(NewtonOutcome {
        coeffs: CoefficientVector::from_flat(&best.0)?,
        diagnostics: SolveDiagnostics {
            iterations,
            converged,
            final_residual_norm: best.1,
            residual_history: history,
            condition_estimate: cond,
        },
    })
}

/// Builds the discretization for `spec` at `params` and solves it.
pub fn newton_solve<T: Scalar>(
    spec: &ProblemSpec<T>,
    params: ResolutionParams,
    config: &SolverConfig<T>,
) -> Result<NewtonOutcome<T>, Error> {
    newton_on(&Discretization::new(spec, params)?, config)
}
