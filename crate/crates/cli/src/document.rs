//! JSON record of one solve. The layout is published as
//! `docs/run-schema.json`; `schema_version` changes on any incompatible edit.

use serde::{Deserialize, Serialize};

use fraclane::{
    assemble, CoefficientVector, Config, FractionalOrders, Problem, ProblemConfig,
    ResolutionParams, Run, State,
};

use crate::CliError;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunDocument {
    pub schema_version: String,
    pub problem: ProblemConfig,
    /// Exponent `w` of the `x^w` weight on reported residuals.
    pub residual_weight_exponent: f64,
    pub orders: FractionalOrders<f64>,
    pub level: u32,
    pub m: usize,
    pub basis_size: usize,
    pub coefficients: CoefficientsDoc,
    pub boundary_values: BoundaryValuesDoc,
    pub solver: SolverDoc,
    pub diagnostics: DiagnosticsDoc,
    pub table: Vec<TableRow>,
    pub e_max: f64,
    pub dense_e_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientsDoc {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryValuesDoc {
    pub y0: f64,
    pub yp0: f64,
    pub z0: f64,
    pub zp0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverDoc {
    pub tol: f64,
    pub max_iter: usize,
    pub fd_scale: f64,
    pub damping: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsDoc {
    pub iterations: usize,
    pub converged: bool,
    pub final_residual_norm: f64,
    pub residual_history: Vec<f64>,
    /// Absent when no Jacobian could be factorized.
    pub condition_estimate: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableRow {
    pub x: f64,
    pub r1: f64,
    pub r2: f64,
    pub r: f64,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

impl RunDocument {
    pub fn new(spec: &Problem, config: &Config, res: &Run) -> Self {
        let coeffs = res.state.coefficients();
        let bv = res.state.boundary_values();
        let d = &res.diagnostics;
        RunDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            problem: spec.to_config(),
            residual_weight_exponent: spec.residual_weight_exponent,
            orders: spec.orders,
            level: res.params.level(),
            m: res.params.m(),
            basis_size: res.params.basis_size(),
            coefficients: CoefficientsDoc {
                a: coeffs.a.clone(),
                b: coeffs.b.clone(),
            },
            boundary_values: BoundaryValuesDoc {
                y0: bv.y0,
                yp0: bv.yp0,
                z0: bv.z0,
                zp0: bv.zp0,
            },
            solver: SolverDoc {
                tol: config.tol,
                max_iter: config.max_iter,
                fd_scale: config.fd_scale,
                damping: config.damping,
            },
            diagnostics: DiagnosticsDoc {
                iterations: d.iterations,
                converged: d.converged,
                final_residual_norm: d.final_residual_norm,
                residual_history: d.residual_history.clone(),
                condition_estimate: finite(d.condition_estimate),
            },
            table: res
                .tables
                .table
                .points()
                .map(|p| TableRow {
                    x: p.x,
                    r1: p.r1,
                    r2: p.r2,
                    r: p.r,
                })
                .collect(),
            e_max: res.tables.table.e_max,
            dense_e_max: res.tables.dense.e_max,
        }
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s =
            serde_json::to_string_pretty(self).map_err(|e| CliError::Format(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let doc: RunDocument =
            serde_json::from_str(text).map_err(|e| CliError::Format(e.to_string()))?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(CliError::Format(format!(
                "unsupported schema version '{}'",
                doc.schema_version
            )));
        }
        Ok(doc)
    }

    /// Rebuilds the problem and the assembled solution from the document.
    pub fn reassemble(&self) -> Result<(Problem, State), CliError> {
        let mut spec: Problem = self.problem.clone().into_spec()?;
        spec.residual_weight_exponent = self.residual_weight_exponent;
        let params = ResolutionParams::new(self.level)?;
        let coeffs = CoefficientVector {
            a: self.coefficients.a.clone(),
            b: self.coefficients.b.clone(),
        };
        let state = assemble(&coeffs, &spec, params)?;
        Ok((spec, state))
    }
}
