//! Declarative description of a coupled fractional Lane-Emden system
//!
//! ```text
//! D^α1 y + (k1 / x^γ1) D^β1 y = f1(x, y, z)
//! D^α2 z + (k2 / x^γ2) D^β2 z = f2(x, y, z),    x ∈ (0, 1)
//! ```
//!
//! with Caputo derivatives and one of four boundary modes, together with the
//! built-in experiment registry and the TOML problem file format.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::expr::{self, Expr, ExprError};
use crate::scalar::Scalar;

/// Orders `(α1, β1, α2, β2)` with `1 < α ≤ 2`, `0 < β ≤ 1`, `α > β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FractionalOrders<T> {
    pub alpha1: T,
    pub beta1: T,
    pub alpha2: T,
    pub beta2: T,
}

impl<T: Scalar> FractionalOrders<T> {
    pub fn new(alpha1: T, beta1: T, alpha2: T, beta2: T) -> Self {
        Self {
            alpha1,
            beta1,
            alpha2,
            beta2,
        }
    }

    /// `α = 2`, `β = 1`: the ordinary second-order system.
    pub fn classical() -> Self {
        let two = T::lit(2.0);
        Self::new(two, T::one(), two, T::one())
    }

    pub fn from_f64(o: FractionalOrders<f64>) -> Self {
        Self::new(
            T::lit(o.alpha1),
            T::lit(o.beta1),
            T::lit(o.alpha2),
            T::lit(o.beta2),
        )
    }

    pub fn to_f64(self) -> FractionalOrders<f64> {
        FractionalOrders::new(
            self.alpha1.to_f64_lossy(),
            self.beta1.to_f64_lossy(),
            self.alpha2.to_f64_lossy(),
            self.beta2.to_f64_lossy(),
        )
    }

    fn check(&self, errs: &mut Vec<String>) {
        let one = T::one();
        let two = T::lit(2.0);
        for (name, a) in [("alpha1", self.alpha1), ("alpha2", self.alpha2)] {
            if !(a > one && a <= two) {
                errs.push(format!("{name} = {a} is outside (1, 2]"));
            }
        }
        for (name, b) in [("beta1", self.beta1), ("beta2", self.beta2)] {
            if !(b > T::zero() && b <= one) {
                errs.push(format!("{name} = {b} is outside (0, 1]"));
            }
        }
        if !(self.alpha1 > self.beta1) {
            errs.push("alpha1 must exceed beta1".to_string());
        }
        if !(self.alpha2 > self.beta2) {
            errs.push("alpha2 must exceed beta2".to_string());
        }
    }
}

impl<T: Scalar> fmt::Display for FractionalOrders<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.alpha1, self.beta1, self.alpha2, self.beta2
        )
    }
}

/// Singular coefficient `k / x^γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingularTerm<T> {
    pub k: T,
    pub gamma: T,
}

impl<T: Scalar> SingularTerm<T> {
    pub fn new(k: T, gamma: T) -> Self {
        Self { k, gamma }
    }

    /// `k / x^γ`; callers only pass `x > 0`.
    pub fn factor(&self, x: T) -> T {
        if self.k == T::zero() {
            T::zero()
        } else {
            self.k / x.powf(self.gamma)
        }
    }

    fn check(&self, which: u8, errs: &mut Vec<String>) {
        if !(self.k >= T::zero()) || !self.k.is_finite() {
            errs.push(format!(
                "sing{which}.k = {} must be finite and >= 0",
                self.k
            ));
        }
        if !(self.gamma > T::zero()) || !self.gamma.is_finite() {
            errs.push(format!("sing{which}.gamma = {} must be > 0", self.gamma));
        }
    }
}

/// `a y(0) + b y'(0) = μ1`, `c z(0) + d z'(0) = μ2`,
/// `y(1) = μ3 η1 z(ν1)`, `z(1) = μ4 η2 y(ν2)`, solved for `y(0)`, `z(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseIData<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
    pub mu1: T,
    pub mu2: T,
    pub mu3: T,
    pub mu4: T,
    pub eta1: T,
    pub eta2: T,
    pub nu1: T,
    pub nu2: T,
}

impl<T: Scalar> CaseIData<T> {
    /// `(1 - a/b)(1 - c/d) - μ3μ4η1η2 (1 - aν2/b)(1 - cν1/d)`.
    pub fn denominator(&self) -> T {
        let one = T::one();
        (one - self.a / self.b) * (one - self.c / self.d)
            - self.mu3
                * self.mu4
                * self.eta1
                * self.eta2
                * (one - self.a * self.nu2 / self.b)
                * (one - self.c * self.nu1 / self.d)
    }

    fn denominator_scale(&self) -> T {
        let one = T::one();
        ((one - self.a / self.b) * (one - self.c / self.d))
            .abs()
            .max(
                (self.mu3
                    * self.mu4
                    * self.eta1
                    * self.eta2
                    * (one - self.a * self.nu2 / self.b)
                    * (one - self.c * self.nu1 / self.d))
                    .abs(),
            )
            .max(one)
    }
}

/// Case II in ratio form: `y(0) = μ1/a - (b/a) y'(0)`,
/// `z(0) = μ2/c - (d/c) z'(0)`, with the same nonlocal right ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseIIData<T> {
    pub ratio_ba: T,
    pub ratio_dc: T,
    pub mu1_over_a: T,
    pub mu2_over_c: T,
    pub mu3: T,
    pub mu4: T,
    pub eta1: T,
    pub eta2: T,
    pub nu1: T,
    pub nu2: T,
}

impl<T: Scalar> CaseIIData<T> {
    /// `(1 - b/a)(1 - d/c) - μ3μ4η1η2 (ν1 - d/c)(ν2 - b/a)`.
    pub fn denominator(&self) -> T {
        let one = T::one();
        (one - self.ratio_ba) * (one - self.ratio_dc)
            - self.mu3
                * self.mu4
                * self.eta1
                * self.eta2
                * (self.nu1 - self.ratio_dc)
                * (self.nu2 - self.ratio_ba)
    }

    fn denominator_scale(&self) -> T {
        let one = T::one();
        ((one - self.ratio_ba) * (one - self.ratio_dc))
            .abs()
            .max(
                (self.mu3
                    * self.mu4
                    * self.eta1
                    * self.eta2
                    * (self.nu1 - self.ratio_dc)
                    * (self.nu2 - self.ratio_ba))
                    .abs(),
            )
            .max(one)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", deny_unknown_fields)]
pub enum BoundarySpec<T> {
    #[serde(rename = "CaseI")]
    CaseI(CaseIData<T>),
    #[serde(rename = "CaseII")]
    CaseII(CaseIIData<T>),
    /// `y'(0) = yp0`, `z'(0) = zp0`, `y(1) = y1`, `z(1) = z1`.
    #[serde(rename = "NeumannDirichlet")]
    NeumannDirichlet { yp0: T, zp0: T, y1: T, z1: T },
    /// `y(0) = y0`, `y'(0) = yp0`, `z(0) = z0`, `z'(0) = zp0`.
    #[serde(rename = "PureIVP")]
    PureIvp { y0: T, yp0: T, z0: T, zp0: T },
}

impl<T: Scalar> BoundarySpec<T> {
    pub fn mode_name(&self) -> &'static str {
        match self {
            BoundarySpec::CaseI(_) => "CaseI",
            BoundarySpec::CaseII(_) => "CaseII",
            BoundarySpec::NeumannDirichlet { .. } => "NeumannDirichlet",
            BoundarySpec::PureIvp { .. } => "PureIVP",
        }
    }

    /// Closure denominator for the nonlocal modes.
    pub fn denominator(&self) -> Option<T> {
        match self {
            BoundarySpec::CaseI(d) => Some(d.denominator()),
            BoundarySpec::CaseII(d) => Some(d.denominator()),
            _ => None,
        }
    }

    fn check(&self, errs: &mut Vec<String>) {
        let tiny = T::lit(64.0) * T::epsilon();
        let unit = |name: &str, v: T, errs: &mut Vec<String>| {
            if !(v >= T::zero() && v <= T::one()) {
                errs.push(format!("{name} = {v} must lie in [0, 1]"));
            }
        };
        let nonneg = |fields: &[(&str, T)], errs: &mut Vec<String>| {
            for &(name, v) in fields {
                if !(v >= T::zero()) || !v.is_finite() {
                    errs.push(format!("{name} = {v} must be finite and >= 0"));
                }
            }
        };
        match self {
            BoundarySpec::CaseI(d) => {
                nonneg(
                    &[
                        ("a", d.a),
                        ("b", d.b),
                        ("c", d.c),
                        ("d", d.d),
                        ("mu1", d.mu1),
                        ("mu2", d.mu2),
                        ("mu3", d.mu3),
                        ("mu4", d.mu4),
                        ("eta1", d.eta1),
                        ("eta2", d.eta2),
                    ],
                    errs,
                );
                unit("nu1", d.nu1, errs);
                unit("nu2", d.nu2, errs);
                if d.b == T::zero() {
                    errs.push("Case I needs b != 0 (use Case II for b = 0)".to_string());
                }
                if d.d == T::zero() {
                    errs.push("Case I needs d != 0 (use Case II for d = 0)".to_string());
                }
                if d.b != T::zero() && d.d != T::zero() {
                    let den = d.denominator();
                    if !(den.abs() > tiny * d.denominator_scale()) {
                        errs.push(format!("Case I closure denominator is zero ({den})"));
                    }
                }
            }
            BoundarySpec::CaseII(d) => {
                nonneg(
                    &[
                        ("ratio_ba", d.ratio_ba),
                        ("ratio_dc", d.ratio_dc),
                        ("mu1_over_a", d.mu1_over_a),
                        ("mu2_over_c", d.mu2_over_c),
                        ("mu3", d.mu3),
                        ("mu4", d.mu4),
                        ("eta1", d.eta1),
                        ("eta2", d.eta2),
                    ],
                    errs,
                );
                unit("nu1", d.nu1, errs);
                unit("nu2", d.nu2, errs);
                let den = d.denominator();
                if !(den.abs() > tiny * d.denominator_scale()) {
                    errs.push(format!("Case II closure denominator is zero ({den})"));
                }
            }
            BoundarySpec::NeumannDirichlet { yp0, zp0, y1, z1 } => {
                for (name, v) in [("yp0", yp0), ("zp0", zp0), ("y1", y1), ("z1", z1)] {
                    if !v.is_finite() {
                        errs.push(format!("{name} must be finite"));
                    }
                }
            }
            BoundarySpec::PureIvp { y0, yp0, z0, zp0 } => {
                for (name, v) in [("y0", y0), ("yp0", yp0), ("z0", z0), ("zp0", zp0)] {
                    if !v.is_finite() {
                        errs.push(format!("{name} must be finite"));
                    }
                }
            }
        }
    }

    pub fn from_f64(b: BoundarySpec<f64>) -> Self {
        let l = T::lit;
        match b {
            BoundarySpec::CaseI(d) => BoundarySpec::CaseI(CaseIData {
                a: l(d.a),
                b: l(d.b),
                c: l(d.c),
                d: l(d.d),
                mu1: l(d.mu1),
                mu2: l(d.mu2),
                mu3: l(d.mu3),
                mu4: l(d.mu4),
                eta1: l(d.eta1),
                eta2: l(d.eta2),
                nu1: l(d.nu1),
                nu2: l(d.nu2),
            }),
            BoundarySpec::CaseII(d) => BoundarySpec::CaseII(CaseIIData {
                ratio_ba: l(d.ratio_ba),
                ratio_dc: l(d.ratio_dc),
                mu1_over_a: l(d.mu1_over_a),
                mu2_over_c: l(d.mu2_over_c),
                mu3: l(d.mu3),
                mu4: l(d.mu4),
                eta1: l(d.eta1),
                eta2: l(d.eta2),
                nu1: l(d.nu1),
                nu2: l(d.nu2),
            }),
            BoundarySpec::NeumannDirichlet { yp0, zp0, y1, z1 } => BoundarySpec::NeumannDirichlet {
                yp0: l(yp0),
                zp0: l(zp0),
                y1: l(y1),
                z1: l(z1),
            },
            BoundarySpec::PureIvp { y0, yp0, z0, zp0 } => BoundarySpec::PureIvp {
                y0: l(y0),
                yp0: l(yp0),
                z0: l(z0),
                zp0: l(zp0),
            },
        }
    }

    pub fn to_f64(self) -> BoundarySpec<f64> {
        let l = |v: T| v.to_f64_lossy();
        match self {
            BoundarySpec::CaseI(d) => BoundarySpec::CaseI(CaseIData {
                a: l(d.a),
                b: l(d.b),
                c: l(d.c),
                d: l(d.d),
                mu1: l(d.mu1),
                mu2: l(d.mu2),
                mu3: l(d.mu3),
                mu4: l(d.mu4),
                eta1: l(d.eta1),
                eta2: l(d.eta2),
                nu1: l(d.nu1),
                nu2: l(d.nu2),
            }),
            BoundarySpec::CaseII(d) => BoundarySpec::CaseII(CaseIIData {
                ratio_ba: l(d.ratio_ba),
                ratio_dc: l(d.ratio_dc),
                mu1_over_a: l(d.mu1_over_a),
                mu2_over_c: l(d.mu2_over_c),
                mu3: l(d.mu3),
                mu4: l(d.mu4),
                eta1: l(d.eta1),
                eta2: l(d.eta2),
                nu1: l(d.nu1),
                nu2: l(d.nu2),
            }),
            BoundarySpec::NeumannDirichlet { yp0, zp0, y1, z1 } => BoundarySpec::NeumannDirichlet {
                yp0: l(yp0),
                zp0: l(zp0),
                y1: l(y1),
                z1: l(z1),
            },
            BoundarySpec::PureIvp { y0, yp0, z0, zp0 } => BoundarySpec::PureIvp {
                y0: l(y0),
                yp0: l(yp0),
                z0: l(z0),
                zp0: l(zp0),
            },
        }
    }
}

type NativeFn<T> = Arc<dyn Fn(T, T, T) -> T + Send + Sync>;

/// Right-hand side `f(x, y, z)`: either compiled-in or a parsed expression.
#[derive(Clone)]
pub enum Rhs<T> {
    /// Native closure plus the equivalent expression text.
    Native {
        func: NativeFn<T>,
        source: String,
    },
    Expr(Expr),
}

impl<T: Scalar> Rhs<T> {
    pub fn native(source: &str, func: impl Fn(T, T, T) -> T + Send + Sync + 'static) -> Self {
        Rhs::Native {
            func: Arc::new(func),
            source: source.to_string(),
        }
    }

    pub fn parse(src: &str) -> Result<Self, ExprError> {
        Ok(Rhs::Expr(expr::parse(src)?))
    }

    pub fn eval(&self, x: T, y: T, z: T) -> Result<T, ExprError> {
        match self {
            Rhs::Native { func, source } => {
                let v = func(x, y, z);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(ExprError::Domain {
                        expr: source.clone(),
                        reason: format!("non-finite result {v}"),
                    })
                }
            }
            Rhs::Expr(e) => e.eval(x, y, z),
        }
    }

    /// Expression text; for native functions, the shipped equivalent.
    pub fn source(&self) -> String {
        match self {
            Rhs::Native { source, .. } => source.clone(),
            Rhs::Expr(e) => e.to_string(),
        }
    }

    /// Re-parses the expression form, dropping any native closure.
    pub fn to_expr(&self) -> Result<Self, ExprError> {
        match self {
            Rhs::Native { source, .. } => Self::parse(source),
            Rhs::Expr(e) => Ok(Rhs::Expr(e.clone())),
        }
    }
}

impl<T> fmt::Debug for Rhs<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rhs::Native { source, .. } => write!(f, "Native({source:?})"),
            Rhs::Expr(e) => write!(f, "Expr({e})"),
        }
    }
}

/// Full problem description.
#[derive(Debug, Clone)]
pub struct ProblemSpec<T> {
    pub name: String,
    pub orders: FractionalOrders<T>,
    pub sing1: SingularTerm<T>,
    pub sing2: SingularTerm<T>,
    pub f1: Rhs<T>,
    pub f2: Rhs<T>,
    pub boundary: BoundarySpec<T>,
    /// Reported residuals are multiplied by `x^w`; zero for every
    /// user-defined problem. Collocation equations are unaffected.
    pub residual_weight_exponent: T,
}

/// Outcome of a successful [`ProblemSpec::validate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport<T> {
    pub mode: &'static str,
    /// `Δ_I` or `Δ_II` for the nonlocal modes.
    pub denominator: Option<T>,
}

impl<T: Scalar> ProblemSpec<T> {
    /// Checks every constraint and reports all violations at once.
    pub fn validate(&self) -> Result<ValidationReport<T>, Error> {
        let mut errs = Vec::new();
        self.orders.check(&mut errs);
        self.sing1.check(1, &mut errs);
        self.sing2.check(2, &mut errs);
        self.boundary.check(&mut errs);
        if !self.residual_weight_exponent.is_finite() {
            errs.push("residual weight exponent must be finite".to_string());
        }
        if errs.is_empty() {
            Ok(ValidationReport {
                mode: self.boundary.mode_name(),
                denominator: self.boundary.denominator(),
            })
        } else {
            Err(Error::Validation(errs))
        }
    }

    pub fn with_orders(mut self, orders: FractionalOrders<T>) -> Self {
        self.orders = orders;
        self
    }

    /// Same problem with both right-hand sides in parsed-expression form.
    pub fn with_expression_rhs(&self) -> Result<Self, Error> {
        let mut s = self.clone();
        s.f1 = self.f1.to_expr()?;
        s.f2 = self.f2.to_expr()?;
        Ok(s)
    }

    /// Weight applied to reported residuals at `x`.
    pub fn residual_weight(&self, x: T) -> T {
        if self.residual_weight_exponent == T::zero() {
            T::one()
        } else {
            x.powf(self.residual_weight_exponent)
        }
    }

    /// Parses a TOML problem document.
    pub fn from_config_str(src: &str) -> Result<Self, Error> {
        let cfg: ProblemConfig = toml::from_str(src).map_err(|e| Error::Config(e.to_string()))?;
        cfg.into_spec()
    }

    /// Config-file form; native right-hand sides are written as expressions.
    pub fn to_config(&self) -> ProblemConfig {
        ProblemConfig {
            name: self.name.clone(),
            orders: self.orders.to_f64(),
            sing1: SingularTerm::new(self.sing1.k.to_f64_lossy(), self.sing1.gamma.to_f64_lossy()),
            sing2: SingularTerm::new(self.sing2.k.to_f64_lossy(), self.sing2.gamma.to_f64_lossy()),
            f1: self.f1.source(),
            f2: self.f2.source(),
            boundary: self.boundary.to_f64(),
        }
    }
}

/// On-disk problem document (TOML). Unknown fields are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub name: String,
    pub orders: FractionalOrders<f64>,
    pub sing1: SingularTerm<f64>,
    pub sing2: SingularTerm<f64>,
    pub f1: String,
    pub f2: String,
    pub boundary: BoundarySpec<f64>,
}

impl ProblemConfig {
    pub fn into_spec<T: Scalar>(self) -> Result<ProblemSpec<T>, Error> {
        let f1 = Rhs::parse(&self.f1).map_err(|e| Error::Config(format!("f1: {e}")))?;
        let f2 = Rhs::parse(&self.f2).map_err(|e| Error::Config(format!("f2: {e}")))?;
        Ok(ProblemSpec {
            name: self.name,
            orders: FractionalOrders::from_f64(self.orders),
            sing1: SingularTerm::new(T::lit(self.sing1.k), T::lit(self.sing1.gamma)),
            sing2: SingularTerm::new(T::lit(self.sing2.k), T::lit(self.sing2.gamma)),
            f1,
            f2,
            boundary: BoundarySpec::from_f64(self.boundary),
            residual_weight_exponent: T::zero(),
        })
    }

    pub fn to_toml(&self) -> Result<String, Error> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }
}

/// Names of the built-in experiments, in registry order.
pub const EXPERIMENT_NAMES: [&str; 5] = ["5.1", "5.2", "5.3", "5.4", "5.5"];

/// The four published order tuples of an experiment, in table-column order.
pub fn published_orders(name: &str) -> Option<[FractionalOrders<f64>; 4]> {
    let o = FractionalOrders::new;
    Some(match name {
        "5.1" => [
            o(1.58, 0.58, 1.59, 0.59),
            o(1.7, 0.7, 1.71, 0.71),
            o(1.85, 0.85, 1.86, 0.86),
            o(1.98, 0.98, 1.99, 0.99),
        ],
        "5.2" => [
            o(1.56, 0.56, 1.57, 0.57),
            o(1.72, 0.72, 1.73, 0.73),
            o(1.83, 0.83, 1.84, 0.84),
            o(1.99, 0.98, 1.98, 0.99),
        ],
        "5.3" => [
            o(1.56, 0.58, 1.58, 0.56),
            o(1.69, 0.71, 1.71, 0.7),
            o(1.84, 0.85, 1.85, 0.86),
            o(1.98, 0.99, 1.99, 0.98),
        ],
        "5.4" => [
            o(1.61, 0.62, 1.62, 0.63),
            o(1.74, 0.74, 1.75, 0.75),
            o(1.85, 0.84, 1.84, 0.86),
            o(1.99, 0.999, 1.99, 0.999),
        ],
        "5.5" => [
            o(1.62, 0.62, 1.63, 0.63),
            o(1.74, 0.75, 1.75, 0.73),
            o(1.85, 0.86, 1.86, 0.85),
            o(1.999, 0.99, 1.999, 0.99),
        ],
        _ => return None,
    })
}

/// One built-in experiment by name (`"5.1"` … `"5.5"`), at its first
/// published order tuple.
pub fn builtin_experiment<T: Scalar>(name: &str) -> Option<ProblemSpec<T>> {
    let l = T::lit;
    let orders = FractionalOrders::from_f64(published_orders(name)?[0]);
    let spec = match name {
        // initial value problem
        "5.1" => ProblemSpec {
            name: name.to_string(),
            orders,
            sing1: SingularTerm::new(l(1.0), l(1.0)),
            sing2: SingularTerm::new(l(3.0), l(1.0)),
            f1: Rhs::native("z^3*(y^2+1)", move |_x, y, z: T| {
                z.powi(3) * (y * y + T::one())
            }),
            f2: Rhs::native("-(z^5*(y^2+3))", move |_x, y, z: T| {
                -(z.powi(5) * (y * y + T::lit(3.0)))
            }),
            boundary: BoundarySpec::PureIvp {
                y0: l(1.0),
                yp0: l(0.0),
                z0: l(1.0),
                zp0: l(0.0),
            },
            residual_weight_exponent: T::zero(),
        },
        // boundary value problem with exact classical solution
        // y = 1 - 2 ln(1 + x^2), z = 1 + 2 ln(1 + x^2)
        "5.2" => ProblemSpec {
            name: name.to_string(),
            orders,
            sing1: SingularTerm::new(l(5.0), l(1.0)),
            sing2: SingularTerm::new(l(3.0), l(1.0)),
            f1: Rhs::native("-(8*exp(y-1)) - 16*exp(-((z-1)/2))", move |_x, y, z: T| {
                -(l(8.0) * (y - T::one()).exp()) - l(16.0) * (-((z - T::one()) / l(2.0))).exp()
            }),
            f2: Rhs::native("8*exp(-(z-1)) + 8*exp((y-1)/2)", move |_x, y, z: T| {
                l(8.0) * (-(z - T::one())).exp() + l(8.0) * ((y - T::one()) / l(2.0)).exp()
            }),
            boundary: BoundarySpec::NeumannDirichlet {
                yp0: l(0.0),
                zp0: l(0.0),
                y1: T::one() - l(2.0) * l(2.0).ln(),
                z1: T::one() + l(2.0) * l(2.0).ln(),
            },
            residual_weight_exponent: T::zero(),
        },
        // four-point problem, exact classical solution
        // y = x - 33x^2/35, z = 8x^2/35; residuals are reported with x^(1/2)
        "5.3" => ProblemSpec {
            name: name.to_string(),
            orders,
            sing1: SingularTerm::new(l(0.5), l(1.0)),
            sing2: SingularTerm::new(l(0.5), l(1.0)),
            f1: Rhs::native(
                "-(99/35*x - 1/2 + z*(x^2 - 66/35*x^3 + 1089/1225*x^4) - y^2*z)/x",
                move |x, y, z: T| {
                    let poly = x * x - l(66.0 / 35.0) * x.powi(3) + l(1089.0 / 1225.0) * x.powi(4);
                    -(l(99.0 / 35.0) * x - l(0.5) + z * poly - y * y * z) / x
                },
            ),
            f2: Rhs::native(
                "-(-24/35*x + 64/1225*x^5 - 2112/42875*x^6 - y*z^2)/x",
                move |x, y, z: T| {
                    -(-(l(24.0 / 35.0) * x) + l(64.0 / 1225.0) * x.powi(5)
                        - l(2112.0 / 42875.0) * x.powi(6)
                        - y * z * z)
                        / x
                },
            ),
            boundary: BoundarySpec::CaseII(CaseIIData {
                ratio_ba: l(0.0),
                ratio_dc: l(0.0),
                mu1_over_a: l(0.0),
                mu2_over_c: l(0.0),
                mu3: l(1.0),
                mu4: l(1.0),
                eta1: l(1.0),
                eta2: l(1.0),
                nu1: l(0.5),
                nu2: T::one() / l(3.0),
            }),
            residual_weight_exponent: l(0.5),
        },
        // catalytic diffusion
        "5.4" => ProblemSpec {
            name: name.to_string(),
            orders,
            sing1: SingularTerm::new(l(2.0), l(1.0)),
            sing2: SingularTerm::new(l(2.0), l(1.0)),
            f1: Rhs::native("y^2 + 2/5*y*z", move |_x, y, z: T| y * y + l(0.4) * y * z),
            f2: Rhs::native("1/2*y^2 + y*z", move |_x, y, z: T| l(0.5) * y * y + y * z),
            boundary: BoundarySpec::NeumannDirichlet {
                yp0: l(0.0),
                zp0: l(0.0),
                y1: l(1.0),
                z1: l(2.0),
            },
            residual_weight_exponent: T::zero(),
        },
        // carbon substrate / oxygen concentration
        "5.5" => ProblemSpec {
            name: name.to_string(),
            orders,
            sing1: SingularTerm::new(l(2.0), l(1.0)),
            sing2: SingularTerm::new(l(2.0), l(1.0)),
            f1: Rhs::native(
                "-1 + 5*y*z/((1/10000+y)*(1/10000+z)) + 1/10*y*z/((1/10000+y)*(1/10000+z))",
                move |_x, y, z: T| {
                    let m = y * z / ((l(1e-4) + y) * (l(1e-4) + z));
                    -T::one() + l(5.0) * m + l(0.1) * m
                },
            ),
            f2: Rhs::native(
                "1/10*y*z/((1/10000+y)*(1/10000+z)) + 5/100*y*z/((1/10000+y)*(1/10000+z))",
                move |_x, y, z: T| {
                    let m = y * z / ((l(1e-4) + y) * (l(1e-4) + z));
                    l(0.1) * m + l(0.05) * m
                },
            ),
            boundary: BoundarySpec::NeumannDirichlet {
                yp0: l(0.0),
                zp0: l(0.0),
                y1: l(1.0),
                z1: l(1.0),
            },
            residual_weight_exponent: T::zero(),
        },
        _ => return None,
    };
    Some(spec)
}

/// All five built-in experiments.
pub fn builtin_experiments<T: Scalar>() -> Vec<ProblemSpec<T>> {
    EXPERIMENT_NAMES
        .iter()
        .map(|n| builtin_experiment(n).expect("registered name"))
        .collect()
}
