//! Wavelet representation of the solution pair and the collocation residual.
//!
//! The highest derivatives are expanded as
//! `D^α1 y = Σ a_l h_l`, `D^α2 z = Σ b_l h_l`. Integrating back gives
//!
//! ```text
//! y(x)     = Σ a_l I^α1 h_l(x) + y(0) + x y'(0)
//! D^β1 y   = Σ a_l I^(α1-β1) h_l(x) + y'(0) x^(1-β1) / Γ(2-β1)
//! ```
//!
//! and likewise for `z`. The boundary mode fixes the unknown values among
//! `y(0), y'(0), z(0), z'(0)` as affine functions of the coefficients.

use crate::error::Error;
use crate::fractional::{caputo_linear_unchecked, FracOrder, HaarIntegrator};
use crate::haar::{collocation_points, haar_eval, ResolutionParams};
use crate::linalg::Matrix;
use crate::problem::{BoundarySpec, CaseIData, CaseIIData, FractionalOrders, ProblemSpec};
use crate::scalar::Scalar;

/// Unknown wavelet coefficients `a` (for `y`) and `b` (for `z`).
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector<T> {
    pub a: Vec<T>,
    pub b: Vec<T>,
}

impl<T: Scalar> CoefficientVector<T> {
    pub fn zeros(params: ResolutionParams) -> Self {
        let n = params.basis_size();
        Self {
            a: vec![T::zero(); n],
            b: vec![T::zero(); n],
        }
    }

    /// Splits `[a.., b..]`; the length must be even.
    pub fn from_flat(v: &[T]) -> Result<Self, Error> {
        if v.is_empty() || v.len() % 2 != 0 {
            return Err(Error::Dimension {
                expected: 2 * (v.len() / 2).max(1),
                actual: v.len(),
            });
        }
        let (a, b) = v.split_at(v.len() / 2);
        Ok(Self {
            a: a.to_vec(),
            b: b.to_vec(),
        })
    }

    pub fn to_flat(&self) -> Vec<T> {
        let mut v = Vec::with_capacity(self.a.len() + self.b.len());
        v.extend_from_slice(&self.a);
        v.extend_from_slice(&self.b);
        v
    }

    /// Number of coefficients per component (`2M`).
    pub fn basis_size(&self) -> usize {
        self.a.len()
    }

    fn check(&self, params: ResolutionParams) -> Result<(), Error> {
        let n = params.basis_size();
        for len in [self.a.len(), self.b.len()] {
            if len != n {
                return Err(Error::Dimension {
                    expected: n,
                    actual: len,
                });
            }
        }
        Ok(())
    }
}

/// `y(0), y'(0), z(0), z'(0)` after the boundary closure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryValues<T> {
    pub y0: T,
    pub yp0: T,
    pub z0: T,
    pub zp0: T,
}

/// Wavelet parts of `y(1)`, `y(ν2)`, `z(1)`, `z(ν1)`, i.e. `Σ a_l I^α1 h_l`
/// and `Σ b_l I^α2 h_l` at those points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosureSums<T> {
    pub sa_one: T,
    pub sa_nu2: T,
    pub sb_one: T,
    pub sb_nu1: T,
}

fn check_denominator<T: Scalar>(den: T, what: &'static str) -> Result<(), Error> {
    if den == T::zero() || !den.is_finite() {
        Err(Error::SingularClosure { what })
    } else {
        Ok(())
    }
}

fn case1_from_sums<T: Scalar>(d: &CaseIData<T>, s: ClosureSums<T>) -> Result<(T, T), Error> {
    let one = T::one();
    let den = d.denominator();
    check_denominator(den, "Case I")?;
    let a11 = one - d.a / d.b;
    let a12 = -(d.mu3 * d.eta1 * (one - d.c * d.nu1 / d.d));
    let a21 = -(d.mu4 * d.eta2 * (one - d.a * d.nu2 / d.b));
    let a22 = one - d.c / d.d;
    let r1 =
        d.mu3 * d.eta1 * s.sb_nu1 + d.mu2 * d.mu3 * d.nu1 * d.eta1 / d.d - d.mu1 / d.b - s.sa_one;
    let r2 =
        d.mu4 * d.eta2 * s.sa_nu2 + d.mu1 * d.mu4 * d.eta2 * d.nu2 / d.b - s.sb_one - d.mu2 / d.d;
    let y0 = (r1 * a22 - a12 * r2) / den;
    let z0 = (a11 * r2 - a21 * r1) / den;
    Ok((y0, z0))
}

fn case2_from_sums<T: Scalar>(d: &CaseIIData<T>, s: ClosureSums<T>) -> Result<(T, T), Error> {
    let one = T::one();
    let den = d.denominator();
    check_denominator(den, "Case II")?;
    let (p, q) = (d.mu1_over_a, d.mu2_over_c);
    let g1 = d.mu3 * d.eta1;
    let g2 = d.mu4 * d.eta2;
    let r1 = g1 * s.sb_nu1 + g1 * q - p - s.sa_one;
    let r2 = g2 * s.sa_nu2 + g2 * p - q - s.sb_one;
    let yp = ((one - d.ratio_dc) * r1 + g1 * (d.nu1 - d.ratio_dc) * r2) / den;
    let zp = (g2 * (d.nu2 - d.ratio_ba) * r1 + (one - d.ratio_ba) * r2) / den;
    Ok((yp, zp))
}

/// Resolves the boundary mode into the four initial values.
pub fn boundary_values<T: Scalar>(
    boundary: &BoundarySpec<T>,
    s: ClosureSums<T>,
) -> Result<BoundaryValues<T>, Error> {
    Ok(match *boundary {
        BoundarySpec::PureIvp { y0, yp0, z0, zp0 } => BoundaryValues { y0, yp0, z0, zp0 },
        BoundarySpec::NeumannDirichlet { yp0, zp0, y1, z1 } => BoundaryValues {
            y0: y1 - yp0 - s.sa_one,
            yp0,
            z0: z1 - zp0 - s.sb_one,
            zp0,
        },
        BoundarySpec::CaseI(ref d) => {
            let (y0, z0) = case1_from_sums(d, s)?;
            BoundaryValues {
                y0,
                yp0: (d.mu1 - d.a * y0) / d.b,
                z0,
                zp0: (d.mu2 - d.c * z0) / d.d,
            }
        }
        BoundarySpec::CaseII(ref d) => {
            let (yp0, zp0) = case2_from_sums(d, s)?;
            BoundaryValues {
                y0: d.mu1_over_a - d.ratio_ba * yp0,
                yp0,
                z0: d.mu2_over_c - d.ratio_dc * zp0,
                zp0,
            }
        }
    })
}

fn nonlocal_points<T: Scalar>(boundary: &BoundarySpec<T>) -> (T, T) {
    match boundary {
        BoundarySpec::CaseI(d) => (d.nu1, d.nu2),
        BoundarySpec::CaseII(d) => (d.nu1, d.nu2),
        _ => (T::one(), T::one()),
    }
}

fn weighted_sum<T: Scalar>(integ: &HaarIntegrator<T>, coef: &[T], x: T) -> T {
    coef.iter()
        .enumerate()
        .map(|(i, &c)| c * integ.eval(i + 1, x))
        .sum()
}

fn closure_sums_direct<T: Scalar>(
    coeffs: &CoefficientVector<T>,
    orders: &FractionalOrders<T>,
    boundary: &BoundarySpec<T>,
) -> Result<ClosureSums<T>, Error> {
    let ia = HaarIntegrator::new(FracOrder::new(orders.alpha1)?);
    let ib = HaarIntegrator::new(FracOrder::new(orders.alpha2)?);
    let (nu1, nu2) = nonlocal_points(boundary);
    Ok(ClosureSums {
        sa_one: weighted_sum(&ia, &coeffs.a, T::one()),
        sa_nu2: weighted_sum(&ia, &coeffs.a, nu2),
        sb_one: weighted_sum(&ib, &coeffs.b, T::one()),
        sb_nu1: weighted_sum(&ib, &coeffs.b, nu1),
    })
}

/// `(y(0), z(0))` for Case I boundary data.
pub fn case1_intercepts<T: Scalar>(
    coeffs: &CoefficientVector<T>,
    orders: &FractionalOrders<T>,
    data: &CaseIData<T>,
) -> Result<(T, T), Error> {
    let s = closure_sums_direct(coeffs, orders, &BoundarySpec::CaseI(*data))?;
    case1_from_sums(data, s)
}

/// `(y'(0), z'(0))` for Case II boundary data.
pub fn case2_slopes<T: Scalar>(
    coeffs: &CoefficientVector<T>,
    orders: &FractionalOrders<T>,
    data: &CaseIIData<T>,
) -> Result<(T, T), Error> {
    let s = closure_sums_direct(coeffs, orders, &BoundarySpec::CaseII(*data))?;
    case2_from_sums(data, s)
}

/// Solution pair reconstructed from a coefficient vector; evaluable at any
/// `x ∈ [0, 1]`.
#[derive(Debug, Clone)]
pub struct AssembledState<T> {
    coeffs: CoefficientVector<T>,
    orders: FractionalOrders<T>,
    values: BoundaryValues<T>,
    int_a1: HaarIntegrator<T>,
    int_d1: HaarIntegrator<T>,
    int_a2: HaarIntegrator<T>,
    int_d2: HaarIntegrator<T>,
}

impl<T: Scalar> AssembledState<T> {
    pub fn coefficients(&self) -> &CoefficientVector<T> {
        &self.coeffs
    }

    pub fn orders(&self) -> &FractionalOrders<T> {
        &self.orders
    }

    pub fn boundary_values(&self) -> BoundaryValues<T> {
        self.values
    }

    pub fn y(&self, x: T) -> T {
        weighted_sum(&self.int_a1, &self.coeffs.a, x) + self.values.y0 + x * self.values.yp0
    }

    pub fn z(&self, x: T) -> T {
        weighted_sum(&self.int_a2, &self.coeffs.b, x) + self.values.z0 + x * self.values.zp0
    }

    /// Caputo `D^β1 y (x)`.
    pub fn d_beta_y(&self, x: T) -> T {
        weighted_sum(&self.int_d1, &self.coeffs.a, x)
            + self.values.yp0 * caputo_linear_unchecked(self.orders.beta1, x)
    }

    /// Caputo `D^β2 z (x)`.
    pub fn d_beta_z(&self, x: T) -> T {
        weighted_sum(&self.int_d2, &self.coeffs.b, x)
            + self.values.zp0 * caputo_linear_unchecked(self.orders.beta2, x)
    }

    /// Caputo `D^α1 y (x)`, the Haar series itself.
    pub fn d_alpha_y(&self, x: T) -> T {
        haar_series(&self.coeffs.a, x)
    }

    /// Caputo `D^α2 z (x)`.
    pub fn d_alpha_z(&self, x: T) -> T {
        haar_series(&self.coeffs.b, x)
    }
}

fn haar_series<T: Scalar>(coef: &[T], x: T) -> T {
    coef.iter()
        .enumerate()
        .map(|(i, &c)| c * haar_eval(i + 1, x))
        .sum()
}

fn integrators<T: Scalar>(orders: &FractionalOrders<T>) -> Result<[HaarIntegrator<T>; 4], Error> {
    Ok([
        HaarIntegrator::new(FracOrder::new(orders.alpha1)?),
        HaarIntegrator::new(FracOrder::new(orders.alpha1 - orders.beta1)?),
        HaarIntegrator::new(FracOrder::new(orders.alpha2)?),
        HaarIntegrator::new(FracOrder::new(orders.alpha2 - orders.beta2)?),
    ])
}

/// Builds the evaluable solution pair for `coeffs`.
pub fn assemble<T: Scalar>(
    coeffs: &CoefficientVector<T>,
    spec: &ProblemSpec<T>,
    params: ResolutionParams,
) -> Result<AssembledState<T>, Error> {
    coeffs.check(params)?;
    let s = closure_sums_direct(coeffs, &spec.orders, &spec.boundary)?;
    let values = boundary_values(&spec.boundary, s)?;
    let [int_a1, int_d1, int_a2, int_d2] = integrators(&spec.orders)?;
    Ok(AssembledState {
        coeffs: coeffs.clone(),
        orders: spec.orders,
        values,
        int_a1,
        int_d1,
        int_a2,
        int_d2,
    })
}

/// Operational matrices of one problem at one resolution, evaluated once.
///
/// Matrices are stored with one row per collocation point so a residual
/// evaluation is a handful of dense matrix-vector products.
#[derive(Debug, Clone)]
pub struct Discretization<T> {
    spec: ProblemSpec<T>,
    params: ResolutionParams,
    points: Vec<T>,
    haar: Matrix<T>,
    int_a1: Matrix<T>,
    int_d1: Matrix<T>,
    int_a2: Matrix<T>,
    int_d2: Matrix<T>,
    lin1: Vec<T>,
    lin2: Vec<T>,
    sing1: Vec<T>,
    sing2: Vec<T>,
    a_at_one: Vec<T>,
    a_at_nu2: Vec<T>,
    b_at_one: Vec<T>,
    b_at_nu1: Vec<T>,
}

impl<T: Scalar> Discretization<T> {
    pub fn new(spec: &ProblemSpec<T>, params: ResolutionParams) -> Result<Self, Error> {
        spec.validate()?;
        let points = collocation_points::<T>(params);
        let n = params.basis_size();
        let [ia1, id1, ia2, id2] = integrators(&spec.orders)?;
        let table =
            |integ: &HaarIntegrator<T>| Matrix::from_fn(n, n, |c, l| integ.eval(l + 1, points[c]));
        let row_at = |integ: &HaarIntegrator<T>, x: T| -> Vec<T> {
            (1..=n).map(|l| integ.eval(l, x)).collect()
        };
        let (nu1, nu2) = nonlocal_points(&spec.boundary);
        Ok(Self {
            haar: Matrix::from_fn(n, n, |c, l| haar_eval(l + 1, points[c])),
            int_a1: table(&ia1),
            int_d1: table(&id1),
            int_a2: table(&ia2),
            int_d2: table(&id2),
            lin1: points
                .iter()
                .map(|&x| caputo_linear_unchecked(spec.orders.beta1, x))
                .collect(),
            lin2: points
                .iter()
                .map(|&x| caputo_linear_unchecked(spec.orders.beta2, x))
                .collect(),
            sing1: points.iter().map(|&x| spec.sing1.factor(x)).collect(),
            sing2: points.iter().map(|&x| spec.sing2.factor(x)).collect(),
            a_at_one: row_at(&ia1, T::one()),
            a_at_nu2: row_at(&ia1, nu2),
            b_at_one: row_at(&ia2, T::one()),
            b_at_nu1: row_at(&ia2, nu1),
            points,
            params,
            spec: spec.clone(),
        })
    }

    pub fn params(&self) -> ResolutionParams {
        self.params
    }

    pub fn spec(&self) -> &ProblemSpec<T> {
        &self.spec
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    /// Number of unknowns and equations, `4M`.
    pub fn system_size(&self) -> usize {
        2 * self.params.basis_size()
    }

    fn dot(u: &[T], v: &[T]) -> T {
        u.iter().zip(v).map(|(&p, &q)| p * q).sum()
    }

    /// Boundary values implied by the coefficients.
    pub fn boundary_values(
        &self,
        coeffs: &CoefficientVector<T>,
    ) -> Result<BoundaryValues<T>, Error> {
        coeffs.check(self.params)?;
        let s = ClosureSums {
            sa_one: Self::dot(&self.a_at_one, &coeffs.a),
            sa_nu2: Self::dot(&self.a_at_nu2, &coeffs.a),
            sb_one: Self::dot(&self.b_at_one, &coeffs.b),
            sb_nu1: Self::dot(&self.b_at_nu1, &coeffs.b),
        };
        boundary_values(&self.spec.boundary, s)
    }

    /// Collocation residual `Φ(c)`: `2M` equations for `y`, then `2M` for `z`.
    pub fn residual(&self, flat: &[T]) -> Result<Vec<T>, Error> {
        if flat.len() != self.system_size() {
            return Err(Error::Dimension {
                expected: self.system_size(),
                actual: flat.len(),
            });
        }
        let coeffs = CoefficientVector::from_flat(flat)?;
        let bv = self.boundary_values(&coeffs)?;
        let ha = self.haar.mul_vec(&coeffs.a);
        let hb = self.haar.mul_vec(&coeffs.b);
        let ya = self.int_a1.mul_vec(&coeffs.a);
        let da = self.int_d1.mul_vec(&coeffs.a);
        let zb = self.int_a2.mul_vec(&coeffs.b);
        let db = self.int_d2.mul_vec(&coeffs.b);
        let n = self.points.len();
        let mut out = vec![T::zero(); 2 * n];
        for c in 0..n {
            let x = self.points[c];
            let y = ya[c] + bv.y0 + x * bv.yp0;
            let z = zb[c] + bv.z0 + x * bv.zp0;
            let dy = da[c] + bv.yp0 * self.lin1[c];
            let dz = db[c] + bv.zp0 * self.lin2[c];
            let f1 = self
                .spec
                .f1
                .eval(x, y, z)
                .map_err(|source| Error::RhsEvaluation {
                    equation: 1,
                    x: x.to_f64_lossy(),
                    source,
                })?;
            let f2 = self
                .spec
                .f2
                .eval(x, y, z)
                .map_err(|source| Error::RhsEvaluation {
                    equation: 2,
                    x: x.to_f64_lossy(),
                    source,
                })?;
            let r1 = ha[c] + self.sing1[c] * dy - f1;
            let r2 = hb[c] + self.sing2[c] * dz - f2;
            if !r1.is_finite() {
                return Err(Error::NonFinite {
                    equation: 1,
                    x: x.to_f64_lossy(),
                });
            }
            if !r2.is_finite() {
                return Err(Error::NonFinite {
                    equation: 2,
                    x: x.to_f64_lossy(),
                });
            }
            out[c] = r1;
            out[n + c] = r2;
        }
        Ok(out)
    }

    pub fn assemble(&self, coeffs: &CoefficientVector<T>) -> Result<AssembledState<T>, Error> {
        assemble(coeffs, &self.spec, self.params)
    }
}

/// One-shot residual of the collocation system.
pub fn residual_system<T: Scalar>(
    coeffs: &CoefficientVector<T>,
    spec: &ProblemSpec<T>,
    params: ResolutionParams,
) -> Result<Vec<T>, Error> {
    coeffs.check(params)?;
    Discretization::new(spec, params)?.residual(&coeffs.to_flat())
}
