//! Gamma function and Riemann-Liouville fractional integrals.

use crate::error::Error;
use crate::haar::{collocation_points, support, ResolutionParams};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Order of a fractional integral or derivative; always strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FracOrder<T>(T);

impl<T: Scalar> FracOrder<T> {
    pub fn new(value: T) -> Result<Self, Error> {
        if value > T::zero() && value.is_finite() {
            Ok(Self(value))
        } else {
            Err(Error::InvalidArgument(format!(
                "fractional order must be positive and finite, got {value}"
            )))
        }
    }

    pub fn value(self) -> T {
        self.0
    }
}

// Lanczos approximation, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `Γ(x)` for `x > 0`.
pub fn gamma<T: Scalar>(x: T) -> Result<T, Error> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "gamma is only defined here for positive finite arguments, got {x}"
        )));
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked<T: Scalar>(x: T) -> T {
    let half = T::lit(0.5);
    if x == x.floor() && x >= T::one() && x <= T::lit(30.0) {
        // exact factorial for small integers
        let mut acc = T::one();
        let mut k = T::lit(2.0);
        while k < x {
            acc = acc * k;
            k = k + T::one();
        }
        return acc;
    }
    if x < half {
        // Γ(x) Γ(1-x) = π / sin(πx)
        let pi = T::PI();
        return pi / ((pi * x).sin() * gamma_unchecked(T::one() - x));
    }
    let x = x - T::one();
    let mut acc = T::lit(LANCZOS_COEF[0]);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (x + T::from_count(i));
    }
    let t = x + T::lit(LANCZOS_G) + half;
    (T::lit(2.0) * T::PI()).sqrt() * t.powf(x + half) * (-t).exp() * acc
}

/// `(x - shift)^p` for `x > shift`, zero otherwise.
#[inline]
fn shifted_pow<T: Scalar>(x: T, shift: T, p: T) -> T {
    let d = x - shift;
    if d > T::zero() {
        d.powf(p)
    } else {
        T::zero()
    }
}

/// `I^α x^μ = Γ(μ+1)/Γ(μ+α+1) x^(μ+α)` for `μ > -1`, `x >= 0`.
pub fn rl_integral_monomial<T: Scalar>(alpha: FracOrder<T>, mu: T, x: T) -> Result<T, Error> {
    if !(mu > -T::one()) {
        return Err(Error::InvalidArgument(format!(
            "monomial exponent must exceed -1, got {mu}"
        )));
    }
    if x < T::zero() {
        return Err(Error::InvalidArgument(format!(
            "fractional integral evaluated at negative x = {x}"
        )));
    }
    let a = alpha.value();
    let coef = gamma_unchecked(mu + T::one()) / gamma_unchecked(mu + a + T::one());
    Ok(coef * shifted_pow(x, T::zero(), mu + a))
}

/// Precomputed `1/Γ(υ+1)` so matrix builds avoid repeated gamma calls.
#[derive(Debug, Clone, Copy)]
pub(crate) struct HaarIntegrator<T> {
    order: T,
    inv_gamma: T,
}

impl<T: Scalar> HaarIntegrator<T> {
    pub(crate) fn new(order: FracOrder<T>) -> Self {
        let v = order.value();
        Self {
            order: v,
            inv_gamma: T::one() / gamma_unchecked(v + T::one()),
        }
    }

    pub(crate) fn eval(&self, l: usize, x: T) -> T {
        let p = self.order;
        let b = support::<T>(l);
        if l == 1 {
            return self.inv_gamma * shifted_pow(x, T::zero(), p);
        }
        let two = T::lit(2.0);
        // Each shifted power vanishes left of its breakpoint, which reproduces
        // the four branches of the piecewise formula.
        self.inv_gamma
            * (shifted_pow(x, b.v1, p) - two * shifted_pow(x, b.v2, p) + shifted_pow(x, b.v3, p))
    }
}

/// `I^υ h_l (x)`, the Riemann-Liouville integral of a Haar function.
pub fn frac_integral_haar<T: Scalar>(upsilon: FracOrder<T>, l: usize, x: T) -> Result<T, Error> {
    if l == 0 {
        return Err(Error::InvalidArgument(
            "Haar indices are 1-based".to_string(),
        ));
    }
    Ok(HaarIntegrator::new(upsilon).eval(l, x))
}

/// Operational matrix `P[l-1][c-1] = I^υ h_l (η_c)` on the collocation grid.
pub fn integration_matrix<T: Scalar>(upsilon: FracOrder<T>, params: ResolutionParams) -> Matrix<T> {
    let pts = collocation_points::<T>(params);
    let n = params.basis_size();
    let integ = HaarIntegrator::new(upsilon);
    Matrix::from_fn(n, n, |row, col| integ.eval(row + 1, pts[col]))
}

/// Caputo derivative of order `β ∈ (0, 1]` of the linear function `x`:
/// `x^(1-β) / Γ(2-β)`.
pub fn caputo_linear_term<T: Scalar>(beta: FracOrder<T>, x: T) -> Result<T, Error> {
    let b = beta.value();
    if b > T::one() {
        return Err(Error::InvalidArgument(format!(
            "linear-term Caputo derivative needs order <= 1, got {b}"
        )));
    }
    if !(x > T::zero()) {
        return Err(Error::InvalidArgument(format!(
            "linear-term Caputo derivative needs x > 0, got {x}"
        )));
    }
    Ok(caputo_linear_unchecked(b, x))
}

pub(crate) fn caputo_linear_unchecked<T: Scalar>(beta: T, x: T) -> T {
    if beta == T::one() {
        return T::one();
    }
    let e = T::one() - beta;
    shifted_pow(x, T::zero(), e) / gamma_unchecked(T::lit(2.0) - beta)
}
