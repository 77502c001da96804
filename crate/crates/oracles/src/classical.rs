//! Second-order (integer-order) versions of two built-in experiments, solved
//! by RK4 with step `1e-4`.

use crate::ode::{rk4_path, sample, shoot2, State};

pub const STEP: f64 = 1e-4;

/// Solution pair sampled along a fine path.
pub struct ClassicalSolution {
    path: Vec<(f64, State)>,
}

impl ClassicalSolution {
    pub fn y(&self, x: f64) -> f64 {
        sample(&self.path, 0, x)
    }

    pub fn z(&self, x: f64) -> f64 {
        sample(&self.path, 2, x)
    }
}

fn steps_from(x0: f64) -> usize {
    ((1.0 - x0) / STEP).round() as usize
}

/// `y'' + y'/x = z^3 (y^2 + 1)`, `z'' + 3z'/x = -z^5 (y^2 + 3)`,
/// `y(0) = z(0) = 1`, `y'(0) = z'(0) = 0`.
pub fn initial_value_problem() -> ClassicalSolution {
    let rhs = |x: f64, u: &[f64]| -> State {
        let (y, yp, z, zp) = (u[0], u[1], u[2], u[3]);
        vec![
            yp,
            z.powi(3) * (y * y + 1.0) - yp / x,
            zp,
            -z.powi(5) * (y * y + 3.0) - 3.0 * zp / x,
        ]
    };
    // regularity at 0: (1 + k) u''(0) = f(0), so y''(0) = 1 and z''(0) = -1
    let x0 = STEP;
    let u0 = [1.0 + x0 * x0 / 2.0, x0, 1.0 - x0 * x0 / 2.0, -x0];
    let mut path = vec![(0.0, vec![1.0, 0.0, 1.0, 0.0])];
    path.extend(rk4_path(&rhs, x0, &u0, 1.0, steps_from(x0)));
    ClassicalSolution { path }
}

/// `y'' + y'/(2x) = f1`, `z'' + z'/(2x) = f2` with `y(0) = z(0) = 0`,
/// `y(1) = z(1/2)`, `z(1) = y(1/3)`, where
/// `f1 = -(99x/35 - 1/2 + z(x^2 - 66x^3/35 + 1089x^4/1225) - y^2 z)/x` and
/// `f2 = -(-24x/35 + 64x^5/1225 - 2112x^6/42875 - y z^2)/x`.
///
/// Shoots on `(y'(0), z'(0))`.
pub fn four_point_problem() -> Option<ClassicalSolution> {
    let rhs = |x: f64, u: &[f64]| -> State {
        let (y, yp, z, zp) = (u[0], u[1], u[2], u[3]);
        let poly = x * x - 66.0 / 35.0 * x.powi(3) + 1089.0 / 1225.0 * x.powi(4);
        let f1 = -(99.0 / 35.0 * x - 0.5 + z * poly - y * y * z) / x;
        let f2 = -(-24.0 / 35.0 * x + 64.0 / 1225.0 * x.powi(5)
            - 2112.0 / 42875.0 * x.powi(6)
            - y * z * z)
            / x;
        vec![yp, f1 - yp / (2.0 * x), zp, f2 - zp / (2.0 * x)]
    };
    let x0 = STEP;
    let integrate = |s: [f64; 2]| {
        let u0 = [s[0] * x0, s[0], s[1] * x0, s[1]];
        let mut path = vec![(0.0, vec![0.0, s[0], 0.0, s[1]])];
        path.extend(rk4_path(&rhs, x0, &u0, 1.0, steps_from(x0)));
        path
    };
    let mismatch = |s: [f64; 2]| {
        let path = integrate(s);
        let end = &path.last().unwrap().1;
        [
            end[0] - sample(&path, 2, 0.5),
            end[2] - sample(&path, 0, 1.0 / 3.0),
        ]
    };
    let s = shoot2(&mismatch, [0.5, 0.5], 1e-11)?;
    Some(ClassicalSolution { path: integrate(s) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_point_matches_polynomial_solution() {
        let sol = four_point_problem().unwrap();
        for i in 0..=20 {
            let x = i as f64 / 20.0;
            assert!(
                (sol.y(x) - (x - 33.0 * x * x / 35.0)).abs() < 1e-3,
                "y at {x}"
            );
            assert!((sol.z(x) - 8.0 * x * x / 35.0).abs() < 1e-3, "z at {x}");
        }
    }

    #[test]
    fn initial_value_problem_near_origin() {
        let sol = initial_value_problem();
        // y = 1 + x^2/2 + O(x^4), z = 1 - x^2/2 + O(x^4)
        assert!((sol.y(0.05) - (1.0 + 0.00125)).abs() < 1e-5);
        assert!((sol.z(0.05) - (1.0 - 0.00125)).abs() < 1e-5);
        assert!(sol.y(1.0).is_finite() && sol.z(1.0).is_finite());
    }
}
