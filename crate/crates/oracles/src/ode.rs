//! Fixed-step classical Runge-Kutta and shooting for two-point problems.

/// State of a first-order system.
pub type State = Vec<f64>;

/// Integrates `u' = f(x, u)` from `x0` to `x1` with `steps` RK4 steps and
/// records the state after every step.
pub fn rk4_path(
    f: &dyn Fn(f64, &[f64]) -> State,
    x0: f64,
    u0: &[f64],
    x1: f64,
    steps: usize,
) -> Vec<(f64, State)> {
    let h = (x1 - x0) / steps as f64;
    let mut u = u0.to_vec();
    let mut out = Vec::with_capacity(steps + 1);
    out.push((x0, u.clone()));
    let axpy = |u: &[f64], k: &[f64], s: f64| -> State {
        u.iter().zip(k).map(|(a, b)| a + s * b).collect()
    };
    for i in 0..steps {
        let x = x0 + i as f64 * h;
        let k1 = f(x, &u);
        let k2 = f(x + h / 2.0, &axpy(&u, &k1, h / 2.0));
        let k3 = f(x + h / 2.0, &axpy(&u, &k2, h / 2.0));
        let k4 = f(x + h, &axpy(&u, &k3, h));
        for j in 0..u.len() {
            u[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        out.push((x0 + (i + 1) as f64 * h, u.clone()));
    }
    out
}

/// Linear interpolation of component `j` along a recorded path.
pub fn sample(path: &[(f64, State)], j: usize, x: f64) -> f64 {
    let i = path
        .partition_point(|(xi, _)| *xi < x)
        .clamp(1, path.len() - 1);
    let (xa, ua) = &path[i - 1];
    let (xb, ub) = &path[i];
    let t = if xb > xa { (x - xa) / (xb - xa) } else { 0.0 };
    ua[j] + t * (ub[j] - ua[j])
}

/// Solves `g(s) = 0` for `s ∈ R^2` by Newton with a finite-difference
/// Jacobian, starting at `s0`.
pub fn shoot2(g: &dyn Fn([f64; 2]) -> [f64; 2], s0: [f64; 2], tol: f64) -> Option<[f64; 2]> {
    let mut s = s0;
    for _ in 0..60 {
        let r = g(s);
        if r[0].abs().max(r[1].abs()) < tol {
            return Some(s);
        }
        let h = 1e-7;
        let r0 = g([s[0] + h, s[1]]);
        let r1 = g([s[0], s[1] + h]);
        let j = [
            [(r0[0] - r[0]) / h, (r1[0] - r[0]) / h],
            [(r0[1] - r[1]) / h, (r1[1] - r[1]) / h],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 {
            return None;
        }
        s[0] -= (j[1][1] * r[0] - j[0][1] * r[1]) / det;
        s[1] -= (j[0][0] * r[1] - j[1][0] * r[0]) / det;
    }
    None
}

/// Bisection for a scalar root bracketed by `[a, b]`.
pub fn bisect(g: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> Option<f64> {
    let mut ga = g(a);
    if ga * g(b) > 0.0 {
        return None;
    }
    while b - a > tol {
        let m = 0.5 * (a + b);
        let gm = g(m);
        if gm == 0.0 {
            return Some(m);
        }
        if (gm < 0.0) == (ga < 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}
