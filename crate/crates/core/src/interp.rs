//! Interpolation primitives: periodic cubic splines and monotone cubic
//! Hermite inverses.

/// Solve a cyclic tridiagonal system
/// `a[i]·x[i-1] + b[i]·x[i] + c[i]·x[i+1] = d[i]` (indices mod n)
/// via Sherman–Morrison on top of two Thomas solves.
///
/// Requires diagonal dominance (true for spline systems).
fn solve_cyclic_tridiagonal(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> Vec<f64> {
    let n = b.len();
    assert!(n >= 3, "cyclic system needs at least 3 unknowns");

    // A = T + u vᵀ with u = (γ, 0, …, 0, c[n-1])ᵀ, v = (1, 0, …, 0, a[0]/γ)ᵀ,
    // so that u vᵀ restores the corners A[0][n-1] = a[0], A[n-1][0] = c[n-1].
    let gamma = -b[0];
    let mut bb = b.to_vec();
    bb[0] = b[0] - gamma;
    bb[n - 1] = b[n - 1] - a[0] * c[n - 1] / gamma;

    let solve = |rhs: &[f64]| -> Vec<f64> {
        // Thomas algorithm on the modified (non-cyclic) tridiagonal.
        let mut cp = vec![0.0; n];
        let mut dp = vec![0.0; n];
        cp[0] = c[0] / bb[0];
        dp[0] = rhs[0] / bb[0];
        for i in 1..n {
            let m = bb[i] - a[i] * cp[i - 1];
            cp[i] = c[i] / m;
            dp[i] = (rhs[i] - a[i] * dp[i - 1]) / m;
        }
        let mut x = vec![0.0; n];
        x[n - 1] = dp[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = dp[i] - cp[i] * x[i + 1];
        }
        x
    };

    let x = solve(d);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = c[n - 1];
    let q = solve(&u);

    let vx = x[0] + a[0] * x[n - 1] / gamma;
    let vq = q[0] + a[0] * q[n - 1] / gamma;
    let factor = vx / (1.0 + vq);

    (0..n).map(|i| x[i] - factor * q[i]).collect()
}

/// Natural periodic cubic spline through `(t_i, y_i)`, `i = 0..n-1`, with
/// period `period` (so the point after `t_{n-1}` is `t_0 + period`).
#[derive(Debug, Clone)]
pub struct PeriodicSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
    second: Vec<f64>,
    period: f64,
}

impl PeriodicSpline {
    /// Knots must be strictly increasing and span less than one period.
    pub fn new(knots: Vec<f64>, values: Vec<f64>, period: f64) -> Self {
        let n = knots.len();
        assert_eq!(n, values.len());
        assert!(n >= 3, "periodic spline needs at least 3 knots");
        assert!(period > 0.0);

        let h = |i: usize| -> f64 {
            if i + 1 < n {
                knots[i + 1] - knots[i]
            } else {
                knots[0] + period - knots[n - 1]
            }
        };
        let dy = |i: usize| -> f64 {
            if i + 1 < n {
                values[i + 1] - values[i]
            } else {
                values[0] - values[n - 1]
            }
        };

        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            let prev = (i + n - 1) % n;
            let h_prev = h(prev);
            let h_cur = h(i);
            sub[i] = h_prev / 6.0;
            diag[i] = (h_prev + h_cur) / 3.0;
            sup[i] = h_cur / 6.0;
            rhs[i] = dy(i) / h_cur - dy(prev) / h_prev;
        }
        let second = solve_cyclic_tridiagonal(&sub, &diag, &sup, &rhs);

        Self {
            knots,
            values,
            second,
            period,
        }
    }

    fn locate(&self, t: f64) -> (usize, f64, f64) {
        let n = self.knots.len();
        let t0 = self.knots[0];
        let mut tm = (t - t0).rem_euclid(self.period) + t0;
        // Guard against rem_euclid landing exactly on the upper wrap.
        if tm >= t0 + self.period {
            tm = t0;
        }
        let i = match self.knots.binary_search_by(|k| k.partial_cmp(&tm).unwrap()) {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        };
        let i = i.min(n - 1);
        let h = if i + 1 < n {
            self.knots[i + 1] - self.knots[i]
        } else {
            self.knots[0] + self.period - self.knots[n - 1]
        };
        (i, tm - self.knots[i], h)
    }

    /// Value, first and second derivative at `t` (periodic in `t`).
    pub fn eval2(&self, t: f64) -> (f64, f64, f64) {
        let n = self.knots.len();
        let (i, dt, h) = self.locate(t);
        let j = (i + 1) % n;
        let (ya, yb) = (self.values[i], self.values[j]);
        let (ma, mb) = (self.second[i], self.second[j]);
        let u = dt / h;
        let v = 1.0 - u;
        let y = v * ya + u * yb + h * h / 6.0 * ((v * v * v - v) * ma + (u * u * u - u) * mb);
        let dy = (yb - ya) / h + h / 6.0 * ((1.0 - 3.0 * v * v) * ma + (3.0 * u * u - 1.0) * mb);
        let d2y = v * ma + u * mb;
        (y, dy, d2y)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval2(t).0
    }
}

/// Monotone cubic Hermite interpolant used to invert strictly increasing
/// tables (arc length ↦ raw parameter).
///
/// Slopes are supplied by the caller (here: exact `dparam/ds = 1/speed`)
/// and limited Fritsch–Carlson style so the interpolant stays monotone.
#[derive(Debug, Clone)]
pub struct MonotoneHermite {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneHermite {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, mut slopes: Vec<f64>) -> Self {
        let n = xs.len();
        assert!(n >= 2 && ys.len() == n && slopes.len() == n);
        for w in xs.windows(2) {
            assert!(w[1] > w[0], "abscissae must be strictly increasing");
        }
        // Fritsch–Carlson limiter: keep (m_i/d, m_{i+1}/d) inside the disk
        // of radius 3 around the secant d.
        for i in 0..n - 1 {
            let d = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
            if d == 0.0 {
                slopes[i] = 0.0;
                slopes[i + 1] = 0.0;
                continue;
            }
            let alpha = slopes[i] / d;
            let beta = slopes[i + 1] / d;
            let r2 = alpha * alpha + beta * beta;
            if r2 > 9.0 {
                let tau = 3.0 / r2.sqrt();
                slopes[i] = tau * alpha * d;
                slopes[i + 1] = tau * beta * d;
            }
        }
        Self { xs, ys, slopes }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        let x = x.clamp(self.xs[0], self.xs[n - 1]);
        let i = match self.xs.binary_search_by(|k| k.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        };
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
            + m0 * (t3 - 2.0 * t2 + t)
            + y1 * (-2.0 * t3 + 3.0 * t2)
            + m1 * (t3 - t2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn cyclic_solve_matches_direct() {
        // 4x4 cyclic system, verified by residual.
        let a = vec![1.0, 1.5, 0.5, 2.0];
        let b = vec![10.0, 9.0, 11.0, 8.0];
        let c = vec![2.0, 0.5, 1.0, 1.5];
        let d = vec![1.0, -2.0, 3.0, 0.5];
        let x = solve_cyclic_tridiagonal(&a, &b, &c, &d);
        for i in 0..4 {
            let prev = (i + 3) % 4;
            let next = (i + 1) % 4;
            let res = a[i] * x[prev] + b[i] * x[i] + c[i] * x[next] - d[i];
            assert!(res.abs() < 1e-12, "residual {res:.3e} at row {i}");
        }
    }

    #[test]
    fn periodic_spline_reproduces_cosine() {
        let n = 64;
        let knots: Vec<f64> = (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
        let values: Vec<f64> = knots.iter().map(|t| t.cos()).collect();
        let sp = PeriodicSpline::new(knots, values, 2.0 * PI);
        for k in 0..200 {
            let t = 2.0 * PI * (k as f64 + 0.37) / 200.0;
            let (y, dy, d2y) = sp.eval2(t);
            assert!((y - t.cos()).abs() < 2e-6);
            assert!((dy + t.sin()).abs() < 4e-4);
            assert!((d2y + t.cos()).abs() < 5e-3);
        }
    }

    #[test]
    fn periodic_spline_wraps() {
        let knots = vec![0.0, 1.0, 2.0, 3.0];
        let values = vec![0.0, 1.0, 0.0, -1.0];
        let sp = PeriodicSpline::new(knots, values, 4.0);
        assert!((sp.eval(0.5) - sp.eval(4.5)).abs() < 1e-13);
        assert!((sp.eval(-0.25) - sp.eval(3.75)).abs() < 1e-13);
    }

    #[test]
    fn hermite_inverse_round_trip() {
        // y = x³ + x on [0, 2]: strictly increasing, slopes known.
        let n = 256;
        let xs: Vec<f64> = (0..n).map(|i| 2.0 * i as f64 / (n - 1) as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x * x * x + x).collect();
        let slopes: Vec<f64> = xs.iter().map(|x| 3.0 * x * x + 1.0).collect();
        // Inverse table: x as a function of y.
        let inv = MonotoneHermite::new(
            ys.clone(),
            xs.clone(),
            slopes.iter().map(|m| 1.0 / m).collect(),
        );
        for k in 0..100 {
            let x = 2.0 * (k as f64 + 0.5) / 100.0;
            let y = x * x * x + x;
            assert!((inv.eval(y) - x).abs() < 1e-9);
        }
    }
}
