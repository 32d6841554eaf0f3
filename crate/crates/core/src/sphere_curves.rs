//! Cross-section loops on the unit sphere.
//!
//! A dilation-invariant conical surface is determined by its cross-section,
//! a closed curve γ ⊂ S². Everything downstream needs only the arc length ℓ
//! and the geodesic curvature κ(s) of that curve, defined through the frame
//! n = Γ × Γ' and n' = κΓ', i.e. κ = (Γ × Γ'')·Γ' for an arc-length
//! parametrization Γ.
//!
//! Three input families are supported: geodesic circles, Fourier-perturbed
//! colatitude curves θ(φ) = θ₀ + Σ(aₖ cos kφ + bₖ sin kφ), and raw point
//! samples (closed with a periodic cubic spline). The parametric families
//! are traversed clockwise as seen from the enclosed pole, so that a
//! geodesic circle of radius θ has κ ≡ +cot θ and the enclosed area sits on
//! the side −n points to.
//!
//! Synthetic curvature profiles (plateau windows with κ = cot ε, smoothly
//! joined to a baseline) bypass the embedding entirely: the downstream
//! operator depends only on (ℓ, κ). Embeddability of synthetic profiles is
//! not validated.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::{MonotoneHermite, PeriodicSpline};
use crate::vec3::Vec3;

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// 5-point Gauss–Legendre nodes/weights on [-1, 1].
const GL5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_08,
    0.478_628_670_499_366_47,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_47,
    0.236_926_885_056_189_08,
];

fn gl5<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for k in 0..5 {
        acc += GL5_WEIGHTS[k] * f(mid + half * GL5_NODES[k]);
    }
    acc * half
}

/// Parsed curve specification, matching the JSON wire format.
///
/// `synthetic` prescribes a curvature profile directly and has no
/// embedded curve; the other kinds are genuine loops on S².
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CurveSpec {
    Circle {
        theta: f64,
    },
    Fourier {
        theta0: f64,
        coeffs: Vec<(f64, f64)>,
    },
    Samples {
        points: Vec<[f64; 3]>,
    },
    Synthetic {
        length: f64,
        baseline: f64,
        windows: WindowSpec,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WindowSpec {
    pub m: usize,
    pub eps: f64,
}

impl CurveSpec {
    /// The embedded loop, if this spec describes one.
    pub fn as_loop(&self) -> Option<SphericalLoop> {
        match self {
            CurveSpec::Circle { theta } => Some(SphericalLoop::Circle { theta: *theta }),
            CurveSpec::Fourier { theta0, coeffs } => Some(SphericalLoop::Fourier {
                theta0: *theta0,
                coeffs: coeffs.clone(),
            }),
            CurveSpec::Samples { points } => Some(SphericalLoop::Samples {
                points: points.clone(),
            }),
            CurveSpec::Synthetic { .. } => None,
        }
    }

    /// Curvature profile on an `n`-point arc-length grid, for any kind.
    pub fn profile(&self, n: usize) -> Result<CurvatureProfile> {
        match self {
            CurveSpec::Synthetic {
                length,
                baseline,
                windows,
            } => synthetic_profile(*length, *baseline, windows.m, windows.eps, n),
            _ => geodesic_curvature(&self.as_loop().expect("loop kind"), n),
        }
    }
}

/// A closed curve on the unit sphere.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SphericalLoop {
    /// Geodesic circle of radius `theta` (colatitude), 0 < θ < π.
    Circle { theta: f64 },
    /// Colatitude θ(φ) = θ₀ + Σ(aₖ cos kφ + bₖ sin kφ).
    Fourier {
        theta0: f64,
        coeffs: Vec<(f64, f64)>,
    },
    /// Raw closed point list on S² (first point not repeated at the end).
    Samples { points: Vec<[f64; 3]> },
}

impl SphericalLoop {
    pub fn circle(theta: f64) -> Self {
        SphericalLoop::Circle { theta }
    }

    pub fn fourier(theta0: f64, coeffs: Vec<(f64, f64)>) -> Self {
        SphericalLoop::Fourier { theta0, coeffs }
    }
}

/// Internal evaluator: position and first two derivatives with respect to
/// the raw parameter.
#[derive(Debug)]
enum RawCurve {
    Circle {
        theta: f64,
    },
    Fourier {
        theta0: f64,
        coeffs: Vec<(f64, f64)>,
    },
    Spline {
        x: Box<PeriodicSpline>,
        y: Box<PeriodicSpline>,
        z: Box<PeriodicSpline>,
        period: f64,
    },
}

impl RawCurve {
    fn build(l: &SphericalLoop) -> Result<RawCurve> {
        match l {
            SphericalLoop::Circle { theta } => {
                if !(*theta > 0.0 && *theta < std::f64::consts::PI) {
                    return Err(Error::InvalidInput(format!(
                        "circle radius theta = {theta} outside (0, π)"
                    )));
                }
                Ok(RawCurve::Circle { theta: *theta })
            }
            SphericalLoop::Fourier { theta0, coeffs } => {
                let raw = RawCurve::Fourier {
                    theta0: *theta0,
                    coeffs: coeffs.clone(),
                };
                // θ(φ) must stay inside (0, π): each φ then lies on its own
                // meridian and the curve avoids the poles.
                for k in 0..1024 {
                    let phi = TAU * k as f64 / 1024.0;
                    let th = raw.colatitude(phi);
                    if !(th > 1e-6 && th < std::f64::consts::PI - 1e-6) {
                        return Err(Error::InvalidInput(format!(
                            "colatitude {th:.6} at phi = {phi:.6} leaves (0, π)"
                        )));
                    }
                }
                Ok(raw)
            }
            SphericalLoop::Samples { points } => {
                let mut pts: Vec<Vec3> = points.iter().map(|&p| Vec3::from(p)).collect();
                if pts.len() >= 2 {
                    let first = pts[0];
                    let last = *pts.last().unwrap();
                    if (first - last).norm() < 1e-12 {
                        pts.pop();
                    }
                }
                if pts.len() < 8 {
                    return Err(Error::InvalidInput(format!(
                        "need at least 8 sample points, got {}",
                        pts.len()
                    )));
                }
                for (i, p) in pts.iter_mut().enumerate() {
                    let n = p.norm();
                    if (n - 1.0).abs() > 1e-6 {
                        return Err(Error::InvalidInput(format!(
                            "sample {i} has norm {n:.8}, not on the unit sphere"
                        )));
                    }
                    *p = *p * (1.0 / n);
                }
                // Chordal parametrization.
                let m = pts.len();
                let mut knots = Vec::with_capacity(m);
                let mut t = 0.0;
                for i in 0..m {
                    knots.push(t);
                    let next = pts[(i + 1) % m];
                    let chord = (next - pts[i]).norm();
                    if chord < 1e-12 {
                        return Err(Error::NonInjectiveCurve {
                            i,
                            j: (i + 1) % m,
                            dist: chord,
                        });
                    }
                    t += chord;
                }
                let period = t;
                let xs: Vec<f64> = pts.iter().map(|p| p.x).collect();
                let ys: Vec<f64> = pts.iter().map(|p| p.y).collect();
                let zs: Vec<f64> = pts.iter().map(|p| p.z).collect();
                Ok(RawCurve::Spline {
                    x: Box::new(PeriodicSpline::new(knots.clone(), xs, period)),
                    y: Box::new(PeriodicSpline::new(knots.clone(), ys, period)),
                    z: Box::new(PeriodicSpline::new(knots, zs, period)),
                    period,
                })
            }
        }
    }

    fn period(&self) -> f64 {
        match self {
            RawCurve::Circle { .. } | RawCurve::Fourier { .. } => TAU,
            RawCurve::Spline { period, .. } => *period,
        }
    }

    fn colatitude(&self, phi: f64) -> f64 {
        match self {
            RawCurve::Circle { theta } => *theta,
            RawCurve::Fourier { theta0, coeffs } => {
                let mut th = *theta0;
                for (k, (a, b)) in coeffs.iter().enumerate() {
                    let kf = (k + 1) as f64;
                    th += a * (kf * phi).cos() + b * (kf * phi).sin();
                }
                th
            }
            RawCurve::Spline { .. } => unreachable!("spline curves have no colatitude form"),
        }
    }

    /// Position, d/dφ, d²/dφ² at raw parameter φ.
    fn eval(&self, phi: f64) -> (Vec3, Vec3, Vec3) {
        match self {
            RawCurve::Circle { theta } => {
                let (st, ct) = theta.sin_cos();
                let (s, c) = phi.sin_cos();
                let p = Vec3::new(st * c, -st * s, ct);
                let dp = Vec3::new(-st * s, -st * c, 0.0);
                let d2p = Vec3::new(-st * c, st * s, 0.0);
                (p, dp, d2p)
            }
            RawCurve::Fourier { theta0, coeffs } => {
                let mut th = *theta0;
                let mut th1 = 0.0;
                let mut th2 = 0.0;
                for (k, (a, b)) in coeffs.iter().enumerate() {
                    let kf = (k + 1) as f64;
                    let (sk, ck) = (kf * phi).sin_cos();
                    th += a * ck + b * sk;
                    th1 += kf * (-a * sk + b * ck);
                    th2 += kf * kf * (-a * ck - b * sk);
                }
                let (st, ct) = th.sin_cos();
                let (s, c) = phi.sin_cos();
                let p = Vec3::new(st * c, -st * s, ct);
                let dp = Vec3::new(ct * th1 * c - st * s, -ct * th1 * s - st * c, -st * th1);
                let q = ct * th2 - st * th1 * th1;
                let d2p = Vec3::new(
                    q * c - 2.0 * ct * th1 * s - st * c,
                    -q * s - 2.0 * ct * th1 * c + st * s,
                    -ct * th1 * th1 - st * th2,
                );
                (p, dp, d2p)
            }
            RawCurve::Spline { x, y, z, .. } => {
                let (xv, x1, x2) = x.eval2(phi);
                let (yv, y1, y2) = y.eval2(phi);
                let (zv, z1, z2) = z.eval2(phi);
                let p = Vec3::new(xv, yv, zv);
                let dp = Vec3::new(x1, y1, z1);
                let d2p = Vec3::new(x2, y2, z2);
                // Project the spline back onto the sphere so evaluated
                // points are exactly unit vectors; chain rule keeps the
                // derivatives consistent with the normalized curve.
                let r2 = p.dot(p);
                let u = r2.sqrt().recip();
                let u1 = -p.dot(dp) * u * u * u;
                let u2 = -(dp.dot(dp) + p.dot(d2p)) * u * u * u
                    + 3.0 * p.dot(dp) * p.dot(dp) * u * u * u * u * u;
                let g = p * u;
                let g1 = dp * u + p * u1;
                let g2 = d2p * u + dp * (2.0 * u1) + p * u2;
                (g, g1, g2)
            }
        }
    }
}

/// Arc-length reparametrization of a loop: cumulative-length table over an
/// oversampled raw-parameter grid, with a monotone cubic Hermite inverse
/// refined by Newton steps on the quadrature-defined length function.
#[derive(Debug)]
pub struct ArcLengthMap {
    curve: RawCurve,
    /// Raw parameter grid (panel endpoints), length M+1.
    pub params: Vec<f64>,
    /// Cumulative arc length at the grid, length M+1; last entry is ℓ.
    pub cumulative: Vec<f64>,
    inverse: MonotoneHermite,
    total: f64,
}

impl ArcLengthMap {
    fn build(l: &SphericalLoop, grid_hint: usize) -> Result<ArcLengthMap> {
        let curve = RawCurve::build(l)?;
        let period = curve.period();
        let m = (16 * grid_hint).max(8192);

        let params: Vec<f64> = (0..=m).map(|i| period * i as f64 / m as f64).collect();
        let mut speeds = Vec::with_capacity(m + 1);
        for &phi in &params {
            let (_, dp, _) = curve.eval(phi);
            let v = dp.norm();
            if v < 1e-8 {
                return Err(Error::NonRegularCurve {
                    param: phi,
                    speed: v,
                });
            }
            speeds.push(v);
        }

        check_closure(&curve)?;
        check_injectivity(&curve)?;

        let speed_fn = |phi: f64| curve.eval(phi).1.norm();
        let mut cumulative = Vec::with_capacity(m + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for i in 0..m {
            acc += gl5(&speed_fn, params[i], params[i + 1]);
            cumulative.push(acc);
        }
        let total = acc;
        if total <= 0.0 {
            return Err(Error::NonRegularCurve {
                param: 0.0,
                speed: 0.0,
            });
        }

        let inverse = MonotoneHermite::new(
            cumulative.clone(),
            params.clone(),
            speeds.iter().map(|v| 1.0 / v).collect(),
        );

        Ok(ArcLengthMap {
            curve,
            params,
            cumulative,
            inverse,
            total,
        })
    }

    /// Total arc length ℓ.
    pub fn total_length(&self) -> f64 {
        self.total
    }

    /// Arc length accumulated from parameter 0 to `phi` (φ in [0, period]).
    pub fn length_at(&self, phi: f64) -> f64 {
        let m = self.params.len() - 1;
        let period = self.curve.period();
        let phi = phi.clamp(0.0, period);
        let idx = ((phi / period * m as f64) as usize).min(m - 1);
        // The grid is uniform, but walk down in case of rounding.
        let idx = if self.params[idx] > phi && idx > 0 {
            idx - 1
        } else {
            idx
        };
        let speed_fn = |p: f64| self.curve.eval(p).1.norm();
        self.cumulative[idx] + gl5(&speed_fn, self.params[idx], phi)
    }

    /// Raw parameter at arc length `s` (periodic in `s`).
    pub fn param_at(&self, s: f64) -> f64 {
        let s = s.rem_euclid(self.total);
        let mut phi = self.inverse.eval(s);
        // Two Newton corrections on s(φ) − s; the Hermite guess is already
        // accurate to ~1e-10·ℓ, Newton takes it to rounding.
        for _ in 0..2 {
            let ds = self.length_at(phi) - s;
            let v = self.curve.eval(phi).1.norm();
            phi -= ds / v;
        }
        phi
    }

    /// Largest |s(param_at(s)) − s| over a probe grid, as a fraction of ℓ.
    pub fn round_trip_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..257 {
            let s = self.total * (k as f64 + 0.5) / 257.0;
            let phi = self.param_at(s);
            worst = worst.max((self.length_at(phi) - s).abs());
        }
        worst / self.total
    }

    /// Frame at arc length `s`: (Γ, Γ', Γ'', n = Γ × Γ'), derivatives with
    /// respect to arc length.
    pub fn frame_at(&self, s: f64) -> Frame {
        let phi = self.param_at(s);
        let (p, dp, d2p) = self.curve.eval(phi);
        let v = dp.norm();
        let tangent = dp * (1.0 / v);
        let vprime = dp.dot(d2p) / v;
        let second = (d2p - tangent * vprime) * (1.0 / (v * v));
        Frame {
            position: p,
            tangent,
            second,
            normal: p.cross(tangent),
        }
    }
}

/// Frenet-type frame data of the arc-length parametrization at one point.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    /// Γ(s), a unit vector.
    pub position: Vec3,
    /// Γ'(s), the unit tangent.
    pub tangent: Vec3,
    /// Γ''(s).
    pub second: Vec3,
    /// n = Γ × Γ'.
    pub normal: Vec3,
}

impl Frame {
    /// Geodesic curvature κ = (Γ × Γ'')·Γ'.
    pub fn geodesic_curvature(&self) -> f64 {
        self.position.cross(self.second).dot(self.tangent)
    }
}

fn check_closure(curve: &RawCurve) -> Result<()> {
    // Parametric families are exactly 2π-periodic; the comparison guards
    // against coefficient-handling bugs. Spline curves are periodic by
    // construction.
    if let RawCurve::Spline { .. } = curve {
        return Ok(());
    }
    let period = curve.period();
    let (p0, d0, dd0) = curve.eval(0.0);
    let (p1, d1, dd1) = curve.eval(period);
    if (p0 - p1).norm() > 1e-10 {
        return Err(Error::ClosureViolated {
            detail: format!("position gap {:.3e}", (p0 - p1).norm()),
        });
    }
    if (d0 - d1).norm() > 1e-8 || (dd0 - dd1).norm() > 1e-8 {
        return Err(Error::ClosureViolated {
            detail: "derivative mismatch at the seam".into(),
        });
    }
    Ok(())
}

fn check_injectivity(curve: &RawCurve) -> Result<()> {
    const M: usize = 512;
    let period = curve.period();
    let pts: Vec<Vec3> = (0..M)
        .map(|i| curve.eval(period * i as f64 / M as f64).0)
        .collect();
    let mut chord_total = 0.0;
    for i in 0..M {
        chord_total += (pts[(i + 1) % M] - pts[i]).norm();
    }
    let threshold = 0.25 * chord_total / M as f64;
    for i in 0..M {
        for j in (i + 2)..M {
            // skip the wrap-around neighbor pair (0, M-1)
            if i == 0 && j == M - 1 {
                continue;
            }
            let dist = (pts[i] - pts[j]).norm();
            if dist < threshold {
                return Err(Error::NonInjectiveCurve { i, j, dist });
            }
        }
    }
    Ok(())
}

/// Build the arc-length reparametrization, validating regularity,
/// injectivity, and closure.
pub fn arc_length_reparametrize(l: &SphericalLoop) -> Result<ArcLengthMap> {
    ArcLengthMap::build(l, 512)
}

/// Frame of the arc-length parametrization at a single `s`.
///
/// Convenience wrapper that rebuilds the arc-length map; batch callers
/// should hold an [`ArcLengthMap`] and use [`ArcLengthMap::frame_at`].
pub fn evaluate_frame(l: &SphericalLoop, s: f64) -> Result<Frame> {
    Ok(arc_length_reparametrize(l)?.frame_at(s))
}

/// Provenance of a curvature profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileSource {
    FromCurve,
    Synthetic,
}

/// Geodesic curvature κ on a uniform arc-length grid over T = R/ℓZ.
///
/// This is the sole input the cross-section operator needs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurvatureProfile {
    /// Arc length ℓ of the loop.
    pub length: f64,
    /// κ(s_i) at s_i = i·ℓ/N, i = 0..N.
    pub kappa: Vec<f64>,
    pub source: ProfileSource,
}

impl CurvatureProfile {
    pub fn n(&self) -> usize {
        self.kappa.len()
    }

    /// Grid nodes s_i = i·ℓ/N.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.n();
        (0..n).map(|i| self.length * i as f64 / n as f64).collect()
    }

    pub fn max_abs_kappa(&self) -> f64 {
        self.kappa.iter().fold(0.0, |m, k| m.max(k.abs()))
    }

    /// Trapezoid rule for ∫_T κ ds (periodic uniform grid).
    pub fn integral_kappa(&self) -> f64 {
        let h = self.length / self.n() as f64;
        h * self.kappa.iter().sum::<f64>()
    }

    /// Trapezoid rule for ∫_T κ² ds.
    pub fn integral_kappa_sq(&self) -> f64 {
        let h = self.length / self.n() as f64;
        h * self.kappa.iter().map(|k| k * k).sum::<f64>()
    }

    /// Grid doubled by periodic cubic spline interpolation. Existing nodes
    /// keep their exact values.
    pub fn refined(&self) -> CurvatureProfile {
        let n = self.n();
        let knots = self.grid();
        let spline = PeriodicSpline::new(knots, self.kappa.clone(), self.length);
        let mut kappa = Vec::with_capacity(2 * n);
        for i in 0..2 * n {
            if i % 2 == 0 {
                kappa.push(self.kappa[i / 2]);
            } else {
                kappa.push(spline.eval(self.length * i as f64 / (2 * n) as f64));
            }
        }
        CurvatureProfile {
            length: self.length,
            kappa,
            source: self.source,
        }
    }

    /// CSV export: header `s,kappa`, rows in arc-length order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,kappa\n");
        let n = self.n();
        for i in 0..n {
            let s = self.length * i as f64 / n as f64;
            out.push_str(&format!("{},{}\n", s, self.kappa[i]));
        }
        out
    }

    fn validate_grid(n: usize) -> Result<()> {
        if n < 64 || !n.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "profile grid size {n} must be a power of two ≥ 64"
            )));
        }
        Ok(())
    }
}

/// Geodesic curvature profile of a loop on an `n`-node arc-length grid
/// (`n` a power of two, ≥ 64).
///
/// Frames are sampled on a finer auxiliary grid (≥ 2048 nodes, a multiple
/// of `n`) where the defining identity n' = κΓ' is re-checked against a
/// 6th-order finite difference of n; a violation signals inconsistent or
/// under-resolved input.
pub fn geodesic_curvature(l: &SphericalLoop, n: usize) -> Result<CurvatureProfile> {
    CurvatureProfile::validate_grid(n)?;
    let map = ArcLengthMap::build(l, n)?;
    let ell = map.total_length();

    let fine = n.max(2048);
    let ratio = fine / n;
    let h = ell / fine as f64;

    let frames: Vec<Frame> = (0..fine).map(|i| map.frame_at(i as f64 * h)).collect();
    let kappa_fine: Vec<f64> = frames.iter().map(|f| f.geodesic_curvature()).collect();
    let max_kappa = kappa_fine.iter().fold(0.0f64, |m, k| m.max(k.abs()));

    // 6th-order central difference of n along the grid.
    let mut worst = 0.0f64;
    for i in 0..fine {
        let at = |o: isize| {
            let j = (i as isize + o).rem_euclid(fine as isize) as usize;
            frames[j].normal
        };
        let nprime = (at(-3) * -1.0
            + at(-2) * 9.0
            + at(-1) * -45.0
            + at(1) * 45.0
            + at(2) * -9.0
            + at(3) * 1.0)
            * (1.0 / (60.0 * h));
        let residual = (nprime - frames[i].tangent * kappa_fine[i]).norm();
        worst = worst.max(residual);
    }
    let tol = 1e-6 * (1.0 + max_kappa);
    if worst > tol {
        return Err(Error::FrameIdentityViolated {
            residual: worst,
            tol,
        });
    }

    let kappa: Vec<f64> = (0..n).map(|i| kappa_fine[i * ratio]).collect();
    Ok(CurvatureProfile {
        length: ell,
        kappa,
        source: ProfileSource::FromCurve,
    })
}

fn angle_between(a: Vec3, b: Vec3) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}

/// Spherical excess of the triangle (a, b, c) by L'Huilier's formula.
fn lhuilier_excess(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    let al = angle_between(b, c);
    let be = angle_between(a, c);
    let ga = angle_between(a, b);
    let s = 0.5 * (al + be + ga);
    let t =
        (0.5 * s).tan() * (0.5 * (s - al)).tan() * (0.5 * (s - be)).tan() * (0.5 * (s - ga)).tan();
    4.0 * t.max(0.0).sqrt().atan()
}

fn fan_area(pole: Vec3, pts: &[Vec3]) -> f64 {
    let m = pts.len();
    let mut area = 0.0;
    for i in 0..m {
        area += lhuilier_excess(pole, pts[i], pts[(i + 1) % m]);
    }
    area
}

fn star_shaped_from(pole: Vec3, pts: &[Vec3]) -> bool {
    // Angles of the points in a tangent frame at the pole must wind
    // monotonically by exactly ±2π.
    let seed = if pole.z.abs() < 0.9 {
        Vec3::new(0.0, 0.0, 1.0)
    } else {
        Vec3::new(1.0, 0.0, 0.0)
    };
    let e1 = match (seed - pole * seed.dot(pole)).normalized() {
        Some(v) => v,
        None => return false,
    };
    let e2 = pole.cross(e1);
    let mut angles = Vec::with_capacity(pts.len());
    for &p in pts {
        if p.dot(pole).abs() > 1.0 - 1e-12 {
            return false; // the curve passes through the pole
        }
        angles.push(p.dot(e2).atan2(p.dot(e1)));
    }
    let m = angles.len();
    let mut turn = 0.0;
    let mut sign = 0.0f64;
    for i in 0..m {
        let mut d = angles[(i + 1) % m] - angles[i];
        while d > std::f64::consts::PI {
            d -= TAU;
        }
        while d < -std::f64::consts::PI {
            d += TAU;
        }
        if d == 0.0 {
            return false;
        }
        if sign == 0.0 {
            sign = d.signum();
        } else if d.signum() != sign {
            return false;
        }
        turn += d;
    }
    (turn.abs() - TAU).abs() < 1e-6
}

/// Spherical area enclosed by the loop, on the side the inward vector −n
/// points to, so that ∫κ ds + A = 2π. The fan pole is the normalized
/// curve centroid (or −mean(n) when the centroid degenerates).
pub fn enclosed_area(l: &SphericalLoop) -> Result<f64> {
    enclosed_area_impl(l, None)
}

/// Same as [`enclosed_area`], with a caller-supplied fan pole for regions
/// that are not star-shaped from the centroid.
pub fn enclosed_area_with_pole(l: &SphericalLoop, pole: [f64; 3]) -> Result<f64> {
    enclosed_area_impl(l, Some(Vec3::from(pole)))
}

fn enclosed_area_impl(l: &SphericalLoop, pole: Option<Vec3>) -> Result<f64> {
    let curve = RawCurve::build(l)?;
    let period = curve.period();
    let sample = |m: usize| -> Vec<Vec3> {
        (0..m)
            .map(|i| curve.eval(period * i as f64 / m as f64).0)
            .collect()
    };
    let m = 4096usize;
    let coarse = sample(m);
    let fine = sample(2 * m);

    let pole = match pole {
        Some(p) => p
            .normalized()
            .ok_or_else(|| Error::InvalidInput("zero pole vector".into()))?,
        None => {
            let mean = coarse.iter().fold(Vec3::ZERO, |acc, &p| acc + p) * (1.0 / m as f64);
            match mean.normalized() {
                Some(p) if mean.norm() > 1e-6 => p,
                _ => {
                    // Centroid degenerates (e.g. a great circle): fall back
                    // to the mean inward direction −n.
                    let mut acc = Vec3::ZERO;
                    for i in 0..m {
                        let (p, dp, _) = curve.eval(period * i as f64 / m as f64);
                        acc = acc + -p.cross(dp * (1.0 / dp.norm()));
                    }
                    (acc * (1.0 / m as f64))
                        .normalized()
                        .ok_or(Error::OrientationAmbiguous)?
                }
            }
        }
    };

    if !star_shaped_from(pole, &coarse) {
        return Err(Error::OrientationAmbiguous);
    }

    // Chord-polygon area is O(M⁻²) accurate; one Richardson step removes
    // the leading term.
    let a_coarse = fan_area(pole, &coarse);
    let a_fine = fan_area(pole, &fine);
    let a_fan = (4.0 * a_fine - a_coarse) / 3.0;

    // Which side of the curve is the pole on? Interior means −n side.
    let mut neg = 0usize;
    let mut pos = 0usize;
    for i in 0..m {
        let (p, dp, _) = curve.eval(period * i as f64 / m as f64);
        let n = p.cross(dp * (1.0 / dp.norm()));
        if (pole - p).dot(n) < 0.0 {
            neg += 1;
        } else {
            pos += 1;
        }
    }
    let area = if neg >= pos {
        if pos * 20 > m {
            return Err(Error::OrientationAmbiguous);
        }
        a_fan
    } else {
        if neg * 20 > m {
            return Err(Error::OrientationAmbiguous);
        }
        2.0 * TAU - a_fan
    };

    if !(area > 0.0 && area < 2.0 * TAU) {
        return Err(Error::OrientationAmbiguous);
    }
    Ok(area)
}

/// C² quintic smoothstep, 0 → 1 over t ∈ [0, 1].
fn smoothstep5(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)
}

/// Synthetic curvature profile: `m` plateau windows of half-width `eps`
/// with κ = cot(eps), centered at s = jℓ/m, joined C²-smoothly to
/// `baseline` by quintic transitions of width eps/2.
///
/// The windows model cross-sections that follow circular arcs of geodesic
/// radius eps; no embedded curve is constructed and embeddability is not
/// validated.
pub fn synthetic_profile(
    length: f64,
    baseline: f64,
    m: usize,
    eps: f64,
    n: usize,
) -> Result<CurvatureProfile> {
    CurvatureProfile::validate_grid(n)?;
    if length <= 0.0 {
        return Err(Error::InvalidInput(format!("length {length} must be > 0")));
    }
    if m < 1 {
        return Err(Error::InvalidInput("window count m must be ≥ 1".into()));
    }
    if !eps.is_finite() || eps <= 0.0 || eps >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::InvalidInput(format!(
            "window half-width eps = {eps} outside (0, π/2)"
        )));
    }
    // Plateau plus transitions span 3·eps per window; the ℓ/(4m) margin
    // keeps windows separated by at least one plateau width.
    if eps >= length / (4.0 * m as f64) {
        return Err(Error::WindowOverlap { m, eps, length });
    }

    let plateau = 1.0 / eps.tan();
    let spacing = length / m as f64;
    let kappa = (0..n)
        .map(|i| {
            let s = length * i as f64 / n as f64;
            // distance to the nearest window center jℓ/m (centers form a
            // lattice of spacing ℓ/m on the circle)
            let d = {
                let r = (s + 0.5 * spacing).rem_euclid(spacing) - 0.5 * spacing;
                r.abs()
            };
            if d <= eps {
                plateau
            } else if d <= 1.5 * eps {
                let t = (d - eps) / (0.5 * eps);
                plateau + (baseline - plateau) * smoothstep5(t)
            } else {
                baseline
            }
        })
        .collect();

    Ok(CurvatureProfile {
        length,
        kappa,
        source: ProfileSource::Synthetic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

    /// Adaptive Simpson quadrature, the independent oracle for arc length.
    fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
        fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, m: f64, b: f64) -> f64 {
            (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
        }
        fn rec<F: Fn(f64) -> f64>(
            f: &F,
            a: f64,
            b: f64,
            whole: f64,
            tol: f64,
            depth: usize,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let left = simpson(f, a, 0.5 * (a + m), m);
            let right = simpson(f, m, 0.5 * (m + b), b);
            if depth == 0 || (left + right - whole).abs() < 15.0 * tol {
                left + right + (left + right - whole) / 15.0
            } else {
                rec(f, a, m, left, 0.5 * tol, depth - 1) + rec(f, m, b, right, 0.5 * tol, depth - 1)
            }
        }
        let m = 0.5 * (a + b);
        rec(f, a, b, simpson(f, a, m, b), tol, 48)
    }

    fn fourier_loop() -> SphericalLoop {
        SphericalLoop::fourier(FRAC_PI_3, vec![(0.05, 0.0)])
    }

    #[test]
    fn circle_length_closed_form() {
        for theta in [FRAC_PI_4, FRAC_PI_3, 1.1] {
            let map = arc_length_reparametrize(&SphericalLoop::circle(theta)).unwrap();
            assert!(
                (map.total_length() - TAU * theta.sin()).abs() < 1e-10,
                "theta = {theta}"
            );
        }
    }

    #[test]
    fn great_circle_length_is_two_pi() {
        let map = arc_length_reparametrize(&SphericalLoop::circle(FRAC_PI_2)).unwrap();
        assert!((map.total_length() - TAU).abs() < 1e-10);
    }

    #[test]
    fn fourier_length_matches_adaptive_simpson() {
        let map = arc_length_reparametrize(&fourier_loop()).unwrap();
        let speed = |phi: f64| {
            let th = FRAC_PI_3 + 0.05 * phi.cos();
            let dth = -0.05 * phi.sin();
            (dth * dth + th.sin() * th.sin()).sqrt()
        };
        let oracle = adaptive_simpson(&speed, 0.0, TAU, 1e-12);
        // frozen from the oracle at tolerance 1e-12
        assert!((oracle - 5.442531778621252).abs() < 1e-9);
        assert!(
            (map.total_length() - oracle).abs() < 1e-9,
            "l = {}, oracle = {}",
            map.total_length(),
            oracle
        );
    }

    #[test]
    fn round_trip_parameter_error_small() {
        let map = arc_length_reparametrize(&fourier_loop()).unwrap();
        assert!(map.round_trip_error() < 1e-10);
    }

    #[test]
    fn great_circle_frame() {
        // circle(π/2): Γ'' = −Γ and n constant.
        let l = SphericalLoop::circle(FRAC_PI_2);
        let map = arc_length_reparametrize(&l).unwrap();
        let n0 = map.frame_at(0.0).normal;
        for k in 0..8 {
            let s = TAU * k as f64 / 8.0;
            let f = map.frame_at(s);
            assert!((f.second + f.position).norm() < 1e-9);
            assert!((f.normal - n0).norm() < 1e-9);
        }
    }

    #[test]
    fn frame_orthonormality() {
        // circle(π/4) at s = 0: |Γ| = |Γ'| = 1, n ⊥ Γ, n ⊥ Γ'.
        let f = evaluate_frame(&SphericalLoop::circle(FRAC_PI_4), 0.0).unwrap();
        assert!((f.position.norm() - 1.0).abs() < 1e-10);
        assert!((f.tangent.norm() - 1.0).abs() < 1e-10);
        assert!(f.normal.dot(f.position).abs() < 1e-10);
        assert!(f.normal.dot(f.tangent).abs() < 1e-10);
    }

    #[test]
    fn frames_unit_on_grid() {
        for l in [SphericalLoop::circle(0.9), fourier_loop()] {
            let map = arc_length_reparametrize(&l).unwrap();
            let ell = map.total_length();
            for i in 0..128 {
                let f = map.frame_at(ell * i as f64 / 128.0);
                assert!((f.position.norm() - 1.0).abs() < 1e-10);
                assert!((f.tangent.norm() - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn fourier_frame_identity_residual() {
        // The profile constructor enforces the 6th-order FD residual bound;
        // a successful build is the check.
        let profile = geodesic_curvature(&fourier_loop(), 1024).unwrap();
        assert_eq!(profile.n(), 1024);
    }

    #[test]
    fn circle_curvature_is_cot_theta() {
        for theta in [FRAC_PI_4, FRAC_PI_3, 0.6] {
            let profile = geodesic_curvature(&SphericalLoop::circle(theta), 256).unwrap();
            let want = 1.0 / theta.tan();
            for &k in &profile.kappa {
                assert!((k - want).abs() < 1e-9, "theta = {theta}: {k} vs {want}");
            }
        }
    }

    #[test]
    fn great_circle_curvature_vanishes() {
        let profile = geodesic_curvature(&SphericalLoop::circle(FRAC_PI_2), 128).unwrap();
        assert!(profile.max_abs_kappa() < 1e-10);
    }

    #[test]
    fn circle_curvature_grid_refinement_invariant() {
        let p1 = geodesic_curvature(&SphericalLoop::circle(0.8), 256).unwrap();
        let p2 = geodesic_curvature(&SphericalLoop::circle(0.8), 512).unwrap();
        for i in 0..256 {
            assert!((p1.kappa[i] - p2.kappa[2 * i]).abs() < 1e-8);
        }
    }

    #[test]
    fn fourier_curvature_mean_and_fd_oracle() {
        let profile = geodesic_curvature(&fourier_loop(), 1024).unwrap();
        let spread = profile.kappa.iter().fold(f64::MIN, |m, &k| m.max(k))
            - profile.kappa.iter().fold(f64::MAX, |m, &k| m.min(k));
        assert!(spread > 1e-3, "κ should be non-constant, spread = {spread}");
        let mean = profile.kappa.iter().sum::<f64>() / profile.n() as f64;
        let want = 1.0 / FRAC_PI_3.tan();
        assert!((mean - want).abs() < 1e-3, "mean {mean} vs cot(π/3) {want}");

        // Independent oracle: κ from a 6th-order FD derivative of n dotted
        // with Γ' on an 8192-node grid, compared at shared nodes.
        let map = arc_length_reparametrize(&fourier_loop()).unwrap();
        let ell = map.total_length();
        let nf = 8192usize;
        let h = ell / nf as f64;
        let frames: Vec<Frame> = (0..nf).map(|i| map.frame_at(i as f64 * h)).collect();
        let ratio = nf / 1024;
        for i in (0..1024).step_by(64) {
            let j = i * ratio;
            let at = |o: isize| frames[(j as isize + o).rem_euclid(nf as isize) as usize].normal;
            let nprime = (at(-3) * -1.0
                + at(-2) * 9.0
                + at(-1) * -45.0
                + at(1) * 45.0
                + at(2) * -9.0
                + at(3) * 1.0)
                * (1.0 / (60.0 * h));
            let kappa_fd = nprime.dot(frames[j].tangent);
            assert!(
                (kappa_fd - profile.kappa[i]).abs() < 1e-7,
                "node {i}: fd {kappa_fd} vs triple product {}",
                profile.kappa[i]
            );
        }
    }

    #[test]
    fn cap_areas_closed_form() {
        for theta in [FRAC_PI_4, FRAC_PI_3, 1.0] {
            let a = enclosed_area(&SphericalLoop::circle(theta)).unwrap();
            let want = TAU * (1.0 - theta.cos());
            assert!((a - want).abs() < 1e-8, "theta = {theta}: {a} vs {want}");
        }
    }

    #[test]
    fn hemisphere_area() {
        let a = enclosed_area(&SphericalLoop::circle(FRAC_PI_2)).unwrap();
        assert!((a - TAU).abs() < 1e-8);
    }

    #[test]
    fn gauss_bonnet_identity() {
        // ∫κ ds + A = 2π, the orientation oracle for the area side choice.
        for l in [
            SphericalLoop::circle(FRAC_PI_3),
            fourier_loop(),
            SphericalLoop::fourier(1.2, vec![(0.02, -0.04), (0.0, 0.03)]),
        ] {
            let profile = geodesic_curvature(&l, 2048).unwrap();
            let a = enclosed_area(&l).unwrap();
            let gb = profile.integral_kappa() + a - TAU;
            assert!(gb.abs() < 1e-6, "Gauss–Bonnet residual {gb:.2e}");
        }
    }

    #[test]
    fn reversed_orientation_flips_area_side() {
        // Walking the same circle the other way makes the complement the
        // enclosed region; Gauss–Bonnet must still close.
        let n = 512;
        let theta: f64 = FRAC_PI_3;
        let points: Vec<[f64; 3]> = (0..n)
            .map(|i| {
                let phi = TAU * i as f64 / n as f64; // counterclockwise
                [
                    theta.sin() * phi.cos(),
                    theta.sin() * phi.sin(),
                    theta.cos(),
                ]
            })
            .collect();
        let l = SphericalLoop::Samples { points };
        let a = enclosed_area(&l).unwrap();
        let want = 2.0 * TAU - TAU * (1.0 - theta.cos());
        assert!((a - want).abs() < 1e-4, "{a} vs {want}");
    }

    #[test]
    fn sampled_circle_recovers_curvature() {
        let n = 8192;
        let theta: f64 = FRAC_PI_4;
        let points: Vec<[f64; 3]> = (0..n)
            .map(|i| {
                let phi = TAU * i as f64 / n as f64;
                [
                    theta.sin() * phi.cos(),
                    -theta.sin() * phi.sin(),
                    theta.cos(),
                ]
            })
            .collect();
        let l = SphericalLoop::Samples { points };
        let map = arc_length_reparametrize(&l).unwrap();
        assert!((map.total_length() - TAU * theta.sin()).abs() < 1e-8);
        let profile = geodesic_curvature(&l, 256).unwrap();
        let want = 1.0 / theta.tan();
        for &k in &profile.kappa {
            assert!((k - want).abs() < 1e-4, "{k} vs {want}");
        }
    }

    #[test]
    fn pole_override_matches_default_and_bad_pole_rejected() {
        let l = SphericalLoop::circle(FRAC_PI_4);
        let a_default = enclosed_area(&l).unwrap();
        let a_pole = enclosed_area_with_pole(&l, [0.0, 0.0, 1.0]).unwrap();
        assert!((a_default - a_pole).abs() < 1e-9);
        // viewed from a point on the equator the cap boundary does not
        // wind around the pole: not star-shaped
        let err = enclosed_area_with_pole(&l, [1.0, 0.0, 0.0]).unwrap_err();
        assert!(matches!(err, Error::OrientationAmbiguous), "{err}");
    }

    #[test]
    fn repeated_sample_point_rejected() {
        let n = 64;
        let mut points: Vec<[f64; 3]> = (0..n)
            .map(|i| {
                let phi = TAU * i as f64 / n as f64;
                [0.5 * phi.cos(), -0.5 * phi.sin(), 0.75f64.sqrt()]
            })
            .collect();
        points[10] = points[40]; // far-apart parameters, same point
        let err = arc_length_reparametrize(&SphericalLoop::Samples { points }).unwrap_err();
        assert!(matches!(err, Error::NonInjectiveCurve { .. }), "{err}");
    }

    #[test]
    fn jittered_samples_violate_frame_identity() {
        // Points exactly on the sphere but traversed with noisy spacing:
        // the spline derivatives become inconsistent and the n' = κΓ'
        // residual check must flag it.
        let n = 1024usize;
        let theta: f64 = FRAC_PI_4;
        let mut state = 12345u64;
        let mut noise = || {
            state = state
                .wrapping_mul(6_364_136_223_846_793_005)
                .wrapping_add(1_442_695_040_888_963_407);
            ((state >> 11) as f64 / (1u64 << 53) as f64 - 0.5) * 4e-4
        };
        let points: Vec<[f64; 3]> = (0..n)
            .map(|i| {
                let phi = TAU * i as f64 / n as f64 + noise();
                [
                    theta.sin() * phi.cos(),
                    -theta.sin() * phi.sin(),
                    theta.cos(),
                ]
            })
            .collect();
        let err = geodesic_curvature(&SphericalLoop::Samples { points }, 256).unwrap_err();
        assert!(matches!(err, Error::FrameIdentityViolated { .. }), "{err}");
    }

    #[test]
    fn synthetic_plateau_values() {
        // m = 1, eps = 0.1: κ = cot(0.1) ≈ 9.9666 on the window.
        let p = synthetic_profile(TAU, 0.2, 1, 0.1, 2048).unwrap();
        let plateau = 1.0 / 0.1f64.tan();
        assert!((plateau - 9.966644).abs() < 1e-5);
        let h = TAU / 2048.0;
        for i in 0..2048 {
            let s = i as f64 * h;
            let d = (s - TAU + 0.5 * TAU).rem_euclid(TAU) - 0.5 * TAU;
            if d.abs() < 0.1 - h {
                assert_eq!(p.kappa[i], plateau, "inside plateau at s = {s}");
            }
            if d.abs() > 0.15 + h {
                assert_eq!(p.kappa[i], 0.2, "baseline at s = {s}");
            }
        }
    }

    #[test]
    fn synthetic_five_windows() {
        let p = synthetic_profile(TAU, 0.2, 5, 0.05, 4096).unwrap();
        let plateau = 1.0 / 0.05f64.tan();
        // count disjoint runs at the plateau value (circular: merge the wrap)
        let on: Vec<bool> = p
            .kappa
            .iter()
            .map(|k| (k - plateau).abs() < 1e-12)
            .collect();
        let mut runs = 0;
        for i in 0..on.len() {
            let prev = on[(i + on.len() - 1) % on.len()];
            if on[i] && !prev {
                runs += 1;
            }
        }
        assert_eq!(runs, 5);
    }

    #[test]
    fn synthetic_window_overlap_rejected() {
        let err = synthetic_profile(1.0, 0.2, 2, 0.3, 1024).unwrap_err();
        assert!(matches!(err, Error::WindowOverlap { .. }), "{err}");
    }

    #[test]
    fn isoperimetric_polygon_sanity() {
        // (2π − A)² ≥ 4π² − ℓ² for short loops.
        for l in [
            SphericalLoop::circle(FRAC_PI_4),
            SphericalLoop::circle(1.2),
            fourier_loop(),
        ] {
            let map = arc_length_reparametrize(&l).unwrap();
            let ell = map.total_length();
            if ell > TAU {
                continue;
            }
            let a = enclosed_area(&l).unwrap();
            let lhs = (PI + PI - a) * (PI + PI - a);
            let rhs = 4.0 * PI * PI - ell * ell;
            assert!(lhs >= rhs - 1e-9, "lhs {lhs} < rhs {rhs}");
        }
    }

    #[test]
    fn degenerate_circle_rejected() {
        assert!(arc_length_reparametrize(&SphericalLoop::circle(0.0)).is_err());
        assert!(arc_length_reparametrize(&SphericalLoop::circle(PI)).is_err());
    }

    #[test]
    fn curve_spec_json_round_trip() {
        let spec: CurveSpec =
            serde_json::from_str(r#"{"kind":"circle","theta":0.7853981634}"#).unwrap();
        assert!(matches!(spec, CurveSpec::Circle { .. }));
        let spec: CurveSpec = serde_json::from_str(
            r#"{"kind":"fourier","theta0":1.0471975512,"coeffs":[[0.05,0.0]]}"#,
        )
        .unwrap();
        assert!(spec.as_loop().is_some());
        let spec: CurveSpec = serde_json::from_str(
            r#"{"kind":"synthetic","length":6.2831853072,"baseline":0.2,"windows":{"m":5,"eps":0.05}}"#,
        )
        .unwrap();
        assert!(spec.as_loop().is_none());
        let p = spec.profile(2048).unwrap();
        assert_eq!(p.source, ProfileSource::Synthetic);
    }

    #[test]
    fn profile_refinement_keeps_nodes() {
        let p = geodesic_curvature(&fourier_loop(), 256).unwrap();
        let r = p.refined();
        assert_eq!(r.n(), 512);
        for i in 0..256 {
            assert_eq!(r.kappa[2 * i], p.kappa[i]);
        }
        // midpoints close to the true curvature
        let exact = geodesic_curvature(&fourier_loop(), 512).unwrap();
        for i in 0..512 {
            assert!((r.kappa[i] - exact.kappa[i]).abs() < 1e-6);
        }
    }

    #[test]
    fn profile_grid_size_validated() {
        assert!(geodesic_curvature(&SphericalLoop::circle(1.0), 100).is_err());
        assert!(geodesic_curvature(&SphericalLoop::circle(1.0), 32).is_err());
        assert!(synthetic_profile(TAU, 0.0, 1, 0.05, 48).is_err());
    }
}
