//! The cross-section operator −d²/ds² − κ²/4 on L²(T), T = R/ℓZ.
//!
//! Its negative eigenvalues drive everything downstream: the accumulation
//! constant k_S = (1/2π)Σ√(−λ_j) over λ_j < 0 is the logarithmic slope of
//! the bound-state counting functions of the reduced half-line models.
//!
//! Discretization: second-order central differences with periodic corner
//! entries. Eigenvalues are Richardson-extrapolated from the grid pair
//! (n, 2n) — the finite-difference error is O(h²), so (4λ_{2n} − λ_n)/3
//! cancels the leading term and |λ_{2n} − λ_n|/3 is a computable error
//! estimate. The refined grid interpolates κ² by a periodic cubic spline,
//! whose O(h⁴) resampling error sits below the O(h²) term being removed.

use serde::Serialize;

use crate::eigen;
use crate::error::{Error, Result};
use crate::interp::PeriodicSpline;
use crate::sphere_curves::CurvatureProfile;

/// Finite-difference matrix of −d²/ds² − κ²/4 on the periodic grid.
#[derive(Debug, Clone)]
pub struct PeriodicOperatorMatrix {
    pub n: usize,
    /// Grid step ℓ/n.
    pub h: f64,
    /// 2/h² − κ(s_i)²/4.
    pub diag: Vec<f64>,
    /// −1/h², coupling i ↔ i+1.
    pub offdiag: f64,
    /// −1/h², coupling 0 ↔ n−1.
    pub corner: f64,
    pub length: f64,
    /// κ² at the nodes, kept for grid refinement.
    pub kappa_sq: Vec<f64>,
}

impl PeriodicOperatorMatrix {
    fn from_kappa_sq(length: f64, kappa_sq: Vec<f64>) -> Self {
        let n = kappa_sq.len();
        let h = length / n as f64;
        let inv_h2 = 1.0 / (h * h);
        let diag = kappa_sq.iter().map(|k2| 2.0 * inv_h2 - 0.25 * k2).collect();
        PeriodicOperatorMatrix {
            n,
            h,
            diag,
            offdiag: -inv_h2,
            corner: -inv_h2,
            length,
            kappa_sq,
        }
    }

    /// Couplings e[i] between nodes i and i+1 mod n, as the eigensolver
    /// expects them.
    fn couplings(&self) -> Vec<f64> {
        let mut e = vec![self.offdiag; self.n];
        e[self.n - 1] = self.corner;
        e
    }

    /// Matrix on the doubled grid, κ² resampled by periodic cubic spline
    /// (existing nodes keep their exact values).
    fn refined(&self) -> PeriodicOperatorMatrix {
        let n = self.n;
        let knots: Vec<f64> = (0..n).map(|i| self.length * i as f64 / n as f64).collect();
        let spline = PeriodicSpline::new(knots, self.kappa_sq.clone(), self.length);
        let kappa_sq = (0..2 * n)
            .map(|i| {
                if i % 2 == 0 {
                    self.kappa_sq[i / 2]
                } else {
                    spline.eval(self.length * i as f64 / (2 * n) as f64)
                }
            })
            .collect();
        PeriodicOperatorMatrix::from_kappa_sq(self.length, kappa_sq)
    }

    /// Number of eigenvalues strictly below `x` (exact inertia count).
    pub fn count_below(&self, x: f64) -> usize {
        eigen::periodic_count_below(&self.diag, &self.couplings(), x)
    }

    /// Lowest `count` eigenvalues on this grid alone (no extrapolation).
    pub fn raw_eigenvalues(&self, count: usize) -> Vec<f64> {
        eigen::periodic_lowest_eigenvalues(&self.diag, &self.couplings(), count)
    }
}

/// Assemble the finite-difference matrix from a curvature profile.
pub fn assemble(profile: &CurvatureProfile) -> PeriodicOperatorMatrix {
    let kappa_sq = profile.kappa.iter().map(|k| k * k).collect();
    PeriodicOperatorMatrix::from_kappa_sq(profile.length, kappa_sq)
}

/// Ordered eigenvalues with grid metadata and extrapolation error bars.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumResult {
    pub length: f64,
    /// Ascending, Richardson-extrapolated over (n, 2n).
    pub eigenvalues: Vec<f64>,
    pub grid_sizes_used: Vec<usize>,
    /// Per-eigenvalue estimate |λ_{2n} − λ_n|/3 of the removed O(h²) term.
    pub richardson_error: Vec<f64>,
}

impl SpectrumResult {
    /// Magnitude below which an eigenvalue is numerically indistinguishable
    /// from zero at this grid's kinetic scale.
    pub fn solver_floor(&self) -> f64 {
        let n_fine = *self.grid_sizes_used.last().unwrap_or(&1) as f64;
        let kinetic = 4.0 * (n_fine / self.length) * (n_fine / self.length);
        32.0 * f64::EPSILON * kinetic
    }
}

/// First `count` eigenvalues of the operator, Richardson-extrapolated from
/// the matrix grid n and its doubling 2n.
pub fn eigenvalues(matrix: &PeriodicOperatorMatrix, count: usize) -> Result<SpectrumResult> {
    if count == 0 {
        return Err(Error::InvalidInput("eigenvalue count must be ≥ 1".into()));
    }
    if count > matrix.n / 4 {
        return Err(Error::InvalidInput(format!(
            "count {count} > n/4 = {}; higher modes are not trusted on this grid",
            matrix.n / 4
        )));
    }
    let fine = matrix.refined();
    let coarse_evals = matrix.raw_eigenvalues(count);
    let fine_evals = fine.raw_eigenvalues(count);

    let mut extrapolated = Vec::with_capacity(count);
    let mut bars = Vec::with_capacity(count);
    for j in 0..count {
        let extrap = (4.0 * fine_evals[j] - coarse_evals[j]) / 3.0;
        if !extrap.is_finite() {
            return Err(Error::ConvergenceFailure(format!(
                "eigenvalue {j} is not finite"
            )));
        }
        extrapolated.push(extrap);
        bars.push((fine_evals[j] - coarse_evals[j]).abs() / 3.0);
    }
    // Extrapolating two ascending lists can micro-reorder nearly equal
    // pairs; restore ascending order jointly with the error bars.
    let mut idx: Vec<usize> = (0..count).collect();
    idx.sort_by(|&a, &b| extrapolated[a].partial_cmp(&extrapolated[b]).unwrap());
    let eigenvalues = idx.iter().map(|&i| extrapolated[i]).collect();
    let richardson_error = idx.iter().map(|&i| bars[i]).collect();

    Ok(SpectrumResult {
        length: matrix.length,
        eigenvalues,
        grid_sizes_used: vec![matrix.n, 2 * matrix.n],
        richardson_error,
    })
}

/// Spectrum guaranteed to contain every negative eigenvalue (plus a couple
/// of modes above), regardless of how small `min_count` is.
pub fn spectrum_with_negatives(
    profile: &CurvatureProfile,
    min_count: usize,
) -> Result<SpectrumResult> {
    let matrix = assemble(profile);
    let negatives = matrix.count_below(-1e-10);
    let count = (negatives + 2).max(min_count).min(matrix.n / 4);
    eigenvalues(&matrix, count)
}

/// The accumulation constant k_S and the negative eigenvalues feeding it.
#[derive(Debug, Clone, Serialize)]
pub struct AccumulationConstant {
    /// (1/2π) Σ √(−λ_j) over the stored negative eigenvalues.
    pub k_s: f64,
    pub negative_eigenvalues: Vec<f64>,
    /// Eigenvalues above this (negative) threshold are treated as zero.
    pub threshold: f64,
    /// First-order propagation of the Richardson error bars into k_S.
    pub uncertainty: f64,
}

/// Sum the negative spectrum into k_S = (1/2π)Σ√(−λ_j).
///
/// Eigenvalues within the solver floor of zero are treated as exact zeros
/// (the free operator's constant mode lands here). Eigenvalues above the
/// floor but within max(1e−10, richardson_error) of zero make the summand
/// count genuinely uncertain and are reported as
/// [`Error::NearZeroEigenvalue`] rather than silently resolved.
pub fn accumulation_constant(spectrum: &SpectrumResult) -> Result<AccumulationConstant> {
    let threshold = -1e-10;
    let floor = spectrum.solver_floor();
    if let Some(&lambda1) = spectrum.eigenvalues.first() {
        if lambda1 < threshold && spectrum.richardson_error[0] >= 0.1 * lambda1.abs() {
            return Err(Error::InvalidInput(format!(
                "ground state not converged: error {:.3e} vs |λ1| = {:.3e}",
                spectrum.richardson_error[0],
                lambda1.abs()
            )));
        }
    }

    let mut negative = Vec::new();
    let mut uncertainty = 0.0;
    for (j, (&lambda, &err)) in spectrum
        .eigenvalues
        .iter()
        .zip(spectrum.richardson_error.iter())
        .enumerate()
    {
        if lambda.abs() <= floor {
            continue; // numerically an exact zero mode
        }
        if lambda.abs() < (1e-10f64).max(err) {
            return Err(Error::NearZeroEigenvalue {
                index: j,
                value: lambda,
                noise: (1e-10f64).max(err),
            });
        }
        if lambda < threshold {
            negative.push(lambda);
            uncertainty += err / (2.0 * (-lambda).sqrt());
        }
    }

    // .max(0.0) canonicalizes the empty sum (-0.0) to +0.0
    let k_s = (negative.iter().map(|l: &f64| (-l).sqrt()).sum::<f64>()
        / (2.0 * std::f64::consts::PI))
        .max(0.0);
    Ok(AccumulationConstant {
        k_s,
        negative_eigenvalues: negative,
        threshold,
        uncertainty: uncertainty / (2.0 * std::f64::consts::PI),
    })
}

/// Variational bound λ1 ≤ −(1/4ℓ)∫κ² ds from the constant test function
/// (trapezoid rule on the profile grid).
pub fn minmax_upper_bound(profile: &CurvatureProfile) -> f64 {
    -profile.integral_kappa_sq() / (4.0 * profile.length)
}

/// Wire format for spectrum export.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumExport {
    pub schema: u32,
    pub length: f64,
    pub eigenvalues: Vec<f64>,
    pub errors: Vec<f64>,
    #[serde(rename = "k_S")]
    pub k_s: f64,
    pub negative: Vec<f64>,
}

impl SpectrumExport {
    pub fn new(spectrum: &SpectrumResult, constant: &AccumulationConstant) -> Self {
        SpectrumExport {
            schema: 1,
            length: spectrum.length,
            eigenvalues: spectrum.eigenvalues.clone(),
            errors: spectrum.richardson_error.clone(),
            k_s: constant.k_s,
            negative: constant.negative_eigenvalues.clone(),
        }
    }
}
