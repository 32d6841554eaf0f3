//! Cross-cutting validation harness: the geometric inequality for k_S, the
//! multi-window multiplicity growth, the interval δ models, the slope law
//! for 1/ρ² potentials, and end-to-end slope-vs-k_S comparisons.
//!
//! Every check returns a [`ValidationReport`] whose numeric claims carry
//! the tolerance they were tested at. Checks never panic on a violated
//! bound: failures and inconclusive outcomes are report entries. With the
//! same seed the whole suite is bit-for-bit reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cross_section_operator::{
    accumulation_constant, assemble, eigenvalues, minmax_upper_bound, spectrum_with_negatives,
};
use crate::error::Result;
use crate::point_interaction_models::{
    decay_rate_fit, solve_finite_difference, solve_transcendental, BoundaryCondition,
    IntervalDeltaSpec,
};
use crate::radial_counting::{
    count_below, count_below_matrix_checked, ks88_slope, predict_delta_counting,
    predict_layer_counting, CountingCurve, EnergyGrid, HalfLineOperatorSpec,
};
use crate::sphere_curves::{enclosed_area, geodesic_curvature, synthetic_profile, SphericalLoop};

const TAU: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
}

/// One measured quantity with the tolerance it was held to.
#[derive(Debug, Clone, Serialize)]
pub struct Measurement {
    pub label: String,
    pub value: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub name: String,
    pub status: CheckStatus,
    pub measurements: Vec<Measurement>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    fn new(name: &str) -> Self {
        ValidationReport {
            name: name.into(),
            status: CheckStatus::Pass,
            measurements: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn measure(&mut self, label: impl Into<String>, value: f64, tolerance: f64) {
        self.measurements.push(Measurement {
            label: label.into(),
            value,
            tolerance,
        });
    }

    /// Record a bound |value| ≤ tolerance, failing the report otherwise.
    fn require(&mut self, label: impl Into<String>, value: f64, tolerance: f64) {
        let label = label.into();
        if value.is_nan() || value.abs() > tolerance {
            self.status = CheckStatus::Fail;
            self.notes
                .push(format!("{label}: |{value:.6e}| > {tolerance:.3e}"));
        }
        self.measure(label, value, tolerance);
    }

    /// Record a predicate, failing the report when it does not hold.
    fn require_that(&mut self, label: impl Into<String>, ok: bool) {
        let label = label.into();
        if !ok {
            self.status = CheckStatus::Fail;
            self.notes.push(format!("{label}: violated"));
        }
    }

    fn mark_inconclusive(&mut self, note: String) {
        if self.status == CheckStatus::Pass {
            self.status = CheckStatus::Inconclusive;
        }
        self.notes.push(note);
    }
}

/// Serialize reports as JSON lines (one report per line).
pub fn reports_to_json_lines(reports: &[ValidationReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&serde_json::to_string(r).expect("report serialization"));
        out.push('\n');
    }
    out
}

/// Summary table: `name,status,failed_notes`.
pub fn reports_to_summary_csv(reports: &[ValidationReport]) -> String {
    let mut out = String::from("name,status,notes\n");
    for r in reports {
        let status = match r.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Inconclusive => "inconclusive",
        };
        out.push_str(&format!(
            "{},{},{}\n",
            r.name,
            status,
            r.notes.join("; ").replace(',', ";")
        ));
    }
    out
}

/// Suite-wide configuration.
#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Reduced grids and loop counts; inconclusive entries are expected.
    pub quick: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 7,
            quick: false,
        }
    }
}

impl SuiteConfig {
    fn grid_n(&self) -> usize {
        if self.quick {
            256
        } else {
            2048
        }
    }
}

fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    // Box–Muller; uniform draws stay in the open interval
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
}

/// Seeded random loops: colatitude θ₀ uniform in [π/6, π/2], Gaussian
/// Fourier coefficients (σ = 0.03, clamped to |c| ≤ 0.1) on frequencies
/// k ≤ 4. Every 5th loop is a pure circle, so equality cases are present.
/// Candidates failing validation or (when `short` is set) exceeding
/// length 2π are rejected and redrawn, deterministically in the seed.
pub fn random_loops(seed: u64, count: usize, short: bool) -> Vec<SphericalLoop> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let theta0 = rng.gen_range(std::f64::consts::FRAC_PI_6..=std::f64::consts::FRAC_PI_2);
        let candidate = if out.len() % 5 == 0 {
            SphericalLoop::circle(theta0)
        } else {
            let coeffs: Vec<(f64, f64)> = (0..4)
                .map(|_| {
                    (
                        (0.03 * standard_normal(&mut rng)).clamp(-0.1, 0.1),
                        (0.03 * standard_normal(&mut rng)).clamp(-0.1, 0.1),
                    )
                })
                .collect();
            SphericalLoop::fourier(theta0, coeffs)
        };
        match crate::sphere_curves::arc_length_reparametrize(&candidate) {
            Ok(map) if !short || map.total_length() <= TAU => out.push(candidate),
            _ => continue,
        }
    }
    out
}

fn is_circle(l: &SphericalLoop) -> bool {
    match l {
        SphericalLoop::Circle { .. } => true,
        SphericalLoop::Fourier { coeffs, .. } => coeffs.iter().all(|(a, b)| *a == 0.0 && *b == 0.0),
        SphericalLoop::Samples { .. } => false,
    }
}

/// Closed forms of the circular cone: λ₁ = −cot²θ/4,
/// λ₂ = (4 − cos²θ)/(4 sin²θ), k_S = cot θ/(4π), each within 1e−6.
pub fn check_circle_closed_forms(n: usize) -> ValidationReport {
    let mut report = ValidationReport::new("circle_closed_forms");
    for theta in [
        std::f64::consts::FRAC_PI_6,
        std::f64::consts::FRAC_PI_4,
        std::f64::consts::FRAC_PI_3,
    ] {
        let tag = format!("theta={theta:.4}");
        let cot = 1.0 / theta.tan();
        let run = || -> Result<(f64, f64, f64)> {
            let p = geodesic_curvature(&SphericalLoop::circle(theta), n)?;
            let s = eigenvalues(&assemble(&p), 4)?;
            let acc = accumulation_constant(&s)?;
            Ok((s.eigenvalues[0], s.eigenvalues[1], acc.k_s))
        };
        match run() {
            Ok((l1, l2, k_s)) => {
                report.require(format!("{tag} lambda1 defect"), l1 + cot * cot / 4.0, 1e-6);
                let l2_exact = (4.0 - theta.cos().powi(2)) / (4.0 * theta.sin().powi(2));
                report.require(format!("{tag} lambda2 defect"), l2 - l2_exact, 1e-6);
                report.require(format!("{tag} k_S defect"), k_s - cot / (2.0 * TAU), 1e-6);
            }
            Err(e) => {
                report.status = CheckStatus::Fail;
                report.notes.push(format!("{tag}: {e}"));
            }
        }
    }
    report
}

/// Variational bound: λ₁ ≤ −(1/4ℓ)∫κ² within 1e−8 on seeded random
/// loops, and k_S > 0 whenever κ ≢ 0.
pub fn check_minmax_bound(seed: u64, count: usize, n: usize) -> ValidationReport {
    let mut report = ValidationReport::new("minmax_lower_bound");
    let loops = random_loops(seed.wrapping_add(1), count, false);
    let results: Vec<Result<(f64, f64, f64, f64)>> = loops
        .par_iter()
        .map(|l| {
            let p = geodesic_curvature(l, n)?;
            let bound = minmax_upper_bound(&p);
            let s = spectrum_with_negatives(&p, 4)?;
            let acc = accumulation_constant(&s)?;
            Ok((s.eigenvalues[0], bound, acc.k_s, p.max_abs_kappa()))
        })
        .collect();
    let mut worst_excess = f64::MIN;
    let mut min_k_s = f64::MAX;
    for (i, r) in results.iter().enumerate() {
        match r {
            Ok((l1, bound, k_s, max_kappa)) => {
                worst_excess = worst_excess.max(l1 - bound);
                if *max_kappa > 0.0 {
                    min_k_s = min_k_s.min(*k_s);
                    report.require_that(format!("loop {i}: k_S > 0"), *k_s > 0.0);
                }
            }
            Err(e) => {
                report.status = CheckStatus::Fail;
                report.notes.push(format!("loop {i}: {e}"));
            }
        }
    }
    report.require_that(
        "lambda1 <= -(1/4l) int kappa^2 + 1e-8 on all loops",
        worst_excess <= 1e-8,
    );
    report.measure("worst lambda1 - bound", worst_excess, 1e-8);
    report.measure("min k_S over non-circular input", min_k_s, 0.0);
    report
}

/// Outcome of the isoperimetric comparison for one loop.
struct IsoOutcome {
    gap: f64,
    uncertainty: f64,
    circle: bool,
    skipped: bool,
}

/// Geometric lower bound k_S ≥ √(4π² − ℓ²)/(4πℓ) for loops of length
/// ℓ ≤ 2π, with equality exactly for circles. Longer loops are skipped
/// with a note. Non-circle strictness that dips inside the k_S error bar
/// is inconclusive, never a failure.
pub fn check_isoperimetric(loops: &[SphericalLoop], n: usize) -> ValidationReport {
    let mut report = ValidationReport::new("isoperimetric_bound");
    let outcomes: Vec<Result<IsoOutcome>> = loops
        .par_iter()
        .map(|l| {
            let p = geodesic_curvature(l, n)?;
            if p.length > TAU + 1e-12 {
                return Ok(IsoOutcome {
                    gap: 0.0,
                    uncertainty: 0.0,
                    circle: is_circle(l),
                    skipped: true,
                });
            }
            let s = spectrum_with_negatives(&p, 4)?;
            let acc = accumulation_constant(&s)?;
            let bound = (4.0 * std::f64::consts::PI * std::f64::consts::PI - p.length * p.length)
                .max(0.0)
                .sqrt()
                / (4.0 * std::f64::consts::PI * p.length);
            Ok(IsoOutcome {
                gap: acc.k_s - bound,
                uncertainty: acc.uncertainty,
                circle: is_circle(l),
                skipped: false,
            })
        })
        .collect();

    let mut tested = 0usize;
    let mut inconclusive = 0usize;
    let mut worst_gap = f64::MAX;
    let mut worst_circle_defect: f64 = 0.0;
    for (i, o) in outcomes.iter().enumerate() {
        match o {
            Ok(o) if o.skipped => {
                report
                    .notes
                    .push(format!("loop {i}: length > 2pi, skipped"));
            }
            Ok(o) => {
                tested += 1;
                worst_gap = worst_gap.min(o.gap);
                if o.gap < -1e-8 {
                    report.status = CheckStatus::Fail;
                    report
                        .notes
                        .push(format!("loop {i}: k_S below bound by {:.3e}", -o.gap));
                } else if o.circle {
                    worst_circle_defect = worst_circle_defect.max(o.gap.abs());
                    if o.gap.abs() > 1e-6 {
                        report.status = CheckStatus::Fail;
                        report
                            .notes
                            .push(format!("loop {i}: circle equality defect {:.3e}", o.gap));
                    }
                } else if o.gap <= o.uncertainty {
                    inconclusive += 1;
                    report.notes.push(format!(
                        "loop {i}: strictness gap {:.3e} within error bar {:.3e} (inconclusive)",
                        o.gap, o.uncertainty
                    ));
                }
            }
            Err(e) => {
                report.status = CheckStatus::Fail;
                report.notes.push(format!("loop {i}: {e}"));
            }
        }
    }
    report.measure("worst k_S - bound", worst_gap, -1e-8);
    report.measure("worst circle equality defect", worst_circle_defect, 1e-6);
    // The ≤5% inconclusive budget is an acceptance-level criterion on the
    // full 100-loop run; the check itself reports the fraction and never
    // fails on it (coarse grids legitimately produce inconclusives).
    report.measure(
        "inconclusive fraction",
        inconclusive as f64 / tested.max(1) as f64,
        0.05,
    );
    if inconclusive > 0 && report.status == CheckStatus::Pass {
        report.status = CheckStatus::Inconclusive;
    }
    report
}

/// ∫κ ds + A = 2π within 1e−6 for every curve-derived profile.
pub fn check_gauss_bonnet(loops: &[SphericalLoop], n: usize) -> ValidationReport {
    let mut report = ValidationReport::new("gauss_bonnet_identity");
    let residuals: Vec<Result<f64>> = loops
        .par_iter()
        .map(|l| {
            let p = geodesic_curvature(l, n.max(1024))?;
            let a = enclosed_area(l)?;
            Ok(p.integral_kappa() + a - TAU)
        })
        .collect();
    let mut worst: f64 = 0.0;
    for (i, r) in residuals.iter().enumerate() {
        match r {
            Ok(res) => worst = worst.max(res.abs()),
            Err(e) => {
                report.status = CheckStatus::Fail;
                report.notes.push(format!("loop {i}: {e}"));
            }
        }
    }
    report.require("worst Gauss-Bonnet residual", worst, 1e-6);
    report
}

/// Interval δ models: transcendental and finite-difference spectra agree
/// to 1e−6 at n = 4096 for L ∈ {2, 5, 10, 20}; the ground states sandwich
/// −1/4; λ₂ ≥ 0; log|λ₁ + 1/4| is affine in L with relative fit residual
/// ≤ 5% over L ∈ {5, 10, 15, 20}.
pub fn check_interval_models() -> ValidationReport {
    let mut report = ValidationReport::new("interval_delta_models");
    let mut worst_agreement: f64 = 0.0;
    for l in [2.0, 5.0, 10.0, 20.0] {
        for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
            let spec = match IntervalDeltaSpec::new(l, bc) {
                Ok(s) => s,
                Err(e) => {
                    report.status = CheckStatus::Fail;
                    report.notes.push(e.to_string());
                    continue;
                }
            };
            match (
                solve_transcendental(&spec),
                solve_finite_difference(&spec, 4096),
            ) {
                (Ok(t), Ok(f)) => {
                    worst_agreement = worst_agreement
                        .max((t.lambda1 - f.lambda1).abs())
                        .max((t.lambda2 - f.lambda2).abs());
                    let tag = format!("L={l} {}", bc.letter());
                    match bc {
                        BoundaryCondition::Dirichlet => report.require_that(
                            format!("{tag}: lambda1 >= -1/4"),
                            t.lambda1 >= -0.25 - 1e-12,
                        ),
                        BoundaryCondition::Neumann => report.require_that(
                            format!("{tag}: lambda1 <= -1/4"),
                            t.lambda1 <= -0.25 + 1e-12,
                        ),
                    }
                    report.require_that(format!("{tag}: lambda2 >= 0"), t.lambda2 >= 0.0);
                }
                (Err(e), _) | (_, Err(e)) => {
                    report.status = CheckStatus::Fail;
                    report.notes.push(format!("L={l} {}: {e}", bc.letter()));
                }
            }
        }
    }
    report.require(
        "worst transcendental vs FD disagreement",
        worst_agreement,
        1e-6,
    );
    for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
        match decay_rate_fit(bc, &[5.0, 10.0, 15.0, 20.0]) {
            Ok(fit) => {
                report.require_that(
                    format!("{} decay rate negative", bc.letter()),
                    fit.rate < 0.0,
                );
                report.require(
                    format!("{} decay fit relative residual", bc.letter()),
                    fit.relative_residual,
                    0.05,
                );
            }
            Err(e) => {
                report.status = CheckStatus::Fail;
                report.notes.push(format!("decay fit {}: {e}", bc.letter()));
            }
        }
    }
    report
}

/// Slope law for pure 1/ρ² potentials: for a ∈ {−0.5, −1, −2, −5} the
/// Dirichlet fitted slope matches (1/2π)√(−a − 1/4) within 10% over the
/// fit window [1e−12, 1e−4]; Dirichlet and Neumann slopes agree within
/// their fit residuals; a = −0.2 stays bounded (N ≤ 1).
pub fn check_ks88_slopes(quick: bool) -> ValidationReport {
    let mut report = ValidationReport::new("ks88_slope_law");
    // Grid one decade above the fit window: the slope fit drops the
    // largest decade, leaving [1e−12, 1e−4].
    let grid = if quick {
        EnergyGrid::new(1e-9, 1e-3, 4)
    } else {
        EnergyGrid::new(1e-12, 1e-3, 6)
    };
    let grid = match grid {
        Ok(g) => g,
        Err(e) => {
            report.status = CheckStatus::Fail;
            report.notes.push(e.to_string());
            return report;
        }
    };

    let run = |a: f64, bc: BoundaryCondition| -> Result<CountingCurve> {
        let spec = HalfLineOperatorSpec::new(1.0, bc, a, 0.0)?;
        crate::radial_counting::counting_curve(&spec, &grid)
    };

    for a in [-0.5, -1.0, -2.0, -5.0] {
        let want = ks88_slope(a);
        match (
            run(a, BoundaryCondition::Dirichlet),
            run(a, BoundaryCondition::Neumann),
        ) {
            (Ok(d), Ok(n)) => {
                let rel = (d.slope_fit.slope - want) / want;
                let tol = if quick { 0.2 } else { 0.10 };
                if rel.abs() > tol && quick {
                    report.mark_inconclusive(format!(
                        "a={a}: quick-grid Dirichlet slope off by {:.1}%",
                        100.0 * rel
                    ));
                } else {
                    report.require(format!("a={a}: Dirichlet slope relative error"), rel, tol);
                }
                let ds = (d.slope_fit.slope - n.slope_fit.slope).abs();
                report.require_that(
                    format!("a={a}: D/N slopes agree within fit residuals"),
                    ds <= d.slope_fit.residual + n.slope_fit.residual,
                );
            }
            (Err(e), _) | (_, Err(e)) => {
                report.status = CheckStatus::Fail;
                report.notes.push(format!("a={a}: {e}"));
            }
        }
    }

    // subcritical coefficient: bounded count
    match HalfLineOperatorSpec::new(1.0, BoundaryCondition::Dirichlet, -0.2, 0.0)
        .and_then(|s| count_below(&s, 1e-8))
    {
        Ok((n, _)) => report.require_that("a=-0.2: N <= 1 at E=1e-8", n <= 1),
        Err(e) => {
            report.status = CheckStatus::Fail;
            report.notes.push(format!("a=-0.2: {e}"));
        }
    }
    report
}

/// End-to-end reduced-model slopes for the circular cone of opening π/2
/// (θ = π/4): layer-D, layer-N, and δ counting slopes all within 15% of
/// k_S = 1/(4π).
pub fn check_end_to_end_slopes(n: usize, quick: bool) -> ValidationReport {
    let mut report = ValidationReport::new("reduced_model_slopes");
    let k_s = 1.0 / (4.0 * std::f64::consts::PI);
    let grid = if quick {
        EnergyGrid::new(1e-9, 1e-3, 4)
    } else {
        EnergyGrid::new(1e-12, 1e-3, 6)
    };
    let run = || -> Result<(CountingCurve, CountingCurve, CountingCurve)> {
        let grid = grid?;
        let p = geodesic_curvature(&SphericalLoop::circle(std::f64::consts::FRAC_PI_4), n)?;
        let s = spectrum_with_negatives(&p, 4)?;
        let (d, nn) = predict_layer_counting(&s, 0.0, 0.0, 1.0, &grid)?;
        let del = predict_delta_counting(&s, 0.0, &grid)?;
        Ok((d, nn, del))
    };
    match run() {
        Ok((d, nn, del)) => {
            for (label, curve) in [("layer-D", &d), ("layer-N", &nn), ("delta", &del)] {
                let rel = (curve.slope_fit.slope - k_s) / k_s;
                if quick && rel.abs() > 0.15 {
                    report.mark_inconclusive(format!(
                        "{label}: quick-grid slope off by {:.1}%",
                        100.0 * rel
                    ));
                } else {
                    report.require(format!("{label} slope relative error"), rel, 0.15);
                }
            }
        }
        Err(e) => {
            report.status = CheckStatus::Fail;
            report.notes.push(e.to_string());
        }
    }
    report
}

/// Multi-window multiplicity growth: with m plateau windows of half-width
/// ε and κ = cot ε, the operator acquires at least m negative eigenvalues
/// once ε is small enough (the first such ε is reported), and k_S grows
/// as ε shrinks.
pub fn check_multiplicity_growth(m: usize, eps_list: &[f64], n: usize) -> ValidationReport {
    let mut report = ValidationReport::new("multiplicity_growth");
    let mut threshold: Option<f64> = None;
    let mut k_s_series: Vec<(f64, f64)> = Vec::new();
    for &eps in eps_list {
        let run = || -> Result<(usize, f64)> {
            let p = synthetic_profile(TAU, 0.2, m, eps, n)?;
            let s = spectrum_with_negatives(&p, 4)?;
            let acc = accumulation_constant(&s)?;
            Ok((acc.negative_eigenvalues.len(), acc.k_s))
        };
        match run() {
            Ok((negatives, k_s)) => {
                report.measure(
                    format!("eps={eps}: negative count"),
                    negatives as f64,
                    m as f64,
                );
                report.measure(format!("eps={eps}: k_S"), k_s, 0.0);
                if negatives >= m && threshold.is_none() {
                    threshold = Some(eps);
                }
                k_s_series.push((eps, k_s));
            }
            Err(e) => {
                report.status = CheckStatus::Fail;
                report.notes.push(format!("eps={eps}: {e}"));
            }
        }
    }
    match threshold {
        Some(eps) => report
            .notes
            .push(format!("multiplicity >= {m} first reached at eps = {eps}")),
        None => {
            report.status = CheckStatus::Fail;
            report.notes.push(format!(
                "no eps in the list reaches {m} negative eigenvalues"
            ));
        }
    }
    // k_S strictly increases as eps decreases (series is given decreasing)
    for w in k_s_series.windows(2) {
        let ((e0, k0), (e1, k1)) = (w[0], w[1]);
        if e1 < e0 {
            report.require_that(format!("k_S increases from eps={e0} to eps={e1}"), k1 > k0);
        }
    }
    report
}

/// Oracle agreement: Prüfer zero counting vs the walled finite-difference
/// count on a randomized suite of half-line specs, within ±1, with wall
/// doubling never moving a count by more than 1.
pub fn check_oracle_consistency(seed: u64, count: usize) -> ValidationReport {
    let mut report = ValidationReport::new("counting_oracle_agreement");
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    let cases: Vec<(f64, f64, f64, BoundaryCondition)> = (0..count)
        .map(|_| {
            let a = rng.gen_range(-5.0..0.5);
            let b = rng.gen_range(-2.0..2.0);
            let loge = rng.gen_range(-10.0f64..-2.0);
            let bc = if rng.gen_range(0..2) == 0 {
                BoundaryCondition::Dirichlet
            } else {
                BoundaryCondition::Neumann
            };
            (a, b, 10f64.powf(loge), bc)
        })
        .collect();

    let results: Vec<Result<(usize, usize)>> = cases
        .par_iter()
        .map(|&(a, b, e, bc)| {
            let spec = HalfLineOperatorSpec::new(1.0, bc, a, b)?;
            let (n, _) = count_below(&spec, e)?;
            let m = count_below_matrix_checked(&spec, e)?;
            Ok((n, m))
        })
        .collect();

    let mut worst: i64 = 0;
    for (i, r) in results.iter().enumerate() {
        match r {
            Ok((n, m)) => {
                let diff = (*n as i64 - *m as i64).abs();
                worst = worst.max(diff);
                if diff > 1 {
                    let (a, b, e, bc) = cases[i];
                    report.status = CheckStatus::Fail;
                    report.notes.push(format!(
                        "case {i} (a={a:.3}, b={b:.3}, E={e:.3e}, {}): prufer {n} vs matrix {m}",
                        bc.letter()
                    ));
                }
            }
            Err(e) => {
                report.status = CheckStatus::Fail;
                report.notes.push(format!("case {i}: {e}"));
            }
        }
    }
    report.measure("worst |prufer - matrix| disagreement", worst as f64, 1.0);
    report
}

/// Run every check in a fixed order (sorted by check name), with the
/// seeded randomness and grid sizes taken from `config`.
pub fn run_validation_suite(config: &SuiteConfig) -> Vec<ValidationReport> {
    let n = config.grid_n();
    let (loops_iso, loops_minmax, oracle_cases) = if config.quick {
        (12, 6, 10)
    } else {
        (100, 20, 50)
    };
    let short_loops = random_loops(config.seed, loops_iso, true);
    let eps_list: &[f64] = if config.quick {
        &[0.05, 0.025]
    } else {
        &[0.05, 0.025, 0.02, 0.0125]
    };

    let mut reports = vec![
        check_circle_closed_forms(n),
        check_minmax_bound(config.seed, loops_minmax, n),
        check_isoperimetric(&short_loops, n),
        check_gauss_bonnet(&short_loops, n),
        check_interval_models(),
        check_ks88_slopes(config.quick),
        check_end_to_end_slopes(n, config.quick),
        check_multiplicity_growth(5, eps_list, 2048),
        check_oracle_consistency(config.seed, oracle_cases),
    ];
    reports.sort_by(|a, b| a.name.cmp(&b.name));
    reports
}

/// True when no report failed (inconclusive entries do not fail a run).
pub fn suite_passed(reports: &[ValidationReport]) -> bool {
    reports.iter().all(|r| r.status != CheckStatus::Fail)
}
