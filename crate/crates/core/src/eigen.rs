//! Eigenvalue machinery for symmetric tridiagonal matrices, plain and
//! periodic (corner-coupled).
//!
//! Counting goes through the inertia of the shifted matrix: the number of
//! negative pivots of the LDLᵀ factorization of `A − λI` equals the number
//! of eigenvalues below `λ` (Sylvester's law). For the periodic matrix the
//! corner entries produce a single fill-in column, so the factorization
//! still runs in O(n). Individual eigenvalues are bracketed by bisection on
//! the count — exact for clustered and degenerate eigenvalues — and then
//! polished by Rayleigh-quotient inverse iteration, because the fill-in
//! chain of the unpivoted periodic factorization smears count transitions
//! over a window of order ε‖A‖ near (nearly) degenerate pairs.

fn guard(p: f64) -> f64 {
    if p.abs() < 1e-300 {
        if p >= 0.0 {
            1e-300
        } else {
            -1e-300
        }
    } else {
        p
    }
}

/// Number of eigenvalues of the symmetric tridiagonal matrix
/// (diagonal `d`, off-diagonal `e`, `e.len() == d.len() - 1`) strictly
/// below `x`.
pub fn tridiag_count_below(d: &[f64], e: &[f64], x: f64) -> usize {
    let n = d.len();
    debug_assert_eq!(e.len() + 1, n);
    let mut count = 0usize;
    let mut q = d[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        q = (d[i] - x) - e[i - 1] * e[i - 1] / guard(q);
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Number of eigenvalues strictly below `x` of the periodic symmetric
/// tridiagonal matrix with diagonal `d` and couplings `e[i]` between
/// nodes `i` and `i+1 mod n` (`e.len() == d.len()`, `e[n-1]` is the
/// corner entry).
pub fn periodic_count_below(d: &[f64], e: &[f64], x: f64) -> usize {
    let n = d.len();
    debug_assert_eq!(e.len(), n);
    debug_assert!(n >= 3);

    let mut count = 0usize;
    let mut p = d[0] - x;
    let mut g = e[n - 1]; // fill-in column: current entry (i, n-1)
    let mut last = d[n - 1] - x;

    for i in 0..n - 2 {
        if p < 0.0 {
            count += 1;
        }
        let ps = guard(p);
        let t = e[i];
        last -= g * g / ps;
        let raw = if i + 1 == n - 2 { e[n - 2] } else { 0.0 };
        g = raw - t * g / ps;
        p = (d[i + 1] - x) - t * t / ps;
    }
    if p < 0.0 {
        count += 1;
    }
    last -= g * g / guard(p);
    if last < 0.0 {
        count += 1;
    }
    count
}

fn gershgorin_plain(d: &[f64], e: &[f64]) -> (f64, f64) {
    let n = d.len();
    let mut lo = f64::MAX;
    let mut hi = f64::MIN;
    for i in 0..n {
        let left = if i > 0 { e[i - 1].abs() } else { 0.0 };
        let right = if i < n - 1 { e[i].abs() } else { 0.0 };
        lo = lo.min(d[i] - left - right);
        hi = hi.max(d[i] + left + right);
    }
    (lo - 1.0, hi + 1.0)
}

fn gershgorin_periodic(d: &[f64], e: &[f64]) -> (f64, f64) {
    let n = d.len();
    let mut lo = f64::MAX;
    let mut hi = f64::MIN;
    for i in 0..n {
        let r = e[(i + n - 1) % n].abs() + e[i].abs();
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    (lo - 1.0, hi + 1.0)
}

fn bisect_kth<F: Fn(f64) -> usize>(count: &F, k: usize, mut lo: f64, mut hi: f64) -> (f64, f64) {
    for _ in 0..140 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 8.0 * f64::EPSILON * mid.abs().max(1e-30) + 1e-305 {
            break;
        }
        if count(mid) <= k {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi == lo {
            break;
        }
    }
    (lo, hi)
}

/// Lowest `m` eigenvalues (ascending, multiplicities included) of the
/// plain symmetric tridiagonal matrix.
pub fn tridiag_lowest_eigenvalues(d: &[f64], e: &[f64], m: usize) -> Vec<f64> {
    let (lo, hi) = gershgorin_plain(d, e);
    let count = |x: f64| tridiag_count_below(d, e, x);
    (0..m.min(d.len()))
        .map(|k| {
            let (a, b) = bisect_kth(&count, k, lo, hi);
            0.5 * (a + b)
        })
        .collect()
}

/// Tridiagonal solve `(T)x = b` with partial pivoting.
/// `dl[i]` couples row i+1 to column i, `du[i]` row i to column i+1.
fn tridiag_solve_pp(dl: &[f64], dd: &[f64], du: &[f64], b: &[f64]) -> Vec<f64> {
    let n = dd.len();
    // working bands: main diagonal, first and second superdiagonal
    // (the second superdiagonal fills in when rows are swapped)
    let mut a = dd.to_vec();
    let mut c1: Vec<f64> = du.to_vec();
    c1.push(0.0);
    let mut c2 = vec![0.0; n];
    let mut rhs = b.to_vec();
    let mut sub: Vec<f64> = dl.to_vec();
    sub.push(0.0);

    for i in 0..n - 1 {
        let s = sub[i];
        if s.abs() > a[i].abs() {
            // swap row i with row i+1
            let (ra, rc1, rc2, rr) = (a[i], c1[i], c2[i], rhs[i]);
            a[i] = s;
            c1[i] = a[i + 1];
            c2[i] = if i + 1 < n - 1 { c1[i + 1] } else { 0.0 };
            rhs[i] = rhs[i + 1];
            a[i + 1] = rc1;
            if i + 1 < n - 1 {
                c1[i + 1] = rc2;
            }
            rhs[i + 1] = rr;
            // row i+1 now holds the old row i; its leading entry is ra
            let factor = ra / guard(a[i]);
            a[i + 1] -= factor * c1[i];
            if i + 1 < n - 1 {
                c1[i + 1] -= factor * c2[i];
            }
            rhs[i + 1] -= factor * rhs[i];
        } else {
            let factor = s / guard(a[i]);
            a[i + 1] -= factor * c1[i];
            if i + 1 < n - 1 {
                c1[i + 1] -= factor * c2[i];
            }
            rhs[i + 1] -= factor * rhs[i];
        }
    }

    // back substitution with two superdiagonals
    let mut x2 = vec![0.0; n];
    for i in (0..n).rev() {
        let mut v = rhs[i];
        if i + 1 < n {
            v -= c1[i] * x2[i + 1];
        }
        if i + 2 < n {
            v -= c2[i] * x2[i + 2];
        }
        x2[i] = v / guard(a[i]);
    }
    x2
}

/// y = A x for the periodic symmetric tridiagonal matrix.
fn periodic_matvec(d: &[f64], e: &[f64], x: &[f64], y: &mut [f64]) {
    let n = d.len();
    for i in 0..n {
        let prev = (i + n - 1) % n;
        let next = (i + 1) % n;
        y[i] = d[i] * x[i] + e[prev] * x[prev] + e[i] * x[next];
    }
}

fn kahan_dot(a: &[f64], b: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for (x, y) in a.iter().zip(b.iter()) {
        let term = x * y - comp;
        let t = sum + term;
        comp = (t - sum) - term;
        sum = t;
    }
    sum
}

/// Solve `(A − σ)x = b` for the periodic matrix via Woodbury: the corner
/// coupling c is the rank-two update (c/2)(wwᵀ − zzᵀ) of the open
/// tridiagonal, with w = e₀+e_{n−1}, z = e₀−e_{n−1}.
fn periodic_shifted_solve(d: &[f64], e: &[f64], sigma: f64, b: &[f64]) -> Option<Vec<f64>> {
    let n = d.len();
    let c = e[n - 1];
    let dd: Vec<f64> = d.iter().map(|&v| v - sigma).collect();
    let band: Vec<f64> = e[..n - 1].to_vec();

    if c == 0.0 {
        let x = tridiag_solve_pp(&band, &dd, &band, b);
        return if x.iter().all(|v| v.is_finite()) {
            Some(x)
        } else {
            None
        };
    }

    let mut w = vec![0.0; n];
    w[0] = 1.0;
    w[n - 1] = 1.0;
    let mut z = vec![0.0; n];
    z[0] = 1.0;
    z[n - 1] = -1.0;

    let xb = tridiag_solve_pp(&band, &dd, &band, b);
    let xw = tridiag_solve_pp(&band, &dd, &band, &w);
    let xz = tridiag_solve_pp(&band, &dd, &band, &z);
    if !(xb.iter().all(|v| v.is_finite())
        && xw.iter().all(|v| v.is_finite())
        && xz.iter().all(|v| v.is_finite()))
    {
        return None;
    }

    let half = 0.5 * c;
    // capacitance C = S⁻¹ + Uᵀ M⁻¹ U, S = diag(c/2, −c/2)
    let c00 = 1.0 / half + kahan_dot(&w, &xw);
    let c01 = kahan_dot(&w, &xz);
    let c11 = -1.0 / half + kahan_dot(&z, &xz);
    let det = c00 * c11 - c01 * c01;
    if !det.is_finite() || det == 0.0 {
        return None;
    }
    let rw = kahan_dot(&w, &xb);
    let rz = kahan_dot(&z, &xb);
    let aw = (c11 * rw - c01 * rz) / det;
    let az = (-c01 * rw + c00 * rz) / det;

    let x: Vec<f64> = (0..n).map(|i| xb[i] - aw * xw[i] - az * xz[i]).collect();
    if x.iter().all(|v| v.is_finite()) {
        Some(x)
    } else {
        None
    }
}

/// Rayleigh quotient xᵀAx / xᵀx with compensated dot products.
fn rayleigh(d: &[f64], e: &[f64], x: &[f64], work: &mut [f64]) -> f64 {
    periodic_matvec(d, e, x, work);
    kahan_dot(x, work) / kahan_dot(x, x)
}

fn polish_periodic(d: &[f64], e: &[f64], lo: f64, hi: f64, scale: f64, k: usize) -> f64 {
    let n = d.len();
    let mid = 0.5 * (lo + hi);
    // deterministic start vector: cheap LCG keyed on the eigenvalue index
    let mut state = 0x9e37_79b9_7f4a_7c15u64 ^ (k as u64).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    let mut x: Vec<f64> = (0..n)
        .map(|_| {
            state = state
                .wrapping_mul(6_364_136_223_846_793_005)
                .wrapping_add(1_442_695_040_888_963_407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        })
        .collect();
    let mut work = vec![0.0; n];
    let mut sigma = mid;
    let pad = (hi - lo).max(1e-9 * scale.max(1.0));
    let mut best = mid;

    for iter in 0..6 {
        let jitter = if iter == 0 {
            0.0
        } else {
            // nudge off an exact eigenvalue hit
            (iter as f64) * 1e-14 * scale.max(1.0)
        };
        match periodic_shifted_solve(d, e, sigma + jitter, &x) {
            Some(y) => {
                let norm = kahan_dot(&y, &y).sqrt();
                if !(norm.is_finite() && norm > 0.0) {
                    break;
                }
                for (xi, yi) in x.iter_mut().zip(y.iter()) {
                    *xi = yi / norm;
                }
                let rho = rayleigh(d, e, &x, &mut work);
                if !rho.is_finite() {
                    break;
                }
                if rho >= lo - pad && rho <= hi + pad {
                    best = rho;
                }
                if (rho - sigma).abs() <= 4.0 * f64::EPSILON * scale.max(rho.abs()) {
                    break;
                }
                sigma = rho.clamp(lo - pad, hi + pad);
            }
            None => break,
        }
    }
    best
}

/// Lowest `m` eigenvalues (ascending, multiplicities included) of the
/// periodic symmetric tridiagonal matrix: inertia bisection for brackets,
/// inverse-iteration polish for the final values.
pub fn periodic_lowest_eigenvalues(d: &[f64], e: &[f64], m: usize) -> Vec<f64> {
    let (lo, hi) = gershgorin_periodic(d, e);
    let scale = hi.abs().max(lo.abs());
    let count = |x: f64| periodic_count_below(d, e, x);
    let mut out: Vec<f64> = (0..m.min(d.len()))
        .map(|k| {
            let (a, b) = bisect_kth(&count, k, lo, hi);
            polish_periodic(d, e, a, b, scale, k)
        })
        .collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}
