//! Least-squares line fits shared by the counting and decay analyses.

/// Result of an ordinary least-squares fit y ≈ slope·x + intercept.
#[derive(Debug, Clone, Copy)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square of the fit residuals.
    pub rms_residual: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> LinearFit {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2, "need at least two points to fit a line");
    let n = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys.iter()) {
        sxx += (x - xm) * (x - xm);
        sxy += (x - xm) * (y - ym);
    }
    let slope = sxy / sxx;
    let intercept = ym - slope * xm;
    let mut ss = 0.0;
    for (x, y) in xs.iter().zip(ys.iter()) {
        let r = y - (slope * x + intercept);
        ss += r * r;
    }
    LinearFit {
        slope,
        intercept,
        rms_residual: (ss / n).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_recovered() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 1.5).collect();
        let f = linear_fit(&xs, &ys);
        assert!((f.slope - 3.0).abs() < 1e-13);
        assert!((f.intercept + 1.5).abs() < 1e-13);
        assert!(f.rms_residual < 1e-13);
    }
}
