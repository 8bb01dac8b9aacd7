//! Observed orders and Richardson extrapolation for refinement families.

use crate::error::{Error, Result};
use crate::linalg::find_root_bracketed;

/// Least-squares slope of `ln e` against `ln h`.
pub fn fit_order(hs: &[f64], errs: &[f64]) -> Result<f64> {
    if hs.len() != errs.len() {
        return Err(Error::DimensionMismatch("h vs error lengths".into()));
    }
    if hs.len() < 2 {
        return Err(Error::InvalidInput("≥ 2 levels required".into()));
    }
    if hs.iter().chain(errs).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidInput("orders need positive finite h and errors".into()));
    }
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidInput("levels must have distinct h".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

/// Order from successive differences `|v_i - v_{i+1}|` (attributed to `h_i`).
/// Needs three or more levels.
pub fn order_from_differences(hs: &[f64], vals: &[f64]) -> Result<f64> {
    if hs.len() != vals.len() || hs.len() < 3 {
        return Err(Error::InvalidInput("≥ 3 levels required for a self-convergence order".into()));
    }
    let diffs: Vec<f64> = vals.windows(2).map(|w| (w[0] - w[1]).abs()).collect();
    fit_order(&hs[..hs.len() - 1], &diffs)
}

/// Three-level Richardson extrapolation under `v(h) = v* + C h^p`, for
/// arbitrary mesh ratios. Returns `(v*, p)`.
pub fn richardson3(hs: [f64; 3], vals: [f64; 3]) -> Result<(f64, f64)> {
    let [h1, h2, h3] = hs;
    let [v1, v2, v3] = vals;
    if !(h1 > h2 && h2 > h3 && h3 > 0.0) {
        return Err(Error::InvalidInput("levels must be strictly refining".into()));
    }
    let d12 = v1 - v2;
    let d23 = v2 - v3;
    if d23 == 0.0 || d12 == 0.0 || d12.signum() != d23.signum() {
        return Err(Error::InvalidInput("non-monotone sequence; no asymptotic regime".into()));
    }
    let q = d12 / d23;
    let g = |p: f64| (h1.powf(p) - h2.powf(p)) / (h2.powf(p) - h3.powf(p)) - q;
    let p = find_root_bracketed(g, 0.05, 12.0, 1e-13)?;
    let c = d23 / (h2.powf(p) - h3.powf(p));
    Ok((v3 - c * h3.powf(p), p))
}

/// A value with an a posteriori error estimate from two mesh levels.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    /// Fine-level value with `|v_fine - v_coarse|` as its error bar.
    pub fn from_levels(coarse: f64, fine: f64) -> Self {
        Self { value: fine, error: (fine - coarse).abs() }
    }

    /// `self < other` with a gap larger than `factor` times the combined error.
    pub fn below_with_margin(&self, other: &Estimate, factor: f64) -> bool {
        other.value - self.value > factor * (self.error + other.error)
    }

    pub fn agrees_with(&self, other: &Estimate, factor: f64) -> bool {
        (self.value - other.value).abs() <= factor * (self.error + other.error)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let hs = [0.5, 0.25, 0.125];
        let vals = hs.map(|h: f64| 3.0 + 2.0 * h * h);
        let (v, p) = richardson3(hs, vals).unwrap();
        assert!((v - 3.0).abs() < 1e-12 && (p - 2.0).abs() < 1e-10);
        let errs = vals.map(|x| x - 3.0);
        assert!((fit_order(&hs, &errs).unwrap() - 2.0).abs() < 1e-12);
        assert!((order_from_differences(&hs, &vals).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn uneven_ratios() {
        let hs = [1.0 / 4.0, 1.0 / 6.0, 1.0 / 8.0];
        let vals = hs.map(|h: f64| 1.0 - 0.7 * h.powf(1.5));
        let (v, p) = richardson3(hs, vals).unwrap();
        assert!((v - 1.0).abs() < 1e-10 && (p - 1.5).abs() < 1e-8);
    }

    #[test]
    fn single_level_rejected() {
        let e = fit_order(&[0.1], &[1.0]).unwrap_err();
        assert!(e.to_string().contains("≥ 2 levels required"));
    }
}
