use serde::Serialize;

use crate::error::{Error, Result};

/// Coefficients of `value ≈ c1·snr + c2·snr²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticFit {
    pub c1: f64,
    pub c2: f64,
}

/// Least-squares fit of `value ≈ c1·snr + c2·snr²` (no intercept).
///
/// Solves the 2×2 normal equations in closed form after rescaling `snr` by its
/// maximum, which keeps the Gram matrix well scaled for tiny SNR grids.
pub fn fit_linear_in_snr(points: &[(f64, f64)]) -> Result<QuadraticFit> {
    if points.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(&(s, v)) = points
        .iter()
        .find(|(s, v)| !(s.is_finite() && *s > 0.0) || !v.is_finite())
    {
        return Err(Error::InvalidParameter(format!(
            "snr must be finite and > 0 with finite value, got ({s}, {v})"
        )));
    }
    let mut snrs: Vec<f64> = points.iter().map(|p| p.0).collect();
    snrs.sort_by(f64::total_cmp);
    snrs.dedup();
    if snrs.len() == 1 {
        return Err(Error::RankDeficient("all snr values are equal".into()));
    }
    if snrs.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "need at least 3 distinct snr values, got {}",
            snrs.len()
        )));
    }
    let scale = snrs[snrs.len() - 1];

    let (mut s11, mut s12, mut s22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(snr, value) in points {
        let u = snr / scale;
        let u2 = u * u;
        s11 += u2;
        s12 += u2 * u;
        s22 += u2 * u2;
        b1 += u * value;
        b2 += u2 * value;
    }
    let det = s11 * s22 - s12 * s12;
    if det <= s11 * s22 * 1e-14 {
        return Err(Error::RankDeficient(format!(
            "normal equations are singular (det = {det:e})"
        )));
    }
    let a = (s22 * b1 - s12 * b2) / det;
    let b = (s11 * b2 - s12 * b1) / det;
    Ok(QuadraticFit {
        c1: a / scale,
        c2: b / (scale * scale),
    })
}
