//! Ergodic capacity per dimension, in bits.
//!
//! Coherent capacity with uniform power is `E[log2(1 + SNR·X)]`, `X ~ Exp(1)`,
//! which has the closed form `log2(e)·e^{1/SNR}·E1(1/SNR)`. The training
//! scheme loses one dimension per coherence subspace and sees the effective
//! SNR `K*` on the rest.

use serde::Serialize;

use crate::error::{require_positive, Error, Result};
use crate::geometry::{effective_mu, quantize_coherence, ChannelParams, SignalingParams};
use crate::numerics::{
    fit_linear_in_snr, logspace, parallel_mean, sample_exponential_unit, scaled_exp_integral_e1,
    RandomStream,
};
use crate::reliability::{effective_snr, optimal_training_fraction};
use crate::LOG2_E;

/// Monte Carlo samples per SNR point in the coefficient fit.
pub const DEFAULT_FIT_SAMPLES: u64 = 200_000;

/// SNR grid for the coefficient fit: 8 log-spaced points in `[1e-10, 1e-7]`.
///
/// Corrections to the two-term expansion decay like `SNR^{(μ-1)/2}`, so the
/// fitted coefficients only approach their limits this deep in the low-SNR
/// regime.
pub fn default_fit_snr_grid() -> Vec<f64> {
    logspace(1e-10, 1e-7, 8)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    MonteCarlo,
    LowerBound,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::MonteCarlo => "monte_carlo",
            Method::LowerBound => "lower_bound",
        }
    }
}

/// Capacity value in bits per dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapacityEstimate {
    pub value: f64,
    /// Zero for closed forms.
    pub std_error: f64,
    pub n_samples: u64,
    pub method: Method,
    /// False when a bound was clamped because the SNR left its regime.
    pub in_regime: bool,
}

impl CapacityEstimate {
    fn closed_form(value: f64, method: Method) -> Self {
        Self {
            value,
            std_error: 0.0,
            n_samples: 0,
            method,
            in_regime: true,
        }
    }
}

/// `E[log2(1 + snr·X)]` with `X ~ Exp(1)`, exactly.
pub fn coherent_capacity_exact(snr: f64) -> Result<CapacityEstimate> {
    require_positive("snr", snr)?;
    let value = LOG2_E * scaled_exp_integral_e1(1.0 / snr)?;
    Ok(CapacityEstimate::closed_form(value, Method::Exact))
}

fn mc_log2_1p(gain: f64, n_samples: u64, stream: &RandomStream) -> (f64, f64) {
    let est = parallel_mean(n_samples, |i| {
        LOG2_E * (gain * sample_exponential_unit(stream, i)).ln_1p()
    });
    (est.mean, est.std_error)
}

fn check_samples(n_samples: u64) -> Result<()> {
    if n_samples == 0 {
        Err(Error::InvalidParameter("n_samples must be >= 1".into()))
    } else {
        Ok(())
    }
}

/// Monte Carlo estimate of the coherent capacity.
pub fn coherent_capacity_mc(
    snr: f64,
    n_samples: u64,
    stream: &RandomStream,
) -> Result<CapacityEstimate> {
    require_positive("snr", snr)?;
    check_samples(n_samples)?;
    let (value, std_error) = mc_log2_1p(snr, n_samples, stream);
    Ok(CapacityEstimate {
        value,
        std_error,
        n_samples,
        method: Method::MonteCarlo,
        in_regime: true,
    })
}

/// Low-SNR lower bound `log2(e)·(snr - snr²)`, clamped at zero.
pub fn coherent_lower_bound(snr: f64) -> Result<CapacityEstimate> {
    require_positive("snr", snr)?;
    let raw = LOG2_E * (snr - snr * snr);
    Ok(CapacityEstimate {
        in_regime: snr < 1.0,
        ..CapacityEstimate::closed_form(raw.max(0.0), Method::LowerBound)
    })
}

fn check_block(n_c: f64) -> Result<()> {
    if n_c.is_finite() && n_c >= 2.0 && n_c.fract() == 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "n_c must be an integer >= 2, got {n_c}"
        )))
    }
}

/// Mutual information per dimension of the training scheme, Monte Carlo.
///
/// `((N_c-1)/N_c)·E[log2(1 + K·X)]` with `K` the effective SNR for pilot
/// fraction `eta`: the worst-case-noise lower bound on what the scheme achieves.
pub fn training_mutual_information(
    n_c: f64,
    snr: f64,
    eta: f64,
    n_samples: u64,
    stream: &RandomStream,
) -> Result<CapacityEstimate> {
    check_block(n_c)?;
    check_samples(n_samples)?;
    let k = effective_snr(eta, n_c, snr)?;
    let prelog = (n_c - 1.0) / n_c;
    let (mean, se) = mc_log2_1p(k, n_samples, stream);
    Ok(CapacityEstimate {
        value: prelog * mean,
        std_error: prelog * se,
        n_samples,
        method: Method::MonteCarlo,
        in_regime: true,
    })
}

/// Closed-form counterpart of [`training_mutual_information`].
pub fn training_mutual_information_exact(n_c: f64, snr: f64, eta: f64) -> Result<CapacityEstimate> {
    check_block(n_c)?;
    let k = effective_snr(eta, n_c, snr)?;
    let inner = coherent_capacity_exact(k)?;
    Ok(CapacityEstimate::closed_form(
        (n_c - 1.0) / n_c * inner.value,
        Method::Exact,
    ))
}

/// Low-SNR expansion coefficients of the training scheme at one duration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientFit {
    /// Coefficient of `snr` (bits); tends to `log2(e)` under first-order optimality.
    pub c1: f64,
    /// Coefficient of `snr²` (bits); tends to `-log2(e)` under second-order optimality.
    pub c2: f64,
    pub snr_grid: Vec<f64>,
    pub t: f64,
    pub mu_eff: f64,
}

/// Fits `I_tr ≈ c1·snr + c2·snr²` for each signaling duration in `t_grid`.
///
/// Each duration fixes an effective exponent `μ_eff` for the operating point
/// `(t, w, p)`. Along the SNR grid the coherence dimension then follows that
/// law, `N_c = max(2, round(snr^{-μ_eff}))`, the pilot fraction is set to its
/// optimum, and the mutual information is estimated by Monte Carlo. Every SNR
/// point reuses the same exponential draws, which keeps the fit smooth.
pub fn fit_capacity_coefficients(
    ch: &ChannelParams,
    w: f64,
    p: f64,
    t_grid: &[f64],
    snr_grid: &[f64],
    n_samples: u64,
    stream: &RandomStream,
) -> Result<Vec<CoefficientFit>> {
    if t_grid.is_empty() || snr_grid.is_empty() {
        return Err(Error::InvalidParameter("t_grid and snr_grid must be non-empty".into()));
    }
    if let Some(&s) = snr_grid.iter().find(|&&s| !(s > 0.0 && s < 1.0)) {
        return Err(Error::InvalidParameter(format!(
            "snr grid must lie in (0, 1), got {s}"
        )));
    }
    t_grid
        .iter()
        .map(|&t| {
            let sig = SignalingParams::new(t, w, p)?;
            let mu_eff = effective_mu(ch, &sig, 1.0)?;
            let points = snr_grid
                .iter()
                .map(|&snr| {
                    let n_c = quantize_coherence(snr.powf(-mu_eff));
                    let eta = optimal_training_fraction(n_c, n_c * snr)?;
                    let est = training_mutual_information(n_c, snr, eta, n_samples, stream)?;
                    Ok((snr, est.value))
                })
                .collect::<Result<Vec<_>>>()?;
            let fit = fit_linear_in_snr(&points)?;
            Ok(CoefficientFit {
                c1: fit.c1,
                c2: fit.c2,
                snr_grid: snr_grid.to_vec(),
                t,
                mu_eff,
            })
        })
        .collect()
}
