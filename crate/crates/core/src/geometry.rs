//! Sparse delay-Doppler channel geometry and the scaling-law algebra that ties
//! signaling parameters `(T, W, P)` to the coherence dimension `N_c`.
//!
//! Diversity grows sub-linearly with the signal space:
//! `D_T = (T W_d)^δ1`, `D_W = (T_m W)^δ2`, and the coherence dimension is
//! `N_c = (T / D_T) (W / D_W) = N / D`. All quantities here are real-valued;
//! [`ChannelGeometry::quantize`] produces the integer block structure needed by
//! simulation.

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};

/// Spread product above which the diagonal (underspread) abstraction is
/// considered loose and a warning is issued.
pub const UNDERSPREAD_WARN: f64 = 0.01;

/// Physical channel description.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    /// Delay spread `T_m`, seconds.
    pub t_m: f64,
    /// Doppler spread `W_d`, Hz.
    pub w_d: f64,
    /// Doppler sparsity exponent `δ1 ∈ [0, 1]`.
    pub delta1: f64,
    /// Delay sparsity exponent `δ2 ∈ [0, 1]`.
    pub delta2: f64,
}

impl ChannelParams {
    /// Validated constructor. Logs a warning when the spread product exceeds
    /// [`UNDERSPREAD_WARN`].
    pub fn new(t_m: f64, w_d: f64, delta1: f64, delta2: f64) -> Result<Self> {
        let ch = Self {
            t_m,
            w_d,
            delta1,
            delta2,
        };
        ch.validate()?;
        if let Some(msg) = ch.underspread_warning() {
            log::warn!("{msg}");
        }
        Ok(ch)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("t_m", self.t_m)?;
        require_positive("w_d", self.w_d)?;
        let spread = self.spread_product();
        if spread >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "channel is not underspread: t_m*w_d = {spread} >= 1"
            )));
        }
        for (name, d) in [("delta1", self.delta1), ("delta2", self.delta2)] {
            if !(0.0..=1.0).contains(&d) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must lie in [0, 1], got {d}"
                )));
            }
        }
        Ok(())
    }

    /// `T_m W_d`.
    pub fn spread_product(&self) -> f64 {
        self.t_m * self.w_d
    }

    pub fn underspread_warning(&self) -> Option<String> {
        let spread = self.spread_product();
        (spread > UNDERSPREAD_WARN).then(|| {
            format!("weakly underspread channel: t_m*w_d = {spread} > {UNDERSPREAD_WARN}")
        })
    }

    /// `c = (T_m^δ2 W_d^δ1)^{1/(1-δ1)}`, the duration scale of the locus.
    fn duration_scale_ln(&self) -> Result<f64> {
        let one_minus = 1.0 - self.delta1;
        if one_minus <= 0.0 {
            return Err(Error::Degenerate(
                "delta1 = 1 (rich Doppler): coherence does not grow with duration".into(),
            ));
        }
        Ok((self.delta2 * self.t_m.ln() + self.delta1 * self.w_d.ln()) / one_minus)
    }
}

/// Transmit-side knobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalingParams {
    /// Signaling duration `T`, seconds.
    pub t: f64,
    /// Bandwidth `W`, Hz.
    pub w: f64,
    /// Transmit power `P` (unit noise spectral density).
    pub p: f64,
}

impl SignalingParams {
    pub fn new(t: f64, w: f64, p: f64) -> Result<Self> {
        let sig = Self { t, w, p };
        sig.validate()?;
        Ok(sig)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("t", self.t)?;
        require_positive("w", self.w)?;
        require_positive("p", self.p)
    }

    /// `SNR = P / W`.
    pub fn snr(&self) -> f64 {
        self.p / self.w
    }
}

/// Scaling law `N_c = k / SNR^μ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingLaw {
    pub k: f64,
    pub mu: f64,
}

impl ScalingLaw {
    pub fn new(k: f64, mu: f64) -> Result<Self> {
        let law = Self { k, mu };
        law.validate()?;
        Ok(law)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("k", self.k)?;
        require_positive("mu", self.mu)
    }
}

/// Quantities derived from a channel and a signaling choice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelGeometry {
    /// Doppler diversity `D_T`.
    pub d_t: f64,
    /// Delay diversity `D_W`.
    pub d_w: f64,
    /// Total degrees of freedom `D = D_T D_W`.
    pub d: f64,
    /// Coherence time, seconds.
    pub t_coh: f64,
    /// Coherence bandwidth, Hz.
    pub w_coh: f64,
    /// Time-frequency coherence dimension `N_c = T_coh W_coh`.
    pub n_c: f64,
    /// Signal space dimension `N = T W`.
    pub n: f64,
    pub snr: f64,
    /// Rich-multipath coherence dimension `1 / (T_m W_d)`.
    pub n_c_min: f64,
    /// Resolvable-bin ceiling `⌈T W_d⌉ ⌈T_m W⌉`. Diagnostic only.
    pub d_max: f64,
}

/// Integer block structure used by Monte Carlo simulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantizedGeometry {
    /// Number of coherence subspaces, at least 1.
    pub d: u64,
    /// Coherence dimension, at least 2 (one pilot plus one data dimension).
    /// Integral-valued but kept as `f64` since it can exceed `u64::MAX`.
    pub n_c: f64,
}

impl ChannelGeometry {
    /// Whether `N_c` reaches the rich-multipath floor. Holds whenever at least
    /// one delay and one Doppler bin is resolvable (`T W_d ≥ 1`, `T_m W ≥ 1`).
    pub fn meets_coherence_floor(&self) -> bool {
        self.n_c >= self.n_c_min * (1.0 - 1e-12)
    }

    /// `D ← max(1, round(D))`, `N_c ← max(2, round(N / D))`.
    pub fn quantize(&self) -> QuantizedGeometry {
        let d = self.d.round().max(1.0);
        QuantizedGeometry {
            d: d as u64,
            n_c: (self.n / d).round().max(2.0),
        }
    }
}

/// Rounds a real coherence dimension to the integer block length used in
/// simulation: `max(2, round(n_c))`.
pub fn quantize_coherence(n_c: f64) -> f64 {
    n_c.round().max(2.0)
}

pub fn derive_geometry(ch: &ChannelParams, sig: &SignalingParams) -> Result<ChannelGeometry> {
    ch.validate()?;
    sig.validate()?;
    let d_t = (sig.t * ch.w_d).powf(ch.delta1);
    let d_w = (ch.t_m * sig.w).powf(ch.delta2);
    let t_coh = sig.t / d_t;
    let w_coh = sig.w / d_w;
    Ok(ChannelGeometry {
        d_t,
        d_w,
        d: d_t * d_w,
        t_coh,
        w_coh,
        n_c: t_coh * w_coh,
        n: sig.t * sig.w,
        snr: sig.snr(),
        n_c_min: 1.0 / ch.spread_product(),
        d_max: (sig.t * ch.w_d).ceil() * (ch.t_m * sig.w).ceil(),
    })
}

/// `k / snr^μ`.
pub fn coherence_from_scaling(law: &ScalingLaw, snr: f64) -> Result<f64> {
    law.validate()?;
    require_positive("snr", snr)?;
    Ok(law.k * snr.powf(-law.mu))
}

/// Signaling duration that puts `(T, W, P)` on the locus where
/// `N_c = k / SNR^μ` holds exactly.
pub fn duration_for_mu(ch: &ChannelParams, w: f64, p: f64, law: &ScalingLaw) -> Result<f64> {
    ch.validate()?;
    law.validate()?;
    require_positive("w", w)?;
    require_positive("p", p)?;
    let ln_c = ch.duration_scale_ln()?;
    let one_minus = 1.0 - ch.delta1;
    let ln_t = ln_c
        + (law.k.ln() + (law.mu - 1.0 + ch.delta2) * w.ln() - law.mu * p.ln()) / one_minus;
    let t = ln_t.exp();
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Degenerate(format!(
            "required duration exp({ln_t}) is not representable"
        )));
    }
    Ok(t)
}

/// Effective scaling exponent of an operating point: the `μ` for which
/// `N_c = k / SNR^μ` at the given `(T, W, P)`.
///
/// With `k = 1` this is the usual locus inversion; other `k` shift the result
/// by `-ln(k) / ln(W/P)`.
pub fn effective_mu(ch: &ChannelParams, sig: &SignalingParams, k: f64) -> Result<f64> {
    ch.validate()?;
    sig.validate()?;
    require_positive("k", k)?;
    let ln_c = ch.duration_scale_ln()?;
    let ln_wp = (sig.w / sig.p).ln();
    if ln_wp == 0.0 {
        return Err(Error::Degenerate("w = p makes ln(W/P) vanish".into()));
    }
    let num = (1.0 - ch.delta1) * (sig.t.ln() - ln_c) + (1.0 - ch.delta2) * sig.p.ln();
    Ok(num / ln_wp + (1.0 - ch.delta2) - k.ln() / ln_wp)
}

/// Coherence-time growth needed for second-order optimality, sparse versus rich.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TcohRequirement {
    /// `W^{2+δ2}`.
    pub sparse: f64,
    /// `W^3`.
    pub rich: f64,
}

impl TcohRequirement {
    /// `W^{1-δ2}`.
    pub fn relaxation(&self) -> f64 {
        self.rich / self.sparse
    }
}

pub fn tcoh_required(w: f64, delta2: f64) -> Result<TcohRequirement> {
    require_positive("w", w)?;
    if !(0.0..=1.0).contains(&delta2) {
        return Err(Error::InvalidParameter(format!(
            "delta2 must lie in [0, 1], got {delta2}"
        )));
    }
    Ok(TcohRequirement {
        sparse: w.powf(2.0 + delta2),
        rich: w.powi(3),
    })
}
