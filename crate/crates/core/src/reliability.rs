//! Random-coding error exponents of the training-based scheme.
//!
//! Each coherence subspace of dimension `N_c` spends one dimension on a pilot
//! carrying a fraction `η` of the subspace energy `N_c·SNR`; the remaining
//! `N_c - 1` dimensions carry data decoded against the MMSE channel estimate.
//! Treating the estimation error as Gaussian noise yields an effective SNR
//! `K*`, and the exponent depends on the operating point only through
//!
//! ```text
//! k1 = (N_c - 1) K* (1 - K*^{1-ε})
//! ```
//!
//! All rates and exponents are in nats per signal-space dimension.

use serde::Serialize;

use crate::error::{require_positive, Error, Result};
use crate::geometry::quantize_coherence;
use crate::numerics::maximize_unimodal;

/// Default exponent regularizer `ε`.
pub const DEFAULT_EPSILON: f64 = 0.01;

/// Points in the coarse μ scan that brackets the golden-section refinement.
const MU_SCAN_POINTS: usize = 200;

/// Energy fraction that maximizes the effective SNR, with `nsnr = N_c·SNR`.
///
/// Evaluated as `1 / (1 + sqrt(1 + (N_c-2)·nsnr / (nsnr + N_c - 1)))`, which
/// is the closed form rearranged to stay finite at `N_c = 2` (where it
/// gives 1/2) and accurate near it.
pub fn optimal_training_fraction(n_c: f64, nsnr: f64) -> Result<f64> {
    if !(n_c.is_finite() && n_c > 1.0) {
        return Err(Error::InvalidParameter(format!("n_c must be > 1, got {n_c}")));
    }
    require_positive("nsnr", nsnr)?;
    let ratio = (n_c - 2.0) * nsnr / (nsnr + n_c - 1.0);
    Ok(1.0 / (1.0 + (1.0 + ratio).sqrt()))
}

/// Post-estimation SNR of a data symbol when a fraction `eta` of the subspace
/// energy goes to the pilot.
pub fn effective_snr(eta: f64, n_c: f64, snr: f64) -> Result<f64> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidParameter(format!("eta must lie in (0, 1), got {eta}")));
    }
    if !(n_c.is_finite() && n_c > 1.0) {
        return Err(Error::InvalidParameter(format!("n_c must be > 1, got {n_c}")));
    }
    require_positive("snr", snr)?;
    let nsnr = n_c * snr;
    Ok(eta * (1.0 - eta) * nsnr * nsnr
        / ((n_c - 1.0) * (1.0 + eta * nsnr) + (1.0 - eta) * nsnr))
}

/// Pilot energy split and the resulting estimation quality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrainingDesign {
    pub eta: f64,
    pub epsilon: f64,
    /// Effective SNR `K*`.
    pub k_eff: f64,
    /// MMSE error variance `1 / (1 + η N_c SNR)`.
    pub mse: f64,
}

impl TrainingDesign {
    /// Design with the pilot fraction fixed at `eta`.
    pub fn with_fraction(eta: f64, n_c: f64, snr: f64, epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        let k_eff = effective_snr(eta, n_c, snr)?;
        Ok(Self {
            eta,
            epsilon,
            k_eff,
            mse: 1.0 / (1.0 + eta * n_c * snr),
        })
    }

    /// Design at the optimal pilot fraction.
    pub fn optimal(n_c: f64, snr: f64, epsilon: f64) -> Result<Self> {
        require_positive("snr", snr)?;
        let eta = optimal_training_fraction(n_c, n_c * snr)?;
        Self::with_fraction(eta, n_c, snr, epsilon)
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )))
    }
}

/// `x (1 - x^{1-ε})`: low-SNR per-symbol gain with the second-order penalty.
fn regularized_gain(x: f64, epsilon: f64) -> f64 {
    x * (1.0 - x.powf(1.0 - epsilon))
}

/// Largest SNR for which [`regularized_gain`] is still increasing,
/// `(2 - ε)^{-1/(1-ε)}`. Beyond it the low-SNR expansion stops being
/// meaningful and the perfect-CSI exponent is not evaluated.
pub fn csi_snr_limit(epsilon: f64) -> f64 {
    (2.0 - epsilon).powf(-1.0 / (1.0 - epsilon))
}

/// Critical and maximal rates for a given `k1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentRates {
    pub k1: f64,
    /// Below this rate the Gallager parameter saturates at `ρ* = 1`.
    pub r_cr: f64,
    /// Largest rate with a positive exponent.
    pub r_max: f64,
}

impl ExponentRates {
    fn from_k1(k1: f64, n_c: f64) -> Self {
        Self {
            k1,
            r_cr: k1 / (2.0 * n_c) / (2.0 + k1),
            r_max: k1 / n_c,
        }
    }
}

fn check_coherence(n_c: f64) -> Result<()> {
    if n_c.is_finite() && n_c >= 2.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("n_c must be >= 2, got {n_c}")))
    }
}

/// `k1`, `R_cr` and `R_max` of the training scheme at `η = η*`.
pub fn exponent_rates(n_c: f64, snr: f64, epsilon: f64) -> Result<ExponentRates> {
    check_coherence(n_c)?;
    let design = TrainingDesign::optimal(n_c, snr, epsilon)?;
    if design.k_eff >= 1.0 {
        return Err(Error::ValidityRegion(format!(
            "effective SNR K* = {} >= 1; low-SNR exponent does not apply",
            design.k_eff
        )));
    }
    let k1 = (n_c - 1.0) * regularized_gain(design.k_eff, epsilon);
    Ok(ExponentRates::from_k1(k1, n_c))
}

/// Maximizer over `ρ ∈ [0, 1]` of `(1/N_c) ln(1 + k1 ρ/(1+ρ)) - ρ R`.
///
/// Returns 1 below the critical rate and the clamped positive root of the
/// stationarity quadratic `(1+k1)ρ² + (2+k1)ρ + 1 - k1/(N_c R) = 0` otherwise.
pub fn optimal_rho(k1: f64, n_c: f64, rate: f64) -> f64 {
    let rates = ExponentRates::from_k1(k1, n_c);
    if rate < rates.r_cr {
        return 1.0;
    }
    if rate >= rates.r_max {
        return 0.0;
    }
    let a = 1.0 + k1;
    let b = 2.0 + k1;
    let c = 1.0 - k1 / (n_c * rate);
    // Root written as -2c / (b + sqrt(b² - 4ac)) to avoid cancellation near R_max.
    let rho = -2.0 * c / (b + (b * b - 4.0 * a * c).sqrt());
    rho.clamp(0.0, 1.0)
}

/// Where a rate sits relative to `R_cr` and `R_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    BelowCritical,
    AboveCritical,
    Zero,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::BelowCritical => "below_critical",
            Regime::AboveCritical => "above_critical",
            Regime::Zero => "zero",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentResult {
    pub rate: f64,
    pub exponent: f64,
    pub rho_star: f64,
    pub r_cr: f64,
    pub r_max: f64,
    pub k1: f64,
    pub regime: Regime,
}

fn exponent_from_k1(k1: f64, n_c: f64, rate: f64) -> ExponentResult {
    let rates = ExponentRates::from_k1(k1, n_c);
    let (exponent, rho_star, regime) = if rate > rates.r_max {
        (0.0, 0.0, Regime::Zero)
    } else if rate < rates.r_cr {
        ((0.5 * k1).ln_1p() / n_c - rate, 1.0, Regime::BelowCritical)
    } else {
        let rho = optimal_rho(k1, n_c, rate);
        let e = (k1 * rho / (1.0 + rho)).ln_1p() / n_c - rho * rate;
        (e.max(0.0), rho, Regime::AboveCritical)
    };
    ExponentResult {
        rate,
        exponent,
        rho_star,
        r_cr: rates.r_cr,
        r_max: rates.r_max,
        k1,
        regime,
    }
}

fn check_rate(rate: f64) -> Result<()> {
    if rate.is_finite() && rate >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("rate must be finite and >= 0, got {rate}")))
    }
}

/// Random-coding exponent of the training scheme, `o(1)` terms dropped.
pub fn random_coding_exponent_tr(
    n_c: f64,
    snr: f64,
    rate: f64,
    epsilon: f64,
) -> Result<ExponentResult> {
    check_rate(rate)?;
    let rates = exponent_rates(n_c, snr, epsilon)?;
    Ok(exponent_from_k1(rates.k1, n_c, rate))
}

/// Exponent with perfect receiver CSI: no pilot, every dimension carries data
/// at the full SNR, i.e. `k1 = N_c · SNR (1 - SNR^{1-ε})`.
///
/// This is a derived approximation used as the reference curve; it upper
/// bounds the training exponent and decreases with `N_c`.
pub fn perfect_csi_exponent(
    n_c: f64,
    snr: f64,
    rate: f64,
    epsilon: f64,
) -> Result<ExponentResult> {
    check_rate(rate)?;
    check_coherence(n_c)?;
    check_epsilon(epsilon)?;
    require_positive("snr", snr)?;
    let limit = csi_snr_limit(epsilon);
    if snr >= limit {
        return Err(Error::ValidityRegion(format!(
            "snr = {snr} >= {limit}; perfect-CSI low-SNR exponent does not apply"
        )));
    }
    Ok(exponent_from_k1(n_c * regularized_gain(snr, epsilon), n_c, rate))
}

/// `exp(-N E)`, the random-coding bound on the block error probability.
pub fn error_probability_bound(n: f64, exponent: f64) -> f64 {
    (-n * exponent).exp().min(1.0)
}

/// Best scaling exponent for a rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MuOptimum {
    pub mu_opt: f64,
    /// Exponent at the quantized coherence dimension.
    pub exponent: f64,
    /// `max(2, round(k / snr^μ_opt))`.
    pub n_c: f64,
}

/// Scaling exponent `μ` in `mu_range` that maximizes the training exponent
/// with `N_c = k / SNR^μ`.
///
/// The search runs on the continuous (unquantized, floored at 2) coherence
/// dimension: a [`MU_SCAN_POINTS`]-point scan locates the bracket, then a
/// golden-section search refines inside it. `signal_dims` caps `N_c ≤ N`
/// (at least one coherence subspace); pass `f64::INFINITY` for no cap.
pub fn optimal_mu(
    signal_dims: f64,
    rate: f64,
    snr: f64,
    k: f64,
    mu_range: (f64, f64),
    epsilon: f64,
) -> Result<MuOptimum> {
    check_rate(rate)?;
    check_epsilon(epsilon)?;
    require_positive("k", k)?;
    require_positive("snr", snr)?;
    if snr >= 1.0 {
        return Err(Error::ValidityRegion(format!(
            "snr = {snr} >= 1; the scaling law needs a low-SNR operating point"
        )));
    }
    if !(signal_dims >= 2.0) {
        return Err(Error::InvalidParameter(format!(
            "signal_dims must be >= 2, got {signal_dims}"
        )));
    }
    let (lo, mut hi) = mu_range;
    if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi) {
        return Err(Error::InvalidParameter(format!(
            "mu range ({lo}, {hi}) must satisfy 0 < lo < hi"
        )));
    }
    let ln_inv_snr = -snr.ln();
    if signal_dims.is_finite() {
        hi = hi.min((signal_dims / k).ln() / ln_inv_snr);
    }
    if hi <= lo {
        return Err(Error::EmptyRegion(format!(
            "no mu in ({lo}, {}) keeps N_c <= N = {signal_dims}",
            mu_range.1
        )));
    }

    let coherence = |mu: f64| (k * (mu * ln_inv_snr).exp()).max(2.0);
    let objective = |mu: f64| -> Result<f64> {
        Ok(random_coding_exponent_tr(coherence(mu), snr, rate, epsilon)?.exponent)
    };

    let step = (hi - lo) / (MU_SCAN_POINTS - 1) as f64;
    let mut best = (0usize, f64::NEG_INFINITY);
    for i in 0..MU_SCAN_POINTS {
        let e = objective(lo + step * i as f64)?;
        if e > best.1 {
            best = (i, e);
        }
    }
    if best.1 <= 0.0 {
        return Err(Error::EmptyRegion(format!(
            "exponent is zero for every mu in ({lo}, {hi}) at rate {rate}"
        )));
    }
    let a = lo + step * best.0.saturating_sub(1) as f64;
    let b = (lo + step * (best.0 + 1) as f64).min(hi);
    let (mu, _) = maximize_unimodal(
        |mu| objective(mu).unwrap_or(f64::NEG_INFINITY),
        a,
        b,
        1e-9 * (hi - lo),
    )?;
    let mut n_c = quantize_coherence(coherence(mu));
    if signal_dims.is_finite() {
        n_c = n_c.min(signal_dims.floor());
    }
    let exponent = random_coding_exponent_tr(n_c, snr, rate, epsilon)?.exponent;
    Ok(MuOptimum {
        mu_opt: mu,
        exponent,
        n_c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed form exactly as printed, valid for `n_c != 2`.
    fn eta_star_literal(n_c: f64, nsnr: f64) -> f64 {
        let a = (nsnr + n_c - 1.0) / ((n_c - 2.0) * nsnr);
        a * ((1.0 + 1.0 / a).sqrt() - 1.0)
    }

    #[test]
    fn eta_star_values() {
        let eta = optimal_training_fraction(100.0, 1.0).unwrap();
        assert!((eta - 0.415_434).abs() < 1e-6, "eta = {eta}");
        assert!((eta - eta_star_literal(100.0, 1.0)).abs() < 1e-14);
        assert_eq!(optimal_training_fraction(2.0, 3.7).unwrap(), 0.5);
        // Continuity through the removable singularity.
        let near = optimal_training_fraction(2.0 + 1e-9, 3.7).unwrap();
        assert!((near - 0.5).abs() < 1e-9);
        for n_c in [3.0, 10.0, 250.0] {
            let limit = ((n_c - 1.0f64).sqrt() - 1.0) / (n_c - 2.0);
            let eta = optimal_training_fraction(n_c, 1e12).unwrap();
            assert!((eta - limit).abs() < 1e-5, "n_c={n_c}: {eta} vs {limit}");
            assert!(limit > 0.0 && limit <= 0.5);
        }
        assert!(optimal_training_fraction(1.0, 1.0).is_err());
        assert!(optimal_training_fraction(5.0, 0.0).is_err());
    }

    #[test]
    fn effective_snr_hand_value() {
        let k = effective_snr(0.415_434, 100.0, 0.01).unwrap();
        assert!(((k - 1.7259e-3) / 1.7259e-3).abs() < 1e-4, "K* = {k}");
        assert!(effective_snr(1e-12, 100.0, 0.01).unwrap() < 1e-12);
        assert!(effective_snr(1.0 - 1e-12, 100.0, 0.01).unwrap() < 1e-12);
        assert!(effective_snr(0.0, 100.0, 0.01).is_err());
        assert!(effective_snr(1.0, 100.0, 0.01).is_err());
    }

    #[test]
    fn eta_star_beats_eta_grid() {
        for &(n_c, snr) in &[(2.0, 0.3), (7.0, 0.05), (100.0, 0.01), (1e4, 1e-3)] {
            let best = TrainingDesign::optimal(n_c, snr, DEFAULT_EPSILON).unwrap();
            for i in 1..100 {
                let k = effective_snr(i as f64 / 100.0, n_c, snr).unwrap();
                assert!(k <= best.k_eff * (1.0 + 1e-12));
            }
            assert!((best.mse - 1.0 / (1.0 + best.eta * n_c * snr)).abs() < 1e-15);
        }
    }

    #[test]
    fn rate_identities() {
        let r = exponent_rates(100.0, 0.01, DEFAULT_EPSILON).unwrap();
        assert!((r.r_max - r.k1 / 100.0).abs() < 1e-18);
        assert!((r.r_cr / r.r_max - 0.5 / (2.0 + r.k1)).abs() < 1e-12);
        assert!(r.r_cr / r.r_max < 0.25);

        let r = ExponentRates::from_k1(99.0 * 0.25, 100.0);
        assert!((r.r_max - 0.2475).abs() < 1e-15);
        let r = ExponentRates::from_k1(1e-15, 10.0);
        assert!(r.r_max < 1e-15 && r.r_cr < 1e-15);
    }

    #[test]
    fn validity_region() {
        // High SNR and long blocks push K* past 1.
        assert!(matches!(
            exponent_rates(1e3, 5.0, DEFAULT_EPSILON),
            Err(Error::ValidityRegion(_))
        ));
        assert!(exponent_rates(1.5, 0.01, DEFAULT_EPSILON).is_err());
        assert!(exponent_rates(10.0, 0.01, 1.0).is_err());
        assert!(matches!(
            perfect_csi_exponent(10.0, 0.6, 0.01, DEFAULT_EPSILON),
            Err(Error::ValidityRegion(_))
        ));
    }

    #[test]
    fn rho_star_hand_value_and_continuity() {
        let rho = optimal_rho(1.0, 1.0, 0.5);
        assert!((rho - (17f64.sqrt() - 3.0) / 4.0).abs() < 1e-12);
        assert!((rho - 0.28078).abs() < 1e-5);

        for &(k1, n_c) in &[(0.3, 10.0), (5.0, 2.0), (40.0, 1e3)] {
            let r = ExponentRates::from_k1(k1, n_c);
            let a = 1.0 + k1;
            let b = 2.0 + k1;
            let c = 1.0 - k1 / (n_c * r.r_cr);
            let printed = (-b + (b * b - 4.0 * a * c).sqrt()) / (2.0 * a);
            assert!((printed - 1.0).abs() < 1e-9);
            assert!((optimal_rho(k1, n_c, r.r_cr) - 1.0).abs() < 1e-9);
            assert!(optimal_rho(k1, n_c, r.r_max) == 0.0);
        }
    }

    #[test]
    fn exponent_branches() {
        let n_c = 100.0;
        let snr = 0.01;
        let r = exponent_rates(n_c, snr, DEFAULT_EPSILON).unwrap();

        let beyond = random_coding_exponent_tr(n_c, snr, 999.0, DEFAULT_EPSILON).unwrap();
        assert_eq!(beyond.exponent, 0.0);
        assert_eq!(beyond.regime, Regime::Zero);

        let at_zero = random_coding_exponent_tr(n_c, snr, 0.0, DEFAULT_EPSILON).unwrap();
        assert!((at_zero.exponent - (0.5 * r.k1).ln_1p() / n_c).abs() < 1e-18);
        assert_eq!(at_zero.rho_star, 1.0);
        assert_eq!(at_zero.regime, Regime::BelowCritical);

        let below = random_coding_exponent_tr(n_c, snr, r.r_cr * (1.0 - 1e-12), 0.01).unwrap();
        let above = random_coding_exponent_tr(n_c, snr, r.r_cr, 0.01).unwrap();
        assert!((below.exponent - above.exponent).abs() < 1e-9);
        assert_eq!(above.regime, Regime::AboveCritical);

        let mid = random_coding_exponent_tr(n_c, snr, 0.5 * (r.r_cr + r.r_max), 0.01).unwrap();
        assert!(mid.exponent > 0.0 && mid.rho_star > 0.0 && mid.rho_star < 1.0);
        assert!(mid.r_cr <= mid.r_max);
    }

    #[test]
    fn csi_reference() {
        for &(n_c, snr) in &[(2.0, 0.2), (50.0, 0.01), (1e5, 1e-3)] {
            let r_max = perfect_csi_exponent(n_c, snr, 0.0, 0.01).unwrap().r_max;
            for i in 0..=50 {
                let rate = r_max * 1.1 * i as f64 / 50.0;
                let tr = random_coding_exponent_tr(n_c, snr, rate, 0.01).unwrap();
                let csi = perfect_csi_exponent(n_c, snr, rate, 0.01).unwrap();
                assert!(csi.exponent >= tr.exponent);
            }
        }
        let faint = perfect_csi_exponent(10.0, 1e-12, 0.0, 0.01).unwrap();
        assert!(faint.exponent < 1e-12);
    }

    #[test]
    fn error_bound() {
        assert_eq!(error_probability_bound(100.0, 0.0), 1.0);
        let a = error_probability_bound(100.0, 0.01);
        let b = error_probability_bound(200.0, 0.01);
        assert!(a > b && b > 0.0 && a < 1.0);
    }

    #[test]
    fn mu_opt_basic() {
        let opt = optimal_mu(f64::INFINITY, 0.002, 0.01, 1.0, (0.2, 4.0), 0.01).unwrap();
        assert!(opt.mu_opt > 0.2 && opt.mu_opt < 4.0);
        assert!(opt.exponent > 0.0);
        assert_eq!(opt.n_c, quantize_coherence(0.01f64.powf(-opt.mu_opt)));

        assert!(matches!(
            optimal_mu(f64::INFINITY, 0.05, 0.01, 1.0, (0.2, 4.0), 0.01),
            Err(Error::EmptyRegion(_))
        ));
        // N = 1e3 caps N_c at 1e3, i.e. mu <= 1.5 here; the unconstrained
        // optimum at this rate lies above that.
        let free = optimal_mu(f64::INFINITY, 0.003, 0.01, 1.0, (0.2, 4.0), 0.01).unwrap();
        assert!(free.mu_opt > 1.5);
        let capped = optimal_mu(1e3, 0.003, 0.01, 1.0, (0.2, 4.0), 0.01).unwrap();
        assert!(capped.mu_opt <= 1.5 + 1e-9 && capped.n_c <= 1e3);
        assert!(capped.exponent < free.exponent);
        assert!(optimal_mu(1e6, 0.002, 2.0, 1.0, (0.2, 4.0), 0.01).is_err());
    }
}
