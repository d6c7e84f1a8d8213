//! Run configuration, loadable from a JSON file and overridable from flags.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sparsechan::capacity::{default_fit_snr_grid, DEFAULT_FIT_SAMPLES};
use sparsechan::geometry::{ChannelParams, ScalingLaw, SignalingParams};
use sparsechan::numerics::{linspace, logspace};
use sparsechan::reliability::DEFAULT_EPSILON;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grids {
    /// Signaling durations for `coeff-fit`, seconds.
    pub t_grid: Vec<f64>,
    /// SNR points of each coefficient fit.
    pub snr_grid: Vec<f64>,
    /// Rates for `exponent-sweep` and `mu-opt`, nats per dimension.
    pub rate_grid: Vec<f64>,
    /// Scaling exponents for `exponent-sweep`; its span is the `mu-opt` search range.
    pub mu_grid: Vec<f64>,
}

impl Default for Grids {
    fn default() -> Self {
        let mut rate_grid = vec![0.0005];
        rate_grid.extend((1..=9).map(|i| 0.001 * i as f64));
        Self {
            t_grid: logspace(1e-7, 1e5, 13),
            snr_grid: default_fit_snr_grid(),
            rate_grid,
            mu_grid: linspace(0.2, 4.0, 200),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub channel: ChannelParams,
    pub signaling: SignalingParams,
    pub law: ScalingLaw,
    pub epsilon: f64,
    pub seed: u64,
    pub samples: u64,
    pub grids: Grids,
    /// Optional cap `N_c ≤ N` for `mu-opt`.
    pub signal_dims: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            channel: ChannelParams {
                t_m: 1e-5,
                w_d: 10.0,
                delta1: 0.3,
                delta2: 0.5,
            },
            signaling: SignalingParams {
                t: 1.0,
                w: 1e6,
                p: 1e4,
            },
            law: ScalingLaw { k: 1.0, mu: 2.0 },
            epsilon: DEFAULT_EPSILON,
            seed: 1,
            samples: DEFAULT_FIT_SAMPLES,
            grids: Grids::default(),
            signal_dims: None,
        }
    }
}

fn check_grid(name: &str, grid: &[f64]) -> Result<(), CliError> {
    if grid.is_empty() {
        return Err(CliError::Usage(format!("{name} must be non-empty")));
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Usage(format!("{name} must contain finite values")));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage(format!("{name} must be sorted strictly ascending")));
    }
    Ok(())
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }

    /// Checks every module-level invariant and every grid.
    pub fn validate(&self) -> Result<(), CliError> {
        self.channel.validate()?;
        self.signaling.validate()?;
        self.law.validate()?;
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(CliError::Usage(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        if self.samples == 0 {
            return Err(CliError::Usage("samples must be >= 1".into()));
        }
        check_grid("t_grid", &self.grids.t_grid)?;
        check_grid("snr_grid", &self.grids.snr_grid)?;
        check_grid("rate_grid", &self.grids.rate_grid)?;
        check_grid("mu_grid", &self.grids.mu_grid)?;
        if let Some(n) = self.signal_dims {
            if !(n >= 2.0) {
                return Err(CliError::Usage(format!("signal_dims must be >= 2, got {n}")));
            }
        }
        Ok(())
    }
}
