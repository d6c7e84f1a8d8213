//! Deterministic numerical building blocks: counter-addressed random streams,
//! the exponential integral, a two-term least-squares fit, golden-section
//! maximization and reproducible parallel averaging.

mod expint;
mod fit;
mod optimize;
mod rng;
mod sum;

pub use expint::{exp_integral_e1, scaled_exp_integral_e1};
pub use fit::{fit_linear_in_snr, QuadraticFit};
pub use optimize::maximize_unimodal;
pub use rng::{sample_exponential_unit, RandomStream};
pub use sum::{parallel_mean, MeanEstimate, NeumaierSum, CHUNK_LEN};

/// `n` points evenly spaced from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// `n` points evenly spaced in `log10` from `lo` to `hi` inclusive.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    linspace(lo.log10(), hi.log10(), n)
        .into_iter()
        .map(|e| 10f64.powf(e))
        .collect()
}
