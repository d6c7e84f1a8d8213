//! Sparse wideband multipath channels: coherence geometry, ergodic capacity of
//! training-based signaling, and closed-form random-coding error exponents.
//!
//! The channel is abstracted as block fading over time-frequency coherence
//! subspaces of dimension `N_c`, with `D = N / N_c` i.i.d. Rayleigh
//! coefficients. Delay-Doppler sparsity makes `N_c` grow with signaling
//! duration and bandwidth, which is what the [`geometry`] module captures.
//! The [`capacity`] and [`reliability`] modules only depend on `(N_c, SNR)`.

pub mod capacity;
pub mod error;
pub mod geometry;
pub mod numerics;
pub mod reliability;

pub use error::{Error, Result};

/// `log2(e)`: the first-order low-SNR capacity coefficient in bits per dimension.
pub const LOG2_E: f64 = std::f64::consts::LOG2_E;
