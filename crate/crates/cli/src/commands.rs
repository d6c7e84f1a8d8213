//! One function per subcommand, each producing a [`Table`].

use std::io::Write;

use rayon::prelude::*;
use sparsechan::capacity::{
    coherent_capacity_exact, coherent_capacity_mc, coherent_lower_bound,
    fit_capacity_coefficients,
};
use sparsechan::geometry::{
    coherence_from_scaling, derive_geometry, duration_for_mu, effective_mu, quantize_coherence,
};
use sparsechan::numerics::RandomStream;
use sparsechan::reliability::{
    optimal_mu, perfect_csi_exponent, random_coding_exponent_tr, ExponentResult,
};
use sparsechan::{Error, LOG2_E};

use crate::config::RunConfig;
use crate::output::{fmt_num, Table};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapacityMethod {
    Exact,
    MonteCarlo,
    LowerBound,
}

pub fn geometry(cfg: &RunConfig) -> Result<Table, CliError> {
    let g = derive_geometry(&cfg.channel, &cfg.signaling)?;
    let mut table = Table::new(&["d_t", "d_w", "d", "t_coh", "w_coh", "n_c", "n", "snr"]);
    table.push(
        [g.d_t, g.d_w, g.d, g.t_coh, g.w_coh, g.n_c, g.n, g.snr]
            .into_iter()
            .map(fmt_num)
            .collect(),
    );
    Ok(table)
}

pub fn locus(cfg: &RunConfig) -> Result<Table, CliError> {
    let t = duration_for_mu(&cfg.channel, cfg.signaling.w, cfg.signaling.p, &cfg.law)?;
    let mut table = Table::new(&["t"]);
    table.push(vec![fmt_num(t)]);
    Ok(table)
}

pub fn mu_eff(cfg: &RunConfig) -> Result<Table, CliError> {
    let mu = effective_mu(&cfg.channel, &cfg.signaling, cfg.law.k)?;
    let mut table = Table::new(&["mu_eff"]);
    table.push(vec![fmt_num(mu)]);
    Ok(table)
}

pub fn capacity(
    cfg: &RunConfig,
    snr: Option<f64>,
    method: CapacityMethod,
    stderr: &mut dyn Write,
) -> Result<Table, CliError> {
    let snr = snr.unwrap_or_else(|| cfg.signaling.snr());
    let est = match method {
        CapacityMethod::Exact => coherent_capacity_exact(snr)?,
        CapacityMethod::MonteCarlo => {
            coherent_capacity_mc(snr, cfg.samples, &RandomStream::new(cfg.seed))?
        }
        CapacityMethod::LowerBound => coherent_lower_bound(snr)?,
    };
    if !est.in_regime {
        writeln!(stderr, "warning: snr = {snr} is outside the low-SNR regime of the bound")?;
    }
    let mut table = Table::new(&["value", "std_error", "method"]);
    table.push(vec![
        fmt_num(est.value),
        fmt_num(est.std_error),
        est.method.as_str().to_string(),
    ]);
    Ok(table)
}

pub fn coeff_fit(cfg: &RunConfig) -> Result<Table, CliError> {
    let stream = RandomStream::new(cfg.seed);
    let fits = fit_capacity_coefficients(
        &cfg.channel,
        cfg.signaling.w,
        cfg.signaling.p,
        &cfg.grids.t_grid,
        &cfg.grids.snr_grid,
        cfg.samples,
        &stream,
    )?;
    let mut table = Table::new(&["t", "mu_eff", "c1", "c2"]);
    for f in fits {
        table.push(vec![fmt_num(f.t), fmt_num(f.mu_eff), fmt_num(f.c1), fmt_num(f.c2)]);
    }
    Ok(table)
}

pub fn exponent(
    cfg: &RunConfig,
    n_c: Option<f64>,
    snr: Option<f64>,
    rate: f64,
    csi: bool,
) -> Result<Table, CliError> {
    let snr = snr.unwrap_or_else(|| cfg.signaling.snr());
    let n_c = match n_c {
        Some(n_c) => n_c,
        None => quantize_coherence(coherence_from_scaling(&cfg.law, snr)?),
    };
    let r: ExponentResult = if csi {
        perfect_csi_exponent(n_c, snr, rate, cfg.epsilon)?
    } else {
        random_coding_exponent_tr(n_c, snr, rate, cfg.epsilon)?
    };
    let mut table = Table::new(&[
        "rate_nats", "rate_bits", "exponent", "rho_star", "r_cr", "r_max", "regime",
    ]);
    if csi {
        table.comment("perfect receiver CSI reference (derived approximation)");
    }
    table.push(vec![
        fmt_num(r.rate),
        fmt_num(r.rate * LOG2_E),
        fmt_num(r.exponent),
        fmt_num(r.rho_star),
        fmt_num(r.r_cr),
        fmt_num(r.r_max),
        r.regime.as_str().to_string(),
    ]);
    Ok(table)
}

/// Unquantized coherence dimension on the scaling law, floored at 2.
fn sweep_coherence(k: f64, snr: f64, mu: f64) -> f64 {
    (k * snr.powf(-mu)).max(2.0)
}

pub fn exponent_sweep(cfg: &RunConfig) -> Result<Table, CliError> {
    let snr = cfg.signaling.snr();
    let k = cfg.law.k;
    let eps = cfg.epsilon;
    let cells: Vec<(f64, f64)> = cfg
        .grids
        .rate_grid
        .iter()
        .flat_map(|&r| cfg.grids.mu_grid.iter().map(move |&mu| (r, mu)))
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(rate, mu)| {
            let n_c = sweep_coherence(k, snr, mu);
            let tr = random_coding_exponent_tr(n_c, snr, rate, eps)?;
            let csi = perfect_csi_exponent(n_c, snr, rate, eps)?;
            Ok(vec![
                fmt_num(mu),
                fmt_num(rate),
                fmt_num(tr.exponent),
                fmt_num(csi.exponent),
                fmt_num(tr.r_max),
            ])
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut table = Table::new(&["mu", "rate_nats", "exponent", "exponent_csi", "r_max"]);
    for row in rows {
        table.push(row);
    }
    Ok(table)
}

pub fn mu_opt(cfg: &RunConfig, stderr: &mut dyn Write) -> Result<Table, CliError> {
    let snr = cfg.signaling.snr();
    let mu_grid = &cfg.grids.mu_grid;
    let range = (mu_grid[0], mu_grid[mu_grid.len() - 1]);
    let dims = cfg.signal_dims.unwrap_or(f64::INFINITY);
    let results: Vec<_> = cfg
        .grids
        .rate_grid
        .par_iter()
        .map(|&rate| (rate, optimal_mu(dims, rate, snr, cfg.law.k, range, cfg.epsilon)))
        .collect();
    let mut table = Table::new(&["rate_nats", "mu_opt", "exponent"]);
    for (rate, res) in results {
        match res {
            Ok(opt) => table.push(vec![fmt_num(rate), fmt_num(opt.mu_opt), fmt_num(opt.exponent)]),
            Err(Error::EmptyRegion(msg)) => {
                writeln!(stderr, "warning: {msg}")?;
                table.push(vec![fmt_num(rate), fmt_num(f64::NAN), fmt_num(0.0)]);
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(table)
}
