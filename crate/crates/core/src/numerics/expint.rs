use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const MAX_TERMS: usize = 500;

/// Power series `-γ - ln x + Σ (-1)^{k+1} x^k / (k k!)`. Converges quickly for `x ≤ 1`.
fn e1_series(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..MAX_TERMS {
        term *= -x / k as f64;
        let contrib = term / k as f64;
        sum -= contrib;
        if contrib.abs() <= sum.abs() * 1e-17 {
            break;
        }
    }
    -EULER_GAMMA - x.ln() + sum
}

/// `e^x E1(x)` from the continued fraction
/// `1/(x+1- 1/(x+3- 4/(x+5- ...)))`, evaluated with modified Lentz.
fn scaled_e1_fraction(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_TERMS {
        let a = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

fn check_domain(x: f64) -> Result<()> {
    if x.is_nan() || x <= 0.0 {
        Err(Error::Domain(format!("E1 requires x > 0, got {x}")))
    } else {
        Ok(())
    }
}

/// Exponential integral `E1(x) = ∫_x^∞ e^{-t}/t dt` for `x > 0`.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    check_domain(x)?;
    if x <= 1.0 {
        Ok(e1_series(x))
    } else {
        Ok(scaled_e1_fraction(x) * (-x).exp())
    }
}

/// `e^x E1(x)` without the overflow/underflow of forming the two factors
/// separately. For `X ~ Exp(1)`, `E[ln(1 + s X)] = e^{1/s} E1(1/s)`.
pub fn scaled_exp_integral_e1(x: f64) -> Result<f64> {
    check_domain(x)?;
    if x <= 1.0 {
        Ok(e1_series(x) * x.exp())
    } else if x.is_infinite() {
        Ok(0.0)
    } else {
        Ok(scaled_e1_fraction(x))
    }
}
