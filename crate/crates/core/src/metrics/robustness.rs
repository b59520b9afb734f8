//! Structured singular value for a single full complex scalar uncertainty and
//! the resulting load robustness threshold.

use crate::error::{Error, Result};
use crate::frd::FrequencyGrid;
use crate::lti::hinf_norm;
use crate::numeric::refined_peak;
use crate::system::System;

/// `μ(ω)` of the transfer `m` seen by a scalar complex perturbation: `|m(jω)|`.
pub fn mu_at(m: &System, omega: f64) -> Result<f64> {
    Ok(m.eval(omega)?.norm())
}

/// `μ` sampled on the analysis frequencies, as `(ω, μ)` pairs.
pub fn mu_siso(m: &System, grid: &FrequencyGrid) -> Result<Vec<(f64, f64)>> {
    m.frequencies(grid)
        .into_iter()
        .map(|w| mu_at(m, w).map(|mu| (w, mu)))
        .collect()
}

/// Load robustness threshold `1 / max_ω μ(ω)`; infinite for `Z_t ≡ 0`.
pub fn lrt(zt: &System, grid: &FrequencyGrid) -> Result<f64> {
    if zt.is_zero() {
        return Ok(f64::INFINITY);
    }
    let peak = match zt {
        System::Model(tf) => hinf_norm(tf, grid)?.value,
        System::Data(_) => {
            let freqs = zt.frequencies(grid);
            refined_peak(|w| zt.magnitude(w), &freqs).1
        }
    };
    if !(peak > 0.0) {
        return Err(Error::NoPeak);
    }
    Ok(1.0 / peak)
}
