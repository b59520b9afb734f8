use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frd::FrequencyGrid;
use crate::numeric::{bisect_log, refined_peak};
use crate::system::System;

/// `|(1 − g) / (1 + g)|` for a single response value; `None` when `1 + g`
/// vanishes. At most 1 exactly when `Re g ≥ 0`.
pub fn passivity_index_of(g: Complex64) -> Option<f64> {
    let den = Complex64::new(1.0, 0.0) + g;
    if den.norm() < 1e-12 {
        return None;
    }
    Some(((Complex64::new(1.0, 0.0) - g) / den).norm())
}

/// Passivity index `R_G(ω)`.
pub fn passivity_index(g: &System, omega: f64) -> Result<f64> {
    passivity_index_of(g.eval(omega)?).ok_or(Error::SingularBilinear { omega })
}

/// Passivity index interval `PII_ε = M (ω1, ω2)`.
///
/// `[ω1, ω2]` is the widest (in log frequency) contiguous band where
/// `R_{−Z_t}(ω) ≤ 1 − ε`; `M` is the peak of `|Z_t|` outside it. An interval
/// that already holds at the bottom of the band reports `ω1 = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiiResult {
    pub omega1: f64,
    pub omega2: f64,
    pub m: f64,
    pub epsilon: f64,
    pub interval_empty: bool,
}

pub fn pii(zt: &System, epsilon: f64, grid: &FrequencyGrid) -> Result<PiiResult> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    let threshold = 1.0 - epsilon;
    let neg = zt.scale(-1.0);
    let freqs = zt.frequencies(grid);

    let inside = freqs
        .iter()
        .map(|&w| passivity_index(&neg, w).map(|r| r <= threshold))
        .collect::<Result<Vec<bool>>>()?;

    let magnitude = |w: f64| zt.magnitude(w);

    let Some((first, last)) = widest_run(&freqs, &inside) else {
        let (_, m) = refined_peak(magnitude, &freqs);
        return Ok(PiiResult {
            omega1: 0.0,
            omega2: 0.0,
            m: m.max(0.0),
            epsilon,
            interval_empty: true,
        });
    };

    let holds = |w: f64| passivity_index(&neg, w).is_ok_and(|r| r <= threshold);
    let omega1 = if first == 0 {
        0.0
    } else {
        bisect_log(holds, freqs[first - 1], freqs[first], 1e-13)
    };
    let omega2 = if last + 1 == freqs.len() {
        freqs[last]
    } else {
        bisect_log(holds, freqs[last], freqs[last + 1], 1e-13)
    };

    // Exterior samples plus the refined boundaries themselves.
    let mut m: f64 = 0.0;
    if first > 0 {
        let mut below = freqs[..first].to_vec();
        below.push(omega1);
        m = m.max(refined_peak(magnitude, &below).1);
    }
    if last + 1 < freqs.len() {
        let mut above = vec![omega2];
        above.extend_from_slice(&freqs[last + 1..]);
        m = m.max(refined_peak(magnitude, &above).1);
    }

    Ok(PiiResult {
        omega1,
        omega2,
        m,
        epsilon,
        interval_empty: false,
    })
}

/// Widest run of `true` by `ln(ω_last / ω_first)`; ties go to the lower run.
fn widest_run(freqs: &[f64], inside: &[bool]) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, f64)> = None;
    let mut k = 0;
    while k < inside.len() {
        if !inside[k] {
            k += 1;
            continue;
        }
        let start = k;
        while k + 1 < inside.len() && inside[k + 1] {
            k += 1;
        }
        let width = (freqs[k] / freqs[start]).ln();
        if best.is_none_or(|(_, _, w)| width > w) {
            best = Some((start, k, width));
        }
        k += 1;
    }
    best.map(|(a, b, _)| (a, b))
}
