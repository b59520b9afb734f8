use nalgebra::{DMatrix, DVector};

use super::{StateSpace, TransferFunction};
use crate::error::{Error, Result};
use crate::frd::FrequencyGrid;
use crate::numeric::{bisect_linear, bisect_log, merge_frequencies, refined_peak};

/// Solves `A P + P Aᵀ + Q = 0` through the Kronecker form
/// `(I ⊗ A + A ⊗ I) vec(P) = −vec(Q)`. Intended for the low orders found in
/// identified actuator models.
pub fn lyapunov(a: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let eye = DMatrix::<f64>::identity(n, n);
    let k = eye.kronecker(a) + a.kronecker(&eye);
    let rhs = DVector::from_iterator(n * n, q.iter().map(|x| -x));
    let p = k.lu().solve(&rhs).ok_or(Error::UnstableSystem)?;
    let p = DMatrix::from_vec(n, n, p.data.into());
    Ok((&p + p.transpose()) * 0.5)
}

/// H2 norm, `sqrt(C P Cᵀ)` with `P` the controllability Gramian.
pub fn h2_norm(tf: &TransferFunction) -> Result<f64> {
    if tf.is_zero() {
        return Ok(0.0);
    }
    if !tf.is_stable() {
        return Err(Error::UnstableSystem);
    }
    if !tf.is_strictly_proper() {
        return Err(Error::NotStrictlyProper);
    }
    let ss = StateSpace::from_tf(tf)?;
    let bb = &ss.b * ss.b.transpose();
    let p = lyapunov(&ss.a, &bb)?;
    let value = (&ss.c * p * ss.c.transpose())[(0, 0)];
    Ok(value.max(0.0).sqrt())
}

/// Peak gain and the frequency where it occurs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub value: f64,
    pub omega: f64,
}

/// H∞ norm by grid search plus golden-section refinement. `ω = 0`, the grid
/// ends and the natural frequencies of complex poles are always candidates.
pub fn hinf_norm(tf: &TransferFunction, grid: &FrequencyGrid) -> Result<Peak> {
    if !tf.is_proper() {
        return Err(Error::ImproperSystem);
    }
    if !tf.is_stable() {
        return Err(Error::UnstableSystem);
    }
    let dc = tf.eval(0.0)?.norm();
    let freqs = merge_frequencies(&grid.frequencies(), tf.resonances());
    let (omega, value) = refined_peak(|w| tf.eval(w).map_or(f64::NAN, |h| h.norm()), &freqs);
    if dc >= value {
        Ok(Peak {
            value: dc,
            omega: 0.0,
        })
    } else {
        Ok(Peak { value, omega })
    }
}

/// -3 dB bandwidth. `resolved` is false when the response never drops to
/// `|H(0)|/√2` inside the grid; `omega` is then the grid maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bandwidth {
    pub omega: f64,
    pub resolved: bool,
}

pub fn bandwidth(tf: &TransferFunction, grid: &FrequencyGrid) -> Result<Bandwidth> {
    if !tf.is_stable() {
        return Err(Error::UnstableSystem);
    }
    let dc = tf.eval(0.0)?.norm();
    let mag = |w: f64| tf.eval(w).map_or(f64::NAN, |h| h.norm());
    crossing_below(mag, dc, 0.0, &grid.frequencies())
}

/// First frequency where `mag` falls to `reference/√2`, scanning `freqs`
/// upward from `start` (the frequency `reference` was taken at).
pub(crate) fn crossing_below(
    mag: impl Fn(f64) -> f64,
    reference: f64,
    start: f64,
    freqs: &[f64],
) -> Result<Bandwidth> {
    if reference == 0.0 {
        return Err(Error::ZeroDcGain);
    }
    let target = reference / std::f64::consts::SQRT_2;
    let below = |w: f64| mag(w) <= target;
    let first = freqs.iter().position(|&w| w > start && below(w));
    let omega = match first {
        None => {
            return Ok(Bandwidth {
                omega: freqs[freqs.len() - 1],
                resolved: false,
            })
        }
        Some(k) => {
            let lo = if k == 0 {
                start
            } else {
                freqs[k - 1].max(start)
            };
            if lo == 0.0 {
                bisect_linear(below, 0.0, freqs[k], 1e-12)
            } else {
                bisect_log(below, lo, freqs[k], 1e-12)
            }
        }
    };
    Ok(Bandwidth {
        omega,
        resolved: true,
    })
}
