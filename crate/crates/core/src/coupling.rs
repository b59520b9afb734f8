//! The actuator/load interconnection: coupled response, frequency-domain
//! stability certificates, and a constructive worst-case load used to check
//! the robustness threshold independently.

use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frd::FrequencyGrid;
use crate::lti::{hinf_norm, TransferFunction, STABILITY_TOL};
use crate::metrics::{passivity_index_of, PiiResult};
use crate::numeric::{merge_frequencies, refined_peak};
use crate::poly;
use crate::system::{common_band, common_frequencies, System};

/// Mass-spring-damper load.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoadModel {
    #[serde(rename = "mass_kg")]
    pub mass: f64,
    #[serde(rename = "damping_Ns_per_m")]
    pub damping: f64,
    #[serde(rename = "stiffness_N_per_m")]
    pub stiffness: f64,
}

impl LoadModel {
    pub fn new(mass: f64, damping: f64, stiffness: f64) -> Result<Self> {
        let load = Self {
            mass,
            damping,
            stiffness,
        };
        load.validate()?;
        Ok(load)
    }

    fn validate(&self) -> Result<()> {
        if !(self.mass.is_finite() && self.mass > 0.0) {
            return Err(Error::InvalidLoad(format!(
                "mass must be > 0, got {}",
                self.mass
            )));
        }
        if !(self.damping.is_finite() && self.damping >= 0.0) {
            return Err(Error::InvalidLoad(format!(
                "damping must be >= 0, got {}",
                self.damping
            )));
        }
        if !(self.stiffness.is_finite() && self.stiffness >= 0.0) {
            return Err(Error::InvalidLoad(format!(
                "stiffness must be >= 0, got {}",
                self.stiffness
            )));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let load: Self =
            serde_json::from_str(text).map_err(|e| Error::InvalidLoad(e.to_string()))?;
        load.validate()?;
        Ok(load)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let load: Self =
            serde_json::from_str(&text).map_err(|e| crate::model_io::json_error(path, e))?;
        load.validate().map_err(|e| Error::io(path, e))?;
        Ok(load)
    }

    /// `Y(s) = s / (m s² + b s + k)`, force to velocity. Not reduced when
    /// `k = 0`.
    pub fn admittance(&self) -> TransferFunction {
        TransferFunction::new(&[1.0, 0.0], &[self.mass, self.damping, self.stiffness])
            .expect("mass > 0")
            .with_units("m/(N*s)")
    }
}

/// `T_y = Z_b / (1 − Z_t Y)` together with its stability verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledSystem {
    pub t_y: TransferFunction,
    pub stable: bool,
    /// Roots of the numerator of `1 − Z_t Y` and the poles of `Z_b`.
    pub characteristic_poles: Vec<Complex64>,
}

pub fn coupled_response(
    zb: &TransferFunction,
    zt: &TransferFunction,
    y: &TransferFunction,
) -> Result<CoupledSystem> {
    let loop_num = poly::sub(&poly::mul(zt.den(), y.den()), &poly::mul(zt.num(), y.num()));
    if poly::is_zero(&loop_num) {
        return Err(Error::DegenerateLoop);
    }
    let loop_tf = TransferFunction::new(&loop_num, &poly::mul(zt.den(), y.den()))?;
    let t_y = zb.try_div(&loop_tf)?.with_units(zb.units());

    let mut characteristic_poles = poly::roots(&loop_num);
    characteristic_poles.extend(zb.poles());
    Ok(CoupledSystem {
        stable: t_y.is_stable(),
        t_y,
        characteristic_poles,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallGain {
    pub holds: bool,
    pub worst_omega: f64,
    pub worst_product: f64,
}

fn loop_product(zt: &System, y: &System, omega: f64) -> f64 {
    match (zt.eval(omega), y.eval(omega)) {
        (Ok(a), Ok(b)) => a.norm() * b.norm(),
        _ => f64::INFINITY,
    }
}

/// Analysis frequencies for a joint scan, plus the natural frequencies of
/// lightly damped model poles that a grid could step over.
fn scan_frequencies(zt: &System, y: &System, grid: &FrequencyGrid) -> Result<Vec<f64>> {
    let base = common_frequencies(&[zt, y], grid)?;
    let band = common_band(&[zt, y])?;
    let extra = [zt, y]
        .into_iter()
        .filter_map(System::as_model)
        .flat_map(TransferFunction::resonances)
        .filter(|&w| band.is_none_or(|(lo, hi)| w >= lo && w <= hi));
    Ok(merge_frequencies(&base, extra))
}

/// `|Z_t(jω)| |Y(jω)| < 1` over the analysis frequencies, refined around the
/// worst sample, plus `ω = 0` when both are models.
pub fn small_gain_check(zt: &System, y: &System, grid: &FrequencyGrid) -> Result<SmallGain> {
    let freqs = scan_frequencies(zt, y, grid)?;
    let mut worst = refined_peak(|w| loop_product(zt, y, w), &freqs);
    if zt.band().is_none() && y.band().is_none() {
        let dc = loop_product(zt, y, 0.0);
        if dc >= worst.1 {
            worst = (0.0, dc);
        }
    }
    Ok(SmallGain {
        holds: worst.1 < 1.0,
        worst_omega: worst.0,
        worst_product: worst.1,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixedCheck {
    pub guaranteed: bool,
    pub reason: String,
}

/// Mixed passivity / small-gain certificate for a passive load.
///
/// Inside the PII band `−Z_t` is strictly passive, so the loop phase stays
/// away from the critical point whatever the gain; outside it the loop gain
/// must stay below one. The check is sampled on the analysis frequencies and
/// is sufficient only.
pub fn mixed_stability_check(
    zt: &System,
    y: &System,
    pii: &PiiResult,
    grid: &FrequencyGrid,
) -> Result<MixedCheck> {
    let freqs = common_frequencies(&[zt, y], grid)?;
    for &w in &freqs {
        let re = y.eval(w).map_or(f64::NAN, |h| h.re);
        if !(re >= -1e-9) {
            return Err(Error::NotPassiveLoad { omega: w, re });
        }
    }

    let not_guaranteed = |reason: String| {
        Ok(MixedCheck {
            guaranteed: false,
            reason: format!(
                "{reason}; the check is sufficient only, the coupled system may still be stable"
            ),
        })
    };
    if let Some(tf) = zt.as_model() {
        if !tf.is_stable() {
            return not_guaranteed("Z_t is not stable".into());
        }
    }
    if let Some(tf) = y.as_model() {
        if tf.uncancelled_poles().iter().any(|p| p.re > STABILITY_TOL) {
            return not_guaranteed("load admittance has unstable poles".into());
        }
    }

    let threshold = 1.0 - pii.epsilon;
    let strictly_passive = |w: f64| {
        zt.eval(w)
            .ok()
            .and_then(|h| passivity_index_of(-h))
            .is_some_and(|r| r <= threshold)
    };
    // Exterior segments, each refined around its own worst sample.
    let freqs = scan_frequencies(zt, y, grid)?;
    let segments: Vec<Vec<f64>> = if pii.interval_empty {
        vec![freqs]
    } else {
        let mut below: Vec<f64> = freqs.iter().copied().filter(|&w| w < pii.omega1).collect();
        let mut above: Vec<f64> = freqs.iter().copied().filter(|&w| w > pii.omega2).collect();
        if !below.is_empty() && pii.omega1 > 0.0 {
            below.push(pii.omega1);
        }
        if !above.is_empty() {
            above.insert(0, pii.omega2);
        }
        vec![below, above]
    };
    let mut worst = (f64::NAN, 0.0_f64);
    let both_models = zt.as_model().zip(y.as_model());
    if both_models.is_some() && !strictly_passive(0.0) {
        worst = (0.0, loop_product(zt, y, 0.0));
    }
    for segment in segments.iter().filter(|s| !s.is_empty()) {
        let peak = refined_peak(|w| loop_product(zt, y, w), segment);
        if peak.1 > worst.1 || worst.0.is_nan() {
            worst = peak;
        }
    }
    if !(worst.1 < 1.0) {
        return not_guaranteed(format!(
            "|Z_t||Y| = {} at omega = {} rad/s outside the passive band",
            worst.1, worst.0
        ));
    }
    if let Some((t, l)) = both_models {
        let (a, b) = (t.high_frequency_gain(), l.high_frequency_gain());
        let p = if a == 0.0 || b == 0.0 { 0.0 } else { a * b };
        if !(p < 1.0) {
            return not_guaranteed(format!("|Z_t||Y| tends to {p} at high frequency"));
        }
    }

    let band = if pii.interval_empty {
        "no strictly passive band".to_string()
    } else {
        format!(
            "-Z_t strictly passive on [{}, {}] rad/s",
            pii.omega1, pii.omega2
        )
    };
    Ok(MixedCheck {
        guaranteed: true,
        reason: if worst.0.is_nan() {
            format!("passive load; {band}")
        } else {
            format!(
                "passive load; {band}; small gain elsewhere (worst |Z_t||Y| = {} at {} rad/s)",
                worst.1, worst.0
            )
        },
    })
}

/// Result of the constructive destabilization search.
#[derive(Debug, Clone, PartialEq)]
pub struct DestabilizingGain {
    pub alpha_star: f64,
    pub omega_star: f64,
    /// Unit-gain all-pass perturbation aligned with `Z_t` at `omega_star`.
    pub delta: TransferFunction,
}

/// Unit-gain perturbation whose phase at `omega` equals `phase`: `±1` or
/// `±(a − s)/(a + s)`.
fn phase_matching_allpass(phase: f64, omega: f64) -> TransferFunction {
    use std::f64::consts::{PI, TAU};
    let mut theta = phase % TAU;
    if theta > 0.0 {
        theta -= TAU;
    }
    // theta in (−2π, 0]
    let near = |x: f64| (theta - x).abs() < 1e-9;
    if near(0.0) || near(-TAU) || omega == 0.0 {
        let sign = if near(-PI) { -1.0 } else { 1.0 };
        return TransferFunction::gain(sign);
    }
    if near(-PI) {
        return TransferFunction::gain(-1.0);
    }
    let (sign, section_phase) = if theta > -PI {
        (1.0, theta)
    } else {
        (-1.0, theta + PI)
    };
    let a = omega / (-section_phase / 2.0).tan();
    TransferFunction::new(&[-sign, sign * a], &[1.0, a]).expect("a > 0")
}

/// Roots strictly in the left half-plane and no drop in degree: a leading
/// coefficient that crosses zero sends a root through infinity into the
/// right half-plane.
fn closed_loop_stable(char_poly: &[f64], degree: usize, leading_sign: f64) -> bool {
    let lead = if char_poly.len() == degree + 1 {
        char_poly[0]
    } else {
        0.0
    };
    lead * leading_sign > 0.0 && poly::roots(char_poly).iter().all(|r| r.re < -STABILITY_TOL)
}

/// Smallest `α` for which the load `Y = α Δ` destabilizes the loop, with `Δ`
/// an all-pass matched to the phase of `Z_t` at its gain peak. Should agree
/// with the robustness threshold.
pub fn destabilizing_gain_search(
    zt: &TransferFunction,
    grid: &FrequencyGrid,
) -> Result<DestabilizingGain> {
    if zt.is_zero() {
        return Err(Error::NoPeak);
    }
    let peak = hinf_norm(zt, grid)?;
    let h = zt.eval(peak.omega)?;
    let delta = phase_matching_allpass(-h.arg(), peak.omega);

    let base = poly::mul(zt.den(), delta.den());
    let gain = poly::mul(zt.num(), delta.num());
    let degree = poly::degree(&base);
    let stable_at = |alpha: f64| {
        let p = poly::sub(&base, &poly::scale(&gain, alpha));
        closed_loop_stable(&p, degree, base[0].signum())
    };

    let mut lo = 0.5 / peak.value;
    let mut hi = 2.0 / peak.value;
    for _ in 0..60 {
        if stable_at(lo) {
            break;
        }
        lo *= 0.5;
    }
    for _ in 0..60 {
        if !stable_at(hi) {
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    if stable_at(hi) || !stable_at(lo) {
        return Err(Error::NoPeak);
    }
    while hi - lo > 1e-10 * hi {
        let mid = 0.5 * (lo + hi);
        if stable_at(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(DestabilizingGain {
        alpha_star: 0.5 * (lo + hi),
        omega_star: peak.omega,
        delta,
    })
}

/// Sampling ranges (inclusive) for random loads.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadRanges {
    pub mass: (f64, f64),
    pub damping: (f64, f64),
    pub stiffness: (f64, f64),
}

impl Default for LoadRanges {
    fn default() -> Self {
        Self {
            mass: (0.1, 10.0),
            damping: (0.01, 10.0),
            stiffness: (1.0, 1e4),
        }
    }
}

/// Deterministic log-uniform loads.
pub fn passive_load_sample(seed: u64, count: usize, ranges: &LoadRanges) -> Result<Vec<LoadModel>> {
    if count == 0 {
        return Err(Error::InvalidLoad("count must be >= 1".into()));
    }
    for (name, (lo, hi)) in [
        ("mass", ranges.mass),
        ("damping", ranges.damping),
        ("stiffness", ranges.stiffness),
    ] {
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            return Err(Error::InvalidLoad(format!(
                "{name} range [{lo}, {hi}] must be positive and ordered"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |(lo, hi): (f64, f64)| lo * (hi / lo).powf(rng.random::<f64>());
    (0..count)
        .map(|_| {
            let m = draw(ranges.mass);
            let b = draw(ranges.damping);
            let k = draw(ranges.stiffness);
            LoadModel::new(m, b, k)
        })
        .collect()
}
