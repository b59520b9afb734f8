//! Rational fits to measured frequency responses (linearized least squares
//! with iterative reweighting), so model-only metrics can be applied to data.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frd::FrequencyResponseData;
use crate::lti::TransferFunction;

const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    pub num_order: usize,
    /// 0 only makes sense with `num_order = 0` (a static gain).
    pub den_order: usize,
    /// Weighted solves; each reweights by the previous denominator, the first
    /// by `(s/ω0 + 1)^n` so no decade dominates.
    pub iterations: usize,
    pub weight: Option<Vec<f64>>,
}

impl FitConfig {
    pub fn new(num_order: usize, den_order: usize, iterations: usize) -> Self {
        Self {
            num_order,
            den_order,
            iterations,
            weight: None,
        }
    }

    fn validate(&self, points: usize) -> Result<()> {
        if self.num_order > self.den_order + 1 {
            return Err(Error::InvalidConfig(format!(
                "num_order {} exceeds den_order + 1 = {}",
                self.num_order,
                self.den_order + 1
            )));
        }
        if self.den_order == 0 && self.num_order > 0 {
            return Err(Error::InvalidConfig(
                "den_order 0 requires num_order 0".into(),
            ));
        }
        if !(1..=100).contains(&self.iterations) {
            return Err(Error::InvalidConfig(format!(
                "iterations must be in 1..=100, got {}",
                self.iterations
            )));
        }
        if let Some(w) = &self.weight {
            if w.len() != points {
                return Err(Error::InvalidConfig(format!(
                    "{} weights for {points} points",
                    w.len()
                )));
            }
            if w.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
                return Err(Error::InvalidConfig(
                    "weights must be positive and finite".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fit {
    pub tf: TransferFunction,
    pub relative_rms_error: f64,
    /// Unstable fits are returned unchanged with this flag cleared.
    pub stable: bool,
}

/// Ascending-power polynomial evaluation.
fn eval_ascending(c: &[f64], s: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &k| acc * s + k)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn fit_rational(frd: &FrequencyResponseData, cfg: &FitConfig) -> Result<Fit> {
    let n_points = frd.len();
    cfg.validate(n_points)?;
    let (m, n) = (cfg.num_order, cfg.den_order);
    let unknowns = m + 1 + n;
    if n_points < unknowns {
        return Err(Error::InsufficientData {
            needed: unknowns,
            got: n_points,
        });
    }

    // Work in s / ω0 with ω0 the geometric mean frequency.
    let w0 = (frd.frequencies().iter().map(|w| w.ln()).sum::<f64>() / n_points as f64).exp();
    let s: Vec<Complex64> = frd
        .frequencies()
        .iter()
        .map(|&w| Complex64::new(0.0, w / w0))
        .collect();
    let h = frd.responses();

    // Unknowns: b_0..b_m, then d_0..d_{n-1}; D = s^n + Σ d_k s^k.
    let mut den: Vec<f64> = (0..=n).map(|k| binomial(n, k)).collect();
    let mut num = vec![0.0; m + 1];
    for _ in 0..cfg.iterations {
        let mut a = DMatrix::<f64>::zeros(2 * n_points, unknowns);
        let mut rhs = DVector::<f64>::zeros(2 * n_points);
        for i in 0..n_points {
            let user = cfg.weight.as_ref().map_or(1.0, |w| w[i]);
            let weight = user / eval_ascending(&den, s[i]).norm();
            let mut power = Complex64::new(1.0, 0.0);
            for k in 0..=m.max(n) {
                if k <= m {
                    let v = power * weight;
                    a[(2 * i, k)] = v.re;
                    a[(2 * i + 1, k)] = v.im;
                }
                if k < n {
                    let v = -h[i] * power * weight;
                    a[(2 * i, m + 1 + k)] = v.re;
                    a[(2 * i + 1, m + 1 + k)] = v.im;
                }
                power *= s[i];
            }
            let r = h[i] * s[i].powu(n as u32) * weight;
            rhs[2 * i] = r.re;
            rhs[2 * i + 1] = r.im;
        }

        // Column equilibration before the solve and the conditioning check.
        let norms: Vec<f64> = a.column_iter().map(|c| c.norm()).collect();
        for (j, &c) in norms.iter().enumerate() {
            if c > 0.0 {
                a.column_mut(j).unscale_mut(c);
            }
        }
        let svd = a.svd(true, true);
        let sv = &svd.singular_values;
        let (smax, smin) = (sv.max(), sv.min());
        let condition = if smin > 0.0 {
            (smax / smin).powi(2)
        } else {
            f64::INFINITY
        };
        if condition > MAX_CONDITION {
            return Err(Error::IllConditioned { condition });
        }
        let x = svd
            .solve(&rhs, 0.0)
            .map_err(|_| Error::IllConditioned { condition })?;
        for j in 0..unknowns {
            let v = if norms[j] > 0.0 { x[j] / norms[j] } else { 0.0 };
            if j <= m {
                num[j] = v;
            } else {
                den[j - m - 1] = v;
            }
        }
    }

    // Undo the frequency scaling: c_k (s/ω0)^k, then to descending order.
    let unscale = |c: &[f64]| -> Vec<f64> {
        c.iter()
            .enumerate()
            .map(|(k, &v)| v / w0.powi(k as i32))
            .rev()
            .collect()
    };
    let tf = TransferFunction::new(&unscale(&num), &unscale(&den))?.with_units(frd.units());
    Ok(Fit {
        relative_rms_error: fit_error(&tf, frd),
        stable: tf.is_stable(),
        tf,
    })
}

/// `sqrt(mean |tf − data|²) / sqrt(mean |data|²)`; infinite if the fit has a
/// pole on a measured frequency.
pub fn fit_error(tf: &TransferFunction, frd: &FrequencyResponseData) -> f64 {
    let mut residual = 0.0;
    let mut energy = 0.0;
    for (&w, &h) in frd.frequencies().iter().zip(frd.responses()) {
        match tf.eval(w) {
            Ok(g) => residual += (g - h).norm_sqr(),
            Err(_) => return f64::INFINITY,
        }
        energy += h.norm_sqr();
    }
    (residual / energy).sqrt()
}
