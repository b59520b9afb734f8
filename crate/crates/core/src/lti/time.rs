use std::io::Write;

use nalgebra::{DMatrix, DVector};

use super::{StateSpace, TransferFunction};
use crate::error::{Error, Result};

/// Sampled step response.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub time: Vec<f64>,
    pub output: Vec<f64>,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.time.len()
    }

    pub fn is_empty(&self) -> bool {
        self.time.is_empty()
    }

    /// Linear interpolation of the output at `t` (clamped to the series span).
    pub fn value_at(&self, t: f64) -> f64 {
        match self.time.iter().position(|&ti| ti >= t) {
            None => self.output[self.len() - 1],
            Some(0) => self.output[0],
            Some(k) => lerp_at(
                self.time[k - 1],
                self.time[k],
                self.output[k - 1],
                self.output[k],
                t,
            ),
        }
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t_s,y")?;
        for (t, y) in self.time.iter().zip(&self.output) {
            writeln!(out, "{t},{y}")?;
        }
        Ok(())
    }
}

fn lerp_at(t0: f64, t1: f64, y0: f64, y1: f64, t: f64) -> f64 {
    y0 + (y1 - y0) * (t - t0) / (t1 - t0)
}

/// Default step for a simulation horizon: `min(0.5/ω_fast, t_end/2000)`.
pub fn default_step(tf: &TransferFunction, t_end: f64) -> f64 {
    let fastest = tf.poles().iter().map(|p| p.norm()).fold(0.0, f64::max);
    let by_horizon = t_end / 2000.0;
    if fastest > 0.0 {
        by_horizon.min(0.5 / fastest)
    } else {
        by_horizon
    }
}

/// Horizon long enough for the slowest mode to decay by roughly `e^-12`.
pub fn settling_horizon(tf: &TransferFunction) -> f64 {
    let slowest = tf
        .poles()
        .iter()
        .map(|p| -p.re)
        .filter(|&d| d > 0.0)
        .fold(f64::INFINITY, f64::min);
    if slowest.is_finite() {
        12.0 / slowest
    } else {
        1.0
    }
}

/// Unit-step response by exact zero-order-hold discretization of the
/// controllable canonical realization. `dt` defaults to [`default_step`];
/// it is shrunk slightly so the last sample lands on `t_end`.
pub fn step_response(tf: &TransferFunction, t_end: f64, dt: Option<f64>) -> Result<TimeSeries> {
    if !tf.is_proper() {
        return Err(Error::ImproperSystem);
    }
    if !tf.is_stable() {
        return Err(Error::UnstableSystem);
    }
    let dt = dt.unwrap_or_else(|| default_step(tf, t_end));
    if !(dt > 0.0 && t_end > 0.0 && dt.is_finite() && t_end.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "need dt > 0 and t_end > 0, got dt={dt}, t_end={t_end}"
        )));
    }
    let steps = ((t_end / dt) - 1e-9).ceil().max(1.0) as usize;
    let h = t_end / steps as f64;

    let ss = StateSpace::from_tf(tf)?;
    let n = ss.order();
    let mut aug = DMatrix::<f64>::zeros(n + 1, n + 1);
    aug.view_mut((0, 0), (n, n)).copy_from(&(&ss.a * h));
    aug.view_mut((0, n), (n, 1)).copy_from(&(&ss.b * h));
    let e = aug.exp();
    let phi = e.view((0, 0), (n, n)).into_owned();
    let gamma: DVector<f64> = e.view((0, n), (n, 1)).column(0).into_owned();

    let mut x = DVector::<f64>::zeros(n);
    let mut time = Vec::with_capacity(steps + 1);
    let mut output = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        time.push(k as f64 * h);
        output.push((&ss.c * &x)[(0, 0)] + ss.d);
        x = &phi * &x + &gamma;
    }
    Ok(TimeSeries { time, output })
}

/// Largest sample, refined by a parabola through its neighbours when the
/// maximum is interior.
fn sampled_peak(z: &[f64]) -> f64 {
    let (k, &peak) = z
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty series");
    if k == 0 || k + 1 == z.len() {
        return peak;
    }
    let (a, b, c) = (z[k - 1], peak, z[k + 1]);
    let curvature = a - 2.0 * b + c;
    if curvature >= 0.0 {
        return peak;
    }
    b - 0.125 * (c - a).powi(2) / curvature
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepMetrics {
    /// `max(0, (max y − dc) / dc)`.
    pub overshoot: f64,
    /// 10 % to 90 % rise time, s.
    pub rise_time: f64,
    /// Last time the response sits outside the 2 % band, s.
    pub settling_time: f64,
}

pub fn step_metrics(series: &TimeSeries, dc_gain: f64) -> Result<StepMetrics> {
    if dc_gain == 0.0 {
        return Err(Error::ZeroDcGain);
    }
    if series.is_empty() {
        return Err(Error::NotSettled);
    }
    let z: Vec<f64> = series.output.iter().map(|y| y / dc_gain).collect();
    let t = &series.time;

    let tail = (z.len() as f64 * 0.1).ceil().max(1.0) as usize;
    if z[z.len() - tail..].iter().any(|v| (v - 1.0).abs() >= 0.01) {
        return Err(Error::NotSettled);
    }

    let overshoot = (sampled_peak(&z) - 1.0).max(0.0);

    let first_crossing = |level: f64| -> f64 {
        match z.iter().position(|&v| v >= level) {
            Some(0) | None => t[0],
            Some(k) => lerp_at(z[k - 1], z[k], t[k - 1], t[k], level),
        }
    };
    let rise_time = first_crossing(0.9) - first_crossing(0.1);

    let settling_time = match z.iter().rposition(|v| (v - 1.0).abs() > 0.02) {
        None => t[0],
        Some(k) if k + 1 == z.len() => t[k],
        Some(k) => {
            let (e0, e1) = ((z[k] - 1.0).abs(), (z[k + 1] - 1.0).abs());
            lerp_at(e0, e1, t[k], t[k + 1], 0.02)
        }
    };

    Ok(StepMetrics {
        overshoot,
        rise_time,
        settling_time,
    })
}
