use serde::{Deserialize, Serialize};

use super::{lcs, lrt, pii, push_unique, transparency_residual, Flag, PiiResult, DEFAULT_EPSILON};
use crate::error::{Error, Result};
use crate::frd::FrequencyGrid;
use crate::lti::{settling_horizon, step_metrics, step_response, StepMetrics, TransferFunction};
use crate::system::{system_bandwidth, System};

/// Analysis settings shared by every metric in a report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportConfig {
    pub epsilon: f64,
    pub grid: FrequencyGrid,
    /// Replaces the blocked bandwidth as the LCS band limit.
    pub omega_b: Option<f64>,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
            grid: FrequencyGrid::default(),
            omega_b: None,
        }
    }
}

/// All metrics for one controller. A metric that could not be computed is
/// `None` and explained by a [`Flag::MetricFailed`] entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub name: String,
    pub epsilon: f64,
    #[serde(with = "float_or_inf")]
    pub lcs: Option<f64>,
    #[serde(rename = "lcs_argmax_rad_s", with = "float_or_inf")]
    pub lcs_argmax: Option<f64>,
    #[serde(with = "float_or_inf")]
    pub tr: Option<f64>,
    #[serde(default)]
    pub tr_units: String,
    #[serde(with = "pii_json")]
    pub pii: Option<PiiResult>,
    #[serde(with = "float_or_inf")]
    pub lrt: Option<f64>,
    #[serde(rename = "bandwidth_rad_s", with = "float_or_inf")]
    pub bandwidth: Option<f64>,
    #[serde(with = "float_or_inf")]
    pub overshoot: Option<f64>,
    #[serde(rename = "rise_time_s", with = "float_or_inf")]
    pub rise_time: Option<f64>,
    #[serde(with = "flag_list")]
    pub flags: Vec<Flag>,
}

impl MetricReport {
    /// A row with no metrics, e.g. when the inputs could not be loaded.
    pub fn blank(name: &str, epsilon: f64, flags: Vec<Flag>) -> Self {
        Self {
            name: name.to_string(),
            epsilon,
            lcs: None,
            lcs_argmax: None,
            tr: None,
            tr_units: String::new(),
            pii: None,
            lrt: None,
            bandwidth: None,
            overshoot: None,
            rise_time: None,
            flags,
        }
    }

    /// True when some metric failed or a warning was raised.
    pub fn is_partial(&self) -> bool {
        self.flags.iter().any(Flag::is_warning)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        let mut report: Self = serde_json::from_str(text)?;
        if let Some(p) = report.pii.as_mut() {
            p.epsilon = report.epsilon;
        }
        Ok(report)
    }
}

/// Runs every metric on one `(Z_b, Z_t)` pair, collecting failures as flags.
pub fn benchmark_report(
    zb: &System,
    zt: &System,
    config: &ReportConfig,
    name: &str,
) -> Result<MetricReport> {
    if !(config.epsilon > 0.0 && config.epsilon < 1.0) {
        return Err(Error::InvalidEpsilon(config.epsilon));
    }
    let grid = &config.grid;
    let mut flags = Vec::new();
    let record =
        |flags: &mut Vec<Flag>, metric: &str, err: Error| flags.push(Flag::failed(metric, err));

    let mut bandwidth = None;
    match system_bandwidth(zb, grid) {
        Ok((bw, approximated)) => {
            bandwidth = Some(bw.omega);
            if !bw.resolved {
                push_unique(&mut flags, Flag::BandwidthUnresolved);
            }
            if approximated {
                push_unique(&mut flags, Flag::DcFromLowestFrequency);
            }
        }
        Err(e) => record(&mut flags, "bandwidth", e),
    }

    let (mut lcs_value, mut lcs_argmax) = (None, None);
    match lcs(zt, zb, grid, config.omega_b) {
        Ok(r) => {
            lcs_value = Some(r.value);
            lcs_argmax = Some(r.omega);
            for f in r.flags {
                push_unique(&mut flags, f);
            }
        }
        Err(e) => record(&mut flags, "lcs", e),
    }

    let mut tr = None;
    match transparency_residual(zt) {
        Ok(r) => {
            tr = Some(r.value);
            for f in r.flags {
                push_unique(&mut flags, f);
            }
        }
        Err(e) => record(&mut flags, "tr", e),
    }

    let mut pii_result = None;
    match pii(zt, config.epsilon, grid) {
        Ok(r) => {
            if r.interval_empty {
                push_unique(&mut flags, Flag::PiiIntervalEmpty);
            }
            pii_result = Some(r);
        }
        Err(e) => record(&mut flags, "pii", e),
    }

    let mut lrt_value = None;
    match lrt(zt, grid) {
        Ok(v) => lrt_value = Some(v),
        Err(e) => record(&mut flags, "lrt", e),
    }

    let (mut overshoot, mut rise_time) = (None, None);
    match zb
        .as_model()
        .ok_or(Error::NeedsModel)
        .and_then(blocked_step_metrics)
    {
        Ok(m) => {
            overshoot = Some(m.overshoot);
            rise_time = Some(m.rise_time);
        }
        Err(e) => record(&mut flags, "step", e),
    }

    Ok(MetricReport {
        name: name.to_string(),
        epsilon: config.epsilon,
        lcs: lcs_value,
        lcs_argmax,
        tr,
        tr_units: zt.units().to_string(),
        pii: pii_result,
        lrt: lrt_value,
        bandwidth,
        overshoot,
        rise_time,
        flags,
    })
}

/// Step metrics of `Z_b` normalized by its DC gain. The horizon starts at
/// twelve slowest time constants and doubles (up to three times) if the
/// response has not settled.
fn blocked_step_metrics(zb: &TransferFunction) -> Result<StepMetrics> {
    let dc = zb.dc_gain()?;
    let mut horizon = settling_horizon(zb);
    let mut last = Error::NotSettled;
    for _ in 0..4 {
        let series = step_response(zb, horizon, None)?;
        match step_metrics(&series, dc) {
            Err(Error::NotSettled) => {
                last = Error::NotSettled;
                horizon *= 2.0;
            }
            other => return other,
        }
    }
    Err(last)
}

/// `Option<f64>` as a JSON number, `"inf"`/`"-inf"`, or `null`.
mod float_or_inf {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};
    use serde_json::Value;

    pub fn serialize<S: Serializer>(value: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) if v.is_finite() => s.serialize_f64(*v),
            Some(v) if *v == f64::INFINITY => s.serialize_str("inf"),
            Some(v) if *v == f64::NEG_INFINITY => s.serialize_str("-inf"),
            _ => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        match Value::deserialize(d)? {
            Value::Null => Ok(None),
            Value::Number(n) => n
                .as_f64()
                .map(Some)
                .ok_or_else(|| D::Error::custom("bad number")),
            Value::String(s) if s == "inf" => Ok(Some(f64::INFINITY)),
            Value::String(s) if s == "-inf" => Ok(Some(f64::NEG_INFINITY)),
            other => Err(D::Error::custom(format!(
                "expected number, \"inf\" or null, got {other}"
            ))),
        }
    }
}

mod pii_json {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::super::PiiResult;

    #[derive(Serialize, Deserialize)]
    struct Wire {
        #[serde(rename = "M")]
        m: f64,
        omega1_rad_s: f64,
        omega2_rad_s: f64,
        interval_empty: bool,
    }

    pub fn serialize<S: Serializer>(value: &Option<PiiResult>, s: S) -> Result<S::Ok, S::Error> {
        value
            .map(|p| Wire {
                m: p.m,
                omega1_rad_s: p.omega1,
                omega2_rad_s: p.omega2,
                interval_empty: p.interval_empty,
            })
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<PiiResult>, D::Error> {
        Ok(Option::<Wire>::deserialize(d)?.map(|w| PiiResult {
            omega1: w.omega1_rad_s,
            omega2: w.omega2_rad_s,
            m: w.m,
            epsilon: f64::NAN,
            interval_empty: w.interval_empty,
        }))
    }
}

mod flag_list {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::super::Flag;

    pub fn serialize<S: Serializer>(flags: &[Flag], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(flags.iter().map(|f| f.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Flag>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(D::Error::custom))
            .collect()
    }
}
