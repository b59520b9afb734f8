//! Load-independent metrics computed from the blocked (`Z_b`) and
//! transparency (`Z_t`) transfer functions.
//!
//! | metric | meaning | better |
//! |---|---|---|
//! | LCS | peak of `|Z_t/Z_b|` up to the blocked bandwidth | lower |
//! | TR  | H2 norm of `Z_t` | lower |
//! | PII | peak `|Z_t|` outside the band where `−Z_t` is strictly passive | lower `M`, wider band |
//! | LRT | `1 / max_ω μ(ω)`, smallest destabilizing load gain | higher |

use std::fmt;
use std::str::FromStr;

mod lcs;
mod passivity;
mod render;
mod report;
mod robustness;
mod transparency;

pub use lcs::{lcs, Lcs};
pub use passivity::{passivity_index, passivity_index_of, pii, PiiResult};
pub use render::{render_csv, render_markdown};
pub use report::{benchmark_report, MetricReport, ReportConfig};
pub use robustness::{lrt, mu_at, mu_siso};
pub use transparency::{transparency_residual, Tr};

/// Default ε for the passivity index interval.
pub const DEFAULT_EPSILON: f64 = 0.05;

/// Warnings and failures attached to a metric result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Flag {
    /// Measured `Z_t` does not decay enough inside the data band for TR.
    TailWarning,
    /// `Z_b` never drops 3 dB inside the analysis band.
    BandwidthUnresolved,
    /// No frequency satisfies the strict passivity condition.
    PiiIntervalEmpty,
    /// The lowest measured frequency stood in for DC.
    DcFromLowestFrequency,
    /// A metric could not be computed.
    MetricFailed { metric: String, message: String },
}

impl Flag {
    /// Informational flags do not make a report partial.
    pub fn is_warning(&self) -> bool {
        !matches!(self, Flag::DcFromLowestFrequency | Flag::PiiIntervalEmpty)
    }

    pub fn failed(metric: &str, err: impl fmt::Display) -> Self {
        Flag::MetricFailed {
            metric: metric.to_string(),
            message: err.to_string(),
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flag::TailWarning => f.write_str("tail_warning"),
            Flag::BandwidthUnresolved => f.write_str("bandwidth_unresolved"),
            Flag::PiiIntervalEmpty => f.write_str("pii_interval_empty"),
            Flag::DcFromLowestFrequency => f.write_str("dc_from_lowest_frequency"),
            Flag::MetricFailed { metric, message } => write!(f, "failed:{metric}:{message}"),
        }
    }
}

impl FromStr for Flag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "tail_warning" => Flag::TailWarning,
            "bandwidth_unresolved" => Flag::BandwidthUnresolved,
            "pii_interval_empty" => Flag::PiiIntervalEmpty,
            "dc_from_lowest_frequency" => Flag::DcFromLowestFrequency,
            other => {
                let rest = other
                    .strip_prefix("failed:")
                    .ok_or_else(|| format!("unknown flag {other:?}"))?;
                let (metric, message) = rest.split_once(':').unwrap_or((rest, ""));
                Flag::MetricFailed {
                    metric: metric.to_string(),
                    message: message.to_string(),
                }
            }
        })
    }
}

pub(crate) fn push_unique(flags: &mut Vec<Flag>, flag: Flag) {
    if !flags.contains(&flag) {
        flags.push(flag);
    }
}
