use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frd::{FrequencyGrid, FrequencyResponseData};
use crate::lti::{self, Bandwidth, TransferFunction};

/// A SISO system known either as a rational model or as measured frequency
/// response. Every metric accepts both.
#[derive(Debug, Clone, PartialEq)]
pub enum System {
    Model(TransferFunction),
    Data(FrequencyResponseData),
}

impl From<TransferFunction> for System {
    fn from(tf: TransferFunction) -> Self {
        System::Model(tf)
    }
}

impl From<FrequencyResponseData> for System {
    fn from(frd: FrequencyResponseData) -> Self {
        System::Data(frd)
    }
}

impl System {
    pub fn eval(&self, omega: f64) -> Result<Complex64> {
        match self {
            System::Model(tf) => tf.eval(omega),
            System::Data(frd) => frd.interp(omega),
        }
    }

    pub fn magnitude(&self, omega: f64) -> f64 {
        self.eval(omega).map_or(f64::NAN, |h| h.norm())
    }

    pub fn as_model(&self) -> Option<&TransferFunction> {
        match self {
            System::Model(tf) => Some(tf),
            System::Data(_) => None,
        }
    }

    pub fn units(&self) -> &str {
        match self {
            System::Model(tf) => tf.units(),
            System::Data(frd) => frd.units(),
        }
    }

    /// Measured band, `None` for models.
    pub fn band(&self) -> Option<(f64, f64)> {
        match self {
            System::Model(_) => None,
            System::Data(frd) => Some((frd.omega_min(), frd.omega_max())),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            System::Model(tf) => tf.is_zero(),
            System::Data(frd) => frd.responses().iter().all(|h| h.norm() == 0.0),
        }
    }

    pub fn scale(&self, k: f64) -> System {
        match self {
            System::Model(tf) => System::Model(tf.scale(k)),
            System::Data(frd) => System::Data(frd.scale(k)),
        }
    }

    /// Frequencies a metric scans: the grid for a model, the samples for data.
    pub fn frequencies(&self, grid: &FrequencyGrid) -> Vec<f64> {
        match self {
            System::Model(_) => grid.frequencies(),
            System::Data(frd) => frd.frequencies().to_vec(),
        }
    }
}

/// Band shared by all data-backed systems (`None` if every system is a model).
pub fn common_band(systems: &[&System]) -> Result<Option<(f64, f64)>> {
    let mut band: Option<(f64, f64)> = None;
    for (lo, hi) in systems.iter().filter_map(|s| s.band()) {
        band = Some(match band {
            None => (lo, hi),
            Some((a, b)) => (a.max(lo), b.min(hi)),
        });
    }
    match band {
        Some((lo, hi)) if lo >= hi => Err(Error::BandMismatch(format!(
            "measured bands share no frequencies (would need {lo} < {hi})"
        ))),
        other => Ok(other),
    }
}

/// Frequencies for a joint scan: the grid when every system is a model,
/// otherwise the union of the measured samples inside the common band.
pub fn common_frequencies(systems: &[&System], grid: &FrequencyGrid) -> Result<Vec<f64>> {
    let Some((lo, hi)) = common_band(systems)? else {
        return Ok(grid.frequencies());
    };
    let mut w: Vec<f64> = systems
        .iter()
        .filter_map(|s| match s {
            System::Data(frd) => Some(frd.frequencies()),
            System::Model(_) => None,
        })
        .flatten()
        .copied()
        .filter(|&w| w >= lo && w <= hi)
        .collect();
    w.sort_by(f64::total_cmp);
    w.dedup();
    Ok(w)
}

/// -3 dB bandwidth of either kind of system. For data the lowest measured
/// frequency stands in for DC; the second field reports whether that
/// substitution happened.
pub fn system_bandwidth(sys: &System, grid: &FrequencyGrid) -> Result<(Bandwidth, bool)> {
    match sys {
        System::Model(tf) => Ok((lti::bandwidth(tf, grid)?, false)),
        System::Data(frd) => {
            let start = frd.omega_min();
            let reference = frd.responses()[0].norm();
            let bw =
                lti::crossing_below(|w| sys.magnitude(w), reference, start, frd.frequencies())?;
            Ok((bw, true))
        }
    }
}
