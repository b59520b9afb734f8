//! Frequency-response data: sampled complex responses on a frequency grid,
//! loaded from CSV or sampled from a model, with Bode-style interpolation.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lti::TransferFunction;

/// Logarithmically spaced frequency grid in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid {
    omega_min: f64,
    omega_max: f64,
    points: usize,
}

impl Default for FrequencyGrid {
    /// 1e-3 to 1e4 rad/s, 2000 points.
    fn default() -> Self {
        Self {
            omega_min: 1e-3,
            omega_max: 1e4,
            points: 2000,
        }
    }
}

impl FrequencyGrid {
    pub fn new(omega_min: f64, omega_max: f64, points: usize) -> Result<Self> {
        if !(omega_min.is_finite() && omega_max.is_finite()) {
            return Err(Error::InvalidGrid("bounds must be finite".into()));
        }
        if !(0.0 < omega_min && omega_min < omega_max) {
            return Err(Error::InvalidGrid(format!(
                "need 0 < omega_min < omega_max, got [{omega_min}, {omega_max}]"
            )));
        }
        if points < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 points, got {points}"
            )));
        }
        Ok(Self {
            omega_min,
            omega_max,
            points,
        })
    }

    pub fn omega_min(&self) -> f64 {
        self.omega_min
    }

    pub fn omega_max(&self) -> f64 {
        self.omega_max
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let (lo, hi) = (self.omega_min.ln(), self.omega_max.ln());
        let step = (hi - lo) / (self.points - 1) as f64;
        let mut w: Vec<f64> = (0..self.points)
            .map(|k| (lo + step * k as f64).exp())
            .collect();
        w[0] = self.omega_min;
        w[self.points - 1] = self.omega_max;
        w
    }
}

/// Column layout of an FRD CSV file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsvLayout {
    /// `omega_rad_s,real,imag`
    RealImag,
    /// `omega_rad_s,mag_db,phase_deg`
    MagPhase,
}

impl CsvLayout {
    pub fn header(self) -> &'static str {
        match self {
            CsvLayout::RealImag => "omega_rad_s,real,imag",
            CsvLayout::MagPhase => "omega_rad_s,mag_db,phase_deg",
        }
    }

    fn from_header(header: &str) -> Option<Self> {
        [CsvLayout::RealImag, CsvLayout::MagPhase]
            .into_iter()
            .find(|l| l.header() == header)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyResponseData {
    frequencies: Vec<f64>,
    responses: Vec<Complex64>,
    units: String,
    phase: Vec<f64>,
}

impl FrequencyResponseData {
    pub fn new(
        frequencies: Vec<f64>,
        responses: Vec<Complex64>,
        units: impl Into<String>,
    ) -> Result<Self> {
        if frequencies.len() != responses.len() {
            return Err(Error::LengthMismatch {
                frequencies: frequencies.len(),
                responses: responses.len(),
            });
        }
        if frequencies.len() < 2 {
            return Err(Error::TooFewPoints {
                needed: 2,
                got: frequencies.len(),
            });
        }
        if let Some(&omega) = frequencies.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidFrequency { omega });
        }
        if responses
            .iter()
            .any(|h| !(h.re.is_finite() && h.im.is_finite()))
        {
            return Err(Error::InvalidConfig("non-finite response value".into()));
        }
        for (i, pair) in frequencies.windows(2).enumerate() {
            if pair[1] == pair[0] {
                return Err(Error::DuplicateFrequency { omega: pair[0] });
            }
            if pair[1] < pair[0] {
                return Err(Error::NonMonotonicFrequency { index: i + 1 });
            }
        }
        let phase = unwrap_phase(responses.iter().map(|h| h.arg()));
        Ok(Self {
            frequencies,
            responses,
            units: units.into(),
            phase,
        })
    }

    /// Samples `tf` at every grid frequency.
    pub fn from_tf(tf: &TransferFunction, grid: &FrequencyGrid) -> Result<Self> {
        let frequencies = grid.frequencies();
        let responses = frequencies
            .iter()
            .map(|&w| tf.eval(w))
            .collect::<Result<Vec<_>>>()?;
        Self::new(frequencies, responses, tf.units())
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn responses(&self) -> &[Complex64] {
        &self.responses
    }

    pub fn units(&self) -> &str {
        &self.units
    }

    pub fn with_units(mut self, units: impl Into<String>) -> Self {
        self.units = units.into();
        self
    }

    /// Phase in radians, unwrapped so consecutive samples differ by at most π.
    pub fn unwrapped_phase(&self) -> &[f64] {
        &self.phase
    }

    pub fn omega_min(&self) -> f64 {
        self.frequencies[0]
    }

    pub fn omega_max(&self) -> f64 {
        self.frequencies[self.frequencies.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    /// Interpolates linearly in `ln ω` on log-magnitude and unwrapped phase.
    /// Exact at sample points; never extrapolates.
    pub fn interp(&self, omega: f64) -> Result<Complex64> {
        let (min, max) = (self.omega_min(), self.omega_max());
        if !(omega >= min && omega <= max) {
            return Err(Error::OutOfRange { omega, min, max });
        }
        let i = match self.frequencies.binary_search_by(|w| w.total_cmp(&omega)) {
            Ok(i) => return Ok(self.responses[i]),
            Err(i) => i - 1,
        };
        let (w0, w1) = (self.frequencies[i], self.frequencies[i + 1]);
        let (h0, h1) = (self.responses[i], self.responses[i + 1]);
        let t = (omega / w0).ln() / (w1 / w0).ln();
        if h0.norm() == 0.0 || h1.norm() == 0.0 {
            return Ok(h0 + (h1 - h0) * t);
        }
        let log_mag = (1.0 - t) * h0.norm().ln() + t * h1.norm().ln();
        let phase = (1.0 - t) * self.phase[i] + t * self.phase[i + 1];
        Ok(Complex64::from_polar(log_mag.exp(), phase))
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::new(
            self.frequencies.clone(),
            self.responses.iter().map(|h| h * k).collect(),
            self.units.clone(),
        )
        .expect("scaling preserves validity")
    }

    pub fn from_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .has_headers(true)
            .from_path(path)
            .map_err(|e| Error::io(path, e))?;

        let parse_err = |line: u64, column: usize, message: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            column,
            message,
        };

        let header = reader
            .headers()
            .map_err(|e| parse_err(1, 0, e.to_string()))?
            .iter()
            .collect::<Vec<_>>()
            .join(",");
        let layout = CsvLayout::from_header(&header).ok_or_else(|| {
            parse_err(
                1,
                0,
                format!(
                    "unrecognized header {header:?}; expected {:?} or {:?}",
                    CsvLayout::RealImag.header(),
                    CsvLayout::MagPhase.header()
                ),
            )
        })?;

        let mut rows: Vec<(f64, Complex64)> = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| {
                let line = e.position().map(|p| p.line()).unwrap_or(0);
                parse_err(line, 0, e.to_string())
            })?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            let mut values = [0.0; 3];
            for (col, value) in values.iter_mut().enumerate() {
                let field = record.get(col).unwrap_or("");
                *value = field.parse::<f64>().map_err(|_| {
                    parse_err(line, col + 1, format!("cannot parse {field:?} as a number"))
                })?;
            }
            let [omega, a, b] = values;
            let response = match layout {
                CsvLayout::RealImag => Complex64::new(a, b),
                CsvLayout::MagPhase => Complex64::from_polar(10f64.powf(a / 20.0), b.to_radians()),
            };
            rows.push((omega, response));
        }
        rows.sort_by(|x, y| x.0.total_cmp(&y.0));
        let (frequencies, responses) = rows.into_iter().unzip();
        Self::new(frequencies, responses, "")
    }

    /// Writes the data as CSV in the requested layout. Phase is unwrapped in
    /// the magnitude/phase layout.
    pub fn write_csv<W: Write>(&self, mut out: W, layout: CsvLayout) -> std::io::Result<()> {
        writeln!(out, "{}", layout.header())?;
        for (i, (&w, h)) in self.frequencies.iter().zip(&self.responses).enumerate() {
            match layout {
                CsvLayout::RealImag => writeln!(out, "{w},{},{}", h.re, h.im)?,
                CsvLayout::MagPhase => writeln!(
                    out,
                    "{w},{},{}",
                    20.0 * h.norm().log10(),
                    self.phase[i].to_degrees()
                )?,
            }
        }
        Ok(())
    }
}

pub(crate) fn unwrap_phase(raw: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for p in raw {
        let next = match out.last() {
            None => p,
            Some(&prev) => {
                let mut q = p;
                while q - prev > PI {
                    q -= 2.0 * PI;
                }
                while q - prev <= -PI {
                    q += 2.0 * PI;
                }
                q
            }
        };
        out.push(next);
    }
    out
}
