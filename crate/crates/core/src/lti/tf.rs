use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly;

/// Default real-part margin for the stability verdict.
pub const STABILITY_TOL: f64 = 1e-9;
/// Root distance below which a pole and a zero are treated as cancelling.
pub const CANCELLATION_TOL: f64 = 1e-8;

/// Continuous-time SISO rational transfer function `num(s) / den(s)`.
///
/// Coefficients are in descending powers of `s`. Construction strips leading
/// zeros and scales both polynomials so the denominator is monic. Common
/// factors are never cancelled here.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferFunction {
    num: Vec<f64>,
    den: Vec<f64>,
    units: String,
}

impl TransferFunction {
    pub fn new(num: &[f64], den: &[f64]) -> Result<Self> {
        if num.iter().chain(den).any(|c| !c.is_finite()) {
            return Err(Error::InvalidConfig("non-finite coefficient".into()));
        }
        let den = poly::trim(den);
        if poly::is_zero(&den) {
            return Err(Error::ZeroDenominator);
        }
        let lead = den[0];
        let num = poly::scale(num, 1.0 / lead);
        let den = den.iter().map(|&c| c / lead).collect();
        Ok(Self {
            num,
            den,
            units: String::new(),
        })
    }

    pub fn gain(k: f64) -> Self {
        Self {
            num: poly::trim(&[k]),
            den: vec![1.0],
            units: String::new(),
        }
    }

    pub fn zero() -> Self {
        Self::gain(0.0)
    }

    pub fn with_units(mut self, units: impl Into<String>) -> Self {
        self.units = units.into();
        self
    }

    pub fn num(&self) -> &[f64] {
        &self.num
    }

    pub fn den(&self) -> &[f64] {
        &self.den
    }

    pub fn units(&self) -> &str {
        &self.units
    }

    /// Degree of the denominator.
    pub fn order(&self) -> usize {
        poly::degree(&self.den)
    }

    pub fn is_zero(&self) -> bool {
        poly::is_zero(&self.num)
    }

    pub fn is_proper(&self) -> bool {
        self.is_zero() || poly::degree(&self.num) <= self.order()
    }

    pub fn is_strictly_proper(&self) -> bool {
        self.is_zero() || poly::degree(&self.num) < self.order()
    }

    /// Evaluates at an arbitrary complex point.
    pub fn eval_s(&self, s: Complex64) -> Option<Complex64> {
        let d = poly::eval(&self.den, s);
        if d.norm() < 1e-300 {
            return None;
        }
        Some(poly::eval(&self.num, s) / d)
    }

    /// Frequency response `H(jω)`.
    pub fn eval(&self, omega: f64) -> Result<Complex64> {
        if !omega.is_finite() || omega < 0.0 {
            return Err(Error::InvalidFrequency { omega });
        }
        self.eval_s(Complex64::new(0.0, omega))
            .ok_or(Error::PoleOnAxis { omega })
    }

    pub fn dc_gain(&self) -> Result<f64> {
        self.eval(0.0).map(|h| h.re)
    }

    /// `lim |H(jω)|` as `ω → ∞`; infinite for improper systems.
    pub fn high_frequency_gain(&self) -> f64 {
        if self.is_strictly_proper() {
            0.0
        } else if self.is_proper() {
            self.num[0].abs()
        } else {
            f64::INFINITY
        }
    }

    pub fn poles(&self) -> Vec<Complex64> {
        poly::roots(&self.den)
    }

    /// Frequencies where lightly damped poles peak: `|Im p|` and `|p|` of
    /// every complex pole. Grids can step over such peaks.
    pub(crate) fn resonances(&self) -> Vec<f64> {
        self.poles()
            .iter()
            .filter(|p| p.im > 0.0)
            .flat_map(|p| [p.im, p.norm()])
            .filter(|w| w.is_finite())
            .collect()
    }

    pub fn zeros(&self) -> Vec<Complex64> {
        if self.is_zero() {
            return Vec::new();
        }
        poly::roots(&self.num)
    }

    /// Poles left after removing pole/zero pairs closer than `CANCELLATION_TOL`.
    pub fn uncancelled_poles(&self) -> Vec<Complex64> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut zeros = self.zeros();
        let mut remaining = Vec::new();
        for p in self.poles() {
            let nearest = zeros
                .iter()
                .enumerate()
                .map(|(i, z)| (i, (z - p).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1));
            match nearest {
                Some((i, d)) if d <= CANCELLATION_TOL => {
                    zeros.swap_remove(i);
                }
                _ => remaining.push(p),
            }
        }
        remaining
    }

    pub fn is_stable(&self) -> bool {
        self.is_stable_with(STABILITY_TOL)
    }

    /// True iff every pole surviving cancellation has `Re < -tol`.
    pub fn is_stable_with(&self, tol: f64) -> bool {
        self.uncancelled_poles().iter().all(|p| p.re < -tol)
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            num: poly::scale(&self.num, k),
            den: self.den.clone(),
            units: self.units.clone(),
        }
    }

    /// `self / rhs`, without cancelling common factors.
    pub fn try_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZeroSystem);
        }
        let num = poly::mul(&self.num, &rhs.den);
        let den = poly::mul(&self.den, &rhs.num);
        Self::new(&num, &den)
    }

    fn combined_units(&self, rhs: &Self) -> String {
        if self.units == rhs.units {
            self.units.clone()
        } else {
            String::new()
        }
    }
}

impl Add for &TransferFunction {
    type Output = TransferFunction;

    fn add(self, rhs: &TransferFunction) -> TransferFunction {
        let (num, den) = if self.den == rhs.den {
            (poly::add(&self.num, &rhs.num), self.den.clone())
        } else {
            (
                poly::add(
                    &poly::mul(&self.num, &rhs.den),
                    &poly::mul(&rhs.num, &self.den),
                ),
                poly::mul(&self.den, &rhs.den),
            )
        };
        TransferFunction {
            num,
            den,
            units: self.combined_units(rhs),
        }
    }
}

impl Sub for &TransferFunction {
    type Output = TransferFunction;

    fn sub(self, rhs: &TransferFunction) -> TransferFunction {
        self + &(-rhs)
    }
}

impl Mul for &TransferFunction {
    type Output = TransferFunction;

    fn mul(self, rhs: &TransferFunction) -> TransferFunction {
        TransferFunction {
            num: poly::mul(&self.num, &rhs.num),
            den: poly::mul(&self.den, &rhs.den),
            units: String::new(),
        }
    }
}

impl Neg for &TransferFunction {
    type Output = TransferFunction;

    fn neg(self) -> TransferFunction {
        self.scale(-1.0)
    }
}

impl fmt::Display for TransferFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn render(p: &[f64]) -> String {
            let n = poly::degree(p);
            let mut out = String::new();
            for (i, &c) in p.iter().enumerate().filter(|(_, &c)| c != 0.0) {
                let power = n - i;
                let sign = if c < 0.0 { "-" } else { "+" };
                if out.is_empty() {
                    if c < 0.0 {
                        out.push('-');
                    }
                } else {
                    out.push_str(&format!(" {sign} "));
                }
                let mag = c.abs();
                match (power, mag == 1.0) {
                    (0, _) => out.push_str(&format!("{mag}")),
                    (1, true) => out.push('s'),
                    (1, false) => out.push_str(&format!("{mag} s")),
                    (k, true) => out.push_str(&format!("s^{k}")),
                    (k, false) => out.push_str(&format!("{mag} s^{k}")),
                }
            }
            if out.is_empty() {
                "0".into()
            } else {
                out
            }
        }
        write!(f, "({}) / ({})", render(&self.num), render(&self.den))
    }
}
