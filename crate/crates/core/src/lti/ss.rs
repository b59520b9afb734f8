use nalgebra::{DMatrix, DVector, RowDVector};
use num_complex::Complex64;

use super::TransferFunction;
use crate::error::{Error, Result};

/// Single-input single-output state-space model `ẋ = Ax + Bu`, `y = Cx + Du`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: RowDVector<f64>,
    pub d: f64,
}

impl StateSpace {
    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    /// Controllable canonical realization of a proper transfer function.
    pub fn from_tf(tf: &TransferFunction) -> Result<Self> {
        if !tf.is_proper() {
            return Err(Error::ImproperSystem);
        }
        let den = tf.den();
        let n = tf.order();

        // numerator padded to n + 1 coefficients
        let mut num = vec![0.0; n + 1];
        if !tf.is_zero() {
            let offset = n + 1 - tf.num().len();
            num[offset..].copy_from_slice(tf.num());
        }
        let d = num[0];

        let mut a = DMatrix::zeros(n, n);
        let mut b = DVector::zeros(n);
        let mut c = RowDVector::zeros(n);
        for k in 0..n {
            a[(0, k)] = -den[k + 1];
            c[k] = num[k + 1] - d * den[k + 1];
        }
        for k in 1..n {
            a[(k, k - 1)] = 1.0;
        }
        if n > 0 {
            b[0] = 1.0;
        }
        Ok(Self { a, b, c, d })
    }

    /// `C (jωI − A)⁻¹ B + D`.
    pub fn eval(&self, omega: f64) -> Result<Complex64> {
        let n = self.order();
        if n == 0 {
            return Ok(Complex64::new(self.d, 0.0));
        }
        let jw = Complex64::new(0.0, omega);
        let m = DMatrix::<Complex64>::from_fn(n, n, |i, j| {
            let diag = if i == j { jw } else { Complex64::new(0.0, 0.0) };
            diag - self.a[(i, j)]
        });
        let rhs = self.b.map(|x| Complex64::new(x, 0.0));
        let x = m.lu().solve(&rhs).ok_or(Error::PoleOnAxis { omega })?;
        let y = self
            .c
            .iter()
            .zip(x.iter())
            .fold(Complex64::new(self.d, 0.0), |acc, (&ci, &xi)| acc + xi * ci);
        Ok(y)
    }
}
