#![allow(dead_code)]

use forcebench::{poly, TransferFunction};
use num_complex::Complex64;
use rand::Rng;

/// Log-uniform in `[lo, hi]`.
pub fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo * (hi / lo).powf(rng.random::<f64>())
}

/// Stable denominator of the given order, pole real parts in [−100, −0.01].
pub fn stable_den<R: Rng>(rng: &mut R, order: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    while roots.len() < order {
        let re = -log_uniform(rng, 0.01, 100.0);
        if order - roots.len() >= 2 && rng.random_bool(0.5) {
            let im = re.abs() * rng.random_range(0.0..1.4f64).tan();
            roots.push(Complex64::new(re, im));
            roots.push(Complex64::new(re, -im));
        } else {
            roots.push(Complex64::new(re, 0.0));
        }
    }
    poly::from_roots(&roots)
}

/// Random stable system of order 1..=`max_order`. The numerator has
/// real zeros of either sign and degree below the denominator's; the
/// DC gain magnitude is log-uniform in [0.1, 10].
pub fn random_stable<R: Rng>(rng: &mut R, max_order: usize) -> TransferFunction {
    let order = rng.random_range(1..=max_order);
    let den = stable_den(rng, order);
    let zeros: Vec<Complex64> = (0..rng.random_range(0..order))
        .map(|_| {
            let z = log_uniform(rng, 0.01, 100.0);
            Complex64::new(if rng.random_bool(0.5) { z } else { -z }, 0.0)
        })
        .collect();
    let num = poly::from_roots(&zeros);
    let dc = log_uniform(rng, 0.1, 10.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let k = dc * den[den.len() - 1] / num[num.len() - 1];
    TransferFunction::new(&poly::scale(&num, k), &den).unwrap()
}
