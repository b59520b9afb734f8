//! Real polynomials stored as coefficient vectors in descending powers of `s`.
//!
//! The zero polynomial is `[0.0]`; every other polynomial produced here has a
//! nonzero leading coefficient.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Strips leading zeros. All-zero (or empty) input becomes `[0.0]`.
pub fn trim(coeffs: &[f64]) -> Vec<f64> {
    match coeffs.iter().position(|&c| c != 0.0) {
        Some(first) => coeffs[first..].to_vec(),
        None => vec![0.0],
    }
}

pub fn is_zero(p: &[f64]) -> bool {
    p.iter().all(|&c| c == 0.0)
}

/// Degree of a trimmed polynomial (the zero polynomial reports 0).
pub fn degree(p: &[f64]) -> usize {
    p.len().saturating_sub(1)
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    let mut out = vec![0.0; n];
    for (i, &c) in a.iter().rev().enumerate() {
        out[n - 1 - i] += c;
    }
    for (i, &c) in b.iter().rev().enumerate() {
        out[n - 1 - i] += c;
    }
    trim(&out)
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    add(a, &scale(b, -1.0))
}

pub fn scale(p: &[f64], k: f64) -> Vec<f64> {
    trim(&p.iter().map(|&c| c * k).collect::<Vec<_>>())
}

pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if is_zero(a) || is_zero(b) {
        return vec![0.0];
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&out)
}

/// Horner evaluation at a complex point.
pub fn eval(p: &[f64], s: Complex64) -> Complex64 {
    p.iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
}

pub fn derivative(p: &[f64]) -> Vec<f64> {
    let n = degree(p);
    if n == 0 {
        return vec![0.0];
    }
    trim(
        &p[..n]
            .iter()
            .enumerate()
            .map(|(i, &c)| c * (n - i) as f64)
            .collect::<Vec<_>>(),
    )
}

/// Monic polynomial with the given roots. Roots must come in conjugate pairs
/// for the result to be real; imaginary residue is discarded.
pub fn from_roots(roots: &[Complex64]) -> Vec<f64> {
    let mut acc = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); acc.len() + 1];
        for (i, &c) in acc.iter().enumerate() {
            next[i] += c;
            next[i + 1] -= c * r;
        }
        acc = next;
    }
    acc.iter().map(|c| c.re).collect()
}

/// Number of trailing zero coefficients, i.e. the multiplicity of the root at `s = 0`.
pub fn zero_root_multiplicity(p: &[f64]) -> usize {
    if is_zero(p) {
        return 0;
    }
    p.iter().rev().take_while(|&&c| c == 0.0).count()
}

/// Roots via eigenvalues of the balanced companion matrix, polished with a few
/// Newton steps on the original polynomial. Exact roots at the origin are
/// deflated first.
pub fn roots(p: &[f64]) -> Vec<Complex64> {
    let p = trim(p);
    if is_zero(&p) {
        return Vec::new();
    }
    let zeros_at_origin = zero_root_multiplicity(&p);
    let reduced = &p[..p.len() - zeros_at_origin];
    let mut out = vec![Complex64::new(0.0, 0.0); zeros_at_origin];

    let n = degree(reduced);
    if n == 0 {
        return out;
    }
    if n == 1 {
        out.push(Complex64::new(-reduced[1] / reduced[0], 0.0));
        return out;
    }

    let lead = reduced[0];
    let mut companion = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        companion[(0, j)] = -reduced[j + 1] / lead;
    }
    for i in 1..n {
        companion[(i, i - 1)] = 1.0;
    }
    balance(&mut companion);

    let dp = derivative(reduced);
    for r in companion.complex_eigenvalues().iter() {
        out.push(polish(reduced, &dp, *r));
    }
    out
}

fn polish(p: &[f64], dp: &[f64], mut r: Complex64) -> Complex64 {
    let mut residual = eval(p, r).norm();
    for _ in 0..8 {
        if residual == 0.0 {
            break;
        }
        let d = eval(dp, r);
        if d.norm() == 0.0 {
            break;
        }
        let candidate = r - eval(p, r) / d;
        let next = eval(p, candidate).norm();
        if !(next < residual) {
            break;
        }
        r = candidate;
        residual = next;
    }
    // Real polynomials: snap numerically-real roots onto the axis.
    if r.im.abs() <= 1e-14 * r.norm().max(1.0) {
        r.im = 0.0;
    }
    r
}

/// Parlett–Reinsch diagonal similarity balancing (radix 2, exact in floating point).
fn balance(a: &mut DMatrix<f64>) {
    let n = a.nrows();
    let radix = 2.0_f64;
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut col = 0.0;
            let mut row = 0.0;
            for j in 0..n {
                if j != i {
                    col += a[(j, i)].abs();
                    row += a[(i, j)].abs();
                }
            }
            if col == 0.0 || row == 0.0 {
                continue;
            }
            let total = col + row;
            let mut f = 1.0;
            let mut c = col;
            let r = row;
            while c < r / radix {
                c *= radix * radix;
                f *= radix;
            }
            while c >= r * radix {
                c /= radix * radix;
                f /= radix;
            }
            let scaled_col = col * f;
            let scaled_row = row / f;
            if (scaled_col + scaled_row) < 0.95 * total {
                converged = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
    }
}
