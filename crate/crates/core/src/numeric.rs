//! Scalar search helpers shared by the norm and metric routines.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section maximization of `f(ω)` over `[lo, hi]` (both > 0), searching
/// in `ln ω` until the bracket shrinks below `rel_tol` in relative frequency.
/// Returns `(argmax, max)`; the bracket endpoints are candidates too.
pub(crate) fn golden_max_log(f: impl Fn(f64) -> f64, lo: f64, hi: f64, rel_tol: f64) -> (f64, f64) {
    debug_assert!(lo > 0.0 && hi >= lo);
    let g = |x: f64| f(x.exp());
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (g(c), g(d));
    let mut iterations = 0;
    while (b - a) > rel_tol && iterations < 200 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = g(d);
        }
        iterations += 1;
    }
    let mid = 0.5 * (a + b);
    [(lo, f(lo)), (hi, f(hi)), (mid.exp(), g(mid))]
        .into_iter()
        .fold((lo, f64::NEG_INFINITY), |best, cand| {
            if cand.1 > best.1 {
                cand
            } else {
                best
            }
        })
}

/// Peak of `f` over sampled frequencies (ascending, all > 0): coarse argmax on
/// the samples, then golden-section refinement between the neighbours of the
/// best sample. Non-finite evaluations count as `-inf`.
pub(crate) fn refined_peak(f: impl Fn(f64) -> f64, freqs: &[f64]) -> (f64, f64) {
    let g = |w: f64| {
        let v = f(w);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    let mut best = (freqs[0], f64::NEG_INFINITY);
    let mut best_idx = 0;
    for (i, &w) in freqs.iter().enumerate() {
        let v = g(w);
        if v > best.1 {
            best = (w, v);
            best_idx = i;
        }
    }
    if freqs.len() < 2 || !best.1.is_finite() {
        return best;
    }
    let lo = freqs[best_idx.saturating_sub(1)];
    let hi = freqs[(best_idx + 1).min(freqs.len() - 1)];
    let refined = golden_max_log(g, lo, hi, 1e-9);
    if refined.1 > best.1 {
        refined
    } else {
        best
    }
}

/// Ascending union of `base` and the positive `extra` frequencies.
pub(crate) fn merge_frequencies(base: &[f64], extra: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut out = base.to_vec();
    out.extend(extra.into_iter().filter(|&w| w > 0.0 && w.is_finite()));
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// Bisection on `ln ω` for the point where `pred` changes value, given
/// `pred(lo) != pred(hi)`. Returns the midpoint of the final bracket.
pub(crate) fn bisect_log(pred: impl Fn(f64) -> bool, lo: f64, hi: f64, rel_tol: f64) -> f64 {
    let side = pred(lo);
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let mut iterations = 0;
    while (b - a) > rel_tol && iterations < 200 {
        let m = 0.5 * (a + b);
        if pred(m.exp()) == side {
            a = m;
        } else {
            b = m;
        }
        iterations += 1;
    }
    (0.5 * (a + b)).exp()
}

/// Linear-scale bisection, for brackets that include zero.
pub(crate) fn bisect_linear(pred: impl Fn(f64) -> bool, lo: f64, hi: f64, rel_tol: f64) -> f64 {
    let side = pred(lo);
    let (mut a, mut b) = (lo, hi);
    let mut iterations = 0;
    while (b - a) > rel_tol * b.abs().max(f64::MIN_POSITIVE) && iterations < 200 {
        let m = 0.5 * (a + b);
        if pred(m) == side {
            a = m;
        } else {
            b = m;
        }
        iterations += 1;
    }
    0.5 * (a + b)
}

pub(crate) fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}
