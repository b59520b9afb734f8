use super::{push_unique, Flag};
use crate::error::{Error, Result};
use crate::frd::FrequencyGrid;
use crate::lti::TransferFunction;
use crate::numeric::refined_peak;
use crate::poly;
use crate::system::{common_band, common_frequencies, system_bandwidth, System};

/// Load-change sensitivity.
#[derive(Debug, Clone, PartialEq)]
pub struct Lcs {
    pub value: f64,
    /// Frequency of the peak, rad/s (0 when the DC limit dominates).
    pub omega: f64,
    /// Band limit actually used, rad/s.
    pub omega_b: f64,
    pub flags: Vec<Flag>,
}

/// Peak of `|Z_t(jω) / Z_b(jω)|` over `[0, ω_b]`, with `ω_b` the bandwidth of
/// `Z_b` unless overridden.
pub fn lcs(
    zt: &System,
    zb: &System,
    grid: &FrequencyGrid,
    omega_b_override: Option<f64>,
) -> Result<Lcs> {
    let mut flags = Vec::new();
    let omega_b = match omega_b_override {
        Some(w) if w.is_finite() && w > 0.0 => w,
        Some(w) => return Err(Error::InvalidFrequency { omega: w }),
        None => {
            let (bw, approximated) = system_bandwidth(zb, grid)?;
            if !bw.resolved {
                flags.push(Flag::BandwidthUnresolved);
            }
            if approximated {
                push_unique(&mut flags, Flag::DcFromLowestFrequency);
            }
            bw.omega
        }
    };

    let ratio = |w: f64| -> f64 {
        match (zt.eval(w), zb.eval(w)) {
            (Ok(t), Ok(b)) => t.norm() / b.norm(),
            _ => f64::NAN,
        }
    };

    let band = common_band(&[zt, zb])?;
    let mut freqs: Vec<f64> = common_frequencies(&[zt, zb], grid)?
        .into_iter()
        .filter(|&w| w < omega_b)
        .collect();
    freqs.push(omega_b);

    let dc = match (band, zt.as_model(), zb.as_model()) {
        (None, Some(t), Some(b)) => Some(dc_ratio_limit(t, b)),
        _ => None,
    };
    if let Some((lo, hi)) = band {
        if omega_b > hi || omega_b < lo {
            return Err(Error::BandMismatch(format!(
                "bandwidth {omega_b} rad/s lies outside the shared measured band [{lo}, {hi}]"
            )));
        }
        push_unique(&mut flags, Flag::DcFromLowestFrequency);
    }

    let (omega, value) = refined_peak(ratio, &freqs);
    let (value, omega) = match dc {
        Some(d) if d >= value || !value.is_finite() => (d, 0.0),
        _ => (value, omega),
    };
    if value.is_nan() || value == f64::NEG_INFINITY {
        return Err(Error::PoleOnAxis { omega });
    }
    Ok(Lcs {
        value,
        omega,
        omega_b,
        flags,
    })
}

/// `lim_{s→0} |Z_t(s) / Z_b(s)|` from the lowest-order nonzero coefficients.
fn dc_ratio_limit(zt: &TransferFunction, zb: &TransferFunction) -> f64 {
    if zt.is_zero() {
        return 0.0;
    }
    let top = poly::mul(zt.num(), zb.den());
    let bottom = poly::mul(zt.den(), zb.num());
    if poly::is_zero(&bottom) {
        return f64::INFINITY;
    }
    let kt = poly::zero_root_multiplicity(&top);
    let kb = poly::zero_root_multiplicity(&bottom);
    match kt.cmp(&kb) {
        std::cmp::Ordering::Greater => 0.0,
        std::cmp::Ordering::Less => f64::INFINITY,
        std::cmp::Ordering::Equal => {
            (top[top.len() - 1 - kt] / bottom[bottom.len() - 1 - kb]).abs()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frd::FrequencyResponseData;

    fn model(num: &[f64], den: &[f64]) -> System {
        TransferFunction::new(num, den).unwrap().into()
    }

    #[test]
    fn first_order_pair() {
        let zb = model(&[1.0], &[1.0, 1.0]);
        let zt = model(&[0.5], &[1.0, 10.0]);
        let r = lcs(&zt, &zb, &FrequencyGrid::default(), None).unwrap();
        // ratio² = 0.25 (1 + ω²) / (100 + ω²), increasing; evaluated at ω_b = 1
        let expected = (0.25f64 * 2.0 / 101.0).sqrt();
        assert!((r.value - expected).abs() < 1e-9, "{r:?}");
        assert!((r.omega - 1.0).abs() < 1e-6);
        assert!(r.flags.is_empty());
    }

    #[test]
    fn zero_and_identity() {
        let zb = model(&[1.0], &[1.0, 1.0]);
        let grid = FrequencyGrid::default();
        let r = lcs(&System::Model(TransferFunction::zero()), &zb, &grid, None).unwrap();
        assert_eq!(r.value, 0.0);

        let r = lcs(&zb, &zb, &grid, None).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dc_limit_handles_shared_zeros() {
        // Z_t = s/(s+1), Z_b = s/(s+2): ratio → 2 as s → 0 even though both vanish
        let zt = TransferFunction::new(&[1.0, 0.0], &[1.0, 1.0]).unwrap();
        let zb = TransferFunction::new(&[1.0, 0.0], &[1.0, 2.0]).unwrap();
        assert_eq!(dc_ratio_limit(&zt, &zb), 2.0);
        let r = lcs(&zt.into(), &zb.into(), &FrequencyGrid::default(), Some(0.5)).unwrap();
        assert_eq!((r.value, r.omega), (2.0, 0.0));
    }

    #[test]
    fn override_bounds_the_scan() {
        let zb = model(&[1.0], &[1.0, 1.0]);
        let zt = model(&[0.5], &[1.0, 10.0]);
        let r = lcs(&zt, &zb, &FrequencyGrid::default(), Some(3.0)).unwrap();
        let expected = (0.25f64 * 10.0 / 109.0).sqrt();
        assert!((r.value - expected).abs() < 1e-9);
        assert!(lcs(&zt, &zb, &FrequencyGrid::default(), Some(-1.0)).is_err());
    }

    #[test]
    fn measured_inputs() {
        let grid = FrequencyGrid::default();
        let zb_tf = TransferFunction::new(&[1.0], &[1.0, 1.0]).unwrap();
        let zt_tf = TransferFunction::new(&[0.5], &[1.0, 10.0]).unwrap();
        let zb = System::Data(FrequencyResponseData::from_tf(&zb_tf, &grid).unwrap());
        let zt = System::Data(FrequencyResponseData::from_tf(&zt_tf, &grid).unwrap());
        let r = lcs(&zt, &zb, &grid, None).unwrap();
        assert!((r.value - (0.5f64 / 101.0).sqrt()).abs() < 1e-3 * r.value);
        assert!(r.flags.contains(&Flag::DcFromLowestFrequency));

        let narrow = System::Data(
            FrequencyResponseData::from_tf(&zt_tf, &FrequencyGrid::new(1e-3, 0.5, 100).unwrap())
                .unwrap(),
        );
        assert!(matches!(
            lcs(&narrow, &zb, &grid, None),
            Err(Error::BandMismatch(_))
        ));
    }
}
