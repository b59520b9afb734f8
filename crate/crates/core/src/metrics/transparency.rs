use std::f64::consts::PI;

use super::Flag;
use crate::error::Result;
use crate::lti::h2_norm;
use crate::numeric::trapezoid;
use crate::system::System;

/// Transparency residual: the H2 norm of `Z_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tr {
    pub value: f64,
    pub flags: Vec<Flag>,
}

/// For a model this is the Gramian-based H2 norm. For measured data it is
/// `sqrt((1/π) ∫ |Z_t(jω)|² dω)` by trapezoid over the samples, with a
/// [`Flag::TailWarning`] when the band visibly truncates the integral: the
/// top-edge `|Z_t|²` is at least 1 % of its peak, or the area left below the
/// lowest sample (`ω_min |Z_t(ω_min)|²`) is at least 1 % of the total.
pub fn transparency_residual(zt: &System) -> Result<Tr> {
    match zt {
        System::Model(tf) => Ok(Tr {
            value: h2_norm(tf)?,
            flags: Vec::new(),
        }),
        System::Data(frd) => {
            let w = frd.frequencies();
            let power: Vec<f64> = frd.responses().iter().map(|h| h.norm_sqr()).collect();
            let area = trapezoid(w, &power);
            let peak = power.iter().copied().fold(0.0, f64::max);
            let mut flags = Vec::new();
            if peak > 0.0 {
                let high_edge = power[power.len() - 1] >= 0.01 * peak;
                let low_gap = w[0] * power[0] >= 0.01 * area;
                if high_edge || low_gap {
                    flags.push(Flag::TailWarning);
                }
            }
            Ok(Tr {
                value: (area / PI).sqrt(),
                flags,
            })
        }
    }
}
