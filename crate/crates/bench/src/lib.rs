//! Shared inputs for the criterion benchmarks in `benches/`.

use forcebench::{FrequencyGrid, FrequencyResponseData, System, TransferFunction};

/// Critically damped Z_b and a lightly resonant Z_t, shaped like a
/// disturbance-observer force loop.
pub fn dob_models() -> (TransferFunction, TransferFunction) {
    let zb = TransferFunction::new(&[784.0], &[1.0, 56.0, 784.0]).unwrap();
    let zt = TransferFunction::new(&[-1000.0, -600.0, -180.0], &[1.0, 12.3, 147.6, 43.2]).unwrap();
    (zb, zt)
}

/// Both models sampled on `grid`.
pub fn dob_data(grid: &FrequencyGrid) -> (System, System) {
    let (zb, zt) = dob_models();
    (
        FrequencyResponseData::from_tf(&zb, grid).unwrap().into(),
        FrequencyResponseData::from_tf(&zt, grid).unwrap().into(),
    )
}
