//! Continuous-time SISO systems: transfer functions, realizations, norms and
//! time responses.

mod norms;
mod ss;
mod tf;
mod time;

pub(crate) use norms::crossing_below;
pub use norms::{bandwidth, h2_norm, hinf_norm, lyapunov, Bandwidth, Peak};
pub use ss::StateSpace;
pub use tf::{TransferFunction, CANCELLATION_TOL, STABILITY_TOL};
pub use time::{
    default_step, settling_horizon, step_metrics, step_response, StepMetrics, TimeSeries,
};
