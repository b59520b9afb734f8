//! Load-independent benchmarking metrics for force and torque controllers.
//!
//! A force-controlled actuator is split into a blocked transfer function `Z_b`
//! (reference force to load force with the load locked) and a transparency
//! transfer function `Z_t` (load velocity to load force at zero reference).
//! Coupled to a load admittance `Y`, the delivered force follows
//! `T_y = Z_b / (1 − Z_t·Y)`. The [`metrics`] module turns `Z_b` and `Z_t`
//! into scalar figures of merit that do not depend on any particular load;
//! [`coupling`] checks them against concrete loads.

// `!(x < y)` is used deliberately so NaN takes the failing branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coupling;
pub mod error;
pub mod frd;
pub mod lti;
pub mod metrics;
pub mod model_io;
mod numeric;
pub mod poly;
pub mod sysid;
pub mod system;

pub use coupling::{CoupledSystem, LoadModel};
pub use error::{Error, Result};
pub use frd::{CsvLayout, FrequencyGrid, FrequencyResponseData};
pub use lti::{StateSpace, TransferFunction};
pub use metrics::{benchmark_report, MetricReport, ReportConfig};
pub use model_io::{load_system, InputKind, ModelFile};
pub use sysid::{fit_rational, FitConfig};
pub use system::System;
