//! Analytics for the M|G|∞ queue applied to idle combustion-engine vehicles
//! awaiting conversion (EV, HEV, FCEV) or dismantling.
//!
//! The crate is organised bottom-up:
//!
//! - [`service_time`]: service-time distributions and their hazard rates.
//! - [`transient`]: empty-system probability and mean number in system for a
//!   system whose time origin is an arrival into an empty system, plus the
//!   hazard-versus-arrival-rate stability check.
//! - [`costbenefit`]: cost and benefit rates, viability over a horizon, and the
//!   per-option minimum-benefit thresholds.
//! - [`simulator`]: discrete-event Monte Carlo oracle for all of the above.
//! - [`estimation`]: arrival-rate and hazard estimators from observed logs.
//! - [`cli`]: scenario files and the `mginf` command-line front end.

pub mod cli;
pub mod costbenefit;
pub mod error;
pub mod estimation;
pub mod format;
pub mod quadrature;
pub mod service_time;
pub mod simulator;
pub mod transient;

pub use costbenefit::{
    ConversionOption, CostProfile, DecisionInput, DecisionReport, FleetMixPolicy, OptionEconomics,
    Threshold,
};
pub use error::{Error, Result};
pub use service_time::{Distribution, ServiceTimeModel};
pub use transient::{CurveKind, Monotonicity, QueueScenario, StabilityReport, TransientCurve};
