//! Reduced dynamics of a frequency-modulated qubit coupled to a thermal
//! Lorentzian dissipative reservoir and a thermal Ohmic-class pure-dephasing
//! reservoir.
//!
//! Time is in units of `1/γ`. The typical pipeline is
//! [`config::validate`] → [`dynamics::simulate`] → [`analysis::coherence_time`],
//! with [`analysis::alpha_threshold`] locating the dephasing coupling at which
//! modulation stops paying off.

// NaN must fail range checks, hence `!(x > 0.0)` rather than `x <= 0.0`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod bessel;
pub mod config;
pub mod dephasing;
pub mod dissipative;
pub mod dynamics;
pub mod error;
pub mod grid;
pub mod io;
pub mod ode;
pub mod presets;
pub mod quadrature;
pub mod sweep;

pub use analysis::{alpha_threshold, coherence_time, envelope, ThresholdOptions, ThresholdResult};
pub use config::{validate, SimulationConfig, ValidatedConfig};
pub use dynamics::{simulate, QubitTrajectory, Simulation};
pub use error::{Error, Result};
