//! Sweep runner for the superschur checks: grid configuration, per-point
//! pipelines, a matrix cache on disk and machine-readable reports.

pub mod cache;
pub mod checks;
pub mod config;
pub mod report;
pub mod sweep;

pub use checks::{Point, PointContext};
pub use config::{Check, ConfigError, SweepConfig};
pub use report::{Entry, SkipReason, Status, VerificationReport};
pub use sweep::run_sweep;
