//! Host-side tooling around `tca-core`: seeded synthetic usage
//! generators, the K-Means/EM/always-on baselines, the cross-validated
//! energy and error benchmark, and the file formats behind the `tca`
//! command-line tool.

pub mod baselines;
pub mod datagen;
mod error;
pub mod formats;
pub mod schedule;
pub mod sim;
pub mod svg;

pub use error::EvalError;
pub use schedule::IntervalSchedule;
