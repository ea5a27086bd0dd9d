//! Temporal clustering of daily usage events.
//!
//! The input is a set of per-day event time series (minute-of-day values).
//! Days are binned into a density prototype: the mean event count per time
//! bin across days. Bins denser than a threshold `D*` are *populated*, and
//! populated bins closer than a time threshold `ell` are agglomerated into
//! contiguous clusters. `D*` encodes a user preference (comfort / balance /
//! eco); `ell` is selected automatically by sweeping it upward and stopping
//! just before the percolation transition where the two largest clusters
//! merge.
//!
//! The crate is `no_std` (with `alloc`) so the same code paths run on
//! host tooling and small targets. The [`kernel`] module goes further: a
//! fixed-size, allocation-free re-implementation of the whole pipeline in
//! under 512 bytes of working state, with incremental per-day ingestion.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod cluster;
mod error;
mod event;
pub mod kernel;
mod percolation;
mod proto;
mod threshold;

pub use cluster::{cluster_fixed, cluster_fixed_instrumented, Cluster, ThresholdParams};
pub use error::Error;
pub use event::{Day, EventLog, MINUTES_PER_DAY};
pub use percolation::{
    percolation_sweep, percolation_sweep_instrumented, tca, tca_detailed, tca_with_threshold,
    PercolationStep, PercolationTrace, TcaResult,
};
pub use proto::{bin_events, DensityPrototype};
pub use threshold::{select_threshold, Mode};
