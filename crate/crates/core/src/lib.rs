//! Minimum length link scheduling under the SINR physical interference model.
//!
//! The crate covers the three transmission power settings (oblivious/linear,
//! uniform, arbitrary) and the fractional-demand variant:
//!
//! - [`phys`] holds the physical model and the ground-truth independence checker.
//! - [`grid`] is the half-open grid partition and residue-class shifting.
//! - [`oblivious`] schedules links under oblivious power, integral and fractional.
//! - [`uniform`] has the conflict-range grouping and the greedy extraction schedulers.
//! - [`ilp`] is the big-M formulation with cover-inequality cutting planes.
//! - [`oracles`] computes exact optima at desk scale and runs ratio experiments.
//! - [`gadget`] builds the Partition-problem reduction instances.
//! - [`io`] and [`generate`] handle file formats and instance generators.

// `!(x > 0.0)` is used on purpose so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod error;
pub mod gadget;
pub mod generate;
pub mod geometry;
pub mod grid;
pub mod harness;
pub mod ilp;
pub mod io;
pub mod lp;
pub mod oblivious;
pub mod oracles;
pub mod phys;
pub mod schedule;
pub mod uniform;

pub use constants::{derive_constants, DerivedConstants, Omega, RmaxChoice};
pub use error::{Error, Result};
pub use geometry::Point;
pub use phys::{Link, LinkSet, PhysParams, PowerMode};
pub use schedule::{FractionalEntry, FractionalSchedule, Schedule};
