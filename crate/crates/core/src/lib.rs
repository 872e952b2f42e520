//! Error-bounded simplification of multidimensional trajectories.
//!
//! A trajectory is a sequence of timestamped points interpolated linearly
//! between samples. Every simplifier here guarantees that the synchronized
//! distance between input and output stays within a caller-chosen bound.
//!
//! - [`strong`]: simplifiers whose output points are a subset of the input
//!   points (Ramer-Douglas-Peucker, a one-pass opening window, and an
//!   optimal subset selection).
//! - [`linkpath`]: minimum-link paths through a tube of tolerance intervals,
//!   the engine behind the weak simplifiers.
//! - [`weak`]: simplifiers free to place points off the input, built per
//!   dimension so their outputs nest across a dimension ordering.
//! - [`codec`]: compact bit-level storage exploiting that nesting.
//! - [`io`]: CSV and GPS-log parsing, plus a seeded random-walk generator.

pub mod codec;
pub mod error;
pub mod io;
pub mod linkpath;
pub mod strong;
pub mod trajectory;
pub mod weak;

pub use error::{Error, Result};
pub use linkpath::{
    link_path_to_point, min_link_path, min_links_to_points, LinkPath, LinkResult, Source, Tube,
};
pub use strong::{opt, opt_indices, opw, opw_indices, rdp, rdp_indices};
pub use trajectory::{
    sync_distance, sync_distance_detailed, Metric, TaggedPoint, TaggedTrajectory, Tolerance,
    Trajectory,
};
pub use weak::{di, mci, mci_tagged, vi, vi_tagged};
