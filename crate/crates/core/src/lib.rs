//! Fault-tolerant spanners for weighted points in R^d and in polygonal
//! domains.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod base;
pub mod cluster;
pub mod decomposition;
pub mod error;
pub mod generate;
pub mod geodesic;
pub mod geometry;
pub mod invariants;
pub mod io;
pub mod metric;
pub mod polygon;
pub mod polygon_spanner;
pub mod separator;
pub mod svg;
pub mod triangulate;
pub mod verify;

pub use error::{Result, SpannerError};
