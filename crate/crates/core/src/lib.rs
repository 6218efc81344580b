//! Numerical convex geometry for section centroids of bounded and unbounded convex
//! bodies.
//!
//! The crate computes hyperplane sections and their centroids, fits centroid lines
//! and classifies line families as concurrent or parallel, evaluates the cut-volume
//! functional together with its gradient–centroid identity, and measures how the
//! boundary of an unbounded body approaches its recession cone.
//!
//! Modules map onto the pipeline:
//! - [`bodies`]: parametric bodies with membership, support, gauge, ray, normal and
//!   recession-cone oracles;
//! - [`sections`]: section boundedness, admissible levels and section statistics;
//! - [`centroids`]: centroid curves, line fits and line-family verdicts;
//! - [`cutvol`]: cut volumes, gradients and constancy scans;
//! - [`asymptotics`]: shell distances and blow-down diagnostics.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod bodies;
pub mod centroids;
pub mod cutvol;
pub mod error;
pub mod ext_real;
pub mod quadrature;
pub mod sections;
pub mod vector;

pub use bodies::{boundary_hit, BodyKind, BodySpec, ConeDescriptor, ConeShape, ConvexSet, Profile};
pub use error::GeomError;
pub use ext_real::ExtReal;
pub use vector::{Point, Vector};
