//! Geometric analysis of sets with positive reach in dimensions 1 to 3.
//!
//! The crate is organized around a small exact geometry kernel ([`geom`]) and
//! five analysis layers on top of it:
//!
//! * [`reach`] — metric projection, tangent-cone reach certification,
//!   normal-cone probing, singular-point detection and semiconcave
//!   boundary covers for finite point samples.
//! * [`convex`] — piecewise-affine convex functions: subdifferentials,
//!   singular cells of the maximizer arrangement, envelope and
//!   semiconcavity machinery.
//! * [`planar`] — the planar boundary-type classifier (interior / isolated /
//!   T1 / T2 / T3) and its patch builders.
//! * [`curve`] — arc-length curves: C^{1,1} parameter estimation,
//!   chord-arc and quasi-arc certificates, reach lower bounds,
//!   regular/singular decomposition.
//! * [`fixtures`] — deterministic generators for the test sets used
//!   throughout (circles, lens sets, the near-self-intersecting tail
//!   curve, and friends), each with analytic tangent data.

pub mod convex;
pub mod curve;
pub mod error;
pub mod fixtures;
pub mod geom;
pub mod planar;
pub mod reach;

pub use error::{Error, Result};
pub use reach::SampledSet;
pub use geom::{Point, PolyhedralCone, Polytope, SphereNet};


/// Default absolute tolerance for geometric predicates.
pub const DEFAULT_TOL: f64 = 1e-9;
