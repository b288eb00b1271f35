//! Exact small-dimension geometry kernel: points, polyhedral cones,
//! polytopes and sphere nets in ambient dimension 1..=3.

mod cone;
mod hull;
pub mod linalg;
pub mod lp;
mod net;
mod point;
mod polytope;

pub use cone::{map_cone, ConeKind, ConeWire, PolyhedralCone};
pub use hull::{convex_hull_2d, convex_hull_3d};
pub use net::SphereNet;
pub use point::Point;
pub use polytope::{InscribedBall, Polytope};
