//! Reach analysis on finite samples: metric projection, tangent-cone reach
//! certification, normal probing, singular-point detection, distance
//! function certificates and semiconcave boundary covers.

mod cover;
mod distfn;
mod federer;
mod ops;
mod probe;
mod sample;
mod singular;
mod tangent;

pub use cover::{boundary_cover, BoundaryCover, CoverOutcome, CoverPatch, CoverWitness};
pub use distfn::{
    clarke_subgradient_check, clarke_subgradient_check_sampled, distance_semiconvexity_check,
    distance_semiconvexity_check_sampled,
    ClarkeReport, SemiconvexityReport,
};
pub use federer::{
    local_reach_lipschitz_defect, normal_inequality_excess, reach_estimate, violations,
    ReachReport, Violation,
};
pub use ops::{attach_segment, restrict_to_ball};
pub use probe::{normal_probe, probe_all, NormalProbe};
pub use sample::{ProjectionIndex, SampledSet};
pub use singular::{singular_points, SingularReport};
pub use tangent::{default_scales, estimate_tangent_cone, CLUSTER_ANGLE_DEG};
