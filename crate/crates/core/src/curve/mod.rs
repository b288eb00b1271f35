//! One-dimensional analysis: arc-length curves, C^{1,1} parameter
//! estimation, chord-arc and quasi-arc certificates, reach lower bounds,
//! uniform C^{1,1} graph checks and regular/singular decomposition.

mod arc;
mod cert;
mod decompose;
mod graph;

pub use arc::{chord_arc_check, circle_curve, segment_curve, ArcCurve, ChordArcReport};
pub use cert::{
    classify_component, curve_reach_bound, quasi_arc_check, ComponentClass,
    CurveReachCertificate, QuasiArcReport,
};
pub use decompose::{decompose_regular_singular, Decomposition};
pub use graph::{c11_graph_check, C11GraphReport};
