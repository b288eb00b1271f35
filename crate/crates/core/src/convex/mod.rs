//! Piecewise-affine convex functions and their singular structure:
//! subdifferentials, arrangement cells with wide subdifferentials,
//! derivative-gap membership, support envelopes, semiconcavity
//! certificates and quadratic extensions.

mod arrangement;
mod cells;
mod cover_count;
mod envelope;
mod pwl;
mod semiconcave;

pub use arrangement::{arrangement, Arrangement, EdgeCell, VertexCell};
pub use cells::{
    full_dim_singular_vertices, sigma_cells, z_membership, zwit_inclusion_check, CellGeometry,
    InclusionReport, SingularCell, SingularCellReport,
};
pub use cover_count::{dc_cover_count, CoverCount};
pub use envelope::{support_envelope, SupportEnvelope};
pub use pwl::PwlConvex;
pub use semiconcave::{
    minimal_semiconcavity_constant_1d, semiconcave_check_1d, semiconcave_check_2d,
    semiconcave_extend, Grid1d, Grid2d, SemiconcaveExtension, SemiconcavityCertificate,
};
