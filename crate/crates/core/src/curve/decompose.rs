//! Regular/singular decomposition of a k-dimensional sample: the singular
//! part collects the (k-1)-singular points, the regular part is the open
//! complement.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::SphereNet;
use crate::reach::{singular_points, SampledSet, SingularReport};

#[derive(Debug, Clone, Serialize)]
pub struct Decomposition {
    pub k: usize,
    /// Sample indices of the regular part.
    pub regular: Vec<usize>,
    /// The detected (k-1)-singular points.
    pub singular: SingularReport,
}

pub fn decompose_regular_singular(
    set: &SampledSet,
    k: usize,
    eps: f64,
    probe_r: f64,
    net: &SphereNet,
    proj_tol: f64,
) -> Result<Decomposition> {
    if k == 0 || k >= set.dim() + 1 {
        return Err(Error::invalid("need 1 <= k <= ambient dimension"));
    }
    let singular = singular_points(set, k - 1, eps, probe_r, net, proj_tol)?;
    let mut is_singular = vec![false; set.len()];
    for &i in &singular.points {
        is_singular[i] = true;
    }
    let regular: Vec<usize> = (0..set.len()).filter(|&i| !is_singular[i]).collect();
    Ok(Decomposition {
        k,
        regular,
        singular,
    })
}
