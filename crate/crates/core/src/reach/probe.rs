//! Normal-cone probing: a direction `v` belongs to the normal cone at a
//! sample point exactly when the probe point `a + r v` projects back onto
//! `a` alone.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{Point, SphereNet};

use super::sample::{ProjectionIndex, SampledSet};

/// Unit directions that passed the projection test at one sample point.
#[derive(Debug, Clone, Serialize)]
pub struct NormalProbe {
    pub base_index: usize,
    pub probe_radius: f64,
    pub normals: Vec<Point>,
}

/// Probe the normal cone at `index` with radius `r` over the net
/// directions. `proj_tol` is the metric-projection uniqueness tolerance.
pub fn normal_probe(
    set: &SampledSet,
    index: usize,
    r: f64,
    net: &SphereNet,
    proj_tol: f64,
) -> Result<NormalProbe> {
    if r <= 0.0 {
        return Err(Error::invalid("probe radius must be positive"));
    }
    let idx = ProjectionIndex::new(set);
    Ok(probe_with_index(set, &idx, index, r, net, proj_tol))
}

pub(crate) fn probe_with_index(
    set: &SampledSet,
    idx: &ProjectionIndex<'_>,
    index: usize,
    r: f64,
    net: &SphereNet,
    proj_tol: f64,
) -> NormalProbe {
    let a = set.point(index);
    let normals: Vec<Point> = net
        .directions
        .iter()
        .copied()
        .filter(|v| idx.projects_uniquely_to(&(a + v.scale(r)), index, proj_tol))
        .collect();
    NormalProbe {
        base_index: index,
        probe_radius: r,
        normals,
    }
}

/// Probe every sample point; one shared spatial index, parallel over points.
pub fn probe_all(
    set: &SampledSet,
    r: f64,
    net: &SphereNet,
    proj_tol: f64,
) -> Result<Vec<NormalProbe>> {
    if r <= 0.0 {
        return Err(Error::invalid("probe radius must be positive"));
    }
    let idx = ProjectionIndex::new(set);
    Ok((0..set.len())
        .into_par_iter()
        .map(|i| probe_with_index(set, &idx, i, r, net, proj_tol))
        .collect())
}
