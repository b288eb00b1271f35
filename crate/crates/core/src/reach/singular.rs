//! Detection of k-singular sample points: points whose probed normal cone,
//! intersected with the unit ball, contains a (d-k)-dimensional ball of
//! radius epsilon. Detection is a conservative under-approximation: the
//! inscribed ball is searched inside the convex hull of the probed unit
//! normals together with the origin, which is always contained in the true
//! normal-cone section, so every detected point is singular at sample
//! resolution.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{Point, Polytope, SphereNet};

use super::probe::probe_with_index;
use super::sample::{ProjectionIndex, SampledSet};

#[derive(Debug, Clone, Serialize)]
pub struct SingularReport {
    pub k: usize,
    pub epsilon: f64,
    pub probe_radius: f64,
    /// Detected sample indices, ascending.
    pub points: Vec<usize>,
    /// Inscribed (d-k)-ball radius per detected point.
    pub radii: Vec<f64>,
}

/// Find the sampled k-singular points at level `eps`.
pub fn singular_points(
    set: &SampledSet,
    k: usize,
    eps: f64,
    r: f64,
    net: &SphereNet,
    proj_tol: f64,
) -> Result<SingularReport> {
    let d = set.dim();
    if k >= d {
        return Err(Error::invalid(format!("k must satisfy 0 <= k < d = {d}")));
    }
    if r <= 0.0 {
        return Err(Error::invalid("probe radius must be positive"));
    }
    if eps <= 0.0 {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let idx = ProjectionIndex::new(set);
    let ball_dim = d - k;
    let per_point: Vec<(usize, f64)> = (0..set.len())
        .into_par_iter()
        .map(|i| {
            let probe = probe_with_index(set, &idx, i, r, net, proj_tol);
            // fewer directions than the slice dimension cannot hold a ball
            if probe.normals.len() < ball_dim {
                return (i, 0.0);
            }
            let mut pts = probe.normals.clone();
            pts.push(Point::zero(d));
            let radius = match Polytope::from_points(d, &pts, 1e-12) {
                Ok(hull) => hull.inscribed_ball(ball_dim).radius,
                Err(_) => 0.0,
            };
            (i, radius)
        })
        .collect();
    let mut points = Vec::new();
    let mut radii = Vec::new();
    for (i, radius) in per_point {
        if radius >= eps {
            points.push(i);
            radii.push(radius);
        }
    }
    Ok(SingularReport {
        k,
        epsilon: eps,
        probe_radius: r,
        points,
        radii,
    })
}
