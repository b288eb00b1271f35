//! Tangent-cone estimation from multiscale secant clustering.

use crate::error::{Error, Result};
use crate::geom::{Point, PolyhedralCone};

use super::SampledSet;

/// Angular tolerance (degrees) for merging secant directions into clusters.
pub const CLUSTER_ANGLE_DEG: f64 = 5.0;

/// Default scale ladder relative to the sample diameter.
pub fn default_scales(set: &SampledSet) -> Vec<f64> {
    let d = set.bbox_diameter();
    vec![d / 50.0, d / 100.0, d / 200.0]
}

/// Estimate `Tan(A, a)` at sample index `a`: cluster the unit secants to
/// neighbors at each scale, keep the clusters of the finest scale that
/// reappear at every coarser scale, and return their convex-hull cone.
pub fn estimate_tangent_cone(set: &SampledSet, a: usize, scales: &[f64]) -> Result<PolyhedralCone> {
    if scales.len() < 2 {
        return Err(Error::invalid("tangent estimation needs at least 2 scales"));
    }
    if a >= set.len() {
        return Err(Error::invalid("index out of range"));
    }
    let mut sorted: Vec<f64> = scales.to_vec();
    sorted.sort_by(f64::total_cmp);
    let base = set.point(a);
    let cos_tol = (CLUSTER_ANGLE_DEG.to_radians()).cos();

    let per_scale: Vec<Vec<Point>> = sorted
        .iter()
        .map(|&s| {
            let mut dirs: Vec<Point> = Vec::new();
            for (bi, b) in set.points().iter().enumerate() {
                if bi == a {
                    continue;
                }
                let u = *b - base;
                let n = u.norm();
                if n > 0.0 && n <= s {
                    dirs.push(u.scale(1.0 / n));
                }
            }
            cluster_directions(&dirs, cos_tol)
        })
        .collect();

    // clusters of the finest scale, confirmed at all coarser scales
    let finest = &per_scale[0];
    let confirm_cos = (2.0 * CLUSTER_ANGLE_DEG.to_radians()).cos();
    let stable: Vec<Point> = finest
        .iter()
        .copied()
        .filter(|rep| {
            per_scale[1..]
                .iter()
                .all(|reps| reps.iter().any(|r| r.dot(rep) >= confirm_cos))
        })
        .collect();
    PolyhedralCone::from_generators(set.dim(), &stable)
}

/// Greedy direction clustering; returns normalized cluster means.
fn cluster_directions(dirs: &[Point], cos_tol: f64) -> Vec<Point> {
    let mut sums: Vec<(Point, usize)> = Vec::new();
    for d in dirs {
        let mut merged = false;
        for (rep, count) in sums.iter_mut() {
            let mean = rep.scale(1.0 / *count as f64);
            if let Some(u) = mean.unit() {
                if u.dot(d) >= cos_tol {
                    *rep = *rep + *d;
                    *count += 1;
                    merged = true;
                    break;
                }
            }
        }
        if !merged {
            sums.push((*d, 1));
        }
    }
    sums.into_iter()
        .filter_map(|(rep, _)| rep.unit())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::ConeKind;

    fn segment_sample(n: usize) -> SampledSet {
        let pts: Vec<Point> = (0..=n)
            .map(|i| Point::xy(i as f64 / n as f64, 0.0))
            .collect();
        SampledSet::new(2, pts, "segment").unwrap()
    }

    #[test]
    fn interior_of_segment_is_a_line() {
        let s = segment_sample(200);
        let scales = vec![0.02, 0.04, 0.08];
        let c = estimate_tangent_cone(&s, 100, &scales).unwrap();
        assert_eq!(c.kind(), ConeKind::Line);
        assert!(c.lineality()[0].dist(&Point::xy(1.0, 0.0)) < 1e-9);
    }

    #[test]
    fn endpoint_of_segment_is_a_ray() {
        let s = segment_sample(200);
        let scales = vec![0.02, 0.04, 0.08];
        let c = estimate_tangent_cone(&s, 0, &scales).unwrap();
        assert_eq!(c.kind(), ConeKind::Ray);
        assert!(c.pointed_rays()[0].dist(&Point::xy(1.0, 0.0)) < 1e-9);
    }

    #[test]
    fn needs_two_scales() {
        let s = segment_sample(10);
        assert!(estimate_tangent_cone(&s, 0, &[0.5]).is_err());
    }
}
