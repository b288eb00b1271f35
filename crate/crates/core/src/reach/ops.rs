//! Sample surgery: restriction to balls and tangent-segment attachment.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::geom::{ConeKind, Point, PolyhedralCone};

use super::federer::violations;
use super::SampledSet;

/// Restrict the sample to the closed ball `B(center, rho)`. Tangent cones
/// are kept at interior points; points within tolerance of the bounding
/// sphere lose their cones and are left for re-estimation.
pub fn restrict_to_ball(set: &SampledSet, center: &Point, rho: f64) -> Result<SampledSet> {
    if rho <= 0.0 {
        return Err(Error::invalid("ball radius must be positive"));
    }
    let band = 1e-9 * set.bbox_diameter().max(1.0);
    let mut points = Vec::new();
    let mut keep: Vec<usize> = Vec::new();
    for (i, p) in set.points().iter().enumerate() {
        if p.dist(center) <= rho + band {
            keep.push(i);
            points.push(*p);
        }
    }
    if points.is_empty() {
        return Err(Error::invalid("sample does not meet the ball"));
    }
    let mut restricted = SampledSet::new(
        set.dim(),
        points,
        format!("{} | ball(r={rho})", set.label),
    )?;
    if let Some(map) = set.tangent_map() {
        let mut new_map = BTreeMap::new();
        for (new_i, &old_i) in keep.iter().enumerate() {
            if let Some(c) = map.get(&old_i) {
                let on_sphere = (set.point(old_i).dist(center) - rho).abs() <= band;
                if !on_sphere {
                    new_map.insert(new_i, c.clone());
                }
            }
        }
        restricted = restricted.with_tangents(new_map)?;
    }
    Ok(restricted)
}

/// Attach the segment `{a - t u : 0 < t <= rho/4}` at a sample point whose
/// tangent cone is the ray spanned by `u`, updating the oracle (line cones
/// on the segment interior and at `a`, ray cone at the new far end).
///
/// With `verify = true` both the precondition (no violations at `rho`) and
/// the postcondition (no violations at `rho/4`) are checked; both are
/// O(n^2) pair scans.
pub fn attach_segment(
    set: &SampledSet,
    a: usize,
    u: &Point,
    rho: f64,
    n_seg: usize,
    verify: bool,
) -> Result<SampledSet> {
    if rho <= 0.0 || n_seg == 0 {
        return Err(Error::invalid("need rho > 0 and n_seg >= 1"));
    }
    let dir = u
        .unit()
        .ok_or_else(|| Error::invalid("attachment direction must be nonzero"))?;
    let cone = set
        .tangent_cone(a)
        .ok_or(Error::MissingTangent(a))?;
    if cone.kind() != ConeKind::Ray || cone.pointed_rays()[0].dist(&dir) > 1e-7 {
        return Err(Error::invalid(
            "tangent cone at the attachment point is not the ray along u",
        ));
    }
    if verify {
        let pre = violations(set, rho)?;
        if !pre.is_empty() {
            return Err(Error::certification(
                "attach-precondition",
                format!(
                    "sample already violates the tangent inequality at level {rho} \
                     (worst pair {} -> {})",
                    pre[0].a, pre[0].b
                ),
            ));
        }
    }
    let base = set.point(a);
    let mut points: Vec<Point> = set.points().to_vec();
    let first_new = points.len();
    let step = rho / 4.0 / n_seg as f64;
    for j in 1..=n_seg {
        points.push(base - dir.scale(j as f64 * step));
    }
    let mut result = SampledSet::new(set.dim(), points, format!("{} + segment", set.label))?;
    let mut map = set.tangent_map().cloned().unwrap_or_default();
    map.insert(a, PolyhedralCone::line(dir)?);
    for j in 0..n_seg {
        let idx = first_new + j;
        if j + 1 == n_seg {
            map.insert(idx, PolyhedralCone::ray(dir)?);
        } else {
            map.insert(idx, PolyhedralCone::line(dir)?);
        }
    }
    result = result.with_tangents(map)?;
    if verify {
        let post = violations(&result, rho / 4.0)?;
        if !post.is_empty() {
            return Err(Error::certification(
                "attach-postcondition",
                format!(
                    "attached sample violates the tangent inequality at level {} \
                     (worst pair {} -> {}, excess {:.3e})",
                    rho / 4.0,
                    post[0].a,
                    post[0].b,
                    post[0].excess,
                ),
            ));
        }
    }
    Ok(result)
}
