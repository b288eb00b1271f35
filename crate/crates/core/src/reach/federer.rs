//! Tangent-cone reach certification on finite samples.
//!
//! For a closed set, `reach A >= t` holds exactly when
//! `dist(b - a, Tan(A, a)) <= |b - a|^2 / (2 t)` for all `a, b` in the set.
//! On a sample with tangent data the infimum of the pairwise ratios
//! `|b - a|^2 / (2 dist(b - a, Tan(A, a)))` therefore upper-bounds nothing
//! and lower-bounds nothing in general, but it is exact at sample
//! resolution and monotone under subsampling, which is what the
//! certificates in this crate need.

use rayon::prelude::*;
use serde::Serialize;

use super::SampledSet;
use crate::error::{Error, Result};
use crate::geom::Point;

/// Result of the pairwise reach estimation.
#[derive(Debug, Clone, Serialize)]
pub struct ReachReport {
    /// inf over ordered pairs of the tangent ratio; +inf when no pair
    /// constrains (the convex case).
    pub estimate: f64,
    /// Pair attaining the infimum (indices into the sample), when finite.
    pub witness: Option<(usize, usize)>,
    /// Local estimate per sample index with tangent data.
    pub per_point: Vec<(usize, f64)>,
    /// Distances at or below this value impose no constraint.
    pub tolerance: f64,
}

/// A pair violating the tangent inequality at level `t`.
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub a: usize,
    pub b: usize,
    pub distance: f64,
    pub bound: f64,
    pub excess: f64,
}

fn constraint_tolerance(set: &SampledSet) -> f64 {
    1e-9 * set.bbox_diameter().max(1e-9)
}

/// Pairwise reach estimate over all ordered pairs `(a, b)` where `a`
/// carries tangent data. Errors when the sample has no tangent oracle.
pub fn reach_estimate(set: &SampledSet) -> Result<ReachReport> {
    let tangents = set
        .tangent_map()
        .ok_or_else(|| Error::invalid("reach estimation requires tangent data"))?;
    if tangents.is_empty() {
        return Err(Error::invalid("tangent oracle is empty"));
    }
    let tol = constraint_tolerance(set);
    let points = set.points();
    let indices: Vec<usize> = tangents.keys().copied().collect();

    let per_point: Vec<(usize, f64, Option<usize>)> = indices
        .par_iter()
        .map(|&ai| {
            let a = points[ai];
            let cone = &tangents[&ai];
            let mut local = f64::INFINITY;
            let mut wit = None;
            for (bi, b) in points.iter().enumerate() {
                if bi == ai {
                    continue;
                }
                let u = *b - a;
                let d = cone.distance(&u);
                if d > tol {
                    let ratio = u.norm_sq() / (2.0 * d);
                    if ratio < local {
                        local = ratio;
                        wit = Some(bi);
                    }
                }
            }
            (ai, local, wit)
        })
        .collect();

    let mut estimate = f64::INFINITY;
    let mut witness = None;
    for (ai, local, wit) in &per_point {
        if *local < estimate {
            estimate = *local;
            witness = wit.map(|b| (*ai, b));
        }
    }
    Ok(ReachReport {
        estimate,
        witness,
        per_point: per_point.into_iter().map(|(i, l, _)| (i, l)).collect(),
        tolerance: tol,
    })
}

/// All ordered pairs violating `dist(b - a, Tan(A, a)) <= |b - a|^2 / (2t)`,
/// sorted by decreasing excess. An empty list certifies `reach >= t` at
/// sample resolution.
pub fn violations(set: &SampledSet, t: f64) -> Result<Vec<Violation>> {
    if t <= 0.0 {
        return Err(Error::invalid("violation level must be positive"));
    }
    let tangents = set
        .tangent_map()
        .ok_or_else(|| Error::invalid("violation check requires tangent data"))?;
    let tol = constraint_tolerance(set);
    let points = set.points();
    let indices: Vec<usize> = tangents.keys().copied().collect();

    let mut out: Vec<Violation> = indices
        .par_iter()
        .flat_map_iter(|&ai| {
            let a = points[ai];
            let cone = &tangents[&ai];
            let mut vs = Vec::new();
            for (bi, b) in points.iter().enumerate() {
                if bi == ai {
                    continue;
                }
                let u = *b - a;
                let d = cone.distance(&u);
                let bound = u.norm_sq() / (2.0 * t);
                if d > bound + tol {
                    vs.push(Violation {
                        a: ai,
                        b: bi,
                        distance: d,
                        bound,
                        excess: d - bound,
                    });
                }
            }
            vs
        })
        .collect();
    out.sort_by(|x, y| {
        y.excess
            .total_cmp(&x.excess)
            .then(x.a.cmp(&y.a))
            .then(x.b.cmp(&y.b))
    });
    Ok(out)
}

/// Soft diagnostic for the 1-Lipschitz behavior of the local reach: the
/// largest positive part of `|rho_a - rho_b| - |a - b|` over pairs with
/// finite local estimates.
pub fn local_reach_lipschitz_defect(set: &SampledSet, report: &ReachReport) -> f64 {
    let finite: Vec<(usize, f64)> = report
        .per_point
        .iter()
        .copied()
        .filter(|(_, l)| l.is_finite())
        .collect();
    let mut defect: f64 = 0.0;
    for (i, (ai, la)) in finite.iter().enumerate() {
        for (bi, lb) in finite.iter().skip(i + 1) {
            let gap = (la - lb).abs() - set.point(*ai).dist(&set.point(*bi));
            defect = defect.max(gap);
        }
    }
    defect
}

/// Check the pairwise normal inequality: for a unit normal `v` at `a` and
/// every sample point `b`, `<b - a, v> <= |b - a|^2 / (2 rho)`.
/// Returns the worst excess.
pub fn normal_inequality_excess(set: &SampledSet, a: usize, normals: &[Point], rho: f64) -> f64 {
    let pa = set.point(a);
    let mut worst = f64::NEG_INFINITY;
    for (bi, b) in set.points().iter().enumerate() {
        if bi == a {
            continue;
        }
        let u = *b - pa;
        for v in normals {
            let excess = u.dot(v) - u.norm_sq() / (2.0 * rho);
            worst = worst.max(excess);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::PolyhedralCone;
    use std::collections::BTreeMap;

    fn circle_with_tangents(n: usize) -> SampledSet {
        let pts: Vec<Point> = (0..n)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                Point::xy(t.cos(), t.sin())
            })
            .collect();
        let mut cones = BTreeMap::new();
        for (i, p) in pts.iter().enumerate() {
            cones.insert(i, PolyhedralCone::line(p.perp()).unwrap());
        }
        SampledSet::new(2, pts, "circle")
            .unwrap()
            .with_tangents(cones)
            .unwrap()
    }

    #[test]
    fn circle_estimate_is_one() {
        let s = circle_with_tangents(500);
        let r = reach_estimate(&s).unwrap();
        assert!((r.estimate - 1.0).abs() < 1e-9, "estimate {}", r.estimate);
        assert!(r.witness.is_some());
    }

    #[test]
    fn two_point_set_is_half_gap() {
        let mut cones = BTreeMap::new();
        cones.insert(0, PolyhedralCone::trivial(2));
        cones.insert(1, PolyhedralCone::trivial(2));
        let s = SampledSet::new(2, vec![Point::xy(0.0, 0.0), Point::xy(1.0, 0.0)], "pair")
            .unwrap()
            .with_tangents(cones)
            .unwrap();
        let r = reach_estimate(&s).unwrap();
        assert_eq!(r.estimate, 0.5);
    }

    #[test]
    fn violations_bracket_the_estimate() {
        let s = circle_with_tangents(300);
        assert!(violations(&s, 0.9).unwrap().is_empty());
        let v = violations(&s, 1.1).unwrap();
        assert!(!v.is_empty());
        assert!(v[0].excess >= v[v.len() - 1].excess);
    }

    #[test]
    fn missing_tangents_is_an_error() {
        let s = SampledSet::new(2, vec![Point::xy(0.0, 0.0), Point::xy(1.0, 0.0)], "no tan")
            .unwrap();
        assert!(reach_estimate(&s).is_err());
        assert!(violations(&s, 1.0).is_err());
    }

    #[test]
    fn lipschitz_defect_zero_on_circle() {
        let s = circle_with_tangents(100);
        let r = reach_estimate(&s).unwrap();
        assert!(local_reach_lipschitz_defect(&s, &r) <= 1e-9);
    }
}
