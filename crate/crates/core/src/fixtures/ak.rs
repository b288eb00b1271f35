//! Lens sets: for a finite K ⊂ ℝ with phi(x) = dist(x, K)^2, the region
//! between the graphs of phi and -phi over conv K. Boundary columns are
//! refined near the breakpoints of phi (the K points and gap midpoints),
//! where the classification tests need resolution.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::geom::{Point, PolyhedralCone};
use crate::reach::SampledSet;

/// Semiconcavity constant of the squared distance to any closed K ⊂ ℝ.
pub const AK_SEMICONCAVITY: f64 = 2.0;

/// phi(x) = dist(x, K)^2 for sorted breakpoints.
pub fn ak_phi(k: &[f64]) -> impl Fn(f64) -> f64 + '_ {
    move |x: f64| {
        k.iter()
            .map(|p| (x - p).abs())
            .fold(f64::INFINITY, f64::min)
            .powi(2)
    }
}

/// Derivative of phi away from breakpoints.
fn ak_phi_slope(k: &[f64], x: f64) -> f64 {
    let nearest = k
        .iter()
        .copied()
        .min_by(|a, b| (x - a).abs().total_cmp(&(x - b).abs()))
        .unwrap();
    2.0 * (x - nearest)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum ConeSpec {
    FullPlane,
    /// Upper or lower graph point with slope s (of the graph as drawn).
    UpperGraph(f64),
    LowerGraph(f64),
    /// Ridge at a gap midpoint; the slope magnitude of the meeting pieces.
    UpperRidge(f64),
    LowerRidge(f64),
    /// K point interior to conv K.
    PinchLine,
    /// Leftmost / rightmost K point.
    TipRight, // tangent ray +e1 (the set extends to the right)
    TipLeft,  // tangent ray -e1
}

fn cone_2d(spec: ConeSpec) -> PolyhedralCone {
    match spec {
        ConeSpec::FullPlane => PolyhedralCone::full(2),
        ConeSpec::UpperGraph(s) => {
            let t = Point::xy(1.0, s).unit().unwrap();
            let inward = Point::xy(s, -1.0).unit().unwrap();
            PolyhedralCone::halfplane(t, inward).expect("halfplane")
        }
        ConeSpec::LowerGraph(s) => {
            let t = Point::xy(1.0, s).unit().unwrap();
            let inward = Point::xy(-s, 1.0).unit().unwrap();
            PolyhedralCone::halfplane(t, inward).expect("halfplane")
        }
        ConeSpec::UpperRidge(g) => PolyhedralCone::wedge(
            Point::xy(1.0, -g).unit().unwrap(),
            Point::xy(-1.0, -g).unit().unwrap(),
        )
        .expect("wedge"),
        ConeSpec::LowerRidge(g) => PolyhedralCone::wedge(
            Point::xy(1.0, g).unit().unwrap(),
            Point::xy(-1.0, g).unit().unwrap(),
        )
        .expect("wedge"),
        ConeSpec::PinchLine => PolyhedralCone::line(Point::xy(1.0, 0.0)).expect("line"),
        ConeSpec::TipRight => PolyhedralCone::ray(Point::xy(1.0, 0.0)).expect("ray"),
        ConeSpec::TipLeft => PolyhedralCone::ray(Point::xy(-1.0, 0.0)).expect("ray"),
    }
}

/// Column grid for one gap [a, b]: uniform base plus geometric refinement
/// near both ends and the midpoint.
fn gap_columns(a: f64, b: f64, base_cols: usize) -> Vec<f64> {
    let gap = b - a;
    let mut xs: Vec<f64> = (0..=base_cols)
        .map(|i| a + gap * i as f64 / base_cols as f64)
        .collect();
    let m = 0.5 * (a + b);
    for (anchor, sides) in [(a, [1.0]), (b, [-1.0]), (m, [-1.0, 1.0])] {
        for side in sides.iter().take(if anchor == m { 2 } else { 1 }) {
            // two-tier geometric refinement toward the anchor
            for tier in [(0.05, 64usize), (0.008, 64usize)] {
                let (w, count) = tier;
                for i in 1..=count {
                    xs.push(anchor + side * gap * w * i as f64 / count as f64);
                }
            }
        }
    }
    xs.retain(|x| *x >= a - 1e-15 && *x <= b + 1e-15);
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|p, q| (*p - *q).abs() < 1e-12);
    xs
}

/// Points and cone tags of a single lens over the gap [a, b].
fn lens_samples(
    k: &[f64],
    a: f64,
    b: f64,
    base_cols: usize,
    y_step: f64,
) -> Vec<(Point, ConeSpec)> {
    let phi = ak_phi(k);
    let m = 0.5 * (a + b);
    let mut out: Vec<(Point, ConeSpec)> = Vec::new();
    for x in gap_columns(a, b, base_cols) {
        let h = phi(x);
        if x <= a + 1e-15 || x >= b - 1e-15 {
            continue; // gap-end pinches handled by the caller
        }
        let ridge = (x - m).abs() < 1e-12;
        if h > 1e-15 {
            if ridge {
                out.push((Point::xy(x, h), ConeSpec::UpperRidge(b - a)));
                out.push((Point::xy(x, -h), ConeSpec::LowerRidge(b - a)));
            } else {
                let s = ak_phi_slope(k, x);
                out.push((Point::xy(x, h), ConeSpec::UpperGraph(s)));
                out.push((Point::xy(x, -h), ConeSpec::LowerGraph(-s)));
            }
        }
        // interior rows, always including y = 0
        out.push((Point::xy(x, 0.0), ConeSpec::FullPlane));
        let rows = (h / y_step).floor() as usize;
        for j in 1..=rows {
            let y = j as f64 * y_step;
            if y < h - 1e-12 {
                out.push((Point::xy(x, y), ConeSpec::FullPlane));
                out.push((Point::xy(x, -y), ConeSpec::FullPlane));
            }
        }
    }
    out
}

fn gaps_of(k: &[f64]) -> Vec<(f64, f64)> {
    k.windows(2)
        .filter(|w| w[1] - w[0] > 1e-12)
        .map(|w| (w[0], w[1]))
        .collect()
}

fn sorted_k(k: &[f64]) -> Result<Vec<f64>> {
    if k.len() < 2 {
        return Err(Error::invalid("K needs at least two points"));
    }
    let mut s = k.to_vec();
    s.sort_by(f64::total_cmp);
    s.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    if s.len() < 2 {
        return Err(Error::invalid("K needs at least two distinct points"));
    }
    Ok(s)
}

/// The planar lens set for breakpoints `k`, sampled with roughly `n`
/// points and an exact tangent oracle everywhere.
pub fn gen_ak(k: &[f64], n: usize) -> Result<SampledSet> {
    let ks = sorted_k(k)?;
    let gaps = gaps_of(&ks);
    let total: f64 = gaps.iter().map(|(a, b)| b - a).sum();
    let base_cols_total = (n / 25).max(32);
    let mut samples: Vec<(Point, ConeSpec)> = Vec::new();
    for &(a, b) in &gaps {
        let cols = ((b - a) / total * base_cols_total as f64).ceil() as usize;
        let y_step = total / base_cols_total as f64 * 1.2;
        samples.extend(lens_samples(&ks, a, b, cols.max(16), y_step));
    }
    // pinch points at the K breakpoints
    for (i, kp) in ks.iter().enumerate() {
        let spec = if i == 0 {
            ConeSpec::TipRight
        } else if i == ks.len() - 1 {
            ConeSpec::TipLeft
        } else {
            ConeSpec::PinchLine
        };
        samples.push((Point::xy(*kp, 0.0), spec));
    }
    assemble(2, samples, format!("ak(k={ks:?})"), |p, s| (p, cone_2d(s)))
}

/// The 3-dimensional union of lens patches, one per gap, rotated around
/// the x-axis by the given angles.
pub fn gen_ak_theta(k: &[f64], thetas: &[f64], n: usize) -> Result<SampledSet> {
    let ks = sorted_k(k)?;
    let gaps = gaps_of(&ks);
    if thetas.len() != gaps.len() {
        return Err(Error::invalid(format!(
            "need one rotation angle per gap: {} gaps, {} angles",
            gaps.len(),
            thetas.len()
        )));
    }
    let total: f64 = gaps.iter().map(|(a, b)| b - a).sum();
    let base_cols_total = (n / 25).max(32);
    let mut samples: Vec<(Point, PolyhedralCone)> = Vec::new();
    for (&(a, b), &theta) in gaps.iter().zip(thetas) {
        let cols = ((b - a) / total * base_cols_total as f64).ceil() as usize;
        let y_step = total / base_cols_total as f64 * 1.2;
        let embed = |p: &Point| {
            Point::xyz(p.coord(0), p.coord(1) * theta.cos(), p.coord(1) * theta.sin())
        };
        for (p, spec) in lens_samples(&ks, a, b, cols.max(16), y_step) {
            let cone2 = cone_2d(spec);
            let gens: Vec<Point> = cone2
                .canonical_generators()
                .iter()
                .map(|g| embed(g))
                .collect();
            let cone3 = PolyhedralCone::from_generators(3, &gens)?;
            samples.push((embed(&p), cone3));
        }
    }
    // pinch points on the axis, shared between neighboring patches
    for (i, kp) in ks.iter().enumerate() {
        let cone = if i == 0 {
            PolyhedralCone::ray(Point::xyz(1.0, 0.0, 0.0))?
        } else if i == ks.len() - 1 {
            PolyhedralCone::ray(Point::xyz(-1.0, 0.0, 0.0))?
        } else {
            PolyhedralCone::line(Point::xyz(1.0, 0.0, 0.0))?
        };
        samples.push((Point::xyz(*kp, 0.0, 0.0), cone));
    }
    assemble(3, samples, format!("ak_theta(k={ks:?})"), |p, c| (p, c))
}

/// Deduplicate at sample tolerance, merging the cones of coincident points
/// by convex hull, and build the sampled set.
fn assemble<T>(
    dim: usize,
    samples: Vec<(Point, T)>,
    label: String,
    to_cone: impl Fn(Point, T) -> (Point, PolyhedralCone),
) -> Result<SampledSet> {
    let mut points: Vec<Point> = Vec::new();
    let mut cones: Vec<PolyhedralCone> = Vec::new();
    for (p, tag) in samples {
        let (p, cone) = to_cone(p, tag);
        if let Some(i) = points.iter().position(|q| q.dist(&p) < 1e-12) {
            cones[i] = cones[i].hull_with(&cone)?;
        } else {
            points.push(p);
            cones.push(cone);
        }
    }
    let set = SampledSet::new(dim, points, label)?;
    let map: BTreeMap<usize, PolyhedralCone> = cones.into_iter().enumerate().collect();
    set.with_tangents(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::{semiconcave_check_1d, Grid1d};
    use crate::geom::ConeKind;
    use crate::reach::violations;

    #[test]
    fn singleton_k_is_rejected() {
        assert!(gen_ak(&[1.0], 100).is_err());
        assert!(gen_ak(&[1.0, 1.0 + 1e-15], 100).is_err());
    }

    #[test]
    fn two_point_lens_shape() {
        let s = gen_ak(&[0.0, 1.0], 2000).unwrap();
        // everything lives in the lens |y| <= phi(x), x in [0, 1]
        let phi = ak_phi(&[0.0, 1.0]);
        for p in s.points() {
            assert!((-1e-12..=1.0 + 1e-12).contains(&p.coord(0)));
            assert!(p.coord(1).abs() <= phi(p.coord(0)) + 1e-12);
        }
        // tips carry ray cones, pinch columns exist
        let tip = s.points().iter().position(|p| p.norm() < 1e-12).unwrap();
        assert_eq!(s.tangent_cone(tip).unwrap().kind(), ConeKind::Ray);
    }

    #[test]
    fn three_point_lens_has_interior_pinch() {
        let s = gen_ak(&[0.0, 0.5, 1.0], 2000).unwrap();
        let pinch = s
            .points()
            .iter()
            .position(|p| p.dist(&Point::xy(0.5, 0.0)) < 1e-12)
            .unwrap();
        assert_eq!(s.tangent_cone(pinch).unwrap().kind(), ConeKind::Line);
    }

    #[test]
    fn phi_passes_tight_semiconcavity() {
        let ks = [0.0, 1.0];
        let grid = Grid1d::from_fn(0.0, 0.002, 501, ak_phi(&ks));
        assert!(semiconcave_check_1d(&grid, 2.0, 1e-9).pass);
        assert!(!semiconcave_check_1d(&grid, 1.9, 1e-9).pass);
    }

    #[test]
    fn lens_passes_violations_at_conservative_level() {
        // true reach of the K = {0, 1} lens is 1/2 (parabola curvature)
        let s = gen_ak(&[0.0, 1.0], 1500).unwrap();
        let v = violations(&s, 0.4).unwrap();
        assert!(v.is_empty(), "violations: {:?}", &v[..v.len().min(3)]);
    }

    #[test]
    fn theta_zero_embeds_the_planar_set() {
        let flat = gen_ak(&[0.0, 0.5, 1.0], 800).unwrap();
        let spun = gen_ak_theta(&[0.0, 0.5, 1.0], &[0.0, 0.0], 800).unwrap();
        assert_eq!(flat.len(), spun.len());
        for p in flat.points() {
            let q = Point::xyz(p.coord(0), p.coord(1), 0.0);
            assert!(
                spun.points().iter().any(|r| r.dist(&q) < 1e-12),
                "missing {q:?}"
            );
        }
    }

    #[test]
    fn theta_mismatch_is_rejected() {
        assert!(gen_ak_theta(&[0.0, 0.5, 1.0], &[0.0], 100).is_err());
    }
}
