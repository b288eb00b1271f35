//! Arc-length sampled curves: the knot vector is the arc-length parameter,
//! so the point sequence is 1-Lipschitz in the parameter and unit-speed in
//! the limit.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Point, PolyhedralCone};
use crate::reach::SampledSet;

#[derive(Debug, Clone)]
pub struct ArcCurve {
    dim: usize,
    knots: Vec<f64>,
    points: Vec<Point>,
    closed: bool,
    open_ends: (bool, bool),
    /// Known C^{1,1} parameter of the unit tangent, when the source is
    /// analytic; estimated otherwise.
    l_param: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ArcWire {
    dim: usize,
    knots: Vec<f64>,
    points: Vec<Vec<f64>>,
    closed: bool,
    open_ends: [bool; 2],
}

impl ArcCurve {
    pub fn new(
        dim: usize,
        knots: Vec<f64>,
        points: Vec<Point>,
        closed: bool,
        open_ends: (bool, bool),
    ) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if knots.len() != points.len() || knots.len() < 3 {
            return Err(Error::invalid("need at least 3 aligned knots and points"));
        }
        for w in knots.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::invalid("knots must be strictly increasing"));
            }
        }
        // 1-Lipschitz in the parameter: adjacent chords cannot exceed the
        // parameter gap (pairwise follows by the triangle inequality)
        for i in 0..points.len() - 1 {
            let chord = points[i + 1].dist(&points[i]);
            let gap = knots[i + 1] - knots[i];
            if chord > gap * (1.0 + 1e-6) + 1e-9 {
                return Err(Error::invalid(format!(
                    "chord {chord} exceeds parameter gap {gap} at knot {i}: \
                     not an arc-length parametrization"
                )));
            }
        }
        if closed {
            if points[0].dist(points.last().unwrap()) > 1e-6 {
                return Err(Error::invalid("closed curve must return to its start"));
            }
            let d0 = points[1] - points[0];
            let d1 = *points.last().unwrap() - points[points.len() - 2];
            let pitch = (knots[knots.len() - 1] - knots[0]) / (knots.len() - 1) as f64;
            if let (Some(u0), Some(u1)) = (d0.unit(), d1.unit()) {
                if u0.dist(&u1) > 0.02 + 4.0 * pitch {
                    return Err(Error::invalid("closed curve end tangents do not match"));
                }
            }
            if open_ends.0 || open_ends.1 {
                return Err(Error::invalid("closed curve cannot have open ends"));
            }
        }
        Ok(ArcCurve {
            dim,
            knots,
            points,
            closed,
            open_ends,
            l_param: None,
        })
    }

    pub fn with_l_param(mut self, l: f64) -> Self {
        self.l_param = Some(l);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn open_ends(&self) -> (bool, bool) {
        self.open_ends
    }

    pub fn l_param(&self) -> Option<f64> {
        self.l_param
    }

    /// Total parameter length.
    pub fn length(&self) -> f64 {
        self.knots[self.knots.len() - 1] - self.knots[0]
    }

    /// Largest knot gap.
    pub fn pitch(&self) -> f64 {
        self.knots
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    /// Unit-speed derivative at every knot by central differences
    /// (one-sided at open ends, wrapped when closed).
    pub fn derivatives(&self) -> Vec<Point> {
        let n = self.points.len();
        (0..n)
            .map(|i| {
                let (a, b) = if i == 0 {
                    if self.closed {
                        (n - 2, 1)
                    } else {
                        (0, 1)
                    }
                } else if i == n - 1 {
                    if self.closed {
                        (n - 2, 1)
                    } else {
                        (n - 2, n - 1)
                    }
                } else {
                    (i - 1, i + 1)
                };
                let mut dt = self.knots[b] - self.knots[a];
                if self.closed && i == 0 {
                    dt = (self.length() - self.knots[n - 2]) + self.knots[1];
                }
                if self.closed && i == n - 1 {
                    dt = (self.length() - self.knots[n - 2]) + self.knots[1];
                }
                (self.points[b] - self.points[a]).scale(1.0 / dt)
            })
            .collect()
    }

    /// Intrinsic (arc) distance between two knots.
    pub fn intrinsic_distance_idx(&self, i: usize, j: usize) -> f64 {
        let d = (self.knots[i] - self.knots[j]).abs();
        if self.closed {
            d.min(self.length() - d)
        } else {
            d
        }
    }

    /// Intrinsic distance between two query points, snapped to the nearest
    /// knots.
    pub fn intrinsic_distance(&self, x: &Point, y: &Point) -> f64 {
        self.intrinsic_distance_idx(self.nearest_knot(x), self.nearest_knot(y))
    }

    pub fn nearest_knot(&self, x: &Point) -> usize {
        (0..self.points.len())
            .min_by(|&a, &b| self.points[a].dist(x).total_cmp(&self.points[b].dist(x)))
            .unwrap()
    }

    /// C^{1,1} parameter estimate: the largest difference quotient of the
    /// discrete derivative over all knot pairs.
    pub fn estimate_l(&self) -> f64 {
        let derivs = self.derivatives();
        let n = self.points.len();
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut worst: f64 = 0.0;
                for j in i + 1..n {
                    let dt = self.intrinsic_distance_idx(i, j);
                    if dt > 0.0 {
                        worst = worst.max(derivs[i].dist(&derivs[j]) / dt);
                    }
                }
                worst
            })
            .reduce(|| 0.0, f64::max)
    }

    /// Uniform-continuity modulus of the parametrization inverse: the
    /// smallest chord among knot pairs at intrinsic distance >= eps
    /// (+inf when no pair qualifies).
    pub fn continuity_modulus(&self, eps: f64) -> f64 {
        let n = self.points.len();
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut best = f64::INFINITY;
                for j in i + 1..n {
                    if self.intrinsic_distance_idx(i, j) >= eps {
                        best = best.min(self.points[i].dist(&self.points[j]));
                    }
                }
                best
            })
            .reduce(|| f64::INFINITY, f64::min)
    }

    /// Convert to a sampled set with tangent cones from the discrete
    /// derivatives (lines inside, inward rays at genuine endpoints).
    pub fn as_sampled_set(&self) -> Result<SampledSet> {
        let derivs = self.derivatives();
        let n = self.points.len();
        let points = if self.closed {
            self.points[..n - 1].to_vec()
        } else {
            self.points.clone()
        };
        let m = points.len();
        let mut cones = BTreeMap::new();
        for i in 0..m {
            let u = derivs[i].unit().ok_or_else(|| {
                Error::invalid("vanishing derivative in arc-length parametrization")
            })?;
            let cone = if !self.closed && i == 0 {
                PolyhedralCone::ray(u)?
            } else if !self.closed && i == m - 1 {
                PolyhedralCone::ray(-u)?
            } else {
                PolyhedralCone::line(u)?
            };
            cones.insert(i, cone);
        }
        SampledSet::new(self.dim, points, "curve sample")?.with_tangents(cones)
    }

    pub fn to_json(&self) -> String {
        let wire = ArcWire {
            dim: self.dim,
            knots: self.knots.clone(),
            points: self.points.iter().map(|p| p.coords().to_vec()).collect(),
            closed: self.closed,
            open_ends: [self.open_ends.0, self.open_ends.1],
        };
        serde_json::to_string_pretty(&wire).expect("serializable")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let wire: ArcWire =
            serde_json::from_str(json).map_err(|e| Error::invalid(format!("bad JSON: {e}")))?;
        let points: Result<Vec<Point>> = wire.points.iter().map(|c| Point::new(c)).collect();
        ArcCurve::new(
            wire.dim,
            wire.knots,
            points?,
            wire.closed,
            (wire.open_ends[0], wire.open_ends[1]),
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChordArcReport {
    pub pass: bool,
    /// Smallest chord/halfarc slack in the lower chord bound (negative =
    /// violation).
    pub worst_chord_margin: f64,
    /// Largest tangent-residual excess over `4 L |y-x|^2` (positive =
    /// violation).
    pub worst_tangent_excess: f64,
    pub pairs_checked: usize,
}

/// Verify the chord-arc inequalities over all knot pairs at parameter
/// distance below `1/(2L)`:
/// `|y - x| >= |t - s| / 2` and `|y - x - g(s)(t - s)| <= 4 L |y - x|^2`.
pub fn chord_arc_check(curve: &ArcCurve, l: f64, tol: f64) -> Result<ChordArcReport> {
    if l < 0.0 {
        return Err(Error::invalid("parameter L must be nonnegative"));
    }
    let cutoff = if l == 0.0 { f64::INFINITY } else { 1.0 / (2.0 * l) };
    let derivs = curve.derivatives();
    let n = curve.len();
    let total = curve.length();
    let results: Vec<(f64, f64, usize)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut chord_margin = f64::INFINITY;
            let mut tangent_excess = f64::NEG_INFINITY;
            let mut count = 0usize;
            for j in 0..n {
                if i == j {
                    continue;
                }
                let mut dt = curve.knots()[j] - curve.knots()[i];
                if curve.is_closed() && dt.abs() > total / 2.0 {
                    dt -= total * dt.signum();
                }
                if dt.abs() >= cutoff {
                    continue;
                }
                count += 1;
                let d = curve.points()[j] - curve.points()[i];
                chord_margin = chord_margin.min(d.norm() - 0.5 * dt.abs() + tol);
                let resid = (d - derivs[i].scale(dt)).norm();
                tangent_excess = tangent_excess.max(resid - 4.0 * l * d.norm_sq() - tol);
            }
            (chord_margin, tangent_excess, count)
        })
        .collect();
    let mut worst_chord = f64::INFINITY;
    let mut worst_tangent = f64::NEG_INFINITY;
    let mut pairs = 0;
    for (cm, te, c) in results {
        worst_chord = worst_chord.min(cm);
        worst_tangent = worst_tangent.max(te);
        pairs += c;
    }
    if !worst_chord.is_finite() {
        worst_chord = 0.0;
    }
    if !worst_tangent.is_finite() {
        worst_tangent = 0.0;
    }
    Ok(ChordArcReport {
        pass: worst_chord >= 0.0 && worst_tangent <= 0.0,
        worst_chord_margin: worst_chord,
        worst_tangent_excess: worst_tangent,
        pairs_checked: pairs,
    })
}

/// Arc-length sampled circle of radius `r` (a closed curve).
pub fn circle_curve(r: f64, n: usize) -> ArcCurve {
    let knots: Vec<f64> = (0..=n)
        .map(|i| 2.0 * std::f64::consts::PI * r * i as f64 / n as f64)
        .collect();
    let points: Vec<Point> = (0..=n)
        .map(|i| {
            let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            Point::xy(r * t.cos(), r * t.sin())
        })
        .collect();
    ArcCurve::new(2, knots, points, true, (false, false))
        .expect("valid circle")
        .with_l_param(1.0 / r)
}

/// Straight segment from `a` to `b`.
pub fn segment_curve(a: Point, b: Point, n: usize) -> ArcCurve {
    let len = b.dist(&a);
    let knots: Vec<f64> = (0..=n).map(|i| len * i as f64 / n as f64).collect();
    let points: Vec<Point> = (0..=n)
        .map(|i| a + (b - a).scale(i as f64 / n as f64))
        .collect();
    ArcCurve::new(a.dim(), knots, points, false, (false, false))
        .expect("valid segment")
        .with_l_param(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_l_estimate_is_one() {
        let c = circle_curve(1.0, 6283);
        let l = c.estimate_l();
        assert!((l - 1.0).abs() < 1e-4, "L = {l}");
    }

    #[test]
    fn segment_l_estimate_is_zero() {
        let c = segment_curve(Point::xy(0.0, 0.0), Point::xy(3.0, 0.0), 100);
        assert!(c.estimate_l() < 1e-12);
        assert!((c.intrinsic_distance_idx(0, 100) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn circle_intrinsic_distance_wraps() {
        let c = circle_curve(1.0, 1000);
        let i = 0;
        let j = 500; // antipodal
        assert!((c.intrinsic_distance_idx(i, j) - std::f64::consts::PI).abs() < 1e-9);
        let k = 900; // wraps around
        assert!(
            (c.intrinsic_distance_idx(i, k) - 2.0 * std::f64::consts::PI * 0.1).abs() < 1e-9
        );
    }

    #[test]
    fn circle_modulus_matches_chord_formula() {
        // the discretization bias is about cos(1/4) * pitch, so the pitch
        // must sit clearly below the 1e-3 target
        let c = circle_curve(1.0, 8000);
        let delta = c.continuity_modulus(0.5);
        let expected = 2.0 * (0.25f64).sin();
        assert!((delta - expected).abs() < 1e-3, "delta = {delta}");
    }

    #[test]
    fn segment_modulus_is_identity() {
        let c = segment_curve(Point::xy(0.0, 0.0), Point::xy(1.0, 0.0), 500);
        let eps = 0.25;
        let delta = c.continuity_modulus(eps);
        assert!((delta - eps).abs() < 3e-3, "delta = {delta}");
    }

    #[test]
    fn chord_arc_holds_on_circle_and_segment() {
        let c = circle_curve(1.0, 2000);
        let rep = chord_arc_check(&c, c.estimate_l(), 1e-6).unwrap();
        assert!(rep.pass, "{rep:?}");
        let s = segment_curve(Point::xy(0.0, 0.0), Point::xy(2.0, 0.0), 300);
        let rep = chord_arc_check(&s, 0.0, 1e-6).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn non_monotone_knots_rejected() {
        let e = ArcCurve::new(
            2,
            vec![0.0, 0.2, 0.1],
            vec![Point::xy(0.0, 0.0), Point::xy(0.2, 0.0), Point::xy(0.1, 0.0)],
            false,
            (false, false),
        );
        assert!(e.is_err());
    }

    #[test]
    fn sampled_set_has_ray_ends() {
        use crate::geom::ConeKind;
        let s = segment_curve(Point::xy(0.0, 0.0), Point::xy(1.0, 0.0), 50)
            .as_sampled_set()
            .unwrap();
        assert_eq!(s.tangent_cone(0).unwrap().kind(), ConeKind::Ray);
        assert_eq!(s.tangent_cone(25).unwrap().kind(), ConeKind::Line);
        assert_eq!(s.tangent_cone(50).unwrap().kind(), ConeKind::Ray);
        let c = circle_curve(1.0, 100).as_sampled_set().unwrap();
        assert_eq!(c.len(), 100);
        assert_eq!(c.tangent_cone(0).unwrap().kind(), ConeKind::Line);
    }

    #[test]
    fn json_roundtrip() {
        let c = circle_curve(2.0, 64);
        let s = c.to_json();
        let back = ArcCurve::from_json(&s).unwrap();
        assert_eq!(back.len(), 65);
        assert!(back.is_closed());
    }
}
