//! Piecewise-affine convex functions `f(x) = max_i (<a_i, x> + b_i)` on an
//! axis-aligned box domain.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Point, Polytope};

#[derive(Debug, Clone)]
pub struct PwlConvex {
    dim: usize,
    pieces: Vec<(Point, f64)>,
    lo: Point,
    hi: Point,
    merged: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct PwlWire {
    dim: usize,
    pieces: Vec<PieceWire>,
    domain: DomainWire,
}

#[derive(Debug, Serialize, Deserialize)]
struct PieceWire {
    a: Vec<f64>,
    b: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct DomainWire {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl PwlConvex {
    /// Build from affine pieces. Pieces with duplicate slopes are merged,
    /// keeping the larger offset; the merge count is recorded.
    pub fn new(dim: usize, pieces: &[(Point, f64)], lo: Point, hi: Point) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if pieces.is_empty() {
            return Err(Error::invalid("need at least one affine piece"));
        }
        for i in 0..dim {
            if lo.coord(i) >= hi.coord(i) {
                return Err(Error::invalid("domain box is empty"));
            }
        }
        let mut kept: Vec<(Point, f64)> = Vec::new();
        let mut merged = 0;
        for (a, b) in pieces {
            if a.dim() != dim {
                return Err(Error::invalid("slope dimension mismatch"));
            }
            if let Some(existing) = kept.iter_mut().find(|(a2, _)| a2.dist(a) < 1e-12) {
                existing.1 = existing.1.max(*b);
                merged += 1;
            } else {
                kept.push((*a, *b));
            }
        }
        Ok(PwlConvex {
            dim,
            pieces: kept,
            lo,
            hi,
            merged,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[(Point, f64)] {
        &self.pieces
    }

    pub fn domain(&self) -> (Point, Point) {
        (self.lo, self.hi)
    }

    /// Number of duplicate-slope pieces merged at construction.
    pub fn merged_pieces(&self) -> usize {
        self.merged
    }

    /// Lipschitz constant `max_i |a_i|`.
    pub fn lipschitz(&self) -> f64 {
        self.pieces
            .iter()
            .map(|(a, _)| a.norm())
            .fold(0.0, f64::max)
    }

    pub fn contains(&self, x: &Point) -> bool {
        (0..self.dim).all(|i| {
            x.coord(i) >= self.lo.coord(i) - 1e-12 && x.coord(i) <= self.hi.coord(i) + 1e-12
        })
    }

    pub fn eval(&self, x: &Point) -> f64 {
        self.pieces
            .iter()
            .map(|(a, b)| a.dot(x) + b)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Indices of pieces within the scale-free activity tolerance of the max.
    pub fn active_set(&self, x: &Point, tol: Option<f64>) -> Vec<usize> {
        let v = self.eval(x);
        let tol = tol.unwrap_or(1e-9 * (1.0 + v.abs()));
        (0..self.pieces.len())
            .filter(|&i| {
                let (a, b) = &self.pieces[i];
                a.dot(x) + b >= v - tol
            })
            .collect()
    }

    /// Subdifferential at `x`: convex hull of the active slopes.
    pub fn subdifferential(&self, x: &Point, tol: Option<f64>) -> Polytope {
        let active = self.active_set(x, tol);
        let slopes: Vec<Point> = active.iter().map(|&i| self.pieces[i].0).collect();
        Polytope::from_points(self.dim, &slopes, 1e-12).expect("nonempty active set")
    }

    /// One-sided directional derivative: support function of the
    /// subdifferential, exact for a finite max.
    pub fn directional_derivative(&self, x: &Point, v: &Point) -> f64 {
        self.active_set(x, None)
            .iter()
            .map(|&i| self.pieces[i].0.dot(v))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn to_json(&self) -> String {
        let wire = PwlWire {
            dim: self.dim,
            pieces: self
                .pieces
                .iter()
                .map(|(a, b)| PieceWire {
                    a: a.coords().to_vec(),
                    b: *b,
                })
                .collect(),
            domain: DomainWire {
                lo: self.lo.coords().to_vec(),
                hi: self.hi.coords().to_vec(),
            },
        };
        serde_json::to_string_pretty(&wire).expect("serializable")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let wire: PwlWire =
            serde_json::from_str(json).map_err(|e| Error::invalid(format!("bad JSON: {e}")))?;
        let pieces: Result<Vec<(Point, f64)>> = wire
            .pieces
            .iter()
            .map(|p| Point::new(&p.a).map(|a| (a, p.b)))
            .collect();
        PwlConvex::new(
            wire.dim,
            &pieces?,
            Point::new(&wire.domain.lo)?,
            Point::new(&wire.domain.hi)?,
        )
    }

    /// f = max(x1, -x1, x2, -x2) = sup-norm on the given box, a standard
    /// test function.
    pub fn linf_2d(half_width: f64) -> Self {
        PwlConvex::new(
            2,
            &[
                (Point::xy(1.0, 0.0), 0.0),
                (Point::xy(-1.0, 0.0), 0.0),
                (Point::xy(0.0, 1.0), 0.0),
                (Point::xy(0.0, -1.0), 0.0),
            ],
            Point::xy(-half_width, -half_width),
            Point::xy(half_width, half_width),
        )
        .expect("valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abs_1d() -> PwlConvex {
        PwlConvex::new(
            1,
            &[(Point::x1(1.0), 0.0), (Point::x1(-1.0), 0.0)],
            Point::x1(-1.0),
            Point::x1(1.0),
        )
        .unwrap()
    }

    #[test]
    fn abs_value_eval_and_active() {
        let f = abs_1d();
        assert_eq!(f.eval(&Point::x1(0.0)), 0.0);
        assert_eq!(f.active_set(&Point::x1(0.0), None), vec![0, 1]);
        assert_eq!(f.active_set(&Point::x1(0.5), None), vec![0]);
        let sub = f.subdifferential(&Point::x1(0.0), None);
        assert_eq!(sub.vertices().len(), 2);
        assert!((sub.inscribed_ball(1).radius - 1.0).abs() < 1e-12);
    }

    #[test]
    fn linf_eval_and_active() {
        let f = PwlConvex::linf_2d(1.0);
        assert_eq!(f.eval(&Point::xy(1.0, 0.3)), 1.0);
        assert_eq!(f.active_set(&Point::xy(1.0, 0.3), None), vec![0]);
        assert_eq!(f.active_set(&Point::xy(0.5, 0.5), None), vec![0, 2]);
        let sub0 = f.subdifferential(&Point::xy(0.0, 0.0), None);
        assert_eq!(sub0.vertices().len(), 4);
        assert!(
            (sub0.inscribed_ball(2).radius - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9
        );
    }

    #[test]
    fn smooth_point_singleton_gradient() {
        let f = PwlConvex::linf_2d(1.0);
        let sub = f.subdifferential(&Point::xy(0.9, 0.1), None);
        assert_eq!(sub.vertices().len(), 1);
        assert!(sub.vertices()[0].dist(&Point::xy(1.0, 0.0)) < 1e-12);
    }

    #[test]
    fn duplicate_slopes_merge() {
        let f = PwlConvex::new(
            1,
            &[
                (Point::x1(1.0), 0.0),
                (Point::x1(1.0), -0.5),
                (Point::x1(-1.0), 0.0),
            ],
            Point::x1(-1.0),
            Point::x1(1.0),
        )
        .unwrap();
        assert_eq!(f.pieces().len(), 2);
        assert_eq!(f.merged_pieces(), 1);
    }

    #[test]
    fn json_roundtrip() {
        let f = PwlConvex::linf_2d(1.0);
        let s = f.to_json();
        let g = PwlConvex::from_json(&s).unwrap();
        assert_eq!(g.pieces().len(), 4);
        assert_eq!(g.eval(&Point::xy(0.25, -0.75)), 0.75);
    }
}
