//! Convex polytopes in ℝ^d (d <= 3) stored by their extreme points, with
//! Chebyshev-style inscribed-ball queries in any dimension up to the
//! affine rank.

use serde::{Deserialize, Serialize};

use super::hull::{convex_hull_2d, convex_hull_3d};
use super::linalg;
use super::lp;
use super::Point;
use crate::error::{Error, Result};

/// Result of an inscribed-ball query: a `k`-dimensional ball of the given
/// radius, centered at `center`, spanning `basis`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InscribedBall {
    pub radius: f64,
    pub center: Point,
    pub basis: Vec<Point>,
}

/// Convex polytope; the vertex list is reduced to the exact extreme-point
/// set at construction.
#[derive(Debug, Clone)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Point>,
    origin: Point,
    basis: Vec<Point>,
}

impl Polytope {
    pub fn from_points(dim: usize, points: &[Point], tol: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if points.is_empty() {
            return Err(Error::invalid("polytope needs at least one point"));
        }
        let mut pts: Vec<Point> = Vec::new();
        for p in points {
            if !pts.iter().any(|q| q.dist(p) < tol) {
                pts.push(*p);
            }
        }
        let centroid = pts
            .iter()
            .fold(Point::zero(dim), |acc, p| acc + *p)
            .scale(1.0 / pts.len() as f64);
        let diffs: Vec<Point> = pts.iter().map(|p| *p - centroid).collect();
        let basis = linalg::canonical_subspace_basis(&diffs, dim, tol.max(1e-12));
        let vertices = match basis.len() {
            0 => vec![pts[0]],
            1 => {
                let d = basis[0];
                let tmin = pts
                    .iter()
                    .min_by(|a, b| d.dot(&(**a - centroid)).total_cmp(&d.dot(&(**b - centroid))))
                    .unwrap();
                let tmax = pts
                    .iter()
                    .max_by(|a, b| d.dot(&(**a - centroid)).total_cmp(&d.dot(&(**b - centroid))))
                    .unwrap();
                let mut v = vec![*tmin];
                if tmax.dist(tmin) >= tol {
                    v.push(*tmax);
                }
                v
            }
            2 => {
                let planar: Vec<(f64, f64)> = pts
                    .iter()
                    .map(|p| {
                        let w = *p - centroid;
                        (basis[0].dot(&w), basis[1].dot(&w))
                    })
                    .collect();
                let hull = convex_hull_2d(&planar, 1e-12);
                hull.into_iter().map(|i| pts[i]).collect()
            }
            _ => {
                let faces = convex_hull_3d(&pts, 1e-12);
                let mut ids: Vec<usize> = faces.iter().flatten().copied().collect();
                ids.sort_unstable();
                ids.dedup();
                ids.into_iter().map(|i| pts[i]).collect()
            }
        };
        let mut vertices = vertices;
        vertices.sort_by(|a, b| a.lex_cmp(b));
        Ok(Polytope {
            dim,
            vertices,
            origin: centroid,
            basis,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn diameter(&self) -> f64 {
        let mut best: f64 = 0.0;
        for i in 0..self.vertices.len() {
            for j in i + 1..self.vertices.len() {
                best = best.max(self.vertices[i].dist(&self.vertices[j]));
            }
        }
        best
    }

    /// Affine coordinates of a point with respect to the internal frame.
    fn to_local(&self, p: &Point) -> Vec<f64> {
        let w = *p - self.origin;
        self.basis.iter().map(|b| b.dot(&w)).collect()
    }

    fn from_local(&self, c: &[f64]) -> Point {
        let mut p = self.origin;
        for (ci, b) in c.iter().zip(&self.basis) {
            p = p + b.scale(*ci);
        }
        p
    }

    /// Facet inequalities `<n, x> <= b` in local (affine-hull) coordinates,
    /// with unit normals.
    fn local_facets(&self) -> Vec<(Vec<f64>, f64)> {
        let m = self.basis.len();
        let local: Vec<Vec<f64>> = self.vertices.iter().map(|v| self.to_local(v)).collect();
        match m {
            0 => Vec::new(),
            1 => {
                let ts: Vec<f64> = local.iter().map(|c| c[0]).collect();
                let lo = ts.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = ts.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                vec![(vec![1.0], hi), (vec![-1.0], -lo)]
            }
            2 => {
                let pts2: Vec<(f64, f64)> = local.iter().map(|c| (c[0], c[1])).collect();
                let hull = convex_hull_2d(&pts2, 1e-12);
                let mut facets = Vec::new();
                for i in 0..hull.len() {
                    let a = pts2[hull[i]];
                    let b = pts2[hull[(i + 1) % hull.len()]];
                    let e = (b.0 - a.0, b.1 - a.1);
                    let len = (e.0 * e.0 + e.1 * e.1).sqrt();
                    if len < 1e-14 {
                        continue;
                    }
                    // hull is CCW, so the outward normal is the clockwise perp
                    let n = (e.1 / len, -e.0 / len);
                    facets.push((vec![n.0, n.1], n.0 * a.0 + n.1 * a.1));
                }
                facets
            }
            _ => {
                let faces = convex_hull_3d(&self.vertices, 1e-12);
                let mut facets: Vec<(Vec<f64>, f64)> = Vec::new();
                for f in faces {
                    let a = self.vertices[f[0]];
                    let n = (self.vertices[f[1]] - a).cross(&(self.vertices[f[2]] - a));
                    if let Some(u) = n.unit() {
                        let nl: Vec<f64> = self.basis.iter().map(|b| b.dot(&u)).collect();
                        let b: f64 = nl
                            .iter()
                            .zip(self.to_local(&a))
                            .map(|(ni, ai)| ni * ai)
                            .sum();
                        if !facets
                            .iter()
                            .any(|(n2, b2)| dist_sq(n2, &nl) < 1e-18 && (b2 - b).abs() < 1e-9)
                        {
                            facets.push((nl, b));
                        }
                    }
                }
                facets
            }
        }
    }

    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        // distance to the affine hull
        let w = *p - self.origin;
        let mut res = w;
        for b in &self.basis {
            res = res - b.scale(b.dot(&w));
        }
        if res.norm() > tol {
            return false;
        }
        if self.basis.is_empty() {
            return true;
        }
        let c = self.to_local(p);
        self.local_facets()
            .iter()
            .all(|(n, b)| n.iter().zip(&c).map(|(ni, ci)| ni * ci).sum::<f64>() <= b + tol)
    }

    /// Largest `k`-dimensional ball contained in the polytope.
    ///
    /// Exact for `k == affine_dim` (Chebyshev LP over the facet
    /// inequalities) and for `k == 1` (half the diameter). For
    /// `1 < k < affine_dim` the slice plane is searched over facet normals
    /// and vertex-difference cross products, an underestimating heuristic.
    pub fn inscribed_ball(&self, k: usize) -> InscribedBall {
        let m = self.basis.len();
        if k == 0 || k > m {
            return InscribedBall {
                radius: 0.0,
                center: self.vertices[0],
                basis: Vec::new(),
            };
        }
        if k == m {
            return self.chebyshev();
        }
        if k == 1 {
            // longest contained segment has extreme endpoints
            let (mut bi, mut bj, mut best) = (0, 0, -1.0);
            for i in 0..self.vertices.len() {
                for j in i + 1..self.vertices.len() {
                    let d = self.vertices[i].dist(&self.vertices[j]);
                    if d > best {
                        best = d;
                        bi = i;
                        bj = j;
                    }
                }
            }
            let dir = (self.vertices[bj] - self.vertices[bi]).unit().unwrap();
            return InscribedBall {
                radius: best / 2.0,
                center: (self.vertices[bi] + self.vertices[bj]).scale(0.5),
                basis: vec![dir],
            };
        }
        // k == 2, m == 3
        self.best_slice_disk()
    }

    fn chebyshev(&self) -> InscribedBall {
        let m = self.basis.len();
        let facets = self.local_facets();
        if m == 1 {
            let hi = facets[0].1;
            let lo = -facets[1].1;
            return InscribedBall {
                radius: (hi - lo) / 2.0,
                center: self.from_local(&[(hi + lo) / 2.0]),
                basis: self.basis.clone(),
            };
        }
        let mut cons: Vec<(Vec<f64>, f64)> = Vec::new();
        for (n, b) in &facets {
            let mut row = n.clone();
            row.push(1.0);
            cons.push((row, *b));
        }
        let mut obj = vec![0.0; m + 1];
        obj[m] = 1.0;
        let sol = lp::maximize(&obj, &cons).expect("chebyshev lp solvable");
        InscribedBall {
            radius: sol.objective.max(0.0),
            center: self.from_local(&sol.x[..m]),
            basis: self.basis.clone(),
        }
    }

    /// Largest disk over candidate slice-plane normals (ambient dim 3).
    fn best_slice_disk(&self) -> InscribedBall {
        let facets = self.local_facets();
        let mut candidates: Vec<Point> = Vec::new();
        let push = |v: Point, cands: &mut Vec<Point>| {
            if let Some(u) = v.unit() {
                if !cands.iter().any(|c| c.dist(&u) < 1e-6 || c.dist(&-u) < 1e-6) {
                    cands.push(u);
                }
            }
        };
        for (n, _) in &facets {
            push(Point::xyz(n[0], n[1], n[2]), &mut candidates);
        }
        let nv = self.vertices.len();
        'outer: for i in 0..nv {
            for j in i + 1..nv {
                for l in j + 1..nv {
                    let u = self.vertices[j] - self.vertices[i];
                    let v = self.vertices[l] - self.vertices[i];
                    push(u.cross(&v), &mut candidates);
                    if candidates.len() >= 80 {
                        break 'outer;
                    }
                }
            }
        }
        let mut best = InscribedBall {
            radius: 0.0,
            center: self.origin,
            basis: Vec::new(),
        };
        for normal in &candidates {
            let mut cons: Vec<(Vec<f64>, f64)> = Vec::new();
            for (n, b) in &facets {
                let ndotm: f64 = n
                    .iter()
                    .zip(normal.coords())
                    .map(|(ni, mi)| ni * mi)
                    .sum();
                let w = (1.0 - ndotm * ndotm).max(0.0).sqrt();
                let mut row = n.clone();
                row.push(w);
                cons.push((row, *b));
            }
            let obj = vec![0.0, 0.0, 0.0, 1.0];
            if let Some(sol) = lp::maximize(&obj, &cons) {
                if sol.objective > best.radius {
                    best = InscribedBall {
                        radius: sol.objective,
                        center: self.from_local(&sol.x[..3]),
                        basis: linalg::orthonormal_complement(&[*normal], 3, 1e-12),
                    };
                }
            }
        }
        best
    }

    /// Minimal width of a planar polytope: the smallest distance between
    /// parallel supporting lines (edge-vertex antipodal pairs).
    pub fn minimal_width_2d(&self) -> f64 {
        assert_eq!(self.basis.len(), 2, "minimal width needs a planar polytope");
        let local: Vec<(f64, f64)> = self
            .vertices
            .iter()
            .map(|v| {
                let c = self.to_local(v);
                (c[0], c[1])
            })
            .collect();
        let hull = convex_hull_2d(&local, 1e-12);
        let mut width = f64::INFINITY;
        for i in 0..hull.len() {
            let a = local[hull[i]];
            let b = local[hull[(i + 1) % hull.len()]];
            let e = (b.0 - a.0, b.1 - a.1);
            let len = (e.0 * e.0 + e.1 * e.1).sqrt();
            if len < 1e-14 {
                continue;
            }
            let n = (e.1 / len, -e.0 / len);
            let mut far: f64 = 0.0;
            for &(x, y) in &local {
                far = far.max((n.0 * (a.0 - x) + n.1 * (a.1 - y)).abs());
            }
            width = width.min(far);
        }
        if width.is_finite() {
            width
        } else {
            0.0
        }
    }
}

fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}
