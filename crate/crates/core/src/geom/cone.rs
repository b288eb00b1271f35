//! Finitely generated convex cones in ℝ^d, d <= 3.
//!
//! A cone is stored as its canonical decomposition `L ⊕ C`: an orthonormal
//! basis of the lineality space `L` and the unit extreme rays of the pointed
//! part `C` inside `L⊥`. Both the polar and the point-to-cone distance
//! dispatch on that decomposition, so tangent cones (generator-natural) and
//! normal cones (inequality-natural) share one representation.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::linalg;
use super::Point;
use crate::error::{Error, Result};

const ANGLE_TOL: f64 = 1e-9;

/// Coarse classification derived from the canonical decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeKind {
    /// {0}
    Trivial,
    Ray,
    Line,
    /// Pointed two-dimensional cone (aperture < π), possibly embedded in ℝ³.
    Wedge,
    /// Line ⊕ ray: half of a two-dimensional subspace.
    Halfplane,
    /// Two-dimensional subspace.
    Plane,
    /// Plane ⊕ ray (ℝ³ only).
    Halfspace,
    /// Line ⊕ planar wedge (ℝ³ only).
    WedgeLine,
    /// Pointed cone spanning ℝ³.
    Pointed3,
    FullSpace,
}

/// Closed convex cone generated by finitely many unit directions.
#[derive(Debug, Clone)]
pub struct PolyhedralCone {
    dim: usize,
    generators: Vec<Point>,
    full_space: bool,
    lineality: Vec<Point>,
    pointed: Vec<Point>,
}

/// Wire form used inside the JSON schemas ('dim' travels with the parent).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConeWire {
    pub generators: Vec<Vec<f64>>,
    pub full_space: bool,
}

impl PolyhedralCone {
    /// Cone generated by `gens` (not necessarily unit or irredundant).
    pub fn from_generators(dim: usize, gens: &[Point]) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        let mut units: Vec<Point> = Vec::new();
        for g in gens {
            if g.dim() != dim {
                return Err(Error::invalid("generator dimension mismatch"));
            }
            if let Some(u) = g.unit() {
                if !units.iter().any(|v| v.dist(&u) < 1e-12) {
                    units.push(u);
                }
            }
        }
        let mut cone = PolyhedralCone {
            dim,
            generators: units,
            full_space: false,
            lineality: Vec::new(),
            pointed: Vec::new(),
        };
        cone.analyze();
        Ok(cone)
    }

    pub fn trivial(dim: usize) -> Self {
        PolyhedralCone {
            dim,
            generators: Vec::new(),
            full_space: false,
            lineality: Vec::new(),
            pointed: Vec::new(),
        }
    }

    pub fn full(dim: usize) -> Self {
        let mut gens = Vec::new();
        for i in 0..dim {
            gens.push(Point::basis(dim, i));
            gens.push(-Point::basis(dim, i));
        }
        PolyhedralCone {
            dim,
            generators: gens,
            full_space: true,
            lineality: (0..dim).map(|i| Point::basis(dim, i)).collect(),
            pointed: Vec::new(),
        }
    }

    pub fn ray(dir: Point) -> Result<Self> {
        Self::from_generators(dir.dim(), &[dir])
    }

    pub fn line(dir: Point) -> Result<Self> {
        Self::from_generators(dir.dim(), &[dir, -dir])
    }

    /// Halfplane `{ a t + b m : a ∈ ℝ, b >= 0 }` for orthogonal `t ⊥ m`.
    pub fn halfplane(tangent: Point, inward: Point) -> Result<Self> {
        Self::from_generators(tangent.dim(), &[tangent, -tangent, inward])
    }

    pub fn wedge(g1: Point, g2: Point) -> Result<Self> {
        Self::from_generators(g1.dim(), &[g1, g2])
    }

    /// Smallest convex cone containing both operands.
    pub fn hull_with(&self, other: &PolyhedralCone) -> Result<Self> {
        if self.full_space || other.full_space {
            return Ok(Self::full(self.dim));
        }
        let mut gens = self.canonical_generators();
        gens.extend(other.canonical_generators());
        Self::from_generators(self.dim, &gens)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full_space(&self) -> bool {
        self.full_space
    }

    pub fn is_trivial(&self) -> bool {
        !self.full_space && self.lineality.is_empty() && self.pointed.is_empty()
    }

    /// Orthonormal basis of the lineality space.
    pub fn lineality(&self) -> &[Point] {
        &self.lineality
    }

    /// Unit extreme rays of the pointed part (inside the lineality complement).
    pub fn pointed_rays(&self) -> &[Point] {
        &self.pointed
    }

    pub fn kind(&self) -> ConeKind {
        if self.full_space || self.lineality.len() == self.dim {
            return ConeKind::FullSpace;
        }
        match (self.lineality.len(), self.pointed.len()) {
            (0, 0) => ConeKind::Trivial,
            (0, 1) => ConeKind::Ray,
            (0, _) => {
                if linalg::rank(&self.pointed, 1e-9) >= 3 {
                    ConeKind::Pointed3
                } else {
                    ConeKind::Wedge
                }
            }
            (1, 0) => ConeKind::Line,
            (1, 1) => ConeKind::Halfplane,
            (1, _) => ConeKind::WedgeLine,
            (2, 0) => ConeKind::Plane,
            (2, _) => ConeKind::Halfspace,
            _ => ConeKind::FullSpace,
        }
    }

    /// Canonical generator list: ± lineality basis, extreme rays, and for
    /// half-subspaces the inward direction that fills the half.
    pub fn canonical_generators(&self) -> Vec<Point> {
        if self.full_space {
            let mut v = Vec::new();
            for i in 0..self.dim {
                v.push(Point::basis(self.dim, i));
                v.push(-Point::basis(self.dim, i));
            }
            return v;
        }
        let mut gens = Vec::new();
        for b in &self.lineality {
            gens.push(*b);
            gens.push(-*b);
        }
        gens.extend(self.pointed.iter().copied());
        gens.sort_by(|a, b| a.lex_cmp(b));
        gens
    }

    /// Euclidean distance from `u` to the cone. Exact (up to roundoff) via
    /// projection on every face of the pointed part.
    pub fn distance(&self, u: &Point) -> f64 {
        if self.full_space {
            return 0.0;
        }
        // remove the lineality component
        let mut w = *u;
        for b in &self.lineality {
            w = w - b.scale(b.dot(&w));
        }
        match self.pointed.len() {
            0 => w.norm(),
            1 => {
                let t = w.dot(&self.pointed[0]).max(0.0);
                (w - self.pointed[0].scale(t)).norm()
            }
            2 => {
                let g1 = self.pointed[0];
                let g2 = self.pointed[1];
                let a11 = 1.0;
                let a12 = g1.dot(&g2);
                let b1 = g1.dot(&w);
                let b2 = g2.dot(&w);
                let det = a11 - a12 * a12;
                let mut best = w.norm();
                if det.abs() > 1e-14 {
                    let c1 = (b1 - a12 * b2) / det;
                    let c2 = (b2 - a12 * b1) / det;
                    if c1 >= -1e-12 && c2 >= -1e-12 {
                        best = best.min((w - g1.scale(c1) - g2.scale(c2)).norm());
                    }
                }
                let t1 = b1.max(0.0);
                best = best.min((w - g1.scale(t1)).norm());
                let t2 = b2.max(0.0);
                best = best.min((w - g2.scale(t2)).norm());
                best
            }
            _ => face_projection_distance(&self.pointed, &w, self.dim),
        }
    }

    /// Membership test at absolute tolerance.
    pub fn contains(&self, u: &Point, tol: f64) -> bool {
        self.distance(u) <= tol
    }

    /// Polar (dual) cone `{u : <u, v> <= 0 for all v in the cone}`.
    pub fn polar(&self) -> PolyhedralCone {
        if self.full_space {
            return PolyhedralCone::trivial(self.dim);
        }
        if self.lineality.is_empty() && self.pointed.is_empty() {
            return PolyhedralCone::full(self.dim);
        }
        // polar lives in the orthogonal complement of the lineality
        let comp = linalg::orthonormal_complement(&self.lineality, self.dim, 1e-12);
        if self.pointed.is_empty() {
            return Self::from_parts(self.dim, &comp, &[]);
        }
        match comp.len() {
            1 => {
                // pointed part is a single ray along comp[0]
                let v = self.pointed[0];
                Self::from_parts(self.dim, &[], &[-v])
            }
            2 => {
                let (lin, rays) = polar_in_plane(&self.pointed, &comp);
                Self::from_parts(self.dim, &lin, &rays)
            }
            3 => {
                let rank = linalg::rank(&self.pointed, 1e-9);
                match rank {
                    1 => {
                        let v = self.pointed[0];
                        let lin = linalg::orthonormal_complement(&[v], self.dim, 1e-12);
                        Self::from_parts(self.dim, &lin, &[-v])
                    }
                    2 => {
                        let plane = linalg::canonical_subspace_basis(&self.pointed, 3, 1e-12);
                        let normal = linalg::orthonormal_complement(&plane, 3, 1e-12);
                        let (lin, rays) = polar_in_plane(&self.pointed, &plane);
                        let mut lineality = normal;
                        lineality.extend(lin);
                        Self::from_parts(self.dim, &lineality, &rays)
                    }
                    _ => {
                        let rays = polar_pointed_3d(&self.pointed);
                        Self::from_parts(self.dim, &[], &rays)
                    }
                }
            }
            _ => unreachable!(),
        }
    }

    fn from_parts(dim: usize, lineality: &[Point], pointed: &[Point]) -> PolyhedralCone {
        let mut gens: Vec<Point> = Vec::new();
        for b in lineality {
            gens.push(*b);
            gens.push(-*b);
        }
        gens.extend(pointed.iter().copied());
        if lineality.len() == dim {
            return PolyhedralCone::full(dim);
        }
        PolyhedralCone::from_generators(dim, &gens).expect("valid parts")
    }

    /// Derive the canonical decomposition from the raw generators.
    fn analyze(&mut self) {
        if self.generators.is_empty() {
            return;
        }
        if self.dim == 2 {
            self.analyze_2d();
            return;
        }
        // membership-based lineality extraction (dim 1 and 3)
        let gens = self.generators.clone();
        let mut lin_dirs: Vec<Point> = Vec::new();
        for g in &gens {
            if face_projection_distance(&gens, &(-*g), self.dim) <= 1e-9 {
                lin_dirs.push(*g);
            }
        }
        let lineality = linalg::canonical_subspace_basis(&lin_dirs, self.dim, 1e-9);
        if lineality.len() == self.dim {
            *self = PolyhedralCone::full(self.dim);
            return;
        }
        // project the rest onto the complement and reduce to extreme rays
        let mut proj: Vec<Point> = Vec::new();
        for g in &gens {
            let mut w = *g;
            for b in &lineality {
                w = w - b.scale(b.dot(&w));
            }
            if let Some(u) = w.unit() {
                if !proj.iter().any(|v| v.dist(&u) < 1e-9) {
                    proj.push(u);
                }
            }
        }
        let pointed = extreme_rays(&proj, self.dim);
        self.lineality = lineality;
        self.pointed = pointed;
    }

    /// Planar cones classified by the circular-gap structure of the
    /// generator angles; exact and fast for many generators.
    fn analyze_2d(&mut self) {
        let mut angles: Vec<f64> = self.generators.iter().map(|g| g.angle()).collect();
        angles.sort_by(f64::total_cmp);
        angles.dedup_by(|a, b| (*a - *b).abs() < ANGLE_TOL);
        if angles.len() >= 2
            && (angles[angles.len() - 1] - angles[0] - 2.0 * PI).abs() < ANGLE_TOL
        {
            angles.pop();
        }
        let n = angles.len();
        if n == 0 {
            return;
        }
        // largest circular gap and the index where the occupied arc starts
        let mut max_gap = -1.0;
        let mut start = 0;
        for i in 0..n {
            let next = if i + 1 == n { angles[0] + 2.0 * PI } else { angles[i + 1] };
            let gap = next - angles[i];
            if gap > max_gap {
                max_gap = gap;
                start = (i + 1) % n;
            }
        }
        if n == 1 {
            self.pointed = vec![unit_at(angles[0])];
            return;
        }
        if max_gap < PI - ANGLE_TOL {
            *self = PolyhedralCone::full(2);
            return;
        }
        let a = angles[start];
        let b = angles[(start + n - 1) % n];
        let span = wrap_positive(b - a);
        if max_gap > PI + ANGLE_TOL {
            // occupied arc shorter than π: ray or wedge
            if span < ANGLE_TOL {
                self.pointed = vec![unit_at(a)];
            } else {
                self.lineality = Vec::new();
                self.pointed = sorted_rays(&[unit_at(a), unit_at(b)]);
            }
            return;
        }
        // gap == π: line or halfplane
        if n == 2 && (span - PI).abs() < ANGLE_TOL {
            self.lineality = linalg::canonical_subspace_basis(&[unit_at(a)], 2, 1e-12);
            self.pointed = Vec::new();
        } else {
            // occupied arc is the closed half [a, a+π]; middle fills it
            self.lineality = linalg::canonical_subspace_basis(&[unit_at(a)], 2, 1e-12);
            let mid = unit_at(a + PI / 2.0);
            // keep the pointed ray orthogonal to the lineality
            let base = self.lineality[0];
            let w = mid - base.scale(base.dot(&mid));
            self.pointed = vec![w.unit().unwrap()];
        }
    }

    pub fn to_wire(&self) -> ConeWire {
        ConeWire {
            generators: self
                .canonical_generators()
                .iter()
                .map(|g| g.coords().to_vec())
                .collect(),
            full_space: self.full_space,
        }
    }

    pub fn from_wire(dim: usize, wire: &ConeWire) -> Result<Self> {
        if wire.full_space {
            return Ok(Self::full(dim));
        }
        let gens: Result<Vec<Point>> = wire.generators.iter().map(|g| Point::new(g)).collect();
        Self::from_generators(dim, &gens?)
    }
}

/// Apply a rotation/reflection-style linear isometry given by its action on
/// points to the cone (generators transform as directions).
pub fn map_cone(cone: &PolyhedralCone, f: impl Fn(&Point) -> Point) -> PolyhedralCone {
    if cone.is_full_space() {
        return PolyhedralCone::full(cone.dim());
    }
    let gens: Vec<Point> = cone.canonical_generators().iter().map(|g| f(g)).collect();
    PolyhedralCone::from_generators(cone.dim(), &gens).expect("mapped cone")
}

fn unit_at(angle: f64) -> Point {
    Point::xy(angle.cos(), angle.sin())
}

fn wrap_positive(a: f64) -> f64 {
    let mut x = a % (2.0 * PI);
    if x < 0.0 {
        x += 2.0 * PI;
    }
    x
}

fn sorted_rays(rays: &[Point]) -> Vec<Point> {
    let mut v = rays.to_vec();
    v.sort_by(|a, b| a.lex_cmp(b));
    v
}

/// Distance from `u` to cone(gens) by least-squares projection onto every
/// face spanned by at most `dim` generators, keeping projections with
/// nonnegative coefficients.
fn face_projection_distance(gens: &[Point], u: &Point, dim: usize) -> f64 {
    let mut best = u.norm();
    let n = gens.len();
    let idx: Vec<usize> = (0..n).collect();
    for size in 1..=dim.min(n) {
        let mut sel = vec![0usize; size];
        subsets(&idx, size, &mut sel, 0, 0, &mut |s| {
            let sub: Vec<Point> = s.iter().map(|&i| gens[i]).collect();
            if let Some(coeffs) = linalg::lstsq_coeffs(&sub, u, 1e-12) {
                if coeffs.iter().all(|&c| c >= -1e-12) {
                    let mut p = Point::zero(u.dim());
                    for (c, g) in coeffs.iter().zip(&sub) {
                        p = p + g.scale(*c);
                    }
                    let d = (*u - p).norm();
                    if d < best {
                        best = d;
                    }
                }
            }
        });
    }
    best
}

fn subsets(idx: &[usize], size: usize, sel: &mut Vec<usize>, pos: usize, from: usize, f: &mut impl FnMut(&[usize])) {
    if pos == size {
        f(sel);
        return;
    }
    for i in from..idx.len() {
        sel[pos] = idx[i];
        subsets(idx, size, sel, pos + 1, i + 1, f);
    }
}

/// Polar of a pointed planar cone (1 or 2 extreme rays) inside the plane
/// spanned by the orthonormal `basis`; returns (lineality, pointed rays).
fn polar_in_plane(pointed: &[Point], basis: &[Point]) -> (Vec<Point>, Vec<Point>) {
    let in_plane_perp = |v: &Point| -> Point {
        // rotate v by +90 degrees within the plane
        let x = basis[0].dot(v);
        let y = basis[1].dot(v);
        basis[0].scale(-y) + basis[1].scale(x)
    };
    if pointed.len() == 1 {
        let v = pointed[0];
        (vec![in_plane_perp(&v).unit().unwrap()], vec![-v])
    } else {
        let w1 = pointed[0];
        let w2 = pointed[1];
        let mut r1 = in_plane_perp(&w1);
        if r1.dot(&w2) > 0.0 {
            r1 = -r1;
        }
        let mut r2 = in_plane_perp(&w2);
        if r2.dot(&w1) > 0.0 {
            r2 = -r2;
        }
        (Vec::new(), sorted_rays(&[r1.unit().unwrap(), r2.unit().unwrap()]))
    }
}

/// Extreme rays of the polar of a pointed full-rank cone in ℝ³: feasible
/// normalized cross products of generator pairs.
fn polar_pointed_3d(gens: &[Point]) -> Vec<Point> {
    let mut cands: Vec<Point> = Vec::new();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let c = gens[i].cross(&gens[j]);
            if let Some(u) = c.unit() {
                for cand in [u, -u] {
                    if gens.iter().all(|g| cand.dot(g) <= 1e-9)
                        && !cands.iter().any(|v| v.dist(&cand) < 1e-9)
                    {
                        cands.push(cand);
                    }
                }
            }
        }
    }
    let ext = extreme_rays(&cands, 3);
    sorted_rays(&ext)
}

/// Reduce unit rays of a pointed cone to the extreme ones: drop every ray
/// contained in the cone of the others.
fn extreme_rays(rays: &[Point], dim: usize) -> Vec<Point> {
    if rays.len() <= 1 {
        return sorted_rays(rays);
    }
    let mut keep: Vec<Point> = rays.to_vec();
    let mut i = 0;
    while i < keep.len() {
        let mut others = keep.clone();
        others.remove(i);
        if face_projection_distance(&others, &keep[i], dim) <= 1e-9 {
            keep.remove(i);
        } else {
            i += 1;
        }
    }
    sorted_rays(&keep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone2(gens: &[Point]) -> PolyhedralCone {
        PolyhedralCone::from_generators(2, gens).unwrap()
    }

    #[test]
    fn polar_of_trivial_is_full_plane() {
        let c = PolyhedralCone::trivial(2);
        let p = c.polar();
        assert!(p.is_full_space());
    }

    #[test]
    fn polar_of_ray_is_halfplane() {
        let c = cone2(&[Point::xy(1.0, 0.0)]);
        let p = c.polar();
        assert_eq!(p.kind(), ConeKind::Halfplane);
        let gens = p.canonical_generators();
        let expected = [
            Point::xy(-1.0, 0.0),
            Point::xy(0.0, 1.0),
            Point::xy(0.0, -1.0),
        ];
        assert_eq!(gens.len(), 3);
        for e in expected {
            assert!(gens.iter().any(|g| g.dist(&e) < 1e-12), "missing {:?}", e);
        }
    }

    #[test]
    fn polar_of_downward_wedge_matches_closed_form() {
        // C = {v : <v, e2> <= -sqrt(3)/2 |v|}, polar = {v : <v, e2> >= 1/2 |v|}
        let s3 = 3f64.sqrt() / 2.0;
        let c = cone2(&[Point::xy(-0.5, -s3), Point::xy(0.5, -s3)]);
        let p = c.polar();
        assert_eq!(p.kind(), ConeKind::Wedge);
        let rays = p.pointed_rays();
        let expected = [Point::xy(-s3, 0.5), Point::xy(s3, 0.5)];
        for e in expected {
            assert!(rays.iter().any(|g| g.dist(&e) < 1e-9), "missing {:?}", e);
        }
    }

    #[test]
    fn distance_examples() {
        let ray = cone2(&[Point::xy(1.0, 0.0)]);
        assert!(ray.distance(&Point::xy(1.0, 0.0)) < 1e-15);
        assert!((ray.distance(&Point::xy(0.0, 1.0)) - 1.0).abs() < 1e-15);
        let u = Point::xy(1.0, 1.0).scale(std::f64::consts::FRAC_1_SQRT_2);
        let d = ray.distance(&u);
        assert!((d - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn distance_matches_brute_force_on_ray() {
        // independent oracle: minimize |u - t e1| over a fine t-grid
        let ray = cone2(&[Point::xy(1.0, 0.0)]);
        let u = Point::xy(1.0, 1.0).scale(std::f64::consts::FRAC_1_SQRT_2);
        let mut brute = f64::INFINITY;
        for i in 0..200_001 {
            let t = i as f64 * 1e-5;
            brute = brute.min((u - Point::xy(t, 0.0)).norm());
        }
        assert!((ray.distance(&u) - brute).abs() < 1e-6);
    }

    #[test]
    fn halfplane_structure() {
        let hp = PolyhedralCone::halfplane(Point::xy(0.0, 1.0), Point::xy(-1.0, 0.0)).unwrap();
        assert_eq!(hp.kind(), ConeKind::Halfplane);
        assert!(hp.contains(&Point::xy(-3.0, 4.0), 1e-9));
        assert!(!hp.contains(&Point::xy(0.5, 0.0), 1e-3));
        // polar of {u1 <= 0} is the ray e1
        let p = hp.polar();
        assert_eq!(p.kind(), ConeKind::Ray);
        assert!(p.pointed_rays()[0].dist(&Point::xy(1.0, 0.0)) < 1e-12);
    }

    #[test]
    fn three_d_cases() {
        // octant cone: polar is the opposite octant
        let gens = [
            Point::xyz(1.0, 0.0, 0.0),
            Point::xyz(0.0, 1.0, 0.0),
            Point::xyz(0.0, 0.0, 1.0),
        ];
        let c = PolyhedralCone::from_generators(3, &gens).unwrap();
        assert_eq!(c.kind(), ConeKind::Pointed3);
        let p = c.polar();
        assert_eq!(p.kind(), ConeKind::Pointed3);
        for g in gens {
            assert!(p.pointed_rays().iter().any(|r| r.dist(&-g) < 1e-9));
        }
        // plane in 3d: polar is the normal line
        let plane = PolyhedralCone::from_generators(
            3,
            &[
                Point::xyz(1.0, 0.0, 0.0),
                Point::xyz(-1.0, 0.0, 0.0),
                Point::xyz(0.0, 1.0, 0.0),
                Point::xyz(0.0, -1.0, 0.0),
            ],
        )
        .unwrap();
        assert_eq!(plane.kind(), ConeKind::Plane);
        let polar = plane.polar();
        assert_eq!(polar.kind(), ConeKind::Line);
        assert!(polar.lineality()[0].dist(&Point::xyz(0.0, 0.0, 1.0)) < 1e-12);
    }

    #[test]
    fn double_polar_recovers_canonical_form() {
        let cases: Vec<PolyhedralCone> = vec![
            cone2(&[Point::xy(1.0, 0.0)]),
            cone2(&[Point::xy(1.0, 0.0), Point::xy(0.0, 1.0)]),
            cone2(&[Point::xy(1.0, 0.0), Point::xy(-1.0, 0.0)]),
            cone2(&[Point::xy(1.0, 0.0), Point::xy(-1.0, 0.0), Point::xy(0.0, 1.0)]),
            PolyhedralCone::trivial(2),
            PolyhedralCone::full(2),
            PolyhedralCone::from_generators(
                3,
                &[Point::xyz(1.0, 0.0, 0.0), Point::xyz(0.0, 1.0, 1.0)],
            )
            .unwrap(),
        ];
        for c in cases {
            let dd = c.polar().polar();
            let a = c.canonical_generators();
            let b = dd.canonical_generators();
            assert_eq!(a.len(), b.len(), "{:?} vs {:?}", a, b);
            for g in &a {
                assert!(
                    b.iter().any(|h| h.dist(g) < 1e-9),
                    "missing {:?} in {:?}",
                    g,
                    b
                );
            }
        }
    }
}
