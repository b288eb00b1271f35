//! Singular cells of a planar PWL convex function: cells of the maximizer
//! arrangement whose subdifferential contains a k-dimensional ball of
//! radius epsilon, membership tests via directional derivatives, and the
//! inclusion of the derivative-gap set into the ball set.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{Point, SphereNet};

use super::arrangement::arrangement;
use super::pwl::PwlConvex;

#[derive(Debug, Clone, Serialize)]
pub enum CellGeometry {
    Vertex(Point),
    Segment(Point, Point),
}

#[derive(Debug, Clone, Serialize)]
pub struct SingularCell {
    pub geometry: CellGeometry,
    /// Active piece indices on the relative interior.
    pub active: Vec<usize>,
    /// Vertices of the subdifferential polytope there.
    pub subdifferential: Vec<Point>,
    /// Inscribed k-ball radius of the subdifferential.
    pub radius: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SingularCellReport {
    pub k: usize,
    pub epsilon: f64,
    pub cells: Vec<SingularCell>,
    /// Number of covering surfaces: qualifying edges plus qualifying
    /// vertices not already on a qualifying edge.
    pub covering_count: usize,
}

/// Cells whose subdifferential contains an open k-dimensional ball of
/// radius `eps` (k in {1, 2}, planar functions only). Vertices lying on
/// the closure of a qualifying edge are subsumed by it.
pub fn sigma_cells(f: &PwlConvex, k: usize, eps: f64) -> Result<SingularCellReport> {
    if f.dim() != 2 {
        return Err(Error::invalid("singular cells require dim 2"));
    }
    if !(1..=2).contains(&k) {
        return Err(Error::invalid("k must be 1 or 2"));
    }
    if eps <= 0.0 {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let arr = arrangement(f)?;
    let mut qual_edges: Vec<SingularCell> = Vec::new();
    for e in &arr.edges {
        let mid = (e.endpoints.0 + e.endpoints.1).scale(0.5);
        let sub = f.subdifferential(&mid, None);
        let radius = sub.inscribed_ball(k).radius;
        if radius >= eps {
            qual_edges.push(SingularCell {
                geometry: CellGeometry::Segment(e.endpoints.0, e.endpoints.1),
                active: e.active.clone(),
                subdifferential: sub.vertices().to_vec(),
                radius,
            });
        }
    }
    let mut qual_vertices: Vec<SingularCell> = Vec::new();
    for v in &arr.vertices {
        let sub = f.subdifferential(&v.point, None);
        let radius = sub.inscribed_ball(k).radius;
        if radius >= eps {
            let on_edge = qual_edges.iter().any(|c| match &c.geometry {
                CellGeometry::Segment(p, q) => on_segment(&v.point, p, q, 1e-9),
                CellGeometry::Vertex(_) => false,
            });
            if !on_edge {
                qual_vertices.push(SingularCell {
                    geometry: CellGeometry::Vertex(v.point),
                    active: v.active.clone(),
                    subdifferential: sub.vertices().to_vec(),
                    radius,
                });
            }
        }
    }
    let covering_count = qual_edges.len() + qual_vertices.len();
    let mut cells = qual_vertices;
    cells.extend(qual_edges);
    cells.sort_by(|a, b| geometry_key(&a.geometry).lex_cmp(&geometry_key(&b.geometry)));
    Ok(SingularCellReport {
        k,
        epsilon: eps,
        cells,
        covering_count,
    })
}

fn geometry_key(g: &CellGeometry) -> Point {
    match g {
        CellGeometry::Vertex(p) => *p,
        CellGeometry::Segment(p, _) => *p,
    }
}

fn on_segment(x: &Point, p: &Point, q: &Point, tol: f64) -> bool {
    let d = *q - *p;
    let len = d.norm();
    if len < tol {
        return x.dist(p) <= tol;
    }
    let t = (*x - *p).dot(&d) / (len * len);
    if !(-tol..=1.0 + tol).contains(&t) {
        return false;
    }
    (*x - (*p + d.scale(t.clamp(0.0, 1.0)))).norm() <= tol
}

/// Membership in the derivative-gap set: is there a k-dimensional subspace
/// along whose unit vectors `f'(x, v) + f'(x, -v) > eps`? For k = 1 the
/// candidate lines come from the direction net; for k = 2 the whole plane
/// is the only candidate.
pub fn z_membership(
    f: &PwlConvex,
    x: &Point,
    k: usize,
    eps: f64,
    dir_net: &SphereNet,
) -> Result<bool> {
    if f.dim() != 2 || !(1..=2).contains(&k) {
        return Err(Error::invalid("membership test requires dim 2, k in {1,2}"));
    }
    let gap = |v: &Point| f.directional_derivative(x, v) + f.directional_derivative(x, &-*v);
    match k {
        1 => Ok(dir_net.directions.iter().any(|v| gap(v) > eps)),
        _ => Ok(dir_net.directions.iter().all(|v| gap(v) > eps)),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InclusionReport {
    pub holds: bool,
    pub checked: usize,
    pub z_members: usize,
    pub worst_margin: f64,
}

/// Grid check of the inclusion `Z^k_eps ⊂ Σ^k_{eps/(k+1)}`: every grid
/// point in the derivative-gap set has a subdifferential containing a
/// k-ball of radius `eps/(k+1)`.
pub fn zwit_inclusion_check(
    f: &PwlConvex,
    k: usize,
    eps: f64,
    grid_n: usize,
    dir_net: &SphereNet,
) -> Result<InclusionReport> {
    if grid_n < 2 {
        return Err(Error::invalid("grid_n must be at least 2"));
    }
    let (lo, hi) = f.domain();
    let mut checked = 0;
    let mut z_members = 0;
    let mut worst = f64::INFINITY;
    let target = eps / (k as f64 + 1.0);
    for i in 0..grid_n {
        for j in 0..grid_n {
            let x = Point::xy(
                lo.coord(0) + (hi.coord(0) - lo.coord(0)) * i as f64 / (grid_n - 1) as f64,
                lo.coord(1) + (hi.coord(1) - lo.coord(1)) * j as f64 / (grid_n - 1) as f64,
            );
            checked += 1;
            if z_membership(f, &x, k, eps, dir_net)? {
                z_members += 1;
                let radius = f.subdifferential(&x, None).inscribed_ball(k).radius;
                worst = worst.min(radius - target);
            }
        }
    }
    let worst_margin = if worst.is_finite() { worst } else { 0.0 };
    Ok(InclusionReport {
        holds: worst_margin >= -1e-9,
        checked,
        z_members,
        worst_margin,
    })
}

/// Arrangement vertices whose subdifferential contains a full-dimensional
/// ball of radius `r` (a finite set by construction).
pub fn full_dim_singular_vertices(f: &PwlConvex, r: f64) -> Result<Vec<Point>> {
    let rep = sigma_cells(f, 2, r)?;
    Ok(rep
        .cells
        .iter()
        .filter_map(|c| match c.geometry {
            CellGeometry::Vertex(p) => Some(p),
            CellGeometry::Segment(..) => None,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linf_sigma_two_at_070_is_the_origin() {
        let f = PwlConvex::linf_2d(1.0);
        let rep = sigma_cells(&f, 2, 0.70).unwrap();
        assert_eq!(rep.cells.len(), 1);
        match rep.cells[0].geometry {
            CellGeometry::Vertex(p) => assert!(p.norm() < 1e-9),
            _ => panic!("expected a vertex cell"),
        }
        assert!((rep.cells[0].radius - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
    }

    #[test]
    fn linf_sigma_one_at_070_is_the_four_diagonals() {
        let f = PwlConvex::linf_2d(1.0);
        let rep = sigma_cells(&f, 1, 0.70).unwrap();
        let segs: Vec<_> = rep
            .cells
            .iter()
            .filter(|c| matches!(c.geometry, CellGeometry::Segment(..)))
            .collect();
        assert_eq!(segs.len(), 4);
        // the origin qualifies for k = 1 but is subsumed by the edges
        assert_eq!(rep.cells.len(), 4);
        assert_eq!(rep.covering_count, 4);
        for c in segs {
            // conv{e_i, e_j} has half-length sqrt(2)/2
            assert!((c.radius - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
        }
    }

    #[test]
    fn affine_function_reports_nothing() {
        let f = PwlConvex::new(
            2,
            &[(Point::xy(0.3, 0.4), 0.0)],
            Point::xy(-1.0, -1.0),
            Point::xy(1.0, 1.0),
        )
        .unwrap();
        let rep = sigma_cells(&f, 1, 0.1).unwrap();
        assert!(rep.cells.is_empty());
        assert_eq!(rep.covering_count, 0);
    }

    #[test]
    fn abs_x1_membership_thresholds() {
        // f = |x1| on the plane: at 0, the derivative gap along e1 is 2
        let f = PwlConvex::new(
            2,
            &[(Point::xy(1.0, 0.0), 0.0), (Point::xy(-1.0, 0.0), 0.0)],
            Point::xy(-1.0, -1.0),
            Point::xy(1.0, 1.0),
        )
        .unwrap();
        let net = SphereNet::build(2, 0.02).unwrap();
        assert!(z_membership(&f, &Point::xy(0.0, 0.0), 1, 1.9, &net).unwrap());
        assert!(!z_membership(&f, &Point::xy(0.0, 0.0), 1, 2.1, &net).unwrap());
    }

    #[test]
    fn linf_full_plane_membership() {
        let f = PwlConvex::linf_2d(1.0);
        let net = SphereNet::build(2, 0.02).unwrap();
        // min over unit v of the gap is sqrt(2) at the origin
        assert!(z_membership(&f, &Point::xy(0.0, 0.0), 2, 1.3, &net).unwrap());
        assert!(!z_membership(&f, &Point::xy(0.0, 0.0), 2, 1.5, &net).unwrap());
    }

    #[test]
    fn zwit_inclusion_on_linf_and_abs() {
        let net = SphereNet::build(2, 0.02).unwrap();
        let f = PwlConvex::linf_2d(1.0);
        let rep = zwit_inclusion_check(&f, 1, 1.0, 101, &net).unwrap();
        assert!(rep.holds, "margin {}", rep.worst_margin);
        assert!(rep.z_members > 0);

        let g = PwlConvex::new(
            2,
            &[(Point::xy(1.0, 0.0), 0.0), (Point::xy(-1.0, 0.0), 0.0)],
            Point::xy(-1.0, -1.0),
            Point::xy(1.0, 1.0),
        )
        .unwrap();
        // members on the x2-axis: subdifferential [-1,1] x {0}, half-length
        // 1 >= 1.5/2 = 0.75
        let rep = zwit_inclusion_check(&g, 1, 1.5, 101, &net).unwrap();
        assert!(rep.holds, "margin {}", rep.worst_margin);
        assert!(rep.z_members > 0);
    }

    #[test]
    fn full_dim_vertices_of_linf() {
        let f = PwlConvex::linf_2d(1.0);
        let vs = full_dim_singular_vertices(&f, 0.5).unwrap();
        assert_eq!(vs.len(), 1);
        assert!(vs[0].norm() < 1e-9);
        let none = full_dim_singular_vertices(&f, 0.8).unwrap();
        assert!(none.is_empty());
    }
}
