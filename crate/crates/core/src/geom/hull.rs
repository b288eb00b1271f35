//! Convex hulls: monotone chain in the plane, incremental hull in ℝ³.

use super::Point;

/// Extreme points of a planar point set in counterclockwise order.
/// Collinear boundary points are dropped. Input points are (x, y) pairs.
pub fn convex_hull_2d(points: &[(f64, f64)], tol: f64) -> Vec<usize> {
    let n = points.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| {
        points[a]
            .0
            .total_cmp(&points[b].0)
            .then(points[a].1.total_cmp(&points[b].1))
    });
    idx.dedup_by(|&mut a, &mut b| {
        (points[a].0 - points[b].0).abs() < tol && (points[a].1 - points[b].1).abs() < tol
    });
    if idx.len() <= 2 {
        return idx;
    }
    let cross = |o: usize, a: usize, b: usize| -> f64 {
        (points[a].0 - points[o].0) * (points[b].1 - points[o].1)
            - (points[a].1 - points[o].1) * (points[b].0 - points[o].0)
    };
    let mut lower: Vec<usize> = Vec::new();
    for &p in &idx {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= tol {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &p in idx.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= tol {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Triangular facets (outward-oriented index triples) of the hull of a
/// full-dimensional point set in ℝ³. The caller is responsible for the
/// set actually spanning three dimensions.
pub fn convex_hull_3d(points: &[Point], tol: f64) -> Vec<[usize; 3]> {
    let n = points.len();
    assert!(n >= 4, "3d hull needs at least 4 points");

    // seed tetrahedron: farthest pair, then farthest from line, then plane
    let (mut i0, mut i1, mut best) = (0, 1, -1.0);
    for a in 0..n {
        for b in a + 1..n {
            let d = points[a].dist(&points[b]);
            if d > best {
                best = d;
                i0 = a;
                i1 = b;
            }
        }
    }
    let dir = (points[i1] - points[i0]).unit().expect("degenerate seed");
    let (mut i2, mut best) = (0, -1.0);
    for a in 0..n {
        let w = points[a] - points[i0];
        let d = (w - dir.scale(dir.dot(&w))).norm();
        if d > best {
            best = d;
            i2 = a;
        }
    }
    let nrm = (points[i1] - points[i0])
        .cross(&(points[i2] - points[i0]))
        .unit()
        .expect("collinear seed");
    let (mut i3, mut best) = (0, -1.0);
    for a in 0..n {
        let d = nrm.dot(&(points[a] - points[i0])).abs();
        if d > best {
            best = d;
            i3 = a;
        }
    }
    assert!(best > tol, "point set is not full-dimensional");

    let mut faces: Vec<[usize; 3]> = vec![
        [i0, i1, i2],
        [i0, i2, i3],
        [i0, i3, i1],
        [i1, i3, i2],
    ];
    let centroid = (points[i0] + points[i1] + points[i2] + points[i3]).scale(0.25);
    for f in faces.iter_mut() {
        orient_outward(points, f, &centroid);
    }

    for p in 0..n {
        if p == i0 || p == i1 || p == i2 || p == i3 {
            continue;
        }
        let visible: Vec<usize> = (0..faces.len())
            .filter(|&fi| signed_dist(points, &faces[fi], &points[p]) > tol)
            .collect();
        if visible.is_empty() {
            continue;
        }
        // horizon: edges used exactly once among the visible faces
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for &fi in &visible {
            let f = faces[fi];
            for e in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                if let Some(pos) = edges.iter().position(|&(a, b)| a == e.1 && b == e.0) {
                    edges.remove(pos);
                } else {
                    edges.push(e);
                }
            }
        }
        let mut vis_sorted = visible.clone();
        vis_sorted.sort_unstable_by(|a, b| b.cmp(a));
        for fi in vis_sorted {
            faces.swap_remove(fi);
        }
        for (a, b) in edges {
            faces.push([a, b, p]);
        }
    }
    faces
}

fn signed_dist(points: &[Point], f: &[usize; 3], p: &Point) -> f64 {
    let nrm = (points[f[1]] - points[f[0]]).cross(&(points[f[2]] - points[f[0]]));
    match nrm.unit() {
        Some(u) => u.dot(&(*p - points[f[0]])),
        None => 0.0,
    }
}

fn orient_outward(points: &[Point], f: &mut [usize; 3], interior: &Point) {
    if signed_dist(points, f, interior) > 0.0 {
        f.swap(1, 2);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_hull_2d() {
        let pts = vec![
            (0.0, 0.0),
            (1.0, 0.0),
            (1.0, 1.0),
            (0.0, 1.0),
            (0.5, 0.5),
            (0.5, 0.0),
        ];
        let hull = convex_hull_2d(&pts, 1e-12);
        assert_eq!(hull.len(), 4);
        assert!(!hull.contains(&4));
        assert!(!hull.contains(&5));
    }

    #[test]
    fn octahedron_hull_3d() {
        let mut pts = Vec::new();
        for i in 0..3 {
            pts.push(Point::basis(3, i));
            pts.push(-Point::basis(3, i));
        }
        pts.push(Point::xyz(0.1, 0.1, 0.1)); // interior
        let faces = convex_hull_3d(&pts, 1e-12);
        assert_eq!(faces.len(), 8);
        // all points weakly inside every face
        for f in &faces {
            for p in &pts {
                assert!(signed_dist(&pts, f, p) < 1e-9);
            }
        }
        // Euler: V - E + F = 2 with E = 3F/2
        let mut verts: Vec<usize> = faces.iter().flatten().copied().collect();
        verts.sort_unstable();
        verts.dedup();
        assert_eq!(verts.len(), 6);
        assert_eq!(verts.len() as i64 - (faces.len() as i64 * 3 / 2) + faces.len() as i64, 2);
    }

    #[test]
    fn random_sphere_points_inside_hull() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut pts = Vec::new();
        for _ in 0..60 {
            let v = Point::xyz(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            if let Some(u) = v.unit() {
                pts.push(u);
            }
        }
        let faces = convex_hull_3d(&pts, 1e-12);
        for f in &faces {
            for p in &pts {
                assert!(signed_dist(&pts, f, p) < 1e-9);
            }
        }
    }
}
