//! Certificates on the sampled distance function d_A = dist(., A):
//! semiconvexity on balls and the Clarke subgradient identity
//! `∂d_A(x) = Nor(A, x) ∩ B(0,1)` for points of the set.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{Point, SphereNet};

use super::probe::NormalProbe;
use super::sample::{ProjectionIndex, SampledSet};

#[derive(Debug, Clone, Serialize)]
pub struct SemiconvexityReport {
    pub pass: bool,
    /// Most negative midpoint-convexity residual of d_A + (3/(2r))|x|^2.
    pub worst: f64,
    pub constant: f64,
    pub grid_nodes: usize,
}

/// Midpoint-convexity certificate for `x -> d(x) + (3/(2r)) |x|^2` on a
/// Cartesian grid over `B(a, r/2)`, along all grid-aligned triples.
/// `dist` evaluates the distance function (analytic or sample-backed).
pub fn distance_semiconvexity_check(
    dist: impl Fn(&Point) -> f64 + Sync,
    dim: usize,
    a: &Point,
    r: f64,
    grid_n: usize,
    tol: f64,
) -> Result<SemiconvexityReport> {
    if r <= 0.0 || grid_n < 3 {
        return Err(Error::invalid("need r > 0 and grid_n >= 3"));
    }
    let d = dim;
    let half = r / 2.0;
    let step = 2.0 * half / (grid_n - 1) as f64;
    // semiconvexity constant 3/r: certify convexity of d + (3/(2r))|x|^2
    let c = 3.0 / r;

    // grid nodes inside the ball, with g = d_A + c/2 |x|^2 ... note the
    // semiconvexity constant is 3/r, so the quadratic weight is 3/(2r).
    let mut nodes: Vec<(Vec<i64>, Point)> = Vec::new();
    let steps: Vec<i64> = (0..grid_n as i64).collect();
    match d {
        1 => {
            for &i in &steps {
                let p = Point::x1(a.coord(0) - half + i as f64 * step);
                if p.dist(a) <= half + 1e-12 {
                    nodes.push((vec![i], p));
                }
            }
        }
        2 => {
            for &i in &steps {
                for &j in &steps {
                    let p = Point::xy(
                        a.coord(0) - half + i as f64 * step,
                        a.coord(1) - half + j as f64 * step,
                    );
                    if p.dist(a) <= half + 1e-12 {
                        nodes.push((vec![i, j], p));
                    }
                }
            }
        }
        _ => {
            for &i in &steps {
                for &j in &steps {
                    for &l in &steps {
                        let p = Point::xyz(
                            a.coord(0) - half + i as f64 * step,
                            a.coord(1) - half + j as f64 * step,
                            a.coord(2) - half + l as f64 * step,
                        );
                        if p.dist(a) <= half + 1e-12 {
                            nodes.push((vec![i, j, l], p));
                        }
                    }
                }
            }
        }
    }
    let values: Vec<f64> = nodes
        .par_iter()
        .map(|(_, p)| dist(p) + c / 2.0 * p.norm_sq())
        .collect();
    // index lookup by grid coordinates
    use std::collections::HashMap;
    let lut: HashMap<Vec<i64>, usize> = nodes
        .iter()
        .enumerate()
        .map(|(i, (key, _))| (key.clone(), i))
        .collect();
    let mut dirs: Vec<Vec<i64>> = Vec::new();
    match d {
        1 => dirs.push(vec![1]),
        2 => dirs.extend([vec![1, 0], vec![0, 1], vec![1, 1], vec![1, -1]]),
        _ => {
            for dx in -1i64..=1 {
                for dy in -1i64..=1 {
                    for dz in -1i64..=1 {
                        let v = vec![dx, dy, dz];
                        if v.iter().any(|&x| x != 0) && !dirs.contains(&v)
                            && !dirs.iter().any(|w| w.iter().zip(&v).all(|(a, b)| *a == -b))
                        {
                            dirs.push(v);
                        }
                    }
                }
            }
        }
    }
    let mut worst: f64 = f64::INFINITY;
    for (key, _) in &nodes {
        let mid = lut[key];
        for dir in &dirs {
            let plus: Vec<i64> = key.iter().zip(dir).map(|(k, d)| k + d).collect();
            let minus: Vec<i64> = key.iter().zip(dir).map(|(k, d)| k - d).collect();
            if let (Some(&ip), Some(&im)) = (lut.get(&plus), lut.get(&minus)) {
                let residual = values[ip] + values[im] - 2.0 * values[mid];
                worst = worst.min(residual);
            }
        }
    }
    if !worst.is_finite() {
        worst = 0.0;
    }
    Ok(SemiconvexityReport {
        pass: worst >= -tol,
        worst,
        constant: 3.0 / r,
        grid_nodes: nodes.len(),
    })
}

/// Sample-backed semiconvexity check. Distance to a finite sample has
/// concave kinks along the bisectors between neighboring sample points
/// that the underlying set's distance function does not have; the
/// tolerance is widened by `grid_step * fill / clearance`, the worst
/// gradient swing such a kink can produce at the grid's clearance from
/// the sample.
pub fn distance_semiconvexity_check_sampled(
    set: &SampledSet,
    a: &Point,
    r: f64,
    grid_n: usize,
    tol: f64,
) -> Result<SemiconvexityReport> {
    let idx = ProjectionIndex::new(set);
    let fill = median_nn_distance(set);
    let step = r / (grid_n - 1) as f64;
    // clearance: smallest distance from an off-sample grid node to the set
    let mut clearance = f64::INFINITY;
    let half = r / 2.0;
    let probe_n = grid_n.min(21);
    for i in 0..probe_n {
        for j in 0..probe_n {
            let p = match set.dim() {
                1 => Point::x1(a.coord(0) - half + i as f64 * (2.0 * half / (probe_n - 1) as f64)),
                2 => Point::xy(
                    a.coord(0) - half + i as f64 * (2.0 * half / (probe_n - 1) as f64),
                    a.coord(1) - half + j as f64 * (2.0 * half / (probe_n - 1) as f64),
                ),
                _ => Point::xyz(
                    a.coord(0) - half + i as f64 * (2.0 * half / (probe_n - 1) as f64),
                    a.coord(1) - half + j as f64 * (2.0 * half / (probe_n - 1) as f64),
                    a.coord(2),
                ),
            };
            let d = idx.nearest_distance(&p);
            if d > fill {
                clearance = clearance.min(d);
            }
            if set.dim() == 1 {
                break;
            }
        }
    }
    if !clearance.is_finite() {
        clearance = fill.max(1e-9);
    }
    let slack = if fill > 0.0 {
        step * fill / clearance.max(fill)
    } else {
        0.0
    };
    let mut rep = distance_semiconvexity_check(
        |z| idx.nearest_distance(z),
        set.dim(),
        a,
        r,
        grid_n,
        tol + slack,
    )?;
    rep.constant = 3.0 / r;
    Ok(rep)
}

fn median_nn_distance(set: &SampledSet) -> f64 {
    let mut nn: Vec<f64> = set
        .points()
        .iter()
        .enumerate()
        .take(512)
        .map(|(i, p)| {
            set.points()
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, q)| q.dist(p))
                .fold(f64::INFINITY, f64::min)
        })
        .filter(|d| d.is_finite())
        .collect();
    nn.sort_by(f64::total_cmp);
    if nn.is_empty() {
        0.0
    } else {
        nn[nn.len() / 2]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClarkeReport {
    pub pass: bool,
    /// Worst absolute gap between the finite-difference directional
    /// derivative and the support function of the probed subgradient.
    pub worst_gap: f64,
    /// Extra tolerance granted for the sampling fill radius (zero when the
    /// distance evaluator is analytic).
    pub fill_slack: f64,
}

/// Compare one-sided finite-difference directional derivatives of the
/// distance function at `x` against the support function of
/// `conv({0} ∪ normals)`, the probed subgradient section.
pub fn clarke_subgradient_check(
    dist: impl Fn(&Point) -> f64,
    x: &Point,
    normals: &[Point],
    dirs: &SphereNet,
    fd_step: f64,
    tol: f64,
) -> Result<ClarkeReport> {
    if fd_step <= 0.0 {
        return Err(Error::invalid("finite-difference step must be positive"));
    }
    let base = dist(x);
    let mut worst: f64 = 0.0;
    for v in &dirs.directions {
        let fd = (dist(&(*x + v.scale(fd_step))) - base) / fd_step;
        let support = normals.iter().map(|n| n.dot(v)).fold(0.0_f64, f64::max);
        worst = worst.max((fd - support).abs());
    }
    Ok(ClarkeReport {
        pass: worst <= tol,
        worst_gap: worst,
        fill_slack: 0.0,
    })
}

/// Sample-backed variant: evaluates the distance against the sample itself
/// and widens the tolerance by `fill / fd_step`, the error floor a finite
/// sample imposes on distance values between its points.
pub fn clarke_subgradient_check_sampled(
    set: &SampledSet,
    x_index: usize,
    probe: &NormalProbe,
    dirs: &SphereNet,
    fd_step: f64,
    tol: f64,
) -> Result<ClarkeReport> {
    if fd_step <= 0.0 {
        return Err(Error::invalid("finite-difference step must be positive"));
    }
    let idx = ProjectionIndex::new(set);
    let x = set.point(x_index);
    let fill_slack = median_nn_distance(set) / fd_step;
    let rep = clarke_subgradient_check(
        |z| idx.nearest_distance(z),
        &x,
        &probe.normals,
        dirs,
        fd_step,
        tol + fill_slack,
    )?;
    Ok(ClarkeReport {
        fill_slack,
        ..rep
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reach::probe::normal_probe;

    fn circle(n: usize) -> SampledSet {
        let pts: Vec<Point> = (0..n)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                Point::xy(t.cos(), t.sin())
            })
            .collect();
        SampledSet::new(2, pts, "circle").unwrap()
    }

    #[test]
    fn circle_distance_is_semiconvex_at_level() {
        // analytic distance to the circle: exact at tolerance 1e-8
        let rep = distance_semiconvexity_check(
            |z| (z.norm() - 1.0).abs(),
            2,
            &Point::xy(1.0, 0.0),
            0.9,
            41,
            1e-8,
        )
        .unwrap();
        assert!(rep.pass, "worst residual {}", rep.worst);
        assert!((rep.constant - 3.0 / 0.9).abs() < 1e-12);

        // sample-backed variant at the sampling-aware tolerance
        let s = circle(2000);
        let rep = distance_semiconvexity_check_sampled(&s, &Point::xy(1.0, 0.0), 0.9, 41, 1e-8)
            .unwrap();
        assert!(rep.pass, "worst sampled residual {}", rep.worst);
    }

    #[test]
    fn two_point_set_distance_is_semiconvex_near_a_point() {
        // d_A is exactly the distance to {0, e1}; no sampling error
        let rep = distance_semiconvexity_check(
            |z| z.norm().min(z.dist(&Point::xy(1.0, 0.0))),
            2,
            &Point::xy(0.0, 0.0),
            0.4,
            41,
            1e-8,
        )
        .unwrap();
        assert!(rep.pass, "worst residual {}", rep.worst);
    }

    #[test]
    fn convex_set_distance_passes_outright() {
        // distance to a halfplane {y <= 0} is convex; any level works
        let rep = distance_semiconvexity_check(
            |z| z.coord(1).max(0.0),
            2,
            &Point::xy(0.0, 0.0),
            2.0,
            31,
            1e-9,
        )
        .unwrap();
        assert!(rep.pass, "worst residual {}", rep.worst);
    }

    #[test]
    fn clarke_identity_on_circle_against_analytic_distance() {
        let s = circle(4000);
        let probe_net = SphereNet::build(2, 0.25).unwrap();
        let probe = normal_probe(&s, 0, 0.4, &probe_net, 1e-9).unwrap();
        assert_eq!(probe.normals.len(), 2);
        let dir_net = SphereNet::build(2, 0.04).unwrap();
        let rep = clarke_subgradient_check(
            |z| (z.norm() - 1.0).abs(),
            &Point::xy(1.0, 0.0),
            &probe.normals,
            &dir_net,
            1e-4,
            1e-3,
        )
        .unwrap();
        assert!(rep.pass, "worst gap {}", rep.worst_gap);
    }

    #[test]
    fn clarke_identity_at_isolated_point() {
        // d_A = |x|: derivative 1 in all directions, subgradient the unit ball
        let s = SampledSet::new(2, vec![Point::xy(0.0, 0.0)], "origin").unwrap();
        let probe_net = SphereNet::build(2, 0.04).unwrap();
        let probe = normal_probe(&s, 0, 0.3, &probe_net, 1e-9).unwrap();
        assert_eq!(probe.normals.len(), probe_net.len());
        let dir_net = SphereNet::build(2, 0.04).unwrap();
        let rep =
            clarke_subgradient_check_sampled(&s, 0, &probe, &dir_net, 1e-4, 1.5e-3).unwrap();
        assert!(rep.pass, "worst gap {}", rep.worst_gap);
    }

    #[test]
    fn clarke_identity_at_interior_point() {
        // full-dimensional sample: zero subgradient, derivatives at the
        // sampling floor
        let mut pts = Vec::new();
        let n = 81;
        for i in 0..n {
            for j in 0..n {
                pts.push(Point::xy(
                    -1.0 + 2.0 * i as f64 / (n - 1) as f64,
                    -1.0 + 2.0 * j as f64 / (n - 1) as f64,
                ));
            }
        }
        let s = SampledSet::new(2, pts, "filled square").unwrap();
        let center = s.points().iter().position(|p| p.norm() < 1e-12).unwrap();
        let probe_net = SphereNet::build(2, 0.25).unwrap();
        let probe = normal_probe(&s, center, 0.3, &probe_net, 1e-9).unwrap();
        assert!(probe.normals.is_empty());
        let dir_net = SphereNet::build(2, 0.25).unwrap();
        let rep =
            clarke_subgradient_check_sampled(&s, center, &probe, &dir_net, 0.2, 1e-3).unwrap();
        assert!(rep.pass, "worst gap {} slack {}", rep.worst_gap, rep.fill_slack);
    }
}
