//! Semiconcavity certificates on regular grids and the quadratic
//! inf-convolution extension of functions with approximate supergradients.
//!
//! A function u is semiconcave with constant c when `u - (c/2)|x|^2` is
//! concave; certificates test midpoint concavity over every collinear
//! grid triple with an exact midpoint.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::Point;

/// Uniformly spaced 1-d samples.
#[derive(Debug, Clone)]
pub struct Grid1d {
    pub x0: f64,
    pub step: f64,
    pub values: Vec<f64>,
}

impl Grid1d {
    pub fn from_fn(x0: f64, step: f64, n: usize, f: impl Fn(f64) -> f64) -> Self {
        Grid1d {
            x0,
            step,
            values: (0..n).map(|i| f(x0 + i as f64 * step)).collect(),
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.step
    }
}

/// Row-major uniformly spaced 2-d samples.
#[derive(Debug, Clone)]
pub struct Grid2d {
    pub origin: (f64, f64),
    pub step: (f64, f64),
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

impl Grid2d {
    pub fn from_fn(
        origin: (f64, f64),
        step: (f64, f64),
        nx: usize,
        ny: usize,
        f: impl Fn(f64, f64) -> f64,
    ) -> Self {
        let mut values = Vec::with_capacity(nx * ny);
        for i in 0..nx {
            for j in 0..ny {
                values.push(f(origin.0 + i as f64 * step.0, origin.1 + j as f64 * step.1));
            }
        }
        Grid2d {
            origin,
            step,
            nx,
            ny,
            values,
        }
    }

    pub fn xy(&self, i: usize, j: usize) -> (f64, f64) {
        (
            self.origin.0 + i as f64 * self.step.0,
            self.origin.1 + j as f64 * self.step.1,
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SemiconcavityCertificate {
    pub constant: f64,
    pub pass: bool,
    /// Largest midpoint-concavity violation of u - (c/2)|x|^2.
    pub worst: f64,
    /// Sample pair attaining it (outer points of the triple).
    pub witness: Option<(Vec<f64>, Vec<f64>)>,
}

/// Midpoint-concavity certificate on a 1-d grid.
pub fn semiconcave_check_1d(grid: &Grid1d, c: f64, tol: f64) -> SemiconcavityCertificate {
    let n = grid.values.len();
    let g = |i: usize| {
        let x = grid.x(i);
        grid.values[i] - 0.5 * c * x * x
    };
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    for i in 0..n {
        for j in (i + 2..n).step_by(2) {
            let m = (i + j) / 2;
            let violation = 0.5 * (g(i) + g(j)) - g(m);
            if violation > worst {
                worst = violation;
                witness = Some((vec![grid.x(i)], vec![grid.x(j)]));
            }
        }
    }
    if !worst.is_finite() {
        worst = 0.0;
        witness = None;
    }
    SemiconcavityCertificate {
        constant: c,
        pass: worst <= tol,
        worst,
        witness,
    }
}

/// Midpoint-concavity certificate on a 2-d grid (all index pairs with an
/// exact grid midpoint).
pub fn semiconcave_check_2d(grid: &Grid2d, c: f64, tol: f64) -> SemiconcavityCertificate {
    let g = |i: usize, j: usize| {
        let (x, y) = grid.xy(i, j);
        grid.values[i * grid.ny + j] - 0.5 * c * (x * x + y * y)
    };
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    let nodes: Vec<(usize, usize)> = (0..grid.nx)
        .flat_map(|i| (0..grid.ny).map(move |j| (i, j)))
        .collect();
    for (ai, (i1, j1)) in nodes.iter().enumerate() {
        for (i2, j2) in nodes.iter().skip(ai + 1) {
            if (i1 + i2) % 2 != 0 || (j1 + j2) % 2 != 0 {
                continue;
            }
            if i1 == i2 && j1 == j2 {
                continue;
            }
            let (mi, mj) = ((i1 + i2) / 2, (j1 + j2) / 2);
            let violation = 0.5 * (g(*i1, *j1) + g(*i2, *j2)) - g(mi, mj);
            if violation > worst {
                worst = violation;
                let a = grid.xy(*i1, *j1);
                let b = grid.xy(*i2, *j2);
                witness = Some((vec![a.0, a.1], vec![b.0, b.1]));
            }
        }
    }
    if !worst.is_finite() {
        worst = 0.0;
        witness = None;
    }
    SemiconcavityCertificate {
        constant: c,
        pass: worst <= tol,
        worst,
        witness,
    }
}

/// Smallest passing semiconcavity constant on a 1-d grid, found by
/// bisection over [0, hi]; `None` when even `hi` fails.
pub fn minimal_semiconcavity_constant_1d(grid: &Grid1d, hi: f64, tol: f64) -> Option<f64> {
    if !semiconcave_check_1d(grid, hi, tol).pass {
        return None;
    }
    let (mut lo, mut hi) = (0.0, hi);
    if semiconcave_check_1d(grid, lo, tol).pass {
        return Some(0.0);
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if semiconcave_check_1d(grid, mid, tol).pass {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// Quadratic inf-convolution extension of `(points, values)` with
/// approximate supergradients `slopes`:
/// `F(x) = min_p [ psi(p) + <h_p, x - p> + c |x - p|^2 ]`.
///
/// Requires the supergradient inequality
/// `psi(q) - psi(p) - <h_p, q - p> <= c |q - p|^2` on all pairs and
/// `|h_p| <= k_bound`; then `F` restricts to `psi` on the anchor set and
/// is semiconcave with constant `2c`.
#[derive(Debug, Clone)]
pub struct SemiconcaveExtension {
    points: Vec<Point>,
    values: Vec<f64>,
    slopes: Vec<Point>,
    c: f64,
}

impl SemiconcaveExtension {
    pub fn eval(&self, x: &Point) -> f64 {
        let mut best = f64::INFINITY;
        for ((p, v), h) in self.points.iter().zip(&self.values).zip(&self.slopes) {
            let d = *x - *p;
            best = best.min(v + h.dot(&d) + self.c * d.norm_sq());
        }
        best
    }

    pub fn constant(&self) -> f64 {
        self.c
    }
}

pub fn semiconcave_extend(
    points: &[Point],
    values: &[f64],
    slopes: &[Point],
    c: f64,
    k_bound: f64,
) -> Result<SemiconcaveExtension> {
    if points.is_empty() || points.len() != values.len() || points.len() != slopes.len() {
        return Err(Error::invalid("points, values and slopes must align"));
    }
    if c <= 0.0 {
        return Err(Error::invalid("quadratic constant must be positive"));
    }
    for (i, h) in slopes.iter().enumerate() {
        if h.norm() > k_bound + 1e-9 {
            return Err(Error::invalid(format!(
                "slope {i} exceeds the bound: |h| = {} > {k_bound}",
                h.norm()
            )));
        }
    }
    for (i, p) in points.iter().enumerate() {
        for (j, q) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = *q - *p;
            let lhs = values[j] - values[i] - slopes[i].dot(&d);
            if lhs > c * d.norm_sq() + 1e-9 {
                return Err(Error::certification(
                    "supergradient-inequality",
                    format!("pair ({i}, {j}): {lhs:.9} > {:.9}", c * d.norm_sq()),
                ));
            }
        }
    }
    let ext = SemiconcaveExtension {
        points: points.to_vec(),
        values: values.to_vec(),
        slopes: slopes.to_vec(),
        c,
    };
    // restriction property (exact by the inequality above)
    for (i, p) in points.iter().enumerate() {
        debug_assert!((ext.eval(p) - values[i]).abs() <= 1e-9);
    }
    Ok(ext)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist_sq_to(k: &[f64]) -> impl Fn(f64) -> f64 + '_ {
        move |x: f64| {
            k.iter()
                .map(|p| (x - p).abs())
                .fold(f64::INFINITY, f64::min)
                .powi(2)
        }
    }

    #[test]
    fn squared_distance_is_tightly_2_semiconcave() {
        let phi = dist_sq_to(&[0.0, 1.0]);
        let grid = Grid1d::from_fn(0.0, 0.01, 101, phi);
        let ok = semiconcave_check_1d(&grid, 2.0, 1e-9);
        assert!(ok.pass, "worst {}", ok.worst);
        let bad = semiconcave_check_1d(&grid, 1.9, 1e-9);
        assert!(!bad.pass);
        assert!(bad.witness.is_some());
        // already a pure square piece violates at 1.9
        let piece = Grid1d::from_fn(0.0, 0.01, 41, dist_sq_to(&[0.0, 1.0]));
        assert!(!semiconcave_check_1d(&piece, 1.9, 1e-9).pass);
    }

    #[test]
    fn affine_passes_with_zero_constant() {
        let grid = Grid1d::from_fn(-1.0, 0.02, 101, |x| 3.0 * x - 0.5);
        assert!(semiconcave_check_1d(&grid, 0.0, 1e-12).pass);
    }

    #[test]
    fn bisection_finds_the_tight_constant() {
        let phi = dist_sq_to(&[0.0, 1.0]);
        let grid = Grid1d::from_fn(0.0, 0.01, 101, phi);
        let c = minimal_semiconcavity_constant_1d(&grid, 1000.0, 1e-9).unwrap();
        assert!((c - 2.0).abs() < 1e-3, "c = {c}");
    }

    #[test]
    fn grid2d_certificate() {
        // u = -|x|^2 is concave: constant 0 suffices
        let grid = Grid2d::from_fn((-1.0, -1.0), (0.1, 0.1), 21, 21, |x, y| -(x * x + y * y));
        assert!(semiconcave_check_2d(&grid, 0.0, 1e-12).pass);
        // u = |x|^2 needs constant 2
        let grid = Grid2d::from_fn((-1.0, -1.0), (0.1, 0.1), 21, 21, |x, y| x * x + y * y);
        assert!(!semiconcave_check_2d(&grid, 1.9, 1e-9).pass);
        assert!(semiconcave_check_2d(&grid, 2.0, 1e-9).pass);
    }

    #[test]
    fn one_point_extension_is_a_parabola() {
        let ext = semiconcave_extend(
            &[Point::x1(0.0)],
            &[0.0],
            &[Point::x1(0.0)],
            1.0,
            0.0,
        )
        .unwrap();
        assert_eq!(ext.eval(&Point::x1(0.0)), 0.0);
        assert!((ext.eval(&Point::x1(2.0)) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn extension_restricts_and_is_2c_semiconcave() {
        // anchors on a concave arch with exact slopes
        let f = |x: f64| -x * x;
        let points: Vec<Point> = (0..11).map(|i| Point::x1(-1.0 + 0.2 * i as f64)).collect();
        let values: Vec<f64> = points.iter().map(|p| f(p.coord(0))).collect();
        let slopes: Vec<Point> = points.iter().map(|p| Point::x1(-2.0 * p.coord(0))).collect();
        let ext = semiconcave_extend(&points, &values, &slopes, 1.0, 2.0).unwrap();
        for (p, v) in points.iter().zip(&values) {
            assert!((ext.eval(p) - v).abs() < 1e-12);
        }
        let grid = Grid1d::from_fn(-2.0, 0.05, 81, |x| ext.eval(&Point::x1(x)));
        let cert = semiconcave_check_1d(&grid, 2.0, 1e-9);
        assert!(cert.pass, "worst {}", cert.worst);
    }

    #[test]
    fn violated_pair_is_reported() {
        // slope at p = 0 claims descent, but psi rises fast: inequality fails
        let err = semiconcave_extend(
            &[Point::x1(0.0), Point::x1(0.1)],
            &[0.0, 1.0],
            &[Point::x1(0.0), Point::x1(0.0)],
            1.0,
            1.0,
        );
        assert!(err.is_err());
    }
}
