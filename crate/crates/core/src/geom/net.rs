//! Finite nets of unit directions with a certified covering mesh.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Point;
use crate::error::{Error, Result};

const PROBE_COUNT: usize = 100_000;
const PROBE_SEED: u64 = 0x5eed_0001;

/// A finite set of unit directions such that every unit vector lies within
/// `mesh` (Euclidean distance) of some direction. Built greedily by
/// farthest-point insertion, then certified by random probing.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SphereNet {
    pub dim: usize,
    pub mesh: f64,
    pub directions: Vec<Point>,
}

impl SphereNet {
    /// Greedy farthest-point net on the unit sphere of ℝ^d, d ∈ {2, 3}.
    /// At least two antipodal directions are always emitted.
    pub fn build(dim: usize, mesh: f64) -> Result<Self> {
        if !(2..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if !(mesh > 0.0 && mesh < 2.0 + 1e-12) {
            return Err(Error::invalid("mesh must lie in (0, 2]"));
        }
        let directions = if dim == 2 {
            build_circle(mesh)
        } else {
            build_sphere(mesh)
        };
        let net = SphereNet {
            dim,
            mesh,
            directions,
        };
        debug_assert!(net.certify_by_probing(net.mesh + 1e-9).is_none());
        Ok(net)
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    /// Random-probe certificate: draws 10^5 seeded unit vectors and returns
    /// the first one farther than `tol` from every net direction, if any.
    pub fn certify_by_probing(&self, tol: f64) -> Option<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
        for _ in 0..PROBE_COUNT {
            let u = random_unit(&mut rng, self.dim);
            let d = self
                .directions
                .iter()
                .map(|v| v.dist(&u))
                .fold(f64::INFINITY, f64::min);
            if d > tol {
                return Some(u);
            }
        }
        None
    }
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Point {
    loop {
        let v = match dim {
            2 => Point::xy(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            _ => Point::xyz(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ),
        };
        let n = v.norm_sq();
        if n > 1e-6 && n <= 1.0 {
            return v.unit().unwrap();
        }
    }
}

/// Exact greedy on the circle: repeatedly split the largest angular gap.
/// A gap of size g leaves points at chord distance 2 sin(g/4) from the net.
fn build_circle(mesh: f64) -> Vec<Point> {
    let mut angles = vec![0.0, PI];
    loop {
        let mut sorted = angles.clone();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let (mut worst_gap, mut at) = (-1.0, 0.0);
        for i in 0..n {
            let next = if i + 1 == n {
                sorted[0] + 2.0 * PI
            } else {
                sorted[i + 1]
            };
            let gap = next - sorted[i];
            if gap > worst_gap {
                worst_gap = gap;
                at = sorted[i] + gap / 2.0;
            }
        }
        if 2.0 * (worst_gap / 4.0).sin() <= mesh {
            break;
        }
        angles.push(at % (2.0 * PI));
    }
    angles.sort_by(f64::total_cmp);
    angles
        .into_iter()
        .map(|a| Point::xy(a.cos(), a.sin()))
        .collect()
}

/// Greedy farthest-point insertion over a dense deterministic candidate
/// pool (Fibonacci sphere).
fn build_sphere(mesh: f64) -> Vec<Point> {
    let pool = fibonacci_sphere(20_000);
    // pool resolution: nearest-neighbor distance bound for the spiral
    let pool_res = (4.0 * PI / pool.len() as f64).sqrt() * 1.3;
    let target = (mesh - pool_res).max(mesh * 0.5);

    let mut chosen: Vec<Point> = vec![Point::xyz(0.0, 0.0, 1.0), Point::xyz(0.0, 0.0, -1.0)];
    let mut min_dist: Vec<f64> = pool
        .iter()
        .map(|p| chosen.iter().map(|c| c.dist(p)).fold(f64::INFINITY, f64::min))
        .collect();
    loop {
        let (best_idx, best) = min_dist
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, d)| (i, *d))
            .unwrap();
        if best <= target {
            break;
        }
        let new = pool[best_idx];
        chosen.push(new);
        for (i, p) in pool.iter().enumerate() {
            let d = new.dist(p);
            if d < min_dist[i] {
                min_dist[i] = d;
            }
        }
    }
    chosen
}

fn fibonacci_sphere(n: usize) -> Vec<Point> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let y = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - y * y).max(0.0).sqrt();
            let theta = golden * i as f64;
            Point::xyz(r * theta.cos(), y, r * theta.sin())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_quarter_mesh() {
        let net = SphereNet::build(2, 0.25).unwrap();
        // gap-splitting greedy lands on a power of two below the
        // arc-spacing bound ceil(2 pi / (2 asin(1/8))) = 26
        assert!(net.len() <= 26, "got {}", net.len());
        assert!(net.certify_by_probing(0.25 + 1e-9).is_none());
    }

    #[test]
    fn circle_diameter_mesh_keeps_two_antipodes() {
        let net = SphereNet::build(2, 2.0).unwrap();
        assert_eq!(net.len(), 2);
        assert!(net.directions[0].dist(&net.directions[1]) > 2.0 - 1e-12);
        assert!(net.certify_by_probing(2.0 + 1e-9).is_none());
    }

    #[test]
    fn sphere_quarter_mesh_certifies() {
        let net = SphereNet::build(3, 0.25).unwrap();
        assert!(net.len() >= 50);
        assert!(
            net.certify_by_probing(0.25 + 1e-9).is_none(),
            "net of {} directions failed the probe certificate",
            net.len()
        );
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(SphereNet::build(1, 0.25).is_err());
        assert!(SphereNet::build(2, 0.0).is_err());
    }
}
