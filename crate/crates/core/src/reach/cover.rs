//! Semiconcave boundary covers: assign each boundary point to net
//! directions close to one of its unit normals, express each patch as a
//! graph over the direction's orthogonal complement, and certify the
//! 3-Lipschitz bound together with the quadratic upper bound
//! `psi(p+D) - psi(p) - h_p(D) <= (32/(3r)) |D|^2`, where
//! `h_p(u) = -<u, n_x> / <v, n_x>` is the linear functional whose graph is
//! orthogonal to the probed normal.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{linalg, Point, SphereNet};

use super::SampledSet;

#[derive(Debug, Clone, Serialize)]
pub struct CoverPatch {
    pub direction: Point,
    /// Sample indices captured by this patch.
    pub members: Vec<usize>,
    /// Orthonormal basis of the graph domain (direction complement).
    pub basis: Vec<Point>,
    /// Graph samples: domain coordinates and height along the direction.
    pub graph: Vec<(Vec<f64>, f64)>,
    /// Largest slope |d psi| / |d p| seen among member pairs.
    pub lipschitz_worst: f64,
    /// Largest quadratic-bound residual (certified <= slack).
    pub quad_worst: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryCover {
    pub r: f64,
    /// The quadratic constant 32/(3r).
    pub quad_constant: f64,
    pub net_mesh: f64,
    pub patches: Vec<CoverPatch>,
    /// Per-sample flag: captured by at least one patch.
    pub covered: Vec<bool>,
}

/// Witness of a failed certificate.
#[derive(Debug, Clone, Serialize)]
pub struct CoverWitness {
    pub direction: Point,
    pub i: usize,
    pub j: usize,
    pub check: &'static str,
    pub lhs: f64,
    pub rhs: f64,
}

impl std::fmt::Display for CoverWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} bound failed for pair ({}, {}): {:.6e} > {:.6e}",
            self.check, self.i, self.j, self.lhs, self.rhs
        )
    }
}

#[derive(Debug)]
pub enum CoverOutcome {
    Certified(BoundaryCover),
    Failed {
        witness: CoverWitness,
        partial: BoundaryCover,
    },
}

impl CoverOutcome {
    pub fn certified(&self) -> Option<&BoundaryCover> {
        match self {
            CoverOutcome::Certified(c) => Some(c),
            CoverOutcome::Failed { .. } => None,
        }
    }
}

/// Build and certify a boundary cover at level `r`.
///
/// `normals[i]` holds the available unit normals at sample `i` (probed or
/// analytic); every point must have at least one.
pub fn boundary_cover(
    set: &SampledSet,
    normals: &[Vec<Point>],
    r: f64,
    net: &SphereNet,
    tol: f64,
) -> Result<CoverOutcome> {
    if r <= 0.0 {
        return Err(Error::invalid("cover level r must be positive"));
    }
    if normals.len() != set.len() {
        return Err(Error::invalid("need one normal list per sample point"));
    }
    if let Some(i) = normals.iter().position(|ns| ns.is_empty()) {
        return Err(Error::invalid(format!(
            "sample {i} has no unit normal; probe or supply one first"
        )));
    }
    let c = 32.0 / (3.0 * r);
    let capture = net.mesh;
    let mut patches: Vec<CoverPatch> = Vec::new();
    let mut covered = vec![false; set.len()];

    for v in &net.directions {
        // capture: any unit normal within the net mesh of v
        let captured: Vec<(usize, Point)> = (0..set.len())
            .filter_map(|i| {
                normals[i]
                    .iter()
                    .copied()
                    .filter(|n| n.dist(v) < capture)
                    .max_by(|a, b| a.dot(v).total_cmp(&b.dot(v)))
                    .map(|n| (i, n))
            })
            .collect();
        if captured.is_empty() {
            continue;
        }
        // split into groups of diameter <= r: balls of radius r/2 around
        // greedily chosen seeds (the member covering the most others)
        let mut remaining = captured;
        while !remaining.is_empty() {
            let seed_pos = (0..remaining.len())
                .max_by_key(|&s| {
                    let ps = set.point(remaining[s].0);
                    remaining
                        .iter()
                        .filter(|(i, _)| set.point(*i).dist(&ps) <= r / 2.0)
                        .count()
                })
                .unwrap();
            let seed = set.point(remaining[seed_pos].0);
            let (group, rest): (Vec<_>, Vec<_>) = remaining
                .into_iter()
                .partition(|(i, _)| set.point(*i).dist(&seed) <= r / 2.0);
            remaining = rest;

            match certify_patch(set, v, &group, c, tol) {
                Ok(patch) => {
                    for &i in &patch.members {
                        covered[i] = true;
                    }
                    patches.push(patch);
                }
                Err(witness) => {
                    return Ok(CoverOutcome::Failed {
                        witness,
                        partial: BoundaryCover {
                            r,
                            quad_constant: c,
                            net_mesh: net.mesh,
                            patches,
                            covered,
                        },
                    });
                }
            }
        }
    }
    let cover = BoundaryCover {
        r,
        quad_constant: c,
        net_mesh: net.mesh,
        patches,
        covered,
    };
    if let Some(i) = cover.covered.iter().position(|&c| !c) {
        return Err(Error::invalid(format!(
            "sample {i} was not captured by any net direction; the net does \
             not cover its normals"
        )));
    }
    Ok(CoverOutcome::Certified(cover))
}

fn certify_patch(
    set: &SampledSet,
    v: &Point,
    group: &[(usize, Point)],
    c: f64,
    tol: f64,
) -> std::result::Result<CoverPatch, CoverWitness> {
    let basis = linalg::orthonormal_complement(&[*v], set.dim(), 1e-12);
    let coords: Vec<(Vec<f64>, f64)> = group
        .iter()
        .map(|(i, _)| {
            let x = set.point(*i);
            let p: Vec<f64> = basis.iter().map(|b| b.dot(&x)).collect();
            (p, v.dot(&x))
        })
        .collect();
    let mut lip_worst: f64 = 0.0;
    let mut quad_worst: f64 = f64::NEG_INFINITY;

    for (ii, (i, n_i)) in group.iter().enumerate() {
        let vn = v.dot(n_i);
        debug_assert!(vn >= 0.75 - 1e-9);
        for (jj, (j, _)) in group.iter().enumerate() {
            if ii == jj {
                continue;
            }
            let dp = sub(&coords[jj].0, &coords[ii].0);
            let dpsi = coords[jj].1 - coords[ii].1;
            let dplen = norm(&dp);
            // 3-Lipschitz graph certificate (covers the not-a-graph case:
            // distinct heights over one domain point)
            if dpsi.abs() > 3.0 * dplen + tol {
                return Err(CoverWitness {
                    direction: *v,
                    i: *i,
                    j: *j,
                    check: "lipschitz",
                    lhs: dpsi.abs(),
                    rhs: 3.0 * dplen + tol,
                });
            }
            if dplen > 0.0 {
                lip_worst = lip_worst.max(dpsi.abs() / dplen);
            }
            // quadratic bound with h built from the probed normal
            let mut lift = Point::zero(set.dim());
            for (k, b) in basis.iter().enumerate() {
                lift = lift + b.scale(dp[k]);
            }
            let h = -lift.dot(n_i) / vn;
            let omega = dpsi - h;
            let bound = c * dplen * dplen + tol;
            if omega > bound {
                return Err(CoverWitness {
                    direction: *v,
                    i: *i,
                    j: *j,
                    check: "quadratic",
                    lhs: omega,
                    rhs: bound,
                });
            }
            quad_worst = quad_worst.max(omega - c * dplen * dplen);
        }
    }
    Ok(CoverPatch {
        direction: *v,
        members: group.iter().map(|(i, _)| *i).collect(),
        basis,
        graph: coords,
        lipschitz_worst: lip_worst,
        quad_worst: if quad_worst.is_finite() { quad_worst } else { 0.0 },
    })
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle_with_normals(n: usize) -> (SampledSet, Vec<Vec<Point>>) {
        let pts: Vec<Point> = (0..n)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                Point::xy(t.cos(), t.sin())
            })
            .collect();
        let normals: Vec<Vec<Point>> = pts.iter().map(|p| vec![*p, -*p]).collect();
        (SampledSet::new(2, pts, "circle").unwrap(), normals)
    }

    #[test]
    fn circle_cover_certifies_at_point_nine() {
        let (s, normals) = circle_with_normals(2000);
        let net = SphereNet::build(2, 0.25).unwrap();
        let out = boundary_cover(&s, &normals, 0.9, &net, 1e-9).unwrap();
        let cover = out.certified().expect("circle cover must certify");
        assert!(cover.patches.len() <= 2 * net.len());
        assert!(cover.covered.iter().all(|&c| c));
        for p in &cover.patches {
            assert!(p.lipschitz_worst <= 3.0);
            assert!(p.quad_worst <= 1e-9);
        }
    }

    #[test]
    fn straight_segment_single_sided_patches() {
        // boundary of a halfplane piece: psi is affine (here constant 0)
        let n = 200;
        let pts: Vec<Point> = (0..=n)
            .map(|i| Point::xy(i as f64 / n as f64, 0.0))
            .collect();
        let s = SampledSet::new(2, pts, "segment").unwrap();
        let normals: Vec<Vec<Point>> = (0..=n).map(|_| vec![Point::xy(0.0, 1.0)]).collect();
        let net = SphereNet::build(2, 0.25).unwrap();
        let out = boundary_cover(&s, &normals, 0.9, &net, 1e-9).unwrap();
        let cover = out.certified().expect("affine graph certifies");
        for p in &cover.patches {
            // psi linear: the quadratic left side is identically <= 0
            assert!(p.quad_worst <= 1e-12);
        }
    }

    #[test]
    fn missing_normal_is_rejected() {
        let (s, mut normals) = circle_with_normals(64);
        normals[3].clear();
        let net = SphereNet::build(2, 0.25).unwrap();
        assert!(boundary_cover(&s, &normals, 0.9, &net, 1e-9).is_err());
    }
}
