//! Finite point samples of subsets of ℝ^d with optional analytic tangent
//! data, plus the spatial index used by projection queries.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{ConeWire, Point, PolyhedralCone};

const DEDUP_TOL: f64 = 1e-12;

/// A finite sample of a set `A ⊂ ℝ^d`. Points are pairwise distinct beyond
/// 1e-12; the optional tangent oracle maps sample indices to the (convex)
/// tangent cone of `A` at that point.
#[derive(Debug, Clone)]
pub struct SampledSet {
    dim: usize,
    points: Vec<Point>,
    tangents: Option<BTreeMap<usize, PolyhedralCone>>,
    pub label: String,
}

/// JSON wire schema.
#[derive(Debug, Serialize, Deserialize)]
struct SampledSetWire {
    dim: usize,
    points: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tangent_cones: Option<Vec<TangentWire>>,
    label: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct TangentWire {
    index: usize,
    #[serde(flatten)]
    cone: ConeWire,
}

impl SampledSet {
    /// Build a sample, deduplicating points at 1e-12.
    pub fn new(dim: usize, points: Vec<Point>, label: impl Into<String>) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if points.is_empty() {
            return Err(Error::invalid("empty sample"));
        }
        let mut kept: Vec<Point> = Vec::with_capacity(points.len());
        let mut grid: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
        let cell = 4.0 * DEDUP_TOL;
        for p in points {
            if p.dim() != dim {
                return Err(Error::invalid("point dimension mismatch"));
            }
            let key = cell_key(&p, cell);
            let mut dup = false;
            'scan: for dx in -1..=1 {
                for dy in -1..=1 {
                    for dz in -1..=1 {
                        let k = [key[0] + dx, key[1] + dy, key[2] + dz];
                        if let Some(ids) = grid.get(&k) {
                            if ids.iter().any(|&i| kept[i].dist(&p) < DEDUP_TOL) {
                                dup = true;
                                break 'scan;
                            }
                        }
                    }
                }
            }
            if !dup {
                grid.entry(key).or_default().push(kept.len());
                kept.push(p);
            }
        }
        Ok(SampledSet {
            dim,
            points: kept,
            tangents: None,
            label: label.into(),
        })
    }

    pub fn with_tangents(mut self, tangents: BTreeMap<usize, PolyhedralCone>) -> Result<Self> {
        for (i, c) in &tangents {
            if *i >= self.points.len() {
                return Err(Error::invalid(format!("tangent index {i} out of range")));
            }
            if c.dim() != self.dim {
                return Err(Error::invalid("tangent cone dimension mismatch"));
            }
        }
        self.tangents = Some(tangents);
        Ok(self)
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

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> Point {
        self.points[i]
    }

    pub fn tangent_cone(&self, i: usize) -> Option<&PolyhedralCone> {
        self.tangents.as_ref().and_then(|m| m.get(&i))
    }

    pub fn tangent_map(&self) -> Option<&BTreeMap<usize, PolyhedralCone>> {
        self.tangents.as_ref()
    }

    pub fn has_tangents(&self) -> bool {
        self.tangents.is_some()
    }

    pub fn set_tangent(&mut self, i: usize, cone: PolyhedralCone) {
        self.tangents
            .get_or_insert_with(BTreeMap::new)
            .insert(i, cone);
    }

    /// Diagonal of the axis-aligned bounding box; the scale reference for
    /// relative tolerances.
    pub fn bbox_diameter(&self) -> f64 {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for p in &self.points {
            for i in 0..3 {
                lo[i] = lo[i].min(p.coord(i));
                hi[i] = hi[i].max(p.coord(i));
            }
        }
        (0..3)
            .map(|i| (hi[i] - lo[i]).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// All sample indices whose distance to `z` is within `tol` of the
    /// minimum, in increasing index order.
    pub fn metric_projection(&self, z: &Point, tol: f64) -> Vec<usize> {
        let mut best = f64::INFINITY;
        for p in &self.points {
            best = best.min(p.dist(z));
        }
        let mut out: Vec<usize> = (0..self.points.len())
            .filter(|&i| self.points[i].dist(z) <= best + tol)
            .collect();
        out.sort_unstable();
        out
    }

    /// Distance from `z` to the sample.
    pub fn distance(&self, z: &Point) -> f64 {
        self.points
            .iter()
            .map(|p| p.dist(z))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn to_json(&self) -> String {
        let wire = SampledSetWire {
            dim: self.dim,
            points: self.points.iter().map(|p| p.coords().to_vec()).collect(),
            tangent_cones: self.tangents.as_ref().map(|m| {
                m.iter()
                    .map(|(i, c)| TangentWire {
                        index: *i,
                        cone: c.to_wire(),
                    })
                    .collect()
            }),
            label: self.label.clone(),
        };
        serde_json::to_string_pretty(&wire).expect("serializable")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let wire: SampledSetWire =
            serde_json::from_str(json).map_err(|e| Error::invalid(format!("bad JSON: {e}")))?;
        let points: Result<Vec<Point>> = wire.points.iter().map(|c| Point::new(c)).collect();
        let mut set = SampledSet::new(wire.dim, points?, wire.label)?;
        if let Some(cones) = wire.tangent_cones {
            let mut map = BTreeMap::new();
            for tw in cones {
                map.insert(tw.index, PolyhedralCone::from_wire(wire.dim, &tw.cone)?);
            }
            set = set.with_tangents(map)?;
        }
        Ok(set)
    }
}

fn cell_key(p: &Point, cell: f64) -> [i64; 3] {
    [
        (p.coord(0) / cell).floor() as i64,
        (p.coord(1) / cell).floor() as i64,
        (p.coord(2) / cell).floor() as i64,
    ]
}

/// Uniform-grid spatial index for repeated nearest-neighbor and
/// metric-projection queries against a fixed sample.
pub struct ProjectionIndex<'a> {
    set: &'a SampledSet,
    cell: f64,
    grid: HashMap<[i64; 3], Vec<usize>>,
}

impl<'a> ProjectionIndex<'a> {
    pub fn new(set: &'a SampledSet) -> Self {
        let n = set.len() as f64;
        let diam = set.bbox_diameter();
        let mut cell = (diam / n.powf(1.0 / set.dim() as f64)).max(diam * 1e-6);
        if !cell.is_finite() || cell <= 0.0 {
            cell = 1.0; // degenerate sample (single point)
        }
        let mut grid: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
        for (i, p) in set.points().iter().enumerate() {
            grid.entry(cell_key(p, cell)).or_default().push(i);
        }
        ProjectionIndex { set, cell, grid }
    }

    /// (min distance, indices within `tol` of it, sorted).
    pub fn projection(&self, z: &Point, tol: f64) -> (f64, Vec<usize>) {
        let center = cell_key(z, self.cell);
        let mut best = f64::INFINITY;
        let mut candidates: Vec<usize> = Vec::new();
        let dim = self.set.dim();
        let mut ring: i64 = 0;
        loop {
            let lower = (ring - 1).max(0) as f64 * self.cell;
            if lower > best + tol && ring > 1 {
                break;
            }
            let mut any_cell = false;
            visit_ring(center, ring, dim, &mut |key| {
                if let Some(ids) = self.grid.get(&key) {
                    any_cell = true;
                    for &i in ids {
                        let d = self.set.point(i).dist(z);
                        if d < best {
                            best = d;
                        }
                        candidates.push(i);
                    }
                }
            });
            ring += 1;
            // safety: beyond the data diameter nothing more can appear
            if !any_cell && ring as f64 * self.cell > self.set.bbox_diameter() + best + tol {
                break;
            }
        }
        let mut out: Vec<usize> = candidates
            .into_iter()
            .filter(|&i| self.set.point(i).dist(z) <= best + tol)
            .collect();
        out.sort_unstable();
        out.dedup();
        (best, out)
    }

    pub fn nearest_distance(&self, z: &Point) -> f64 {
        self.projection(z, 0.0).0
    }

    /// True when the projection of `z` is the single index `i`.
    pub fn projects_uniquely_to(&self, z: &Point, i: usize, tol: f64) -> bool {
        let (_, ids) = self.projection(z, tol);
        ids.len() == 1 && ids[0] == i
    }
}

/// Visit all cells at Chebyshev ring distance `ring` around `center`
/// (only the first `dim` coordinates vary).
fn visit_ring(center: [i64; 3], ring: i64, dim: usize, f: &mut impl FnMut([i64; 3])) {
    if ring == 0 {
        f(center);
        return;
    }
    let r = ring;
    let ranges: [(i64, i64); 3] = [
        (-r, r),
        if dim >= 2 { (-r, r) } else { (0, 0) },
        if dim >= 3 { (-r, r) } else { (0, 0) },
    ];
    for dx in ranges[0].0..=ranges[0].1 {
        for dy in ranges[1].0..=ranges[1].1 {
            for dz in ranges[2].0..=ranges[2].1 {
                if dx.abs().max(dy.abs()).max(dz.abs()) == r {
                    f([center[0] + dx, center[1] + dy, center[2] + dz]);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_circle(n: usize) -> SampledSet {
        let pts: Vec<Point> = (0..n)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                Point::xy(t.cos(), t.sin())
            })
            .collect();
        SampledSet::new(2, pts, "circle").unwrap()
    }

    #[test]
    fn projection_radial() {
        let s = unit_circle(360);
        let p = s.metric_projection(&Point::xy(2.0, 0.0), 1e-9);
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn projection_center_hits_everything() {
        let s = unit_circle(360);
        let p = s.metric_projection(&Point::xy(0.0, 0.0), 1e-9);
        assert_eq!(p.len(), 360);
    }

    #[test]
    fn projection_midpoint_symmetry() {
        let s = SampledSet::new(
            2,
            vec![Point::xy(0.0, 0.0), Point::xy(1.0, 0.0)],
            "two points",
        )
        .unwrap();
        let p = s.metric_projection(&Point::xy(0.5, 0.0), 1e-9);
        assert_eq!(p, vec![0, 1]);
    }

    #[test]
    fn index_agrees_with_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let pts: Vec<Point> = (0..500)
            .map(|_| Point::xy(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let s = SampledSet::new(2, pts, "cloud").unwrap();
        let idx = ProjectionIndex::new(&s);
        for _ in 0..200 {
            let z = Point::xy(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let brute = s.metric_projection(&z, 1e-9);
            let (_, fast) = idx.projection(&z, 1e-9);
            assert_eq!(brute, fast);
        }
    }

    #[test]
    fn dedup_and_json_roundtrip() {
        let s = SampledSet::new(
            2,
            vec![
                Point::xy(0.0, 0.0),
                Point::xy(0.0, 0.0),
                Point::xy(1.0, 0.0),
            ],
            "dups",
        )
        .unwrap();
        assert_eq!(s.len(), 2);
        let mut s = s;
        s.set_tangent(0, PolyhedralCone::ray(Point::xy(1.0, 0.0)).unwrap());
        let json = s.to_json();
        let back = SampledSet::from_json(&json).unwrap();
        assert_eq!(back.len(), 2);
        assert!(back.tangent_cone(0).is_some());
        assert_eq!(back.to_json(), json);
    }
}
