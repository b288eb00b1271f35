//! Exact planar arrangement of the maximizer regions of a PWL convex
//! function: region polygons, singular edges (two or more pieces active)
//! and singular vertices (three or more).

use crate::error::{Error, Result};
use crate::geom::Point;

use super::pwl::PwlConvex;

const GEOM_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct EdgeCell {
    /// The two pieces whose tie defines the carrying line.
    pub pieces: (usize, usize),
    pub endpoints: (Point, Point),
    /// Active set on the relative interior.
    pub active: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct VertexCell {
    pub point: Point,
    pub active: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Arrangement {
    /// Maximizer polygon per piece (empty when the piece is never maximal).
    pub regions: Vec<Vec<(f64, f64)>>,
    pub edges: Vec<EdgeCell>,
    pub vertices: Vec<VertexCell>,
}

/// Build the maximizer arrangement of a 2-dimensional PWL convex function.
pub fn arrangement(f: &PwlConvex) -> Result<Arrangement> {
    if f.dim() != 2 {
        return Err(Error::invalid("arrangement construction requires dim 2"));
    }
    let (lo, hi) = f.domain();
    let box_poly = vec![
        (lo.coord(0), lo.coord(1)),
        (hi.coord(0), lo.coord(1)),
        (hi.coord(0), hi.coord(1)),
        (lo.coord(0), hi.coord(1)),
    ];
    let pieces = f.pieces();
    let m = pieces.len();

    let mut regions: Vec<Vec<(f64, f64)>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut poly = box_poly.clone();
        for j in 0..m {
            if i == j {
                continue;
            }
            // keep f_i >= f_j: (a_i - a_j) . x + (b_i - b_j) >= 0
            let n = pieces[i].0 - pieces[j].0;
            let c = pieces[i].1 - pieces[j].1;
            poly = clip_halfplane(&poly, n.coord(0), n.coord(1), c);
            if poly.is_empty() {
                break;
            }
        }
        regions.push(poly);
    }

    // edges: tie lines clipped to both maximizer constraints
    let mut edges: Vec<EdgeCell> = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if let Some((p, q)) = tie_segment(f, i, j, &box_poly) {
                let mid = (p + q).scale(0.5);
                let active = f.active_set(&mid, Some(1e-8 * (1.0 + f.eval(&mid).abs())));
                edges.push(EdgeCell {
                    pieces: (i, j),
                    endpoints: order_segment(p, q),
                    active,
                });
            }
        }
    }
    edges.sort_by(|a, b| {
        a.endpoints
            .0
            .lex_cmp(&b.endpoints.0)
            .then(a.endpoints.1.lex_cmp(&b.endpoints.1))
    });

    // vertices: edge endpoints with >= 3 active pieces
    let mut vertices: Vec<VertexCell> = Vec::new();
    for e in &edges {
        for p in [e.endpoints.0, e.endpoints.1] {
            if vertices.iter().any(|v| v.point.dist(&p) < 1e-9) {
                continue;
            }
            let active = f.active_set(&p, Some(1e-8 * (1.0 + f.eval(&p).abs())));
            if active.len() >= 3 {
                vertices.push(VertexCell { point: p, active });
            }
        }
    }
    vertices.sort_by(|a, b| a.point.lex_cmp(&b.point));

    Ok(Arrangement {
        regions,
        edges,
        vertices,
    })
}

/// The closed segment where pieces i and j tie and are jointly maximal;
/// `None` when empty or degenerate.
fn tie_segment(
    f: &PwlConvex,
    i: usize,
    j: usize,
    box_poly: &[(f64, f64)],
) -> Option<(Point, Point)> {
    let pieces = f.pieces();
    let n = pieces[i].0 - pieces[j].0;
    let c = pieces[j].1 - pieces[i].1; // line: n . x = c
    let nn = n.norm();
    if nn < 1e-14 {
        return None;
    }
    // parametrize the line: x = p0 + t * dir
    let p0 = n.scale(c / (nn * nn));
    let dir = n.perp().scale(1.0 / nn);
    // clip to the box
    let (mut t_lo, mut t_hi) = (f64::NEG_INFINITY, f64::INFINITY);
    let clip_lin = |coef: f64, bound: f64, t_lo: &mut f64, t_hi: &mut f64| {
        // coef * t <= bound
        if coef.abs() < 1e-14 {
            if bound < -GEOM_TOL {
                *t_lo = f64::INFINITY;
            }
        } else if coef > 0.0 {
            *t_hi = t_hi.min(bound / coef);
        } else {
            *t_lo = t_lo.max(bound / coef);
        }
    };
    let (bx_lo, bx_hi) = (box_poly[0], box_poly[2]);
    clip_lin(dir.coord(0), bx_hi.0 - p0.coord(0), &mut t_lo, &mut t_hi);
    clip_lin(-dir.coord(0), p0.coord(0) - bx_lo.0, &mut t_lo, &mut t_hi);
    clip_lin(dir.coord(1), bx_hi.1 - p0.coord(1), &mut t_lo, &mut t_hi);
    clip_lin(-dir.coord(1), p0.coord(1) - bx_lo.1, &mut t_lo, &mut t_hi);
    // clip by maximality over every other piece: (a_i - a_k) . x >= b_k - b_i
    for k in 0..pieces.len() {
        if k == i || k == j {
            continue;
        }
        let nk = pieces[i].0 - pieces[k].0;
        let ck = pieces[k].1 - pieces[i].1;
        // nk . (p0 + t dir) >= ck  =>  -(nk . dir) t <= nk . p0 - ck
        clip_lin(-nk.dot(&dir), nk.dot(&p0) - ck, &mut t_lo, &mut t_hi);
    }
    if t_hi - t_lo <= 1e-9 {
        return None;
    }
    Some((p0 + dir.scale(t_lo), p0 + dir.scale(t_hi)))
}

fn order_segment(p: Point, q: Point) -> (Point, Point) {
    if p.lex_cmp(&q) == std::cmp::Ordering::Greater {
        (q, p)
    } else {
        (p, q)
    }
}

/// Sutherland-Hodgman clip of a convex polygon by `nx x + ny y + c >= 0`.
fn clip_halfplane(poly: &[(f64, f64)], nx: f64, ny: f64, c: f64) -> Vec<(f64, f64)> {
    if poly.is_empty() {
        return Vec::new();
    }
    let side = |p: &(f64, f64)| nx * p.0 + ny * p.1 + c;
    let mut out = Vec::new();
    let k = poly.len();
    for i in 0..k {
        let cur = poly[i];
        let nxt = poly[(i + 1) % k];
        let sc = side(&cur);
        let sn = side(&nxt);
        if sc >= -GEOM_TOL {
            out.push(cur);
        }
        if (sc > GEOM_TOL && sn < -GEOM_TOL) || (sc < -GEOM_TOL && sn > GEOM_TOL) {
            let t = sc / (sc - sn);
            out.push((cur.0 + t * (nxt.0 - cur.0), cur.1 + t * (nxt.1 - cur.1)));
        }
    }
    // drop near-duplicate consecutive points
    let mut dedup: Vec<(f64, f64)> = Vec::new();
    for p in out {
        if dedup
            .last()
            .map(|q| (q.0 - p.0).abs() > 1e-12 || (q.1 - p.1).abs() > 1e-12)
            .unwrap_or(true)
        {
            dedup.push(p);
        }
    }
    if dedup.len() >= 2 {
        let first = dedup[0];
        let last = *dedup.last().unwrap();
        if (first.0 - last.0).abs() < 1e-12 && (first.1 - last.1).abs() < 1e-12 {
            dedup.pop();
        }
    }
    if dedup.len() < 3 {
        return Vec::new();
    }
    dedup
}
