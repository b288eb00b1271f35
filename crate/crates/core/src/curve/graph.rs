//! Uniform C^{1,1} graph verification: a K-Lipschitz chart over an
//! interval is C^{1,1} with derivative Lipschitz constant controlled by
//! the ambient reach level, certified through the quadratic Taylor bound
//! with constant `c = (2+K)^3 / (2 rho)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::Point;

#[derive(Debug, Clone, Serialize)]
pub struct C11GraphReport {
    pub pass: bool,
    /// The pinned constant (2+K)^3 / (2 rho).
    pub constant: f64,
    /// Largest observed |phi(y) - phi(x) - g_x (y-x)| / |y-x|^2.
    pub worst_ratio: f64,
    /// Chart points attaining the worst ratio.
    pub witness: Option<(f64, f64)>,
}

/// Check the quadratic Taylor bound for a sampled chart `w -> phi(w)` with
/// finite-difference gradients. `phi` values may be vectors (curve charts
/// into the orthogonal complement).
pub fn c11_graph_check(
    samples: &[(f64, Point)],
    k_lip: f64,
    rho: f64,
    tol: f64,
) -> Result<C11GraphReport> {
    if samples.len() < 3 {
        return Err(Error::invalid("need at least 3 chart samples"));
    }
    if rho <= 0.0 {
        return Err(Error::invalid("reach level rho must be positive"));
    }
    let mut pts = samples.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    // Lipschitz precondition
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let dw = pts[j].0 - pts[i].0;
            let dv = pts[j].1.dist(&pts[i].1);
            if dv > k_lip * dw.abs() + tol {
                return Err(Error::invalid(format!(
                    "chart is not {k_lip}-Lipschitz: samples {i} and {j} \
                     have slope {}",
                    dv / dw.abs()
                )));
            }
        }
    }
    // central-difference gradients (one-sided at the ends)
    let n = pts.len();
    let grads: Vec<Point> = (0..n)
        .map(|i| {
            let (a, b) = if i == 0 {
                (0, 1)
            } else if i == n - 1 {
                (n - 2, n - 1)
            } else {
                (i - 1, i + 1)
            };
            (pts[b].1 - pts[a].1).scale(1.0 / (pts[b].0 - pts[a].0))
        })
        .collect();
    let c = (2.0 + k_lip).powi(3) / (2.0 * rho);
    let mut worst: f64 = 0.0;
    let mut witness = None;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let dw = pts[j].0 - pts[i].0;
            let resid = (pts[j].1 - pts[i].1 - grads[i].scale(dw)).norm();
            let ratio = resid / (dw * dw);
            if ratio > worst {
                worst = ratio;
                witness = Some((pts[i].0, pts[j].0));
            }
        }
    }
    Ok(C11GraphReport {
        pass: worst <= c + tol,
        constant: c,
        worst_ratio: worst,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_circle_chart_passes() {
        // phi(w) = -sqrt(1 - w^2) on |w| <= 1/2: slopes up to 1/sqrt(3),
        // second derivative at most (3/4)^{-3/2} ~ 1.54 << 8.65
        let samples: Vec<(f64, Point)> = (0..=200)
            .map(|i| {
                let w = -0.5 + i as f64 / 200.0;
                (w, Point::x1(-(1.0 - w * w).sqrt()))
            })
            .collect();
        let k = 1.0 / 3f64.sqrt();
        let rep = c11_graph_check(&samples, k, 0.99, 1e-6).unwrap();
        assert!(rep.pass, "ratio {} vs constant {}", rep.worst_ratio, rep.constant);
        assert!((rep.constant - (2.0 + k).powi(3) / (2.0 * 0.99)).abs() < 1e-12);
    }

    #[test]
    fn affine_chart_has_zero_residual() {
        let samples: Vec<(f64, Point)> = (0..=50)
            .map(|i| {
                let w = i as f64 / 50.0;
                (w, Point::x1(0.25 * w - 1.0))
            })
            .collect();
        let rep = c11_graph_check(&samples, 0.25, 1.0, 1e-9).unwrap();
        assert!(rep.pass);
        assert!(rep.worst_ratio < 1e-9);
    }

    #[test]
    fn corner_chart_fails() {
        let samples: Vec<(f64, Point)> = (0..=100)
            .map(|i| {
                let w = -0.5 + i as f64 / 100.0;
                (w, Point::x1(w.abs()))
            })
            .collect();
        let rep = c11_graph_check(&samples, 1.0, 1.0, 1e-9).unwrap();
        assert!(!rep.pass);
        // worst pair straddles the corner
        let (a, b) = rep.witness.unwrap();
        assert!(a.min(b) < 0.0 && a.max(b) >= 0.0);
    }

    #[test]
    fn lipschitz_precondition_enforced() {
        let samples: Vec<(f64, Point)> = (0..=10)
            .map(|i| {
                let w = i as f64 / 10.0;
                (w, Point::x1(3.0 * w))
            })
            .collect();
        assert!(c11_graph_check(&samples, 1.0, 1.0, 1e-9).is_err());
    }
}
