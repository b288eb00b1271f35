//! Curve-level reach certificates: the lower bound
//! `rho = min(delta(1/(2L))/2, 1/(8L))` from the C^{1,1} parameter and the
//! continuity modulus, the quasi-arc property, and component
//! classification.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::reach::violations;

use super::arc::ArcCurve;

#[derive(Debug, Clone, Serialize)]
pub struct QuasiArcReport {
    /// (eps, delta(eps)) modulus table.
    pub table: Vec<(f64, f64)>,
    pub pass: bool,
    /// Vacuous pass for closed curves.
    pub vacuous: bool,
    /// delta values at or below this collapse threshold fail the check.
    pub collapse_threshold: f64,
    /// Failure witness: knot indices (i, j, k) in parameter order with
    /// |x_i - x_j| >= eps yet |x_i - x_k| below threshold.
    pub witness: Option<(usize, usize, usize)>,
}

/// Sample the quasi-arc modulus: for each `eps`, the smallest separation
/// `|x_1 - x_3|` over knot triples in parameter order whose inner span
/// already moved at least `eps` away from `x_1`. The curve fails when the
/// modulus collapses below sampling resolution.
pub fn quasi_arc_check(curve: &ArcCurve, eps_grid: &[f64]) -> Result<QuasiArcReport> {
    if eps_grid.is_empty() {
        return Err(Error::invalid("need at least one epsilon"));
    }
    let collapse = 2.0 * curve.pitch();
    if curve.is_closed() {
        return Ok(QuasiArcReport {
            table: eps_grid.iter().map(|&e| (e, f64::INFINITY)).collect(),
            pass: true,
            vacuous: true,
            collapse_threshold: collapse,
            witness: None,
        });
    }
    let pts = curve.points();
    let n = pts.len();
    let mut table = Vec::with_capacity(eps_grid.len());
    let mut pass = true;
    let mut witness = None;
    for &eps in eps_grid {
        let mut delta = f64::INFINITY;
        let mut wit = None;
        // forward: x1 = pts[i], inner point ahead, x3 further ahead
        for (start, step) in [(0usize, 1isize), (n - 1, -1isize)] {
            let mut i = start as isize;
            while i >= 0 && (i as usize) < n {
                let x1 = pts[i as usize];
                let mut runmax = 0.0f64;
                let mut inner_at: Option<usize> = None;
                let mut j = i + step;
                while j >= 0 && (j as usize) < n {
                    let d1 = x1.dist(&pts[j as usize]);
                    if inner_at.is_some() {
                        let sep = d1;
                        if sep < delta {
                            delta = sep;
                            wit = Some((i as usize, inner_at.unwrap(), j as usize));
                        }
                    }
                    if d1 >= eps && inner_at.is_none() {
                        runmax = runmax.max(d1);
                        inner_at = Some(j as usize);
                    }
                    j += step;
                }
                i += step;
            }
        }
        if delta <= collapse {
            pass = false;
            if witness.is_none() {
                witness = wit;
            }
        }
        table.push((eps, delta));
    }
    Ok(QuasiArcReport {
        table,
        pass,
        vacuous: false,
        collapse_threshold: collapse,
        witness,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveReachCertificate {
    pub l_hat: f64,
    /// Intrinsic threshold 1/(2 l_hat) fed to the modulus.
    pub eps_used: f64,
    /// Sampled continuity modulus, including the pair (eps_used, delta).
    pub delta_of_eps: Vec<(f64, f64)>,
    /// min(delta/2, 1/(8 l_hat)); +inf for straight (L = 0) curves.
    pub rho_bound: f64,
    pub quasi_arc: QuasiArcReport,
    /// Consistency: the curve sample passes the tangent-inequality check
    /// at rho_bound.
    pub violations_empty: bool,
}

/// Certified reach lower bound of an arc-length curve.
pub fn curve_reach_bound(curve: &ArcCurve) -> Result<CurveReachCertificate> {
    let l_hat = curve.estimate_l();
    let (eps_used, rho_bound, delta_table) = if l_hat <= 1e-12 {
        (f64::INFINITY, f64::INFINITY, vec![(f64::INFINITY, f64::INFINITY)])
    } else {
        let eps = 1.0 / (2.0 * l_hat);
        let delta = curve.continuity_modulus(eps);
        let rho = (delta / 2.0).min(1.0 / (8.0 * l_hat));
        let mut table = vec![(eps, delta)];
        for factor in [0.5, 2.0] {
            let e = eps * factor;
            table.push((e, curve.continuity_modulus(e)));
        }
        table.sort_by(|a, b| a.0.total_cmp(&b.0));
        (eps, rho, table)
    };
    let diam_frac = {
        let pts = curve.points();
        let mut far: f64 = 0.0;
        for p in pts.iter().step_by((pts.len() / 64).max(1)) {
            far = far.max(p.dist(&pts[0]));
        }
        far
    };
    let eps_grid: Vec<f64> = [0.05, 0.1, 0.25, 0.5]
        .iter()
        .map(|f| f * diam_frac)
        .filter(|e| *e > 0.0)
        .collect();
    let quasi = quasi_arc_check(
        curve,
        if eps_grid.is_empty() { &[0.1] } else { &eps_grid },
    )?;
    let violations_empty = if rho_bound.is_finite() {
        let set = curve.as_sampled_set()?;
        violations(&set, rho_bound)?.is_empty()
    } else {
        true
    };
    Ok(CurveReachCertificate {
        l_hat,
        eps_used,
        delta_of_eps: delta_table,
        rho_bound,
        quasi_arc: quasi,
        violations_empty,
    })
}

/// The four connected one-dimensional shapes compatible with a reach
/// certificate, and the failure verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ComponentClass {
    SimpleArc,
    ClosedSimple,
    HalflineType,
    LineType,
    /// Open-ended curve whose quasi-arc modulus collapses.
    NotPositiveReach,
}

/// Classify a connected curve sample by its end structure; open-ended
/// types additionally require the quasi-arc certificate and monotone
/// escape near the open ends.
pub fn classify_component(curve: &ArcCurve) -> Result<ComponentClass> {
    if curve.is_closed() {
        return Ok(ComponentClass::ClosedSimple);
    }
    let (open_lo, open_hi) = curve.open_ends();
    if !open_lo && !open_hi {
        return Ok(ComponentClass::SimpleArc);
    }
    // escape condition at flagged ends: |gamma| grows monotonically over
    // the outer 10% of knots
    let pts = curve.points();
    let n = pts.len();
    let tail = (n / 10).max(2);
    if open_hi {
        for i in n - tail..n - 1 {
            if pts[i + 1].norm() <= pts[i].norm() - 1e-9 {
                return Err(Error::certification(
                    "escape",
                    format!("norm not increasing toward the open end at knot {i}"),
                ));
            }
        }
    }
    if open_lo {
        for i in 1..tail {
            if pts[i - 1].norm() <= pts[i].norm() - 1e-9 {
                return Err(Error::certification(
                    "escape",
                    format!("norm not increasing toward the open start at knot {i}"),
                ));
            }
        }
    }
    let diam = pts[0].dist(&pts[n / 2]).max(pts[0].dist(&pts[n - 1])).max(1e-9);
    let quasi = quasi_arc_check(curve, &[0.1 * diam, 0.25 * diam, 0.5 * diam])?;
    if !quasi.pass {
        return Ok(ComponentClass::NotPositiveReach);
    }
    Ok(if open_lo && open_hi {
        ComponentClass::LineType
    } else {
        ComponentClass::HalflineType
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::arc::{circle_curve, segment_curve};
    use crate::geom::Point;

    #[test]
    fn circle_certificate_matches_the_bound() {
        let c = circle_curve(1.0, 6283);
        let cert = curve_reach_bound(&c).unwrap();
        assert!((cert.l_hat - 1.0).abs() < 1e-3);
        let delta = cert.delta_of_eps.iter().find(|(e, _)| (*e - cert.eps_used).abs() < 1e-12);
        let (_, d) = delta.unwrap();
        assert!((d - 2.0 * (0.25f64).sin()).abs() < 1e-3);
        assert!((cert.rho_bound - 0.125).abs() < 1e-4, "rho {}", cert.rho_bound);
        assert!(cert.violations_empty);
        assert!(cert.quasi_arc.vacuous && cert.quasi_arc.pass);
    }

    #[test]
    fn segment_certificate_is_unbounded() {
        let s = segment_curve(Point::xy(0.0, 0.0), Point::xy(1.0, 0.0), 200);
        let cert = curve_reach_bound(&s).unwrap();
        assert!(cert.rho_bound.is_infinite());
        assert!(cert.violations_empty);
    }

    #[test]
    fn segment_quasi_arc_modulus_is_linear() {
        let s = segment_curve(Point::xy(0.0, 0.0), Point::xy(1.0, 0.0), 400);
        let rep = quasi_arc_check(&s, &[0.25]).unwrap();
        assert!(rep.pass);
        let (_, delta) = rep.table[0];
        assert!((delta - 0.25).abs() < 5e-3, "delta {delta}");
    }

    #[test]
    fn component_classification() {
        assert_eq!(
            classify_component(&circle_curve(1.0, 200)).unwrap(),
            ComponentClass::ClosedSimple
        );
        assert_eq!(
            classify_component(&segment_curve(Point::xy(0.0, 0.0), Point::xy(1.0, 0.0), 100))
                .unwrap(),
            ComponentClass::SimpleArc
        );
        // truncated parabola graph, both ends escaping
        let n = 2000;
        let mut knots = vec![0.0];
        let mut pts = vec![Point::xy(-10.0, 100.0)];
        for i in 1..=n {
            let x = -10.0 + 20.0 * i as f64 / n as f64;
            let p = Point::xy(x, x * x);
            let prev = pts[i - 1];
            knots.push(knots[i - 1] + p.dist(&prev));
            pts.push(p);
        }
        let parabola = ArcCurve::new(2, knots, pts, false, (true, true)).unwrap();
        assert_eq!(
            classify_component(&parabola).unwrap(),
            ComponentClass::LineType
        );
    }
}
