//! Convex support envelopes: given anchor points with slopes satisfying
//! the pairwise support condition, the finite max of the tangent affine
//! functions is a convex Lipschitz function through every anchor.

use crate::error::{Error, Result};
use crate::geom::Point;

/// `g(x) = max_m [ t_m + <e*_m, x - e_m> ]` over the anchor set.
#[derive(Debug, Clone)]
pub struct SupportEnvelope {
    entries: Vec<(Point, f64, Point)>,
}

impl SupportEnvelope {
    pub fn eval(&self, x: &Point) -> f64 {
        self.entries
            .iter()
            .map(|(e, t, s)| t + s.dot(&(*x - *e)))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Lipschitz constant: the largest slope norm.
    pub fn lipschitz(&self) -> f64 {
        self.entries.iter().map(|(_, _, s)| s.norm()).fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Validate the support condition `t_m + <e*_m, e_n - e_m> <= t_n` for all
/// pairs and build the envelope. On violation the offending pair is named.
pub fn support_envelope(entries: &[(Point, f64, Point)]) -> Result<SupportEnvelope> {
    if entries.is_empty() {
        return Err(Error::invalid("empty anchor set"));
    }
    for (m, (e_m, t_m, s_m)) in entries.iter().enumerate() {
        for (n, (e_n, t_n, _)) in entries.iter().enumerate() {
            if m == n {
                continue;
            }
            let lhs = t_m + s_m.dot(&(*e_n - *e_m));
            if lhs > t_n + 1e-9 {
                return Err(Error::certification(
                    "support-condition",
                    format!("pair ({m}, {n}): {lhs:.9} > {t_n:.9}"),
                ));
            }
        }
    }
    Ok(SupportEnvelope {
        entries: entries.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_anchor_is_constant() {
        let g = support_envelope(&[(Point::x1(0.0), 0.0, Point::x1(0.0))]).unwrap();
        for i in -10..=10 {
            assert_eq!(g.eval(&Point::x1(i as f64 / 3.0)), 0.0);
        }
    }

    #[test]
    fn abs_value_reconstructed_from_its_tangents() {
        let mut entries = Vec::new();
        for i in -20..=20 {
            let x = i as f64 / 10.0;
            if i != 0 {
                entries.push((Point::x1(x), x.abs(), Point::x1(x.signum())));
            }
        }
        let g = support_envelope(&entries).unwrap();
        for i in 0..1000 {
            let x = -2.0 + 4.0 * i as f64 / 999.0;
            assert!((g.eval(&Point::x1(x)) - x.abs()).abs() < 1e-12, "x = {x}");
        }
        assert!((g.lipschitz() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn crossed_slopes_rejected() {
        // two anchors whose tangents overshoot each other
        let entries = vec![
            (Point::x1(0.0), 0.0, Point::x1(1.0)),
            (Point::x1(1.0), 0.0, Point::x1(-1.0)),
        ];
        assert!(support_envelope(&entries).is_err());
    }

    #[test]
    fn envelope_is_midpoint_convex_and_lipschitz() {
        let entries = vec![
            (Point::xy(0.0, 0.0), 0.0, Point::xy(0.0, 0.0)),
            (Point::xy(1.0, 0.0), 0.5, Point::xy(1.0, 0.0)),
            (Point::xy(0.0, 1.0), 0.5, Point::xy(0.0, 1.0)),
        ];
        let g = support_envelope(&entries).unwrap();
        let l = g.lipschitz();
        for i in 0..20 {
            for j in 0..20 {
                let p = Point::xy(-1.0 + i as f64 / 5.0, -1.0 + j as f64 / 5.0);
                let q = Point::xy(1.0 - j as f64 / 7.0, -1.0 + i as f64 / 4.0);
                let mid = (p + q).scale(0.5);
                assert!(g.eval(&mid) <= 0.5 * (g.eval(&p) + g.eval(&q)) + 1e-12);
                assert!((g.eval(&p) - g.eval(&q)).abs() <= l * p.dist(&q) + 1e-12);
            }
        }
    }
}
