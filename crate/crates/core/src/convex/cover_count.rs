//! Explicit grid nets of the slope ball `B(0, 2L)` in ℝ^k: the cardinality
//! bound behind the finite DC-surface covers of singular sets. The grid
//! pitch `eps/(2 sqrt(k))` makes every cell half-diagonal at most `eps/4`,
//! so the grid is an (eps/2)-net; a seeded random probe certifies it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

const PROBE_COUNT: usize = 100_000;
const PROBE_SEED: u64 = 0x5eed_0002;

#[derive(Debug, Clone, Serialize)]
pub struct CoverCount {
    /// Net cardinality: (ceil(8 L sqrt(k) / eps) + 1)^k.
    pub n: usize,
    pub per_axis: usize,
    pub spacing: f64,
    /// Largest probe distance to the net (certified <= eps/2 + 1e-9).
    pub worst_probe_gap: f64,
}

pub fn dc_cover_count(k: usize, l: f64, eps: f64) -> Result<CoverCount> {
    if !(1..=3).contains(&k) {
        return Err(Error::invalid("k must lie in 1..=3"));
    }
    if l <= 0.0 || eps <= 0.0 {
        return Err(Error::invalid("need L > 0 and eps > 0"));
    }
    let per_axis = (8.0 * l * (k as f64).sqrt() / eps).ceil() as usize + 1;
    let n = per_axis.pow(k as u32);
    let spacing = if per_axis > 1 {
        4.0 * l / (per_axis - 1) as f64
    } else {
        0.0
    };
    // grid points over [-2L, 2L]^k
    let coord = |j: usize| -2.0 * l + j as f64 * spacing;
    let mut net: Vec<Vec<f64>> = Vec::with_capacity(n);
    match k {
        1 => {
            for i in 0..per_axis {
                net.push(vec![coord(i)]);
            }
        }
        2 => {
            for i in 0..per_axis {
                for j in 0..per_axis {
                    net.push(vec![coord(i), coord(j)]);
                }
            }
        }
        _ => {
            for i in 0..per_axis {
                for j in 0..per_axis {
                    for h in 0..per_axis {
                        net.push(vec![coord(i), coord(j), coord(h)]);
                    }
                }
            }
        }
    }
    // probe certificate over the ball of radius 2L
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..PROBE_COUNT {
        let p: Vec<f64> = loop {
            let cand: Vec<f64> = (0..k).map(|_| rng.gen_range(-2.0 * l..2.0 * l)).collect();
            if cand.iter().map(|x| x * x).sum::<f64>() <= 4.0 * l * l {
                break cand;
            }
        };
        let d = net
            .iter()
            .map(|q| {
                p.iter()
                    .zip(q)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(d);
    }
    if worst > eps / 2.0 + 1e-9 {
        return Err(Error::certification(
            "net-probe",
            format!("probe gap {worst} exceeds eps/2 = {}", eps / 2.0),
        ));
    }
    Ok(CoverCount {
        n,
        per_axis,
        spacing,
        worst_probe_gap: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_cases() {
        let c = dc_cover_count(1, 1.0, 1.0).unwrap();
        assert_eq!(c.n, 9);
        assert_eq!(c.per_axis, 9);
        assert!((c.spacing - 0.5).abs() < 1e-12);

        let c = dc_cover_count(1, 1.0, 4.0).unwrap();
        assert_eq!(c.n, 3);

        let c = dc_cover_count(2, 1.0, 8.0 * 2f64.sqrt()).unwrap();
        assert_eq!(c.n, 4);
    }

    #[test]
    fn probe_gap_within_half_eps() {
        let c = dc_cover_count(2, 1.5, 0.8).unwrap();
        assert!(c.worst_probe_gap <= 0.4 + 1e-9);
    }
}
