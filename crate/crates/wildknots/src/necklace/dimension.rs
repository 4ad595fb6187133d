//! Partition-function estimate of the limit-set dimension.
//!
//! At depth `m` the beads cover the limit set by balls; the estimate solves
//! `sum_i (diam_i / D)^s = 1` over the depth-`m` beads by bisection, with
//! `D` the largest stage-0 bead diameter. Normalizing by `D` makes the
//! equation scale-covariant: rescaling the whole configuration leaves every
//! ratio, hence the estimate, unchanged.

use super::{Necklace, NecklaceError};

#[derive(Debug, Clone)]
pub struct DimensionEstimate {
    pub s_hat: f64,
    pub per_depth: Vec<(usize, f64)>,
    pub converged: bool,
}

/// Estimate the limit-set dimension from the bead radii at the given
/// depths (at least two). `convergence_tol` decides the `converged` flag
/// from the last two per-depth values.
pub fn dimension_estimate(
    neck: &Necklace,
    depths: &[usize],
    convergence_tol: f64,
) -> Result<DimensionEstimate, NecklaceError> {
    assert_eq!(neck.stage(), 0, "dimension estimate starts from stage 0");
    let mut depths: Vec<usize> = depths.to_vec();
    depths.sort_unstable();
    depths.dedup();
    if depths.len() < 2 {
        return Err(NecklaceError::NotEnoughDepths);
    }
    let dim = neck.generators()[0].dim() as f64;
    let scale = 2.0 * neck.max_radius();

    let mut per_depth = Vec::with_capacity(depths.len());
    let mut current = neck.clone();
    let max_depth = *depths.last().unwrap();
    for depth in 0..=max_depth {
        if depth > 0 {
            current = current.build_stage(0.0)?;
        }
        if !depths.contains(&depth) {
            continue;
        }
        let ratios: Vec<f64> = current
            .beads()
            .iter()
            .map(|b| 2.0 * b.ball.radius() / scale)
            .collect();
        let f = |s: f64| -> f64 { ratios.iter().map(|r| r.powf(s)).sum::<f64>() - 1.0 };
        if !(f(0.0) > 0.0 && f(dim) < 0.0) {
            return Err(NecklaceError::NonBracketing { depth });
        }
        let (mut lo, mut hi) = (0.0, dim);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-13 {
                break;
            }
        }
        per_depth.push((depth, 0.5 * (lo + hi)));
    }

    let n = per_depth.len();
    let s_hat = per_depth[n - 1].1;
    let converged = (per_depth[n - 1].1 - per_depth[n - 2].1).abs() < convergence_tol;
    Ok(DimensionEstimate {
        s_hat,
        per_depth,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::Ball;
    use crate::necklace::{Necklace, ThreadSample};

    #[test]
    fn requires_two_depths() {
        let neck = Necklace::symmetric_circle(3, 0.5, 120).unwrap();
        assert!(matches!(
            dimension_estimate(&neck, &[4], 1e-2),
            Err(NecklaceError::NotEnoughDepths)
        ));
    }

    #[test]
    fn symmetric_estimate_in_range_and_monotone_settling() {
        let neck = Necklace::symmetric_circle(3, 0.5, 120).unwrap();
        let est = dimension_estimate(&neck, &[2, 3, 4, 5, 6], 1e-2).unwrap();
        assert!(est.s_hat > 0.0 && est.s_hat < 3.0);
        // deeper estimates shrink toward the limit for this configuration
        for w in est.per_depth.windows(2) {
            assert!(w[1].1 <= w[0].1 + 1e-9);
        }
    }

    #[test]
    fn scaling_the_configuration_keeps_the_estimate() {
        let neck = Necklace::symmetric_circle(3, 0.5, 120).unwrap();
        let lambda = 7.3;
        let scaled_balls = neck
            .beads()
            .iter()
            .map(|b| {
                Ball::new(
                    b.ball.center().iter().map(|x| lambda * x).collect(),
                    lambda * b.ball.radius(),
                )
                .unwrap()
            })
            .collect();
        let scaled_thread = ThreadSample::new(
            neck.thread()
                .unwrap()
                .points()
                .iter()
                .map(|p| p.iter().map(|x| lambda * x).collect())
                .collect(),
            None,
        )
        .unwrap();
        let scaled = Necklace::stage0(Some(scaled_thread), scaled_balls, 1e-9).unwrap();

        let a = dimension_estimate(&neck, &[2, 3, 4], 1e-2).unwrap();
        let b = dimension_estimate(&scaled, &[2, 3, 4], 1e-2).unwrap();
        for (x, y) in a.per_depth.iter().zip(&b.per_depth) {
            assert!((x.1 - y.1).abs() < 1e-9);
        }
    }
}
