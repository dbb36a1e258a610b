//! One-step weighted solvers. Each iteration takes a single gradient step on
//! the weighted truncated objective using the factors of the current iterate,
//! then re-imposes the observations.

use std::time::Instant;

use super::bound::bound_from_norms;
use super::config::{Method, SolverConfig, SolverReport, StepRecord};
use super::mask::Mask;
use super::prepare;
use super::weights::{build_weights, WeightSpec};
use crate::error::Result;
use crate::qmatrix::QMatrix;
use crate::qsvd::{qsvd, truncated_from_qsvd};

/// Completion with distinct weights: `W1` from `theta1` on the full-factor
/// term and `W2` from `theta2` on the truncated term.
pub fn dwqtnn_complete(m: &QMatrix, mask: &Mask, cfg: &SolverConfig) -> Result<SolverReport> {
    let w = &cfg.weights;
    let weights = build_weights(mask, w.theta1, w.theta2, w.side)?;
    one_step(Method::Dwqtnn, m, mask, cfg, &weights)
}

/// Completion with a single weight `W1 = W2` built from `theta1`.
pub fn wqtnn_complete(m: &QMatrix, mask: &Mask, cfg: &SolverConfig) -> Result<SolverReport> {
    let w = &cfg.weights;
    let weights = build_weights(mask, w.theta1, w.theta1, w.side)?;
    one_step(Method::Wqtnn, m, mask, cfg, &weights)
}

/// Shared iteration
/// `X_{k+1} = P(X_k - (W1 A^H B - W2 C^H D) / eps_k)`, `eps_{k+1} = min(rho eps_k, cap)`.
pub fn one_step(method: Method, m: &QMatrix, mask: &Mask, cfg: &SolverConfig, weights: &WeightSpec) -> Result<SolverReport> {
    let start = Instant::now();
    let (observed, scale) = prepare(m, mask, cfg, true)?;
    let mut report = SolverReport::new(method, observed.clone());
    let (n1, n2) = (weights.w1_norm(), weights.w2_norm());
    report.weight_norms = Some((n1, n2));
    if scale == 0.0 {
        report.converged = true;
        report.wall_time = start.elapsed();
        return Ok(report);
    }
    report.theorem5_bound = Some(bound_from_norms(
        cfg.step0,
        cfg.rho,
        cfg.outer_tol * scale,
        n1,
        n2,
        m.rows(),
        cfg.rank,
    )?);

    let mut x = observed.clone();
    let mut eps = cfg.step0;
    for _ in 0..cfg.max_outer {
        let factors = truncated_from_qsvd(qsvd(&x)?, cfg.rank);
        report.objective_history.push(factors.sigma[cfg.rank..].iter().sum());
        let mut delta = weights.apply(&weights.w1, &factors.full_product());
        delta.axpy(-1.0, &weights.apply(&weights.w2, &factors.truncated_product()));
        delta.scale_in_place(-1.0 / eps);
        report.schedule.push(eps);
        report.steps.push(StepRecord { eps, delta_norm: delta.frobenius_norm() });

        let mut next = &x + &delta;
        mask.pin(&mut next, &observed)?;
        let residual = (&next - &x).frobenius_norm() / scale;
        x = next;
        report.outer_iterations += 1;
        report.inner_iterations += 1;
        report.residual_history.push(residual);
        eps = (cfg.rho * eps).min(cfg.step_max);
        if residual <= cfg.outer_tol {
            report.converged = true;
            break;
        }
    }
    report.recovered = x;
    report.wall_time = start.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion::bound::step_bound_check;
    use crate::completion::test_support::random_mask;
    use crate::synth::{low_rank, random_qmatrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fully_observed_converges_immediately() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = random_qmatrix(5, 6, &mut rng);
        for f in [dwqtnn_complete, wqtnn_complete] {
            let rep = f(&m, &Mask::full(5, 6), &SolverConfig::dwqtnn(2)).unwrap();
            assert_eq!(rep.recovered, m);
            assert_eq!(rep.outer_iterations, 1);
            assert!(rep.converged);
        }
    }

    #[test]
    fn identity_weights_fully_observed() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_qmatrix(4, 4, &mut rng);
        let mut cfg = SolverConfig::dwqtnn(1);
        cfg.weights.theta1 = 0.0;
        let rep = wqtnn_complete(&m, &Mask::full(4, 4), &cfg).unwrap();
        assert_eq!(rep.recovered, m);
        assert!(step_bound_check(&rep, &[1.0; 4], &[1.0; 4], 1).unwrap());
    }

    #[test]
    fn equal_thetas_give_identical_trajectories() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let m = low_rank(20, 16, 2, 50.0, &mut rng);
        let mask = random_mask(20, 16, 0.5, 9);
        let mut cfg = SolverConfig::dwqtnn(2);
        cfg.weights.theta2 = cfg.weights.theta1;
        cfg.max_outer = 25;
        let d = dwqtnn_complete(&m, &mask, &cfg).unwrap();
        let w = wqtnn_complete(&m, &mask, &cfg).unwrap();
        assert_eq!(d.recovered, w.recovered);
        assert_eq!(d.steps, w.steps);
        assert_eq!(d.residual_history, w.residual_history);
    }

    #[test]
    fn schedule_is_capped_and_nondecreasing() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let m = low_rank(10, 10, 1, 5.0, &mut rng);
        let mask = random_mask(10, 10, 0.3, 1);
        let mut cfg = SolverConfig::dwqtnn(1);
        cfg.step_max = 0.01;
        cfg.max_outer = 30;
        let rep = dwqtnn_complete(&m, &mask, &cfg).unwrap();
        assert!(rep.schedule.windows(2).all(|w| w[0] <= w[1]));
        assert!(rep.schedule.iter().all(|&e| e <= 0.01));
        assert!(mask.agrees(&rep.recovered, &m));
    }
}
