use super::config::SolverReport;
use super::weights::frobenius;
use crate::error::{Error, Result};

/// Slack allowed by [`step_bound_check`].
pub const STEP_BOUND_SLACK: f64 = 1e-8;

/// Constant `c = ||W1||_F sqrt(M) + ||W2||_F sqrt(r)` bounding every
/// unconstrained one-step update as `||dX_k||_F <= c / eps_k`.
pub fn step_constant(w1_norm: f64, w2_norm: f64, rows: usize, r: usize) -> f64 {
    w1_norm * (rows as f64).sqrt() + w2_norm * (r as f64).sqrt()
}

/// Smallest iteration index `k >= 1` whose step bound `c / (rho^(k-1) eps1)`
/// drops to `tol`: `ceil(1 - (ln(eps1 tol) - ln c) / ln rho)`.
///
/// `tol` is an absolute step tolerance. Assumes the schedule does not hit its cap.
pub fn theorem5_bound(eps1: f64, rho: f64, tol: f64, w1: &[f64], w2: &[f64], rows: usize, r: usize) -> Result<u64> {
    bound_from_norms(eps1, rho, tol, frobenius(w1), frobenius(w2), rows, r)
}

pub fn bound_from_norms(eps1: f64, rho: f64, tol: f64, w1_norm: f64, w2_norm: f64, rows: usize, r: usize) -> Result<u64> {
    if !(eps1 > 0.0 && rho > 1.0 && tol > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "bound needs eps1 > 0, rho > 1, tol > 0 (got {eps1}, {rho}, {tol})"
        )));
    }
    let c = step_constant(w1_norm, w2_norm, rows, r);
    if c == 0.0 {
        return Ok(1);
    }
    let k = 1.0 - ((eps1 * tol).ln() - c.ln()) / rho.ln();
    Ok(k.ceil().max(1.0) as u64)
}

/// True iff every recorded unconstrained step satisfies
/// `||dX_k||_F <= (||W1||_F sqrt(M) + ||W2||_F sqrt(r)) / eps_k + 1e-8`.
pub fn step_bound_check(report: &SolverReport, w1: &[f64], w2: &[f64], r: usize) -> Result<bool> {
    if report.steps.is_empty() {
        return if report.outer_iterations == 0 { Ok(true) } else { Err(Error::MissingHistory) };
    }
    let c = step_constant(frobenius(w1), frobenius(w2), report.recovered.rows(), r);
    Ok(report.steps.iter().all(|s| s.delta_norm <= c / s.eps + STEP_BOUND_SLACK))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion::config::{Method, StepRecord};
    use crate::qmatrix::QMatrix;

    #[test]
    fn logs_cancel_at_unit_ratio() {
        // eps1 * tol == c and rho = e give exactly one iteration
        let w1 = [1.0; 4];
        let w2 = [1.0; 4];
        let c = step_constant(2.0, 2.0, 4, 1);
        assert_eq!(theorem5_bound(1.0, std::f64::consts::E, c, &w1, &w2, 4, 1).unwrap(), 1);
    }

    #[test]
    fn faster_schedule_needs_fewer_iterations() {
        let w = [1.5; 10];
        let slow = theorem5_bound(0.01, 1.2, 1e-3, &w, &w, 10, 2).unwrap();
        let fast = theorem5_bound(0.01, 2.4, 1e-3, &w, &w, 10, 2).unwrap();
        assert!(fast < slow, "{fast} !< {slow}");
    }

    #[test]
    fn published_defaults() {
        // independent evaluation: c = 3 sqrt(300) sqrt(300) + 2.25 sqrt(300) sqrt(9)
        // = 1016.9134295108993, 1 - (ln(1.5e-7) - ln c) / ln 1.2 = 125.1606...
        let w1 = vec![3.0; 300];
        let w2 = vec![2.25; 300];
        assert_eq!(theorem5_bound(0.0015, 1.2, 1e-4, &w1, &w2, 300, 9).unwrap(), 126);
        assert!((step_constant(frobenius(&w1), frobenius(&w2), 300, 9) - 1016.9134295108993).abs() < 1e-9);
    }

    #[test]
    fn invalid_inputs() {
        assert!(theorem5_bound(0.0, 1.2, 1e-4, &[1.0], &[1.0], 1, 1).is_err());
        assert!(theorem5_bound(1.0, 1.0, 1e-4, &[1.0], &[1.0], 1, 1).is_err());
    }

    #[test]
    fn step_check_edge_cases() {
        let mut report = SolverReport::new(Method::Dwqtnn, QMatrix::zeros(4, 4));
        assert!(step_bound_check(&report, &[1.0; 4], &[1.0; 4], 1).unwrap());
        report.outer_iterations = 3;
        assert!(matches!(step_bound_check(&report, &[1.0; 4], &[1.0; 4], 1), Err(Error::MissingHistory)));
        // identity weights: c = sqrt(4) sqrt(4) + sqrt(4) sqrt(1) = 6
        report.steps = vec![StepRecord { eps: 2.0, delta_norm: 3.0 }];
        assert!(step_bound_check(&report, &[1.0; 4], &[1.0; 4], 1).unwrap());
        report.steps.push(StepRecord { eps: 2.0, delta_norm: 3.1 });
        assert!(!step_bound_check(&report, &[1.0; 4], &[1.0; 4], 1).unwrap());
    }
}
