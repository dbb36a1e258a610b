use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::weights::WeightSide;
use crate::error::{Error, Result};
use crate::qmatrix::QMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "qtnn")]
    Qtnn,
    #[serde(rename = "wqtnn")]
    Wqtnn,
    #[serde(rename = "dwqtnn")]
    Dwqtnn,
    #[serde(rename = "qnn-baseline")]
    QnnBaseline,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Qtnn, Method::Wqtnn, Method::Dwqtnn, Method::QnnBaseline];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Qtnn => "qtnn",
            Method::Wqtnn => "wqtnn",
            Method::Dwqtnn => "dwqtnn",
            Method::QnnBaseline => "qnn-baseline",
        }
    }

    /// Whether the method uses a truncation rank.
    pub fn is_truncated(self) -> bool {
        !matches!(self, Method::QnnBaseline)
    }

    /// Published default configuration for this method.
    pub fn default_config(self, rank: usize) -> SolverConfig {
        match self {
            Method::Qtnn => SolverConfig::qtnn(rank),
            Method::Wqtnn | Method::Dwqtnn => SolverConfig::dwqtnn(rank),
            Method::QnnBaseline => SolverConfig::qnn_baseline(),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown method `{s}`")))
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Weight scales; the diagonals themselves are derived from the mask at solve time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightParams {
    pub theta1: f64,
    pub theta2: f64,
    pub side: WeightSide,
}

impl Default for WeightParams {
    fn default() -> Self {
        Self { theta1: 2.0, theta2: 1.5, side: WeightSide::Rows }
    }
}

/// Solver tunables.
///
/// `step0` / `step_max` are the penalty seed and cap (`beta0`, `beta_max`) for
/// QTNN and the baseline, and the step-schedule seed and cap (`eps1`,
/// `eps_max`) for the one-step solvers, whose step size is `1 / eps_k`.
/// The one-step seed is scale sensitive: `0.0015` suits data in `[0, 255]`;
/// unit-scale data usually wants a proportionally larger value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub rank: usize,
    pub rho: f64,
    pub step0: f64,
    pub step_max: f64,
    pub outer_tol: f64,
    pub inner_tol: f64,
    pub max_outer: usize,
    pub max_inner: usize,
    pub weights: WeightParams,
    pub seed: u64,
}

impl SolverConfig {
    pub fn qtnn(rank: usize) -> Self {
        Self {
            rank,
            rho: 1.25,
            step0: 0.005,
            step_max: 1e7,
            outer_tol: 1e-3,
            inner_tol: 1e-4,
            max_outer: 100,
            max_inner: 50,
            weights: WeightParams::default(),
            seed: 0,
        }
    }

    pub fn dwqtnn(rank: usize) -> Self {
        Self {
            rank,
            rho: 1.2,
            step0: 0.0015,
            step_max: 1e7,
            outer_tol: 1e-4,
            inner_tol: 1e-4,
            max_outer: 500,
            max_inner: 1,
            weights: WeightParams::default(),
            seed: 0,
        }
    }

    pub fn qnn_baseline() -> Self {
        Self { rank: 0, ..Self::qtnn(0) }
    }

    /// Checks the schedule and tolerance invariants (rank is checked by the solvers).
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.rho > 1.0 && self.rho.is_finite()) {
            return bad(format!("rho must exceed 1, got {}", self.rho));
        }
        if !(self.step0 > 0.0 && self.step0 <= self.step_max && self.step_max.is_finite()) {
            return bad(format!("need 0 < step0 <= step_max, got {} and {}", self.step0, self.step_max));
        }
        if !(self.outer_tol > 0.0 && self.inner_tol > 0.0) {
            return bad("tolerances must be positive".into());
        }
        if self.max_outer == 0 || self.max_inner == 0 {
            return bad("iteration limits must be positive".into());
        }
        if !(self.weights.theta1 >= 0.0 && self.weights.theta2 >= 0.0) {
            return bad("weight scales must be nonnegative".into());
        }
        Ok(())
    }
}

/// One iteration of a one-step solver, kept for the step-bound audit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    /// `eps_k`; the step size is `1 / eps_k`.
    pub eps: f64,
    /// Frobenius norm of the unconstrained update, before observed entries are re-imposed.
    pub delta_norm: f64,
}

/// Outcome of a solver run.
#[derive(Clone, Debug)]
pub struct SolverReport {
    pub method: Method,
    pub recovered: QMatrix,
    pub outer_iterations: usize,
    /// Total inner ADMM sweeps (QTNN only; equals `outer_iterations` otherwise).
    pub inner_iterations: usize,
    /// `||X_{k+1} - X_k||_F / ||P(M)||_F` per outer step.
    pub residual_history: Vec<f64>,
    /// Truncated nuclear norm of each iterate (nuclear norm for the baseline).
    pub objective_history: Vec<f64>,
    /// Penalty (`beta_k`) or step-schedule (`eps_k`) values in use at each sweep.
    pub schedule: Vec<f64>,
    /// Per-iteration step records (one-step solvers only).
    pub steps: Vec<StepRecord>,
    pub wall_time: Duration,
    pub converged: bool,
    /// Iteration bound for the run's schedule and weights (one-step solvers only).
    pub theorem5_bound: Option<u64>,
    /// Frobenius norms of `W1`, `W2` used by the run (one-step solvers only).
    pub weight_norms: Option<(f64, f64)>,
}

impl SolverReport {
    pub(crate) fn new(method: Method, recovered: QMatrix) -> Self {
        Self {
            method,
            recovered,
            outer_iterations: 0,
            inner_iterations: 0,
            residual_history: Vec::new(),
            objective_history: Vec::new(),
            schedule: Vec::new(),
            steps: Vec::new(),
            wall_time: Duration::ZERO,
            converged: false,
            theorem5_bound: None,
            weight_norms: None,
        }
    }

    pub fn final_residual(&self) -> Option<f64> {
        self.residual_history.last().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_published_settings() {
        let q = SolverConfig::qtnn(3);
        assert_eq!((q.rho, q.step0, q.step_max, q.outer_tol), (1.25, 0.005, 1e7, 1e-3));
        let d = SolverConfig::dwqtnn(3);
        assert_eq!((d.rho, d.step0, d.step_max, d.outer_tol), (1.2, 0.0015, 1e7, 1e-4));
        assert_eq!((d.weights.theta1, d.weights.theta2), (2.0, 1.5));
        q.validate().unwrap();
        d.validate().unwrap();
    }

    #[test]
    fn validation_rejects_bad_schedules() {
        let mut c = SolverConfig::qtnn(1);
        c.rho = 1.0;
        assert!(c.validate().is_err());
        let mut c = SolverConfig::qtnn(1);
        c.step0 = 1e8;
        assert!(c.validate().is_err());
        let mut c = SolverConfig::qtnn(1);
        c.outer_tol = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert!("tnnr".parse::<Method>().is_err());
    }
}
