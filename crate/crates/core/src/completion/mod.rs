//! Matrix completion solvers and their supporting types.

mod baseline;
mod bound;
mod config;
mod mask;
mod onestep;
mod qtnn;
mod weights;

pub use baseline::qnn_svt_baseline;
pub use bound::{bound_from_norms, step_bound_check, step_constant, theorem5_bound, STEP_BOUND_SLACK};
pub use config::{Method, SolverConfig, SolverReport, StepRecord, WeightParams};
pub use mask::Mask;
pub use onestep::{dwqtnn_complete, one_step, wqtnn_complete};
pub use qtnn::qtnn_complete;
pub use weights::{build_weights, frobenius, WeightSide, WeightSpec};

use crate::error::{Error, Result};
use crate::qmatrix::QMatrix;
use crate::qsvd::check_rank;

/// Runs `method` with `cfg`.
pub fn complete(method: Method, m: &QMatrix, mask: &Mask, cfg: &SolverConfig) -> Result<SolverReport> {
    match method {
        Method::Qtnn => qtnn_complete(m, mask, cfg),
        Method::Wqtnn => wqtnn_complete(m, mask, cfg),
        Method::Dwqtnn => dwqtnn_complete(m, mask, cfg),
        Method::QnnBaseline => qnn_svt_baseline(m, mask, cfg),
    }
}

/// Validates the inputs and returns `P(M)` with its Frobenius norm, the
/// scale used by every relative stopping test.
fn prepare(m: &QMatrix, mask: &Mask, cfg: &SolverConfig, truncated: bool) -> Result<(QMatrix, f64)> {
    cfg.validate()?;
    if mask.shape() != m.shape() {
        return Err(Error::DimensionMismatch { op: "complete", left: m.shape(), right: mask.shape() });
    }
    if mask.observed_count() == 0 {
        return Err(Error::EmptyMask);
    }
    if truncated {
        check_rank(cfg.rank, 1, m.rows().min(m.cols()))?;
    }
    let observed = mask.project(m)?;
    let scale = observed.frobenius_norm();
    Ok((observed, scale))
}

#[cfg(test)]
pub(crate) mod test_support {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::Mask;

    /// Each entry missing independently with probability `p`.
    pub fn random_mask(rows: usize, cols: usize, p: f64, seed: u64) -> Mask {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let observed = (0..rows * cols).map(|_| rng.random::<f64>() >= p).collect();
        Mask::from_observed(rows, cols, observed).unwrap()
    }
}
