//! Untruncated comparison solver: nuclear-norm minimization under the
//! observation constraints, using the same ADMM driver and stopping rules as
//! QTNN with the truncation term removed.

use super::config::{Method, SolverConfig, SolverReport};
use super::mask::Mask;
use super::qtnn::admm_complete;
use crate::error::Result;
use crate::qmatrix::QMatrix;

/// Minimizes `||X||_*` subject to the observations. `cfg.rank` is ignored.
pub fn qnn_svt_baseline(m: &QMatrix, mask: &Mask, cfg: &SolverConfig) -> Result<SolverReport> {
    admm_complete(Method::QnnBaseline, m, mask, cfg, false)
}
