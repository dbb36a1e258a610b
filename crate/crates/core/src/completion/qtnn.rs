//! Two-step QTNN solver: an outer loop refreshes the truncated factors
//! `C_l`, `D_l` from a QSVD of the current iterate, and an inner ADMM loop
//! solves `min ||X||_* - Re tr(C_l X D_l^H)` subject to the observations.

use std::time::Instant;

use super::config::{Method, SolverConfig, SolverReport};
use super::mask::Mask;
use super::prepare;
use crate::error::Result;
use crate::qmatrix::QMatrix;
use crate::qsvd::{qsvd, qsvt, truncated_from_qsvd};

/// Inner ADMM state for one outer iteration.
pub(crate) struct AdmmState {
    pub x: QMatrix,
    pub h: QMatrix,
    pub y: QMatrix,
    pub beta: f64,
}

impl AdmmState {
    pub fn new(start: &QMatrix, beta: f64) -> Self {
        Self { x: start.clone(), h: start.clone(), y: start.clone(), beta }
    }

    /// Proximal target `H_k - Y_k / beta_k` of the X-update.
    pub fn x_target(&self) -> QMatrix {
        let mut t = self.h.clone();
        t.axpy(-1.0 / self.beta, &self.y);
        t
    }

    /// One sweep; returns the primal residual `||X_{k+1} - H_{k+1}||_F`.
    pub fn step(&mut self, ch_d: &QMatrix, mask: &Mask, observed: &QMatrix, cfg: &SolverConfig) -> Result<f64> {
        let inv = 1.0 / self.beta;
        // X_{k+1} = D_{1/beta}(H_k - Y_k / beta)
        self.x = qsvt(&self.x_target(), inv)?;
        // H_{k+1} = X_{k+1} + (C^H D + Y_k) / beta, observed entries re-imposed
        let mut h = self.x.clone();
        h.axpy(inv, ch_d);
        h.axpy(inv, &self.y);
        mask.pin(&mut h, observed)?;
        self.h = h;
        // Y_{k+1} = Y_k + beta (X_{k+1} - H_{k+1})
        let gap = &self.x - &self.h;
        self.y.axpy(self.beta, &gap);
        self.beta = (cfg.rho * self.beta).min(cfg.step_max);
        Ok(gap.frobenius_norm())
    }
}

/// Completes `m` on the observation set `mask` with the QTNN model.
///
/// Only the observed entries of `m` are read. Non-convergence within
/// `max_outer` outer iterations is reported through `converged = false`.
pub fn qtnn_complete(m: &QMatrix, mask: &Mask, cfg: &SolverConfig) -> Result<SolverReport> {
    admm_complete(Method::Qtnn, m, mask, cfg, true)
}

/// Outer/inner driver shared with the untruncated baseline, which runs it
/// with a zero truncation term.
pub(crate) fn admm_complete(
    method: Method,
    m: &QMatrix,
    mask: &Mask,
    cfg: &SolverConfig,
    truncated: bool,
) -> Result<SolverReport> {
    let start = Instant::now();
    let (observed, scale) = prepare(m, mask, cfg, truncated)?;
    let mut report = SolverReport::new(method, observed.clone());
    if scale == 0.0 {
        report.converged = true;
        report.wall_time = start.elapsed();
        return Ok(report);
    }

    let rank = if truncated { cfg.rank } else { 0 };
    let mut x = observed.clone();
    for _ in 0..cfg.max_outer {
        let factors = truncated_from_qsvd(qsvd(&x)?, rank);
        report.objective_history.push(factors.sigma[rank..].iter().sum());
        let ch_d = if truncated { factors.truncated_product() } else { QMatrix::zeros(m.rows(), m.cols()) };

        let mut state = AdmmState::new(&x, cfg.step0);
        for _ in 0..cfg.max_inner {
            report.schedule.push(state.beta);
            let gap = state.step(&ch_d, mask, &observed, cfg)?;
            report.inner_iterations += 1;
            if gap / scale <= cfg.inner_tol {
                break;
            }
        }

        let mut next = state.x;
        mask.pin(&mut next, &observed)?;
        let residual = (&next - &x).frobenius_norm() / scale;
        x = next;
        report.outer_iterations += 1;
        report.residual_history.push(residual);
        if residual <= cfg.outer_tol {
            report.converged = true;
            break;
        }
    }
    report.recovered = x;
    report.wall_time = start.elapsed();
    Ok(report)
}
