//! Quaternion singular value decomposition through the complex adjoint,
//! singular value thresholding, and the truncated factors used by the
//! completion solvers.
//!
//! The adjoint `Ac` of an `M x N` quaternion matrix has every singular value
//! twice. Its singular subspaces are closed under the antilinear map
//! `J: [a; b] -> [-conj(b); conj(a)]`, and a complex column `[a; b]`
//! corresponds to the quaternion column `a - conj(b) j`. For a cluster of
//! equal singular values the complex SVD may return any orthonormal basis, so
//! quaternion columns are picked by pivoted Gram-Schmidt against the
//! `J`-closed span of the columns already accepted. The matching right vectors
//! receive the same coefficients, which keeps `A v = sigma u`.

use faer::{c64, Mat, MatRef};

use crate::adjoint::embed;
use crate::error::{Error, Result};
use crate::qmatrix::QMatrix;
use crate::quaternion::Quaternion;

/// Reconstruction tolerance, relative to `max(1, ||A||_F)`.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;
/// Orthonormality tolerance for [`trace_functional`] inputs.
pub const ORTHONORMAL_TOL: f64 = 1e-8;

/// `A = U diag(sigma) V^H` with unitary `U` (`M x M`) and `V` (`N x N`).
#[derive(Clone, Debug)]
pub struct QsvdFactors {
    pub u: QMatrix,
    /// Nonincreasing, nonnegative, length `min(M, N)`.
    pub sigma: Vec<f64>,
    pub v: QMatrix,
}

impl QsvdFactors {
    /// Numerical rank: singular values above `1e-9 * sigma_max * max(M, N)`.
    pub fn rank(&self) -> usize {
        let smax = self.sigma.first().copied().unwrap_or(0.0);
        let dim = self.u.rows().max(self.v.rows()) as f64;
        let tol = 1e-9 * smax * dim;
        self.sigma.iter().filter(|&&s| s > tol).count()
    }

    pub fn nuclear_norm(&self) -> f64 {
        self.sigma.iter().sum()
    }

    /// `U[:, ..k] diag(weights) V[:, ..k]^H` for `k = weights.len()`.
    pub fn weighted_product(&self, weights: &[f64]) -> QMatrix {
        let k = weights.len();
        if k == 0 {
            return QMatrix::zeros(self.u.rows(), self.v.rows());
        }
        self.u
            .columns(0..k)
            .scale_cols(weights)
            .matmul(&self.v.columns(0..k).conj_transpose())
            .expect("factor shapes agree")
    }

    pub fn reconstruct(&self) -> QMatrix {
        self.weighted_product(&self.sigma)
    }
}

/// Factors `A`, `B`, `C`, `D` of one truncation step.
///
/// With `k = min(M, N)`: `A` holds the first `k` rows of `U^H` (`A = U^H`
/// when `M <= N`), `B` the first `k` rows of `V^H`, and `C`, `D` the first
/// `r` rows of `U^H` and `V^H`.
#[derive(Clone, Debug)]
pub struct TruncatedFactors {
    pub a: QMatrix,
    pub b: QMatrix,
    pub c: QMatrix,
    pub d: QMatrix,
    pub r: usize,
    pub sigma: Vec<f64>,
}

impl TruncatedFactors {
    /// `A^H B = sum_{i <= k} u_i v_i^H`.
    pub fn full_product(&self) -> QMatrix {
        self.a.conj_transpose().matmul(&self.b).expect("factor shapes agree")
    }

    /// `C^H D = sum_{i <= r} u_i v_i^H`.
    pub fn truncated_product(&self) -> QMatrix {
        self.c.conj_transpose().matmul(&self.d).expect("factor shapes agree")
    }
}

/// Quaternion SVD of `a`.
pub fn qsvd(a: &QMatrix) -> Result<QsvdFactors> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Err(Error::InvalidConfig("qsvd of an empty matrix".into()));
    }
    let k = m.min(n);
    let adj = embed(a).into_mat();
    let svd = adj.svd().map_err(|e| Error::Decomposition {
        reason: format!("complex SVD failed: {e:?}"),
        residual: f64::NAN,
        tolerance: RECONSTRUCTION_TOL,
    })?;
    let s: Vec<f64> = svd.S().column_vector().iter().map(|z| z.re.max(0.0)).collect();
    let (uc, vc) = (svd.U(), svd.V());

    let smax = s[0];
    let zero_tol = 1e-12 * smax;
    let cluster_tol = 1e-10 * smax;

    let mut left: Vec<Vec<c64>> = Vec::with_capacity(m);
    let mut right: Vec<Vec<c64>> = Vec::with_capacity(n);
    let mut sigma = Vec::with_capacity(k);

    let mut start = 0;
    while start < 2 * k && s[start] > zero_tol && sigma.len() < k {
        let mut end = start + 1;
        while end < 2 * k && s[end] > zero_tol && s[end - 1] - s[end] <= cluster_tol {
            end += 1;
        }
        let need = ((end - start + 1) / 2).min(k - sigma.len());
        if end - start == 2 {
            left.push(column(uc, start));
            right.push(column(vc, start));
        } else {
            let cands: Vec<usize> = (start..end).collect();
            let (l, r) = pick_coupled(uc, vc, &cands, need);
            left.extend(l);
            right.extend(r);
        }
        for t in 0..need {
            sigma.push(s[start + 2 * t]);
        }
        start = end;
    }

    // Remaining singular values are numerically zero: complete U and V
    // independently from the trailing singular subspaces.
    for t in sigma.len()..k {
        sigma.push(s[2 * t]);
    }
    let zero_start = start;
    let lcands: Vec<usize> = (zero_start..2 * m).collect();
    left.extend(pick_free(uc, &lcands, m - left.len()));
    let rcands: Vec<usize> = (zero_start..2 * n).collect();
    right.extend(pick_free(vc, &rcands, n - right.len()));

    let factors = QsvdFactors {
        u: assemble(&left, m),
        sigma,
        v: assemble(&right, n),
    };

    let tolerance = RECONSTRUCTION_TOL * a.frobenius_norm().max(1.0);
    let residual = (a - &factors.reconstruct()).frobenius_norm();
    if !(residual <= tolerance) || factors.u.cols() != m || factors.v.cols() != n {
        return Err(Error::Decomposition {
            reason: "quaternion factors failed the reconstruction check".into(),
            residual,
            tolerance,
        });
    }
    Ok(factors)
}

/// Singular value thresholding: `U diag(max(sigma - tau, 0)) V^H`.
pub fn qsvt(t: &QMatrix, tau: f64) -> Result<QMatrix> {
    Ok(qsvt_with_sigma(t, tau)?.0)
}

/// [`qsvt`] that also returns the singular values of `t` before shrinkage.
pub fn qsvt_with_sigma(t: &QMatrix, tau: f64) -> Result<(QMatrix, Vec<f64>)> {
    if !(tau >= 0.0) {
        return Err(Error::InvalidConfig(format!("threshold must be nonnegative, got {tau}")));
    }
    let f = qsvd(t)?;
    let shrunk: Vec<f64> = f.sigma.iter().map(|&s| s - tau).take_while(|&s| s > 0.0).collect();
    Ok((f.weighted_product(&shrunk), f.sigma))
}

/// Truncated factors of `a` for truncation rank `r`, `1 <= r <= min(M, N)`.
pub fn truncated_factors(a: &QMatrix, r: usize) -> Result<TruncatedFactors> {
    let k = a.rows().min(a.cols());
    check_rank(r, 1, k)?;
    Ok(truncated_from_qsvd(qsvd(a)?, r))
}

/// Builds [`TruncatedFactors`] from an existing decomposition.
pub fn truncated_from_qsvd(f: QsvdFactors, r: usize) -> TruncatedFactors {
    let k = f.sigma.len();
    let uh = f.u.columns(0..k).conj_transpose();
    let vh = f.v.columns(0..k).conj_transpose();
    TruncatedFactors {
        c: uh.row_block(0..r),
        d: vh.row_block(0..r),
        a: uh,
        b: vh,
        r,
        sigma: f.sigma,
    }
}

/// `|tr(A X B^H)|` for row-orthonormal `A` (`r x M`) and `B` (`r x N`).
pub fn trace_functional(a: &QMatrix, x: &QMatrix, b: &QMatrix) -> Result<f64> {
    Ok(trace_product(a, x, b)?.abs())
}

/// `Re(tr(A X B^H))`, the form used inside the solvers.
pub fn real_trace_functional(a: &QMatrix, x: &QMatrix, b: &QMatrix) -> Result<f64> {
    Ok(trace_product(a, x, b)?.w)
}

fn trace_product(a: &QMatrix, x: &QMatrix, b: &QMatrix) -> Result<Quaternion> {
    if a.rows() != b.rows() || a.cols() != x.rows() || b.cols() != x.cols() {
        return Err(Error::DimensionMismatch {
            op: "trace_functional",
            left: a.shape(),
            right: b.shape(),
        });
    }
    for f in [a, b] {
        let deviation = (&f.matmul(&f.conj_transpose())? - &QMatrix::identity(f.rows())).frobenius_norm();
        if deviation > ORTHONORMAL_TOL {
            return Err(Error::NotOrthonormal { deviation, tolerance: ORTHONORMAL_TOL });
        }
    }
    Ok(a.matmul(x)?.matmul(&b.conj_transpose())?.trace())
}

/// Sum of all singular values.
pub fn nuclear_norm(a: &QMatrix) -> Result<f64> {
    Ok(qsvd(a)?.nuclear_norm())
}

/// Truncated nuclear norm: sum of the `min(M, N) - r` smallest singular values.
pub fn qtnn_value(a: &QMatrix, r: usize) -> Result<f64> {
    check_rank(r, 0, a.rows().min(a.cols()))?;
    Ok(qsvd(a)?.sigma[r..].iter().sum())
}

pub(crate) fn check_rank(rank: usize, min: usize, max: usize) -> Result<()> {
    if rank < min || rank > max {
        return Err(Error::RankOutOfRange { rank, min, max });
    }
    Ok(())
}

fn column(m: MatRef<'_, c64>, j: usize) -> Vec<c64> {
    m.col(j).iter().copied().collect()
}

/// `J conj(x)` for `x = [a; b]`: `[-conj(b); conj(a)]`.
fn partner(x: &[c64]) -> Vec<c64> {
    let h = x.len() / 2;
    let (a, b) = x.split_at(h);
    b.iter().map(|z| -z.conj()).chain(a.iter().map(|z| z.conj())).collect()
}

fn dot(w: &[c64], x: &[c64]) -> c64 {
    w.iter().zip(x).fold(c64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b)
}

fn axpy(y: &mut [c64], alpha: c64, x: &[c64]) {
    y.iter_mut().zip(x).for_each(|(a, b)| *a += alpha * b);
}

fn norm(x: &[c64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(x: &mut [c64]) {
    let nrm = norm(x);
    if nrm > 0.0 {
        x.iter_mut().for_each(|z| *z /= nrm);
    }
}

/// Removes the components of `x` along the orthonormal `basis`, returning the
/// coefficients.
fn project_out(x: &mut [c64], basis: &[Vec<c64>]) -> Vec<c64> {
    basis
        .iter()
        .map(|w| {
            let c = dot(w, x);
            axpy(x, -c, w);
            c
        })
        .collect()
}

/// Pivoted selection of `need` quaternion left/right pairs from a cluster of
/// complex singular pairs with (numerically) one singular value.
fn pick_coupled(uc: MatRef<'_, c64>, vc: MatRef<'_, c64>, cands: &[usize], need: usize) -> (Vec<Vec<c64>>, Vec<Vec<c64>>) {
    let mut xs: Vec<Vec<c64>> = cands.iter().map(|&j| column(uc, j)).collect();
    let mut ys: Vec<Vec<c64>> = cands.iter().map(|&j| column(vc, j)).collect();
    let mut alive = vec![true; cands.len()];
    let mut lbasis: Vec<Vec<c64>> = Vec::new();
    let mut rbasis: Vec<Vec<c64>> = Vec::new();
    let (mut lout, mut rout) = (Vec::new(), Vec::new());

    for _ in 0..need {
        let Some(best) = argmax_alive(&xs, &alive) else { break };
        alive[best] = false;
        let mut x = xs[best].clone();
        let mut y = ys[best].clone();
        let coeffs = project_out(&mut x, &lbasis);
        for (c, z) in coeffs.iter().zip(&rbasis) {
            axpy(&mut y, -*c, z);
        }
        project_out(&mut y, &rbasis);
        normalize(&mut x);
        normalize(&mut y);
        let (xp, yp) = (partner(&x), partner(&y));
        // keep the remaining candidates' residuals current
        for (i, cand) in xs.iter_mut().enumerate() {
            if alive[i] {
                let c1 = dot(&x, cand);
                axpy(cand, -c1, &x);
                axpy(&mut ys[i], -c1, &y);
                let c2 = dot(&xp, cand);
                axpy(cand, -c2, &xp);
                axpy(&mut ys[i], -c2, &yp);
            }
        }
        lbasis.extend([x.clone(), xp]);
        rbasis.extend([y.clone(), yp]);
        lout.push(x);
        rout.push(y);
    }
    (lout, rout)
}

/// Pivoted selection of `need` quaternion columns spanning the `J`-closed
/// subspace of the candidate columns.
fn pick_free(mc: MatRef<'_, c64>, cands: &[usize], need: usize) -> Vec<Vec<c64>> {
    let mut xs: Vec<Vec<c64>> = cands.iter().map(|&j| column(mc, j)).collect();
    let mut alive = vec![true; cands.len()];
    let mut basis: Vec<Vec<c64>> = Vec::new();
    let mut out = Vec::new();
    for _ in 0..need {
        let Some(best) = argmax_alive(&xs, &alive) else { break };
        alive[best] = false;
        let mut x = xs[best].clone();
        project_out(&mut x, &basis);
        normalize(&mut x);
        let xp = partner(&x);
        for (i, cand) in xs.iter_mut().enumerate() {
            if alive[i] {
                for w in [&x, &xp] {
                    let c = dot(w, cand);
                    axpy(cand, -c, w);
                }
            }
        }
        basis.extend([x.clone(), xp]);
        out.push(x);
    }
    out
}

fn argmax_alive(xs: &[Vec<c64>], alive: &[bool]) -> Option<usize> {
    xs.iter()
        .enumerate()
        .filter(|(i, _)| alive[*i])
        .map(|(i, x)| (i, norm(x)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
}

/// Quaternion matrix whose columns are `a - conj(b) j` for the complex
/// columns `[a; b]`.
fn assemble(cols: &[Vec<c64>], n: usize) -> QMatrix {
    let p = Mat::from_fn(n, cols.len(), |i, j| cols[j][i]);
    let q = Mat::from_fn(n, cols.len(), |i, j| -cols[j][n + i].conj());
    QMatrix::from_cayley_dickson(p.as_ref(), q.as_ref())
}
