//! PSNR and SSIM on the three color planes of an [`ImageQ`].

use super::codec::ImageQ;
use crate::error::{Error, Result};
use crate::qmatrix::QMatrix;

pub const PEAK: f64 = 255.0;
pub const SSIM_WINDOW: usize = 11;
pub const SSIM_SIGMA: f64 = 1.5;
pub const SSIM_K1: f64 = 0.01;
pub const SSIM_K2: f64 = 0.03;

fn same_shape(x: &ImageQ, y: &ImageQ) -> Result<()> {
    let (a, b) = (x.matrix().shape(), y.matrix().shape());
    if a != b {
        return Err(Error::DimensionMismatch { op: "metric", left: a, right: b });
    }
    Ok(())
}

/// `10 log10(255^2 / MSE)` over all `3 M N` channel samples; `+inf` for identical images.
pub fn psnr(x: &ImageQ, y: &ImageQ) -> Result<f64> {
    same_shape(x, y)?;
    let mut sse = 0.0;
    for c in 0..3 {
        sse += x.channel(c).iter().zip(y.channel(c)).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
    }
    let mse = sse / (3 * x.rows() * x.cols()) as f64;
    Ok(psnr_from_mse(mse, PEAK))
}

pub fn psnr_from_mse(mse: f64, peak: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (peak * peak / mse).log10()
    }
}

/// PSNR of a general quaternion matrix against a reference over all four
/// planes, with the peak taken as the largest component magnitude of `truth`.
pub fn matrix_psnr(x: &QMatrix, truth: &QMatrix) -> Result<f64> {
    if x.shape() != truth.shape() {
        return Err(Error::DimensionMismatch { op: "matrix psnr", left: x.shape(), right: truth.shape() });
    }
    let peak = truth.planes().iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let n = (4 * x.rows() * x.cols()) as f64;
    Ok(psnr_from_mse((x - truth).frobenius_norm_sqr() / n, peak))
}

/// Mean SSIM over the three channels, each the mean of the local index over
/// every fully contained 11x11 Gaussian window.
pub fn ssim(x: &ImageQ, y: &ImageQ) -> Result<f64> {
    same_shape(x, y)?;
    let (rows, cols) = (x.rows(), x.cols());
    if rows < SSIM_WINDOW || cols < SSIM_WINDOW {
        return Err(Error::ImageTooSmall { rows, cols, min: SSIM_WINDOW });
    }
    let total: f64 = (0..3).map(|c| ssim_plane(x.channel(c), y.channel(c), rows, cols)).sum();
    Ok(total / 3.0)
}

pub fn gaussian_window() -> Vec<f64> {
    let half = (SSIM_WINDOW / 2) as f64;
    let w: Vec<f64> = (0..SSIM_WINDOW)
        .map(|i| {
            let d = i as f64 - half;
            (-d * d / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp()
        })
        .collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|v| v / s).collect()
}

/// Valid-mode separable filtering of a row-major plane.
fn filter(src: &[f64], rows: usize, cols: usize, g: &[f64]) -> Vec<f64> {
    let k = g.len();
    let (or, oc) = (rows - k + 1, cols - k + 1);
    let mut tmp = vec![0.0; rows * oc];
    for i in 0..rows {
        let row = &src[i * cols..(i + 1) * cols];
        for j in 0..oc {
            tmp[i * oc + j] = g.iter().zip(&row[j..j + k]).map(|(a, b)| a * b).sum();
        }
    }
    let mut out = vec![0.0; or * oc];
    for i in 0..or {
        for (t, &gw) in g.iter().enumerate() {
            let src_row = &tmp[(i + t) * oc..(i + t + 1) * oc];
            for (o, &v) in out[i * oc..(i + 1) * oc].iter_mut().zip(src_row) {
                *o += gw * v;
            }
        }
    }
    out
}

fn ssim_plane(x: &[f64], y: &[f64], rows: usize, cols: usize) -> f64 {
    let g = gaussian_window();
    let c1 = (SSIM_K1 * PEAK).powi(2);
    let c2 = (SSIM_K2 * PEAK).powi(2);
    let prod = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).collect::<Vec<_>>();
    let mx = filter(x, rows, cols, &g);
    let my = filter(y, rows, cols, &g);
    let sxx = filter(&prod(x, x), rows, cols, &g);
    let syy = filter(&prod(y, y), rows, cols, &g);
    let sxy = filter(&prod(x, y), rows, cols, &g);
    let n = mx.len();
    let mut total = 0.0;
    for t in 0..n {
        let (a, b) = (mx[t], my[t]);
        let vx = sxx[t] - a * a;
        let vy = syy[t] - b * b;
        let cov = sxy[t] - a * b;
        total += ((2.0 * a * b + c1) * (2.0 * cov + c2)) / ((a * a + b * b + c1) * (vx + vy + c2));
    }
    total / n as f64
}
