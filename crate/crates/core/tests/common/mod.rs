#![allow(dead_code)]

use nalgebra::DMatrix;
use quatcomp::imaging::{make_mask, MaskPattern};
use quatcomp::synth::random_unit_vector;
use quatcomp::{Mask, QMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_mask(rows: usize, cols: usize, p: f64, seed: u64) -> Mask {
    make_mask(&[MaskPattern::Random { p, seed }], rows, cols).unwrap()
}

pub fn rel_err(x: &QMatrix, truth: &QMatrix) -> f64 {
    (x - truth).frobenius_norm() / truth.frobenius_norm()
}

/// `scale * u v^H` with unit-norm quaternion factors.
pub fn rank_one(n: usize, scale: f64, seed: u64) -> QMatrix {
    let mut r = rng(seed);
    let u = random_unit_vector(n, &mut r);
    let v = random_unit_vector(n, &mut r);
    u.matmul(&v.conj_transpose()).unwrap().scale(scale)
}

/// `4M x 4N` real matrix of left multiplication, an oracle independent of the complex adjoint.
pub fn real_representation(a: &QMatrix) -> DMatrix<f64> {
    let (m, n) = a.shape();
    let mut out = DMatrix::zeros(4 * m, 4 * n);
    for i in 0..m {
        for j in 0..n {
            let q = a.get(i, j);
            let block = [
                [q.w, -q.x, -q.y, -q.z],
                [q.x, q.w, -q.z, q.y],
                [q.y, q.z, q.w, -q.x],
                [q.z, -q.y, q.x, q.w],
            ];
            for (r, row) in block.iter().enumerate() {
                for (c, v) in row.iter().enumerate() {
                    out[(4 * i + r, 4 * j + c)] = *v;
                }
            }
        }
    }
    out
}

/// Singular values of the real representation, each kept once out of four.
pub fn oracle_sigma(a: &QMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = real_representation(a).singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    s.iter().step_by(4).copied().collect()
}

/// A smooth outdoor-like RGB scene with a hill, a sun disc and mild noise.
pub fn scene(n: u32, seed: u64) -> image::RgbImage {
    let mut r = rng(seed);
    image::RgbImage::from_fn(n, n, |x, y| {
        let (u, v) = (x as f64 / n as f64, y as f64 / n as f64);
        let sky = [90.0 + 100.0 * v, 140.0 + 60.0 * v, 220.0 - 80.0 * v];
        let hill = v > 0.6 + 0.1 * (6.0 * u).sin();
        let mut c = if hill { [60.0 + 40.0 * u, 120.0 + 30.0 * (3.0 * u).cos(), 50.0] } else { sky };
        if ((u - 0.7).powi(2) + (v - 0.25).powi(2)).sqrt() < 0.1 {
            c = [250.0, 220.0, 90.0];
        }
        c.map(|a: f64| (a + r.random_range(-4.0..4.0)).clamp(0.0, 255.0).round() as u8).into()
    })
}
