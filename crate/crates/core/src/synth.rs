//! Seeded synthetic data: random quaternion matrices, low-rank ground truths
//! and the `synth:MxN:rank=K:scale=S:seed=T` descriptor.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmatrix::QMatrix;
use crate::quaternion::Quaternion;

/// Quaternion matrix with independent standard normal components.
pub fn random_qmatrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> QMatrix {
    QMatrix::from_fn(rows, cols, |_, _| {
        Quaternion::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        )
    })
}

/// Random quaternion column of unit Euclidean norm.
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> QMatrix {
    let v = random_qmatrix(n, 1, rng);
    let norm = v.frobenius_norm();
    v.scale(1.0 / norm)
}

/// Orthonormalizes the rows of `a` (so that `A A^H = I`) by quaternion
/// Gram-Schmidt, applied twice. Rows must be linearly independent.
pub fn orthonormalize_rows(a: &QMatrix) -> QMatrix {
    let (r, n) = a.shape();
    let mut rows: Vec<Vec<Quaternion>> = (0..r).map(|i| (0..n).map(|j| a.get(i, j)).collect()).collect();
    for i in 0..r {
        for _ in 0..2 {
            for j in 0..i {
                // c = <row_i, row_j> = sum_k row_i[k] conj(row_j[k]); row_i -= c row_j
                let c = rows[i]
                    .iter()
                    .zip(&rows[j])
                    .fold(Quaternion::ZERO, |acc, (x, y)| acc + *x * y.conj());
                let (head, tail) = rows.split_at_mut(i);
                for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                    *x = *x - c * *y;
                }
            }
        }
        let norm = rows[i].iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt();
        rows[i].iter_mut().for_each(|q| *q = q.scale(1.0 / norm));
    }
    QMatrix::from_fn(r, n, |i, j| rows[i][j])
}

/// Random `rows x cols` quaternion matrix of exact rank `rank` whose entries
/// have root-mean-square modulus close to `scale`.
pub fn low_rank<R: Rng + ?Sized>(rows: usize, cols: usize, rank: usize, scale: f64, rng: &mut R) -> QMatrix {
    let left = random_qmatrix(rows, rank, rng);
    let right = random_qmatrix(cols, rank, rng);
    let product = left
        .matmul(&right.conj_transpose())
        .expect("inner dimensions agree by construction");
    // each entry sums `rank` products of quaternions with E|q|^2 = 4
    product.scale(scale / (4.0 * (rank.max(1) as f64).sqrt()))
}

/// Parsed `synth:MxN:rank=K:scale=S:seed=T` descriptor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub scale: f64,
    pub seed: u64,
}

impl SynthSpec {
    pub fn generate(&self) -> QMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        low_rank(self.rows, self.cols, self.rank, self.scale, &mut rng)
    }
}

impl FromStr for SynthSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Descriptor(s.to_string());
        let mut parts = s.split(':');
        if parts.next() != Some("synth") {
            return Err(bad());
        }
        let dims = parts.next().ok_or_else(bad)?;
        let (r, c) = dims.split_once(['x', 'X']).ok_or_else(bad)?;
        let rows: usize = r.parse().map_err(|_| bad())?;
        let cols: usize = c.parse().map_err(|_| bad())?;
        let (mut rank, mut scale, mut seed) = (None, 1.0, 0u64);
        for kv in parts {
            let (k, v) = kv.split_once('=').ok_or_else(bad)?;
            match k {
                "rank" => rank = Some(v.parse().map_err(|_| bad())?),
                "scale" => scale = v.parse().map_err(|_| bad())?,
                "seed" => seed = v.parse().map_err(|_| bad())?,
                _ => return Err(bad()),
            }
        }
        let rank = rank.ok_or_else(bad)?;
        if rows == 0 || cols == 0 || rank == 0 || rank > rows.min(cols) || !(scale > 0.0) {
            return Err(bad());
        }
        Ok(Self { rows, cols, rank, scale, seed })
    }
}

impl fmt::Display for SynthSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "synth:{}x{}:rank={}:scale={}:seed={}",
            self.rows, self.cols, self.rank, self.scale, self.seed
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptor_round_trip() {
        let s: SynthSpec = "synth:60x40:rank=3:scale=50:seed=9".parse().unwrap();
        assert_eq!(s, SynthSpec { rows: 60, cols: 40, rank: 3, scale: 50.0, seed: 9 });
        assert_eq!(s.to_string().parse::<SynthSpec>().unwrap(), s);
    }

    #[test]
    fn descriptor_rejects_garbage() {
        for bad in ["synth:60:rank=3", "img:3x3:rank=1", "synth:4x4:rank=5", "synth:4x4", "synth:4x4:rank=1:foo=2"] {
            assert!(bad.parse::<SynthSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn orthonormal_rows() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let q = orthonormalize_rows(&random_qmatrix(3, 7, &mut rng));
        let gram = q.matmul(&q.conj_transpose()).unwrap();
        assert!(gram.max_abs_diff(&QMatrix::identity(3)) < 1e-13);
    }

    #[test]
    fn generation_is_seeded() {
        let s: SynthSpec = "synth:10x8:rank=2:scale=5:seed=4".parse().unwrap();
        assert_eq!(s.generate(), s.generate());
    }
}
