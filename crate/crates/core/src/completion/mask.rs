use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmatrix::QMatrix;

/// Observation set over a `rows x cols` grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mask {
    rows: usize,
    cols: usize,
    observed: Vec<bool>,
}

impl Mask {
    /// Every entry observed.
    pub fn full(rows: usize, cols: usize) -> Self {
        Self { rows, cols, observed: vec![true; rows * cols] }
    }

    /// Nothing observed.
    pub fn empty(rows: usize, cols: usize) -> Self {
        Self { rows, cols, observed: vec![false; rows * cols] }
    }

    /// Builds a mask from a row-major bitmap (`true` = observed).
    pub fn from_observed(rows: usize, cols: usize, observed: Vec<bool>) -> Result<Self> {
        if observed.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "mask bitmap",
                left: (rows, cols),
                right: (observed.len(), 1),
            });
        }
        Ok(Self { rows, cols, observed })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn bitmap(&self) -> &[bool] {
        &self.observed
    }

    pub fn is_observed(&self, i: usize, j: usize) -> bool {
        self.observed[i * self.cols + j]
    }

    pub fn set_observed(&mut self, i: usize, j: usize, observed: bool) {
        self.observed[i * self.cols + j] = observed;
    }

    pub fn complement(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            observed: self.observed.iter().map(|&o| !o).collect(),
        }
    }

    pub fn observed_count(&self) -> usize {
        self.observed.iter().filter(|&&o| o).count()
    }

    pub fn missing_count(&self) -> usize {
        self.observed.len() - self.observed_count()
    }

    pub fn missing_fraction(&self) -> f64 {
        if self.observed.is_empty() {
            return 0.0;
        }
        self.missing_count() as f64 / self.observed.len() as f64
    }

    /// Observed entries per row.
    pub fn row_counts(&self) -> Vec<usize> {
        self.observed
            .chunks(self.cols.max(1))
            .map(|r| r.iter().filter(|&&o| o).count())
            .collect()
    }

    /// Observed entries per column.
    pub fn col_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.cols];
        for row in self.observed.chunks(self.cols.max(1)) {
            for (c, &o) in counts.iter_mut().zip(row) {
                *c += o as usize;
            }
        }
        counts
    }

    /// Row-major `(i, j)` positions outside the observation set.
    pub fn missing_positions(&self) -> Vec<[usize; 2]> {
        self.observed
            .iter()
            .enumerate()
            .filter(|(_, &o)| !o)
            .map(|(k, _)| [k / self.cols, k % self.cols])
            .collect()
    }

    /// Marks as missing everything missing in `other`.
    pub fn intersect(&mut self, other: &Mask) -> Result<()> {
        self.check(other.shape(), "mask intersect")?;
        self.observed.iter_mut().zip(&other.observed).for_each(|(a, &b)| *a &= b);
        Ok(())
    }

    /// Keeps observed entries of `a`, zeroes the rest.
    pub fn project(&self, a: &QMatrix) -> Result<QMatrix> {
        self.masked(a, true)
    }

    /// Keeps unobserved entries of `a`, zeroes the rest.
    pub fn project_complement(&self, a: &QMatrix) -> Result<QMatrix> {
        self.masked(a, false)
    }

    /// Overwrites the observed entries of `x` with those of `m`.
    pub fn pin(&self, x: &mut QMatrix, m: &QMatrix) -> Result<()> {
        self.check(x.shape(), "pin")?;
        self.check(m.shape(), "pin")?;
        for l in 0..4 {
            let src = m.plane(l);
            for ((dst, &s), &o) in x.plane_mut(l).iter_mut().zip(src).zip(&self.observed) {
                if o {
                    *dst = s;
                }
            }
        }
        Ok(())
    }

    /// True when `x` and `m` agree bitwise on every observed entry.
    pub fn agrees(&self, x: &QMatrix, m: &QMatrix) -> bool {
        x.shape() == self.shape()
            && m.shape() == self.shape()
            && (0..4).all(|l| {
                x.plane(l)
                    .iter()
                    .zip(m.plane(l))
                    .zip(&self.observed)
                    .all(|((a, b), &o)| !o || a.to_bits() == b.to_bits())
            })
    }

    fn masked(&self, a: &QMatrix, keep_observed: bool) -> Result<QMatrix> {
        self.check(a.shape(), "project")?;
        let mut out = a.clone();
        for l in 0..4 {
            for (v, &o) in out.plane_mut(l).iter_mut().zip(&self.observed) {
                if o != keep_observed {
                    *v = 0.0;
                }
            }
        }
        Ok(out)
    }

    fn check(&self, shape: (usize, usize), op: &'static str) -> Result<()> {
        if shape != self.shape() {
            return Err(Error::DimensionMismatch { op, left: self.shape(), right: shape });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::random_qmatrix;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    proptest! {
        #[test]
        fn projections_partition_the_matrix(seed in 0u64..1000, bits in proptest::collection::vec(any::<bool>(), 20)) {
            let mask = Mask::from_observed(4, 5, bits).unwrap();
            let a = random_qmatrix(4, 5, &mut ChaCha8Rng::seed_from_u64(seed));
            let sum = &mask.project(&a).unwrap() + &mask.project_complement(&a).unwrap();
            prop_assert_eq!(sum, a.clone());
            let comp = mask.complement();
            prop_assert_eq!(comp.observed_count() + mask.observed_count(), 20);
            prop_assert!(mask.bitmap().iter().zip(comp.bitmap()).all(|(a, b)| a != b));
            prop_assert!(mask.agrees(&mask.project(&a).unwrap(), &a));
        }
    }

    #[test]
    fn counts_and_positions() {
        let mut m = Mask::full(2, 3);
        m.set_observed(0, 1, false);
        m.set_observed(1, 1, false);
        m.set_observed(1, 2, false);
        assert_eq!(m.row_counts(), vec![2, 1]);
        assert_eq!(m.col_counts(), vec![2, 0, 1]);
        assert_eq!(m.missing_positions(), vec![[0, 1], [1, 1], [1, 2]]);
        assert!((m.missing_fraction() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn pin_restores_observed_entries() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = random_qmatrix(3, 3, &mut rng);
        let mut x = random_qmatrix(3, 3, &mut rng);
        let mut mask = Mask::full(3, 3);
        mask.set_observed(2, 2, false);
        mask.pin(&mut x, &m).unwrap();
        assert!(mask.agrees(&x, &m));
        assert_ne!(x.get(2, 2), m.get(2, 2));
        assert!(mask.pin(&mut QMatrix::zeros(2, 2), &m).is_err());
    }
}
