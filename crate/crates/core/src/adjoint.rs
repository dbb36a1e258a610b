//! Complex adjoint of a quaternion matrix.
//!
//! With `A = Ap + Aq j` the adjoint is the `2M x 2N` complex matrix
//!
//! ```text
//! [  Ap        Aq      ]
//! [ -conj(Aq)  conj(Ap) ]
//! ```
//!
//! The map is an injective, real-linear ring homomorphism, so products and
//! conjugate transposes can be computed on either side. Singular values of the
//! adjoint are those of `A`, each repeated twice.

use faer::{c64, Mat, MatRef};

use crate::error::{Error, Result};
use crate::qmatrix::QMatrix;

/// Maximum deviation from the block structure accepted by [`ComplexAdjoint::new`].
pub const STRUCTURE_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct ComplexAdjoint {
    mat: Mat<c64>,
}

impl ComplexAdjoint {
    /// Wraps a complex matrix after checking the quaternion block structure.
    pub fn new(mat: Mat<c64>) -> Result<Self> {
        let deviation = structure_deviation(mat.as_ref());
        if deviation > STRUCTURE_TOL {
            return Err(Error::Structure { deviation });
        }
        Ok(Self { mat })
    }

    pub fn as_mat(&self) -> MatRef<'_, c64> {
        self.mat.as_ref()
    }

    pub fn into_mat(self) -> Mat<c64> {
        self.mat
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.mat.ncols() != rhs.mat.nrows() {
            return Err(Error::DimensionMismatch {
                op: "adjoint matmul",
                left: (self.mat.nrows(), self.mat.ncols()),
                right: (rhs.mat.nrows(), rhs.mat.ncols()),
            });
        }
        Ok(Self { mat: &self.mat * &rhs.mat })
    }

    pub fn conj_transpose(&self) -> Self {
        Self { mat: self.mat.adjoint().to_owned() }
    }
}

/// Builds the complex adjoint of `a`.
pub fn embed(a: &QMatrix) -> ComplexAdjoint {
    let (m, n) = a.shape();
    let (p, q) = a.to_cayley_dickson();
    let mat = Mat::from_fn(2 * m, 2 * n, |i, j| match (i < m, j < n) {
        (true, true) => p[(i, j)],
        (true, false) => q[(i, j - n)],
        (false, true) => -q[(i - m, j)].conj(),
        (false, false) => p[(i - m, j - n)].conj(),
    });
    ComplexAdjoint { mat }
}

/// Recovers the quaternion matrix from its adjoint (exact inverse of [`embed`]).
pub fn extract(c: &ComplexAdjoint) -> QMatrix {
    let (m, n) = (c.mat.nrows() / 2, c.mat.ncols() / 2);
    let p = c.mat.as_ref().submatrix(0, 0, m, n);
    let q = c.mat.as_ref().submatrix(0, n, m, n);
    QMatrix::from_cayley_dickson(p, q)
}

/// Largest entrywise violation of the adjoint block pattern, relative to the
/// largest entry magnitude when that exceeds one.
pub fn structure_deviation(c: MatRef<'_, c64>) -> f64 {
    if c.nrows() % 2 != 0 || c.ncols() % 2 != 0 {
        return f64::INFINITY;
    }
    let (m, n) = (c.nrows() / 2, c.ncols() / 2);
    let mut dev = 0.0f64;
    let mut scale = 1.0f64;
    for i in 0..m {
        for j in 0..n {
            let p = c[(i, j)];
            let q = c[(i, j + n)];
            dev = dev.max((c[(i + m, j + n)] - p.conj()).norm());
            dev = dev.max((c[(i + m, j)] + q.conj()).norm());
            scale = scale.max(p.norm()).max(q.norm());
        }
    }
    dev / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::Quaternion;
    use crate::synth::random_qmatrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn real_matrix_embeds_block_diagonally() {
        let a = QMatrix::from_fn(2, 3, |i, j| Quaternion::real((i * 3 + j) as f64));
        let c = embed(&a);
        let c = c.as_mat();
        for i in 0..2 {
            for j in 0..3 {
                let v = c64::new((i * 3 + j) as f64, 0.0);
                assert_eq!(c[(i, j)], v);
                assert_eq!(c[(i + 2, j + 3)], v);
                assert_eq!(c[(i, j + 3)], c64::new(0.0, 0.0));
                assert_eq!(c[(i + 2, j)], c64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let a = random_qmatrix(4, 7, &mut rng);
        assert_eq!(extract(&embed(&a)), a);
    }

    #[test]
    fn new_rejects_broken_structure() {
        let mut mat = embed(&QMatrix::identity(2)).into_mat();
        mat[(3, 3)] = c64::new(2.0, 0.0);
        assert!(matches!(ComplexAdjoint::new(mat), Err(Error::Structure { .. })));
        let odd = Mat::<c64>::zeros(3, 2);
        assert!(ComplexAdjoint::new(odd).is_err());
    }

    #[test]
    fn embed_commutes_with_products_and_adjoints() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let a = random_qmatrix(4, 3, &mut rng);
        let b = random_qmatrix(3, 5, &mut rng);
        let ab = a.matmul(&b).unwrap();
        let via = extract(&embed(&a).matmul(&embed(&b)).unwrap());
        assert!(ab.max_abs_diff(&via) < 1e-12);

        let lhs = embed(&a.conj_transpose());
        let rhs = embed(&a).conj_transpose();
        assert!((lhs.as_mat() - rhs.as_mat()).norm_max() < 1e-15);
    }
}
