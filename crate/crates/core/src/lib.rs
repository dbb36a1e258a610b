//! Quaternion matrix algebra, quaternion SVD and low-rank completion of
//! quaternion matrices, with a color-image codec and quality metrics.
//!
//! A color image maps to a pure quaternion matrix (R, G, B on the i, j, k
//! planes), so all three channels are completed jointly.

pub mod adjoint;
pub mod completion;
pub mod error;
pub mod imaging;
pub mod qmatrix;
pub mod qsvd;
pub mod quaternion;
pub mod synth;

pub use completion::{Mask, Method, SolverConfig, SolverReport};
pub use error::{Error, Result};
pub use qmatrix::QMatrix;
pub use quaternion::Quaternion;
