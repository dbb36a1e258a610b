use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::mask::Mask;
use crate::error::{Error, Result};
use crate::qmatrix::QMatrix;

/// Which side of the residual the diagonal weights multiply.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightSide {
    /// `M x M` diagonals from per-row observed counts, applied on the left.
    #[default]
    Rows,
    /// `N x N` diagonals from per-column observed counts, applied on the right.
    Cols,
}

impl FromStr for WeightSide {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rows" | "row" => Ok(Self::Rows),
            "cols" | "col" | "columns" => Ok(Self::Cols),
            _ => Err(Error::InvalidConfig(format!("unknown weight side `{s}`"))),
        }
    }
}

impl fmt::Display for WeightSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Rows => "rows",
            Self::Cols => "cols",
        })
    }
}

/// Diagonal weights `W1` (full-factor term) and `W2` (truncated term).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub theta1: f64,
    pub theta2: f64,
    pub side: WeightSide,
    pub w1: Vec<f64>,
    pub w2: Vec<f64>,
}

impl WeightSpec {
    pub fn w1_norm(&self) -> f64 {
        frobenius(&self.w1)
    }

    pub fn w2_norm(&self) -> f64 {
        frobenius(&self.w2)
    }

    /// Multiplies `p` by the diagonal `w` on the configured side.
    pub fn apply(&self, w: &[f64], p: &QMatrix) -> QMatrix {
        match self.side {
            WeightSide::Rows => p.scale_rows(w),
            WeightSide::Cols => p.scale_cols(w),
        }
    }
}

/// Frobenius norm of a diagonal matrix.
pub fn frobenius(diag: &[f64]) -> f64 {
    diag.iter().map(|w| w * w).sum::<f64>().sqrt()
}

/// Weights `theta * (2 - observed_i / len)`, one per row (or column), where
/// `len` is the line length. Lines with fewer observations get larger weights,
/// and every weight lies in `[theta, 2 theta]`. `theta = 0` gives the identity.
pub fn build_weights(mask: &Mask, theta1: f64, theta2: f64, side: WeightSide) -> Result<WeightSpec> {
    if !(theta1 >= 0.0 && theta2 >= 0.0) {
        return Err(Error::InvalidConfig(format!(
            "weight scales must be nonnegative, got {theta1} and {theta2}"
        )));
    }
    let (counts, len) = match side {
        WeightSide::Rows => (mask.row_counts(), mask.cols()),
        WeightSide::Cols => (mask.col_counts(), mask.rows()),
    };
    let line = |theta: f64| -> Vec<f64> {
        counts
            .iter()
            .map(|&c| if theta == 0.0 { 1.0 } else { theta * (2.0 - c as f64 / len as f64) })
            .collect()
    };
    Ok(WeightSpec { theta1, theta2, side, w1: line(theta1), w2: line(theta2) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoint_values() {
        let mut mask = Mask::full(2, 4);
        for j in 0..4 {
            mask.set_observed(1, j, false);
        }
        let w = build_weights(&mask, 2.0, 1.5, WeightSide::Rows).unwrap();
        assert_eq!(w.w1, vec![2.0, 4.0]);
        assert_eq!(w.w2, vec![1.5, 3.0]);
    }

    #[test]
    fn zero_theta_is_identity() {
        let mut mask = Mask::full(3, 3);
        mask.set_observed(0, 0, false);
        let w = build_weights(&mask, 0.0, 0.0, WeightSide::Rows).unwrap();
        assert_eq!(w.w1, vec![1.0; 3]);
        assert_eq!(w.w2, vec![1.0; 3]);
        assert_eq!(w.w1_norm(), 3f64.sqrt());
    }

    #[test]
    fn fewer_observations_mean_larger_weights() {
        let mut mask = Mask::full(3, 5);
        mask.set_observed(0, 0, false);
        mask.set_observed(2, 0, false);
        mask.set_observed(2, 1, false);
        let w = build_weights(&mask, 1.0, 1.0, WeightSide::Rows).unwrap();
        assert!(w.w1[2] > w.w1[0] && w.w1[0] > w.w1[1]);
        assert!(w.w1.iter().all(|&x| (1.0..=2.0).contains(&x)));
    }

    #[test]
    fn column_side_uses_column_counts() {
        let mut mask = Mask::full(4, 2);
        mask.set_observed(0, 1, false);
        let w = build_weights(&mask, 1.0, 0.0, WeightSide::Cols).unwrap();
        assert_eq!(w.w1, vec![1.0, 1.25]);
        assert_eq!(w.w2, vec![1.0, 1.0]);
    }

    #[test]
    fn negative_theta_rejected() {
        assert!(build_weights(&Mask::full(2, 2), -1.0, 0.0, WeightSide::Rows).is_err());
    }
}
