//! Missing-entry patterns. Coordinates are `(row, col)` from the top-left corner.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::completion::Mask;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MaskPattern {
    /// Each entry missing independently with probability `p`.
    Random { p: f64, seed: u64 },
    /// Axis-aligned rectangle with top-left corner at column `x`, row `y`.
    Block { x: usize, y: usize, w: usize, h: usize },
    /// Upward-pointing equilateral triangle with apex at the continuous
    /// point `(row, col)` and a horizontal base of length `base` below it.
    /// A pixel is missing when its center lies inside.
    Triangle { row: f64, col: f64, base: f64 },
    /// Pixels within L1 distance `d` of `(row, col)`.
    Diamond { row: usize, col: usize, d: usize },
}

impl MaskPattern {
    /// Marks this pattern's pixels missing in `mask`.
    fn apply(&self, mask: &mut Mask) -> Result<()> {
        let (rows, cols) = mask.shape();
        let geom = |msg: String| Err(Error::Geometry(msg));
        match *self {
            MaskPattern::Random { p, seed } => {
                if !(0.0..=1.0).contains(&p) {
                    return geom(format!("missing rate {p} outside [0, 1]"));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for i in 0..rows {
                    for j in 0..cols {
                        if rng.random::<f64>() < p {
                            mask.set_observed(i, j, false);
                        }
                    }
                }
            }
            MaskPattern::Block { x, y, w, h } => {
                if w == 0 || h == 0 || x + w > cols || y + h > rows {
                    return geom(format!("block {w}x{h} at ({y}, {x}) does not fit {rows}x{cols}"));
                }
                for i in y..y + h {
                    for j in x..x + w {
                        mask.set_observed(i, j, false);
                    }
                }
            }
            MaskPattern::Triangle { row, col, base } => {
                let height = base * 3f64.sqrt() / 2.0;
                let fits = base > 0.0
                    && row >= 0.0
                    && row + height <= rows as f64
                    && col - base / 2.0 >= 0.0
                    && col + base / 2.0 <= cols as f64;
                if !fits {
                    return geom(format!("triangle with base {base} at ({row}, {col}) does not fit {rows}x{cols}"));
                }
                let slope = 1.0 / 3f64.sqrt();
                for i in 0..rows {
                    let depth = i as f64 + 0.5 - row;
                    if !(0.0..=height).contains(&depth) {
                        continue;
                    }
                    for j in 0..cols {
                        if (j as f64 + 0.5 - col).abs() <= depth * slope {
                            mask.set_observed(i, j, false);
                        }
                    }
                }
            }
            MaskPattern::Diamond { row, col, d } => {
                if row < d || col < d || row + d >= rows || col + d >= cols {
                    return geom(format!("diamond of radius {d} at ({row}, {col}) does not fit {rows}x{cols}"));
                }
                for i in row - d..=row + d {
                    let span = d - i.abs_diff(row);
                    for j in col - span..=col + span {
                        mask.set_observed(i, j, false);
                    }
                }
            }
        }
        Ok(())
    }
}

/// Builds a mask whose missing set is the union of `patterns`.
pub fn make_mask(patterns: &[MaskPattern], rows: usize, cols: usize) -> Result<Mask> {
    let mut mask = Mask::full(rows, cols);
    for p in patterns {
        p.apply(&mut mask)?;
    }
    Ok(mask)
}

/// Parses `+`-separated patterns such as `random:p=0.5:seed=7+block:x=0:y=0:w=8:h=8`.
pub fn parse_patterns(s: &str) -> Result<Vec<MaskPattern>> {
    s.split('+').map(str::parse).collect()
}

impl FromStr for MaskPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Descriptor(format!("{s}: {why}"));
        let mut parts = s.trim().split(':');
        let kind = parts.next().unwrap_or_default();
        let mut kv = Vec::new();
        for p in parts {
            let (k, v) = p.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            kv.push((k, v));
        }
        let get = |key: &str| -> Result<&str> {
            kv.iter().find(|(k, _)| *k == key).map(|(_, v)| *v).ok_or_else(|| bad(&format!("missing `{key}`")))
        };
        fn num<T: FromStr>(v: &str, s: &str) -> Result<T> {
            v.parse().map_err(|_| Error::Descriptor(format!("{s}: bad number `{v}`")))
        }
        let allowed: &[&str] = match kind {
            "random" => &["p", "seed"],
            "block" => &["x", "y", "w", "h"],
            "triangle" => &["row", "col", "base"],
            "diamond" => &["row", "col", "d"],
            _ => return Err(bad("unknown pattern")),
        };
        if let Some((k, _)) = kv.iter().find(|(k, _)| !allowed.contains(k)) {
            return Err(bad(&format!("unexpected key `{k}`")));
        }
        Ok(match kind {
            "random" => MaskPattern::Random {
                p: num(get("p")?, s)?,
                seed: get("seed").map_or(Ok(0), |v| num(v, s))?,
            },
            "block" => MaskPattern::Block {
                x: num(get("x")?, s)?,
                y: num(get("y")?, s)?,
                w: num(get("w")?, s)?,
                h: num(get("h")?, s)?,
            },
            "triangle" => MaskPattern::Triangle {
                row: num(get("row")?, s)?,
                col: num(get("col")?, s)?,
                base: num(get("base")?, s)?,
            },
            _ => MaskPattern::Diamond {
                row: num(get("row")?, s)?,
                col: num(get("col")?, s)?,
                d: num(get("d")?, s)?,
            },
        })
    }
}

impl fmt::Display for MaskPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaskPattern::Random { p, seed } => write!(f, "random:p={p}:seed={seed}"),
            MaskPattern::Block { x, y, w, h } => write!(f, "block:x={x}:y={y}:w={w}:h={h}"),
            MaskPattern::Triangle { row, col, base } => write!(f, "triangle:row={row}:col={col}:base={base}"),
            MaskPattern::Diamond { row, col, d } => write!(f, "diamond:row={row}:col={col}:d={d}"),
        }
    }
}
