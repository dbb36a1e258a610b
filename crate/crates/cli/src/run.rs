use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use quatcomp::completion::{complete, Method, SolverConfig, SolverReport};
use quatcomp::imaging::{load_image, load_mask, make_mask, matrix_psnr, parse_patterns, psnr, ssim, ImageQ};
use quatcomp::synth::SynthSpec;
use quatcomp::{Mask, QMatrix};
use serde::Serialize;

/// Image file or synthetic descriptor.
#[derive(Clone, Debug)]
pub enum Input {
    Image(PathBuf),
    Synth(SynthSpec),
}

impl Input {
    pub fn label(&self) -> String {
        match self {
            Input::Image(p) => p.display().to_string(),
            Input::Synth(s) => s.to_string(),
        }
    }

    pub fn load(&self) -> Result<Truth> {
        Ok(match self {
            Input::Image(p) => Truth::Image(load_image(p).with_context(|| format!("reading {}", p.display()))?),
            Input::Synth(s) => Truth::Synth(s.generate()),
        })
    }
}

impl FromStr for Input {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.starts_with("synth:") {
            Ok(Input::Synth(s.parse()?))
        } else {
            Ok(Input::Image(PathBuf::from(s)))
        }
    }
}

pub enum Truth {
    Image(ImageQ),
    Synth(QMatrix),
}

impl Truth {
    pub fn matrix(&self) -> &QMatrix {
        match self {
            Truth::Image(img) => img.matrix(),
            Truth::Synth(m) => m,
        }
    }

    /// PSNR and SSIM of a solver output. Images are quantized first; synthetic
    /// matrices use the largest ground-truth component as peak and have no SSIM.
    pub fn score(&self, recovered: &QMatrix) -> Result<(f64, Option<f64>)> {
        Ok(match self {
            Truth::Image(img) => {
                let out = ImageQ::from_recovered(recovered);
                let s = if img.rows() >= 11 && img.cols() >= 11 { Some(ssim(&out, img)?) } else { None };
                (psnr(&out, img)?, s)
            }
            Truth::Synth(m) => (matrix_psnr(recovered, m)?, None),
        })
    }
}

/// Mask file or pattern descriptor.
#[derive(Clone, Debug)]
pub enum MaskSource {
    File(PathBuf),
    Pattern(String),
}

impl MaskSource {
    pub fn label(&self) -> String {
        match self {
            MaskSource::File(p) => p.display().to_string(),
            MaskSource::Pattern(s) => s.clone(),
        }
    }

    pub fn build(&self, rows: usize, cols: usize) -> Result<Mask> {
        let mask = match self {
            MaskSource::File(p) => load_mask(p).with_context(|| format!("reading mask {}", p.display()))?,
            MaskSource::Pattern(s) => make_mask(&parse_patterns(s)?, rows, cols)?,
        };
        if mask.shape() != (rows, cols) {
            bail!("mask is {}x{} but the input is {rows}x{cols}", mask.rows(), mask.cols());
        }
        Ok(mask)
    }
}

/// Fills in `seed=` for random patterns that omit it.
pub fn seeded_pattern(pattern: &str, seed: u64) -> String {
    pattern
        .split('+')
        .map(|p| {
            if p.starts_with("random") && !p.contains("seed=") {
                format!("{p}:seed={seed}")
            } else {
                p.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("+")
}

#[derive(Clone, Debug)]
pub struct RunSpec {
    pub input: Input,
    pub mask: MaskSource,
    pub method: Method,
    pub config: SolverConfig,
}

/// One report row. Column order is the CSV column order.
#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub row: String,
    pub image: String,
    pub method: String,
    pub r: usize,
    pub pattern: String,
    pub missing_fraction: f64,
    pub psnr: f64,
    pub ssim: Option<f64>,
    pub iterations: usize,
    pub inner_iterations: usize,
    pub wall_seconds: f64,
    pub converged: bool,
    pub seed: u64,
}

pub struct Outcome {
    pub row: Row,
    pub report: SolverReport,
}

pub fn execute(spec: &RunSpec, truth: &Truth, mask: &Mask) -> Result<Outcome> {
    let report = complete(spec.method, truth.matrix(), mask, &spec.config)?;
    let (psnr, ssim) = truth.score(&report.recovered)?;
    let row = Row {
        row: "run".into(),
        image: spec.input.label(),
        method: spec.method.to_string(),
        r: if spec.method.is_truncated() { spec.config.rank } else { 0 },
        pattern: spec.mask.label(),
        missing_fraction: mask.missing_fraction(),
        psnr,
        ssim,
        iterations: report.outer_iterations,
        inner_iterations: report.inner_iterations,
        wall_seconds: report.wall_time.as_secs_f64(),
        converged: report.converged,
        seed: spec.config.seed,
    };
    Ok(Outcome { row, report })
}

/// Writes the recovered matrix: an image for image inputs, JSON otherwise.
pub fn save_recovered(path: &Path, truth: &Truth, recovered: &QMatrix) -> Result<()> {
    match truth {
        Truth::Image(_) => quatcomp::imaging::save_image(path, &ImageQ::from_recovered(recovered))?,
        Truth::Synth(_) => quatcomp::imaging::write_atomic(path, serde_json::to_string(recovered)?.as_bytes())?,
    }
    Ok(())
}
