//! RGB image <-> pure quaternion matrix codec (R, G, B on the i, j, k planes).

use std::io::Cursor;
use std::path::Path;

use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::codecs::png::PngEncoder;
use image::{DynamicImage, ImageEncoder, ImageFormat, RgbImage};

use super::write_atomic;
use crate::error::{Error, Result};
use crate::qmatrix::QMatrix;

/// A color image as a pure quaternion matrix with components in `[0, 255]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ImageQ(QMatrix);

impl ImageQ {
    /// Wraps a pure matrix whose components already lie in `[0, 255]`.
    pub fn new(m: QMatrix) -> Result<Self> {
        if !m.is_pure() {
            return Err(Error::Format("image matrix has a nonzero real plane".into()));
        }
        if (1..4).any(|l| m.plane(l).iter().any(|v| !(0.0..=255.0).contains(v))) {
            return Err(Error::Format("image components must lie in [0, 255]".into()));
        }
        Ok(Self(m))
    }

    /// Quantizes a solver output: drops the real plane, clamps each channel
    /// to `[0, 255]` and rounds to the nearest 8-bit level.
    pub fn from_recovered(m: &QMatrix) -> Self {
        let (rows, cols) = m.shape();
        let mut out = QMatrix::zeros(rows, cols);
        for l in 1..4 {
            for (dst, &v) in out.plane_mut(l).iter_mut().zip(m.plane(l)) {
                *dst = quantize(v) as f64;
            }
        }
        Self(out)
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> QMatrix {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.rows()
    }

    pub fn cols(&self) -> usize {
        self.0.cols()
    }

    /// Channel plane `c` (0 = R, 1 = G, 2 = B), row-major.
    pub fn channel(&self, c: usize) -> &[f64] {
        self.0.plane(c + 1)
    }
}

fn quantize(v: f64) -> u8 {
    if v.is_nan() {
        0
    } else {
        v.clamp(0.0, 255.0).round() as u8
    }
}

pub fn encode(img: &RgbImage) -> ImageQ {
    let (w, h) = img.dimensions();
    let (rows, cols) = (h as usize, w as usize);
    let mut m = QMatrix::zeros(rows, cols);
    for (x, y, px) in img.enumerate_pixels() {
        let idx = y as usize * cols + x as usize;
        for c in 0..3 {
            m.plane_mut(c + 1)[idx] = px[c] as f64;
        }
    }
    ImageQ(m)
}

pub fn decode(q: &ImageQ) -> RgbImage {
    let cols = q.cols();
    RgbImage::from_fn(cols as u32, q.rows() as u32, |x, y| {
        let idx = y as usize * cols + x as usize;
        image::Rgb([0, 1, 2].map(|c| quantize(q.channel(c)[idx])))
    })
}

/// Decodes an 8-bit RGB image from memory (PNG or PPM).
pub fn decode_bytes(bytes: &[u8]) -> Result<RgbImage> {
    let img = image::load_from_memory(bytes).map_err(|e| Error::Format(e.to_string()))?;
    match img {
        DynamicImage::ImageRgb8(rgb) => Ok(rgb),
        other => Err(Error::Format(format!("expected 8-bit RGB, found {:?}", other.color()))),
    }
}

pub fn load_image(path: &Path) -> Result<ImageQ> {
    let bytes = std::fs::read(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    Ok(encode(&decode_bytes(&bytes)?))
}

/// Writes PNG, or binary PPM when the extension is `ppm`/`pnm`.
pub fn save_image(path: &Path, q: &ImageQ) -> Result<()> {
    let img = decode(q);
    let mut buf = Vec::new();
    let fmt = ImageFormat::from_path(path).unwrap_or(ImageFormat::Png);
    let res = match fmt {
        ImageFormat::Pnm => PnmEncoder::new(Cursor::new(&mut buf))
            .with_subtype(PnmSubtype::Pixmap(SampleEncoding::Binary))
            .write_image(img.as_raw(), img.width(), img.height(), image::ExtendedColorType::Rgb8),
        ImageFormat::Png => PngEncoder::new(Cursor::new(&mut buf)).write_image(
            img.as_raw(),
            img.width(),
            img.height(),
            image::ExtendedColorType::Rgb8,
        ),
        other => return Err(Error::Format(format!("unsupported output format {other:?}"))),
    };
    res.map_err(|e| Error::Format(e.to_string()))?;
    write_atomic(path, &buf)
}
