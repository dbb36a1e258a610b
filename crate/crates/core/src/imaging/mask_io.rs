//! Mask files: 1-bit grayscale PNG (255 observed, 0 missing) or JSON
//! `{rows, cols, missing: [[i, j], ...]}`.

use std::io::Cursor;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::write_atomic;
use crate::completion::Mask;
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct MaskJson {
    rows: usize,
    cols: usize,
    missing: Vec<[usize; 2]>,
}

pub fn mask_to_png(mask: &Mask) -> Result<Vec<u8>> {
    let (rows, cols) = mask.shape();
    let stride = cols.div_ceil(8);
    let mut packed = vec![0u8; stride * rows];
    for i in 0..rows {
        for j in 0..cols {
            if mask.is_observed(i, j) {
                packed[i * stride + j / 8] |= 0x80 >> (j % 8);
            }
        }
    }
    let mut buf = Vec::new();
    let mut enc = png::Encoder::new(&mut buf, cols as u32, rows as u32);
    enc.set_color(png::ColorType::Grayscale);
    enc.set_depth(png::BitDepth::One);
    let fmt = |e: png::EncodingError| Error::Format(e.to_string());
    let mut writer = enc.write_header().map_err(fmt)?;
    writer.write_image_data(&packed).map_err(fmt)?;
    writer.finish().map_err(fmt)?;
    Ok(buf)
}

/// Reads a grayscale PNG of any bit depth; nonzero pixels are observed.
pub fn mask_from_png(bytes: &[u8]) -> Result<Mask> {
    let fmt = |e: png::DecodingError| Error::Format(e.to_string());
    let mut dec = png::Decoder::new(Cursor::new(bytes));
    dec.set_transformations(png::Transformations::EXPAND | png::Transformations::STRIP_16);
    let mut reader = dec.read_info().map_err(fmt)?;
    let size = reader.output_buffer_size().ok_or_else(|| Error::Format("mask image too large".into()))?;
    let mut buf = vec![0u8; size];
    let info = reader.next_frame(&mut buf).map_err(fmt)?;
    if info.color_type != png::ColorType::Grayscale {
        return Err(Error::Format(format!("mask must be grayscale, found {:?}", info.color_type)));
    }
    let (rows, cols) = (info.height as usize, info.width as usize);
    let observed = (0..rows)
        .flat_map(|i| buf[i * info.line_size..i * info.line_size + cols].iter().map(|&v| v != 0))
        .collect();
    Mask::from_observed(rows, cols, observed)
}

pub fn mask_to_json(mask: &Mask) -> Result<String> {
    let doc = MaskJson { rows: mask.rows(), cols: mask.cols(), missing: mask.missing_positions() };
    serde_json::to_string(&doc).map_err(|e| Error::Format(e.to_string()))
}

pub fn mask_from_json(text: &str) -> Result<Mask> {
    let doc: MaskJson = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let mut mask = Mask::full(doc.rows, doc.cols);
    for [i, j] in doc.missing {
        if i >= doc.rows || j >= doc.cols {
            return Err(Error::Format(format!("missing entry ({i}, {j}) outside {}x{}", doc.rows, doc.cols)));
        }
        mask.set_observed(i, j, false);
    }
    Ok(mask)
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

/// Saves as JSON when the extension is `json`, PNG otherwise.
pub fn save_mask(path: &Path, mask: &Mask) -> Result<()> {
    let bytes = if is_json(path) { mask_to_json(mask)?.into_bytes() } else { mask_to_png(mask)? };
    write_atomic(path, &bytes)
}

pub fn load_mask(path: &Path) -> Result<Mask> {
    let bytes = std::fs::read(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    if is_json(path) {
        let text = std::str::from_utf8(&bytes).map_err(|e| Error::Format(e.to_string()))?;
        mask_from_json(text)
    } else {
        mask_from_png(&bytes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::{make_mask, MaskPattern};

    fn sample() -> Mask {
        make_mask(&[MaskPattern::Random { p: 0.4, seed: 12 }], 13, 19).unwrap()
    }

    #[test]
    fn png_round_trip() {
        let m = sample();
        let bytes = mask_to_png(&m).unwrap();
        assert_eq!(mask_from_png(&bytes).unwrap(), m);
    }

    #[test]
    fn json_round_trip() {
        let m = sample();
        assert_eq!(mask_from_json(&mask_to_json(&m).unwrap()).unwrap(), m);
        assert!(mask_from_json(r#"{"rows":2,"cols":2,"missing":[[2,0]]}"#).is_err());
    }

    #[test]
    fn files_by_extension() {
        let dir = tempfile::tempdir().unwrap();
        let m = sample();
        for name in ["m.png", "m.json"] {
            let path = dir.path().join(name);
            save_mask(&path, &m).unwrap();
            assert_eq!(load_mask(&path).unwrap(), m);
        }
    }
}
