//! Color images as pure quaternion matrices, missing-pixel masks and quality metrics.

mod codec;
mod mask_io;
mod metrics;
mod patterns;

pub use codec::{decode, decode_bytes, encode, load_image, save_image, ImageQ};
pub use mask_io::{load_mask, mask_from_json, mask_from_png, mask_to_json, mask_to_png, save_mask};
pub use metrics::{gaussian_window, matrix_psnr, psnr, psnr_from_mse, ssim, PEAK, SSIM_K1, SSIM_K2, SSIM_SIGMA, SSIM_WINDOW};
pub use patterns::{make_mask, parse_patterns, MaskPattern};

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// Writes `bytes` to a temporary file next to `path`, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let io = |source| Error::Io { path: path.to_path_buf(), source };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let mut f = std::fs::File::create(&tmp).map_err(io)?;
    f.write_all(bytes).and_then(|_| f.sync_all()).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}
