//! Signal and image files.

pub mod csv;
pub mod png;
pub mod pnm;

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::grid::Image2D;

pub use self::csv::{
    format_signal_csv, parse_signal_csv, read_signal_csv, write_metrics_csv, write_signal_csv,
};
pub use self::png::{read_png, write_png};
pub use self::pnm::{decode_pgm, encode_pgm, read_pgm, write_pgm, Gray, PgmEncoding};

/// `dir/name_t<k>.ext` for `dir/name.ext`.
pub fn snapshot_path(path: &Path, step: usize) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_t{step}.{}", ext.to_string_lossy()),
        None => format!("{stem}_t{step}"),
    };
    path.with_file_name(name)
}

fn extension(path: &Path) -> String {
    path.extension()
        .map(|e| e.to_string_lossy().to_ascii_lowercase())
        .unwrap_or_default()
}

/// Read a PGM (P2 or P5) or 8-bit grayscale PNG, chosen by file contents.
pub fn read_image(path: &Path) -> Result<Image2D> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.starts_with(b"\x89PNG") {
        self::png::decode_png(&bytes)
    } else if bytes.starts_with(b"P2") || bytes.starts_with(b"P5") {
        decode_pgm(&bytes)?.to_image()
    } else {
        Err(Error::Unsupported(format!(
            "{}: not a PGM or PNG file",
            path.display()
        )))
    }
}

/// Write by extension: `.png` as 8-bit PNG, anything else as binary 8-bit PGM.
pub fn write_image(path: &Path, img: &Image2D) -> Result<()> {
    if extension(path) == "png" {
        write_png(path, img)
    } else {
        write_pgm(path, &Gray::from_image(img, 255), PgmEncoding::Binary)
    }
}
