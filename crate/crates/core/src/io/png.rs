//! 8-bit grayscale PNG.

use std::io::Cursor;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{normalize, quantize, Image2D};

pub(crate) fn decode_png(bytes: &[u8]) -> Result<Image2D> {
    let decoder = png::Decoder::new(Cursor::new(bytes));
    let mut reader = decoder
        .read_info()
        .map_err(|e| Error::Format(format!("png: {e}")))?;
    let (color, depth) = reader.output_color_type();
    if color != png::ColorType::Grayscale || depth != png::BitDepth::Eight {
        return Err(Error::Unsupported(format!(
            "only 8-bit grayscale PNG is supported, got {color:?} at {depth:?}"
        )));
    }
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::Format("png: image too large".into()))?;
    let mut buf = vec![0; size];
    let info = reader
        .next_frame(&mut buf)
        .map_err(|e| Error::Format(format!("png: {e}")))?;
    let (w, h) = (info.width as usize, info.height as usize);
    let stride = info.line_size;
    let mut raw = Vec::with_capacity(w * h);
    for row in buf[..info.buffer_size()].chunks(stride).take(h) {
        raw.extend(row[..w].iter().map(|&b| b as u32));
    }
    normalize(&raw, 255, w, h)
}

pub fn read_png(path: &Path) -> Result<Image2D> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_png(&bytes)
}

pub(crate) fn encode_png(img: &Image2D) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    {
        let mut encoder = png::Encoder::new(&mut out, img.width() as u32, img.height() as u32);
        encoder.set_color(png::ColorType::Grayscale);
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder
            .write_header()
            .map_err(|e| Error::Format(format!("png: {e}")))?;
        let data: Vec<u8> = quantize(img, 255).into_iter().map(|v| v as u8).collect();
        writer
            .write_image_data(&data)
            .map_err(|e| Error::Format(format!("png: {e}")))?;
    }
    Ok(out)
}

pub fn write_png(path: &Path, img: &Image2D) -> Result<()> {
    let bytes = encode_png(img)?;
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}
