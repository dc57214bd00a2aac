//! Image file I/O: PNG (8/16-bit gray, gray+alpha, RGB, RGBA) and binary
//! PGM (P5) in; 8-bit gray PNG or PGM out.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use image::{DynamicImage, ExtendedColorType, ImageFormat};

use crate::error::{Error, Result};
use crate::grid::{BinaryMap, Grid, ScalarField};

/// BT.709 luma weights.
const LUMA_R: f64 = 0.2126;
const LUMA_G: f64 = 0.7152;
const LUMA_B: f64 = 0.0722;

const PNG_MAGIC: &[u8] = b"\x89PNG";

pub fn load_image(path: impl AsRef<Path>) -> Result<ScalarField> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_image(&bytes)
}

/// Decodes PNG or P5 bytes into a gray field in `[0, 1]`.
pub fn decode_image(bytes: &[u8]) -> Result<ScalarField> {
    if bytes.starts_with(PNG_MAGIC) {
        decode_png(bytes)
    } else if bytes.starts_with(b"P5") {
        decode_pgm(bytes)
    } else {
        Err(Error::Format("expected a PNG or binary PGM (P5) file".into()))
    }
}

#[inline]
fn luma(r: f64, g: f64, b: f64) -> f64 {
    (LUMA_R * r + LUMA_G * g + LUMA_B * b).clamp(0.0, 1.0)
}

/// Interleaved 8-bit RGBA pixels (alpha ignored) to luma in `[0, 1]`.
pub fn from_rgba8(width: usize, height: usize, rgba: &[u8]) -> Result<ScalarField> {
    if rgba.len() != width * height * 4 {
        return Err(Error::Dimension(format!(
            "{width}x{height} RGBA needs {} bytes, got {}",
            width * height * 4,
            rgba.len()
        )));
    }
    let samples = rgba
        .chunks_exact(4)
        .map(|p| luma(p[0] as f64 / 255.0, p[1] as f64 / 255.0, p[2] as f64 / 255.0))
        .collect();
    ScalarField::new(width, height, samples)
}

fn decode_png(bytes: &[u8]) -> Result<ScalarField> {
    let img = image::load_from_memory_with_format(bytes, ImageFormat::Png).map_err(|e| Error::Format(e.to_string()))?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    if w == 0 || h == 0 {
        return Err(Error::Dimension("image has a zero dimension".into()));
    }
    const S8: f64 = 255.0;
    const S16: f64 = 65535.0;
    let samples: Vec<f64> = match &img {
        DynamicImage::ImageLuma8(b) => b.as_raw().iter().map(|&v| f64::from(v) / S8).collect(),
        DynamicImage::ImageLumaA8(b) => b.pixels().map(|p| f64::from(p.0[0]) / S8).collect(),
        DynamicImage::ImageLuma16(b) => b.as_raw().iter().map(|&v| f64::from(v) / S16).collect(),
        DynamicImage::ImageLumaA16(b) => b.pixels().map(|p| f64::from(p.0[0]) / S16).collect(),
        DynamicImage::ImageRgb8(b) => b
            .pixels()
            .map(|p| luma(f64::from(p.0[0]) / S8, f64::from(p.0[1]) / S8, f64::from(p.0[2]) / S8))
            .collect(),
        DynamicImage::ImageRgba8(b) => b
            .pixels()
            .map(|p| luma(f64::from(p.0[0]) / S8, f64::from(p.0[1]) / S8, f64::from(p.0[2]) / S8))
            .collect(),
        DynamicImage::ImageRgb16(b) => b
            .pixels()
            .map(|p| {
                luma(
                    f64::from(p.0[0]) / S16,
                    f64::from(p.0[1]) / S16,
                    f64::from(p.0[2]) / S16,
                )
            })
            .collect(),
        DynamicImage::ImageRgba16(b) => b
            .pixels()
            .map(|p| {
                luma(
                    f64::from(p.0[0]) / S16,
                    f64::from(p.0[1]) / S16,
                    f64::from(p.0[2]) / S16,
                )
            })
            .collect(),
        other => return Err(Error::Format(format!("unsupported PNG color type {:?}", other.color()))),
    };
    ScalarField::new(w, h, samples)
}

/// Splits the next whitespace-delimited header token, skipping `#` comments.
fn next_token<'a>(bytes: &'a [u8], pos: &mut usize) -> Result<&'a [u8]> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() && bytes[*pos] != b'#' {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::Format("truncated PGM header".into()));
    }
    Ok(&bytes[start..*pos])
}

fn header_number(bytes: &[u8], pos: &mut usize, what: &str) -> Result<usize> {
    let tok = next_token(bytes, pos)?;
    std::str::from_utf8(tok)
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .ok_or_else(|| Error::Format(format!("bad PGM {what}")))
}

fn decode_pgm(bytes: &[u8]) -> Result<ScalarField> {
    let mut pos = 0;
    if next_token(bytes, &mut pos)? != b"P5" {
        return Err(Error::Format("not a binary PGM".into()));
    }
    let width = header_number(bytes, &mut pos, "width")?;
    let height = header_number(bytes, &mut pos, "height")?;
    let maxval = header_number(bytes, &mut pos, "maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::Dimension("image has a zero dimension".into()));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::Format(format!("PGM maxval {maxval} out of range")));
    }
    // exactly one whitespace byte separates the header from the raster
    pos += 1;
    let n = width * height;
    let depth = if maxval < 256 { 1 } else { 2 };
    let raster = bytes
        .get(pos..pos + n * depth)
        .ok_or_else(|| Error::Format("truncated PGM raster".into()))?;
    let scale = maxval as f64;
    let samples = if depth == 1 {
        raster.iter().map(|&v| (f64::from(v) / scale).min(1.0)).collect()
    } else {
        raster
            .chunks_exact(2)
            .map(|c| (f64::from(u16::from_be_bytes([c[0], c[1]])) / scale).min(1.0))
            .collect()
    };
    ScalarField::new(width, height, samples)
}

/// Anything that can be written as an 8-bit gray image.
pub trait ToGray8 {
    /// `(width, height, row-major bytes)`.
    fn to_gray8(&self) -> (usize, usize, Vec<u8>);
}

/// Round-half-up quantization of a `[0, 1]` sample.
#[inline]
pub fn quantize(v: f64) -> u8 {
    (255.0 * v + 0.5).floor().clamp(0.0, 255.0) as u8
}

impl ToGray8 for ScalarField {
    fn to_gray8(&self) -> (usize, usize, Vec<u8>) {
        (
            self.width(),
            self.height(),
            self.data().iter().map(|&v| quantize(v)).collect(),
        )
    }
}

impl ToGray8 for BinaryMap {
    fn to_gray8(&self) -> (usize, usize, Vec<u8>) {
        (
            self.width(),
            self.height(),
            self.data().iter().map(|&b| b * 255).collect(),
        )
    }
}

impl ToGray8 for Grid<u8> {
    fn to_gray8(&self) -> (usize, usize, Vec<u8>) {
        (self.width(), self.height(), self.data().to_vec())
    }
}

/// Writes an 8-bit gray image. `.pgm` paths get binary PGM, everything else
/// PNG.
pub fn save_image(image: &impl ToGray8, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let (w, h, bytes) = image.to_gray8();
    let is_pgm = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("pgm"));
    if is_pgm {
        let mut out = format!("P5\n{w} {h}\n255\n").into_bytes();
        out.extend_from_slice(&bytes);
        fs::write(path, out).map_err(|e| Error::io(path, e))
    } else {
        fs::write(path, encode_png(w, h, &bytes)?).map_err(|e| Error::io(path, e))
    }
}

/// Encodes 8-bit gray samples as PNG bytes.
pub fn encode_png(width: usize, height: usize, gray: &[u8]) -> Result<Vec<u8>> {
    let mut out = std::io::Cursor::new(Vec::new());
    image::write_buffer_with_format(
        &mut out,
        gray,
        width as u32,
        height as u32,
        ExtendedColorType::L8,
        ImageFormat::Png,
    )
    .map_err(|e| Error::Format(e.to_string()))?;
    Ok(out.into_inner())
}

/// PNG or PGM by extension, case-insensitively.
pub fn is_supported_image(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("png") || e.eq_ignore_ascii_case("pgm"))
}

/// Supported images under `root`, keyed by `/`-joined relative path without
/// extension.
pub fn list_images(root: &Path) -> Result<BTreeMap<String, PathBuf>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<String, PathBuf>) -> Result<()> {
        let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
        let mut paths: Vec<PathBuf> = entries
            .map(|e| e.map(|e| e.path()).map_err(|err| Error::io(dir, err)))
            .collect::<Result<_>>()?;
        paths.sort();
        for path in paths {
            if path.is_dir() {
                walk(root, &path, out)?;
            } else if is_supported_image(&path) {
                let rel = path.strip_prefix(root).unwrap_or(&path).with_extension("");
                let key = rel
                    .components()
                    .map(|c| c.as_os_str().to_string_lossy())
                    .collect::<Vec<_>>()
                    .join("/");
                out.entry(key).or_insert(path);
            }
        }
        Ok(())
    }
    let mut out = BTreeMap::new();
    walk(root, root, &mut out)?;
    Ok(out)
}
