//! Binary PGM (P5) images and their mapping onto multi-resolution grids.

use std::path::Path;

use super::twod::Grid2D;
use crate::error::{invalid, Error, Result};

/// 8-bit grayscale image, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if pixels.len() != width * height || width == 0 || height == 0 {
            return invalid(format!("{width}x{height} image needs {} pixels", width * height));
        }
        Ok(GrayImage { width, height, pixels })
    }

    /// Pixels as reals in `[0, peak]` (`peak = 255` keeps raw intensities).
    pub fn to_grid(&self, peak: f64) -> Grid2D {
        let s = peak / 255.0;
        Grid2D {
            nx: self.width - 1,
            ny: self.height - 1,
            values: self.pixels.iter().map(|&v| v as f64 * s).collect(),
        }
    }

    /// Inverse of [`GrayImage::to_grid`], rounding and clamping to 8 bits.
    pub fn from_grid(g: &Grid2D, peak: f64) -> GrayImage {
        let s = 255.0 / peak;
        GrayImage {
            width: g.width(),
            height: g.height(),
            pixels: g.values.iter().map(|v| (v * s).round().clamp(0.0, 255.0) as u8).collect(),
        }
    }

    /// Copy resized to `w x h` by cropping or repeating the last row/column.
    pub fn fit(&self, w: usize, h: usize) -> GrayImage {
        let mut pixels = Vec::with_capacity(w * h);
        for j in 0..h {
            let sj = j.min(self.height - 1);
            for i in 0..w {
                pixels.push(self.pixels[sj * self.width + i.min(self.width - 1)]);
            }
        }
        GrayImage {
            width: w,
            height: h,
            pixels,
        }
    }
}

fn next_token<'a>(data: &'a [u8], pos: &mut usize) -> Result<&'a [u8]> {
    loop {
        while *pos < data.len() && data[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < data.len() && data[*pos] == b'#' {
            while *pos < data.len() && data[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < data.len() && !data[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::Parse("truncated PGM header".into()));
    }
    Ok(&data[start..*pos])
}

fn header_number(data: &[u8], pos: &mut usize, what: &str) -> Result<usize> {
    let t = next_token(data, pos)?;
    std::str::from_utf8(t)
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad PGM {what}")))
}

pub fn parse_pgm(data: &[u8]) -> Result<GrayImage> {
    let mut pos = 0;
    if next_token(data, &mut pos)? != b"P5" {
        return Err(Error::Parse("not a binary PGM (P5) file".into()));
    }
    let width = header_number(data, &mut pos, "width")?;
    let height = header_number(data, &mut pos, "height")?;
    let maxval = header_number(data, &mut pos, "maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(Error::Unsupported(format!("PGM maxval {maxval}; only 8-bit images are supported")));
    }
    // exactly one whitespace byte separates the header from the raster
    pos += 1;
    let n = width * height;
    if data.len() < pos + n {
        return Err(Error::Parse("PGM raster is truncated".into()));
    }
    GrayImage::new(width, height, data[pos..pos + n].to_vec())
}

pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.pixels);
    out
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    parse_pgm(&std::fs::read(path)?)
}

pub fn write_pgm(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, encode_pgm(img))?;
    Ok(())
}

/// Closest size of the form `N 2^K + 1` with `N >= 1`; ties round up.
pub fn nearest_valid(len: usize, k: usize) -> usize {
    let step = 1usize << k;
    let n = ((len.saturating_sub(1) + step / 2) / step).max(1);
    n * step + 1
}

/// Crops or pads (by edge replication) to the nearest valid grid size.
pub fn fit_to_levels(img: &GrayImage, k: usize) -> GrayImage {
    img.fit(nearest_valid(img.width, k), nearest_valid(img.height, k))
}

/// Deterministic piecewise-smooth test scene: shaded background, a disk,
/// a rectangle, a soft ring and a diagonal band.
pub fn synthetic_scene(width: usize, height: usize) -> GrayImage {
    let mut pixels = Vec::with_capacity(width * height);
    let (w, h) = (width as f64, height as f64);
    for j in 0..height {
        let y = j as f64 / h;
        for i in 0..width {
            let x = i as f64 / w;
            let mut v = 90.0 + 60.0 * x + 30.0 * y * y;
            let r = ((x - 0.35).powi(2) + (y - 0.4).powi(2)).sqrt();
            if r < 0.18 {
                v = 200.0 - 80.0 * r;
            }
            if (0.6..0.85).contains(&x) && (0.55..0.8).contains(&y) {
                v = 40.0 + 20.0 * (x - 0.6);
            }
            let ring = ((x - 0.7).powi(2) + (y - 0.25).powi(2)).sqrt();
            v += 35.0 * (-((ring - 0.12) / 0.03).powi(2)).exp();
            if (x - y - 0.55).abs() < 0.04 {
                v = 230.0;
            }
            pixels.push(v.round().clamp(0.0, 255.0) as u8);
        }
    }
    GrayImage {
        width,
        height,
        pixels,
    }
}
