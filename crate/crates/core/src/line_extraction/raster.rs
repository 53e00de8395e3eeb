use serde::{Deserialize, Serialize};

use super::{ExtractionError, PixelPolyline};
use crate::geometry::PixelPoint;

/// Row-major RGBA8 bitmap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RasterImage {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl RasterImage {
    pub fn new(width: u32, height: u32, pixels: Vec<u8>) -> Result<Self, ExtractionError> {
        if width == 0 || height == 0 {
            return Err(ExtractionError::InvalidInput(format!("empty image {width}x{height}")));
        }
        let expected = 4 * width as usize * height as usize;
        if pixels.len() != expected {
            return Err(ExtractionError::InvalidInput(format!(
                "pixel buffer holds {} bytes, expected {expected}",
                pixels.len()
            )));
        }
        Ok(Self { width, height, pixels })
    }

    /// An image filled with a single color.
    pub fn filled(width: u32, height: u32, rgba: [u8; 4]) -> Result<Self, ExtractionError> {
        let pixels = rgba.repeat(width as usize * height as usize);
        Self::new(width, height, pixels)
    }

    /// Decodes PNG or JPEG bytes.
    pub fn decode(bytes: &[u8]) -> Result<Self, ExtractionError> {
        let img = image::load_from_memory(bytes).map_err(|e| ExtractionError::Format(e.to_string()))?;
        let rgba = img.to_rgba8();
        let (w, h) = rgba.dimensions();
        Self::new(w, h, rgba.into_raw())
    }

    /// Encodes as PNG.
    pub fn encode_png(&self) -> Vec<u8> {
        let mut out = Vec::new();
        let buf = image::RgbaImage::from_raw(self.width, self.height, self.pixels.clone())
            .expect("buffer length checked at construction");
        buf.write_to(&mut std::io::Cursor::new(&mut out), image::ImageFormat::Png)
            .expect("in-memory PNG encoding");
        out
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn dimensions(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn rgba(&self, x: u32, y: u32) -> [u8; 4] {
        let i = 4 * (y as usize * self.width as usize + x as usize);
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2], self.pixels[i + 3]]
    }

    pub fn put(&mut self, x: u32, y: u32, rgba: [u8; 4]) {
        let i = 4 * (y as usize * self.width as usize + x as usize);
        self.pixels[i..i + 4].copy_from_slice(&rgba);
    }

    /// Integer pixel containing `p`, if inside the image.
    pub fn pixel_at(&self, p: PixelPoint) -> Option<(u32, u32)> {
        if !(p.x.is_finite() && p.y.is_finite()) || p.x < 0.0 || p.y < 0.0 {
            return None;
        }
        let (x, y) = (p.x.floor(), p.y.floor());
        if x >= f64::from(self.width) || y >= f64::from(self.height) {
            return None;
        }
        Some((x as u32, y as u32))
    }
}

/// Row-major occupancy mask with the same dimensions as its source image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaskImage {
    width: u32,
    height: u32,
    bits: Vec<bool>,
}

impl MaskImage {
    pub fn empty(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            bits: vec![false; width as usize * height as usize],
        }
    }

    pub fn from_bits(width: u32, height: u32, bits: Vec<bool>) -> Result<Self, ExtractionError> {
        if bits.len() != width as usize * height as usize {
            return Err(ExtractionError::InvalidInput("mask bit count does not match dimensions".into()));
        }
        Ok(Self { width, height, bits })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn get(&self, x: u32, y: u32) -> bool {
        self.bits[y as usize * self.width as usize + x as usize]
    }

    pub fn set(&mut self, x: u32, y: u32, value: bool) {
        self.bits[y as usize * self.width as usize + x as usize] = value;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|b| *b)
    }

    /// Share of the image area that is occupied.
    pub fn coverage(&self) -> f64 {
        self.count() as f64 / self.bits.len().max(1) as f64
    }

    pub fn occupied(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let w = self.width as usize;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(move |(i, _)| ((i % w) as u32, (i / w) as u32))
    }
}

/// Decodes an externally produced mask (PNG, any bit depth). Any pixel with
/// nonzero luminance is occupied.
pub fn import_mask(png_bytes: &[u8], expected: (u32, u32)) -> Result<MaskImage, ExtractionError> {
    let img = image::load_from_memory(png_bytes).map_err(|e| ExtractionError::Format(e.to_string()))?;
    let luma = img.to_luma16();
    let actual = luma.dimensions();
    if actual != expected {
        return Err(ExtractionError::DimensionMismatch { expected, actual });
    }
    let bits = luma.pixels().map(|p| p.0[0] > 0).collect();
    MaskImage::from_bits(actual.0, actual.1, bits)
}

/// Parses a JSON list of `[x, y]` pixel pairs.
pub fn import_polyline(json: &str) -> Result<PixelPolyline, ExtractionError> {
    let pairs: Vec<[f64; 2]> = serde_json::from_str(json).map_err(|e| ExtractionError::Format(e.to_string()))?;
    if pairs.iter().flatten().any(|v| !v.is_finite()) {
        return Err(ExtractionError::Format("non-finite coordinate".into()));
    }
    let line = PixelPolyline::new(pairs.into_iter().map(PixelPoint::from).collect())?;
    if line.len() < 2 {
        return Err(ExtractionError::Format("a polyline needs at least 2 distinct points".into()));
    }
    Ok(line)
}
