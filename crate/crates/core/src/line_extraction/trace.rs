use std::collections::VecDeque;

use super::{ExtractionError, MaskImage, PixelPolyline, RasterImage};
use crate::geometry::PixelPoint;

/// Largest possible Euclidean distance between two 8-bit RGB colors.
pub const MAX_COLOR_DISTANCE: f64 = 441.672_955_930_063_7;

pub const DEFAULT_TOLERANCE: f64 = 40.0;

fn color_distance_sq(a: [u8; 4], b: [u8; 4]) -> u32 {
    (0..3)
        .map(|i| {
            let d = i32::from(a[i]) - i32::from(b[i]);
            (d * d) as u32
        })
        .sum()
}

/// 8-connected flood fill from `seed` over pixels whose RGB distance to the
/// seed color is within `tolerance`.
pub fn trace_color(image: &RasterImage, seed: PixelPoint, tolerance: f64) -> Result<MaskImage, ExtractionError> {
    if !(0.0..=MAX_COLOR_DISTANCE + 1e-9).contains(&tolerance) {
        return Err(ExtractionError::InvalidInput(format!(
            "tolerance {tolerance} outside 0..{MAX_COLOR_DISTANCE:.2}"
        )));
    }
    let (sx, sy) = image.pixel_at(seed).ok_or_else(|| {
        ExtractionError::InvalidInput(format!("seed ({}, {}) lies outside the image", seed.x, seed.y))
    })?;
    let (w, h) = image.dimensions();
    let target = image.rgba(sx, sy);
    // Compare squared integer distances so the boundary is exact.
    let limit = (tolerance * tolerance).floor() as u32;

    let mut mask = MaskImage::empty(w, h);
    let mut queue = VecDeque::new();
    mask.set(sx, sy, true);
    queue.push_back((sx, sy));
    while let Some((x, y)) = queue.pop_front() {
        for dy in -1i64..=1 {
            for dx in -1i64..=1 {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let (nx, ny) = (i64::from(x) + dx, i64::from(y) + dy);
                if nx < 0 || ny < 0 || nx >= i64::from(w) || ny >= i64::from(h) {
                    continue;
                }
                let (nx, ny) = (nx as u32, ny as u32);
                if mask.get(nx, ny) || color_distance_sq(image.rgba(nx, ny), target) > limit {
                    continue;
                }
                mask.set(nx, ny, true);
                queue.push_back((nx, ny));
            }
        }
    }
    Ok(mask)
}

/// One point per occupied column: the column center and the mean center of
/// its occupied pixels. Empty columns are skipped.
pub fn mask_to_polyline(mask: &MaskImage) -> Result<PixelPolyline, ExtractionError> {
    let (w, h) = (mask.width(), mask.height());
    let mut points = Vec::new();
    for x in 0..w {
        let (mut sum, mut count) = (0.0, 0usize);
        for y in 0..h {
            if mask.get(x, y) {
                sum += f64::from(y) + 0.5;
                count += 1;
            }
        }
        if count > 0 {
            points.push(PixelPoint::new(f64::from(x) + 0.5, sum / count as f64));
        }
    }
    if points.is_empty() {
        return Err(ExtractionError::EmptyInput("mask has no occupied pixels"));
    }
    PixelPolyline::new(points)
}
