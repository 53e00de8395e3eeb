//! Pixel-domain line traces: tracing, import, sampling, editing and
//! trace-quality measurement.

mod edit;
mod frechet;
mod polyline;
mod raster;
mod series;
mod trace;

pub use edit::{apply_edit, invert, EditAction};
pub use frechet::frechet_distance;
pub use polyline::{default_keypoint_count, sample_equidistant, PixelPolyline};
pub use raster::{import_mask, import_polyline, MaskImage, RasterImage};
pub use series::{resample_series, series_to_data, LineSeries, SeriesId};
pub use trace::{mask_to_polyline, trace_color, DEFAULT_TOLERANCE, MAX_COLOR_DISTANCE};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtractionError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("dimension mismatch: expected {expected:?}, got {actual:?}")]
    DimensionMismatch { expected: (u32, u32), actual: (u32, u32) },
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error("invalid edit: {0}")]
    InvalidEdit(String),
}
