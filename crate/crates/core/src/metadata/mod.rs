//! Text fields, OCR suggestions, descriptive statistics and the templated
//! chart description.

mod description;
mod ocr;
mod stats;
mod text;

pub use description::{
    format_description_number, generate_description, series_display_name, Description, DescriptionLevel, DESCRIPTION_DIGITS,
    UNTITLED,
};
pub(crate) use description::series_sentences;
pub use ocr::{AnnotationOcr, OcrEngine, OcrError, UnavailableOcr};
pub use stats::{compute_stats, quartile, SeriesStats, Trend};
pub use text::{
    classify_text_role, parse_label_number, sort_axis_labels, Provenance, TextBox, TextFieldKind, TextMetadata,
    TextSlot, TextValue,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetadataError {
    #[error("field {field} expects {expected}")]
    WrongShape { field: TextFieldKind, expected: &'static str },
    #[error("numeric labels of {0} are not strictly monotone")]
    NotMonotone(TextFieldKind),
    #[error("statistics need at least one point")]
    NoPoints,
    #[error("cannot describe a chart without digitized series")]
    NoSeries,
    #[error("cannot describe a chart without a valid calibration")]
    NoCalibration,
    #[error("unsupported description level {0}; levels 1 and 2 are defined")]
    UnsupportedLevel(u8),
}
