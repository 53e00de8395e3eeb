//! Accessible outputs: screen-reader SVG, tactile print SVG, CSV and the
//! print-constraint validator.

mod braille;
mod csv;
mod digital;
mod labels;
mod page;
mod print;
mod styles;
mod svg;
mod validate;

pub use self::csv::{export_csv, parse_csv, ParsedCsv, CSV_DIGITS};
pub use braille::{braille_cells, is_braille, to_braille_grade1};
pub use labels::{label_budget, reduce_axis_labels, reduced_indices, MAX_PRINT_LABELS, MIN_PRINT_LABELS};
pub use page::{BrailleCell, PageSpec, MIN_BRAILLE_CLEARANCE_MM, MIN_STROKE_MM};
pub use styles::{assign_line_styles, StrokePattern, StyleAssignment, TactileStyle, DISTINCT_STYLES};
pub use validate::{validate_print_constraints, PrintReport, PrintViolation};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metadata::{generate_description, MetadataError};
use crate::session::{Chart, IncompleteSession};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RenderError {
    #[error(transparent)]
    Incomplete(#[from] IncompleteSession),
    #[error("at least one series is required")]
    NoSeries,
    #[error("unsupported character {0:?} for Braille translation")]
    UnsupportedCharacter(char),
    #[error("invalid page: {0}")]
    InvalidPage(String),
    #[error("page too small for the chart layout: {0}")]
    PageTooSmall(String),
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Description(#[from] MetadataError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RenderMode {
    DigitalAccessible,
    PrintAccessible,
}

/// A rendered document plus anything the operator should double-check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rendered {
    pub document: String,
    pub warnings: Vec<String>,
}

pub fn render_svg(chart: &Chart, mode: RenderMode, page: &PageSpec) -> Result<Rendered, RenderError> {
    match mode {
        RenderMode::DigitalAccessible => digital::render_digital(chart),
        RenderMode::PrintAccessible => print::render_print(chart, page),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportBundle {
    pub svg_digital: String,
    pub svg_print: String,
    pub csv: String,
    pub description: String,
    pub warnings: Vec<String>,
}

/// All four documents for a complete chart, using the chart's own options.
pub fn export_bundle(chart: &Chart) -> Result<ExportBundle, RenderError> {
    chart.require_complete()?;
    let page = chart.options.page;
    let digital = render_svg(chart, RenderMode::DigitalAccessible, &page)?;
    let print = render_svg(chart, RenderMode::PrintAccessible, &page)?;
    let description = generate_description(chart, chart.options.description_level)?;
    let mut warnings = chart.completeness().warnings;
    for w in digital.warnings.into_iter().chain(print.warnings).chain(description.warnings) {
        if !warnings.contains(&w) {
            warnings.push(w);
        }
    }
    Ok(ExportBundle {
        svg_digital: digital.document,
        svg_print: print.document,
        csv: export_csv(chart)?,
        description: description.text,
        warnings,
    })
}
