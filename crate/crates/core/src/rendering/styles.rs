use serde::{Deserialize, Serialize};

use super::RenderError;

/// Styles that stay tactually distinct before the cycle repeats.
pub const DISTINCT_STYLES: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrokePattern {
    Solid,
    /// 8 mm on, 4 mm off.
    Dashed,
    /// 0.8 mm on, 3 mm off.
    Dotted,
}

impl StrokePattern {
    /// `stroke-dasharray` value in millimetres.
    pub fn dasharray_mm(self) -> Option<&'static str> {
        match self {
            StrokePattern::Solid => None,
            StrokePattern::Dashed => Some("8 4"),
            StrokePattern::Dotted => Some("0.8 3"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TactileStyle {
    pub stroke_pattern: StrokePattern,
    pub stroke_width_mm: f64,
}

impl TactileStyle {
    pub const fn new(stroke_pattern: StrokePattern, stroke_width_mm: f64) -> Self {
        Self {
            stroke_pattern,
            stroke_width_mm,
        }
    }
}

const CYCLE: [TactileStyle; DISTINCT_STYLES] = [
    TactileStyle::new(StrokePattern::Solid, 1.0),
    TactileStyle::new(StrokePattern::Dashed, 1.0),
    TactileStyle::new(StrokePattern::Dotted, 1.0),
    TactileStyle::new(StrokePattern::Solid, 1.6),
    TactileStyle::new(StrokePattern::Dashed, 1.6),
    TactileStyle::new(StrokePattern::Dotted, 1.6),
];

#[derive(Clone, Debug, PartialEq)]
pub struct StyleAssignment {
    pub styles: Vec<TactileStyle>,
    /// Set when styles repeat and lines can no longer be told apart by touch.
    pub repeated: bool,
}

/// Default style for each of `n` lines.
pub fn assign_line_styles(n: usize) -> Result<StyleAssignment, RenderError> {
    if n == 0 {
        return Err(RenderError::NoSeries);
    }
    Ok(StyleAssignment {
        styles: (0..n).map(|i| CYCLE[i % DISTINCT_STYLES]).collect(),
        repeated: n > DISTINCT_STYLES,
    })
}
