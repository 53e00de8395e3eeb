//! Templated English description of a chart.
//!
//! Level 1 covers how the chart is built (title, axes and their ranges,
//! number of lines). Level 2 adds one sentence group per line with its
//! extremes, overall trend and outlier count. The wording below is the
//! template; golden tests pin it byte for byte.

use serde::{Deserialize, Serialize};

use super::{MetadataError, Trend};
use crate::calibration::{format_significant, Axis, CalibrationSet};
use crate::session::{Chart, IncompleteSession, SeriesData, MISSING_CALIBRATION};

/// Significant digits for numbers in descriptions.
pub const DESCRIPTION_DIGITS: usize = 4;

pub const UNTITLED: &str = "untitled";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct DescriptionLevel(u8);

impl DescriptionLevel {
    pub const CONSTRUCTION: DescriptionLevel = DescriptionLevel(1);
    pub const STATISTICS: DescriptionLevel = DescriptionLevel(2);

    pub fn get(self) -> u8 {
        self.0
    }
}

impl Default for DescriptionLevel {
    fn default() -> Self {
        Self::STATISTICS
    }
}

impl TryFrom<u8> for DescriptionLevel {
    type Error = MetadataError;

    fn try_from(v: u8) -> Result<Self, Self::Error> {
        match v {
            1 | 2 => Ok(Self(v)),
            _ => Err(MetadataError::UnsupportedLevel(v)),
        }
    }
}

impl From<DescriptionLevel> for u8 {
    fn from(l: DescriptionLevel) -> u8 {
        l.0
    }
}

impl std::fmt::Display for DescriptionLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Description {
    pub text: String,
    /// Fields that fell back to a placeholder.
    pub warnings: Vec<String>,
}

pub fn generate_description(chart: &Chart, level: DescriptionLevel) -> Result<Description, MetadataError> {
    let data = chart.series_data().map_err(|e: IncompleteSession| {
        if e.missing.iter().any(|m| m.starts_with(MISSING_CALIBRATION)) {
            MetadataError::NoCalibration
        } else {
            MetadataError::NoSeries
        }
    })?;
    let cal = chart.valid_calibration().ok_or(MetadataError::NoCalibration)?;
    let mut warnings = Vec::new();
    let mut sentences = Vec::new();

    match chart.title() {
        Some(t) => sentences.push(format!("Line chart titled '{t}'.")),
        None => {
            warnings.push("plot title missing; used placeholder".to_string());
            sentences.push(format!("Line chart ({UNTITLED})."));
        }
    }
    for axis in [Axis::X, Axis::Y] {
        let fmt = |v: f64| cal.axis(axis).format_value(v, DESCRIPTION_DIGITS);
        let (lo, hi) = chart.extent(axis).ok_or(MetadataError::NoCalibration)?;
        match chart.axis_title(axis) {
            Some(t) => sentences.push(format!("The {axis}-axis shows {t} from {} to {}.", fmt(lo), fmt(hi))),
            None => {
                warnings.push(format!("{axis}-axis title missing; used placeholder"));
                sentences.push(format!("The {axis}-axis ({UNTITLED}) shows values from {} to {}.", fmt(lo), fmt(hi)));
            }
        }
    }
    sentences.push(match data.len() {
        1 => "It contains 1 line.".to_string(),
        n => format!("It contains {n} lines."),
    });

    if level.get() >= 2 {
        for (i, sd) in data.iter().enumerate() {
            sentences.extend(series_sentences(chart, cal, i, sd));
        }
    }

    Ok(Description {
        text: sentences.join(" "),
        warnings,
    })
}

/// Display name of the series at `index`, falling back to "Line n".
pub fn series_display_name(name: &str, index: usize) -> String {
    match name.trim() {
        "" => format!("Line {}", index + 1),
        n => n.to_string(),
    }
}

/// Trend and outlier sentences for one series.
pub(crate) fn series_sentences(chart: &Chart, cal: &CalibrationSet, index: usize, sd: &SeriesData<'_>) -> [String; 2] {
    let x_name = chart.axis_title(Axis::X).unwrap_or("x");
    let fx = |v: f64| cal.x_axis.format_value(v, DESCRIPTION_DIGITS);
    let fy = |v: f64| cal.y_axis.format_value(v, DESCRIPTION_DIGITS);
    let name = series_display_name(&sd.series.name, index);
    let s = &sd.stats;
    let min = format!("a minimum of {} at {x_name} {}", fy(s.min.y), fx(s.min.x));
    let max = format!("a maximum of {} at {x_name} {}", fy(s.max.y), fx(s.max.x));
    let trend = match s.trend {
        Trend::Increasing => format!("{name} rises overall, from {min} to {max}."),
        Trend::Decreasing => format!("{name} falls overall, from {max} to {min}."),
        Trend::Flat => format!("{name} stays flat overall, with {min} and {max}."),
        Trend::Mixed => format!("{name} fluctuates, with {min} and {max}."),
    };
    let outliers = match s.outliers.len() {
        0 => "No outliers detected.".to_string(),
        1 => "1 outlier detected.".to_string(),
        n => format!("{n} outliers detected."),
    };
    [trend, outliers]
}

/// Number formatting used in descriptions, exposed for tests and callers
/// that need to match the text.
pub fn format_description_number(v: f64) -> String {
    format_significant(v, DESCRIPTION_DIGITS)
}
