use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calibration::{
    default_calibration, parse_iso8601, Axis, AxisCalibration, AxisScaleKind, CalibrationError, CalibrationSet,
    DataPoint,
};
use crate::line_extraction::{series_to_data, LineSeries, PixelPolyline, SeriesId};
use crate::metadata::{compute_stats, parse_label_number, DescriptionLevel, SeriesStats, TextFieldKind, TextMetadata};
use crate::rendering::PageSpec;

pub const MISSING_CALIBRATION: &str = "calibration";
pub const MISSING_SERIES: &str = "series";

/// The export needs items the chart does not have yet.
#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[error("incomplete session, missing: {}", .missing.join(", "))]
pub struct IncompleteSession {
    pub missing: Vec<String>,
}

/// A digitized series together with the full-resolution trace it was
/// sampled from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesEntry {
    pub series: LineSeries,
    pub source: PixelPolyline,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[derive(Default)]
pub struct RenderOptions {
    pub page: PageSpec,
    pub description_level: DescriptionLevel,
}


/// What is still missing before export, plus softer warnings.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Completeness {
    pub missing: Vec<String>,
    pub warnings: Vec<String>,
}

impl Completeness {
    pub fn is_complete(&self) -> bool {
        self.missing.is_empty()
    }
}

/// Everything a conversion produces, independent of who edits it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chart {
    pub image_size: (u32, u32),
    pub calibration: Option<CalibrationSet>,
    pub series: Vec<SeriesEntry>,
    pub metadata: TextMetadata,
    pub options: RenderOptions,
}

/// A series mapped into data space with its statistics.
#[derive(Clone, Debug)]
pub struct SeriesData<'a> {
    pub series: &'a LineSeries,
    pub points: Vec<DataPoint>,
    pub stats: SeriesStats,
}

impl Chart {
    /// A fresh chart with default anchors.
    pub fn new(width: u32, height: u32) -> Result<Self, CalibrationError> {
        Ok(Self {
            image_size: (width, height),
            calibration: Some(default_calibration(width, height)?),
            series: Vec::new(),
            metadata: TextMetadata::default(),
            options: RenderOptions::default(),
        })
    }

    pub fn valid_calibration(&self) -> Option<&CalibrationSet> {
        self.calibration.as_ref().filter(|c| c.validate().is_empty())
    }

    pub fn series_index(&self, id: &SeriesId) -> Option<usize> {
        self.series.iter().position(|e| &e.series.id == id)
    }

    pub fn series_entry(&self, id: &SeriesId) -> Option<&SeriesEntry> {
        self.series.iter().find(|e| &e.series.id == id)
    }

    /// Next free id of the form `s<n>`; derived from existing ids so it is
    /// a pure function of the chart.
    pub fn next_series_id(&self) -> SeriesId {
        let max = self
            .series
            .iter()
            .filter_map(|e| e.series.id.0.strip_prefix('s')?.parse::<u64>().ok())
            .max()
            .unwrap_or(0);
        SeriesId(format!("s{}", max + 1))
    }

    pub fn completeness(&self) -> Completeness {
        let mut c = Completeness::default();
        if self.valid_calibration().is_none() {
            c.missing.push(MISSING_CALIBRATION.into());
        }
        if self.series.is_empty() {
            c.missing.push(MISSING_SERIES.into());
        }
        for (kind, label) in [
            (TextFieldKind::PlotTitle, "plot title"),
            (TextFieldKind::XAxisTitle, "x-axis title"),
            (TextFieldKind::YAxisTitle, "y-axis title"),
        ] {
            if self.metadata.text(kind).is_none() {
                c.warnings.push(format!("{label} is empty"));
            }
        }
        if self.series.len() > crate::rendering::DISTINCT_STYLES {
            c.warnings.push(format!(
                "{} lines exceed the {} tactile styles that stay distinguishable",
                self.series.len(),
                crate::rendering::DISTINCT_STYLES
            ));
        }
        c
    }

    /// Errors unless calibration and at least one series are present.
    pub fn require_complete(&self) -> Result<&CalibrationSet, IncompleteSession> {
        let c = self.completeness();
        if !c.is_complete() {
            return Err(IncompleteSession { missing: c.missing });
        }
        Ok(self.valid_calibration().expect("checked by completeness"))
    }

    /// Every series in data space, in session order.
    pub fn series_data(&self) -> Result<Vec<SeriesData<'_>>, IncompleteSession> {
        let cal = self.require_complete()?;
        self.series
            .iter()
            .map(|e| {
                let points = series_to_data(&e.series, cal).map_err(|err| IncompleteSession {
                    missing: vec![format!("{MISSING_CALIBRATION} ({err})")],
                })?;
                let stats = compute_stats(&points).expect("series keep at least one keypoint");
                Ok(SeriesData {
                    series: &e.series,
                    points,
                    stats,
                })
            })
            .collect()
    }

    pub fn axis_title(&self, axis: Axis) -> Option<&str> {
        self.metadata.text(TextFieldKind::title_for(axis))
    }

    pub fn title(&self) -> Option<&str> {
        self.metadata.text(TextFieldKind::PlotTitle)
    }

    /// Value range spanned on `axis` by the anchors, the digitized data and
    /// any labels that read as values on that axis. `None` without a valid
    /// calibration.
    pub fn extent(&self, axis: Axis) -> Option<(f64, f64)> {
        let cal = self.valid_calibration()?;
        let axis_cal = cal.axis(axis);
        let mut values = vec![axis_cal.p1.value, axis_cal.p2.value];
        for e in &self.series {
            for p in e.series.keypoints.points() {
                let d = cal.pixel_to_data(*p).ok()?;
                values.push(match axis {
                    Axis::X => d.x,
                    Axis::Y => d.y,
                });
            }
        }
        values.extend(
            self.metadata
                .labels(TextFieldKind::labels_for(axis))
                .iter()
                .filter_map(|l| label_value(axis_cal, l)),
        );
        let lo = values.iter().copied().filter(|v| v.is_finite()).fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().filter(|v| v.is_finite()).fold(f64::NEG_INFINITY, f64::max);
        Some((lo, hi))
    }
}

/// Reads an axis label as a value on `axis`, if it is one.
pub fn label_value(axis: &AxisCalibration, label: &str) -> Option<f64> {
    match axis.kind {
        AxisScaleKind::Time => parse_iso8601(label.trim()).map(|(v, _)| v),
        AxisScaleKind::Log10 => parse_label_number(label).filter(|v| *v > 0.0),
        AxisScaleKind::Linear => parse_label_number(label),
    }
}
