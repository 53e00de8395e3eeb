use std::fmt;

use serde::{Deserialize, Serialize};

use super::{sample_equidistant, ExtractionError, PixelPolyline};
use crate::calibration::{CalibrationError, CalibrationSet, DataPoint};
use crate::rendering::TactileStyle;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SeriesId(pub String);

impl fmt::Display for SeriesId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for SeriesId {
    fn from(s: &str) -> Self {
        Self(s.to_string())
    }
}

/// One digitized line: editable keypoints in pixel space.
///
/// Keypoints are kept in ascending `x`, ties in insertion order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineSeries {
    pub id: SeriesId,
    pub name: String,
    pub keypoints: PixelPolyline,
    /// Explicit tactile style; `None` takes the next one from the default cycle.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub style: Option<TactileStyle>,
    pub keypoint_count_target: usize,
}

impl LineSeries {
    /// Samples `n` equidistant keypoints from a full-resolution trace.
    pub fn from_trace(id: SeriesId, name: impl Into<String>, source: &PixelPolyline, n: usize) -> Result<Self, ExtractionError> {
        let keypoints = sorted_by_x(sample_equidistant(source, n)?)?;
        Ok(Self {
            id,
            name: name.into(),
            keypoints,
            style: None,
            keypoint_count_target: n,
        })
    }

    pub fn len(&self) -> usize {
        self.keypoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keypoints.is_empty()
    }
}

fn sorted_by_x(line: PixelPolyline) -> Result<PixelPolyline, ExtractionError> {
    let mut pts = line.into_points();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x));
    PixelPolyline::new(pts)
}

/// Replaces the keypoints with a fresh equidistant sampling of `source`.
/// Manual edits are discarded.
pub fn resample_series(series: &LineSeries, new_n: usize, source: &PixelPolyline) -> Result<LineSeries, ExtractionError> {
    let keypoints = sorted_by_x(sample_equidistant(source, new_n)?)?;
    Ok(LineSeries {
        keypoints,
        keypoint_count_target: new_n,
        ..series.clone()
    })
}

/// Keypoints mapped into the data domain, order preserved.
pub fn series_to_data(series: &LineSeries, cal: &CalibrationSet) -> Result<Vec<DataPoint>, CalibrationError> {
    series.keypoints.points().iter().map(|p| cal.pixel_to_data(*p)).collect()
}
