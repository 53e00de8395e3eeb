use serde::{Deserialize, Serialize};

use super::{ExtractionError, LineSeries, SeriesId};
use crate::geometry::PixelPoint;

/// A single keypoint edit. Every variant carries the state needed to undo it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum EditAction {
    AddPoint {
        series: SeriesId,
        index: usize,
        point: PixelPoint,
    },
    MovePoint {
        series: SeriesId,
        index: usize,
        from: PixelPoint,
        to: PixelPoint,
    },
    DeletePoint {
        series: SeriesId,
        index: usize,
        point: PixelPoint,
    },
}

impl EditAction {
    /// An `AddPoint` at the slot that keeps `x` ascending; a point whose `x`
    /// ties existing keypoints goes after them.
    pub fn add_point(series: &LineSeries, point: PixelPoint) -> Self {
        let index = series.keypoints.points().partition_point(|p| p.x <= point.x);
        EditAction::AddPoint {
            series: series.id.clone(),
            index,
            point,
        }
    }

    pub fn move_point(series: &LineSeries, index: usize, to: PixelPoint) -> Result<Self, ExtractionError> {
        let from = *series
            .keypoints
            .points()
            .get(index)
            .ok_or_else(|| out_of_range(index, series.len()))?;
        Ok(EditAction::MovePoint {
            series: series.id.clone(),
            index,
            from,
            to,
        })
    }

    pub fn delete_point(series: &LineSeries, index: usize) -> Result<Self, ExtractionError> {
        let point = *series
            .keypoints
            .points()
            .get(index)
            .ok_or_else(|| out_of_range(index, series.len()))?;
        Ok(EditAction::DeletePoint {
            series: series.id.clone(),
            index,
            point,
        })
    }

    pub fn series(&self) -> &SeriesId {
        match self {
            EditAction::AddPoint { series, .. }
            | EditAction::MovePoint { series, .. }
            | EditAction::DeletePoint { series, .. } => series,
        }
    }
}

fn out_of_range(index: usize, len: usize) -> ExtractionError {
    ExtractionError::InvalidEdit(format!("point index {index} out of range for {len} keypoints"))
}

/// Checks that `p` may sit between `before` and `after` without breaking
/// x ordering or creating a consecutive duplicate.
fn check_slot(before: Option<&PixelPoint>, p: PixelPoint, after: Option<&PixelPoint>) -> Result<(), ExtractionError> {
    if !(p.x.is_finite() && p.y.is_finite()) {
        return Err(ExtractionError::InvalidEdit("non-finite coordinate".into()));
    }
    if before.is_some_and(|b| b.x > p.x) || after.is_some_and(|a| a.x < p.x) {
        return Err(ExtractionError::InvalidEdit(format!(
            "point ({}, {}) would break ascending x order",
            p.x, p.y
        )));
    }
    if before == Some(&p) || after == Some(&p) {
        return Err(ExtractionError::InvalidEdit("point duplicates its neighbour".into()));
    }
    Ok(())
}

pub fn apply_edit(series: &LineSeries, action: &EditAction) -> Result<LineSeries, ExtractionError> {
    if action.series() != &series.id {
        return Err(ExtractionError::InvalidEdit(format!(
            "edit targets series {} but was applied to {}",
            action.series(),
            series.id
        )));
    }
    let mut out = series.clone();
    let pts = out.keypoints.points_mut();
    match *action {
        EditAction::AddPoint { index, point, .. } => {
            if index > pts.len() {
                return Err(out_of_range(index, pts.len()));
            }
            check_slot(index.checked_sub(1).map(|i| &pts[i]), point, pts.get(index))?;
            pts.insert(index, point);
        }
        EditAction::MovePoint { index, from, to, .. } => {
            if index >= pts.len() {
                return Err(out_of_range(index, pts.len()));
            }
            if pts[index] != from {
                return Err(ExtractionError::InvalidEdit(format!("point {index} is not at the expected position")));
            }
            check_slot(index.checked_sub(1).map(|i| &pts[i]), to, pts.get(index + 1))?;
            pts[index] = to;
        }
        EditAction::DeletePoint { index, point, .. } => {
            if index >= pts.len() {
                return Err(out_of_range(index, pts.len()));
            }
            if pts[index] != point {
                return Err(ExtractionError::InvalidEdit(format!("point {index} is not at the expected position")));
            }
            if pts.len() == 1 {
                return Err(ExtractionError::InvalidEdit("cannot delete the last keypoint".into()));
            }
            if index > 0 && pts.get(index + 1) == Some(&pts[index - 1]) {
                return Err(ExtractionError::InvalidEdit("deletion would leave duplicate neighbours".into()));
            }
            pts.remove(index);
        }
    }
    Ok(out)
}

/// The action that exactly undoes `action`.
pub fn invert(action: &EditAction) -> EditAction {
    match action.clone() {
        EditAction::AddPoint { series, index, point } => EditAction::DeletePoint { series, index, point },
        EditAction::DeletePoint { series, index, point } => EditAction::AddPoint { series, index, point },
        EditAction::MovePoint { series, index, from, to } => EditAction::MovePoint {
            series,
            index,
            from: to,
            to: from,
        },
    }
}
