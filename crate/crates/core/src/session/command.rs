//! Typed chart mutations and their inverses.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Chart, SeriesEntry};
use crate::calibration::{default_calibration, Axis, AxisScaleKind, CalibrationError, CalibrationSet};
use crate::geometry::PixelPoint;
use crate::line_extraction::{
    apply_edit, default_keypoint_count, resample_series, EditAction, ExtractionError, LineSeries, PixelPolyline, SeriesId,
};
use crate::metadata::{DescriptionLevel, MetadataError, Provenance, TextFieldKind, TextSlot, TextValue};
use crate::rendering::{PageSpec, RenderError, TactileStyle};

/// Anchors may sit slightly outside the image, e.g. on a cropped tick.
pub const ANCHOR_SLACK: f64 = 0.1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CommandError {
    #[error("unknown series {0}")]
    UnknownSeries(SeriesId),
    #[error("series index {index} out of range for {len} series")]
    SeriesIndex { index: usize, len: usize },
    #[error("anchor must be 0 or 1, got {0}")]
    AnchorIndex(u8),
    #[error("anchor pixel ({x}, {y}) is outside the image")]
    AnchorOutOfBounds { x: f64, y: f64 },
    #[error(transparent)]
    Calibration(#[from] CalibrationError),
    #[error(transparent)]
    Extraction(#[from] ExtractionError),
    #[error(transparent)]
    Metadata(#[from] MetadataError),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error("empty patch")]
    EmptyPatch,
}

/// An anchor value as typed by the operator: a number, or text read
/// according to the axis kind (ISO-8601 for time axes).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnchorValue {
    Number(f64),
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Command {
    SetCalibrationPoint {
        axis: Axis,
        anchor: u8,
        pixel: PixelPoint,
        value: AnchorValue,
    },
    SetAxisKind {
        axis: Axis,
        kind: AxisScaleKind,
    },
    SetCalibration {
        calibration: Option<CalibrationSet>,
    },
    AddSeries {
        #[serde(default)]
        name: String,
        trace: PixelPolyline,
        #[serde(default)]
        keypoints: Option<usize>,
    },
    RemoveSeries {
        series: SeriesId,
    },
    RenameSeries {
        series: SeriesId,
        name: String,
    },
    SetSeriesStyle {
        series: SeriesId,
        style: Option<TactileStyle>,
    },
    AddPoint {
        series: SeriesId,
        point: PixelPoint,
        #[serde(default)]
        index: Option<usize>,
    },
    MovePoint {
        series: SeriesId,
        index: usize,
        to: PixelPoint,
    },
    DeletePoint {
        series: SeriesId,
        index: usize,
    },
    ResampleSeries {
        series: SeriesId,
        keypoints: usize,
    },
    SetTextField {
        field: TextFieldKind,
        value: Option<TextValue>,
        #[serde(default)]
        provenance: Option<Provenance>,
    },
    SetRenderOptions {
        #[serde(default)]
        page: Option<PageSpec>,
        #[serde(default)]
        description_level: Option<DescriptionLevel>,
    },
    /// Puts a complete entry at `index`; what `add-series` resolves to.
    InsertSeries {
        index: usize,
        entry: SeriesEntry,
    },
    /// Overwrites the entry at `index`.
    ReplaceSeries {
        index: usize,
        entry: SeriesEntry,
    },
}

/// A command after it ran: the fully resolved form that replays it
/// exactly, and the command that takes it back.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Applied {
    pub forward: Command,
    pub inverse: Command,
}

fn series_slot(chart: &Chart, id: &SeriesId) -> Result<usize, CommandError> {
    chart.series_index(id).ok_or_else(|| CommandError::UnknownSeries(id.clone()))
}

fn set_slot(chart: &mut Chart, field: TextFieldKind, slot: Option<TextSlot>) -> Result<(), CommandError> {
    match slot {
        Some(s) => chart.metadata.set(field, s.value, s.provenance)?,
        None => {
            chart.metadata.clear(field);
        }
    }
    Ok(())
}

fn edit(chart: &mut Chart, action: EditAction) -> Result<EditAction, CommandError> {
    let i = series_slot(chart, action.series())?;
    let updated = apply_edit(&chart.series[i].series, &action)?;
    chart.series[i].series = updated;
    Ok(crate::line_extraction::invert(&action))
}

fn from_edit(action: EditAction) -> Command {
    match action {
        EditAction::AddPoint { series, index, point } => Command::AddPoint {
            series,
            point,
            index: Some(index),
        },
        EditAction::MovePoint { series, index, to, .. } => Command::MovePoint { series, index, to },
        EditAction::DeletePoint { series, index, .. } => Command::DeletePoint { series, index },
    }
}

impl Command {
    /// Runs the command on `chart`. On error the chart may be partially
    /// modified; callers apply patches to a copy.
    pub fn apply(&self, chart: &mut Chart) -> Result<Applied, CommandError> {
        let forward = self.clone();
        let inverse = match self {
            Command::SetCalibrationPoint {
                axis,
                anchor,
                pixel,
                value,
            } => {
                let (w, h) = (chart.image_size.0 as f64, chart.image_size.1 as f64);
                let in_bounds = |v: f64, size: f64| v.is_finite() && v >= -ANCHOR_SLACK * size && v <= (1.0 + ANCHOR_SLACK) * size;
                if !(in_bounds(pixel.x, w) && in_bounds(pixel.y, h)) {
                    return Err(CommandError::AnchorOutOfBounds { x: pixel.x, y: pixel.y });
                }
                if *anchor > 1 {
                    return Err(CommandError::AnchorIndex(*anchor));
                }
                let previous = chart.calibration;
                let mut cal = match previous {
                    Some(c) => c,
                    None => default_calibration(chart.image_size.0, chart.image_size.1)?,
                };
                let axis_cal = cal.axis_mut(*axis);
                let value = match value {
                    AnchorValue::Number(v) if v.is_finite() => *v,
                    AnchorValue::Number(v) => {
                        return Err(CalibrationError::InvalidInput(format!("anchor value {v} is not finite")).into())
                    }
                    AnchorValue::Text(t) => {
                        let (v, precision) = axis_cal.parse_value(t)?;
                        if let Some(p) = precision {
                            axis_cal.time_precision = p;
                        }
                        v
                    }
                };
                let point = if *anchor == 0 { &mut axis_cal.p1 } else { &mut axis_cal.p2 };
                point.pixel = *pixel;
                point.value = value;
                chart.calibration = Some(cal);
                Command::SetCalibration { calibration: previous }
            }
            Command::SetAxisKind { axis, kind } => {
                let previous = chart.calibration;
                let mut cal = match previous {
                    Some(c) => c,
                    None => default_calibration(chart.image_size.0, chart.image_size.1)?,
                };
                cal.axis_mut(*axis).kind = *kind;
                chart.calibration = Some(cal);
                Command::SetCalibration { calibration: previous }
            }
            Command::SetCalibration { calibration } => {
                let previous = std::mem::replace(&mut chart.calibration, *calibration);
                Command::SetCalibration { calibration: previous }
            }
            Command::AddSeries { name, trace, keypoints } => {
                let n = keypoints.unwrap_or_else(|| default_keypoint_count(trace.arc_length()));
                let id = chart.next_series_id();
                let series = LineSeries::from_trace(id.clone(), name.clone(), trace, n)?;
                let index = chart.series.len();
                let entry = SeriesEntry {
                    series,
                    source: trace.clone(),
                };
                let resolved = Command::InsertSeries { index, entry };
                let applied = resolved.apply(chart)?;
                return Ok(Applied {
                    forward: resolved,
                    inverse: applied.inverse,
                });
            }
            Command::InsertSeries { index, entry } => {
                if *index > chart.series.len() {
                    return Err(CommandError::SeriesIndex {
                        index: *index,
                        len: chart.series.len(),
                    });
                }
                if chart.series_index(&entry.series.id).is_some() {
                    return Err(ExtractionError::InvalidInput(format!("series id {} already in use", entry.series.id)).into());
                }
                chart.series.insert(*index, entry.clone());
                Command::RemoveSeries {
                    series: entry.series.id.clone(),
                }
            }
            Command::RemoveSeries { series } => {
                let index = series_slot(chart, series)?;
                let entry = chart.series.remove(index);
                Command::InsertSeries { index, entry }
            }
            Command::ReplaceSeries { index, entry } => {
                let len = chart.series.len();
                let slot = chart
                    .series
                    .get_mut(*index)
                    .ok_or(CommandError::SeriesIndex { index: *index, len })?;
                let previous = std::mem::replace(slot, entry.clone());
                Command::ReplaceSeries {
                    index: *index,
                    entry: previous,
                }
            }
            Command::RenameSeries { series, name } => {
                let i = series_slot(chart, series)?;
                let previous = std::mem::replace(&mut chart.series[i].series.name, name.clone());
                Command::RenameSeries {
                    series: series.clone(),
                    name: previous,
                }
            }
            Command::SetSeriesStyle { series, style } => {
                if let Some(s) = style {
                    if !(s.stroke_width_mm >= crate::rendering::MIN_STROKE_MM) {
                        return Err(RenderError::Format(format!(
                            "stroke width {} mm is below {} mm",
                            s.stroke_width_mm,
                            crate::rendering::MIN_STROKE_MM
                        ))
                        .into());
                    }
                }
                let i = series_slot(chart, series)?;
                let previous = std::mem::replace(&mut chart.series[i].series.style, *style);
                Command::SetSeriesStyle {
                    series: series.clone(),
                    style: previous,
                }
            }
            Command::AddPoint { series, point, index } => {
                let i = series_slot(chart, series)?;
                let action = match index {
                    Some(index) => EditAction::AddPoint {
                        series: series.clone(),
                        index: *index,
                        point: *point,
                    },
                    None => EditAction::add_point(&chart.series[i].series, *point),
                };
                let resolved = from_edit(action.clone());
                let inverse = from_edit(edit(chart, action)?);
                return Ok(Applied {
                    forward: resolved,
                    inverse,
                });
            }
            Command::MovePoint { series, index, to } => {
                let i = series_slot(chart, series)?;
                let action = EditAction::move_point(&chart.series[i].series, *index, *to)?;
                from_edit(edit(chart, action)?)
            }
            Command::DeletePoint { series, index } => {
                let i = series_slot(chart, series)?;
                let action = EditAction::delete_point(&chart.series[i].series, *index)?;
                from_edit(edit(chart, action)?)
            }
            Command::ResampleSeries { series, keypoints } => {
                let i = series_slot(chart, series)?;
                let previous = chart.series[i].clone();
                chart.series[i].series = resample_series(&previous.series, *keypoints, &previous.source)?;
                Command::ReplaceSeries {
                    index: i,
                    entry: previous,
                }
            }
            Command::SetTextField {
                field,
                value,
                provenance,
            } => {
                let previous = chart.metadata.slot(*field).cloned();
                let slot = value.clone().map(|value| TextSlot {
                    value,
                    provenance: provenance.unwrap_or(Provenance::Manual),
                });
                set_slot(chart, *field, slot)?;
                Command::SetTextField {
                    field: *field,
                    value: previous.as_ref().map(|s| s.value.clone()),
                    provenance: previous.map(|s| s.provenance),
                }
            }
            Command::SetRenderOptions {
                page,
                description_level,
            } => {
                if let Some(p) = page {
                    p.validate()?;
                }
                let previous = chart.options.clone();
                if let Some(p) = page {
                    chart.options.page = *p;
                }
                if let Some(l) = description_level {
                    chart.options.description_level = *l;
                }
                Command::SetRenderOptions {
                    page: Some(previous.page),
                    description_level: Some(previous.description_level),
                }
            }
        };
        Ok(Applied { forward, inverse })
    }
}
