//! Pixel to data-domain mapping from two user-placed anchors per axis.
//!
//! The chart is assumed axis-aligned: the x-axis calibration reads only the
//! horizontal pixel component and the y-axis calibration only the vertical
//! one. Each axis is linear in its own value space, where that space is the
//! raw value (`Linear`), `log10` of the value (`Log10`) or epoch seconds
//! (`Time`).

use std::fmt;

use chrono::{DateTime, NaiveDate, NaiveDateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::PixelPoint;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CalibrationError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid calibration: {0}")]
    Invalid(ValidationReport),
    #[error("value {value} is outside the domain of the {axis} axis ({reason})")]
    Domain {
        axis: Axis,
        value: f64,
        reason: &'static str,
    },
    #[error("cannot parse calibration value {0:?}: plain decimals and ISO-8601 dates only")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisScaleKind {
    #[default]
    Linear,
    Log10,
    /// Values are real-valued seconds since the Unix epoch.
    Time,
}

/// How time values were entered, so they can be written back the same way.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimePrecision {
    Date,
    #[default]
    DateTime,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationPoint {
    pub pixel: PixelPoint,
    pub value: f64,
}

impl CalibrationPoint {
    pub fn new(px_x: f64, px_y: f64, value: f64) -> Self {
        Self {
            pixel: PixelPoint::new(px_x, px_y),
            value,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisCalibration {
    pub p1: CalibrationPoint,
    pub p2: CalibrationPoint,
    pub kind: AxisScaleKind,
    /// Which pixel component this axis reads.
    pub reads: Axis,
    #[serde(default)]
    pub time_precision: TimePrecision,
}

/// A single calibration rule that failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axis: Axis,
    pub rule: &'static str,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} axis: {}", self.axis, self.rule)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

pub const RULE_PIXEL_SEPARATION: &str = "anchors closer than 1 pixel";
pub const RULE_DUPLICATE_VALUES: &str = "duplicate values";
pub const RULE_LOG_POSITIVE: &str = "log requires positive";
pub const RULE_NOT_FINITE: &str = "non-finite coordinate or value";
pub const RULE_WRONG_COMPONENT: &str = "axis reads the wrong pixel component";

impl AxisCalibration {
    pub fn new(p1: CalibrationPoint, p2: CalibrationPoint, kind: AxisScaleKind, reads: Axis) -> Self {
        Self {
            p1,
            p2,
            kind,
            reads,
            time_precision: TimePrecision::default(),
        }
    }

    fn component(&self, p: PixelPoint) -> f64 {
        match self.reads {
            Axis::X => p.x,
            Axis::Y => p.y,
        }
    }

    pub fn anchor_components(&self) -> (f64, f64) {
        (self.component(self.p1.pixel), self.component(self.p2.pixel))
    }

    pub fn violations(&self, axis: Axis) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |rule| out.push(Violation { axis, rule });
        let finite = [self.p1.pixel.x, self.p1.pixel.y, self.p2.pixel.x, self.p2.pixel.y, self.p1.value, self.p2.value]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            push(RULE_NOT_FINITE);
            return out;
        }
        if self.reads != axis {
            push(RULE_WRONG_COMPONENT);
        }
        let (c1, c2) = self.anchor_components();
        if (c2 - c1).abs() < 1.0 {
            push(RULE_PIXEL_SEPARATION);
        }
        if self.p1.value == self.p2.value {
            push(RULE_DUPLICATE_VALUES);
        }
        if self.kind == AxisScaleKind::Log10 && (self.p1.value <= 0.0 || self.p2.value <= 0.0) {
            push(RULE_LOG_POSITIVE);
        }
        out
    }

    /// Maps a data value into the space in which this axis is linear.
    fn to_linear_space(&self, axis: Axis, value: f64) -> Result<f64, CalibrationError> {
        match self.kind {
            AxisScaleKind::Linear | AxisScaleKind::Time => Ok(value),
            AxisScaleKind::Log10 if value > 0.0 => Ok(value.log10()),
            AxisScaleKind::Log10 => Err(CalibrationError::Domain {
                axis,
                value,
                reason: "log scale requires a positive value",
            }),
        }
    }

    fn from_linear_space(&self, u: f64) -> f64 {
        match self.kind {
            AxisScaleKind::Linear | AxisScaleKind::Time => u,
            AxisScaleKind::Log10 => 10f64.powf(u),
        }
    }

    /// Pixel component to data value. Assumes the calibration is valid.
    pub fn pixel_to_value(&self, c: f64) -> f64 {
        let (c1, c2) = self.anchor_components();
        // Anchors of a valid log axis are positive, so this cannot fail.
        let u1 = self.to_linear_space(self.reads, self.p1.value).unwrap_or(f64::NAN);
        let u2 = self.to_linear_space(self.reads, self.p2.value).unwrap_or(f64::NAN);
        if c == c1 {
            return self.p1.value;
        }
        if c == c2 {
            return self.p2.value;
        }
        let t = (c - c1) / (c2 - c1);
        self.from_linear_space(u1 + t * (u2 - u1))
    }

    /// Data value to pixel component. Assumes the calibration is valid.
    pub fn value_to_pixel(&self, axis: Axis, value: f64) -> Result<f64, CalibrationError> {
        let (c1, c2) = self.anchor_components();
        if value == self.p1.value {
            return Ok(c1);
        }
        if value == self.p2.value {
            return Ok(c2);
        }
        let u = self.to_linear_space(axis, value)?;
        let u1 = self.to_linear_space(axis, self.p1.value)?;
        let u2 = self.to_linear_space(axis, self.p2.value)?;
        let t = (u - u1) / (u2 - u1);
        Ok(c1 + t * (c2 - c1))
    }

    /// Formats a value of this axis for human-facing output.
    pub fn format_value(&self, value: f64, significant: usize) -> String {
        match self.kind {
            AxisScaleKind::Time => format_epoch(value, self.time_precision),
            _ => format_significant(value, significant),
        }
    }

    /// Parses a user-entered calibration value for this axis.
    pub fn parse_value(&self, text: &str) -> Result<(f64, Option<TimePrecision>), CalibrationError> {
        parse_axis_value(self.kind, text)
    }
}

/// Parses `text` as a plain decimal, or as ISO-8601 on time axes.
pub fn parse_axis_value(kind: AxisScaleKind, text: &str) -> Result<(f64, Option<TimePrecision>), CalibrationError> {
    let text = text.trim();
    if kind == AxisScaleKind::Time {
        if let Some((secs, precision)) = parse_iso8601(text) {
            return Ok((secs, Some(precision)));
        }
    }
    parse_plain_decimal(text)
        .map(|v| (v, None))
        .ok_or_else(|| CalibrationError::Parse(text.to_string()))
}

/// Accepts `[+-]digits[.digits]` (or `.digits`), nothing else: no exponents,
/// no grouping separators, no `inf`/`NaN`.
pub fn parse_plain_decimal(text: &str) -> Option<f64> {
    let body = text.strip_prefix(['-', '+']).unwrap_or(text);
    let (int, frac) = match body.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (body, None),
    };
    let digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
    let ok = digits(int)
        && frac.is_none_or(|f| digits(f) && !f.is_empty())
        && !(int.is_empty() && frac.is_none());
    if !ok {
        return None;
    }
    text.parse().ok()
}

/// Parses an ISO-8601 date (`2020-01-01`) or date-time (`2020-01-01T12:00:00Z`,
/// offsets allowed; a missing offset means UTC) into epoch seconds.
pub fn parse_iso8601(text: &str) -> Option<(f64, TimePrecision)> {
    if let Ok(d) = NaiveDate::parse_from_str(text, "%Y-%m-%d") {
        let dt = d.and_hms_opt(0, 0, 0)?.and_utc();
        return Some((dt.timestamp() as f64, TimePrecision::Date));
    }
    let naive = text.strip_suffix('Z').unwrap_or(text);
    let dt = DateTime::parse_from_rfc3339(text)
        .map(|d| d.with_timezone(&Utc))
        .or_else(|_| NaiveDateTime::parse_from_str(naive, "%Y-%m-%dT%H:%M:%S%.f").map(|n| n.and_utc()))
        .or_else(|_| NaiveDateTime::parse_from_str(naive, "%Y-%m-%dT%H:%M").map(|n| n.and_utc()))
        .ok()?;
    let secs = dt.timestamp() as f64 + f64::from(dt.timestamp_subsec_nanos()) * 1e-9;
    Some((secs, TimePrecision::DateTime))
}

/// Formats epoch seconds as ISO-8601. Date precision rounds to the nearest day.
pub fn format_epoch(secs: f64, precision: TimePrecision) -> String {
    match precision {
        TimePrecision::Date => {
            let days = (secs / 86_400.0).round();
            DateTime::<Utc>::from_timestamp((days * 86_400.0) as i64, 0)
                .map(|d| d.format("%Y-%m-%d").to_string())
                .unwrap_or_else(|| format_significant(secs, 10))
        }
        TimePrecision::DateTime => format_epoch_exact(secs),
    }
}

/// Date-time formatting that keeps sub-second digits when present.
pub fn format_epoch_exact(secs: f64) -> String {
    let whole = secs.floor();
    let mut nanos = ((secs - whole) * 1e9).round() as i64;
    let mut whole = whole as i64;
    if nanos >= 1_000_000_000 {
        whole += 1;
        nanos -= 1_000_000_000;
    }
    match DateTime::<Utc>::from_timestamp(whole, nanos as u32) {
        Some(d) => d.to_rfc3339_opts(SecondsFormat::AutoSi, true),
        None => format_significant(secs, 10),
    }
}

/// Plain-decimal rendering with at most `significant` significant digits and
/// no exponent; trailing zeros are trimmed and `-0` prints as `0`. Exact
/// decimal ties round to even.
pub fn format_significant(value: f64, significant: usize) -> String {
    if !value.is_finite() {
        return value.to_string();
    }
    if value == 0.0 {
        return "0".to_string();
    }
    let significant = significant.max(1);
    let sci = format!("{:.*e}", significant - 1, value);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    // value = 0.d1d2d3... * 10^(exp + 1)
    let point = exp + 1;
    let mut out = String::new();
    if point <= 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-point) as usize));
        out.push_str(digits);
    } else if point as usize >= digits.len() {
        out.push_str(digits);
        out.extend(std::iter::repeat_n('0', point as usize - digits.len()));
    } else {
        let (a, b) = digits.split_at(point as usize);
        out.push_str(a);
        out.push('.');
        out.push_str(b);
    }
    if negative && out.bytes().any(|b| b.is_ascii_digit() && b != b'0') {
        out.insert(0, '-');
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationSet {
    pub x_axis: AxisCalibration,
    pub y_axis: AxisCalibration,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DataPoint {
    pub x: f64,
    pub y: f64,
}

impl DataPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Four anchors placed near where axes usually sit, both axes linear 0..1.
pub fn default_calibration(image_width: u32, image_height: u32) -> Result<CalibrationSet, CalibrationError> {
    if image_width < 10 || image_height < 10 {
        return Err(CalibrationError::InvalidInput(format!(
            "image must be at least 10x10 pixels, got {image_width}x{image_height}"
        )));
    }
    let w = f64::from(image_width);
    let h = f64::from(image_height);
    Ok(CalibrationSet {
        x_axis: AxisCalibration::new(
            CalibrationPoint::new(0.15 * w, 0.90 * h, 0.0),
            CalibrationPoint::new(0.90 * w, 0.90 * h, 1.0),
            AxisScaleKind::Linear,
            Axis::X,
        ),
        y_axis: AxisCalibration::new(
            CalibrationPoint::new(0.10 * w, 0.85 * h, 0.0),
            CalibrationPoint::new(0.10 * w, 0.10 * h, 1.0),
            AxisScaleKind::Linear,
            Axis::Y,
        ),
    })
}

impl CalibrationSet {
    pub fn axis(&self, axis: Axis) -> &AxisCalibration {
        match axis {
            Axis::X => &self.x_axis,
            Axis::Y => &self.y_axis,
        }
    }

    pub fn axis_mut(&mut self, axis: Axis) -> &mut AxisCalibration {
        match axis {
            Axis::X => &mut self.x_axis,
            Axis::Y => &mut self.y_axis,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = self.x_axis.violations(Axis::X);
        violations.extend(self.y_axis.violations(Axis::Y));
        ValidationReport { violations }
    }

    fn ensure_valid(&self) -> Result<(), CalibrationError> {
        let report = self.validate();
        if report.is_empty() {
            Ok(())
        } else {
            Err(CalibrationError::Invalid(report))
        }
    }

    pub fn pixel_to_data(&self, p: PixelPoint) -> Result<DataPoint, CalibrationError> {
        self.ensure_valid()?;
        Ok(DataPoint {
            x: self.x_axis.pixel_to_value(p.x),
            y: self.y_axis.pixel_to_value(p.y),
        })
    }

    pub fn data_to_pixel(&self, d: DataPoint) -> Result<PixelPoint, CalibrationError> {
        self.ensure_valid()?;
        Ok(PixelPoint {
            x: self.x_axis.value_to_pixel(Axis::X, d.x)?,
            y: self.y_axis.value_to_pixel(Axis::Y, d.y)?,
        })
    }
}

/// Free-function form of [`CalibrationSet::validate`].
pub fn validate_calibration(set: &CalibrationSet) -> ValidationReport {
    set.validate()
}
