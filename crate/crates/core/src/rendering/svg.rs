//! Shared pieces of the two SVG writers.

use super::labels::{label_budget, reduced_indices};
use super::PageSpec;
use crate::calibration::{Axis, AxisCalibration, CalibrationPoint};
use crate::metadata::TextFieldKind;
use crate::session::{label_value, Chart};

/// Digits used for generated tick labels.
pub(crate) const TICK_DIGITS: usize = 4;
const GENERATED_TICKS: usize = 5;

pub(crate) fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c if (c as u32) < 0x20 && c != '\n' && c != '\t' => out.push(' '),
            c => out.push(c),
        }
    }
    out
}

/// Coordinate formatting: three decimals, trailing zeros trimmed.
pub(crate) fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    match s {
        "-0" | "" => "0".to_string(),
        s => s.to_string(),
    }
}

/// Maps the data range `lo..hi` of `source` onto `c_lo..c_hi` in output
/// coordinates, keeping the axis scale kind.
pub(crate) fn frame_axis(source: &AxisCalibration, lo: f64, hi: f64, c_lo: f64, c_hi: f64) -> AxisCalibration {
    let (p1, p2) = match source.reads {
        Axis::X => (CalibrationPoint::new(c_lo, 0.0, lo), CalibrationPoint::new(c_hi, 0.0, hi)),
        Axis::Y => (CalibrationPoint::new(0.0, c_lo, lo), CalibrationPoint::new(0.0, c_hi, hi)),
    };
    AxisCalibration {
        p1,
        p2,
        ..*source
    }
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Tick {
    pub text: String,
    /// Position along the axis in output coordinates.
    pub pos: f64,
}

/// Labels to draw along `axis`, positioned through `target`.
///
/// Uses the chart's label field when set, otherwise five generated values.
/// Labels that all read as values are placed at those values; anything else
/// is spread evenly across the frame. With a page, the list is first
/// thinned for print.
pub(crate) fn axis_ticks(chart: &Chart, axis: Axis, source: &AxisCalibration, target: &AxisCalibration, page: Option<&PageSpec>) -> Vec<Tick> {
    let (c_lo, c_hi) = target.anchor_components();
    let labels = chart.metadata.labels(TextFieldKind::labels_for(axis));
    if labels.is_empty() {
        return (0..GENERATED_TICKS)
            .map(|i| {
                let pos = c_lo + (c_hi - c_lo) * i as f64 / (GENERATED_TICKS - 1) as f64;
                let value = if i == 0 {
                    target.p1.value
                } else if i == GENERATED_TICKS - 1 {
                    target.p2.value
                } else {
                    target.pixel_to_value(pos)
                };
                Tick {
                    text: source.format_value(value, TICK_DIGITS),
                    pos,
                }
            })
            .collect();
    }
    let n = labels.len();
    let indices: Vec<usize> = match page {
        Some(page) => reduced_indices(n, label_budget(labels, page, axis)),
        None => (0..n).collect(),
    };
    let values: Option<Vec<f64>> = labels.iter().map(|l| label_value(source, l)).collect();
    indices
        .into_iter()
        .filter_map(|i| {
            let pos = match &values {
                Some(v) => target.value_to_pixel(axis, v[i]).ok()?,
                None if n == 1 => (c_lo + c_hi) / 2.0,
                None => c_lo + (c_hi - c_lo) * i as f64 / (n - 1) as f64,
            };
            Some(Tick {
                text: labels[i].clone(),
                pos,
            })
        })
        .collect()
}
