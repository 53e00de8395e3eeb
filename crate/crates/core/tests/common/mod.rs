#![allow(dead_code)]

use tactichart_core::calibration::{AxisCalibration, AxisScaleKind, Axis, CalibrationPoint, CalibrationSet};
use tactichart_core::geometry::PixelPoint;
use tactichart_core::line_extraction::{LineSeries, PixelPolyline, SeriesId};
use tactichart_core::metadata::{Provenance, TextFieldKind, TextValue};
use tactichart_core::session::{Chart, SeriesEntry};

pub fn linear_cal(x: (f64, f64, f64, f64), y: (f64, f64, f64, f64)) -> CalibrationSet {
    // (pixel1, value1, pixel2, value2) per axis
    CalibrationSet {
        x_axis: AxisCalibration::new(
            CalibrationPoint::new(x.0, 500.0, x.1),
            CalibrationPoint::new(x.2, 500.0, x.3),
            AxisScaleKind::Linear,
            Axis::X,
        ),
        y_axis: AxisCalibration::new(
            CalibrationPoint::new(100.0, y.0, y.1),
            CalibrationPoint::new(100.0, y.2, y.3),
            AxisScaleKind::Linear,
            Axis::Y,
        ),
    }
}

pub fn line(points: &[(f64, f64)]) -> PixelPolyline {
    PixelPolyline::new(points.iter().map(|&(x, y)| PixelPoint::new(x, y)).collect()).unwrap()
}

/// Adds a series whose keypoints are exactly `points`.
pub fn push_series(chart: &mut Chart, name: &str, points: &[(f64, f64)]) {
    let id = chart.next_series_id();
    let source = line(points);
    let series = LineSeries {
        id,
        name: name.to_string(),
        keypoints: source.clone(),
        style: None,
        keypoint_count_target: points.len(),
    };
    chart.series.push(SeriesEntry { series, source });
}

pub fn set_text(chart: &mut Chart, kind: TextFieldKind, text: &str) {
    chart
        .metadata
        .set(kind, TextValue::Single(text.to_string()), Provenance::Manual)
        .unwrap();
}

pub fn set_labels(chart: &mut Chart, kind: TextFieldKind, labels: &[&str]) {
    chart
        .metadata
        .set(kind, TextValue::List(labels.iter().map(|s| s.to_string()).collect()), Provenance::Manual)
        .unwrap();
}

/// 800x600 chart, x 2010..2020 over pixels 100..700, y 0..100 over 500..100.
pub fn sales_chart() -> Chart {
    let mut chart = Chart::new(800, 600).unwrap();
    chart.calibration = Some(linear_cal((100.0, 2010.0, 700.0, 2020.0), (500.0, 0.0, 100.0, 100.0)));
    set_text(&mut chart, TextFieldKind::PlotTitle, "Sales");
    set_text(&mut chart, TextFieldKind::XAxisTitle, "Year");
    set_text(&mut chart, TextFieldKind::YAxisTitle, "Revenue");
    set_labels(&mut chart, TextFieldKind::XAxisLabels, &["2010", "2012", "2014", "2016", "2018", "2020"]);
    set_labels(&mut chart, TextFieldKind::YAxisLabels, &["0", "25", "50", "75", "100"]);
    // 2010: 10, 2012: 30, 2014: 20, 2016: 60, 2018: 50, 2020: 90
    push_series(
        &mut chart,
        "Revenue",
        &[(100.0, 460.0), (220.0, 380.0), (340.0, 420.0), (460.0, 260.0), (580.0, 300.0), (700.0, 140.0)],
    );
    chart
}

pub fn series_id(s: &str) -> SeriesId {
    SeriesId(s.to_string())
}
