//! Screen-reader SVG in source-image pixel coordinates.

use std::fmt::Write as _;

use super::styles::assign_line_styles;
use super::svg::{axis_ticks, escape, frame_axis, num, Tick};
use super::{RenderError, Rendered};
use crate::calibration::{Axis, DataPoint};
use crate::metadata::{generate_description, series_display_name, series_sentences};
use crate::session::Chart;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

pub(super) fn render_digital(chart: &Chart) -> Result<Rendered, RenderError> {
    let cal = chart.require_complete()?;
    let data = chart.series_data()?;
    let description = generate_description(chart, chart.options.description_level)?;
    let styles = assign_line_styles(data.len())?;
    let (w, h) = chart.image_size;
    let (w, h) = (w as f64, h as f64);
    let unit = w.min(h);
    let stroke = (unit * 0.004).max(1.0);
    let radius = unit * 0.003;
    let mut warnings = description.warnings.clone();
    if styles.repeated {
        warnings.push("line styles repeat".to_string());
    }

    let (x_lo, x_hi) = chart.extent(Axis::X).ok_or(RenderError::NoSeries)?;
    let (y_lo, y_hi) = chart.extent(Axis::Y).ok_or(RenderError::NoSeries)?;
    let px = |d: DataPoint| cal.data_to_pixel(d).map_err(|e| RenderError::Format(e.to_string()));
    let origin = px(DataPoint::new(x_lo, y_lo))?;
    let corner = px(DataPoint::new(x_hi, y_hi))?;
    let x_frame = frame_axis(&cal.x_axis, x_lo, x_hi, origin.x, corner.x);
    let y_frame = frame_axis(&cal.y_axis, y_lo, y_hi, origin.y, corner.y);
    let x_ticks = axis_ticks(chart, Axis::X, &cal.x_axis, &x_frame, None);
    let y_ticks = axis_ticks(chart, Axis::Y, &cal.y_axis, &y_frame, None);

    let title = chart.title().unwrap_or("Line chart");
    let font = (unit * 0.025).max(8.0);
    let tick_len = unit * 0.01;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}" role="img" aria-labelledby="chart-title chart-desc">"#,
        num(w),
        num(h),
        num(w),
        num(h)
    );
    let _ = writeln!(s, r#"<title id="chart-title">{}</title>"#, escape(title));
    let _ = writeln!(s, r#"<desc id="chart-desc">{}</desc>"#, escape(&description.text));

    let x_title = chart.axis_title(Axis::X).unwrap_or("x");
    let y_title = chart.axis_title(Axis::Y).unwrap_or("y");
    let _ = writeln!(
        s,
        r#"<g id="axes" aria-label="{}" stroke="black" stroke-width="{}" font-size="{}">"#,
        escape(&format!("Axes: {x_title} horizontally, {y_title} vertically")),
        num(stroke),
        num(font)
    );
    let _ = writeln!(
        s,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
        num(origin.x),
        num(origin.y),
        num(corner.x),
        num(origin.y)
    );
    let _ = writeln!(
        s,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
        num(origin.x),
        num(origin.y),
        num(origin.x),
        num(corner.y)
    );
    let tick_text = |s: &mut String, t: &Tick, axis: Axis| {
        let (x1, y1, x2, y2, tx, ty, anchor) = match axis {
            Axis::X => (t.pos, origin.y, t.pos, origin.y + tick_len, t.pos, origin.y + tick_len + font, "middle"),
            Axis::Y => (origin.x - tick_len, t.pos, origin.x, t.pos, origin.x - 2.0 * tick_len, t.pos + font / 3.0, "end"),
        };
        let _ = writeln!(s, r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#, num(x1), num(y1), num(x2), num(y2));
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="{anchor}" stroke="none" data-role="{axis}-label">{}</text>"#,
            num(tx),
            num(ty),
            escape(&t.text)
        );
    };
    for t in &x_ticks {
        tick_text(&mut s, t, Axis::X);
    }
    for t in &y_ticks {
        tick_text(&mut s, t, Axis::Y);
    }
    if let Some(t) = chart.axis_title(Axis::X) {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle" stroke="none" data-role="x-title">{}</text>"#,
            num((origin.x + corner.x) / 2.0),
            num(origin.y + tick_len + 2.5 * font),
            escape(t)
        );
    }
    if let Some(t) = chart.axis_title(Axis::Y) {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="start" stroke="none" data-role="y-title">{}</text>"#,
            num(origin.x),
            num(corner.y - font),
            escape(t)
        );
    }
    s.push_str("</g>\n");

    for (i, (sd, style)) in data.iter().zip(&styles.styles).enumerate() {
        let style = sd.series.style.unwrap_or(*style);
        let id = escape(&sd.series.id.0);
        let name = series_display_name(&sd.series.name, i);
        let summary = series_sentences(chart, cal, i, sd).join(" ");
        let _ = writeln!(
            s,
            r#"<g id="series-{id}" role="graphics-object" aria-labelledby="series-{id}-title series-{id}-desc">"#
        );
        let _ = writeln!(s, r#"<title id="series-{id}-title">{}</title>"#, escape(&name));
        let _ = writeln!(s, r#"<desc id="series-{id}-desc">{}</desc>"#, escape(&summary));
        let pts: Vec<String> = sd.series.keypoints.points().iter().map(|p| format!("{},{}", num(p.x), num(p.y))).collect();
        let colour = PALETTE[i % PALETTE.len()];
        let dash = match style.stroke_pattern.dasharray_mm() {
            Some(d) => {
                // scale the millimetre pattern to the stroke width in pixels
                let k = stroke / style.stroke_width_mm;
                let scaled: Vec<String> = d
                    .split(' ')
                    .filter_map(|v| v.parse::<f64>().ok())
                    .map(|v| num(v * k))
                    .collect();
                format!(r#" stroke-dasharray="{}""#, scaled.join(" "))
            }
            None => String::new(),
        };
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="{}"{dash}/>"#,
            pts.join(" "),
            num(stroke)
        );
        for p in sd.series.keypoints.points() {
            let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="{}" fill="{colour}"/>"#, num(p.x), num(p.y), num(radius));
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    Ok(Rendered { document: s, warnings })
}
