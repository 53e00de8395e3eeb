//! Tactile print SVG in millimetres.
//!
//! Layout from the top: wrapped title rows, the y-axis title row, the plot
//! frame with y labels on its left, the x label row and the x-axis title.
//! Every Braille run is a `<text>` whose box is taken as
//! `[x, x + cells * cell_width] x [y - cell_height, y]`.

use std::fmt::Write as _;

use super::braille::to_braille_grade1;
use super::styles::assign_line_styles;
use super::svg::{axis_ticks, frame_axis, num, Tick};
use super::{PageSpec, RenderError, Rendered};
use crate::calibration::Axis;
use crate::session::Chart;

const BLANK_CELL: char = '\u{2800}';
const TICK_MM: f64 = 2.5;
const AXIS_STROKE_MM: f64 = 0.6;
const MIN_PLOT_MM: f64 = 20.0;

/// Braille for `text`, dropping characters outside the supported set.
fn braille_lossy(text: &str, what: &str, warnings: &mut Vec<String>) -> String {
    let mut out = String::new();
    let mut dropped = Vec::new();
    for c in text.chars() {
        let mut buf = [0u8; 4];
        match to_braille_grade1(c.encode_utf8(&mut buf)) {
            Ok(_) => out.push(c),
            Err(_) => dropped.push(c),
        }
    }
    if !dropped.is_empty() {
        warnings.push(format!("{what}: dropped characters without a Braille mapping: {dropped:?}"));
    }
    // translate as a whole so number and capital indicators see context
    to_braille_grade1(&out).expect("only supported characters remain")
}

/// Splits a Braille string into rows of at most `max` cells, breaking at
/// blank cells where possible.
fn wrap_cells(braille: &str, max: usize) -> Vec<String> {
    let max = max.max(1);
    let mut rows: Vec<String> = Vec::new();
    let mut row: Vec<char> = Vec::new();
    for word in braille.split(BLANK_CELL).filter(|w| !w.is_empty()) {
        let mut word: Vec<char> = word.chars().collect();
        let need = if row.is_empty() { word.len() } else { row.len() + 1 + word.len() };
        if need <= max {
            if !row.is_empty() {
                row.push(BLANK_CELL);
            }
            row.append(&mut word);
            continue;
        }
        if !row.is_empty() {
            rows.push(row.drain(..).collect());
        }
        while word.len() > max {
            rows.push(word.drain(..max).collect());
        }
        row = word;
    }
    if !row.is_empty() {
        rows.push(row.into_iter().collect());
    }
    rows
}

struct Placed {
    x: f64,
    y: f64,
    text: String,
    role: &'static str,
}

fn cells(s: &str) -> f64 {
    s.chars().count() as f64
}

/// Greedy thinning along one axis. `span(i)` gives the extent a label
/// occupies along the axis; labels closer than `gap` to the previous kept
/// one are dropped, except that the last label always survives.
fn thin(ticks: Vec<(Tick, String)>, gap: f64, span: impl Fn(&Tick, &str) -> (f64, f64)) -> Vec<(Tick, String)> {
    let mut ordered = ticks;
    ordered.sort_by(|a, b| {
        let (a0, _) = span(&a.0, &a.1);
        let (b0, _) = span(&b.0, &b.1);
        a0.total_cmp(&b0)
    });
    let mut kept: Vec<(Tick, String)> = Vec::new();
    let n = ordered.len();
    for (i, t) in ordered.into_iter().enumerate() {
        let (lo, _) = span(&t.0, &t.1);
        let clear = |k: &(Tick, String)| lo - span(&k.0, &k.1).1 >= gap;
        match kept.last() {
            None => kept.push(t),
            Some(prev) if clear(prev) => kept.push(t),
            Some(_) if i + 1 == n => {
                while kept.len() > 1 && !clear(kept.last().expect("non-empty")) {
                    kept.pop();
                }
                if kept.last().is_some_and(clear) {
                    kept.push(t);
                }
            }
            Some(_) => {}
        }
    }
    kept
}

pub(super) fn render_print(chart: &Chart, page: &PageSpec) -> Result<Rendered, RenderError> {
    page.validate()?;
    let cal = chart.require_complete()?;
    let data = chart.series_data()?;
    let assigned = assign_line_styles(data.len())?;
    let styles: Vec<_> = data
        .iter()
        .zip(&assigned.styles)
        .map(|(sd, s)| sd.series.style.unwrap_or(*s))
        .collect();
    let mut warnings = Vec::new();
    if assigned.repeated {
        warnings.push("line styles repeat".to_string());
    }

    let (w, h, m) = (page.width_mm, page.height_mm, page.margin_mm);
    let (cw, ch) = (page.braille_cell.width_mm, page.braille_cell.height_mm);
    let clr = page.braille_clearance_mm;
    let smax = styles.iter().map(|s| s.stroke_width_mm).fold(AXIS_STROKE_MM, f64::max);
    let row_cells = ((w - 2.0 * m) / cw).floor() as usize;
    let mut texts: Vec<Placed> = Vec::new();

    // top block
    let mut top = m;
    match chart.title() {
        Some(t) => {
            let rows = wrap_cells(&braille_lossy(t, "title", &mut warnings), row_cells);
            if rows.len() > 1 {
                warnings.push(format!("title wrapped onto {} Braille rows", rows.len()));
            }
            for r in rows {
                texts.push(Placed { x: m, y: top + ch, text: r, role: "title" });
                top += ch + clr;
            }
        }
        None => warnings.push("title omitted from print output".to_string()),
    }
    if let Some(t) = chart.axis_title(Axis::Y) {
        let rows = wrap_cells(&braille_lossy(t, "y-axis title", &mut warnings), row_cells);
        if rows.len() > 1 {
            warnings.push(format!("y-axis title wrapped onto {} Braille rows", rows.len()));
        }
        for r in rows {
            texts.push(Placed { x: m, y: top + ch, text: r, role: "y-title" });
            top += ch + clr;
        }
    }

    // bottom block, built upwards
    let mut bottom = h - m;
    if let Some(t) = chart.axis_title(Axis::X) {
        let rows = wrap_cells(&braille_lossy(t, "x-axis title", &mut warnings), row_cells);
        if rows.len() > 1 {
            warnings.push(format!("x-axis title wrapped onto {} Braille rows", rows.len()));
        }
        let n = rows.len();
        for (i, r) in rows.into_iter().enumerate() {
            let baseline = bottom - (n - 1 - i) as f64 * (ch + clr);
            texts.push(Placed { x: m, y: baseline, text: r, role: "x-title" });
        }
        bottom -= n as f64 * (ch + clr);
    }
    let x_label_baseline = bottom;
    let x_label_top = bottom - ch;

    let plot_top = top + ch / 2.0;
    let plot_bottom = x_label_top - clr - (ch / 2.0).max(TICK_MM + AXIS_STROKE_MM / 2.0).max(smax / 2.0);

    // labels, translated before horizontal layout since their widths matter
    let (x_lo, x_hi) = chart.extent(Axis::X).ok_or(RenderError::NoSeries)?;
    let (y_lo, y_hi) = chart.extent(Axis::Y).ok_or(RenderError::NoSeries)?;
    let y_probe = frame_axis(&cal.y_axis, y_lo, y_hi, plot_bottom, plot_top);
    let y_ticks: Vec<(Tick, String)> = axis_ticks(chart, Axis::Y, &cal.y_axis, &y_probe, Some(page))
        .into_iter()
        .map(|t| {
            let b = braille_lossy(&t.text, "y label", &mut warnings);
            (t, b)
        })
        .collect();
    // x positions are not known yet; translate with a unit frame to learn widths
    let x_unit = frame_axis(&cal.x_axis, x_lo, x_hi, 0.0, 1.0);
    let x_texts: Vec<String> = axis_ticks(chart, Axis::X, &cal.x_axis, &x_unit, Some(page))
        .iter()
        .map(|t| braille_lossy(&t.text, "x label", &mut warnings))
        .collect();
    let y_label_w = y_ticks.iter().map(|(_, b)| cells(b) * cw).fold(0.0, f64::max);
    let x_label_w = x_texts.iter().map(|b| cells(b) * cw).fold(0.0, f64::max);
    let y_gap = (TICK_MM + AXIS_STROKE_MM / 2.0).max(smax / 2.0) + clr;
    let plot_left = (m + y_label_w + y_gap).max(m + x_label_w / 2.0).max(m + smax / 2.0);
    let plot_right = w - m - (x_label_w / 2.0).max(smax / 2.0);

    if plot_right - plot_left < MIN_PLOT_MM || plot_bottom - plot_top < MIN_PLOT_MM {
        return Err(RenderError::PageTooSmall(format!(
            "plot area {:.1} x {:.1} mm after placing Braille text",
            plot_right - plot_left,
            plot_bottom - plot_top
        )));
    }

    let x_frame = frame_axis(&cal.x_axis, x_lo, x_hi, plot_left, plot_right);
    let y_frame = y_probe;
    let x_ticks: Vec<(Tick, String)> = axis_ticks(chart, Axis::X, &cal.x_axis, &x_frame, Some(page))
        .into_iter()
        .zip(x_texts)
        .collect();
    let (x_before, y_before) = (x_ticks.len(), y_ticks.len());
    let x_ticks = thin(x_ticks, clr, |t, b| {
        let half = cells(b) * cw / 2.0;
        (t.pos - half, t.pos + half)
    });
    // y runs downwards on the page; sort by top edge
    let y_ticks = thin(y_ticks, clr, |t, _| (t.pos - ch / 2.0, t.pos + ch / 2.0));
    for (axis, before, after) in [("x", x_before, x_ticks.len()), ("y", y_before, y_ticks.len())] {
        if after < before.min(super::MIN_PRINT_LABELS) {
            warnings.push(format!(
                "only {after} {axis}-axis labels fit with the required Braille clearance; shorten the labels or use a larger page"
            ));
        }
    }

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}mm" height="{}mm" viewBox="0 0 {} {}">"#,
        num(w),
        num(h),
        num(w),
        num(h)
    );
    let _ = writeln!(
        s,
        r#"<g id="axes" fill="none" stroke="black" stroke-width="{}" stroke-linecap="butt">"#,
        num(AXIS_STROKE_MM)
    );
    let line = |s: &mut String, x1: f64, y1: f64, x2: f64, y2: f64| {
        let _ = writeln!(s, r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#, num(x1), num(y1), num(x2), num(y2));
    };
    line(&mut s, plot_left, plot_bottom, plot_right, plot_bottom);
    line(&mut s, plot_left, plot_bottom, plot_left, plot_top);
    for (t, _) in &x_ticks {
        line(&mut s, t.pos, plot_bottom, t.pos, plot_bottom + TICK_MM);
    }
    for (t, _) in &y_ticks {
        line(&mut s, plot_left - TICK_MM, t.pos, plot_left, t.pos);
    }
    s.push_str("</g>\n");

    for (i, (sd, style)) in data.iter().zip(&styles).enumerate() {
        let mut pts = Vec::with_capacity(sd.points.len());
        for p in &sd.points {
            let x = x_frame.value_to_pixel(Axis::X, p.x).map_err(|e| RenderError::Format(e.to_string()))?;
            let y = y_frame.value_to_pixel(Axis::Y, p.y).map_err(|e| RenderError::Format(e.to_string()))?;
            pts.push(format!("{},{}", num(x), num(y)));
        }
        if pts.len() == 1 {
            // a lone point still needs something to feel
            pts.push(pts[0].clone());
        }
        let dash = style
            .stroke_pattern
            .dasharray_mm()
            .map(|d| format!(r#" stroke-dasharray="{d}""#))
            .unwrap_or_default();
        let _ = writeln!(
            s,
            r#"<polyline data-series="{}" data-index="{i}" points="{}" fill="none" stroke="black" stroke-width="{}" stroke-linecap="round" stroke-linejoin="round"{dash}/>"#,
            super::svg::escape(&sd.series.id.0),
            pts.join(" "),
            num(style.stroke_width_mm)
        );
    }

    for (t, b) in x_ticks {
        texts.push(Placed {
            x: t.pos - cells(&b) * cw / 2.0,
            y: x_label_baseline,
            text: b,
            role: "x-label",
        });
    }
    for (t, b) in y_ticks {
        texts.push(Placed {
            x: plot_left - y_gap - cells(&b) * cw,
            y: t.pos + ch / 2.0,
            text: b,
            role: "y-label",
        });
    }
    let _ = writeln!(s, r#"<g id="braille" fill="black" font-size="{}">"#, num(ch));
    for t in texts.iter().filter(|t| !t.text.is_empty()) {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" data-role="{}">{}</text>"#,
            num(t.x),
            num(t.y),
            t.role,
            t.text
        );
    }
    s.push_str("</g>\n</svg>\n");
    Ok(Rendered { document: s, warnings })
}
