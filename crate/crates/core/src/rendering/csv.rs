//! Long-format CSV: a `# key: value` metadata block, then `series,x,y`.

use ::csv::{QuoteStyle, ReaderBuilder, WriterBuilder};

use super::RenderError;
use crate::calibration::{
    format_epoch, format_epoch_exact, format_significant, parse_iso8601, parse_plain_decimal, Axis, AxisCalibration,
    AxisScaleKind, TimePrecision,
};
use crate::metadata::{generate_description, series_display_name, TextFieldKind};
use crate::session::Chart;

/// Significant digits of exported numbers.
pub const CSV_DIGITS: usize = 10;

const KEYS: [&str; 4] = ["title", "x_axis", "y_axis", "description"];

fn quote(value: &str) -> String {
    if value.is_empty() {
        return String::new();
    }
    let mut w = WriterBuilder::new()
        .quote_style(QuoteStyle::Necessary)
        .terminator(::csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record([value]).expect("writing to memory");
    let mut s = String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 in, utf-8 out");
    s.pop();
    s
}

fn format_axis_value(axis: &AxisCalibration, v: f64) -> String {
    match axis.kind {
        AxisScaleKind::Time if axis.time_precision == TimePrecision::Date && v.rem_euclid(86_400.0) == 0.0 => {
            format_epoch(v, TimePrecision::Date)
        }
        AxisScaleKind::Time => format_epoch_exact(v),
        _ => format_significant(v, CSV_DIGITS),
    }
}

pub fn export_csv(chart: &Chart) -> Result<String, RenderError> {
    let cal = chart.require_complete()?;
    let data = chart.series_data()?;
    let description = match chart.metadata.text(TextFieldKind::ChartDescription) {
        Some(d) => d.to_string(),
        None => generate_description(chart, chart.options.description_level)?.text,
    };
    let values = [
        chart.title().unwrap_or(""),
        chart.axis_title(Axis::X).unwrap_or(""),
        chart.axis_title(Axis::Y).unwrap_or(""),
        description.as_str(),
    ];
    let mut out = String::new();
    for (k, v) in KEYS.iter().zip(values) {
        out.push_str(&format!("# {k}: {}\n", quote(v)));
    }

    let mut w = WriterBuilder::new()
        .quote_style(QuoteStyle::Necessary)
        .terminator(::csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let fail = |e: ::csv::Error| RenderError::Format(e.to_string());
    w.write_record(["series", "x", "y"]).map_err(fail)?;
    for (i, sd) in data.iter().enumerate() {
        let name = series_display_name(&sd.series.name, i);
        let mut points = sd.points.clone();
        points.sort_by(|a, b| a.x.total_cmp(&b.x));
        for p in points {
            w.write_record([
                name.as_str(),
                &format_axis_value(&cal.x_axis, p.x),
                &format_axis_value(&cal.y_axis, p.y),
            ])
            .map_err(fail)?;
        }
    }
    let body = w.into_inner().map_err(|e| RenderError::Format(e.to_string()))?;
    out.push_str(std::str::from_utf8(&body).map_err(|e| RenderError::Format(e.to_string()))?);
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CsvRow {
    pub series: String,
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParsedCsv {
    /// Metadata block in file order.
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<CsvRow>,
}

impl ParsedCsv {
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

fn parse_value(text: &str) -> Option<f64> {
    parse_plain_decimal(text).or_else(|| parse_iso8601(text).map(|(v, _)| v))
}

/// Reads back what [`export_csv`] writes.
pub fn parse_csv(text: &str) -> Result<ParsedCsv, RenderError> {
    let bad = |m: String| RenderError::Format(m);
    let mut parsed = ParsedCsv::default();
    let mut rest = text;
    while let Some(body) = rest.strip_prefix("# ") {
        let line = body.split('\n').next().unwrap_or("");
        let (key, raw) = line
            .split_once(':')
            .ok_or_else(|| bad(format!("metadata line without key: {line:?}")))?;
        let value_start = key.len() + 1 + usize::from(raw.starts_with(' '));
        let raw = &body[value_start..];
        if raw.starts_with('"') {
            // a quoted value may span lines; let the CSV reader find its end
            let mut r = ReaderBuilder::new().has_headers(false).from_reader(raw.as_bytes());
            let mut rec = ::csv::StringRecord::new();
            r.read_record(&mut rec).map_err(|e| bad(e.to_string()))?;
            parsed.metadata.push((key.to_string(), rec.get(0).unwrap_or("").to_string()));
            rest = &raw[r.position().byte() as usize..];
        } else {
            let (value, tail) = raw.split_once('\n').unwrap_or((raw, ""));
            parsed.metadata.push((key.to_string(), value.to_string()));
            rest = tail;
        }
    }
    let mut r = ReaderBuilder::new().has_headers(true).from_reader(rest.as_bytes());
    let headers = r.headers().map_err(|e| bad(e.to_string()))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["series", "x", "y"] {
        return Err(bad(format!("unexpected header {headers:?}")));
    }
    for rec in r.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let field = |i: usize| rec.get(i).ok_or_else(|| bad(format!("short row {rec:?}")));
        let num = |i: usize| -> Result<f64, RenderError> {
            let f = field(i)?;
            parse_value(f).ok_or_else(|| bad(format!("not a number or date: {f:?}")))
        };
        parsed.rows.push(CsvRow {
            series: field(0)?.to_string(),
            x: num(1)?,
            y: num(2)?,
        });
    }
    Ok(parsed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoting() {
        assert_eq!(quote("plain"), "plain");
        assert_eq!(quote("a, b"), "\"a, b\"");
        assert_eq!(quote("say \"hi\""), "\"say \"\"hi\"\"\"");
        assert_eq!(quote(""), "");
    }

    #[test]
    fn metadata_round_trip_with_quotes_and_newlines() {
        let text = "# title: \"Sales, 2020\"\n# x_axis: Year\n# y_axis: \n# description: \"two\nlines\"\nseries,x,y\nLine 1,0,1.5\nLine 1,2020-01-01,2\n";
        let p = parse_csv(text).unwrap();
        assert_eq!(p.meta("title"), Some("Sales, 2020"));
        assert_eq!(p.meta("x_axis"), Some("Year"));
        assert_eq!(p.meta("y_axis"), Some(""));
        assert_eq!(p.meta("description"), Some("two\nlines"));
        assert_eq!(p.rows.len(), 2);
        assert_eq!(p.rows[1].x, 1_577_836_800.0);
    }
}
