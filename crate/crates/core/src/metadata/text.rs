use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::MetadataError;
use crate::calibration::{parse_iso8601, parse_plain_decimal, Axis};
use crate::geometry::BBox;

/// A recognized text fragment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TextBox {
    pub bbox: BBox,
    pub content: String,
    pub confidence: f64,
}

impl TextBox {
    pub fn new(bbox: BBox, content: impl Into<String>, confidence: f64) -> Self {
        Self {
            bbox,
            content: content.into(),
            confidence,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.bbox.w > 0.0 && self.bbox.h > 0.0 && (0.0..=1.0).contains(&self.confidence)
    }

    /// Shown with a warning in the editor; never dropped automatically.
    pub fn is_low_confidence(&self) -> bool {
        self.confidence < 0.5
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TextFieldKind {
    PlotTitle,
    XAxisTitle,
    YAxisTitle,
    XAxisLabels,
    YAxisLabels,
    ChartDescription,
    DataPointDescription,
    CalibrationValue,
}

impl TextFieldKind {
    pub const ALL: [TextFieldKind; 8] = [
        TextFieldKind::PlotTitle,
        TextFieldKind::XAxisTitle,
        TextFieldKind::YAxisTitle,
        TextFieldKind::XAxisLabels,
        TextFieldKind::YAxisLabels,
        TextFieldKind::ChartDescription,
        TextFieldKind::DataPointDescription,
        TextFieldKind::CalibrationValue,
    ];

    pub fn holds_list(self) -> bool {
        matches!(self, TextFieldKind::XAxisLabels | TextFieldKind::YAxisLabels)
    }

    pub fn labels_for(axis: Axis) -> Self {
        match axis {
            Axis::X => TextFieldKind::XAxisLabels,
            Axis::Y => TextFieldKind::YAxisLabels,
        }
    }

    pub fn title_for(axis: Axis) -> Self {
        match axis {
            Axis::X => TextFieldKind::XAxisTitle,
            Axis::Y => TextFieldKind::YAxisTitle,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TextFieldKind::PlotTitle => "plot-title",
            TextFieldKind::XAxisTitle => "x-axis-title",
            TextFieldKind::YAxisTitle => "y-axis-title",
            TextFieldKind::XAxisLabels => "x-axis-labels",
            TextFieldKind::YAxisLabels => "y-axis-labels",
            TextFieldKind::ChartDescription => "chart-description",
            TextFieldKind::DataPointDescription => "data-point-description",
            TextFieldKind::CalibrationValue => "calibration-value",
        }
    }
}

impl fmt::Display for TextFieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Ocr,
    Manual,
    Template,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TextValue {
    Single(String),
    List(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TextSlot {
    pub value: TextValue,
    pub provenance: Provenance,
}

/// One slot per text field kind; absent slots are unset.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TextMetadata {
    slots: BTreeMap<TextFieldKind, TextSlot>,
}

impl TextMetadata {
    pub fn slot(&self, kind: TextFieldKind) -> Option<&TextSlot> {
        self.slots.get(&kind)
    }

    /// Trimmed single-string value, `None` when unset or blank.
    pub fn text(&self, kind: TextFieldKind) -> Option<&str> {
        match self.slots.get(&kind).map(|s| &s.value) {
            Some(TextValue::Single(s)) if !s.trim().is_empty() => Some(s.trim()),
            _ => None,
        }
    }

    pub fn labels(&self, kind: TextFieldKind) -> &[String] {
        match self.slots.get(&kind).map(|s| &s.value) {
            Some(TextValue::List(v)) => v,
            _ => &[],
        }
    }

    /// Validates shape and label monotonicity, then stores the value.
    pub fn set(&mut self, kind: TextFieldKind, value: TextValue, provenance: Provenance) -> Result<(), MetadataError> {
        match (&value, kind.holds_list()) {
            (TextValue::List(labels), true) => check_monotone(kind, labels)?,
            (TextValue::Single(_), false) => {}
            (_, true) => {
                return Err(MetadataError::WrongShape {
                    field: kind,
                    expected: "an ordered list of strings",
                })
            }
            (_, false) => {
                return Err(MetadataError::WrongShape {
                    field: kind,
                    expected: "a single string",
                })
            }
        }
        self.slots.insert(kind, TextSlot { value, provenance });
        Ok(())
    }

    pub fn clear(&mut self, kind: TextFieldKind) -> Option<TextSlot> {
        self.slots.remove(&kind)
    }

    pub fn restore(&mut self, kind: TextFieldKind, slot: Option<TextSlot>) {
        match slot {
            Some(s) => {
                self.slots.insert(kind, s);
            }
            None => {
                self.slots.remove(&kind);
            }
        }
    }
}

fn check_monotone(kind: TextFieldKind, labels: &[String]) -> Result<(), MetadataError> {
    let values: Option<Vec<f64>> = labels.iter().map(|l| parse_label_number(l)).collect();
    let Some(values) = values else {
        return Ok(());
    };
    let up = values.windows(2).all(|w| w[0] < w[1]);
    let down = values.windows(2).all(|w| w[0] > w[1]);
    if up || down {
        Ok(())
    } else {
        Err(MetadataError::NotMonotone(kind))
    }
}

/// Numeric reading of an axis label: plain decimals with optional thousands
/// separators, a trailing `%`, or a Unicode minus sign.
pub fn parse_label_number(label: &str) -> Option<f64> {
    let t = label.trim();
    let t = t.strip_suffix('%').unwrap_or(t).trim_end();
    let t = t.replace('\u{2212}', "-");
    let grouped = t.contains(',')
        && t.split('.').next().is_some_and(|int| {
            let int = int.trim_start_matches(['-', '+']);
            let mut groups = int.split(',');
            groups.next().is_some_and(|g| (1..=3).contains(&g.len())) && groups.all(|g| g.len() == 3)
        });
    let t = if grouped { t.replace(',', "") } else { t };
    parse_plain_decimal(&t)
}

/// Suggests a field for a recognized text box from where it sits relative to
/// the plot area.
pub fn classify_text_role(text: &TextBox, plot_region: &BBox) -> TextFieldKind {
    let c = text.bbox.center();
    let numeric = parse_label_number(&text.content).is_some() || parse_iso8601(text.content.trim()).is_some();
    let rotated = text.bbox.h > text.bbox.w;
    if c.y < plot_region.y {
        TextFieldKind::PlotTitle
    } else if c.y > plot_region.bottom() {
        if numeric {
            TextFieldKind::XAxisLabels
        } else {
            TextFieldKind::XAxisTitle
        }
    } else if c.x < plot_region.x {
        if numeric && !rotated {
            TextFieldKind::YAxisLabels
        } else {
            TextFieldKind::YAxisTitle
        }
    } else {
        TextFieldKind::DataPointDescription
    }
}

/// Orders label texts the way values run along the axis: left to right for
/// x, bottom to top for y.
pub fn sort_axis_labels(boxes: &[TextBox], axis: Axis) -> Vec<String> {
    let mut refs: Vec<&TextBox> = boxes.iter().collect();
    match axis {
        Axis::X => refs.sort_by(|a, b| a.bbox.center().x.total_cmp(&b.bbox.center().x)),
        Axis::Y => refs.sort_by(|a, b| b.bbox.center().y.total_cmp(&a.bbox.center().y)),
    }
    refs.into_iter().map(|b| b.content.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tb(x: f64, y: f64, text: &str) -> TextBox {
        TextBox::new(BBox::new(x - 10.0, y - 5.0, 20.0, 10.0), text, 0.9)
    }

    #[test]
    fn sorts_labels_along_axis() {
        let x = [tb(300.0, 500.0, "30"), tb(100.0, 500.0, "10"), tb(200.0, 500.0, "20")];
        assert_eq!(sort_axis_labels(&x, Axis::X), vec!["10", "20", "30"]);
        let y = [tb(40.0, 50.0, "100"), tb(40.0, 250.0, "0")];
        assert_eq!(sort_axis_labels(&y, Axis::Y), vec!["0", "100"]);
        assert_eq!(sort_axis_labels(&[tb(1.0, 1.0, "5")], Axis::X), vec!["5"]);
        assert!(sort_axis_labels(&[], Axis::Y).is_empty());
    }

    #[test]
    fn classification_rules() {
        let plot = BBox::new(100.0, 50.0, 600.0, 400.0);
        assert_eq!(classify_text_role(&tb(400.0, 470.0, "2015"), &plot), TextFieldKind::XAxisLabels);
        assert_eq!(classify_text_role(&tb(400.0, 20.0, "Sales"), &plot), TextFieldKind::PlotTitle);
        assert_eq!(classify_text_role(&tb(60.0, 200.0, "1,000"), &plot), TextFieldKind::YAxisLabels);
        assert_eq!(classify_text_role(&tb(400.0, 490.0, "Year"), &plot), TextFieldKind::XAxisTitle);
        let rotated = TextBox::new(BBox::new(10.0, 150.0, 14.0, 80.0), "Units", 0.9);
        assert_eq!(classify_text_role(&rotated, &plot), TextFieldKind::YAxisTitle);
        assert_eq!(classify_text_role(&tb(400.0, 200.0, "peak"), &plot), TextFieldKind::DataPointDescription);
    }

    #[test]
    fn label_numbers() {
        assert_eq!(parse_label_number("1,000"), Some(1000.0));
        assert_eq!(parse_label_number(" 45% "), Some(45.0));
        assert_eq!(parse_label_number("\u{2212}3.5"), Some(-3.5));
        assert_eq!(parse_label_number("1,2"), None);
        assert_eq!(parse_label_number("Jan"), None);
        assert_eq!(parse_label_number("2020-01-01"), None);
    }

    #[test]
    fn slot_shapes_and_monotone_labels() {
        let mut m = TextMetadata::default();
        m.set(TextFieldKind::PlotTitle, TextValue::Single("Sales".into()), Provenance::Manual).unwrap();
        assert_eq!(m.text(TextFieldKind::PlotTitle), Some("Sales"));
        assert!(matches!(
            m.set(TextFieldKind::PlotTitle, TextValue::List(vec![]), Provenance::Manual),
            Err(MetadataError::WrongShape { .. })
        ));
        let labels = |v: &[&str]| TextValue::List(v.iter().map(|s| s.to_string()).collect());
        m.set(TextFieldKind::XAxisLabels, labels(&["0", "10", "20"]), Provenance::Ocr).unwrap();
        m.set(TextFieldKind::YAxisLabels, labels(&["Jan", "Feb"]), Provenance::Ocr).unwrap();
        assert_eq!(
            m.set(TextFieldKind::XAxisLabels, labels(&["0", "20", "10"]), Provenance::Ocr),
            Err(MetadataError::NotMonotone(TextFieldKind::XAxisLabels))
        );
        assert_eq!(m.labels(TextFieldKind::XAxisLabels), &["0", "10", "20"]);
    }

    #[test]
    fn serialized_as_field_map() {
        let mut m = TextMetadata::default();
        m.set(TextFieldKind::XAxisTitle, TextValue::Single("Year".into()), Provenance::Ocr).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#"{"x-axis-title":{"value":"Year","provenance":"ocr"}}"#);
        let back: TextMetadata = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }
}
