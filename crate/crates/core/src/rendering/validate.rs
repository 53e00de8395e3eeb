//! Independent checker for tactile print SVG.
//!
//! Reads the document back with an XML parser and measures it in
//! millimetres; it does not share layout code with the print writer.

use roxmltree::{Document, Node};
use serde::Serialize;

use super::braille::is_braille;
use super::{PageSpec, RenderError, MAX_PRINT_LABELS, MIN_BRAILLE_CLEARANCE_MM, MIN_STROKE_MM};
use crate::geometry::{BBox, PixelPoint};

const EPS: f64 = 1e-6;
const PX_MM: f64 = 25.4 / 96.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum PrintViolation {
    ThinStroke { element: String, width_mm: f64 },
    NonBrailleText { text: String, character: char },
    Clearance { text: String, other: String, distance_mm: f64 },
    LabelCount { axis: String, count: usize },
    OutsidePage { element: String },
    UnsupportedElement { element: String },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct PrintReport {
    pub violations: Vec<PrintViolation>,
}

impl PrintReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A stroked segment in millimetres.
struct Segment {
    a: PixelPoint,
    b: PixelPoint,
    half_width: f64,
    owner: String,
}

struct TextRun {
    bbox: BBox,
    text: String,
}

fn length_mm(value: &str, scale: f64) -> Option<f64> {
    let v = value.trim();
    let (num, factor) = if let Some(n) = v.strip_suffix("mm") {
        (n, 1.0)
    } else if let Some(n) = v.strip_suffix("cm") {
        (n, 10.0)
    } else if let Some(n) = v.strip_suffix("in") {
        (n, 25.4)
    } else if let Some(n) = v.strip_suffix("pt") {
        (n, 25.4 / 72.0)
    } else if let Some(n) = v.strip_suffix("px") {
        (n, PX_MM)
    } else {
        return v.parse::<f64>().ok().map(|n| n * scale);
    };
    num.trim().parse::<f64>().ok().map(|n| n * factor)
}

/// Presentation value, from the element or its nearest ancestor, with
/// `style` taking precedence over attributes.
fn inherited<'a>(node: Node<'a, 'a>, name: &str) -> Option<&'a str> {
    for n in node.ancestors().filter(|n| n.is_element()) {
        if let Some(style) = n.attribute("style") {
            for decl in style.split(';') {
                if let Some((k, v)) = decl.split_once(':') {
                    if k.trim() == name {
                        return Some(v.trim());
                    }
                }
            }
        }
        if let Some(v) = n.attribute(name) {
            return Some(v);
        }
    }
    None
}

fn attr_f64(node: Node, name: &str) -> Result<f64, RenderError> {
    let raw = node.attribute(name).unwrap_or("0");
    raw.trim()
        .parse::<f64>()
        .map_err(|_| RenderError::Format(format!("<{}> attribute {name}={raw:?} is not a number", node.tag_name().name())))
}

fn points(node: Node) -> Result<Vec<PixelPoint>, RenderError> {
    let raw = node.attribute("points").unwrap_or("");
    let nums: Vec<f64> = raw
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| RenderError::Format(format!("bad points list {raw:?}")))?;
    if !nums.len().is_multiple_of(2) {
        return Err(RenderError::Format(format!("odd coordinate count in {raw:?}")));
    }
    Ok(nums.chunks(2).map(|c| PixelPoint::new(c[0], c[1])).collect())
}

fn describe(node: Node) -> String {
    let mut s = format!("<{}", node.tag_name().name());
    for key in ["id", "data-role", "data-series"] {
        if let Some(v) = node.attribute(key) {
            s.push_str(&format!(" {key}={v:?}"));
        }
    }
    s.push('>');
    s
}

/// Checks stroke widths, Braille-only text, Braille clearance, per-axis
/// label counts and that everything lies inside the page margins.
pub fn validate_print_constraints(svg: &str, page: &PageSpec) -> Result<PrintReport, RenderError> {
    let doc = Document::parse(svg).map_err(|e| RenderError::Format(e.to_string()))?;
    let root = doc.root_element();
    if root.tag_name().name() != "svg" {
        return Err(RenderError::Format(format!("root element is <{}>, not <svg>", root.tag_name().name())));
    }
    // user units to mm
    let view_w = root
        .attribute("viewBox")
        .and_then(|v| v.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).nth(2))
        .and_then(|v| v.parse::<f64>().ok());
    let width_mm = root.attribute("width").and_then(|w| length_mm(w, PX_MM));
    let scale = match (width_mm, view_w) {
        (Some(w), Some(v)) if v > 0.0 => w / v,
        (Some(_), None) => 1.0,
        (None, _) => PX_MM,
        _ => return Err(RenderError::Format("viewBox with zero width".into())),
    };

    let mut report = PrintReport::default();
    let mut segments: Vec<Segment> = Vec::new();
    let mut texts: Vec<TextRun> = Vec::new();
    let mut label_counts = [0usize; 2];
    let cell = page.braille_cell;
    let pt = |x: f64, y: f64| PixelPoint::new(x * scale, y * scale);

    for node in root.descendants().filter(|n| n.is_element()) {
        let name = node.tag_name().name();
        let stroked = !matches!(inherited(node, "stroke"), None | Some("none"));
        let width = inherited(node, "stroke-width").map(|w| length_mm(w, scale)).unwrap_or(Some(scale));
        let width = width.ok_or_else(|| RenderError::Format(format!("bad stroke-width on {}", describe(node))))?;
        let mut shape: Vec<PixelPoint> = Vec::new();
        let mut closed = false;
        match name {
            "svg" | "g" | "title" | "desc" | "defs" | "metadata" => continue,
            "line" => {
                shape.push(pt(attr_f64(node, "x1")?, attr_f64(node, "y1")?));
                shape.push(pt(attr_f64(node, "x2")?, attr_f64(node, "y2")?));
            }
            "polyline" | "polygon" => {
                shape = points(node)?.into_iter().map(|p| pt(p.x, p.y)).collect();
                closed = name == "polygon";
            }
            "rect" => {
                let (x, y) = (attr_f64(node, "x")?, attr_f64(node, "y")?);
                let (w, h) = (attr_f64(node, "width")?, attr_f64(node, "height")?);
                shape = vec![pt(x, y), pt(x + w, y), pt(x + w, y + h), pt(x, y + h)];
                closed = true;
            }
            "circle" => {
                // approximate by its bounding square; conservative for clearance
                let (cx, cy, r) = (attr_f64(node, "cx")?, attr_f64(node, "cy")?, attr_f64(node, "r")?);
                shape = vec![pt(cx - r, cy - r), pt(cx + r, cy - r), pt(cx + r, cy + r), pt(cx - r, cy + r)];
                closed = true;
            }
            "text" => {
                let content: String = node.descendants().filter(|n| n.is_text()).filter_map(|n| n.text()).collect();
                if let Some(c) = content.chars().find(|c| !is_braille(*c) && !c.is_whitespace()) {
                    report.violations.push(PrintViolation::NonBrailleText {
                        text: content.clone(),
                        character: c,
                    });
                }
                let cells = content.trim().chars().count() as f64;
                let anchor = inherited(node, "text-anchor").unwrap_or("start");
                let (x, y) = (attr_f64(node, "x")? * scale, attr_f64(node, "y")? * scale);
                let w = cells * cell.width_mm;
                let left = match anchor {
                    "middle" => x - w / 2.0,
                    "end" => x - w,
                    _ => x,
                };
                let bbox = BBox::new(left, y - cell.height_mm, w, cell.height_mm);
                match node.attribute("data-role") {
                    Some("x-label") => label_counts[0] += 1,
                    Some("y-label") => label_counts[1] += 1,
                    _ => {}
                }
                if !inside(&bbox, page, 0.0) {
                    report.violations.push(PrintViolation::OutsidePage { element: describe(node) });
                }
                if cells > 0.0 {
                    texts.push(TextRun { bbox, text: content });
                }
                continue;
            }
            "tspan" => continue,
            _ => {
                report.violations.push(PrintViolation::UnsupportedElement { element: describe(node) });
                continue;
            }
        }
        if !stroked {
            // unstroked filled shapes still occupy space
            if matches!(inherited(node, "fill"), None | Some("none")) {
                continue;
            }
        } else if width + EPS < MIN_STROKE_MM {
            report.violations.push(PrintViolation::ThinStroke {
                element: describe(node),
                width_mm: width,
            });
        }
        let half = if stroked { width / 2.0 } else { 0.0 };
        let xs = shape.iter().map(|p| p.x);
        let ys = shape.iter().map(|p| p.y);
        let (x0, x1) = (xs.clone().fold(f64::INFINITY, f64::min), xs.fold(f64::NEG_INFINITY, f64::max));
        let (y0, y1) = (ys.clone().fold(f64::INFINITY, f64::min), ys.fold(f64::NEG_INFINITY, f64::max));
        if x0.is_finite() && !inside(&BBox::new(x0 - half, y0 - half, x1 - x0 + 2.0 * half, y1 - y0 + 2.0 * half), page, 0.0) {
            report.violations.push(PrintViolation::OutsidePage { element: describe(node) });
        }
        let owner = describe(node);
        let mut push = |a: PixelPoint, b: PixelPoint| {
            segments.push(Segment {
                a,
                b,
                half_width: half,
                owner: owner.clone(),
            })
        };
        match shape.len() {
            0 => {}
            1 => push(shape[0], shape[0]),
            _ => {
                for w in shape.windows(2) {
                    push(w[0], w[1]);
                }
                if closed {
                    push(shape[shape.len() - 1], shape[0]);
                }
            }
        }
    }

    for (i, t) in texts.iter().enumerate() {
        let mut worst: Option<(f64, String)> = None;
        let mut note = |d: f64, other: &str| {
            if d + EPS < MIN_BRAILLE_CLEARANCE_MM && worst.as_ref().is_none_or(|(w, _)| d < *w) {
                worst = Some((d, other.to_string()));
            }
        };
        for s in &segments {
            note(t.bbox.distance_to_segment(s.a, s.b) - s.half_width, &s.owner);
        }
        for (j, u) in texts.iter().enumerate() {
            if i != j {
                note(t.bbox.gap(&u.bbox), &u.text);
            }
        }
        if let Some((d, other)) = worst {
            report.violations.push(PrintViolation::Clearance {
                text: t.text.clone(),
                other,
                distance_mm: d,
            });
        }
    }

    for (axis, count) in ["x", "y"].into_iter().zip(label_counts) {
        if !(1..=MAX_PRINT_LABELS).contains(&count) {
            report.violations.push(PrintViolation::LabelCount {
                axis: axis.to_string(),
                count,
            });
        }
    }
    Ok(report)
}

fn inside(b: &BBox, page: &PageSpec, slack: f64) -> bool {
    let m = page.margin_mm;
    let margin_box = BBox::new(m, m, page.width_mm - 2.0 * m, page.height_mm - 2.0 * m);
    margin_box.contains_box(b, slack + EPS)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wrap(body: &str) -> String {
        format!(
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="297mm" height="210mm" viewBox="0 0 297 210">{body}<text x="100" y="195" data-role="x-label">⠼⠁</text><text x="15" y="100" data-role="y-label">⠼⠃</text></svg>"#
        )
    }

    #[test]
    fn clean_document_passes() {
        let svg = wrap(r#"<line x1="50" y1="150" x2="250" y2="150" stroke="black" stroke-width="1"/>"#);
        let r = validate_print_constraints(&svg, &PageSpec::default()).unwrap();
        assert!(r.is_empty(), "{r:?}");
    }

    #[test]
    fn thin_stroke_inherited_from_group() {
        let svg = wrap(r#"<g stroke="black" stroke-width="0.3"><line x1="50" y1="150" x2="250" y2="150"/></g>"#);
        let r = validate_print_constraints(&svg, &PageSpec::default()).unwrap();
        assert!(matches!(r.violations[..], [PrintViolation::ThinStroke { .. }]), "{r:?}");
    }

    #[test]
    fn latin_text_and_crowding() {
        let svg = wrap(r#"<text x="100" y="50">Hi</text><line x1="100" y1="52" x2="200" y2="52" stroke="black" stroke-width="1"/>"#);
        let r = validate_print_constraints(&svg, &PageSpec::default()).unwrap();
        assert!(r.violations.iter().any(|v| matches!(v, PrintViolation::NonBrailleText { character: 'H', .. })));
        assert!(r.violations.iter().any(|v| matches!(v, PrintViolation::Clearance { .. })));
    }

    #[test]
    fn label_counts_and_page_bounds() {
        let svg = r#"<svg xmlns="http://www.w3.org/2000/svg" width="297mm" height="210mm" viewBox="0 0 297 210"><line x1="5" y1="100" x2="200" y2="100" stroke="black" stroke-width="1"/></svg>"#;
        let r = validate_print_constraints(svg, &PageSpec::default()).unwrap();
        assert_eq!(r.violations.iter().filter(|v| matches!(v, PrintViolation::LabelCount { count: 0, .. })).count(), 2);
        assert!(r.violations.iter().any(|v| matches!(v, PrintViolation::OutsidePage { .. })));
    }

    #[test]
    fn paths_and_garbage() {
        let svg = wrap(r#"<path d="M0 0L1 1"/>"#);
        let r = validate_print_constraints(&svg, &PageSpec::default()).unwrap();
        assert!(matches!(r.violations[..], [PrintViolation::UnsupportedElement { .. }]));
        assert!(matches!(validate_print_constraints("<svg", &PageSpec::default()), Err(RenderError::Format(_))));
    }
}
