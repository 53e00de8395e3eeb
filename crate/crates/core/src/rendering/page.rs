use serde::{Deserialize, Serialize};

use super::RenderError;

/// Minimum clearance around Braille text on tactile output.
pub const MIN_BRAILLE_CLEARANCE_MM: f64 = 3.0;
/// Thinnest line that still raises reliably on capsule paper.
pub const MIN_STROKE_MM: f64 = 0.4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BrailleCell {
    /// Horizontal advance per cell, spacing included.
    pub width_mm: f64,
    /// Line height per cell row, spacing included.
    pub height_mm: f64,
}

impl Default for BrailleCell {
    fn default() -> Self {
        Self {
            width_mm: 6.0,
            height_mm: 10.0,
        }
    }
}

/// Physical page for print output. Defaults to A4 landscape.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PageSpec {
    pub width_mm: f64,
    pub height_mm: f64,
    pub margin_mm: f64,
    pub braille_cell: BrailleCell,
    /// Empty space kept around every Braille run.
    pub braille_clearance_mm: f64,
}

impl Default for PageSpec {
    fn default() -> Self {
        Self {
            width_mm: 297.0,
            height_mm: 210.0,
            margin_mm: 10.0,
            braille_cell: BrailleCell::default(),
            braille_clearance_mm: 4.0,
        }
    }
}

impl PageSpec {
    pub fn a4_portrait() -> Self {
        Self {
            width_mm: 210.0,
            height_mm: 297.0,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), RenderError> {
        let bad = |msg: String| Err(RenderError::InvalidPage(msg));
        let dims = [
            self.width_mm,
            self.height_mm,
            self.margin_mm,
            self.braille_cell.width_mm,
            self.braille_cell.height_mm,
            self.braille_clearance_mm,
        ];
        if dims.iter().any(|v| !v.is_finite()) {
            return bad("non-finite page dimension".into());
        }
        if self.width_mm <= 40.0 || self.height_mm <= 40.0 {
            return bad(format!("page {}x{} mm is too small (> 40 mm per side)", self.width_mm, self.height_mm));
        }
        if self.margin_mm < MIN_BRAILLE_CLEARANCE_MM {
            return bad(format!("margin {} mm is below {MIN_BRAILLE_CLEARANCE_MM} mm", self.margin_mm));
        }
        if self.braille_clearance_mm < MIN_BRAILLE_CLEARANCE_MM {
            return bad(format!(
                "Braille clearance {} mm is below {MIN_BRAILLE_CLEARANCE_MM} mm",
                self.braille_clearance_mm
            ));
        }
        if self.braille_cell.width_mm <= 0.0 || self.braille_cell.height_mm <= 0.0 {
            return bad("Braille cell must have positive size".into());
        }
        Ok(())
    }

    /// Drawable length along an axis inside the margins.
    pub fn available_mm(&self, axis: crate::calibration::Axis) -> f64 {
        match axis {
            crate::calibration::Axis::X => self.width_mm - 2.0 * self.margin_mm,
            crate::calibration::Axis::Y => self.height_mm - 2.0 * self.margin_mm,
        }
    }
}
