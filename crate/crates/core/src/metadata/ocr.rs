use std::path::Path;

use thiserror::Error;

use super::TextBox;
use crate::line_extraction::RasterImage;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OcrError {
    /// No engine is reachable; callers fall back to manual entry.
    #[error("OCR engine unavailable: {0}")]
    Unavailable(String),
    #[error("OCR failed: {0}")]
    Failed(String),
}

/// Text recognition backend. Results are suggestions for the operator, never
/// committed to a session directly.
pub trait OcrEngine: Send + Sync {
    fn recognize(&self, image: &RasterImage) -> Result<Vec<TextBox>, OcrError>;
}

/// Engine used when nothing is configured.
#[derive(Debug, Default, Clone)]
pub struct UnavailableOcr;

impl OcrEngine for UnavailableOcr {
    fn recognize(&self, _image: &RasterImage) -> Result<Vec<TextBox>, OcrError> {
        Err(OcrError::Unavailable("no OCR engine configured".into()))
    }
}

/// Replays pre-annotated boxes from a JSON sidecar (a list of text boxes).
#[derive(Debug, Default, Clone)]
pub struct AnnotationOcr {
    boxes: Vec<TextBox>,
}

impl AnnotationOcr {
    pub fn new(boxes: Vec<TextBox>) -> Self {
        Self { boxes }
    }

    pub fn from_json(json: &str) -> Result<Self, OcrError> {
        let boxes: Vec<TextBox> = serde_json::from_str(json).map_err(|e| OcrError::Failed(e.to_string()))?;
        if let Some(bad) = boxes.iter().find(|b| !b.is_valid()) {
            return Err(OcrError::Failed(format!("invalid annotation {:?}", bad.content)));
        }
        Ok(Self { boxes })
    }

    pub fn from_path(path: &Path) -> Result<Self, OcrError> {
        let json = std::fs::read_to_string(path).map_err(|e| OcrError::Unavailable(format!("{}: {e}", path.display())))?;
        Self::from_json(&json)
    }
}

impl OcrEngine for AnnotationOcr {
    fn recognize(&self, _image: &RasterImage) -> Result<Vec<TextBox>, OcrError> {
        Ok(self.boxes.clone())
    }
}
