//! Line-chart digitization and accessible rendering.

pub mod calibration;
pub mod geometry;
pub mod line_extraction;
pub mod metadata;
pub mod rendering;
pub mod session;
