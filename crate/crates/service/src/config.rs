//! TOML configuration: page geometry, description level, service limits.
//!
//! ```toml
//! [page]
//! width_mm = 210.0
//! height_mm = 297.0
//!
//! [description]
//! level = 2
//!
//! [service]
//! max_upload_bytes = 20971520
//! ocr_timeout_ms = 10000
//! ```

use std::path::Path;

use anyhow::Context;
use serde::Deserialize;
use tactichart_core::metadata::DescriptionLevel;
use tactichart_core::rendering::PageSpec;
use tactichart_core::session::RenderOptions;

pub const DEFAULT_MAX_UPLOAD_BYTES: usize = 20 * 1024 * 1024;
pub const DEFAULT_OCR_TIMEOUT_MS: u64 = 10_000;

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub page: PageSpec,
    pub description: DescriptionConfig,
    pub service: ServiceConfig,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DescriptionConfig {
    pub level: DescriptionLevel,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceConfig {
    pub max_upload_bytes: usize,
    pub ocr_timeout_ms: u64,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            max_upload_bytes: DEFAULT_MAX_UPLOAD_BYTES,
            ocr_timeout_ms: DEFAULT_OCR_TIMEOUT_MS,
        }
    }
}

impl Config {
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let config: Config = toml::from_str(text)?;
        config.page.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn render_options(&self) -> RenderOptions {
        RenderOptions {
            page: self.page,
            description_level: self.description.level,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(Config::parse("").unwrap(), Config::default());
    }

    #[test]
    fn partial_page_keeps_other_defaults() {
        let c = Config::parse("[page]\nwidth_mm = 210.0\nheight_mm = 297.0\n[description]\nlevel = 1\n").unwrap();
        assert_eq!(c.page, PageSpec::a4_portrait());
        assert_eq!(c.description.level, DescriptionLevel::CONSTRUCTION);
        assert_eq!(c.service.max_upload_bytes, DEFAULT_MAX_UPLOAD_BYTES);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(Config::parse("[description]\nlevel = 3\n").is_err());
        assert!(Config::parse("[page]\nwidth_mm = -1.0\n").is_err());
        assert!(Config::parse("[pages]\n").is_err());
    }
}
