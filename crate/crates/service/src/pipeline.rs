//! Tracing proposals and the headless conversion used by the CLI.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use tactichart_core::calibration::CalibrationSet;
use tactichart_core::geometry::PixelPoint;
use tactichart_core::line_extraction::{
    default_keypoint_count, mask_to_polyline, sample_equidistant, trace_color, ExtractionError, PixelPolyline,
    RasterImage,
};
use tactichart_core::metadata::{TextFieldKind, TextValue};
use tactichart_core::session::{Chart, ChartSession, Command, RenderOptions, SessionPatch};
use thiserror::Error;

use crate::api::{render_export, ExportKind};

/// Masks covering more than this share of the image are almost always the
/// background rather than a line.
pub const BACKGROUND_COVERAGE: f64 = 0.5;

#[derive(Clone, Debug, Serialize)]
pub struct TraceProposal {
    /// Full-resolution centre line.
    pub trace: PixelPolyline,
    /// Equidistant keypoints the series would start with.
    pub keypoints: PixelPolyline,
    pub coverage: f64,
    /// Ready-to-send command that accepts the proposal.
    pub command: Command,
}

#[derive(Debug, Error)]
pub enum TraceFailure {
    #[error(transparent)]
    Extraction(#[from] ExtractionError),
    #[error("likely background: mask covers {:.1}% of the image", .coverage * 100.0)]
    LikelyBackground { coverage: f64 },
}

pub fn propose_trace(
    image: &RasterImage,
    seed: PixelPoint,
    tolerance: f64,
    keypoints: Option<usize>,
    name: &str,
) -> Result<TraceProposal, TraceFailure> {
    let mask = trace_color(image, seed, tolerance)?;
    let coverage = mask.coverage();
    if coverage > BACKGROUND_COVERAGE {
        return Err(TraceFailure::LikelyBackground { coverage });
    }
    let trace = mask_to_polyline(&mask)?;
    let n = keypoints.unwrap_or_else(|| default_keypoint_count(trace.arc_length()));
    let sampled = sample_equidistant(&trace, n)?;
    Ok(TraceProposal {
        command: Command::AddSeries {
            name: name.to_string(),
            trace: trace.clone(),
            keypoints: Some(n),
        },
        trace,
        keypoints: sampled,
        coverage,
    })
}

pub struct ConvertJob {
    pub image: Vec<u8>,
    pub calibration: CalibrationSet,
    pub seeds: Vec<PixelPoint>,
    pub tolerance: f64,
    pub keypoints: Option<usize>,
    pub metadata: Vec<(TextFieldKind, TextValue)>,
    /// Applied after tracing, as if sent by an editor.
    pub commands: Vec<Command>,
    pub options: RenderOptions,
}

/// Runs a whole conversion through the same commands the service accepts.
pub fn convert(job: ConvertJob) -> anyhow::Result<ChartSession> {
    let mut session = ChartSession::create(job.image, false)?.with_options(job.options);
    let mut commands = vec![Command::SetCalibration {
        calibration: Some(job.calibration),
    }];
    for (field, value) in job.metadata {
        commands.push(Command::SetTextField {
            field,
            value: Some(value),
            provenance: None,
        });
    }
    for (i, seed) in job.seeds.iter().enumerate() {
        let proposal = propose_trace(session.image(), *seed, job.tolerance, job.keypoints, "")
            .map_err(|e| anyhow::anyhow!("trace seed {} ({}, {}): {e}", i + 1, seed.x, seed.y))?;
        commands.push(proposal.command);
    }
    commands.extend(job.commands);
    if !commands.is_empty() {
        let base_version = session.version();
        session.apply_patch(&SessionPatch { base_version, commands })?;
    }
    Ok(session)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputMode {
    Print,
    Digital,
    Csv,
    #[default]
    All,
}

pub const DIGITAL_FILE: &str = "chart-digital.svg";
pub const PRINT_FILE: &str = "chart-print.svg";
pub const CSV_FILE: &str = "chart.csv";
pub const DESCRIPTION_FILE: &str = "description.txt";

/// Writes the requested documents into `dir` and returns the files written
/// and any warnings. The description is always written.
pub fn write_outputs(chart: &Chart, mode: OutputMode, dir: &Path) -> anyhow::Result<(Vec<PathBuf>, Vec<String>)> {
    let kinds: &[(ExportKind, &str)] = match mode {
        OutputMode::Print => &[(ExportKind::SvgPrint, PRINT_FILE)],
        OutputMode::Digital => &[(ExportKind::SvgDigital, DIGITAL_FILE)],
        OutputMode::Csv => &[(ExportKind::Csv, CSV_FILE)],
        OutputMode::All => &[
            (ExportKind::SvgDigital, DIGITAL_FILE),
            (ExportKind::SvgPrint, PRINT_FILE),
            (ExportKind::Csv, CSV_FILE),
        ],
    };
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::new();
    let mut warnings = chart.completeness().warnings;
    for &(kind, name) in kinds.iter().chain([(ExportKind::Description, DESCRIPTION_FILE)].iter()) {
        let (doc, w) = render_export(chart, kind)?;
        for w in w {
            if !warnings.contains(&w) {
                warnings.push(w);
            }
        }
        let path = dir.join(name);
        std::fs::write(&path, doc).with_context(|| format!("writing {}", path.display()))?;
        written.push(path);
    }
    Ok((written, warnings))
}
