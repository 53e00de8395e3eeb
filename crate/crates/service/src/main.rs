use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use tactichart_core::calibration::CalibrationSet;
use tactichart_core::geometry::PixelPoint;
use tactichart_core::line_extraction::DEFAULT_TOLERANCE;
use tactichart_core::metadata::{AnnotationOcr, OcrEngine, TextFieldKind, TextValue, UnavailableOcr};
use tactichart_core::session::Command;
use tactichart_service::api::{router, AppState};
use tactichart_service::config::Config;
use tactichart_service::pipeline::{convert, write_outputs, ConvertJob, OutputMode};
use tactichart_service::store::Store;

#[derive(Parser)]
#[command(name = "tactichart", version, about = "Line-chart digitization and accessible rendering")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the HTTP session service.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
        /// Where consented sessions are persisted. In-memory only if unset.
        #[arg(long, env = "TACTICHART_DATA_DIR")]
        data_dir: Option<PathBuf>,
        #[arg(long, env = "TACTICHART_CONFIG")]
        config: Option<PathBuf>,
        /// JSON list of text boxes returned by the OCR endpoint.
        #[arg(long)]
        ocr_annotations: Option<PathBuf>,
    },
    /// Convert one chart image without the service.
    Convert {
        image: PathBuf,
        /// JSON calibration set (x_axis and y_axis anchors).
        #[arg(long)]
        calibration: PathBuf,
        /// Pixel on a line, as x,y. Repeat for more lines.
        #[arg(long = "trace-seed", value_parser = parse_seed, required = true)]
        trace_seeds: Vec<PixelPoint>,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputMode::All)]
        mode: OutputMode,
        /// JSON object of text fields, e.g. {"plot-title": "Sales"}.
        #[arg(long)]
        metadata: Option<PathBuf>,
        /// JSON list of edit commands applied after tracing.
        #[arg(long)]
        commands: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        /// Keypoints per traced line. Derived from line length if unset.
        #[arg(long)]
        points: Option<usize>,
        #[arg(long, env = "TACTICHART_CONFIG")]
        config: Option<PathBuf>,
    },
}

fn parse_seed(s: &str) -> Result<PixelPoint, String> {
    let (x, y) = s.split_once(',').ok_or("expected x,y")?;
    let x: f64 = x.trim().parse().map_err(|e| format!("bad x: {e}"))?;
    let y: f64 = y.trim().parse().map_err(|e| format!("bad y: {e}"))?;
    if !x.is_finite() || !y.is_finite() {
        return Err("coordinates must be finite".into());
    }
    Ok(PixelPoint::new(x, y))
}

fn load_config(path: Option<&Path>) -> anyhow::Result<Config> {
    path.map_or_else(|| Ok(Config::default()), Config::load)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

async fn serve(addr: SocketAddr, data_dir: Option<PathBuf>, config: Config, ocr: Option<PathBuf>) -> anyhow::Result<()> {
    let store = match data_dir {
        Some(dir) => Store::open(dir)?,
        None => Store::in_memory(),
    };
    let ocr: Arc<dyn OcrEngine> = match ocr {
        Some(p) => Arc::new(AnnotationOcr::from_path(&p)?),
        None => Arc::new(UnavailableOcr),
    };
    let app = router(AppState {
        store: Arc::new(store),
        ocr,
        config,
    });
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}

fn main() -> anyhow::Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .with_writer(std::io::stderr)
        .init();
    match Cli::parse().command {
        Cmd::Serve {
            addr,
            data_dir,
            config,
            ocr_annotations,
        } => {
            let config = load_config(config.as_deref())?;
            tokio::runtime::Runtime::new()?.block_on(serve(addr, data_dir, config, ocr_annotations))
        }
        Cmd::Convert {
            image,
            calibration,
            trace_seeds,
            out_dir,
            mode,
            metadata,
            commands,
            tolerance,
            points,
            config,
        } => {
            let config = load_config(config.as_deref())?;
            if let Some(0 | 1) = points {
                bail!("--points needs at least 2");
            }
            let metadata: BTreeMap<TextFieldKind, TextValue> = match &metadata {
                Some(p) => read_json(p)?,
                None => BTreeMap::new(),
            };
            let commands: Vec<Command> = match &commands {
                Some(p) => read_json(p)?,
                None => Vec::new(),
            };
            let job = ConvertJob {
                image: std::fs::read(&image).with_context(|| format!("reading {}", image.display()))?,
                calibration: read_json::<CalibrationSet>(&calibration)?,
                seeds: trace_seeds,
                tolerance,
                keypoints: points,
                metadata: metadata.into_iter().collect(),
                commands,
                options: config.render_options(),
            };
            let session = convert(job)?;
            let (written, warnings) = write_outputs(session.chart(), mode, &out_dir)?;
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            for p in written {
                println!("{}", p.display());
            }
            Ok(())
        }
    }
}
