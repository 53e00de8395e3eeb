//! HTTP routes.

use std::sync::Arc;
use std::time::Duration;

use axum::extract::{DefaultBodyLimit, Multipart, Path, Query, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tactichart_core::geometry::{BBox, PixelPoint};
use tactichart_core::line_extraction::{ExtractionError, DEFAULT_TOLERANCE};
use tactichart_core::metadata::{classify_text_role, generate_description, OcrEngine, OcrError, TextBox, TextFieldKind};
use tactichart_core::rendering::{export_csv, render_svg, RenderError, RenderMode};
use tactichart_core::session::{
    Chart, ChartSession, CommandError, Completeness, HistoryOutcome, PatchOutcome, SessionPatch,
};

use crate::config::Config;
use crate::pipeline::{propose_trace, TraceFailure};
use crate::store::{SessionHandle, Store};

#[derive(Clone)]
pub struct AppState {
    pub store: Arc<Store>,
    pub ocr: Arc<dyn OcrEngine>,
    pub config: Config,
}

pub fn router(state: AppState) -> Router {
    // room for the multipart framing around a maximal image
    let limit = state.config.service.max_upload_bytes + 64 * 1024;
    Router::new()
        .route("/healthz", get(healthz))
        .route("/sessions", post(create_session))
        .route("/sessions/{token}", get(get_session).patch(patch_session))
        .route("/sessions/{token}/undo", post(undo))
        .route("/sessions/{token}/redo", post(redo))
        .route("/sessions/{token}/trace", post(trace))
        .route("/sessions/{token}/ocr", post(ocr))
        .route("/sessions/{token}/export", get(export))
        .layer(DefaultBodyLimit::max(limit))
        .with_state(Arc::new(state))
}

#[derive(Debug)]
pub enum ApiError {
    NotFound,
    BadRequest(String),
    PayloadTooLarge(String),
    UnsupportedMedia(String),
    Unprocessable(Value),
    Internal(String),
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, body) = match self {
            ApiError::NotFound => (StatusCode::NOT_FOUND, json!({"error": "unknown session"})),
            ApiError::BadRequest(m) => (StatusCode::BAD_REQUEST, json!({"error": m})),
            ApiError::PayloadTooLarge(m) => (StatusCode::PAYLOAD_TOO_LARGE, json!({"error": m})),
            ApiError::UnsupportedMedia(m) => (StatusCode::UNSUPPORTED_MEDIA_TYPE, json!({"error": m})),
            ApiError::Unprocessable(v) => (StatusCode::UNPROCESSABLE_ENTITY, v),
            ApiError::Internal(m) => {
                tracing::error!("internal error: {m}");
                (StatusCode::INTERNAL_SERVER_ERROR, json!({"error": "internal error"}))
            }
        };
        (status, Json(body)).into_response()
    }
}

impl From<anyhow::Error> for ApiError {
    fn from(e: anyhow::Error) -> Self {
        ApiError::Internal(e.to_string())
    }
}

impl From<CommandError> for ApiError {
    fn from(e: CommandError) -> Self {
        match e {
            CommandError::EmptyPatch => ApiError::BadRequest(e.to_string()),
            e => ApiError::Unprocessable(json!({"error": e.to_string()})),
        }
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn session(state: &AppState, token: &str) -> ApiResult<SessionHandle> {
    state.store.get(token).ok_or(ApiError::NotFound)
}

fn lock(handle: &SessionHandle) -> std::sync::MutexGuard<'_, ChartSession> {
    // a panic mid-command never leaves a half-applied chart behind, since
    // patches build a copy first
    handle.lock().unwrap_or_else(|p| p.into_inner())
}

/// What clients see of a session.
#[derive(Serialize)]
pub struct SessionView<'a> {
    pub token: &'a str,
    pub version: u64,
    pub consent: bool,
    pub chart: &'a Chart,
    pub completeness: Completeness,
    pub undo_depth: usize,
    pub redo_depth: usize,
}

impl<'a> SessionView<'a> {
    pub fn of(s: &'a ChartSession) -> Self {
        Self {
            token: s.token().as_str(),
            version: s.version(),
            consent: s.consent(),
            chart: s.chart(),
            completeness: s.chart().completeness(),
            undo_depth: s.history().undo.len(),
            redo_depth: s.history().redo.len(),
        }
    }
}

async fn healthz() -> &'static str {
    "ok"
}

async fn create_session(State(state): State<Arc<AppState>>, mut form: Multipart) -> ApiResult<Response> {
    let max = state.config.service.max_upload_bytes;
    let too_large = || ApiError::PayloadTooLarge(format!("image exceeds {max} bytes"));
    let mut image: Option<Vec<u8>> = None;
    let mut consent = false;
    loop {
        let field = match form.next_field().await {
            Ok(Some(f)) => f,
            Ok(None) => break,
            Err(e) if e.status() == StatusCode::PAYLOAD_TOO_LARGE => return Err(too_large()),
            Err(e) => return Err(ApiError::BadRequest(e.body_text())),
        };
        match field.name() {
            Some("image") => {
                let bytes = field.bytes().await.map_err(|e| {
                    if e.status() == StatusCode::PAYLOAD_TOO_LARGE {
                        too_large()
                    } else {
                        ApiError::BadRequest(e.body_text())
                    }
                })?;
                image = Some(bytes.to_vec());
            }
            Some("consent") => {
                let text = field.text().await.map_err(|e| ApiError::BadRequest(e.body_text()))?;
                consent = matches!(text.trim(), "true" | "1" | "yes" | "on");
            }
            _ => {}
        }
    }
    let image = image.ok_or_else(|| ApiError::BadRequest("missing multipart field \"image\"".into()))?;
    if image.len() > max {
        return Err(too_large());
    }
    let session = ChartSession::create(image, consent)
        .map_err(|e| match e {
            ExtractionError::Format(m) => ApiError::UnsupportedMedia(format!("not a PNG or JPEG image: {m}")),
            e => ApiError::Unprocessable(json!({"error": e.to_string()})),
        })?
        .with_options(state.config.render_options());
    let body = serde_json::to_value(SessionView::of(&session)).map_err(|e| ApiError::Internal(e.to_string()))?;
    state.store.insert(session)?;
    tracing::info!(consent, "session created");
    Ok((StatusCode::CREATED, Json(body)).into_response())
}

async fn get_session(State(state): State<Arc<AppState>>, Path(token): Path<String>) -> ApiResult<Response> {
    let handle = session(&state, &token)?;
    let s = lock(&handle);
    Ok(Json(SessionView::of(&s)).into_response())
}

async fn patch_session(
    State(state): State<Arc<AppState>>,
    Path(token): Path<String>,
    Json(patch): Json<SessionPatch>,
) -> ApiResult<Response> {
    let handle = session(&state, &token)?;
    let mut s = lock(&handle);
    match s.apply_patch(&patch)? {
        PatchOutcome::Applied { version } => {
            state.store.persist(&s)?;
            Ok(Json(json!({"status": "applied", "version": version})).into_response())
        }
        PatchOutcome::Conflict { version } => Ok((
            StatusCode::CONFLICT,
            Json(json!({"status": "conflict", "version": version, "state": SessionView::of(&s)})),
        )
            .into_response()),
    }
}

fn history_response(state: &AppState, s: &ChartSession, outcome: HistoryOutcome) -> ApiResult<Response> {
    if matches!(outcome, HistoryOutcome::Applied { .. }) {
        state.store.persist(s)?;
    }
    Ok(Json(outcome).into_response())
}

async fn undo(State(state): State<Arc<AppState>>, Path(token): Path<String>) -> ApiResult<Response> {
    let handle = session(&state, &token)?;
    let mut s = lock(&handle);
    let outcome = s.undo()?;
    history_response(&state, &s, outcome)
}

async fn redo(State(state): State<Arc<AppState>>, Path(token): Path<String>) -> ApiResult<Response> {
    let handle = session(&state, &token)?;
    let mut s = lock(&handle);
    let outcome = s.redo()?;
    history_response(&state, &s, outcome)
}

#[derive(Deserialize)]
pub struct TraceRequest {
    pub seed: PixelPoint,
    #[serde(default)]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub keypoints: Option<usize>,
    #[serde(default)]
    pub name: Option<String>,
}

async fn trace(
    State(state): State<Arc<AppState>>,
    Path(token): Path<String>,
    Json(req): Json<TraceRequest>,
) -> ApiResult<Response> {
    let handle = session(&state, &token)?;
    let image = lock(&handle).image().clone();
    let result = tokio::task::spawn_blocking(move || {
        propose_trace(
            &image,
            req.seed,
            req.tolerance.unwrap_or(DEFAULT_TOLERANCE),
            req.keypoints,
            req.name.as_deref().unwrap_or(""),
        )
    })
    .await
    .map_err(|e| ApiError::Internal(e.to_string()))?;
    match result {
        Ok(p) => Ok(Json(json!({"status": "proposal", "proposal": p})).into_response()),
        Err(e @ TraceFailure::LikelyBackground { coverage }) => Err(ApiError::Unprocessable(json!({
            "error": e.to_string(),
            "warning": "likely background",
            "coverage": coverage,
        }))),
        Err(e) => Err(ApiError::Unprocessable(json!({"error": e.to_string()}))),
    }
}

#[derive(Serialize)]
struct OcrSuggestion {
    #[serde(flatten)]
    text: TextBox,
    low_confidence: bool,
    suggested_field: TextFieldKind,
}

/// Rectangle spanned by the calibration anchors; a stand-in for the plot
/// area when classifying text.
fn plot_region(chart: &Chart) -> BBox {
    let (w, h) = (chart.image_size.0 as f64, chart.image_size.1 as f64);
    match &chart.calibration {
        Some(c) => {
            let (x1, x2) = c.x_axis.anchor_components();
            let (y1, y2) = c.y_axis.anchor_components();
            BBox::new(x1.min(x2), y1.min(y2), (x2 - x1).abs(), (y2 - y1).abs())
        }
        None => BBox::new(0.1 * w, 0.1 * h, 0.8 * w, 0.8 * h),
    }
}

async fn ocr(State(state): State<Arc<AppState>>, Path(token): Path<String>) -> ApiResult<Response> {
    let handle = session(&state, &token)?;
    let (image, region) = {
        let s = lock(&handle);
        (s.image().clone(), plot_region(s.chart()))
    };
    let engine = state.ocr.clone();
    let timeout = Duration::from_millis(state.config.service.ocr_timeout_ms);
    let run = tokio::task::spawn_blocking(move || engine.recognize(&image));
    let result = match tokio::time::timeout(timeout, run).await {
        Ok(joined) => joined.map_err(|e| ApiError::Internal(e.to_string()))?,
        Err(_) => Err(OcrError::Unavailable("recognition timed out".into())),
    };
    match result {
        Ok(boxes) => {
            let boxes: Vec<OcrSuggestion> = boxes
                .into_iter()
                .map(|b| OcrSuggestion {
                    low_confidence: b.is_low_confidence(),
                    suggested_field: classify_text_role(&b, &region),
                    text: b,
                })
                .collect();
            Ok(Json(json!({"status": "ok", "boxes": boxes})).into_response())
        }
        Err(OcrError::Unavailable(reason)) => {
            Ok(Json(json!({"status": "unavailable", "reason": reason, "boxes": []})).into_response())
        }
        Err(OcrError::Failed(reason)) => Err(ApiError::Unprocessable(json!({"error": reason}))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExportKind {
    SvgDigital,
    SvgPrint,
    Csv,
    Description,
}

#[derive(Deserialize)]
struct ExportQuery {
    kind: ExportKind,
}

pub const COMPLETENESS_HEADER: &str = "x-completeness-warnings";

/// Renders one export document together with the warnings it produced.
pub fn render_export(chart: &Chart, kind: ExportKind) -> Result<(String, Vec<String>), RenderError> {
    let page = chart.options.page;
    Ok(match kind {
        ExportKind::SvgDigital => {
            let r = render_svg(chart, RenderMode::DigitalAccessible, &page)?;
            (r.document, r.warnings)
        }
        ExportKind::SvgPrint => {
            let r = render_svg(chart, RenderMode::PrintAccessible, &page)?;
            (r.document, r.warnings)
        }
        ExportKind::Csv => (export_csv(chart)?, Vec::new()),
        ExportKind::Description => {
            chart.require_complete()?;
            let d = generate_description(chart, chart.options.description_level)?;
            (d.text, d.warnings)
        }
    })
}

async fn export(
    State(state): State<Arc<AppState>>,
    Path(token): Path<String>,
    Query(q): Query<ExportQuery>,
) -> ApiResult<Response> {
    let handle = session(&state, &token)?;
    let chart = lock(&handle).chart().clone();
    let completeness = chart.completeness();
    let (document, mut warnings) = render_export(&chart, q.kind).map_err(|e| match e {
        RenderError::Incomplete(inc) => ApiError::Unprocessable(json!({
            "error": inc.to_string(),
            "missing": inc.missing,
        })),
        e => ApiError::Unprocessable(json!({"error": e.to_string()})),
    })?;
    for w in completeness.warnings {
        if !warnings.contains(&w) {
            warnings.insert(0, w);
        }
    }
    let content_type = match q.kind {
        ExportKind::SvgDigital | ExportKind::SvgPrint => "image/svg+xml; charset=utf-8",
        ExportKind::Csv => "text/csv; charset=utf-8",
        ExportKind::Description => "text/plain; charset=utf-8",
    };
    // header values must be visible ASCII
    let header_json: String = serde_json::to_string(&warnings)
        .unwrap_or_default()
        .chars()
        .map(|c| if c.is_ascii() && !c.is_ascii_control() { c } else { '?' })
        .collect();
    let mut resp = document.into_response();
    let headers = resp.headers_mut();
    headers.insert(header::CONTENT_TYPE, HeaderValue::from_static(content_type));
    if let Ok(v) = HeaderValue::from_str(&header_json) {
        headers.insert(COMPLETENESS_HEADER, v);
    }
    Ok(resp)
}
