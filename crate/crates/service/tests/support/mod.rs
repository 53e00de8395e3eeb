#![allow(dead_code)]

use std::sync::Arc;

use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use rand::Rng;
use serde_json::Value;
use tactichart_core::calibration::{Axis, AxisCalibration, AxisScaleKind, CalibrationPoint, CalibrationSet};
use tactichart_core::geometry::PixelPoint;
use tactichart_core::line_extraction::{LineSeries, PixelPolyline, RasterImage, SeriesId};
use tactichart_core::metadata::{OcrEngine, Provenance, TextFieldKind, TextValue, UnavailableOcr};
use tactichart_core::session::{Chart, SeriesEntry};
use tactichart_service::api::{router, AppState};
use tactichart_service::config::Config;
use tactichart_service::store::Store;
use tower::ServiceExt;

pub const W: u32 = 800;
pub const H: u32 = 600;
pub const WHITE: [u8; 4] = [255, 255, 255, 255];
pub const BLACK: [u8; 4] = [0, 0, 0, 255];

// plot box used by every synthetic chart
pub const LEFT: f64 = 100.0;
pub const RIGHT: f64 = 700.0;
pub const TOP: f64 = 100.0;
pub const BOTTOM: f64 = 500.0;

pub fn line(points: &[(f64, f64)]) -> PixelPolyline {
    PixelPolyline::new(points.iter().map(|&(x, y)| PixelPoint::new(x, y)).collect()).unwrap()
}

pub fn linear_axis(axis: Axis, p1: f64, v1: f64, p2: f64, v2: f64) -> AxisCalibration {
    match axis {
        Axis::X => AxisCalibration::new(
            CalibrationPoint::new(p1, BOTTOM, v1),
            CalibrationPoint::new(p2, BOTTOM, v2),
            AxisScaleKind::Linear,
            Axis::X,
        ),
        Axis::Y => AxisCalibration::new(
            CalibrationPoint::new(LEFT, p1, v1),
            CalibrationPoint::new(LEFT, p2, v2),
            AxisScaleKind::Linear,
            Axis::Y,
        ),
    }
}

/// x spans LEFT..RIGHT, y spans BOTTOM..TOP.
pub fn plot_cal(x: (f64, f64), y: (f64, f64)) -> CalibrationSet {
    CalibrationSet {
        x_axis: linear_axis(Axis::X, LEFT, x.0, RIGHT, x.1),
        y_axis: linear_axis(Axis::Y, BOTTOM, y.0, TOP, y.1),
    }
}

pub fn set_text(chart: &mut Chart, kind: TextFieldKind, text: &str) {
    chart.metadata.set(kind, TextValue::Single(text.into()), Provenance::Manual).unwrap();
}

pub fn set_labels(chart: &mut Chart, kind: TextFieldKind, labels: &[String]) {
    chart.metadata.set(kind, TextValue::List(labels.to_vec()), Provenance::Manual).unwrap();
}

/// Adds a series whose keypoints are exactly `points`.
pub fn push_series(chart: &mut Chart, name: &str, points: &[(f64, f64)]) -> SeriesId {
    let id = chart.next_series_id();
    let source = line(points);
    chart.series.push(SeriesEntry {
        series: LineSeries {
            id: id.clone(),
            name: name.into(),
            keypoints: source.clone(),
            style: None,
            keypoint_count_target: points.len(),
        },
        source,
    });
    id
}

/// Distance from `p` to the segment `a`-`b`.
pub fn segment_distance(p: PixelPoint, a: PixelPoint, b: PixelPoint) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0)
    };
    p.distance(PixelPoint::new(a.x + t * dx, a.y + t * dy))
}

/// Paints every pixel whose centre lies within `width / 2` of the polyline.
pub fn stroke(img: &mut RasterImage, pts: &[PixelPoint], width: f64, rgba: [u8; 4]) {
    let r = width / 2.0;
    for seg in pts.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let x0 = (a.x.min(b.x) - r).floor().max(0.0) as u32;
        let x1 = ((a.x.max(b.x) + r).ceil() as u32).min(img.width() - 1);
        let y0 = (a.y.min(b.y) - r).floor().max(0.0) as u32;
        let y1 = ((a.y.max(b.y) + r).ceil() as u32).min(img.height() - 1);
        for y in y0..=y1 {
            for x in x0..=x1 {
                let c = PixelPoint::new(f64::from(x) + 0.5, f64::from(y) + 0.5);
                if segment_distance(c, a, b) <= r {
                    img.put(x, y, rgba);
                }
            }
        }
    }
}

/// Inserts points so no gap exceeds `step`.
pub fn densify(pts: &[PixelPoint], step: f64) -> PixelPolyline {
    let mut out = vec![pts[0]];
    for seg in pts.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let n = (a.distance(b) / step).ceil().max(1.0) as usize;
        for k in 1..=n {
            let t = k as f64 / n as f64;
            out.push(PixelPoint::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)));
        }
    }
    PixelPolyline::new(out).unwrap()
}

/// A rasterized single-line chart with its ground truth.
pub struct SyntheticChart {
    pub image: RasterImage,
    pub png: Vec<u8>,
    pub truth: Vec<PixelPoint>,
    pub calibration: CalibrationSet,
    pub seed: PixelPoint,
    pub color: [u8; 4],
}

impl SyntheticChart {
    /// Data units per pixel along y.
    pub fn y_units_per_px(&self) -> f64 {
        let y = &self.calibration.y_axis;
        ((y.p2.value - y.p1.value) / (y.p2.pixel.y - y.p1.pixel.y)).abs()
    }

    /// Ground-truth y in data units at data x, by linear interpolation.
    pub fn truth_y_at(&self, x: f64) -> f64 {
        let data: Vec<_> = self.truth.iter().map(|&p| self.calibration.pixel_to_data(p).unwrap()).collect();
        let x = x.clamp(data[0].x, data[data.len() - 1].x);
        for w in data.windows(2) {
            if x <= w[1].x {
                let t = if w[1].x == w[0].x { 0.0 } else { (x - w[0].x) / (w[1].x - w[0].x) };
                return w[0].y + t * (w[1].y - w[0].y);
            }
        }
        data[data.len() - 1].y
    }
}

/// White 800x600 chart with black axes, light grid and one coloured line
/// through 4-12 evenly spaced vertices.
pub fn synthetic_chart(rng: &mut impl Rng) -> SyntheticChart {
    let mut image = RasterImage::filled(W, H, WHITE).unwrap();
    for k in 1..5 {
        let y = BOTTOM - k as f64 * 80.0;
        stroke(&mut image, &[PixelPoint::new(LEFT, y), PixelPoint::new(RIGHT, y)], 1.0, [220, 220, 220, 255]);
    }
    stroke(&mut image, &[PixelPoint::new(LEFT, BOTTOM), PixelPoint::new(RIGHT + 20.0, BOTTOM)], 2.0, BLACK);
    stroke(&mut image, &[PixelPoint::new(LEFT, BOTTOM), PixelPoint::new(LEFT, TOP - 20.0)], 2.0, BLACK);

    let n = rng.random_range(4..=12);
    let truth: Vec<PixelPoint> = (0..n)
        .map(|i| {
            let x = LEFT + 10.0 + (RIGHT - LEFT - 10.0) * i as f64 / (n - 1) as f64;
            PixelPoint::new(x, rng.random_range(TOP + 10.0..BOTTOM - 10.0))
        })
        .collect();
    let palette = [[214, 39, 40, 255], [31, 119, 180, 255], [44, 160, 44, 255], [148, 103, 189, 255], [255, 127, 14, 255]];
    let color = palette[rng.random_range(0..palette.len())];
    let width = rng.random_range(2.0..4.0);
    stroke(&mut image, &truth, width, color);

    let x0: f64 = rng.random_range(-1000.0..1000.0);
    let y0: f64 = rng.random_range(-1000.0..1000.0);
    let calibration = plot_cal(
        (x0, x0 + rng.random_range(1.0..500.0)),
        (y0, y0 + rng.random_range(1.0..500.0)),
    );
    // a painted pixel near the middle of the first segment
    let mid = PixelPoint::new((truth[0].x + truth[1].x) / 2.0, (truth[0].y + truth[1].y) / 2.0);
    let seed = PixelPoint::new(mid.x.floor() + 0.5, mid.y.floor() + 0.5);
    let (sx, sy) = (seed.x as u32, seed.y as u32);
    assert_eq!(image.rgba(sx, sy), color, "seed must land on the stroke");
    let png = image.encode_png();
    SyntheticChart {
        image,
        png,
        truth,
        calibration,
        seed,
        color,
    }
}

pub fn blank_png(w: u32, h: u32) -> Vec<u8> {
    RasterImage::filled(w, h, WHITE).unwrap().encode_png()
}

pub fn app_with(store: Arc<Store>, ocr: Arc<dyn OcrEngine>, config: Config) -> Router {
    router(AppState { store, ocr, config })
}

pub fn app() -> Router {
    app_with(Arc::new(Store::in_memory()), Arc::new(UnavailableOcr), Config::default())
}

const BOUNDARY: &str = "tactichart-test-boundary";

/// multipart/form-data body with an `image` file part and a `consent` field.
pub fn upload_request(image: &[u8], consent: bool) -> Request<Body> {
    let mut body = Vec::new();
    body.extend_from_slice(
        format!(
            "--{BOUNDARY}\r\nContent-Disposition: form-data; name=\"consent\"\r\n\r\n{consent}\r\n\
             --{BOUNDARY}\r\nContent-Disposition: form-data; name=\"image\"; filename=\"chart.png\"\r\n\
             Content-Type: application/octet-stream\r\n\r\n"
        )
        .as_bytes(),
    );
    body.extend_from_slice(image);
    body.extend_from_slice(format!("\r\n--{BOUNDARY}--\r\n").as_bytes());
    Request::builder()
        .method(Method::POST)
        .uri("/sessions")
        .header(header::CONTENT_TYPE, format!("multipart/form-data; boundary={BOUNDARY}"))
        .body(Body::from(body))
        .unwrap()
}

pub fn json_request(method: Method, uri: &str, body: &Value) -> Request<Body> {
    Request::builder()
        .method(method)
        .uri(uri)
        .header(header::CONTENT_TYPE, "application/json")
        .body(Body::from(serde_json::to_vec(body).unwrap()))
        .unwrap()
}

pub fn empty_request(method: Method, uri: &str) -> Request<Body> {
    Request::builder().method(method).uri(uri).body(Body::empty()).unwrap()
}

pub struct Reply {
    pub status: StatusCode,
    pub headers: axum::http::HeaderMap,
    pub bytes: Vec<u8>,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_slice(&self.bytes)
            .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&self.bytes)))
    }

    pub fn text(&self) -> String {
        String::from_utf8(self.bytes.clone()).unwrap()
    }
}

pub async fn send(app: &Router, req: Request<Body>) -> Reply {
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let headers = resp.headers().clone();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
    Reply { status, headers, bytes }
}

/// Creates a session and returns its token.
pub async fn create(app: &Router, image: &[u8], consent: bool) -> String {
    let r = send(app, upload_request(image, consent)).await;
    assert_eq!(r.status, StatusCode::CREATED, "{}", String::from_utf8_lossy(&r.bytes));
    r.json()["token"].as_str().unwrap().to_string()
}

pub async fn patch(app: &Router, token: &str, base_version: u64, commands: Value) -> Reply {
    send(
        app,
        json_request(
            Method::PATCH,
            &format!("/sessions/{token}"),
            &serde_json::json!({"base_version": base_version, "commands": commands}),
        ),
    )
    .await
}
