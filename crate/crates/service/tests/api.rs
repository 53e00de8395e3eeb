mod support;

use std::sync::Arc;

use axum::http::{Method, StatusCode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tactichart_core::geometry::BBox;
use tactichart_core::metadata::{AnnotationOcr, TextBox, UnavailableOcr};
use tactichart_service::api::COMPLETENESS_HEADER;
use tactichart_service::config::Config;
use tactichart_service::store::{snapshot_bytes, Store, SNAPSHOT_FILE};

use support::*;

fn chart() -> SyntheticChart {
    synthetic_chart(&mut ChaCha8Rng::seed_from_u64(7))
}

async fn traced_session(app: &axum::Router, c: &SyntheticChart, consent: bool) -> String {
    let token = create(app, &c.png, consent).await;
    let r = send(app, json_request(Method::POST, &format!("/sessions/{token}/trace"), &json!({"seed": c.seed}))).await;
    assert_eq!(r.status, StatusCode::OK, "{}", r.text());
    let command = r.json()["proposal"]["command"].clone();
    let r = patch(
        app,
        &token,
        0,
        json!([
            {"op": "set-calibration", "calibration": c.calibration},
            command,
            {"op": "set-text-field", "field": "plot-title", "value": "Synthetic"},
            {"op": "set-text-field", "field": "x-axis-title", "value": "Time"},
            {"op": "set-text-field", "field": "y-axis-title", "value": "Level"},
        ]),
    )
    .await;
    assert_eq!(r.status, StatusCode::OK, "{}", r.text());
    assert_eq!(r.json(), json!({"status": "applied", "version": 1}));
    token
}

#[tokio::test]
async fn healthz() {
    let r = send(&app(), empty_request(Method::GET, "/healthz")).await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.text(), "ok");
}

#[tokio::test]
async fn new_session_has_default_anchors() {
    let app = app();
    let r = send(&app, upload_request(&blank_png(800, 600), false)).await;
    assert_eq!(r.status, StatusCode::CREATED);
    let body = r.json();
    assert_eq!(body["version"], 0);
    assert_eq!(body["token"].as_str().unwrap().len(), 22);
    let cal = &body["chart"]["calibration"];
    for axis in ["x_axis", "y_axis"] {
        for p in ["p1", "p2"] {
            assert!(cal[axis][p]["pixel"].is_array(), "{axis}.{p}");
        }
    }
    assert!(!body["completeness"]["missing"].as_array().unwrap().is_empty());
}

#[tokio::test]
async fn oversize_upload_is_413() {
    let app = app();
    let big = vec![0u8; 25 * 1024 * 1024];
    let r = send(&app, upload_request(&big, false)).await;
    assert_eq!(r.status, StatusCode::PAYLOAD_TOO_LARGE);

    // explicit check below the framing allowance
    let small = app_with(
        Arc::new(Store::in_memory()),
        Arc::new(UnavailableOcr),
        Config::parse("[service]\nmax_upload_bytes = 100\n").unwrap(),
    );
    let r = send(&small, upload_request(&blank_png(40, 40), false)).await;
    assert_eq!(r.status, StatusCode::PAYLOAD_TOO_LARGE);
}

#[tokio::test]
async fn text_upload_is_415() {
    let r = send(&app(), upload_request(b"hello, not an image", false)).await;
    assert_eq!(r.status, StatusCode::UNSUPPORTED_MEDIA_TYPE);
    assert!(r.json()["error"].as_str().unwrap().contains("PNG or JPEG"));
}

#[tokio::test]
async fn missing_image_field_is_400() {
    let app = app();
    let req = axum::http::Request::builder()
        .method(Method::POST)
        .uri("/sessions")
        .header("content-type", "multipart/form-data; boundary=x")
        .body(axum::body::Body::from("--x\r\nContent-Disposition: form-data; name=\"consent\"\r\n\r\ntrue\r\n--x--\r\n"))
        .unwrap();
    assert_eq!(send(&app, req).await.status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn unknown_token_is_404() {
    let app = app();
    let r = send(&app, empty_request(Method::GET, "/sessions/AAAAAAAAAAAAAAAAAAAAAA")).await;
    assert_eq!(r.status, StatusCode::NOT_FOUND);
    let r = send(&app, empty_request(Method::GET, "/sessions/not-a-token")).await;
    assert_eq!(r.status, StatusCode::NOT_FOUND);
    let r = send(&app, empty_request(Method::POST, "/sessions/AAAAAAAAAAAAAAAAAAAAAA/undo")).await;
    assert_eq!(r.status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn stale_writer_gets_conflict_with_state() {
    let app = app();
    let token = create(&app, &blank_png(800, 600), false).await;
    let title = |t: &str| json!([{"op": "set-text-field", "field": "plot-title", "value": t}]);
    assert_eq!(patch(&app, &token, 0, title("first")).await.status, StatusCode::OK);
    let r = patch(&app, &token, 0, title("second")).await;
    assert_eq!(r.status, StatusCode::CONFLICT);
    let body = r.json();
    assert_eq!(body["status"], "conflict");
    assert_eq!(body["version"], 1);
    assert_eq!(body["state"]["version"], 1);
    assert_eq!(body["state"]["chart"]["metadata"]["plot-title"]["value"], "first");
}

#[tokio::test]
async fn invalid_command_rejects_whole_patch() {
    let app = app();
    let token = create(&app, &blank_png(800, 600), false).await;
    let r = patch(
        &app,
        &token,
        0,
        json!([
            {"op": "set-text-field", "field": "plot-title", "value": "kept?"},
            {"op": "delete-point", "series": "s9", "index": 0},
        ]),
    )
    .await;
    assert_eq!(r.status, StatusCode::UNPROCESSABLE_ENTITY);
    let s = send(&app, empty_request(Method::GET, &format!("/sessions/{token}"))).await.json();
    assert_eq!(s["version"], 0);
    assert!(s["chart"]["metadata"].get("plot-title").is_none());
}

#[tokio::test]
async fn empty_patch_is_400() {
    let app = app();
    let token = create(&app, &blank_png(800, 600), false).await;
    assert_eq!(patch(&app, &token, 0, json!([])).await.status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn undo_redo_over_http() {
    let app = app();
    let c = chart();
    let token = traced_session(&app, &c, false).await;
    let get = || send(&app, empty_request(Method::GET, &format!("/sessions/{token}")));
    let before = get().await.json()["chart"].clone();
    let r = patch(&app, &token, 1, json!([{"op": "add-point", "series": "s1", "point": [400.5, 300.0]}])).await;
    assert_eq!(r.status, StatusCode::OK, "{}", r.text());
    let after = get().await.json()["chart"].clone();
    assert_ne!(before, after);

    let undo = send(&app, empty_request(Method::POST, &format!("/sessions/{token}/undo"))).await;
    assert_eq!(undo.json(), json!({"status": "applied", "version": 3}));
    assert_eq!(get().await.json()["chart"], before);
    let redo = send(&app, empty_request(Method::POST, &format!("/sessions/{token}/redo"))).await;
    assert_eq!(redo.json(), json!({"status": "applied", "version": 4}));
    assert_eq!(get().await.json()["chart"], after);
    let redo = send(&app, empty_request(Method::POST, &format!("/sessions/{token}/redo"))).await;
    assert_eq!(redo.json(), json!({"status": "empty-history", "version": 4}));
}

#[tokio::test]
async fn undo_on_fresh_session_reports_empty_history() {
    let app = app();
    let token = create(&app, &blank_png(800, 600), false).await;
    let r = send(&app, empty_request(Method::POST, &format!("/sessions/{token}/undo"))).await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.json(), json!({"status": "empty-history", "version": 0}));
}

#[tokio::test]
async fn trace_proposal_lies_on_the_line() {
    let app = app();
    let c = chart();
    let token = create(&app, &c.png, false).await;
    let r = send(
        &app,
        json_request(Method::POST, &format!("/sessions/{token}/trace"), &json!({"seed": c.seed, "keypoints": 40})),
    )
    .await;
    assert_eq!(r.status, StatusCode::OK);
    let body = r.json();
    let kps = body["proposal"]["keypoints"].as_array().unwrap();
    assert_eq!(kps.len(), 40);
    let truth = densify(&c.truth, 0.25);
    for k in kps {
        let p = tactichart_core::geometry::PixelPoint::new(k[0].as_f64().unwrap(), k[1].as_f64().unwrap());
        let d = truth.points().windows(2).map(|w| segment_distance(p, w[0], w[1])).fold(f64::INFINITY, f64::min);
        assert!(d <= 1.0 + 1e-9 || p.x < c.truth[0].x || p.x > c.truth[c.truth.len() - 1].x, "{p:?} is {d} px off");
    }
    // proposals are not committed
    let s = send(&app, empty_request(Method::GET, &format!("/sessions/{token}"))).await.json();
    assert_eq!(s["version"], 0);
}

#[tokio::test]
async fn trace_on_background_is_rejected() {
    let app = app();
    let token = create(&app, &blank_png(200, 100), false).await;
    let r = send(
        &app,
        json_request(Method::POST, &format!("/sessions/{token}/trace"), &json!({"seed": [5.5, 5.5], "tolerance": 0.0})),
    )
    .await;
    assert_eq!(r.status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(r.json()["error"].as_str().unwrap().starts_with("likely background"));
}

#[tokio::test]
async fn ocr_degrades_when_unavailable() {
    let app = app();
    let token = create(&app, &blank_png(100, 100), false).await;
    let r = send(&app, empty_request(Method::POST, &format!("/sessions/{token}/ocr"))).await;
    assert_eq!(r.status, StatusCode::OK);
    let body = r.json();
    assert_eq!(body["status"], "unavailable");
    assert_eq!(body["boxes"], json!([]));
}

#[tokio::test]
async fn ocr_stub_boxes_come_back_verbatim() {
    let boxes = vec![
        TextBox::new(BBox::new(300.0, 20.0, 200.0, 30.0), "Sales", 0.97),
        TextBox::new(BBox::new(95.0, 520.0, 30.0, 14.0), "2010", 0.88),
        TextBox::new(BBox::new(690.0, 520.0, 30.0, 14.0), "2020", 0.42),
    ];
    let app = app_with(Arc::new(Store::in_memory()), Arc::new(AnnotationOcr::new(boxes.clone())), Config::default());
    let token = create(&app, &blank_png(800, 600), false).await;
    let body = send(&app, empty_request(Method::POST, &format!("/sessions/{token}/ocr"))).await.json();
    assert_eq!(body["status"], "ok");
    let got = body["boxes"].as_array().unwrap();
    assert_eq!(got.len(), 3);
    for (g, b) in got.iter().zip(&boxes) {
        let back: TextBox = serde_json::from_value(g.clone()).unwrap();
        assert_eq!(&back, b);
        assert_eq!(g["low_confidence"], b.is_low_confidence());
    }
    assert_eq!(got[0]["suggested_field"], "plot-title");
    assert_eq!(got[1]["suggested_field"], "x-axis-labels");
}

#[tokio::test]
async fn export_requires_calibration() {
    let app = app();
    let token = traced_session(&app, &chart(), false).await;
    let r = patch(&app, &token, 1, json!([{"op": "set-calibration", "calibration": null}])).await;
    assert_eq!(r.status, StatusCode::OK);
    let r = send(&app, empty_request(Method::GET, &format!("/sessions/{token}/export?kind=svg-print"))).await;
    assert_eq!(r.status, StatusCode::UNPROCESSABLE_ENTITY);
    let body = r.json();
    assert_eq!(body["missing"], json!(["calibration"]), "{body}");
    assert!(body["error"].as_str().unwrap().contains("calibration"));
}

#[tokio::test]
async fn exports_every_kind() {
    let app = app();
    let c = chart();
    let token = traced_session(&app, &c, false).await;
    for (kind, ctype, needle) in [
        ("svg-digital", "image/svg+xml", "<desc"),
        ("svg-print", "image/svg+xml", "id=\"braille\""),
        ("csv", "text/csv", "series,x,y"),
        ("description", "text/plain", "Line chart titled 'Synthetic'"),
    ] {
        let r = send(&app, empty_request(Method::GET, &format!("/sessions/{token}/export?kind={kind}"))).await;
        assert_eq!(r.status, StatusCode::OK, "{kind}: {}", r.text());
        assert!(r.headers["content-type"].to_str().unwrap().starts_with(ctype));
        assert!(r.text().contains(needle), "{kind}");
        let warnings: Value = serde_json::from_str(r.headers[COMPLETENESS_HEADER].to_str().unwrap()).unwrap();
        assert!(warnings.is_array());
    }
    let r = send(&app, empty_request(Method::GET, &format!("/sessions/{token}/export?kind=pdf"))).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn consented_sessions_survive_restart() {
    let dir = tempfile::tempdir().unwrap();
    let c = chart();
    let (kept, dropped) = {
        let store = Arc::new(Store::open(dir.path()).unwrap());
        let app = app_with(store, Arc::new(UnavailableOcr), Config::default());
        let kept = traced_session(&app, &c, true).await;
        send(&app, empty_request(Method::POST, &format!("/sessions/{kept}/undo"))).await;
        let dropped = traced_session(&app, &c, false).await;
        (kept, dropped)
    };
    let on_disk = std::fs::read(dir.path().join(&kept).join(SNAPSHOT_FILE)).unwrap();
    assert!(!dir.path().join(&dropped).exists());

    let store = Store::open(dir.path()).unwrap();
    assert_eq!(store.len(), 1);
    let handle = store.get(&kept).unwrap();
    let reloaded = snapshot_bytes(handle.lock().unwrap().state()).unwrap();
    let (a, b) = (String::from_utf8(reloaded).unwrap(), String::from_utf8(on_disk).unwrap());
    for (i, (x, y)) in a.lines().zip(b.lines()).enumerate() {
        assert_eq!(x, y, "snapshot line {}", i + 1);
    }
    assert_eq!(a, b);
    let s = handle.lock().unwrap();
    assert_eq!(s.version(), 2);
    assert_eq!(s.history().redo.len(), 1);
}
