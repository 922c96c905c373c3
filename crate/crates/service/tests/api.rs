use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use dfx_ahp::catalog::KnowledgeBase;
use dfx_ahp::hierarchy::{CriterionLayer, CriterionNode, DecisionHierarchy, HierarchyDocument, Intensity, JudgmentRecord};
use dfx_ahp::presets::load_bundled;
use dfx_ahp::{solve, EngineOptions, Model, SolvedModel};
use dfx_ahp_service::{router, AppState, Journal, SessionStore};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req
            .header("content-type", "application/json")
            .body(Body::from(b.to_string()))
            .unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap_or_else(|_| Value::String(String::from_utf8_lossy(&bytes).into()))
    };
    (status, value)
}

fn app() -> Router {
    router(AppState::in_memory())
}

async fn create(app: &Router, body: Value) -> String {
    let (status, v) = call(app, Method::POST, "/sessions", Some(body)).await;
    assert_eq!(status, StatusCode::CREATED, "{v}");
    v["id"].as_str().unwrap().to_string()
}

fn three_by_three_doc(judgments: &[(&str, &str, u8, bool)]) -> HierarchyDocument {
    let layer = CriterionLayer {
        name: "criteria".into(),
        nodes: vec![CriterionNode {
            name: "only".into(),
            parent: "goal".into(),
        }],
    };
    let alts = vec!["a".to_string(), "b".to_string(), "c".to_string()];
    let h = DecisionHierarchy::new("goal", vec![layer], alts).unwrap();
    h.to_document(
        judgments
            .iter()
            .map(|&(r, c, g, inv)| JudgmentRecord::new("only", r, c, Intensity::new(g, inv).unwrap()))
            .collect(),
    )
}

#[tokio::test]
async fn demo_session_results() {
    let app = app();
    let id = create(&app, json!({"preset": "demo"})).await;
    let (status, v) = call(&app, Method::GET, &format!("/sessions/{id}/results"), None).await;
    assert_eq!(status, StatusCode::OK);
    let weights: Vec<f64> = serde_json::from_value(v["report"]["weights"]["alternative_weights"].clone()).unwrap();
    assert!((weights.iter().sum::<f64>() - 1.0).abs() < 1e-9);

    // same engine, same numbers
    let model = load_bundled("demo").unwrap().model().unwrap();
    let batch = solve(&model, &EngineOptions::default()).unwrap();
    assert_eq!(weights, batch.weights.alternative_weights);
}

#[tokio::test]
async fn reads_never_mutate() {
    let app = app();
    let id = create(&app, json!({"preset": "demo"})).await;
    let edit = json!({"edit": {"context": "security and privacy", "row": "Cost", "col": "Testability", "grade": 9}});
    for _ in 0..2 {
        assert_eq!(call(&app, Method::GET, &format!("/sessions/{id}"), None).await.1["revision"], 0);
        assert_eq!(call(&app, Method::GET, &format!("/sessions/{id}/results"), None).await.1["revision"], 0);
        let (s, v) = call(&app, Method::POST, &format!("/sessions/{id}/whatif"), Some(edit.clone())).await;
        assert_eq!(s, StatusCode::OK, "{v}");
        assert_eq!(v["revision"], 0);
    }
    let (_, view) = call(&app, Method::GET, &format!("/sessions/{id}"), None).await;
    let judgments = view["document"]["judgments"].as_array().unwrap();
    let cell = judgments
        .iter()
        .find(|j| j["context"] == "security and privacy" && j["row"] == "Cost" && j["col"] == "Testability")
        .unwrap();
    assert_eq!((cell["grade"].as_i64(), cell["inverted"].as_bool()), (Some(5), Some(true)));
}

#[tokio::test]
async fn live_feedback_and_pending_contexts() {
    let app = app();
    let doc = three_by_three_doc(&[("a", "b", 2, false)]);
    let id = create(&app, json!({"document": doc})).await;
    let (status, v) = call(&app, Method::GET, &format!("/sessions/{id}/results"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(v["code"], "ContextsIncomplete");
    assert_eq!(v["details"]["contexts"][0]["context"], "only");
    assert_eq!(v["details"]["contexts"][0]["missing_pairs"].as_array().unwrap().len(), 2);

    let (_, view) = call(&app, Method::GET, &format!("/sessions/{id}"), None).await;
    assert_eq!(view["contexts"][0]["status"], "pending");

    let body = json!({"revision": 0, "judgments": [
        {"context": "only", "row": "a", "col": "c", "grade": 4},
        {"context": "only", "row": "b", "col": "c", "grade": 2},
    ]});
    let (status, ack) = call(&app, Method::PUT, &format!("/sessions/{id}/judgments"), Some(body)).await;
    assert_eq!(status, StatusCode::OK, "{ack}");
    assert_eq!(ack["revision"], 1);
    assert_eq!(ack["contexts"][0]["status"], "solved");
    assert!(ack["contexts"][0]["consistency"]["cr"].as_f64().unwrap().abs() < 1e-9);
    assert_eq!(ack["contexts"][0]["consistency"]["pass"], true);
    let (status, _) = call(&app, Method::GET, &format!("/sessions/{id}/results"), None).await;
    assert_eq!(status, StatusCode::OK);
}

#[tokio::test]
async fn all_equal_matrix_has_zero_cr() {
    let app = app();
    let id = create(&app, json!({"document": three_by_three_doc(&[("a", "b", 1, false), ("a", "c", 1, false)])})).await;
    let body = json!({"revision": 0, "judgments": [{"context": "only", "row": "b", "col": "c", "grade": 1}]});
    let (_, ack) = call(&app, Method::PUT, &format!("/sessions/{id}/judgments"), Some(body)).await;
    assert_eq!(ack["contexts"][0]["consistency"]["cr"].as_f64(), Some(0.0));
}

#[tokio::test]
async fn inconsistent_matrix_is_flagged() {
    let app = app();
    let doc = three_by_three_doc(&[("a", "b", 9, false), ("b", "c", 9, false), ("a", "c", 9, true)]);
    let id = create(&app, json!({"document": doc})).await;
    let (_, v) = call(&app, Method::GET, &format!("/sessions/{id}/results"), None).await;
    let ctx = &v["report"]["contexts"][0];
    assert!(ctx["consistency"]["cr"].as_f64().unwrap() >= 0.10);
    assert_eq!(ctx["consistency"]["pass"], false);
    assert_eq!(v["report"]["all_consistent"], false);
}

#[tokio::test]
async fn stale_revision_rejected() {
    let app = app();
    let id = create(&app, json!({"preset": "demo"})).await;
    let goal = "Choose a DfX technique for a connected thermostat";
    let body = |g: u8| {
        json!({"revision": 0, "judgments": [
            {"context": goal, "row": "security and privacy", "col": "reliability and stability", "grade": g}
        ]})
    };
    let (s1, _) = call(&app, Method::PUT, &format!("/sessions/{id}/judgments"), Some(body(3))).await;
    assert_eq!(s1, StatusCode::OK);
    let (s2, v) = call(&app, Method::PUT, &format!("/sessions/{id}/judgments"), Some(body(5))).await;
    assert_eq!(s2, StatusCode::CONFLICT);
    assert_eq!(v["code"], "StaleRevision");
    assert_eq!(v["details"]["current"], 1);
}

#[tokio::test]
async fn sessions_are_isolated() {
    let app = app();
    let a = create(&app, json!({"preset": "demo"})).await;
    let b = create(&app, json!({"preset": "demo"})).await;
    let before = call(&app, Method::GET, &format!("/sessions/{b}/results"), None).await.1;
    let body = json!({"revision": 0, "judgments": [
        {"context": "reliability and stability", "row": "Reliability", "col": "Cost", "grade": 7, "inverted": true}
    ]});
    let (s, _) = call(&app, Method::PUT, &format!("/sessions/{a}/judgments"), Some(body)).await;
    assert_eq!(s, StatusCode::OK);
    let after = call(&app, Method::GET, &format!("/sessions/{b}/results"), None).await.1;
    assert_eq!(before, after);
    let changed = call(&app, Method::GET, &format!("/sessions/{a}/results"), None).await.1;
    assert_ne!(changed["report"]["weights"], before["report"]["weights"]);
}

#[tokio::test]
async fn presets_and_metadata() {
    let app = app();
    let (s, v) = call(&app, Method::POST, "/sessions", Some(json!({"preset": "wearable-health-sensor"}))).await;
    assert_eq!(s, StatusCode::CREATED);
    assert_eq!(v["illustrative"], true);
    assert!(v["notice"].as_str().unwrap().starts_with("ILLUSTRATIVE"));

    let (s, v) = call(&app, Method::POST, "/sessions", Some(json!({"preset": "iot-full"}))).await;
    assert_eq!(s, StatusCode::CREATED);
    assert_eq!(v["contexts_total"], 76);
    let id = v["id"].as_str().unwrap();
    let (_, view) = call(&app, Method::GET, &format!("/sessions/{id}"), None).await;
    assert_eq!(view["document"]["layers"][0]["nodes"].as_array().unwrap().len(), 15);
    assert_eq!(view["document"]["layers"][1]["nodes"].as_array().unwrap().len(), 60);
    assert_eq!(view["document"]["alternatives"].as_array().unwrap().len(), 50);

    let (s, v) = call(&app, Method::POST, "/sessions", Some(json!({"preset": "no-such-thing"}))).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert_eq!(v["code"], "UnknownPreset");
    assert!(v["details"]["available"].as_array().unwrap().len() >= 4);

    let (_, list) = call(&app, Method::GET, "/presets", None).await;
    assert_eq!(list.as_array().unwrap().len(), 4);
}

#[tokio::test]
async fn whatif_matches_batch() {
    let app = app();
    let id = create(&app, json!({"preset": "demo"})).await;
    let goal = "Choose a DfX technique for a connected thermostat";
    let same = json!({"edit": {"context": goal, "row": "security and privacy", "col": "power efficiency and sustainability", "grade": 3}});
    let (_, v) = call(&app, Method::POST, &format!("/sessions/{id}/whatif"), Some(same)).await;
    assert!(v["delta"]["changes"].as_array().unwrap().is_empty());

    let edit = JudgmentRecord::new("reliability and stability", "Reliability", "Testability", Intensity::new(9, true).unwrap());
    let (_, v) = call(&app, Method::POST, &format!("/sessions/{id}/whatif"), Some(json!({"edit": edit}))).await;
    let model = load_bundled("demo").unwrap().model().unwrap();
    let batch = SolvedModel::solve(model, EngineOptions::default()).unwrap().what_if(&edit).unwrap();
    let served: dfx_ahp::engine::RankingDelta = serde_json::from_value(v["delta"].clone()).unwrap();
    assert_eq!(served, batch);
}

#[tokio::test]
async fn validation_errors() {
    let app = app();
    let id = create(&app, json!({"preset": "demo"})).await;
    let put = |j: Value| json!({"revision": 0, "judgments": [j]});
    let (s, v) = call(
        &app,
        Method::PUT,
        &format!("/sessions/{id}/judgments"),
        Some(put(json!({"context": "security and privacy", "row": "Cost", "col": "Testability", "grade": 10}))),
    )
    .await;
    assert_eq!((s, v["code"].as_str()), (StatusCode::UNPROCESSABLE_ENTITY, Some("OutOfScale")));
    let (s, v) = call(
        &app,
        Method::PUT,
        &format!("/sessions/{id}/judgments"),
        Some(put(json!({"context": "nowhere", "row": "Cost", "col": "Testability", "grade": 1}))),
    )
    .await;
    assert_eq!((s, v["code"].as_str()), (StatusCode::UNPROCESSABLE_ENTITY, Some("UnknownContext")));
    assert_eq!(call(&app, Method::GET, &format!("/sessions/{id}"), None).await.1["revision"], 0);

    let (s, v) = call(&app, Method::GET, "/sessions/not-a-session", None).await;
    assert_eq!((s, v["code"].as_str()), (StatusCode::NOT_FOUND, Some("UnknownSession")));
    let (s, v) = call(&app, Method::POST, "/sessions", Some(json!({"preset": "demo", "extra": 1}))).await;
    assert_eq!((s, v["code"].as_str()), (StatusCode::BAD_REQUEST, Some("BadRequest")));
    let (s, _) = call(&app, Method::POST, "/sessions", Some(json!({}))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);

    let mut doc = serde_json::to_value(three_by_three_doc(&[])).unwrap();
    doc["colour"] = json!("blue");
    let (s, v) = call(&app, Method::POST, "/sessions", Some(json!({"document": doc.clone()}))).await;
    assert_eq!((s, v["code"].as_str()), (StatusCode::UNPROCESSABLE_ENTITY, Some("Document")));
    let (s, _) = call(&app, Method::POST, "/sessions", Some(json!({"document": doc, "lenient": true}))).await;
    assert_eq!(s, StatusCode::CREATED);

    let conflict = three_by_three_doc(&[("a", "b", 3, false), ("b", "a", 5, false)]);
    let (s, v) = call(&app, Method::POST, "/sessions", Some(json!({"document": conflict}))).await;
    assert_eq!((s, v["code"].as_str()), (StatusCode::UNPROCESSABLE_ENTITY, Some("ConflictingJudgment")));
}

#[tokio::test]
async fn catalog_endpoints() {
    let app = app();
    let (_, v) = call(&app, Method::GET, "/catalog", None).await;
    assert_eq!(v["count"], 50);
    assert_eq!(v["version"], KnowledgeBase::bundled().version);
    let (_, v) = call(&app, Method::GET, "/catalog?scope=Ecosystem&focus=External", None).await;
    let names: Vec<&str> = v["entries"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"Sustainability") && names.contains(&"Mood"));
    let (s, v) = call(&app, Method::GET, "/catalog?colour=red", None).await;
    assert_eq!((s, v["code"].as_str()), (StatusCode::BAD_REQUEST, Some("UnknownFilterField")));
    let (_, v) = call(&app, Method::GET, "/catalog/gaps", None).await;
    assert_eq!(v["gap_count"], 7);
    assert_eq!(v["total_strategies"], 20);
}

#[tokio::test]
async fn journal_replays_sessions() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sessions.jsonl");
    let options = EngineOptions::default();
    let state = AppState::new(
        KnowledgeBase::bundled(),
        SessionStore::with_journal(Journal::open(&path).unwrap(), &options).unwrap(),
        options,
    );
    let app = router(state);
    let id = create(&app, json!({"preset": "demo"})).await;
    let doc_id = create(&app, json!({"document": three_by_three_doc(&[("a", "b", 2, false)])})).await;
    let body = json!({"revision": 0, "judgments": [
        {"context": "reliability and stability", "row": "Reliability", "col": "Cost", "grade": 7, "inverted": true}
    ]});
    call(&app, Method::PUT, &format!("/sessions/{id}/judgments"), Some(body)).await;
    let before = call(&app, Method::GET, &format!("/sessions/{id}/results"), None).await.1;
    let doc_before = call(&app, Method::GET, &format!("/sessions/{doc_id}"), None).await.1;
    drop(app);

    // a torn write at the end must not prevent recovery
    use std::io::Write;
    std::fs::OpenOptions::new().append(true).open(&path).unwrap().write_all(b"{\"event\":\"jud").unwrap();

    let replayed = router(AppState::new(
        KnowledgeBase::bundled(),
        SessionStore::with_journal(Journal::open(&path).unwrap(), &options).unwrap(),
        options,
    ));
    let after = call(&replayed, Method::GET, &format!("/sessions/{id}/results"), None).await.1;
    assert_eq!(before, after);
    assert_eq!(after["revision"], 1);
    assert_eq!(call(&replayed, Method::GET, &format!("/sessions/{doc_id}"), None).await.1, doc_before);
}

#[test]
fn session_apply_touches_only_edited_context() {
    use dfx_ahp_service::Session;
    let model: Model = load_bundled("demo").unwrap().model().unwrap();
    let options = EngineOptions::default();
    let s = Session::new(uuid_zero(), origin(), model, &options).unwrap();
    let edit = JudgmentRecord::new("security and privacy", "Cost", "Modularity", Intensity::new(4, false).unwrap());
    let (next, touched) = s.apply(&[edit], &options).unwrap();
    assert_eq!(touched.len(), 1);
    assert_eq!(touched[0].context, "security and privacy");
    assert_eq!(next.revision, 1);
    let unchanged: Vec<_> = s.statuses().into_iter().filter(|c| c.context != "security and privacy").collect();
    let after: Vec<_> = next.statuses().into_iter().filter(|c| c.context != "security and privacy").collect();
    assert_eq!(unchanged, after);
}

fn uuid_zero() -> uuid::Uuid {
    uuid::Uuid::nil()
}

fn origin() -> dfx_ahp_service::Origin {
    dfx_ahp_service::Origin {
        preset: None,
        title: None,
        illustrative: false,
    }
}
