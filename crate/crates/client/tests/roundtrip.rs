use dfx_ahp::hierarchy::{Intensity, JudgmentRecord};
use dfx_ahp::presets::load_bundled;
use dfx_ahp::{EngineOptions, SolvedModel};
use dfx_ahp_api::CreateSession;
use dfx_ahp_client::{Client, ClientError};
use dfx_ahp_service::AppState;

async fn spawn() -> Client {
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(dfx_ahp_service::serve_until(listener, AppState::in_memory(), std::future::pending()));
    Client::new(&format!("http://{addr}")).unwrap()
}

#[tokio::test]
async fn session_lifecycle() {
    let client = spawn().await;
    client.health().await.unwrap();
    let created = client.create_session(&CreateSession::preset("demo")).await.unwrap();
    assert!(created.meta.illustrative);
    assert_eq!(created.contexts_pending, 0);
    let id = created.meta.id;

    let results = client.results(&id).await.unwrap();
    let model = load_bundled("demo").unwrap().model().unwrap();
    let local = SolvedModel::solve(model, EngineOptions::default()).unwrap();
    assert_eq!(results.report.weights, local.solution().weights);

    let edit = JudgmentRecord::new("reliability and stability", "Reliability", "Cost", Intensity::new(6, true).unwrap());
    let delta = client.what_if(&id, edit.clone()).await.unwrap();
    assert_eq!(delta.revision, 0);
    assert_eq!(delta.delta, local.what_if(&edit).unwrap());

    let ack = client.submit(&id, 0, vec![edit.clone()]).await.unwrap();
    assert_eq!(ack.revision, 1);
    let after = client.results(&id).await.unwrap();
    assert_eq!(after.report.weights, delta.delta.new_weights);

    let err = client.submit(&id, 0, vec![edit]).await.unwrap_err();
    assert_eq!(err.code(), Some("StaleRevision"));
    assert!(matches!(err, ClientError::Api { status: 409, .. }));

    let view = client.session(&id).await.unwrap();
    assert_eq!(view.meta.revision, 1);
}

#[tokio::test]
async fn catalog_queries() {
    let client = spawn().await;
    assert_eq!(client.catalog(&[]).await.unwrap().count, 50);
    let cost = client.catalog(&[("name", "Design for Cost")]).await.unwrap();
    assert_eq!(cost.entries[0].name, "Cost");
    let err = client.catalog(&[("scope", "Galaxy")]).await.unwrap_err();
    assert_eq!(err.code(), Some("InvalidFilterValue"));
    assert_eq!(client.gaps().await.unwrap().gap_count, 7);
    assert_eq!(client.presets().await.unwrap().len(), 4);
    let err = client.create_session(&CreateSession::preset("nope")).await.unwrap_err();
    assert!(matches!(err, ClientError::Api { status: 404, .. }));
}

#[tokio::test]
async fn unreachable_server_is_a_transport_error() {
    let err = Client::new("http://127.0.0.1:9").unwrap().presets().await.unwrap_err();
    assert!(matches!(err, ClientError::Transport(_)));
    assert!(matches!(Client::new("not a url"), Err(ClientError::InvalidUrl { .. })));
}
