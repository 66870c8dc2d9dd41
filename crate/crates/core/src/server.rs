//! JSON-over-HTTP front end for [`SessionStore`].
//!
//! ```text
//! POST /sessions                 {network, seed?, human_node?, randomize_tie?} -> SessionView
//! GET  /sessions/{id}            -> SessionView
//! POST /sessions/{id}/decision   {action: "keep"|"delete", edge?: [i,j]} -> SessionView
//! GET  /sessions/{id}/events     text/event-stream of SessionView payloads,
//!                                event names "state", "your_turn", "finished"
//! ```
//!
//! Errors come back as `{"error": <message>, "code": <kind>}`.

use std::collections::HashMap;
use std::convert::Infallible;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::time::Duration;

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::sse::{Event, KeepAlive, Sse};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use futures::stream::{self, Stream, StreamExt};
use serde_json::json;
use tokio::sync::broadcast;
use tokio_stream::wrappers::BroadcastStream;

use crate::error::Error;
use crate::game::Decision;
use crate::session::{CreateSession, SessionStatus, SessionStore, SessionView};

const EXPIRY_TICK: Duration = Duration::from_millis(200);

pub struct AppState {
    store: SessionStore,
    channels: Mutex<HashMap<String, broadcast::Sender<SessionView>>>,
}

impl AppState {
    pub fn new(store: SessionStore) -> Arc<Self> {
        Arc::new(AppState {
            store,
            channels: Mutex::new(HashMap::new()),
        })
    }

    pub fn store(&self) -> &SessionStore {
        &self.store
    }

    fn channel(&self, id: &str) -> broadcast::Sender<SessionView> {
        self.channels
            .lock()
            .expect("channel table lock")
            .entry(id.to_string())
            .or_insert_with(|| broadcast::channel(32).0)
            .clone()
    }

    fn publish(&self, view: &SessionView) {
        // No subscribers is fine.
        let _ = self.channel(&view.session).send(view.clone());
    }

    /// Settles due deadlines and notifies subscribers.
    pub fn tick(&self) {
        for view in self.store.expire_due() {
            self.publish(&view);
        }
    }
}

pub struct ApiError(Error);

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        ApiError(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, code) = match &self.0 {
            Error::UnknownSession(_) => (StatusCode::NOT_FOUND, "unknown_session"),
            Error::NotYourTurn => (StatusCode::CONFLICT, "not_your_turn"),
            Error::DeadlineExpired => (StatusCode::CONFLICT, "deadline_expired"),
            Error::GameOver => (StatusCode::CONFLICT, "finished"),
            Error::InvalidDecision { .. } | Error::OutOfTurn { .. } => {
                (StatusCode::BAD_REQUEST, "invalid_decision")
            }
            Error::UnknownNetwork { .. } => (StatusCode::BAD_REQUEST, "unknown_network"),
            Error::InvalidHumanNode { .. } => (StatusCode::BAD_REQUEST, "invalid_node"),
            Error::Json(_) | Error::Schema(_) => (StatusCode::BAD_REQUEST, "bad_request"),
            _ => (StatusCode::INTERNAL_SERVER_ERROR, "internal"),
        };
        (
            status,
            Json(json!({"error": self.0.to_string(), "code": code})),
        )
            .into_response()
    }
}

async fn create_session(
    State(state): State<Arc<AppState>>,
    Json(req): Json<CreateSession>,
) -> Result<(StatusCode, Json<SessionView>), ApiError> {
    let view = state.store.create(req)?;
    state.publish(&view);
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_session(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<SessionView>, ApiError> {
    let view = state.store.get(&id)?;
    Ok(Json(view))
}

async fn submit_decision(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Json(decision): Json<Decision>,
) -> Result<Json<SessionView>, ApiError> {
    match state.store.submit(&id, decision) {
        Ok(view) => {
            state.publish(&view);
            Ok(Json(view))
        }
        Err(Error::DeadlineExpired) => {
            if let Ok(view) = state.store.get(&id) {
                state.publish(&view);
            }
            Err(Error::DeadlineExpired.into())
        }
        Err(e) => Err(e.into()),
    }
}

fn to_event(view: &SessionView) -> Event {
    let name = match view.status {
        SessionStatus::Finished => "finished",
        _ if view.your_turn => "your_turn",
        _ => "state",
    };
    Event::default()
        .event(name)
        .json_data(view)
        .expect("views serialize")
}

async fn session_events(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Sse<impl Stream<Item = Result<Event, Infallible>>>, ApiError> {
    let receiver = state.channel(&id).subscribe();
    let current = state.store.get(&id)?;
    let first = stream::once(async move { Ok(to_event(&current)) });
    let updates = BroadcastStream::new(receiver)
        .filter_map(|item| async move { item.ok().map(|view| Ok(to_event(&view))) });
    Ok(Sse::new(first.chain(updates)).keep_alive(KeepAlive::default()))
}

pub fn router(state: Arc<AppState>, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/decision", post(submit_decision))
        .route("/sessions/{id}/events", get(session_events))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(tower_http::services::ServeDir::new(dir)),
        None => api,
    }
}

/// Serves until the process is stopped, settling deadlines every 200 ms.
pub async fn serve(
    addr: SocketAddr,
    store: SessionStore,
    static_dir: Option<PathBuf>,
) -> std::io::Result<()> {
    let state = AppState::new(store);
    let ticker = Arc::clone(&state);
    tokio::spawn(async move {
        let mut interval = tokio::time::interval(EXPIRY_TICK);
        loop {
            interval.tick().await;
            ticker.tick();
        }
    });
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state, static_dir)).await
}
