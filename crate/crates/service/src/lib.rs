//! HTTP front end for the streaming monitor.
//!
//! Every POSTed JSON event advances the monitor of one session, and the
//! reply says whether the trace seen so far has been rejected:
//!
//! ```text
//! POST /        {"type":"ping","payload":1}          -> {"error":false}
//! POST /final   {"session":"s1"} or /final?session=s1 -> {"accepted":true,"events":0}
//! POST /reset   {"session":"s1"} or /reset?session=s1 -> {"reset":true}
//! ```
//!
//! An event selects its session through an optional top-level `"session"`
//! string field; without one it goes to the `default` session, which exists
//! from startup. Each session is an independent monitor whose events are
//! processed one at a time in arrival order.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{self, Write};
use std::path::Path;
use std::sync::{Arc, Mutex, MutexGuard, RwLock};

use axum::body::Bytes;
use axum::extract::{Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::post;
use axum::Router;
use serde_json::{json, Value as Json};
use tracemon_core::{Event, MonitorState, SpecProgram};

pub const DEFAULT_SESSION: &str = "default";

/// Longest accepted session identifier.
pub const MAX_SESSION_LEN: usize = 128;

/// Session identifiers are non-empty and consist of URL-unreserved
/// characters only.
pub fn is_valid_session(id: &str) -> bool {
    !id.is_empty()
        && id.len() <= MAX_SESSION_LEN
        && id
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || matches!(b, b'-' | b'_' | b'.' | b'~'))
}

/// A response body with its status; the HTTP layer only adds headers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reply {
    pub status: u16,
    pub body: String,
}

impl Reply {
    fn ok(body: Json) -> Reply {
        Reply {
            status: 200,
            body: body.to_string(),
        }
    }

    fn failure(status: u16, reason: impl Into<String>) -> Reply {
        Reply {
            status,
            body: json!({"error": true, "reason": reason.into()}).to_string(),
        }
    }
}

impl IntoResponse for Reply {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, [(header::CONTENT_TYPE, "application/json")], self.body).into_response()
    }
}

/// Session table plus the loaded specification.
pub struct Monitor {
    program: SpecProgram,
    frontier_cap: usize,
    sessions: RwLock<HashMap<String, Arc<Mutex<MonitorState>>>>,
    log: Option<Mutex<File>>,
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    m.lock().unwrap_or_else(|e| e.into_inner())
}

impl Monitor {
    pub fn new(program: SpecProgram, frontier_cap: usize) -> Monitor {
        assert!(frontier_cap >= 1, "the frontier cap must be at least 1");
        let initial = program.initial_state();
        let sessions = HashMap::from([(DEFAULT_SESSION.to_owned(), Arc::new(Mutex::new(initial)))]);
        Monitor {
            program,
            frontier_cap,
            sessions: RwLock::new(sessions),
            log: None,
        }
    }

    /// Appends one JSON line per processed event to `path`.
    pub fn with_log(mut self, path: &Path) -> io::Result<Monitor> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        self.log = Some(Mutex::new(file));
        Ok(self)
    }

    pub fn program(&self) -> &SpecProgram {
        &self.program
    }

    fn session(&self, id: &str) -> Option<Arc<Mutex<MonitorState>>> {
        self.sessions
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .get(id)
            .cloned()
    }

    fn session_or_create(&self, id: &str) -> Arc<Mutex<MonitorState>> {
        if let Some(s) = self.session(id) {
            return s;
        }
        let mut table = self.sessions.write().unwrap_or_else(|e| e.into_inner());
        table
            .entry(id.to_owned())
            .or_insert_with(|| Arc::new(Mutex::new(self.program.initial_state())))
            .clone()
    }

    /// Steps the selected session with one raw JSON event.
    pub fn handle_event(&self, body: &[u8]) -> Reply {
        let json: Json = match serde_json::from_slice(body) {
            Ok(json) => json,
            Err(e) => return Reply::failure(400, format!("{}:{}: {e}", e.line(), e.column())),
        };
        let session = match session_field(&json) {
            Ok(s) => s,
            Err(reply) => return reply,
        };
        let event = match Event::from_json(&json) {
            Ok(event) => event,
            Err(e) => return Reply::failure(400, e.to_string()),
        };

        let cell = self.session_or_create(&session);
        let mut state = lock(&cell);
        // On failure the session keeps its previous state.
        let next = match self.program.step(&state, &event, self.frontier_cap) {
            Ok(next) => next,
            Err(e) => {
                log::error!("session {session}: {e}");
                return Reply::failure(500, e.to_string());
            }
        };
        *state = next;
        let error = state.is_violated();
        self.append_log(&session, &json, error, state.event_count());
        Reply::ok(json!({ "error": error }))
    }

    /// Whether the events of a session so far form a complete trace.
    pub fn handle_final(&self, session: &str) -> Reply {
        if !is_valid_session(session) {
            return Reply::failure(400, format!("invalid session id {session:?}"));
        }
        let Some(cell) = self.session(session) else {
            return Reply::failure(404, format!("unknown session {session:?}"));
        };
        let state = lock(&cell);
        Reply::ok(json!({
            "accepted": self.program.accepts_final(&state),
            "events": state.event_count(),
        }))
    }

    /// Restarts a session from the main expression, creating it if needed.
    pub fn handle_reset(&self, session: &str) -> Reply {
        if !is_valid_session(session) {
            return Reply::failure(400, format!("invalid session id {session:?}"));
        }
        let cell = self.session_or_create(session);
        *lock(&cell) = self.program.initial_state();
        Reply::ok(json!({ "reset": true }))
    }

    fn append_log(&self, session: &str, event: &Json, error: bool, index: usize) {
        let Some(log) = &self.log else { return };
        let line = json!({"session": session, "index": index, "event": event, "error": error});
        let mut file = lock(log);
        if let Err(e) = writeln!(file, "{line}") {
            log::warn!("cannot append to the event log: {e}");
        }
    }
}

fn session_field(json: &Json) -> Result<String, Reply> {
    match json.get("session") {
        None => Ok(DEFAULT_SESSION.to_owned()),
        Some(Json::String(s)) if is_valid_session(s) => Ok(s.clone()),
        Some(other) => Err(Reply::failure(400, format!("invalid session id {other}"))),
    }
}

/// Session selection for `/final` and `/reset`: the `session` query
/// parameter, else a `"session"` field in a JSON body, else the default.
fn selected_session(query: &HashMap<String, String>, body: &[u8]) -> Result<String, Reply> {
    if let Some(s) = query.get("session") {
        return Ok(s.clone());
    }
    if body.iter().all(u8::is_ascii_whitespace) {
        return Ok(DEFAULT_SESSION.to_owned());
    }
    match serde_json::from_slice::<Json>(body) {
        Ok(json @ Json::Object(_)) => session_field(&json),
        Ok(_) => Err(Reply::failure(400, "request body must be a JSON object")),
        Err(e) => Err(Reply::failure(400, format!("{}:{}: {e}", e.line(), e.column()))),
    }
}

async fn post_event(State(monitor): State<Arc<Monitor>>, body: Bytes) -> Reply {
    monitor.handle_event(&body)
}

async fn post_final(
    State(monitor): State<Arc<Monitor>>,
    Query(query): Query<HashMap<String, String>>,
    body: Bytes,
) -> Reply {
    match selected_session(&query, &body) {
        Ok(session) => monitor.handle_final(&session),
        Err(reply) => reply,
    }
}

async fn post_reset(
    State(monitor): State<Arc<Monitor>>,
    Query(query): Query<HashMap<String, String>>,
    body: Bytes,
) -> Reply {
    match selected_session(&query, &body) {
        Ok(session) => monitor.handle_reset(&session),
        Err(reply) => reply,
    }
}

pub fn router(monitor: Arc<Monitor>) -> Router {
    Router::new()
        .route("/", post(post_event))
        .route("/final", post(post_final))
        .route("/reset", post(post_reset))
        .with_state(monitor)
}
