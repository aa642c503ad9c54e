//! JSON review API over a [`Service`].
//!
//! | method | path                                      |
//! |--------|-------------------------------------------|
//! | GET    | `/api/documents`                          |
//! | GET    | `/api/documents/{doc}/paragraphs/{pid}`   |
//! | POST   | `/api/sentences/{id}/propose`             |
//! | GET    | `/api/sets/{id}`                          |
//! | POST   | `/api/sets/{id}/{approve,reject,edit}`    |
//! | PUT    | `/api/sets/{id}/layers/{FE,GF,PT}`        |
//! | PUT    | `/api/sets/{id}/null-instantiations`      |
//! | GET    | `/api/analysis?src=EN&tgt=AR[&threshold]` |

use std::sync::Arc;

use axum::extract::rejection::{JsonRejection, PathRejection, QueryRejection};
use axum::extract::{FromRequest, FromRequestParts, Request, State};
use axum::http::request::Parts;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use framealign_core::annotation::{Action, NullInstantiation, SpanLabel};
use framealign_core::Lang;
use serde::{Deserialize, Serialize};

use crate::error::AppError;
use crate::ops::Service;

impl AppError {
    pub fn status(&self) -> StatusCode {
        use framealign_core::Error as E;
        match self {
            AppError::NotFound(_) | AppError::Core(E::UnknownFrame(_)) => StatusCode::NOT_FOUND,
            AppError::Core(E::IllegalTransition { .. } | E::AlreadyRealized(_)) => StatusCode::CONFLICT,
            AppError::Validation(_)
            | AppError::Core(E::Integrity(_) | E::SpanOutOfBounds { .. } | E::DuplicateLayer { .. }) => {
                StatusCode::UNPROCESSABLE_ENTITY
            }
            AppError::Usage(_) | AppError::Core(E::Parse { .. } | E::Alignment(_)) => StatusCode::BAD_REQUEST,
            AppError::Core(E::DivisionUndefined) => StatusCode::UNPROCESSABLE_ENTITY,
            AppError::Io { .. } | AppError::Config { .. } => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl IntoResponse for AppError {
    fn into_response(self) -> Response {
        (self.status(), Json(self.to_json())).into_response()
    }
}

type Shared = Arc<Service>;

// Extractors whose rejections use the JSON error body.

struct Path<T>(T);
struct Query<T>(T);
struct Body<T>(T);

fn usage(e: impl std::fmt::Display) -> AppError {
    AppError::Usage(e.to_string())
}

impl<S: Send + Sync, T: serde::de::DeserializeOwned + Send> FromRequestParts<S> for Path<T> {
    type Rejection = AppError;

    async fn from_request_parts(parts: &mut Parts, state: &S) -> Result<Self, AppError> {
        axum::extract::Path::<T>::from_request_parts(parts, state)
            .await
            .map(|p| Path(p.0))
            .map_err(|e: PathRejection| usage(e.body_text()))
    }
}

impl<S: Send + Sync, T: serde::de::DeserializeOwned> FromRequestParts<S> for Query<T> {
    type Rejection = AppError;

    async fn from_request_parts(parts: &mut Parts, state: &S) -> Result<Self, AppError> {
        axum::extract::Query::<T>::from_request_parts(parts, state)
            .await
            .map(|q| Query(q.0))
            .map_err(|e: QueryRejection| usage(e.body_text()))
    }
}

impl<S: Send + Sync, T: serde::de::DeserializeOwned> FromRequest<S> for Body<T> {
    type Rejection = AppError;

    async fn from_request(req: Request, state: &S) -> Result<Self, AppError> {
        Json::<T>::from_request(req, state)
            .await
            .map(|j| Body(j.0))
            .map_err(|e: JsonRejection| usage(e.body_text()))
    }
}

/// Run a blocking operation off the async workers.
async fn blocking<T, F>(service: Shared, op: F) -> Result<Json<T>, AppError>
where
    T: Serialize + Send + 'static,
    F: FnOnce(&Service) -> crate::error::Result<T> + Send + 'static,
{
    tokio::task::spawn_blocking(move || op(&service))
        .await
        .map_err(|e| AppError::Usage(format!("request aborted: {e}")))?
        .map(Json)
}

fn today() -> String {
    chrono::Local::now().format("%d/%m/%Y").to_string()
}

async fn documents(State(s): State<Shared>) -> Result<impl IntoResponse, AppError> {
    blocking(s, |s| s.documents()).await
}

async fn paragraph(
    State(s): State<Shared>,
    Path((doc, pid)): Path<(String, String)>,
) -> Result<impl IntoResponse, AppError> {
    blocking(s, move |s| s.paragraph(&doc, &pid)).await
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProposeBody {
    date: Option<String>,
}

async fn propose(
    State(s): State<Shared>,
    Path(id): Path<u64>,
    body: axum::body::Bytes,
) -> Result<impl IntoResponse, AppError> {
    // the body is optional
    let body: Option<ProposeBody> = match body.is_empty() {
        true => None,
        false => Some(serde_json::from_slice(&body).map_err(usage)?),
    };
    let date = body.and_then(|b| b.date).unwrap_or_else(today);
    blocking(s, move |s| s.propose_sentence(id, &date)).await
}

async fn get_set(State(s): State<Shared>, Path(id): Path<u64>) -> Result<impl IntoResponse, AppError> {
    blocking(s, move |s| s.set(id)).await
}

async fn review(
    State(s): State<Shared>,
    Path((id, action)): Path<(u64, String)>,
) -> Result<impl IntoResponse, AppError> {
    let action = Action::parse(&action).ok_or_else(|| AppError::NotFound(format!("action {action}")))?;
    blocking(s, move |s| s.review(id, action)).await
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LayerBody {
    labels: Vec<SpanLabel>,
}

async fn put_layer(
    State(s): State<Shared>,
    Path((id, layer)): Path<(u64, String)>,
    Body(body): Body<LayerBody>,
) -> Result<impl IntoResponse, AppError> {
    blocking(s, move |s| s.put_layer(id, &layer, body.labels)).await
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NullBody {
    fe: String,
    itype: String,
}

async fn mark_null(
    State(s): State<Shared>,
    Path(id): Path<u64>,
    Body(body): Body<NullBody>,
) -> Result<impl IntoResponse, AppError> {
    let itype = NullInstantiation::parse(&body.itype).ok_or_else(|| {
        AppError::Usage(format!(
            "unknown null instantiation {:?}; use CNI, DNI or INI",
            body.itype
        ))
    })?;
    blocking(s, move |s| s.mark_null(id, &body.fe, itype)).await
}

#[derive(Debug, Deserialize)]
struct AnalysisQuery {
    src: String,
    tgt: String,
    threshold: Option<usize>,
}

async fn analysis(State(s): State<Shared>, Query(q): Query<AnalysisQuery>) -> Result<impl IntoResponse, AppError> {
    blocking(s, move |s| s.analyze(&Lang::new(q.src), &Lang::new(q.tgt), q.threshold)).await
}

pub fn router(service: Service) -> Router {
    Router::new()
        .route("/api/documents", get(documents))
        .route("/api/documents/{doc}/paragraphs/{pid}", get(paragraph))
        .route("/api/sentences/{id}/propose", post(propose))
        .route("/api/sets/{id}", get(get_set))
        .route("/api/sets/{id}/null-instantiations", put(mark_null))
        .route("/api/sets/{id}/layers/{layer}", put(put_layer))
        .route("/api/sets/{id}/{action}", post(review))
        .route("/api/analysis", get(analysis))
        .with_state(Arc::new(service))
}

/// Serve until the process is stopped.
pub async fn serve(service: Service, bind: &str, port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind((bind, port)).await?;
    axum::serve(listener, router(service)).await
}
