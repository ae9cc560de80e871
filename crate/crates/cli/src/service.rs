//! HTTP front end over the core library.
//!
//! Models live in an append-only in-memory registry; uploads never replace an
//! existing id. Points are exchanged in model (normalized) units and the
//! scaler is published with the model metadata so clients can convert.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use svmact_core::analysis::{risk_score, InterpretabilityReport};
use svmact_core::trainer::{generate, Scaler};
use svmact_core::{
    compare_solutions, interpretability_ranking, nearest_support_vector, parse_libsvm_model, solve_action,
    ActionResult, ComparisonReport, Dataset, Error, KernelSpec, Label, ModelDocument, ModelForm, SolverConfig,
    StaticMask, SyntheticKind, WeightVector,
};

use crate::inputs::resolve_weights;

/// Largest synthetic dataset the service will generate.
pub const MAX_SYNTHETIC_POINTS: usize = 20_000;

#[derive(Default)]
pub struct Registry {
    models: RwLock<BTreeMap<String, Arc<ModelDocument>>>,
    next_id: AtomicU64,
}

impl Registry {
    /// Insert under a fresh id and return it.
    pub fn insert(&self, doc: ModelDocument) -> String {
        let mut models = self.models.write().expect("registry lock poisoned");
        loop {
            let id = format!("m{}", self.next_id.fetch_add(1, Ordering::Relaxed) + 1);
            if !models.contains_key(&id) {
                models.insert(id.clone(), Arc::new(doc));
                return id;
            }
        }
    }

    /// Insert under `id`, refusing to overwrite.
    pub fn insert_named(&self, id: String, doc: ModelDocument) -> Result<(), String> {
        let mut models = self.models.write().expect("registry lock poisoned");
        if models.contains_key(&id) {
            return Err(id);
        }
        models.insert(id, Arc::new(doc));
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<Arc<ModelDocument>> {
        self.models.read().expect("registry lock poisoned").get(id).cloned()
    }

    pub fn ids(&self) -> Vec<String> {
        self.models
            .read()
            .expect("registry lock poisoned")
            .keys()
            .cloned()
            .collect()
    }

    /// Load every `*.json` document in `dir`, keyed by file stem.
    pub fn load_dir(&self, dir: &Path) -> svmact_core::Result<usize> {
        let mut paths: Vec<_> = std::fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|e| e == "json"))
            .collect();
        paths.sort();
        let mut loaded = 0;
        for path in paths {
            let doc = ModelDocument::load(&path)?;
            let id = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            if self.insert_named(id.clone(), doc).is_err() {
                return Err(Error::InvalidArgument(format!("duplicate model id `{id}`")));
            }
            loaded += 1;
        }
        Ok(loaded)
    }
}

pub type AppState = Arc<Registry>;

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/models", post(upload_model).get(list_models))
        .route("/models/{id}", get(model_metadata))
        .route("/models/{id}/action", post(action))
        .route("/models/{id}/interpret", post(interpret))
        .route("/models/{id}/compare", post(compare))
        .route("/risk", post(risk))
        .route("/datasets/synthetic", get(synthetic))
        .with_state(state)
}

/// Structured error body `{code, message, detail}`.
#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
    pub detail: Value,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        Self {
            status,
            code,
            message: message.into(),
            detail: Value::Null,
        }
    }

    fn not_found(id: &str) -> Self {
        let mut e = Self::new(
            StatusCode::NOT_FOUND,
            "model_not_found",
            format!("no model with id `{id}`"),
        );
        e.detail = json!({ "id": id });
        e
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::TargetUnreachable(_)
            | Error::NoQualifyingSupportVector(_)
            | Error::StationaryConstraint { .. }
            | Error::NoUndesirablePoints
            | Error::TrainingDidNotConverge { .. } => StatusCode::UNPROCESSABLE_ENTITY,
            Error::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::BAD_REQUEST,
        };
        let detail = match &e {
            Error::DimensionMismatch { expected, found } => json!({ "expected": expected, "found": found }),
            Error::NonFinite { index } => json!({ "index": index }),
            Error::InvalidWeight { index, value } => json!({ "index": index, "value": value }),
            Error::Parse { line, .. } => json!({ "line": line }),
            Error::Csv { row, column, .. } => json!({ "row": row, "column": column }),
            Error::StationaryConstraint { residual } => json!({ "residual": residual }),
            Error::MissingFeature(name) => json!({ "feature": name }),
            Error::Json(j) => json!({ "line": j.line(), "column": j.column() }),
            _ => Value::Null,
        };
        Self {
            status,
            code: e.code(),
            message: e.to_string(),
            detail,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "code": self.code, "message": self.message, "detail": self.detail });
        (self.status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| {
        let mut err = ApiError::new(StatusCode::BAD_REQUEST, "invalid_request", e.to_string());
        err.detail = json!({ "line": e.line(), "column": e.column() });
        err
    })
}

fn lookup(state: &Registry, id: &str) -> ApiResult<Arc<ModelDocument>> {
    state.get(id).ok_or_else(|| ApiError::not_found(id))
}

/// Run CPU-bound work off the async executor.
async fn blocking<T, F>(f: F) -> ApiResult<T>
where
    T: Send + 'static,
    F: FnOnce() -> ApiResult<T> + Send + 'static,
{
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))?
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ModelMetadata {
    id: String,
    feature_names: Vec<String>,
    kernel: KernelSpec,
    dim: usize,
    n_support: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    box_c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scaler: Option<Scaler>,
    weight_presets: BTreeMap<String, Vec<f64>>,
}

fn metadata(id: String, doc: &ModelDocument) -> ModelMetadata {
    let box_c = match &doc.model.form {
        ModelForm::Kernel(k) => k.box_c,
        ModelForm::Linear(_) => None,
    };
    ModelMetadata {
        id,
        feature_names: doc.model.feature_names.clone(),
        kernel: doc.model.kernel_spec(),
        dim: doc.model.dim(),
        n_support: doc.model.n_support(),
        box_c,
        scaler: doc.scaler.clone(),
        weight_presets: doc.weight_presets.clone(),
    }
}

/// Accepts a JSON model document, or libsvm model text for any other
/// content type.
async fn upload_model(State(state): State<AppState>, headers: HeaderMap, body: Bytes) -> ApiResult<Response> {
    let is_json = headers
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.starts_with("application/json"));
    let text = std::str::from_utf8(&body)
        .map_err(|_| ApiError::new(StatusCode::BAD_REQUEST, "invalid_request", "body is not UTF-8"))?;
    let doc = if is_json || text.trim_start().starts_with('{') {
        ModelDocument::from_json(text)?
    } else {
        ModelDocument::new(parse_libsvm_model(text)?)
    };
    let id = state.insert(doc.clone());
    Ok((StatusCode::CREATED, Json(metadata(id, &doc))).into_response())
}

async fn list_models(State(state): State<AppState>) -> Json<Value> {
    Json(json!({ "ids": state.ids() }))
}

async fn model_metadata(State(state): State<AppState>, UrlPath(id): UrlPath<String>) -> ApiResult<Json<Value>> {
    let doc = lookup(&state, &id)?;
    Ok(Json(
        serde_json::to_value(metadata(id, &doc)).expect("metadata serializes"),
    ))
}

/// Weights as a preset name or an explicit vector; all ones when absent.
#[derive(Deserialize)]
#[serde(untagged)]
enum WeightsInput {
    Preset(String),
    Values(Vec<f64>),
}

fn weights_for(input: Option<WeightsInput>, doc: &ModelDocument) -> ApiResult<WeightVector> {
    match input {
        None => Ok(WeightVector::ones(doc.model.dim())),
        Some(WeightsInput::Preset(name)) => Ok(resolve_weights(&name, doc)?),
        Some(WeightsInput::Values(v)) => {
            if v.len() != doc.model.dim() {
                return Err(Error::DimensionMismatch {
                    expected: doc.model.dim(),
                    found: v.len(),
                }
                .into());
            }
            Ok(WeightVector::new(v)?)
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct ActionRequest {
    x0: Vec<f64>,
    /// Current class; the model's prediction when absent.
    y0: Option<i64>,
    weights: Option<WeightsInput>,
    /// Feature indices held at their `x0` value.
    #[serde(default)]
    static_mask: Vec<usize>,
    #[serde(default)]
    config: SolverConfig,
    #[serde(default)]
    baseline: bool,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ActionResponse {
    y0: Label,
    decision_value: f64,
    result: ActionResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    baseline: Option<ActionResult>,
}

async fn action(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<String>,
    body: Bytes,
) -> ApiResult<Json<ActionResponse>> {
    let doc = lookup(&state, &id)?;
    let req: ActionRequest = parse_body(&body)?;
    blocking(move || {
        let model = &doc.model;
        let w = weights_for(req.weights, &doc)?;
        if req.x0.len() != model.dim() {
            return Err(Error::DimensionMismatch {
                expected: model.dim(),
                found: req.x0.len(),
            }
            .into());
        }
        let decision_value = model.decision_value(&req.x0)?;
        let y0 = match req.y0 {
            Some(v) => Label::from_i64(v)?,
            None => Label::from_sign(decision_value),
        };
        let mask = StaticMask::from_point(&req.x0, &req.static_mask)?;
        let result = solve_action(model, &req.x0, y0, &w, &mask, &req.config)?;
        let baseline = if req.baseline {
            match &model.form {
                ModelForm::Kernel(k) => Some(nearest_support_vector(k, &req.x0, y0, &w)?),
                ModelForm::Linear(_) => {
                    return Err(
                        Error::InvalidModel("the support-vector baseline needs a kernel expansion".into()).into(),
                    )
                }
            }
        } else {
            None
        };
        Ok(Json(ActionResponse {
            y0,
            decision_value,
            result,
            baseline,
        }))
    })
    .await
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticParams {
    pub kind: SyntheticKind,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_noise")]
    pub noise: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_n() -> usize {
    200
}
fn default_noise() -> f64 {
    0.1
}
fn default_seed() -> u64 {
    42
}

impl SyntheticParams {
    fn generate(&self) -> ApiResult<Dataset> {
        if self.n > MAX_SYNTHETIC_POINTS {
            return Err(Error::InvalidArgument(format!("n must be at most {MAX_SYNTHETIC_POINTS}")).into());
        }
        Ok(generate(self.kind, self.n, self.noise, self.seed)?)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct InlineDataset {
    points: Vec<Vec<f64>>,
    labels: Vec<Label>,
    feature_names: Option<Vec<String>>,
}

/// Exactly one of a synthetic reference or inline points.
#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct DatasetInput {
    dataset_ref: Option<SyntheticParams>,
    inline: Option<InlineDataset>,
}

impl DatasetInput {
    fn resolve(self, doc: &ModelDocument) -> ApiResult<Dataset> {
        let mut data = match (self.dataset_ref, self.inline) {
            (Some(r), None) => r.generate()?,
            (None, Some(d)) => {
                let names = d.feature_names.unwrap_or_else(|| doc.model.feature_names.clone());
                Dataset::new(d.points, d.labels, Some(names))?
            }
            _ => {
                return Err(ApiError::new(
                    StatusCode::BAD_REQUEST,
                    "invalid_request",
                    "give exactly one of `datasetRef` and `inline`",
                ))
            }
        };
        if data.dim() != doc.model.dim() {
            return Err(Error::DimensionMismatch {
                expected: doc.model.dim(),
                found: data.dim(),
            }
            .into());
        }
        // points arrive in model units, so the model's scaler maps them back
        if doc.scaler.is_some() {
            data.scaler = doc.scaler.clone();
        }
        Ok(data)
    }
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct InterpretRequest {
    #[serde(flatten)]
    dataset: DatasetInput,
    #[serde(default)]
    config: SolverConfig,
}

async fn interpret(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<String>,
    body: Bytes,
) -> ApiResult<Json<InterpretabilityReport>> {
    let doc = lookup(&state, &id)?;
    let req: InterpretRequest = parse_body(&body)?;
    blocking(move || {
        let data = req.dataset.resolve(&doc)?;
        Ok(Json(interpretability_ranking(&doc.model, &data, &req.config)?))
    })
    .await
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct CompareRequest {
    #[serde(flatten)]
    dataset: DatasetInput,
    weights: Option<WeightsInput>,
    #[serde(default)]
    config: SolverConfig,
}

async fn compare(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<String>,
    body: Bytes,
) -> ApiResult<Json<ComparisonReport>> {
    let doc = lookup(&state, &id)?;
    let req: CompareRequest = parse_body(&body)?;
    blocking(move || {
        let w = weights_for(req.weights, &doc)?;
        let data = req.dataset.resolve(&doc)?;
        Ok(Json(compare_solutions(&doc.model, &data, &w, &req.config)?))
    })
    .await
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct RiskRequest {
    raw_features: HashMap<String, f64>,
}

async fn risk(body: Bytes) -> ApiResult<Json<Value>> {
    let req: RiskRequest = parse_body(&body)?;
    Ok(Json(json!({ "score": risk_score(&req.raw_features)? })))
}

async fn synthetic(Query(params): Query<HashMap<String, String>>) -> ApiResult<Json<Dataset>> {
    let parsed: SyntheticParams = serde_json::from_value(query_to_json(&params)?)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "invalid_request", e.to_string()))?;
    let data = parsed.generate()?;
    Ok(Json(data))
}

/// Query strings are untyped; coerce numeric parameters before decoding.
fn query_to_json(params: &HashMap<String, String>) -> ApiResult<Value> {
    let mut out = serde_json::Map::new();
    for (k, v) in params {
        let value = match k.as_str() {
            "kind" => Value::String(v.clone()),
            "n" | "seed" => Value::from(v.parse::<u64>().map_err(|_| bad_param(k, v))?),
            "noise" => Value::from(
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| bad_param(k, v))?,
            ),
            _ => return Err(bad_param(k, v)),
        };
        out.insert(k.clone(), value);
    }
    Ok(Value::Object(out))
}

fn bad_param(key: &str, value: &str) -> ApiError {
    let mut e = ApiError::new(
        StatusCode::BAD_REQUEST,
        "invalid_request",
        format!("bad query parameter `{key}={value}`"),
    );
    e.detail = json!({ "parameter": key });
    e
}
