//! JSON over HTTP front end for the control panel.
//!
//! | method | path                   | body / reply                                  |
//! |--------|------------------------|-----------------------------------------------|
//! | POST   | `/api/optimize`        | [`OptimizeRequest`] → 202 `{ "id": .. }`      |
//! | GET    | `/api/jobs/{id}`       | [`OptimizeJob`]                               |
//! | DELETE | `/api/jobs/{id}`       | 204, cancels and forgets the job              |
//! | GET    | `/api/inventory`       | active inventory                              |
//! | PUT    | `/api/inventory`       | replacement inventory, echoed back            |
//! | GET    | `/api/targets/presets` | bundled target profiles                       |
//! | POST   | `/api/evaluate`        | [`EvaluateRequest`] → [`EvaluateResponse`]    |
//!
//! Invalid payloads get 400 with `{ "error": .., "fields": [{ "field", "message" }] }`;
//! unknown job ids get 404.

mod jobs;

use std::collections::hash_map::RandomState;
use std::collections::HashMap;
use std::hash::BuildHasher;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use brewswarm::chemistry::{
    BatchParams, BrewMetrics, BrewModel, Inventory, Recipe, SrmMethod, TargetProfile,
};
use brewswarm::harness::{default_inventory, default_targets, ExperimentPlan};
use brewswarm::optimizer::{Algorithm, Constants};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tokio::sync::Semaphore;

use jobs::JobEntry;
pub use jobs::{JobProgress, JobResults, JobStatus, OptimizeJob, Solution};

/// Most trials one job may ask for.
pub const MAX_JOB_TRIALS: usize = 50;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    /// Jobs are written to `<results_dir>/jobs/<id>`.
    pub results_dir: PathBuf,
    /// Jobs optimising at the same time; the rest wait queued.
    pub workers: usize,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            results_dir: PathBuf::from("results"),
            workers: 1,
        }
    }
}

#[derive(Clone)]
pub struct AppState {
    inner: Arc<Shared>,
}

struct Shared {
    config: ServiceConfig,
    inventory: RwLock<Inventory>,
    jobs: Mutex<HashMap<String, Arc<JobEntry>>>,
    permits: Arc<Semaphore>,
    counter: AtomicU64,
    id_key: RandomState,
}

impl AppState {
    pub fn new(config: ServiceConfig) -> Self {
        let permits = Arc::new(Semaphore::new(config.workers.max(1)));
        AppState {
            inner: Arc::new(Shared {
                config,
                inventory: RwLock::new(default_inventory()),
                jobs: Mutex::new(HashMap::new()),
                permits,
                counter: AtomicU64::new(0),
                id_key: RandomState::new(),
            }),
        }
    }

    fn job(&self, id: &str) -> Option<Arc<JobEntry>> {
        self.inner.jobs.lock().expect("job table").get(id).cloned()
    }

    fn fresh_id(&self) -> String {
        let n = self.inner.counter.fetch_add(1, Ordering::Relaxed);
        format!("{:016x}{:04x}", self.inner.id_key.hash_one(n), n & 0xffff)
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/optimize", post(post_optimize))
        .route("/api/jobs/{id}", get(get_job).delete(delete_job))
        .route("/api/inventory", get(get_inventory).put(put_inventory))
        .route("/api/targets/presets", get(get_presets))
        .route("/api/evaluate", post(post_evaluate))
        .with_state(state)
}

pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(AppState::new(config))).await
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

#[derive(Debug)]
pub enum ApiError {
    Invalid(Vec<FieldError>),
    NotFound(String),
    Internal(String),
}

impl ApiError {
    fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        ApiError::Invalid(vec![FieldError {
            field: field.into(),
            message: message.into(),
        }])
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, body) = match self {
            ApiError::Invalid(fields) => (
                StatusCode::BAD_REQUEST,
                serde_json::json!({ "error": "validation failed", "fields": fields }),
            ),
            ApiError::NotFound(what) => (
                StatusCode::NOT_FOUND,
                serde_json::json!({ "error": format!("{what} not found") }),
            ),
            ApiError::Internal(msg) => (
                StatusCode::INTERNAL_SERVER_ERROR,
                serde_json::json!({ "error": msg }),
            ),
        };
        (status, Json(body)).into_response()
    }
}

/// Parses a JSON body, turning every decode failure into a 400.
fn parse_body<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::field("body", e.to_string()))
}

fn inventory_errors(prefix: &str, inventory: &Inventory) -> Vec<FieldError> {
    inventory
        .problems()
        .into_iter()
        .map(|(field, message)| FieldError {
            field: format!("{prefix}{}", field.trim_start_matches("items")),
            message,
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizeOptions {
    pub trials: Option<usize>,
    pub population: Option<usize>,
    pub max_fes: Option<u64>,
    pub seed: Option<u64>,
    pub batch: Option<BatchParams>,
    pub srm_method: Option<SrmMethod>,
    pub constants: Option<Constants>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeRequest {
    pub target: TargetProfile,
    pub algorithm: Algorithm,
    /// Defaults to the active inventory.
    #[serde(default)]
    pub inventory: Option<Inventory>,
    #[serde(default)]
    pub options: OptimizeOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobCreated {
    pub id: String,
    pub status: JobStatus,
}

fn plan_for(req: OptimizeRequest, active: Inventory) -> Result<ExperimentPlan, ApiError> {
    let mut fields: Vec<FieldError> = req
        .target
        .problems()
        .into_iter()
        .map(|(f, m)| FieldError {
            field: format!("target.{f}"),
            message: m,
        })
        .collect();
    let inventory = req.inventory.unwrap_or(active);
    fields.extend(inventory_errors("inventory", &inventory));
    if inventory.is_empty() {
        fields.push(FieldError {
            field: "inventory".into(),
            message: "inventory has no ingredients".into(),
        });
    }
    let d = ExperimentPlan::default();
    let o = req.options;
    let plan = ExperimentPlan {
        master_seed: o.seed.unwrap_or(d.master_seed),
        trials: o.trials.unwrap_or(1),
        population: o.population.unwrap_or(d.population),
        max_fes: o.max_fes.unwrap_or(d.max_fes),
        algorithms: vec![req.algorithm],
        srm_method: o.srm_method.unwrap_or(d.srm_method),
        batch: o.batch.unwrap_or(d.batch),
        constants: o.constants.unwrap_or(d.constants),
        targets: vec![req.target],
        inventory,
    };
    if !(1..=MAX_JOB_TRIALS).contains(&plan.trials) {
        fields.push(FieldError {
            field: "options.trials".into(),
            message: format!("must be between 1 and {MAX_JOB_TRIALS}"),
        });
    }
    if !fields.is_empty() {
        return Err(ApiError::Invalid(fields));
    }
    plan.validate()
        .map_err(|e| ApiError::field("options", e.to_string()))?;
    Ok(plan)
}

async fn post_optimize(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: OptimizeRequest = parse_body(&body)?;
    let algorithm = req.algorithm;
    let active = state
        .inner
        .inventory
        .read()
        .expect("inventory lock")
        .clone();
    let plan = plan_for(req, active)?;

    let id = state.fresh_id();
    let entry = Arc::new(JobEntry::new(OptimizeJob {
        id: id.clone(),
        status: JobStatus::Queued,
        algorithm,
        plan,
        progress: None,
        results: None,
        error: None,
    }));
    state
        .inner
        .jobs
        .lock()
        .expect("job table")
        .insert(id.clone(), entry.clone());

    let permits = state.inner.permits.clone();
    let dir = state.inner.config.results_dir.join("jobs").join(&id);
    tokio::spawn(async move {
        let Ok(_permit) = permits.acquire_owned().await else {
            return;
        };
        if entry.is_cancelled() {
            return;
        }
        let worker = entry.clone();
        if let Err(e) = tokio::task::spawn_blocking(move || jobs::execute(&worker, &dir)).await {
            entry.advance(JobStatus::Failed);
            entry.view.lock().expect("job lock").error = Some(e.to_string());
        }
    });

    let created = JobCreated {
        id,
        status: JobStatus::Queued,
    };
    Ok((StatusCode::ACCEPTED, Json(created)).into_response())
}

async fn get_job(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<OptimizeJob>, ApiError> {
    state
        .job(&id)
        .map(|j| Json(j.snapshot()))
        .ok_or_else(|| ApiError::NotFound(format!("job {id}")))
}

async fn delete_job(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> Result<StatusCode, ApiError> {
    let removed = state.inner.jobs.lock().expect("job table").remove(&id);
    match removed {
        Some(entry) => {
            entry.cancel.store(true, Ordering::Relaxed);
            Ok(StatusCode::NO_CONTENT)
        }
        None => Err(ApiError::NotFound(format!("job {id}"))),
    }
}

async fn get_inventory(State(state): State<AppState>) -> Json<Inventory> {
    Json(
        state
            .inner
            .inventory
            .read()
            .expect("inventory lock")
            .clone(),
    )
}

async fn put_inventory(
    State(state): State<AppState>,
    body: Bytes,
) -> Result<Json<Inventory>, ApiError> {
    let inventory: Inventory = parse_body(&body)?;
    let fields = inventory_errors("", &inventory);
    if !fields.is_empty() {
        return Err(ApiError::Invalid(fields));
    }
    *state.inner.inventory.write().expect("inventory lock") = inventory.clone();
    Ok(Json(inventory))
}

async fn get_presets() -> Json<Vec<TargetProfile>> {
    Json(default_targets())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluateRequest {
    /// One quantity per inventory slot.
    pub recipe: Recipe,
    #[serde(default)]
    pub inventory: Option<Inventory>,
    #[serde(default)]
    pub batch: BatchParams,
    #[serde(default)]
    pub srm_method: SrmMethod,
    /// When given, the response carries the error against it.
    #[serde(default)]
    pub target: Option<TargetProfile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluateResponse {
    pub metrics: BrewMetrics,
    pub colour_name: String,
    pub error: Option<f64>,
}

async fn post_evaluate(
    State(state): State<AppState>,
    body: Bytes,
) -> Result<Json<EvaluateResponse>, ApiError> {
    let req: EvaluateRequest = parse_body(&body)?;
    let inventory = match req.inventory {
        Some(inv) => inv,
        None => state
            .inner
            .inventory
            .read()
            .expect("inventory lock")
            .clone(),
    };
    let mut fields = inventory_errors("inventory", &inventory);
    if let Some(t) = &req.target {
        fields.extend(t.problems().into_iter().map(|(f, m)| FieldError {
            field: format!("target.{f}"),
            message: m,
        }));
    }
    if let Err(e) = req.batch.validate() {
        fields.push(FieldError {
            field: "batch".into(),
            message: e.to_string(),
        });
    }
    if let Err(e) = req.recipe.check(&inventory) {
        fields.push(FieldError {
            field: "recipe".into(),
            message: e.to_string(),
        });
    }
    if !fields.is_empty() {
        return Err(ApiError::Invalid(fields));
    }
    let model = BrewModel::new(inventory, req.batch).with_srm_method(req.srm_method);
    let metrics = model
        .metrics(&req.recipe.quantities)
        .map_err(|e| ApiError::field("recipe", e.to_string()))?;
    Ok(Json(EvaluateResponse {
        colour_name: metrics.colour_name().to_string(),
        error: req
            .target
            .as_ref()
            .map(|t| brewswarm::chemistry::fitness_error(&metrics, t)),
        metrics,
    }))
}
