//! Read-only HTTP API over loaded snapshots.
//!
//! Endpoints:
//!
//! - `GET /api/datasets` - loaded dataset ids
//! - `GET /api/datasets/{id}/meta` - months and authors
//! - `GET /api/datasets/{id}/topics?month=YYYY-MM` - topic stats, optionally for one month
//! - `GET /api/datasets/{id}/stance?upto=YYYY-MM&author=A` - stance points
//! - `GET /api/datasets/{id}/stance-changers` - authors with both +1 and -1 tweets
//! - `GET /api/tweets/{tweet_id}` - detail panel fields for one tweet

use std::collections::HashMap;
use std::fs::File;
use std::io::BufReader;
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context};
use axum::extract::rejection::QueryRejection;
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use stancescope_core::{DatasetId, DatasetSnapshot, MonthKey};
use thiserror::Error;
use tower_http::cors::CorsLayer;

use crate::wire::{import_snapshot, stat_docs, PointDoc, StatDoc, WireDataset, WireMonth, WireTimestamp};

/// Immutable set of snapshots plus a tweet lookup table.
#[derive(Debug)]
pub struct Catalog {
    datasets: Vec<DatasetSnapshot>,
    // tweet_id -> (dataset index, point index); first loaded dataset wins.
    tweets: HashMap<String, (usize, usize)>,
}

impl Catalog {
    pub fn new(datasets: Vec<DatasetSnapshot>) -> anyhow::Result<Self> {
        for (i, d) in datasets.iter().enumerate() {
            if datasets[..i].iter().any(|o| o.dataset_id == d.dataset_id) {
                bail!("dataset {} loaded more than once", d.dataset_id);
            }
        }
        let mut tweets = HashMap::new();
        for (di, d) in datasets.iter().enumerate() {
            for (pi, p) in d.points.iter().enumerate() {
                tweets.entry(p.tweet_id.clone()).or_insert((di, pi));
            }
        }
        Ok(Catalog { datasets, tweets })
    }

    /// Loads and validates each snapshot file.
    pub fn load<P: AsRef<Path>>(paths: &[P]) -> anyhow::Result<Self> {
        let mut datasets = Vec::with_capacity(paths.len());
        for path in paths {
            let path = path.as_ref();
            let file =
                File::open(path).with_context(|| format!("cannot open snapshot {}", path.display()))?;
            let snapshot = import_snapshot(BufReader::new(file))
                .with_context(|| format!("invalid snapshot {}", path.display()))?;
            datasets.push(snapshot);
        }
        Catalog::new(datasets)
    }

    pub fn datasets(&self) -> &[DatasetSnapshot] {
        &self.datasets
    }

    pub fn dataset(&self, id: DatasetId) -> Option<&DatasetSnapshot> {
        self.datasets.iter().find(|d| d.dataset_id == id)
    }
}

#[derive(Debug, Error)]
pub enum ApiError {
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    BadRequest(String),
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    error: &'a str,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match self {
            ApiError::NotFound(_) => StatusCode::NOT_FOUND,
            ApiError::BadRequest(_) => StatusCode::BAD_REQUEST,
        };
        let msg = self.to_string();
        (status, Json(ErrorBody { error: &msg })).into_response()
    }
}

impl From<QueryRejection> for ApiError {
    fn from(r: QueryRejection) -> Self {
        ApiError::BadRequest(r.body_text())
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;
type Shared = Arc<Catalog>;

pub fn router(catalog: Shared) -> Router {
    Router::new()
        .route("/api/datasets", get(list_datasets))
        .route("/api/datasets/{id}/meta", get(meta))
        .route("/api/datasets/{id}/topics", get(topics))
        .route("/api/datasets/{id}/stance", get(stance))
        .route("/api/datasets/{id}/stance-changers", get(stance_changers))
        .route("/api/tweets/{tweet_id}", get(tweet))
        .fallback(|| async { ApiError::NotFound("no such endpoint".into()) })
        .layer(CorsLayer::permissive())
        .with_state(catalog)
}

fn lookup<'a>(catalog: &'a Catalog, id: &str) -> Result<&'a DatasetSnapshot, ApiError> {
    id.parse::<DatasetId>()
        .ok()
        .and_then(|d| catalog.dataset(d))
        .ok_or_else(|| ApiError::NotFound(format!("unknown dataset {id:?}")))
}

fn parse_month(name: &str, value: &str) -> Result<MonthKey, ApiError> {
    value
        .parse()
        .map_err(|_| ApiError::BadRequest(format!("{name}={value:?} is not a YYYY-MM month")))
}

async fn list_datasets(State(catalog): State<Shared>) -> Json<Vec<WireDataset>> {
    Json(
        catalog
            .datasets()
            .iter()
            .map(|d| WireDataset(d.dataset_id))
            .collect(),
    )
}

#[derive(Serialize)]
struct Meta<'a> {
    dataset_id: WireDataset,
    months: Vec<WireMonth>,
    authors: &'a [String],
}

async fn meta(State(catalog): State<Shared>, UrlPath(id): UrlPath<String>) -> Result<Response, ApiError> {
    let d = lookup(&catalog, &id)?;
    let body = Meta {
        dataset_id: WireDataset(d.dataset_id),
        months: d.months.iter().copied().map(WireMonth).collect(),
        authors: &d.authors,
    };
    Ok(Json(body).into_response())
}

#[derive(Debug, Deserialize)]
pub struct TopicsQuery {
    pub month: Option<String>,
}

async fn topics(
    State(catalog): State<Shared>,
    UrlPath(id): UrlPath<String>,
    query: Result<Query<TopicsQuery>, QueryRejection>,
) -> ApiResult<Vec<StatDoc>> {
    let Query(query) = query?;
    let d = lookup(&catalog, &id)?;
    let Some(raw) = query.month else {
        return Ok(Json(stat_docs(&d.topic_stats)));
    };
    let month = parse_month("month", &raw)?;
    if !d.months.contains(&month) {
        return Err(ApiError::NotFound(format!("dataset has no month {month}")));
    }
    Ok(Json(stat_docs(d.stats_for_month(month))))
}

#[derive(Debug, Deserialize)]
pub struct StanceQuery {
    pub upto: Option<String>,
    pub author: Option<String>,
}

/// Points filtered by inclusive `upto` month and/or author, in timeline order.
async fn stance(
    State(catalog): State<Shared>,
    UrlPath(id): UrlPath<String>,
    query: Result<Query<StanceQuery>, QueryRejection>,
) -> ApiResult<Vec<PointDoc>> {
    let Query(query) = query?;
    let d = lookup(&catalog, &id)?;
    let upto = query
        .upto
        .as_deref()
        .map(|m| parse_month("upto", m))
        .transpose()?;
    if let Some(a) = &query.author {
        if !d.has_author(a) {
            return Err(ApiError::NotFound(format!("unknown author {a:?}")));
        }
    }
    let points = d
        .points
        .iter()
        .filter(|p| upto.is_none_or(|m| p.month <= m))
        .filter(|p| query.author.as_ref().is_none_or(|a| &p.author_id == a))
        .map(PointDoc::from)
        .collect();
    Ok(Json(points))
}

async fn stance_changers(
    State(catalog): State<Shared>,
    UrlPath(id): UrlPath<String>,
) -> ApiResult<Vec<String>> {
    Ok(Json(lookup(&catalog, &id)?.stance_changers()))
}

/// The detail panel payload: score, location, topic and text, plus identifying fields.
#[derive(Debug, Serialize)]
pub struct TweetView<'a> {
    pub tweet_id: &'a str,
    pub dataset_id: WireDataset,
    pub author_id: &'a str,
    pub created_at: WireTimestamp,
    pub month: WireMonth,
    pub cumulative_score: i64,
    pub location: &'a str,
    pub topic: &'a str,
    pub text: &'a str,
}

async fn tweet(
    State(catalog): State<Shared>,
    UrlPath(tweet_id): UrlPath<String>,
) -> Result<Response, ApiError> {
    let &(di, pi) = catalog
        .tweets
        .get(&tweet_id)
        .ok_or_else(|| ApiError::NotFound(format!("unknown tweet {tweet_id:?}")))?;
    let d = &catalog.datasets[di];
    let p = &d.points[pi];
    let detail = &d.tweet_index[&p.tweet_id];
    let view = TweetView {
        tweet_id: &p.tweet_id,
        dataset_id: WireDataset(d.dataset_id),
        author_id: &p.author_id,
        created_at: WireTimestamp(p.created_at),
        month: WireMonth(p.month),
        cumulative_score: p.cumulative_score,
        location: detail.location_label(),
        topic: &detail.topic,
        text: &detail.text,
    };
    Ok(Json(view).into_response())
}
