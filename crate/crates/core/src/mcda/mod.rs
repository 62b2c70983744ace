//! Multi-criteria evaluation of cities.
//!
//! [`evaluate_cities`] computes the KMO statistic of the indicator
//! correlations. When it exceeds the configured threshold the indicators are
//! reduced with PCA and scored by the explained-variance-weighted composite;
//! otherwise criteria are weighted by entropy and ranked with TOPSIS.

mod correlation;
mod entropy;
mod linalg;
mod pca;
mod topsis;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::IndicatorMatrix;

pub use correlation::{correlation_matrix, kmo_statistic, CorrelationMatrix, SINGULAR_RCOND};
pub use entropy::{entropy_weights, normalize_min_max};
pub use linalg::{invert, symmetric_eigen, SymmetricEigen};
pub use pca::{pca_composite_score, pca_reduce, PcaResult, EIGEN_FLOOR};
pub use topsis::{topsis_closeness, topsis_rank};

#[derive(Debug, Error, PartialEq)]
pub enum McdaError {
    #[error("empty indicator matrix")]
    EmptyMatrix,
    #[error("need at least {needed} rows, got {got}")]
    TooFewRows { needed: usize, got: usize },
    #[error("need at least 2 criteria, got {0}")]
    TooFewCriteria(usize),
    #[error("criterion `{0}` is constant")]
    ConstantColumn(String),
    #[error("correlation matrix is numerically singular (reciprocal condition {rcond:e})")]
    SingularMatrix { rcond: f64 },
    #[error("eigendecomposition failed: {0}")]
    EigenFailure(String),
    #[error("weight mismatch: {0}")]
    WeightMismatch(String),
    #[error("invalid correlation matrix: {0}")]
    InvalidCorrelation(String),
    #[error("invalid decision config: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecisionConfig {
    /// PCA runs only when KMO is strictly greater than this.
    pub kmo_threshold: f64,
    /// Smallest cumulative explained ratio the retained components must reach.
    pub pca_variance_target: f64,
    pub top_n: usize,
}

impl Default for DecisionConfig {
    fn default() -> Self {
        Self {
            kmo_threshold: 0.6,
            pca_variance_target: 0.85,
            top_n: 50,
        }
    }
}

impl DecisionConfig {
    pub fn validate(&self) -> Result<(), McdaError> {
        if !(self.kmo_threshold > 0.0 && self.kmo_threshold < 1.0) {
            return Err(McdaError::InvalidConfig(format!(
                "kmo_threshold {} outside (0, 1)",
                self.kmo_threshold
            )));
        }
        if !(self.pca_variance_target > 0.0 && self.pca_variance_target <= 1.0) {
            return Err(McdaError::InvalidConfig(format!(
                "pca_variance_target {} outside (0, 1]",
                self.pca_variance_target
            )));
        }
        if self.top_n == 0 {
            return Err(McdaError::InvalidConfig("top_n must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Pca,
    EntropyTopsis,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Pca => f.write_str("pca"),
            Method::EntropyTopsis => f.write_str("entropy_topsis"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CityScore {
    pub city_id: String,
    /// In [0, 1].
    pub score: f64,
    pub method: Method,
    /// 1-based.
    pub rank: usize,
}

/// Sorts by score descending (city id ascending on ties) and assigns ranks.
pub(crate) fn rank_scores(city_ids: &[String], scores: &[f64], method: Method) -> Vec<CityScore> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .total_cmp(&scores[a])
            .then_with(|| city_ids[a].cmp(&city_ids[b]))
    });
    order
        .into_iter()
        .enumerate()
        .map(|(pos, i)| CityScore {
            city_id: city_ids[i].clone(),
            score: scores[i].clamp(0.0, 1.0),
            method,
            rank: pos + 1,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub scores: Vec<CityScore>,
    pub method: Method,
    pub kmo: f64,
}

pub(crate) fn check_shape(x: &IndicatorMatrix, min_rows: usize) -> Result<(), McdaError> {
    if x.n_rows() == 0 || x.n_cols() == 0 {
        return Err(McdaError::EmptyMatrix);
    }
    if x.n_cols() < 2 {
        return Err(McdaError::TooFewCriteria(x.n_cols()));
    }
    if x.n_rows() < min_rows {
        return Err(McdaError::TooFewRows {
            needed: min_rows,
            got: x.n_rows(),
        });
    }
    Ok(())
}

pub fn evaluate_cities(x: &IndicatorMatrix, cfg: &DecisionConfig) -> Result<Evaluation, McdaError> {
    cfg.validate()?;
    check_shape(x, 3)?;
    let r = correlation_matrix(x)?;
    let kmo = kmo_statistic(&r)?;
    log::info!("kmo = {kmo:.6} (threshold {})", cfg.kmo_threshold);

    let (scores, method) = if kmo > cfg.kmo_threshold {
        let p = pca_reduce(x, cfg)?;
        log::debug!(
            "pca retained {} component(s), explained {:?}",
            p.components.len(),
            p.explained_ratio
        );
        let raw = pca_composite_score(&p);
        (rank_scores(x.city_ids(), &raw, Method::Pca), Method::Pca)
    } else {
        let w = entropy_weights(x)?;
        log::debug!("entropy weights {w:?}");
        (topsis_rank(x, &w)?, Method::EntropyTopsis)
    };
    Ok(Evaluation {
        scores,
        method,
        kmo,
    })
}

/// The first `top_n` entries by rank.
pub fn select_top_cities(scores: &[CityScore], top_n: usize) -> Vec<CityScore> {
    let mut sorted = scores.to_vec();
    sorted.sort_by_key(|s| s.rank);
    sorted.truncate(top_n);
    sorted
}
