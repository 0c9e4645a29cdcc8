//! Metrics, baselines and the experiment protocols.

use thiserror::Error;

use crate::corpus::CorpusError;
use crate::features::FeatureError;
use crate::model::ModelError;

pub mod expectations;
pub mod experiment;
pub mod metrics;
pub mod report;

pub use experiment::{run_cross_dataset, run_experiment, run_grid, ExperimentSettings, PreparedDataset};
pub use metrics::{auc, majority_baseline, metrics, two_proportion_z_test, Confusion, Metrics, ZTest};
pub use report::{ExperimentReport, PredictionRow};

/// Failures of an experiment, tagged with the stage that raised them.
#[derive(Debug, Error)]
pub enum EvalError {
    #[error("split: {0}")]
    Split(#[source] CorpusError),
    #[error("features: {0}")]
    Features(#[source] FeatureError),
    #[error("train: {0}")]
    Train(#[source] ModelError),
    #[error("train: {setup} did not converge within {iterations} iterations")]
    NotConverged { setup: String, iterations: usize },
    #[error("evaluate: {0}")]
    Evaluate(String),
    #[error("evaluate: the test set holds a single class")]
    SingleClass,
    #[error("cross-dataset: {0}")]
    Cross(String),
}

impl EvalError {
    pub fn stage(&self) -> &'static str {
        match self {
            EvalError::Split(_) => "split",
            EvalError::Features(_) => "features",
            EvalError::Train(_) | EvalError::NotConverged { .. } => "train",
            EvalError::Evaluate(_) | EvalError::SingleClass => "evaluate",
            EvalError::Cross(_) => "cross-dataset",
        }
    }
}
