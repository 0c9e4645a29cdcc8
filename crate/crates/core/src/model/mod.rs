//! Logistic-regression classifiers: training, prediction and persistence.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{DesignMatrix, FeatureSchema, SchemaSpec};
use crate::setup::TrainerKind;
use crate::stats::irls::sigmoid;
use crate::stats::StatsError;

pub mod cfs;
pub mod train;

pub use cfs::{cfs_select, CfsResult};
pub use train::{train, Standardizer, TrainOptions, TrainOutcome};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("training needs at least two documents per class (truthful {truthful}, deceptive {deceptive})")]
    TooFewPerClass { truthful: usize, deceptive: usize },
    #[error("features contain NaN or infinite values")]
    NonFinite,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("the stagewise trainer needs a non-empty validation set")]
    NoValidation,
    #[error("model expects schema {expected} but the features use {found}")]
    SchemaMismatch { expected: String, found: String },
    #[error("threshold {0} is outside (0, 1)")]
    Threshold(f64),
    #[error("unsupported model format version {0}")]
    FormatVersion(u32),
    #[error("model file: {0}")]
    Format(String),
    #[error("numerical failure: {0}")]
    Numeric(#[from] StatsError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Weight {
    pub feature: String,
    pub weight: f64,
    /// Coefficient per standard deviation of the training column.
    pub standardized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainingMetadata {
    pub seed: u64,
    pub dataset_id: String,
    pub config_hash: String,
    pub converged: bool,
    pub iterations: usize,
    pub train_size: usize,
}

/// A trained classifier. Timestamps are kept out of this document so that
/// identical runs write identical files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainedModel {
    pub format_version: u32,
    pub trainer: TrainerKind,
    pub setup: String,
    pub schema_hash: String,
    pub schema: SchemaSpec,
    /// One entry per schema column, in schema order.
    pub weights: Vec<Weight>,
    pub bias: f64,
    pub threshold: f64,
    pub metadata: TrainingMetadata,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub probability: f64,
    pub deceptive: bool,
}

impl TrainedModel {
    pub fn from_outcome(
        schema: &FeatureSchema,
        trainer: TrainerKind,
        outcome: &TrainOutcome,
        threshold: f64,
        metadata: TrainingMetadata,
    ) -> Result<TrainedModel, ModelError> {
        if !(threshold > 0.0 && threshold < 1.0) {
            return Err(ModelError::Threshold(threshold));
        }
        let columns = schema.columns();
        if columns.len() != outcome.weights.len() {
            return Err(ModelError::Shape(format!(
                "{} weights for {} schema columns",
                outcome.weights.len(),
                columns.len()
            )));
        }
        let weights = columns
            .into_iter()
            .zip(outcome.weights.iter().zip(&outcome.standardized))
            .map(|(feature, (&weight, &standardized))| Weight {
                feature,
                weight,
                standardized,
            })
            .collect();
        Ok(TrainedModel {
            format_version: FORMAT_VERSION,
            trainer,
            setup: schema.setup.canonical(),
            schema_hash: schema.hash(),
            schema: schema.spec(),
            weights,
            bias: outcome.bias,
            threshold,
            metadata,
        })
    }

    pub fn feature_schema(&self) -> Result<FeatureSchema, ModelError> {
        let schema = FeatureSchema::from_spec(&self.schema).map_err(|e| ModelError::Format(e.to_string()))?;
        if schema.hash() != self.schema_hash {
            return Err(ModelError::SchemaMismatch {
                expected: self.schema_hash.clone(),
                found: schema.hash(),
            });
        }
        Ok(schema)
    }

    pub fn check_schema(&self, schema_hash: &str) -> Result<(), ModelError> {
        if schema_hash != self.schema_hash {
            return Err(ModelError::SchemaMismatch {
                expected: self.schema_hash.clone(),
                found: schema_hash.to_string(),
            });
        }
        Ok(())
    }

    /// `σ(w·x + b)`; `x` follows the schema's column order.
    pub fn predict(&self, x: &[f64]) -> Result<Prediction, ModelError> {
        if x.len() != self.weights.len() {
            return Err(ModelError::Shape(format!(
                "{} values for {} weights",
                x.len(),
                self.weights.len()
            )));
        }
        let z = self.bias + self.weights.iter().zip(x).map(|(w, v)| w.weight * v).sum::<f64>();
        let probability = sigmoid(z);
        Ok(Prediction {
            probability,
            deceptive: probability >= self.threshold,
        })
    }

    /// Predicts every row of a design matrix built with schema `schema_hash`.
    pub fn predict_matrix(&self, m: &DesignMatrix, schema_hash: &str) -> Result<Vec<Prediction>, ModelError> {
        self.check_schema(schema_hash)?;
        (0..m.x.nrows()).map(|i| self.predict(&m.row(i))).collect()
    }

    /// Highest standardized weights toward each class: (deceptive, truthful).
    pub fn top_features(&self, k: usize) -> (Vec<&Weight>, Vec<&Weight>) {
        let mut pos: Vec<&Weight> = self.weights.iter().filter(|w| w.standardized > 0.0).collect();
        let mut neg: Vec<&Weight> = self.weights.iter().filter(|w| w.standardized < 0.0).collect();
        pos.sort_by(|a, b| b.standardized.total_cmp(&a.standardized).then(a.feature.cmp(&b.feature)));
        neg.sort_by(|a, b| a.standardized.total_cmp(&b.standardized).then(a.feature.cmp(&b.feature)));
        pos.truncate(k);
        neg.truncate(k);
        (pos, neg)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<TrainedModel, ModelError> {
        #[derive(Deserialize)]
        struct Version {
            format_version: u32,
        }
        let v: Version = serde_json::from_str(text).map_err(|e| ModelError::Format(e.to_string()))?;
        if v.format_version != FORMAT_VERSION {
            return Err(ModelError::FormatVersion(v.format_version));
        }
        let m: TrainedModel = serde_json::from_str(text).map_err(|e| ModelError::Format(e.to_string()))?;
        if !(m.threshold > 0.0 && m.threshold < 1.0) {
            return Err(ModelError::Threshold(m.threshold));
        }
        let columns: Vec<&str> = m.weights.iter().map(|w| w.feature.as_str()).collect();
        let schema = m.feature_schema()?;
        if schema.columns() != columns {
            return Err(ModelError::Format("weights do not follow the schema columns".into()));
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setup::FeatureSetup;

    fn model(weights: &[f64], bias: f64) -> TrainedModel {
        let setup: FeatureSetup = "ling:log".parse().unwrap();
        let cues: Vec<String> = (0..weights.len()).map(|i| format!("c{i}")).collect();
        let schema = FeatureSchema {
            setup,
            lexicon_version: Some("v".into()),
            cues,
            vocabularies: Vec::new(),
        };
        let outcome = TrainOutcome {
            weights: weights.to_vec(),
            bias,
            standardized: weights.to_vec(),
            converged: true,
            iterations: 1,
            selected: Vec::new(),
            loss_history: Vec::new(),
        };
        let meta = TrainingMetadata {
            seed: 1,
            dataset_id: "d".into(),
            config_hash: "h".into(),
            converged: true,
            iterations: 1,
            train_size: 4,
        };
        TrainedModel::from_outcome(&schema, TrainerKind::Ridge, &outcome, 0.5, meta).unwrap()
    }

    #[test]
    fn zero_model_is_even() {
        let p = model(&[0.0], 0.0).predict(&[3.0]).unwrap();
        assert_eq!(p.probability, 0.5);
        assert!(p.deceptive);
    }

    #[test]
    fn hand_set_weights() {
        let p = model(&[2.0], -1.0).predict(&[1.0]).unwrap();
        assert!((p.probability - 0.731_058_578_6).abs() < 1e-9);
    }

    #[test]
    fn json_round_trip() {
        let m = model(&[0.123456789012345, -2.5], 0.1);
        let back = TrainedModel::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
        let x = [0.7, 1.3];
        assert!((back.predict(&x).unwrap().probability - m.predict(&x).unwrap().probability).abs() < 1e-12);
    }

    #[test]
    fn schema_mismatch_is_rejected() {
        let m = model(&[1.0], 0.0);
        assert!(matches!(m.check_schema("other"), Err(ModelError::SchemaMismatch { .. })));
        let mut tampered = m.clone();
        tampered.schema.cues[0] = "changed".into();
        assert!(TrainedModel::from_json(&tampered.to_json()).is_err());
    }

    #[test]
    fn threshold_must_be_open_interval() {
        let mut m = model(&[1.0], 0.0);
        m.threshold = 1.0;
        assert_eq!(TrainedModel::from_json(&m.to_json()), Err(ModelError::Threshold(1.0)));
    }
}
