//! Experiment reports and per-document prediction files.

use serde::{Deserialize, Serialize};

use super::metrics::{Confusion, Metrics, ZTest};
use crate::corpus::Label;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRow {
    pub doc_id: String,
    pub gold: Label,
    pub probability: f64,
    pub label: Label,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedFeature {
    pub feature: String,
    pub weight: f64,
    pub standardized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    /// `within` or `cross`.
    pub protocol: String,
    pub config_hash: String,
    pub seed: u64,
    pub train_dataset: String,
    pub test_dataset: String,
    pub language: String,
    pub country: Option<String>,
    pub individualism_score: Option<u8>,
    pub row_label: String,
    pub legend: String,
    pub setup: String,
    pub trainer: String,
    pub schema_hash: String,
    pub n_train: usize,
    pub n_val: usize,
    pub n_test: usize,
    pub n_features: usize,
    /// Columns with a non-zero weight.
    pub n_used_features: usize,
    pub converged: bool,
    pub iterations: usize,
    pub confusion: Confusion,
    pub test: Metrics,
    pub auc: f64,
    pub train_accuracy: f64,
    pub val_accuracy: Option<f64>,
    pub majority_label: Label,
    pub majority_accuracy: f64,
    /// Model accuracy against the majority baseline on the test set.
    pub vs_baseline: ZTest,
    pub top_deceptive: Vec<WeightedFeature>,
    pub top_truthful: Vec<WeightedFeature>,
    #[serde(skip)]
    pub predictions: Vec<PredictionRow>,
}

fn f4(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.4}")).unwrap_or_else(|| "n/a".into())
}

/// Header of [`ExperimentReport::csv_row`].
pub const CSV_HEADER: [&str; 20] = [
    "protocol",
    "train_dataset",
    "test_dataset",
    "row_label",
    "legend",
    "setup",
    "trainer",
    "seed",
    "n_train",
    "n_test",
    "recall",
    "precision",
    "f1",
    "auc",
    "accuracy",
    "val_accuracy",
    "majority_accuracy",
    "z_vs_baseline",
    "p_vs_baseline",
    "converged",
];

impl ExperimentReport {
    pub fn csv_row(&self) -> Vec<String> {
        vec![
            self.protocol.clone(),
            self.train_dataset.clone(),
            self.test_dataset.clone(),
            self.row_label.clone(),
            self.legend.clone(),
            self.setup.clone(),
            self.trainer.clone(),
            self.seed.to_string(),
            self.n_train.to_string(),
            self.n_test.to_string(),
            f4(self.test.recall),
            f4(self.test.precision),
            f4(self.test.f1),
            f4(Some(self.auc)),
            f4(self.test.accuracy),
            f4(self.val_accuracy),
            f4(Some(self.majority_accuracy)),
            f4(Some(self.vs_baseline.z)),
            f4(Some(self.vs_baseline.p_one_tailed)),
            self.converged.to_string(),
        ]
    }

    /// Result-table-style Markdown for this report alone.
    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("# {} → {}\n\n", self.train_dataset, self.test_dataset));
        s.push_str(&format!("config hash: `{}`  \n", self.config_hash));
        s.push_str(&format!("schema hash: `{}`  \n", self.schema_hash));
        s.push_str(&format!("protocol: {}, seed {}  \n", self.protocol, self.seed));
        if let Some(c) = &self.country {
            s.push_str(&format!("country: {c}"));
            if let Some(i) = self.individualism_score {
                s.push_str(&format!(", individualism {i}"));
            }
            s.push_str("  \n");
        }
        s.push_str(&format!(
            "train {} / val {} / test {} documents; {} features ({} used); converged: {} after {} iterations\n\n",
            self.n_train, self.n_val, self.n_test, self.n_features, self.n_used_features, self.converged, self.iterations
        ));
        s.push_str(&markdown_table(std::slice::from_ref(self)));
        s.push_str("\n## Top features\n\n| deceptive | weight | truthful | weight |\n|---|---|---|---|\n");
        let rows = self.top_deceptive.len().max(self.top_truthful.len());
        for i in 0..rows {
            let cell = |v: &[WeightedFeature]| match v.get(i) {
                Some(w) => (w.feature.clone(), format!("{:.4}", w.standardized)),
                None => (String::new(), String::new()),
            };
            let (d, dw) = cell(&self.top_deceptive);
            let (t, tw) = cell(&self.top_truthful);
            s.push_str(&format!("| {d} | {dw} | {t} | {tw} |\n"));
        }
        s.push_str("\nWeights are per standard deviation of the training column.\n");
        s
    }

    /// `doc_id,gold,probability,label` after a `# config_hash=` line.
    pub fn predictions_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["doc_id", "gold", "probability", "label"]).expect("in-memory write");
        for p in &self.predictions {
            w.write_record([
                p.doc_id.clone(),
                p.gold.to_string(),
                format!("{:.6}", p.probability),
                p.label.to_string(),
            ])
            .expect("in-memory write");
        }
        let body = String::from_utf8(w.into_inner().expect("flush")).expect("utf-8");
        format!("# config_hash={}\n{body}", self.config_hash)
    }
}

/// One Markdown table over several reports, with a majority-baseline row
/// for each distinct test set.
pub fn markdown_table(reports: &[ExperimentReport]) -> String {
    let mut s = String::from(
        "| Features | Setup | R | P | F1 | AUC | Accu. | Val. accu. | vs. baseline p |\n|---|---|---|---|---|---|---|---|---|\n",
    );
    let mut baselines: Vec<(String, f64)> = Vec::new();
    for r in reports {
        s.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} | {} | {} |\n",
            r.row_label,
            r.legend,
            f4(r.test.recall),
            f4(r.test.precision),
            f4(r.test.f1),
            f4(Some(r.auc)),
            f4(r.test.accuracy),
            f4(r.val_accuracy),
            f4(Some(r.vs_baseline.p_one_tailed)),
        ));
        if !baselines.iter().any(|(t, _)| *t == r.test_dataset) {
            baselines.push((r.test_dataset.clone(), r.majority_accuracy));
        }
    }
    for (t, acc) in baselines {
        let label = if reports.iter().all(|r| r.test_dataset == t) {
            "Majority baseline".to_string()
        } else {
            format!("Majority baseline ({t})")
        };
        s.push_str(&format!("| {label} | | | | | | {acc:.4} | | |\n"));
    }
    s
}

/// Summary CSV over several reports, after a `# config_hash=` line.
pub fn reports_csv(config_hash: &str, reports: &[ExperimentReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in reports {
        w.write_record(r.csv_row()).expect("in-memory write");
    }
    let body = String::from_utf8(w.into_inner().expect("flush")).expect("utf-8");
    format!("# config_hash={config_hash}\n{body}")
}

/// Reads a predictions file, returning its config hash and rows.
pub fn parse_predictions(text: &str) -> Result<(String, Vec<PredictionRow>), String> {
    let (first, rest) = text.split_once('\n').ok_or("empty predictions file")?;
    let hash = first
        .strip_prefix("# config_hash=")
        .ok_or("predictions file lacks a `# config_hash=` line")?
        .to_string();
    let mut r = csv::Reader::from_reader(rest.as_bytes());
    let mut rows = Vec::new();
    for rec in r.deserialize() {
        let row: PredictionRow = rec.map_err(|e| e.to_string())?;
        rows.push(row);
    }
    Ok((hash, rows))
}
