//! Within-dataset and leave-one-dataset-out experiments.

use std::collections::HashMap;

use super::metrics::{auc, majority_baseline, metrics, two_proportion_z_test, Confusion};
use super::report::{ExperimentReport, PredictionRow, WeightedFeature};
use super::EvalError;
use crate::config::NonConvergence;
use crate::corpus::{merge, split, Corpus, Label, SplitRatios};
use crate::cues::LexiconSet;
use crate::features::{DesignMatrix, FeatureSchema, PreparedDoc, SchemaOptions};
use crate::model::{cfs_select, train, TrainOptions, TrainOutcome, TrainedModel, TrainingMetadata};
use crate::setup::{FeatureSetup, TrainerKind};

/// Number of top-weighted features listed per class.
pub const TOP_FEATURES: usize = 10;

/// A corpus with its documents prepared, in corpus order.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedDataset {
    pub corpus: Corpus,
    pub docs: Vec<PreparedDoc>,
}

impl PreparedDataset {
    pub fn new(corpus: Corpus, docs: Vec<PreparedDoc>) -> Result<PreparedDataset, EvalError> {
        let aligned = corpus.len() == docs.len()
            && corpus.documents().iter().zip(&docs).all(|(d, p)| d.id == p.id());
        if !aligned {
            return Err(EvalError::Evaluate(format!(
                "prepared documents do not follow corpus {}",
                corpus.id()
            )));
        }
        Ok(PreparedDataset { corpus, docs })
    }

    /// Merged dataset with ids namespaced as `dataset/doc`.
    pub fn merge(parts: &[&PreparedDataset], id: &str) -> Result<PreparedDataset, EvalError> {
        let corpora: Vec<Corpus> = parts.iter().map(|p| p.corpus.clone()).collect();
        let corpus = merge(&corpora, id).map_err(|e| EvalError::Cross(e.to_string()))?;
        let docs = parts
            .iter()
            .flat_map(|p| {
                let cid = p.corpus.id().to_string();
                p.docs.iter().map(move |d| {
                    let new_id = format!("{cid}/{}", d.id());
                    d.clone().with_id(new_id)
                })
            })
            .collect();
        PreparedDataset::new(corpus, docs)
    }

    fn pick(&self, ids: &[String]) -> Vec<PreparedDoc> {
        let index: HashMap<&str, &PreparedDoc> = self.docs.iter().map(|d| (d.id(), d)).collect();
        ids.iter().map(|i| index[i.as_str()].clone()).collect()
    }
}

/// Settings shared by every experiment of a run.
#[derive(Debug, Clone)]
pub struct ExperimentSettings<'a> {
    pub lexicons: Option<&'a LexiconSet>,
    pub schema: SchemaOptions,
    pub train: TrainOptions,
    pub threshold: f64,
    pub ratios: SplitRatios,
    pub stratified: bool,
    pub seed: u64,
    pub config_hash: String,
    pub on_nonconvergence: NonConvergence,
}

/// A report and the model behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    pub report: ExperimentReport,
    pub model: TrainedModel,
}

struct Parts<'d> {
    protocol: &'static str,
    train_corpus: &'d Corpus,
    test_id: String,
    train: Vec<PreparedDoc>,
    val: Vec<PreparedDoc>,
    test: Vec<PreparedDoc>,
}

fn targets(m: &DesignMatrix) -> Vec<f64> {
    m.targets()
}

/// Trains on the selected columns and spreads the result over every column.
fn expand(outcome: TrainOutcome, cols: &[usize], width: usize) -> TrainOutcome {
    let mut weights = vec![0.0; width];
    let mut standardized = vec![0.0; width];
    for (k, &j) in cols.iter().enumerate() {
        weights[j] = outcome.weights[k];
        standardized[j] = outcome.standardized[k];
    }
    TrainOutcome {
        weights,
        standardized,
        selected: outcome.selected.iter().map(|&k| cols[k]).collect(),
        ..outcome
    }
}

fn accuracy_of(model: &TrainedModel, m: &DesignMatrix, hash: &str) -> Result<f64, EvalError> {
    let preds = model.predict_matrix(m, hash).map_err(EvalError::Train)?;
    let hits = preds
        .iter()
        .zip(&m.labels)
        .filter(|(p, l)| p.deceptive == l.is_deceptive())
        .count();
    Ok(hits as f64 / m.labels.len().max(1) as f64)
}

fn fit_and_evaluate(setup: &FeatureSetup, parts: Parts<'_>, s: &ExperimentSettings<'_>) -> Result<ExperimentOutcome, EvalError> {
    let corpus = parts.train_corpus;
    let schema = FeatureSchema::fit(setup, &parts.train, s.lexicons, s.schema, corpus.id()).map_err(EvalError::Features)?;
    let hash = schema.hash();
    let tx = schema.transform(&parts.train, s.lexicons).map_err(EvalError::Features)?;
    let vx = schema.transform(&parts.val, s.lexicons).map_err(EvalError::Features)?;
    let ex = schema.transform(&parts.test, s.lexicons).map_err(EvalError::Features)?;
    let width = schema.width();

    let cols: Vec<usize> = if setup.attrsel {
        let mut sel = cfs_select(&tx.x, &targets(&tx)).selected;
        sel.sort_unstable();
        sel
    } else {
        (0..width).collect()
    };
    let txs = tx.select_columns(&cols);
    let vxs = vx.select_columns(&cols);
    let (ty, vy) = (targets(&txs), targets(&vxs));
    let val = (setup.trainer == TrainerKind::Stagewise).then_some((&vxs.x, vy.as_slice()));
    let outcome = train(setup.trainer, &txs.x, &ty, val, &s.train).map_err(EvalError::Train)?;
    let outcome = expand(outcome, &cols, width);
    if !outcome.converged {
        match s.on_nonconvergence {
            NonConvergence::Fail => {
                return Err(EvalError::NotConverged {
                    setup: setup.canonical(),
                    iterations: outcome.iterations,
                })
            }
            NonConvergence::Warn => log::warn!(
                "{} on {}: training stopped after {} iterations without converging",
                setup.canonical(),
                corpus.id(),
                outcome.iterations
            ),
        }
    }
    let meta = TrainingMetadata {
        seed: s.seed,
        dataset_id: corpus.id().to_string(),
        config_hash: s.config_hash.clone(),
        converged: outcome.converged,
        iterations: outcome.iterations,
        train_size: parts.train.len(),
    };
    let model = TrainedModel::from_outcome(&schema, setup.trainer, &outcome, s.threshold, meta).map_err(EvalError::Train)?;

    let preds = model.predict_matrix(&ex, &hash).map_err(EvalError::Train)?;
    let predicted: Vec<Label> = preds.iter().map(|p| Label::from_deceptive(p.deceptive)).collect();
    let confusion = Confusion::from_labels(&ex.labels, &predicted);
    let m = metrics(&confusion);
    let scores: Vec<f64> = preds.iter().map(|p| p.probability).collect();
    let auc = auc(&scores, &ex.labels)?;
    let (majority_label, majority_accuracy) = majority_baseline(&tx.labels, &ex.labels)?;
    let acc = m.accuracy.ok_or(EvalError::Evaluate("empty test set".into()))?;
    let vs_baseline = two_proportion_z_test(acc, ex.labels.len(), majority_accuracy, ex.labels.len())?;
    let train_accuracy = accuracy_of(&model, &tx, &hash)?;
    let val_accuracy = if parts.val.is_empty() {
        None
    } else {
        Some(accuracy_of(&model, &vx, &hash)?)
    };
    let (top_d, top_t) = model.top_features(TOP_FEATURES);
    let wf = |v: Vec<&crate::model::Weight>| {
        v.into_iter()
            .map(|w| WeightedFeature {
                feature: w.feature.clone(),
                weight: w.weight,
                standardized: w.standardized,
            })
            .collect()
    };
    let predictions = ex
        .doc_ids
        .iter()
        .zip(&ex.labels)
        .zip(&preds)
        .map(|((id, gold), p)| PredictionRow {
            doc_id: id.clone(),
            gold: *gold,
            probability: p.probability,
            label: Label::from_deceptive(p.deceptive),
        })
        .collect();
    let report = ExperimentReport {
        protocol: parts.protocol.to_string(),
        config_hash: s.config_hash.clone(),
        seed: s.seed,
        train_dataset: corpus.id().to_string(),
        test_dataset: parts.test_id,
        language: corpus.language().to_string(),
        country: corpus.country().map(str::to_string),
        individualism_score: corpus.individualism_score(),
        row_label: setup.row_label(),
        legend: setup.legend(),
        setup: setup.canonical(),
        trainer: setup.trainer.canonical().to_string(),
        schema_hash: hash,
        n_train: parts.train.len(),
        n_val: parts.val.len(),
        n_test: parts.test.len(),
        n_features: width,
        n_used_features: model.weights.iter().filter(|w| w.weight != 0.0).count(),
        converged: outcome.converged,
        iterations: outcome.iterations,
        confusion,
        test: m,
        auc,
        train_accuracy,
        val_accuracy,
        majority_label,
        majority_accuracy,
        vs_baseline,
        top_deceptive: wf(top_d),
        top_truthful: wf(top_t),
        predictions,
    };
    Ok(ExperimentOutcome { report, model })
}

/// Split, fit features and model on the training part, score the test part.
pub fn run_experiment(
    dataset: &PreparedDataset,
    setup: &FeatureSetup,
    s: &ExperimentSettings<'_>,
) -> Result<ExperimentOutcome, EvalError> {
    let a = split(&dataset.corpus, s.ratios, s.seed, s.stratified).map_err(EvalError::Split)?;
    if a.test.is_empty() {
        return Err(EvalError::Split(crate::corpus::CorpusError::Split(
            "the test share is empty".into(),
        )));
    }
    let parts = Parts {
        protocol: "within",
        train_corpus: &dataset.corpus,
        test_id: dataset.corpus.id().to_string(),
        train: dataset.pick(&a.train),
        val: dataset.pick(&a.val),
        test: dataset.pick(&a.test),
    };
    fit_and_evaluate(setup, parts, s)
}

/// Runs every setup on one dataset and picks the best by validation
/// accuracy (training accuracy when there is no validation share). Ties go
/// to the earlier setup.
pub fn run_grid(
    dataset: &PreparedDataset,
    setups: &[FeatureSetup],
    s: &ExperimentSettings<'_>,
) -> Result<(Vec<ExperimentOutcome>, usize), EvalError> {
    let outcomes: Vec<ExperimentOutcome> = setups
        .iter()
        .map(|setup| run_experiment(dataset, setup, s))
        .collect::<Result<_, _>>()?;
    Ok(pick_best(outcomes))
}

pub fn pick_best(outcomes: Vec<ExperimentOutcome>) -> (Vec<ExperimentOutcome>, usize) {
    let key = |o: &ExperimentOutcome| o.report.val_accuracy.unwrap_or(o.report.train_accuracy);
    let mut best = 0;
    for (i, o) in outcomes.iter().enumerate() {
        if key(o) > key(&outcomes[best]) {
            best = i;
        }
    }
    (outcomes, best)
}

/// Holds out each dataset once and trains on the union of the others.
/// Stagewise training carves its validation share out of that union; ridge
/// training uses all of it.
pub fn run_cross_dataset(
    datasets: &[PreparedDataset],
    setup: &FeatureSetup,
    s: &ExperimentSettings<'_>,
) -> Result<Vec<ExperimentOutcome>, EvalError> {
    if datasets.len() < 2 {
        return Err(EvalError::Cross("needs at least two datasets".into()));
    }
    let lang = datasets[0].corpus.language();
    if let Some(d) = datasets.iter().find(|d| d.corpus.language() != lang) {
        return Err(EvalError::Cross(format!(
            "dataset {} is {:?} but {} is {:?}",
            d.corpus.id(),
            d.corpus.language(),
            datasets[0].corpus.id(),
            lang
        )));
    }
    let mut out = Vec::with_capacity(datasets.len());
    for (i, held) in datasets.iter().enumerate() {
        let others: Vec<&PreparedDataset> = datasets
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, d)| d)
            .collect();
        let union = PreparedDataset::merge(&others, &format!("all-{}", held.corpus.id()))?;
        let (train_docs, val_docs) = if setup.trainer == TrainerKind::Stagewise {
            let tv = s.ratios.train + s.ratios.val;
            let ratios = SplitRatios {
                train: s.ratios.train / tv,
                val: s.ratios.val / tv,
                test: 0.0,
            };
            let a = split(&union.corpus, ratios, s.seed, s.stratified).map_err(EvalError::Split)?;
            (union.pick(&a.train), union.pick(&a.val))
        } else {
            (union.docs.clone(), Vec::new())
        };
        let parts = Parts {
            protocol: "cross",
            train_corpus: &union.corpus,
            test_id: held.corpus.id().to_string(),
            train: train_docs,
            val: val_docs,
            test: held.docs.clone(),
        };
        out.push(fit_and_evaluate(setup, parts, s)?);
    }
    Ok(out)
}
