//! Classification metrics with deceptive as the positive class.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::EvalError;
use crate::corpus::Label;
use crate::stats::midranks;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl Confusion {
    pub fn from_labels(gold: &[Label], predicted: &[Label]) -> Confusion {
        let mut c = Confusion::default();
        for (g, p) in gold.iter().zip(predicted) {
            match (g.is_deceptive(), p.is_deceptive()) {
                (true, true) => c.tp += 1,
                (false, true) => c.fp += 1,
                (false, false) => c.tn += 1,
                (true, false) => c.fn_ += 1,
            }
        }
        c
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }
}

/// Metrics whose denominator is zero are absent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
    pub accuracy: Option<f64>,
}

fn ratio(a: usize, b: usize) -> Option<f64> {
    (b > 0).then(|| a as f64 / b as f64)
}

pub fn metrics(c: &Confusion) -> Metrics {
    let precision = ratio(c.tp, c.tp + c.fp);
    let recall = ratio(c.tp, c.tp + c.fn_);
    let f1 = match (precision, recall) {
        (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
        (Some(_), Some(_)) => Some(0.0),
        _ => None,
    };
    Metrics {
        precision,
        recall,
        f1,
        accuracy: ratio(c.tp + c.tn, c.total()),
    }
}

/// Probability that a random deceptive document scores above a random
/// truthful one, ties counting one half. Computed from midranks.
pub fn auc(scores: &[f64], gold: &[Label]) -> Result<f64, EvalError> {
    if scores.len() != gold.len() {
        return Err(EvalError::Evaluate(format!(
            "{} scores for {} labels",
            scores.len(),
            gold.len()
        )));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(EvalError::Evaluate("scores must be finite".into()));
    }
    let n_pos = gold.iter().filter(|l| l.is_deceptive()).count();
    let n_neg = gold.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(EvalError::SingleClass);
    }
    let (ranks, _) = midranks(scores);
    let rank_sum: f64 = ranks
        .iter()
        .zip(gold)
        .filter(|(_, l)| l.is_deceptive())
        .map(|(r, _)| r)
        .sum();
    let u = rank_sum - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Ok(u / (n_pos * n_neg) as f64)
}

/// The most frequent training class (ties go to deceptive) and the accuracy
/// of predicting it for every test document.
pub fn majority_baseline(train: &[Label], test: &[Label]) -> Result<(Label, f64), EvalError> {
    if train.is_empty() {
        return Err(EvalError::Evaluate("majority baseline needs training labels".into()));
    }
    let dec = train.iter().filter(|l| l.is_deceptive()).count();
    let majority = Label::from_deceptive(2 * dec >= train.len());
    if test.is_empty() {
        return Err(EvalError::Evaluate("majority baseline needs test labels".into()));
    }
    let hits = test.iter().filter(|l| **l == majority).count();
    Ok((majority, hits as f64 / test.len() as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZTest {
    pub z: f64,
    /// One-tailed p for the first proportion exceeding the second.
    pub p_one_tailed: f64,
}

/// Pooled two-proportion z-test. When the pooled variance is zero the
/// proportions are equal and p is 0.5.
pub fn two_proportion_z_test(acc1: f64, n1: usize, acc2: f64, n2: usize) -> Result<ZTest, EvalError> {
    if n1 == 0 || n2 == 0 {
        return Err(EvalError::Evaluate("z-test needs non-empty samples".into()));
    }
    if !(0.0..=1.0).contains(&acc1) || !(0.0..=1.0).contains(&acc2) {
        return Err(EvalError::Evaluate(format!("accuracies {acc1}, {acc2} outside [0, 1]")));
    }
    let (f1, f2) = (n1 as f64, n2 as f64);
    let pooled = (acc1 * f1 + acc2 * f2) / (f1 + f2);
    let var = pooled * (1.0 - pooled) * (1.0 / f1 + 1.0 / f2);
    if var <= 0.0 {
        return Ok(ZTest { z: 0.0, p_one_tailed: 0.5 });
    }
    let z = (acc1 - acc2) / var.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    Ok(ZTest {
        z,
        p_one_tailed: normal.sf(z),
    })
}
