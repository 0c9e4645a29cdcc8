//! Reference results and tolerance checks against experiment reports.

use serde::{Deserialize, Serialize};

use super::report::ExperimentReport;
use crate::setup::FeatureSetup;

/// Reference cells shipped with the crate.
pub const BUILTIN: &str = include_str!("../../data/expectations.toml");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub dataset: String,
    /// `within` or `cross`; for `cross`, `dataset` is the held-out one.
    pub protocol: String,
    pub row: String,
    pub legend: String,
    /// `recall`, `precision`, `f1`, `auc`, `accuracy` or `majority`.
    pub metric: String,
    pub value: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpectationFile {
    cell: Vec<Expectation>,
}

pub fn parse(text: &str) -> Result<Vec<Expectation>, String> {
    let f: ExpectationFile = toml::from_str(text).map_err(|e| e.message().to_string())?;
    for c in &f.cell {
        if c.metric != "majority" {
            FeatureSetup::parse_legend(&c.row, &c.legend).map_err(|e| e.to_string())?;
        }
    }
    Ok(f.cell)
}

pub fn builtin() -> Vec<Expectation> {
    parse(BUILTIN).expect("bundled expectations parse")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// No report covers the cell, or the metric is undefined.
    Missing,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellCheck {
    pub expectation: Expectation,
    pub observed: Option<f64>,
    pub status: CheckStatus,
}

fn observed(e: &Expectation, r: &ExperimentReport) -> Option<f64> {
    match e.metric.as_str() {
        "recall" => r.test.recall,
        "precision" => r.test.precision,
        "f1" => r.test.f1,
        "accuracy" => r.test.accuracy,
        "auc" => Some(r.auc),
        "majority" => Some(r.majority_accuracy),
        _ => None,
    }
}

/// Checks every cell whose dataset and protocol appear among `reports`.
pub fn check(expectations: &[Expectation], reports: &[ExperimentReport]) -> Vec<CellCheck> {
    let mut out = Vec::new();
    for e in expectations {
        let relevant: Vec<&ExperimentReport> = reports
            .iter()
            .filter(|r| r.test_dataset == e.dataset && r.protocol == e.protocol)
            .collect();
        if relevant.is_empty() {
            continue;
        }
        let report = if e.metric == "majority" {
            relevant.first().copied()
        } else {
            let want = FeatureSetup::parse_legend(&e.row, &e.legend).ok().map(|s| s.canonical());
            relevant.into_iter().find(|r| Some(&r.setup) == want.as_ref())
        };
        let value = report.and_then(|r| observed(e, r));
        let status = match value {
            None => CheckStatus::Missing,
            Some(v) if (v - e.value).abs() <= e.tolerance + 1e-12 => CheckStatus::Pass,
            Some(_) => CheckStatus::Fail,
        };
        out.push(CellCheck {
            expectation: e.clone(),
            observed: value,
            status,
        });
    }
    out
}

pub fn checks_markdown(checks: &[CellCheck]) -> String {
    let mut s = String::from("| dataset | protocol | row | setup | metric | reference | observed | status |\n|---|---|---|---|---|---|---|---|\n");
    for c in checks {
        let e = &c.expectation;
        s.push_str(&format!(
            "| {} | {} | {} | {} | {} | {:.2} ± {:.2} | {} | {:?} |\n",
            e.dataset,
            e.protocol,
            e.row,
            e.legend,
            e.metric,
            e.value,
            e.tolerance,
            c.observed.map(|v| format!("{v:.4}")).unwrap_or_else(|| "n/a".into()),
            c.status
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_cells_parse() {
        let cells = builtin();
        assert!(cells.iter().any(|c| c.dataset == "opspam" && c.metric == "accuracy" && c.value == 0.82));
        assert!(cells.iter().all(|c| c.tolerance > 0.0));
    }
}
