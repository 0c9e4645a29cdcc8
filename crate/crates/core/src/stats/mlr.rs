//! Multiple logistic regression with Wald statistics.

use nalgebra::DMatrix;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use super::irls::{fit_logistic, IrlsOptions};
use super::StatsError;

/// Rows with p below this are flagged for reporting.
pub const REPORT_P: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MlrRow {
    pub name: String,
    pub estimate: f64,
    pub se: f64,
    pub wald_z: f64,
    pub p: f64,
    pub reported: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MlrStatus {
    Converged,
    NotConverged,
    /// The classes are linearly separable; the MLE does not exist.
    PerfectSeparation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MlrResult {
    /// Feature rows in input order (empty under perfect separation).
    pub rows: Vec<MlrRow>,
    pub intercept: Option<MlrRow>,
    pub status: MlrStatus,
    pub iterations: usize,
    /// Constant columns removed before fitting.
    pub dropped_constant: Vec<String>,
}

impl MlrResult {
    pub fn converged(&self) -> bool {
        self.status == MlrStatus::Converged
    }

    pub fn row(&self, name: &str) -> Option<&MlrRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    /// Intercept and reported rows, sorted by estimate (largest first).
    pub fn reported_sorted(&self) -> Vec<&MlrRow> {
        let mut v: Vec<&MlrRow> = self
            .rows
            .iter()
            .chain(self.intercept.iter())
            .filter(|r| r.reported || r.name == "(intercept)")
            .collect();
        v.sort_by(|a, b| b.estimate.partial_cmp(&a.estimate).unwrap().then(a.name.cmp(&b.name)));
        v
    }

    /// CSV with every row: `name,estimate,se,wald_z,p,reported`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["name", "estimate", "se", "wald_z", "p", "reported"])
            .expect("in-memory write");
        for r in self.intercept.iter().chain(&self.rows) {
            w.write_record([
                r.name.clone(),
                format!("{:.6}", r.estimate),
                format!("{:.6}", r.se),
                format!("{:.6}", r.wald_z),
                format!("{:.6}", r.p),
                r.reported.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

fn row(name: &str, estimate: f64, var: f64, normal: &Normal) -> MlrRow {
    let se = var.max(0.0).sqrt();
    let wald_z = estimate / se;
    let p = (2.0 * normal.sf(wald_z.abs())).min(1.0);
    MlrRow {
        name: name.to_string(),
        estimate,
        se,
        wald_z,
        p,
        reported: p < REPORT_P,
    }
}

/// Fits deceptive (1) vs truthful (0) on the named columns with a 1e-8
/// ridge and at most 100 iterations.
pub fn mlr_fit(columns: &[(String, Vec<f64>)], y: &[bool]) -> Result<MlrResult, StatsError> {
    mlr_fit_with(columns, y, &IrlsOptions {
        ridge: 1e-8,
        max_iter: 100,
        tol: 1e-12,
        detect_separation: true,
    })
}

pub fn mlr_fit_with(
    columns: &[(String, Vec<f64>)],
    y: &[bool],
    opts: &IrlsOptions,
) -> Result<MlrResult, StatsError> {
    let n = y.len();
    let mut kept = Vec::new();
    let mut dropped_constant = Vec::new();
    for (name, col) in columns {
        if col.len() != n {
            return Err(StatsError::Shape(format!(
                "column {name} has {} values for {n} labels",
                col.len()
            )));
        }
        if col.iter().any(|v| !v.is_finite()) {
            return Err(StatsError::NonFinite);
        }
        if col.iter().all(|v| *v == col[0]) {
            log::warn!("dropping constant column {name} before regression");
            dropped_constant.push(name.clone());
        } else {
            kept.push((name, col));
        }
    }
    let x = DMatrix::from_fn(n, kept.len(), |i, j| kept[j].1[i]);
    let yf: Vec<f64> = y.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    let fit = fit_logistic(&x, &yf, opts)?;
    if fit.separated {
        return Ok(MlrResult {
            rows: Vec::new(),
            intercept: None,
            status: MlrStatus::PerfectSeparation,
            iterations: fit.iterations,
            dropped_constant,
        });
    }
    let cov = fit.covariance.ok_or(StatsError::Singular)?;
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let intercept = row("(intercept)", fit.coefficients[0], cov[(0, 0)], &normal);
    let rows = kept
        .iter()
        .enumerate()
        .map(|(j, (name, _))| row(name, fit.coefficients[j + 1], cov[(j + 1, j + 1)], &normal))
        .collect();
    Ok(MlrResult {
        rows,
        intercept: Some(intercept),
        status: if fit.converged {
            MlrStatus::Converged
        } else {
            MlrStatus::NotConverged
        },
        iterations: fit.iterations,
        dropped_constant,
    })
}
