//! Per-cue significance screening and the correlation filter applied before
//! regression.

use serde::Serialize;

use super::mann_whitney::{mann_whitney_u, UTestMethod};
use super::{pearson, StatsError};
use crate::corpus::Label;
use crate::cues::{Availability, CueSpec, CueVector};

/// Cue values arranged by feature, one entry per document.
#[derive(Debug, Clone, PartialEq)]
pub struct CueMatrix {
    pub doc_ids: Vec<String>,
    pub labels: Vec<Label>,
    pub features: Vec<CueSpec>,
    /// `values[feature][doc]`; `None` where the cue could not be computed.
    pub values: Vec<Vec<Option<f64>>>,
}

impl CueMatrix {
    pub fn from_vectors(vectors: &[CueVector], features: &[CueSpec]) -> CueMatrix {
        let values = features
            .iter()
            .map(|f| vectors.iter().map(|v| v.get(&f.name)).collect())
            .collect();
        CueMatrix {
            doc_ids: vectors.iter().map(|v| v.doc_id.clone()).collect(),
            labels: vectors.iter().map(|v| v.label).collect(),
            features: features.to_vec(),
            values,
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.features.iter().position(|f| f.name == name)
    }

    /// A fully observed column, or `None` if any document lacks the cue.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.index_of(name)?;
        self.values[j].iter().copied().collect()
    }

    fn split_by_label(&self, j: usize) -> (Vec<f64>, Vec<f64>) {
        let (mut t, mut d) = (Vec::new(), Vec::new());
        for (v, l) in self.values[j].iter().zip(&self.labels) {
            if let Some(v) = v {
                match l {
                    Label::Truthful => t.push(*v),
                    Label::Deceptive => d.push(*v),
                }
            }
        }
        (t, d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScreenStatus {
    Tested,
    /// The cue is meaningless for the language.
    NotApplicable,
    /// No resource, or no document of one class carries a value.
    Unavailable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScreenRow {
    pub feature: String,
    pub status: ScreenStatus,
    pub p: Option<f64>,
    pub u: Option<f64>,
    pub mean_truthful: Option<f64>,
    pub mean_deceptive: Option<f64>,
    pub significant: bool,
    pub method: Option<UTestMethod>,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignificanceTable {
    pub alpha: f64,
    pub rows: Vec<ScreenRow>,
}

impl SignificanceTable {
    pub fn row(&self, feature: &str) -> Option<&ScreenRow> {
        self.rows.iter().find(|r| r.feature == feature)
    }

    pub fn significant(&self) -> impl Iterator<Item = &ScreenRow> {
        self.rows.iter().filter(|r| r.significant)
    }

    pub fn significant_count(&self) -> usize {
        self.significant().count()
    }

    /// `feature,p,mean_truthful,mean_deceptive,significant,method`; untested
    /// rows leave the numeric cells empty and put their status in `method`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["feature", "p", "mean_truthful", "mean_deceptive", "significant", "method"])
            .expect("in-memory write");
        for r in &self.rows {
            let f = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();
            let method = match (r.status, r.method) {
                (ScreenStatus::Tested, Some(UTestMethod::Exact)) => "exact",
                (ScreenStatus::Tested, _) => "normal-approx",
                (ScreenStatus::NotApplicable, _) => "n/a",
                (ScreenStatus::Unavailable, _) => "unavailable",
            };
            w.write_record([
                r.feature.clone(),
                f(r.p),
                f(r.mean_truthful),
                f(r.mean_deceptive),
                r.significant.to_string(),
                method.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    /// Markdown table with bracketed class means, truthful first.
    pub fn to_markdown(&self) -> String {
        let mut out = format!(
            "| feature | p | [truthful deceptive] | p < {} |\n|---|---|---|---|\n",
            self.alpha
        );
        for r in &self.rows {
            let line = match r.status {
                ScreenStatus::Tested => format!(
                    "| {} | {:.4} | [{:.3} {:.3}] | {} |\n",
                    r.feature,
                    r.p.unwrap_or(1.0),
                    r.mean_truthful.unwrap_or(0.0),
                    r.mean_deceptive.unwrap_or(0.0),
                    if r.significant { "yes" } else { "no" }
                ),
                ScreenStatus::NotApplicable => format!("| {} | N/A | | |\n", r.feature),
                ScreenStatus::Unavailable => format!("| {} | unavailable | | |\n", r.feature),
            };
            out.push_str(&line);
        }
        out
    }
}

fn untested(feature: &str, status: ScreenStatus) -> ScreenRow {
    ScreenRow {
        feature: feature.to_string(),
        status,
        p: None,
        u: None,
        mean_truthful: None,
        mean_deceptive: None,
        significant: false,
        method: None,
        degenerate: false,
    }
}

/// Mann-Whitney U test of every cue, truthful against deceptive. A cue
/// passes when `p < alpha`.
pub fn significance_screen(matrix: &CueMatrix, alpha: f64) -> Result<SignificanceTable, StatsError> {
    let mut rows = Vec::with_capacity(matrix.features.len());
    for (j, spec) in matrix.features.iter().enumerate() {
        match spec.availability {
            Availability::NotApplicable => {
                rows.push(untested(&spec.name, ScreenStatus::NotApplicable));
                continue;
            }
            Availability::Unavailable => {
                rows.push(untested(&spec.name, ScreenStatus::Unavailable));
                continue;
            }
            Availability::Available => {}
        }
        let (t, d) = matrix.split_by_label(j);
        if t.is_empty() || d.is_empty() {
            rows.push(untested(&spec.name, ScreenStatus::Unavailable));
            continue;
        }
        let r = mann_whitney_u(&t, &d)?;
        rows.push(ScreenRow {
            feature: spec.name.clone(),
            status: ScreenStatus::Tested,
            p: Some(r.p_two_tailed),
            u: Some(r.u),
            mean_truthful: Some(r.mean1),
            mean_deceptive: Some(r.mean2),
            significant: r.p_two_tailed < alpha,
            method: Some(r.method),
            degenerate: r.degenerate,
        });
    }
    Ok(SignificanceTable { alpha, rows })
}

/// Aggregate cues and the parts they are composed of.
pub const COMPOSITION_GROUPS: [(&str, &[&str]); 1] =
    [("first_person", &["first_person_singular", "first_person_plural"])];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilterOutcome {
    /// Surviving features in table order.
    pub kept: Vec<String>,
    /// Removed features with the reason.
    pub dropped: Vec<(String, String)>,
}

/// Reduces the significant cues to a non-redundant set:
/// composition groups keep their parts when all parts are significant and
/// the aggregate otherwise; each sentiment polarity keeps its lowest-p
/// lexicon; then, by ascending p, a cue is dropped if `|r| > threshold`
/// against any cue already kept.
pub fn correlation_filter(matrix: &CueMatrix, table: &SignificanceTable, threshold: f64) -> FilterOutcome {
    let mut cands: Vec<(&str, f64)> = table
        .significant()
        .map(|r| (r.feature.as_str(), r.p.unwrap_or(1.0)))
        .collect();
    let mut dropped = Vec::new();
    let is_cand = |c: &[(&str, f64)], n: &str| c.iter().any(|(f, _)| *f == n);

    for (agg, parts) in COMPOSITION_GROUPS {
        if !is_cand(&cands, agg) {
            continue;
        }
        let remove: Vec<&str> = if parts.iter().all(|p| is_cand(&cands, p)) {
            vec![agg]
        } else {
            parts.iter().copied().filter(|p| is_cand(&cands, p)).collect()
        };
        for r in remove {
            cands.retain(|(f, _)| *f != r);
            dropped.push((r.to_string(), format!("composition group {agg}")));
        }
    }

    for prefix in ["positive_", "negative_"] {
        let best = cands
            .iter()
            .filter(|(f, _)| f.starts_with(prefix))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .map(|(f, _)| *f);
        if let Some(best) = best {
            let losers: Vec<&str> = cands
                .iter()
                .filter(|(f, _)| f.starts_with(prefix) && *f != best)
                .map(|(f, _)| *f)
                .collect();
            for l in losers {
                cands.retain(|(f, _)| *f != l);
                dropped.push((l.to_string(), format!("less significant than {best}")));
            }
        }
    }

    let order: Vec<&str> = cands.iter().map(|(f, _)| *f).collect();
    let mut by_p = cands.clone();
    // Stable sort keeps table order among equal p-values.
    by_p.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    let mut kept: Vec<&str> = Vec::new();
    for (f, _) in by_p {
        let partner = kept.iter().find(|k| {
            complete_pair(matrix, f, k)
                .and_then(|(a, b)| pearson(&a, &b))
                .is_some_and(|r| r.abs() > threshold)
        });
        match partner {
            Some(k) => dropped.push((f.to_string(), format!("|r| > {threshold} with {k}"))),
            None => kept.push(f),
        }
    }
    FilterOutcome {
        kept: order.into_iter().filter(|f| kept.contains(f)).map(String::from).collect(),
        dropped,
    }
}

fn complete_pair(m: &CueMatrix, a: &str, b: &str) -> Option<(Vec<f64>, Vec<f64>)> {
    let (i, j) = (m.index_of(a)?, m.index_of(b)?);
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (x, y) in m.values[i].iter().zip(&m.values[j]) {
        if let (Some(x), Some(y)) = (x, y) {
            xs.push(*x);
            ys.push(*y);
        }
    }
    Some((xs, ys))
}
