//! Correlation-based feature subset selection.

use nalgebra::DMatrix;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::stats::pearson;

/// Features whose label correlation is not significant at this level never
/// enter the search.
pub const RELEVANCE_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct CfsResult {
    /// Column indices in the order they were added.
    pub selected: Vec<usize>,
    pub merit: f64,
}

/// `k·r̄cf / sqrt(k + k(k-1)·r̄ff)` from the summed absolute correlations.
pub fn merit(k: usize, sum_rcf: f64, sum_rff_pairs: f64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let kf = k as f64;
    let mean_cf = sum_rcf / kf;
    let mean_ff = if k > 1 {
        sum_rff_pairs / (kf * (kf - 1.0) / 2.0)
    } else {
        0.0
    };
    kf * mean_cf / (kf + kf * (kf - 1.0) * mean_ff).sqrt()
}

/// Two-sided p of a Pearson correlation over `n` pairs.
pub fn correlation_p(r: f64, n: usize) -> f64 {
    if n < 3 {
        return 1.0;
    }
    let df = (n - 2) as f64;
    if r.abs() >= 1.0 {
        return 0.0;
    }
    let t = r.abs() * (df / (1.0 - r * r)).sqrt();
    let dist = StudentsT::new(0.0, 1.0, df).expect("positive degrees of freedom");
    (2.0 * dist.sf(t)).min(1.0)
}

fn column(x: &DMatrix<f64>, j: usize) -> Vec<f64> {
    x.column(j).iter().copied().collect()
}

/// Greedy forward search over the relevant features, adding the feature
/// that most increases merit and stopping when none does. Ties go to the
/// lower column index.
pub fn cfs_select(x: &DMatrix<f64>, y: &[f64]) -> CfsResult {
    cfs_select_with(x, y, RELEVANCE_ALPHA)
}

pub fn cfs_select_with(x: &DMatrix<f64>, y: &[f64], alpha: f64) -> CfsResult {
    let (n, p) = x.shape();
    let cols: Vec<Vec<f64>> = (0..p).map(|j| column(x, j)).collect();
    let rcf: Vec<Option<f64>> = cols
        .iter()
        .map(|c| pearson(c, y).filter(|r| correlation_p(*r, n) < alpha).map(f64::abs))
        .collect();
    let mut selected: Vec<usize> = Vec::new();
    let mut in_set = vec![false; p];
    // Summed |r| between each candidate and the current subset.
    let mut rff_to_set = vec![0.0; p];
    let (mut sum_rcf, mut sum_rff) = (0.0, 0.0);
    let mut best_merit = 0.0;
    loop {
        let k = selected.len() + 1;
        let mut best: Option<(usize, f64)> = None;
        for j in 0..p {
            let Some(r) = rcf[j] else { continue };
            if in_set[j] {
                continue;
            }
            let m = merit(k, sum_rcf + r, sum_rff + rff_to_set[j]);
            if best.is_none_or(|(_, bm)| m > bm) {
                best = Some((j, m));
            }
        }
        match best {
            Some((j, m)) if m > best_merit + 1e-12 => {
                selected.push(j);
                in_set[j] = true;
                sum_rcf += rcf[j].unwrap();
                sum_rff += rff_to_set[j];
                best_merit = m;
                for c in 0..p {
                    if !in_set[c] && rcf[c].is_some() {
                        rff_to_set[c] += pearson(&cols[c], &cols[j]).map_or(0.0, f64::abs);
                    }
                }
            }
            _ => break,
        }
    }
    CfsResult {
        selected,
        merit: best_merit,
    }
}
