//! Two-sided Mann-Whitney U test.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use super::StatsError;

/// Largest group size for which the exact null distribution is used.
pub const EXACT_MAX_N: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UTestMethod {
    Exact,
    NormalApprox,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UTestResult {
    /// U statistic of the first sample.
    pub u: f64,
    /// Standardized U without continuity correction.
    pub z: f64,
    pub p_two_tailed: f64,
    pub method: UTestMethod,
    pub n1: usize,
    pub n2: usize,
    pub mean1: f64,
    pub mean2: f64,
    /// All observations equal; p is set to 1.
    pub degenerate: bool,
}

/// Midranks of `values` (1-based), with tie group sizes.
pub fn midranks(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite values"));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        let r = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = r;
        }
        ties.push(j - i);
        i = j;
    }
    (ranks, ties)
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Exact two-sided p: the share of all `C(n1+n2, n1)` relabelings whose U is
/// at least as far from `n1·n2/2` as the observed one. Ranks are doubled so
/// midranks stay integral and the comparison is exact.
fn exact_p(doubled_ranks: &[u64], n1: usize, observed_sum: u64) -> f64 {
    let max_sum: u64 = doubled_ranks.iter().sum();
    // ways[k][s]: subsets of size k with doubled rank sum s.
    let mut ways = vec![vec![0u64; max_sum as usize + 1]; n1 + 1];
    ways[0][0] = 1;
    for &r in doubled_ranks {
        for k in (1..=n1).rev() {
            for s in (r as usize..=max_sum as usize).rev() {
                ways[k][s] += ways[k - 1][s - r as usize];
            }
        }
    }
    let n2 = doubled_ranks.len() - n1;
    let offset = (n1 * (n1 + 1)) as i64;
    let centre = (n1 * n2) as i64;
    let dev = |s: u64| ((s as i64 - offset) - centre).abs();
    let obs = dev(observed_sum);
    let (mut hit, mut total) = (0u64, 0u64);
    for (s, &w) in ways[n1].iter().enumerate() {
        total += w;
        if dev(s as u64) >= obs {
            hit += w;
        }
    }
    hit as f64 / total as f64
}

/// Mann-Whitney U test of `xs` against `ys`. Exact when both groups have at
/// most [`EXACT_MAX_N`] observations, otherwise a normal approximation with
/// tie-corrected variance and a 0.5 continuity correction.
pub fn mann_whitney_u(xs: &[f64], ys: &[f64]) -> Result<UTestResult, StatsError> {
    if xs.is_empty() || ys.is_empty() {
        return Err(StatsError::EmptySample);
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let (n1, n2) = (xs.len(), ys.len());
    let all: Vec<f64> = xs.iter().chain(ys).copied().collect();
    let (ranks, ties) = midranks(&all);
    let r1: f64 = ranks[..n1].iter().sum();
    let u = r1 - (n1 * (n1 + 1)) as f64 / 2.0;
    let (mean1, mean2) = (mean(xs), mean(ys));
    let n = (n1 + n2) as f64;
    let mu = (n1 * n2) as f64 / 2.0;
    let tie_term: f64 = ties.iter().map(|&t| (t * t * t - t) as f64).sum();
    let var = (n1 * n2) as f64 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if ties.len() == 1 {
        return Ok(UTestResult {
            u,
            z: 0.0,
            p_two_tailed: 1.0,
            method: if n1.max(n2) <= EXACT_MAX_N {
                UTestMethod::Exact
            } else {
                UTestMethod::NormalApprox
            },
            n1,
            n2,
            mean1,
            mean2,
            degenerate: true,
        });
    }
    let sd = var.sqrt();
    let z = (u - mu) / sd;
    let (p, method) = if n1.max(n2) <= EXACT_MAX_N {
        let doubled: Vec<u64> = ranks.iter().map(|r| (r * 2.0).round() as u64).collect();
        let obs: u64 = doubled[..n1].iter().sum();
        (exact_p(&doubled, n1, obs), UTestMethod::Exact)
    } else {
        (normal_p(u, mu, sd), UTestMethod::NormalApprox)
    };
    Ok(UTestResult {
        u,
        z,
        p_two_tailed: p.clamp(0.0, 1.0),
        method,
        n1,
        n2,
        mean1,
        mean2,
        degenerate: false,
    })
}

fn normal_p(u: f64, mu: f64, sd: f64) -> f64 {
    let zc = ((u - mu).abs() - 0.5).max(0.0) / sd;
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    (2.0 * normal.sf(zc)).min(1.0)
}

/// Normal-approximation p regardless of sample size.
pub fn mann_whitney_u_normal(xs: &[f64], ys: &[f64]) -> Result<f64, StatsError> {
    if xs.is_empty() || ys.is_empty() {
        return Err(StatsError::EmptySample);
    }
    let (n1, n2) = (xs.len(), ys.len());
    let all: Vec<f64> = xs.iter().chain(ys).copied().collect();
    let (ranks, ties) = midranks(&all);
    if ties.len() == 1 {
        return Ok(1.0);
    }
    let u = ranks[..n1].iter().sum::<f64>() - (n1 * (n1 + 1)) as f64 / 2.0;
    let n = (n1 + n2) as f64;
    let tie_term: f64 = ties.iter().map(|&t| (t * t * t - t) as f64).sum();
    let var = (n1 * n2) as f64 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    Ok(normal_p(u, (n1 * n2) as f64 / 2.0, var.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_samples() {
        let r = mann_whitney_u(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(r.u, 4.5);
        assert!((r.p_two_tailed - 1.0).abs() < 1e-12);
        assert_eq!(r.method, UTestMethod::Exact);
    }

    #[test]
    fn fully_separated_small() {
        let r = mann_whitney_u(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
        assert_eq!(r.u, 0.0);
        assert!((r.p_two_tailed - 0.1).abs() < 1e-12);
    }

    #[test]
    fn degenerate_input() {
        let r = mann_whitney_u(&[2.0; 10], &[2.0; 12]).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.p_two_tailed, 1.0);
    }

    #[test]
    fn errors() {
        assert_eq!(mann_whitney_u(&[], &[1.0]), Err(StatsError::EmptySample));
        assert_eq!(mann_whitney_u(&[f64::NAN], &[1.0]), Err(StatsError::NonFinite));
    }

    #[test]
    fn large_samples_use_normal_approximation() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let ys: Vec<f64> = (10..30).map(|i| i as f64).collect();
        let r = mann_whitney_u(&xs, &ys).unwrap();
        assert_eq!(r.method, UTestMethod::NormalApprox);
        assert!(r.p_two_tailed < 0.01);
    }

    #[test]
    fn midranks_with_ties() {
        let (r, t) = midranks(&[3.0, 1.0, 3.0, 2.0]);
        assert_eq!(r, vec![3.5, 1.0, 3.5, 2.0]);
        assert_eq!(t, vec![1, 1, 2]);
    }
}
