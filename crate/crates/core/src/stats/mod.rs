//! Rank tests, cue screening and logistic regression.

use thiserror::Error;

pub mod irls;
pub mod mann_whitney;
pub mod mlr;
pub mod screen;

pub use irls::{fit_logistic, sigmoid, IrlsFit, IrlsOptions};
pub use mann_whitney::{mann_whitney_u, midranks, UTestMethod, UTestResult};
pub use mlr::{mlr_fit, MlrResult, MlrRow, MlrStatus};
pub use screen::{correlation_filter, significance_screen, CueMatrix, ScreenRow, ScreenStatus, SignificanceTable};

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("a sample is empty")]
    EmptySample,
    #[error("input contains NaN or infinite values")]
    NonFinite,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("system matrix is singular")]
    Singular,
}

/// Pearson correlation; `None` when either side has zero variance.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len();
    if n != ys.len() || n < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}
