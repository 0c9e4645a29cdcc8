//! The two trainers: ridge IRLS on every column, and forward selection of
//! one column per round by validation accuracy.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::setup::TrainerKind;
use crate::stats::irls::{fit_logistic, sigmoid, IrlsOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainOptions {
    pub ridge: f64,
    pub max_iter: usize,
    pub tol: f64,
    /// Upper bound on stagewise rounds.
    pub max_rounds: usize,
}

impl Default for TrainOptions {
    fn default() -> Self {
        TrainOptions {
            ridge: 1e-8,
            max_iter: 100,
            tol: 1e-8,
            max_rounds: 100,
        }
    }
}

/// Column means and population standard deviations of the training rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub sd: Vec<f64>,
}

impl Standardizer {
    pub fn fit(x: &DMatrix<f64>) -> Standardizer {
        let (n, p) = x.shape();
        let mut mean = vec![0.0; p];
        let mut sd = vec![0.0; p];
        for j in 0..p {
            let col = x.column(j);
            let m = col.sum() / n as f64;
            let var = col.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n as f64;
            mean[j] = m;
            sd[j] = var.sqrt();
        }
        Standardizer { mean, sd }
    }

    /// Columns with non-zero spread.
    pub fn usable(&self) -> Vec<usize> {
        (0..self.sd.len()).filter(|&j| self.sd[j] > 1e-12).collect()
    }

    /// Standardized copy of the listed columns.
    pub fn apply(&self, x: &DMatrix<f64>, cols: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(x.nrows(), cols.len(), |i, k| {
            let j = cols[k];
            (x[(i, j)] - self.mean[j]) / self.sd[j]
        })
    }

    /// Maps standardized coefficients on `cols` back to raw-scale weights
    /// over every column, and the raw intercept.
    pub fn unscale(&self, cols: &[usize], intercept: f64, beta: &[f64]) -> (Vec<f64>, f64) {
        let mut w = vec![0.0; self.sd.len()];
        let mut b = intercept;
        for (k, &j) in cols.iter().enumerate() {
            w[j] = beta[k] / self.sd[j];
            b -= beta[k] * self.mean[j] / self.sd[j];
        }
        (w, b)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutcome {
    /// Raw-scale weight per input column.
    pub weights: Vec<f64>,
    pub bias: f64,
    /// Coefficient per standard deviation of each column (0 when unused).
    pub standardized: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    /// Columns chosen by the stagewise trainer, in order of entry.
    pub selected: Vec<usize>,
    /// Penalized training loss after each IRLS iteration of the final fit.
    pub loss_history: Vec<f64>,
}

fn check_inputs(x: &DMatrix<f64>, y: &[f64]) -> Result<(), ModelError> {
    if x.nrows() != y.len() {
        return Err(ModelError::Shape(format!("{} rows but {} labels", x.nrows(), y.len())));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(ModelError::NonFinite);
    }
    let pos = y.iter().filter(|&&v| v > 0.5).count();
    let neg = y.len() - pos;
    if pos < 2 || neg < 2 {
        return Err(ModelError::TooFewPerClass {
            truthful: neg,
            deceptive: pos,
        });
    }
    Ok(())
}

fn irls_opts(o: &TrainOptions) -> IrlsOptions {
    IrlsOptions {
        ridge: o.ridge,
        max_iter: o.max_iter,
        tol: o.tol,
        detect_separation: false,
    }
}

/// Trains on `x`/`y`. The stagewise trainer needs a validation set.
pub fn train(
    kind: TrainerKind,
    x: &DMatrix<f64>,
    y: &[f64],
    val: Option<(&DMatrix<f64>, &[f64])>,
    opts: &TrainOptions,
) -> Result<TrainOutcome, ModelError> {
    check_inputs(x, y)?;
    if let Some((vx, vy)) = val {
        if vx.ncols() != x.ncols() || vx.nrows() != vy.len() {
            return Err(ModelError::Shape("validation matrix does not match training".into()));
        }
        if vx.iter().any(|v| !v.is_finite()) {
            return Err(ModelError::NonFinite);
        }
    }
    let st = Standardizer::fit(x);
    match kind {
        TrainerKind::Ridge => train_ridge(&st, x, y, opts),
        TrainerKind::Stagewise => {
            let (vx, vy) = val.ok_or(ModelError::NoValidation)?;
            if vy.is_empty() {
                return Err(ModelError::NoValidation);
            }
            train_stagewise(&st, x, y, vx, vy, opts)
        }
    }
}

fn outcome(
    st: &Standardizer,
    cols: &[usize],
    coef: &DVector<f64>,
    converged: bool,
    iterations: usize,
    selected: Vec<usize>,
    loss_history: Vec<f64>,
) -> TrainOutcome {
    let beta: Vec<f64> = coef.iter().skip(1).copied().collect();
    let (weights, bias) = st.unscale(cols, coef[0], &beta);
    let mut standardized = vec![0.0; st.sd.len()];
    for (k, &j) in cols.iter().enumerate() {
        standardized[j] = beta[k];
    }
    TrainOutcome {
        weights,
        bias,
        standardized,
        converged,
        iterations,
        selected,
        loss_history,
    }
}

fn train_ridge(st: &Standardizer, x: &DMatrix<f64>, y: &[f64], opts: &TrainOptions) -> Result<TrainOutcome, ModelError> {
    let cols = st.usable();
    let z = st.apply(x, &cols);
    let fit = fit_logistic(&z, y, &irls_opts(opts))?;
    Ok(outcome(
        st,
        &cols,
        &fit.coefficients,
        fit.converged,
        fit.iterations,
        Vec::new(),
        fit.loss_history,
    ))
}

fn log_loss(eta: &[f64], y: &[f64]) -> f64 {
    let s: f64 = eta
        .iter()
        .zip(y)
        .map(|(&e, &t)| {
            let p = sigmoid(e).clamp(1e-15, 1.0 - 1e-15);
            -(t * p.ln() + (1.0 - t) * (1.0 - p).ln())
        })
        .sum();
    s / eta.len() as f64
}

fn accuracy(eta: &[f64], y: &[f64]) -> f64 {
    let hits = eta
        .iter()
        .zip(y)
        .filter(|(&e, &t)| (sigmoid(e) >= 0.5) == (t > 0.5))
        .count();
    hits as f64 / eta.len() as f64
}

/// Validation score compared lexicographically: accuracy, then log-loss.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Score {
    accuracy: f64,
    loss: f64,
}

impl Score {
    fn of(eta: &[f64], y: &[f64]) -> Score {
        Score {
            accuracy: accuracy(eta, y),
            loss: log_loss(eta, y),
        }
    }

    fn better_than(&self, other: &Score) -> bool {
        const EPS: f64 = 1e-12;
        self.accuracy > other.accuracy + EPS
            || ((self.accuracy - other.accuracy).abs() <= EPS && self.loss < other.loss - EPS)
    }
}

/// Penalized 1-D Newton fit of `b` in `eta + b·z`.
fn fit_offset(eta: &[f64], z: &[f64], y: &[f64], ridge: f64) -> f64 {
    let mut b = 0.0;
    for _ in 0..25 {
        let (mut g, mut h) = (ridge * b, ridge);
        for i in 0..z.len() {
            let mu = sigmoid(eta[i] + b * z[i]);
            g += (mu - y[i]) * z[i];
            h += mu * (1.0 - mu) * z[i] * z[i];
        }
        if h <= 0.0 {
            break;
        }
        let step = (g / h).clamp(-5.0, 5.0);
        b -= step;
        if step.abs() < 1e-8 {
            break;
        }
    }
    b
}

fn linear(z: &DMatrix<f64>, coef: &DVector<f64>) -> Vec<f64> {
    (0..z.nrows())
        .map(|i| coef[0] + (0..z.ncols()).map(|k| z[(i, k)] * coef[k + 1]).sum::<f64>())
        .collect()
}

fn train_stagewise(
    st: &Standardizer,
    x: &DMatrix<f64>,
    y: &[f64],
    vx: &DMatrix<f64>,
    vy: &[f64],
    opts: &TrainOptions,
) -> Result<TrainOutcome, ModelError> {
    let usable = st.usable();
    let z = st.apply(x, &usable);
    let zv = st.apply(vx, &usable);
    let zcols: Vec<Vec<f64>> = (0..z.ncols()).map(|k| z.column(k).iter().copied().collect()).collect();
    let zvcols: Vec<Vec<f64>> = (0..zv.ncols()).map(|k| zv.column(k).iter().copied().collect()).collect();

    let empty = DMatrix::<f64>::zeros(z.nrows(), 0);
    let base = fit_logistic(&empty, y, &irls_opts(opts))?;
    let mut coef = base.coefficients.clone();
    let mut converged = base.converged;
    let mut iterations = base.iterations;
    let mut history = base.loss_history.clone();
    let mut eta = vec![coef[0]; z.nrows()];
    let mut eta_v = vec![coef[0]; zv.nrows()];
    let mut score = Score::of(&eta_v, vy);
    let mut chosen: Vec<usize> = Vec::new();

    for _ in 0..opts.max_rounds {
        let mut best: Option<(usize, Score)> = None;
        for k in 0..zcols.len() {
            if chosen.contains(&k) {
                continue;
            }
            let b = fit_offset(&eta, &zcols[k], y, opts.ridge);
            let cand_v: Vec<f64> = eta_v.iter().zip(&zvcols[k]).map(|(e, v)| e + b * v).collect();
            let s = Score::of(&cand_v, vy);
            if best.is_none_or(|(_, bs)| s.better_than(&bs)) {
                best = Some((k, s));
            }
        }
        let Some((k, _)) = best else { break };
        let mut trial = chosen.clone();
        trial.push(k);
        let zt = z.select_columns(&trial);
        let fit = fit_logistic(&zt, y, &irls_opts(opts))?;
        let zvt = zv.select_columns(&trial);
        let trial_eta_v = linear(&zvt, &fit.coefficients);
        let trial_score = Score::of(&trial_eta_v, vy);
        if !trial_score.better_than(&score) {
            break;
        }
        chosen = trial;
        score = trial_score;
        eta = linear(&zt, &fit.coefficients);
        eta_v = trial_eta_v;
        coef = fit.coefficients;
        converged = fit.converged;
        iterations = fit.iterations;
        history = fit.loss_history;
    }
    let cols: Vec<usize> = chosen.iter().map(|&k| usable[k]).collect();
    Ok(outcome(st, &cols, &coef, converged, iterations, cols.clone(), history))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> (DMatrix<f64>, Vec<f64>) {
        let x = DMatrix::from_row_slice(8, 2, &[
            0.1, 5.0, 0.4, 3.0, 0.3, 4.0, 0.2, 1.0, //
            0.9, 2.0, 0.7, 5.0, 0.8, 3.0, 0.6, 1.0,
        ]);
        (x, vec![0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0])
    }

    #[test]
    fn unscaling_preserves_linear_predictor() {
        let (x, _) = toy();
        let st = Standardizer::fit(&x);
        let z = st.apply(&x, &[0, 1]);
        let (w, b) = st.unscale(&[0, 1], 0.3, &[1.5, -0.7]);
        for i in 0..8 {
            let raw = b + w[0] * x[(i, 0)] + w[1] * x[(i, 1)];
            let std = 0.3 + 1.5 * z[(i, 0)] - 0.7 * z[(i, 1)];
            assert!((raw - std).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_single_class() {
        let (x, _) = toy();
        let y = vec![1.0; 8];
        assert!(matches!(
            train(TrainerKind::Ridge, &x, &y, None, &TrainOptions::default()),
            Err(ModelError::TooFewPerClass { .. })
        ));
    }

    #[test]
    fn stagewise_needs_validation() {
        let (x, y) = toy();
        assert_eq!(
            train(TrainerKind::Stagewise, &x, &y, None, &TrainOptions::default()),
            Err(ModelError::NoValidation)
        );
    }

    #[test]
    fn stagewise_picks_the_informative_column() {
        let (x, y) = toy();
        let out = train(TrainerKind::Stagewise, &x, &y, Some((&x, &y)), &TrainOptions::default()).unwrap();
        assert_eq!(out.selected[0], 0);
        assert!(out.weights[0] > 0.0);
    }

    #[test]
    fn constant_columns_get_zero_weight() {
        let (mut x, y) = toy();
        x = x.insert_column(2, 3.0);
        let out = train(TrainerKind::Ridge, &x, &y, None, &TrainOptions::default()).unwrap();
        assert_eq!(out.weights[2], 0.0);
    }
}
