//! Newton-Raphson (IRLS) fitting of binary logistic regression.

use nalgebra::{DMatrix, DVector};

use super::StatsError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrlsOptions {
    /// L2 penalty on the slopes (the intercept is never penalized).
    pub ridge: f64,
    pub max_iter: usize,
    /// Stop when the relative change in penalized loss falls below this.
    pub tol: f64,
    /// Stop as soon as the current coefficients separate the classes.
    pub detect_separation: bool,
}

impl Default for IrlsOptions {
    fn default() -> Self {
        IrlsOptions {
            ridge: 1e-8,
            max_iter: 100,
            tol: 1e-10,
            detect_separation: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IrlsFit {
    /// Intercept first, then one slope per column.
    pub coefficients: DVector<f64>,
    /// Inverse of the penalized Hessian at the solution.
    pub covariance: Option<DMatrix<f64>>,
    pub iterations: usize,
    pub converged: bool,
    pub separated: bool,
    /// Penalized negative log-likelihood after each iteration, starting with
    /// the initial point.
    pub loss_history: Vec<f64>,
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + exp(z))` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

fn design(x: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, p) = x.shape();
    DMatrix::from_fn(n, p + 1, |i, j| if j == 0 { 1.0 } else { x[(i, j - 1)] })
}

fn penalized_loss(a: &DMatrix<f64>, y: &[f64], beta: &DVector<f64>, ridge: f64) -> f64 {
    let eta = a * beta;
    let nll: f64 = eta
        .iter()
        .zip(y)
        .map(|(&e, &yi)| softplus(e) - yi * e)
        .sum();
    let pen: f64 = beta.iter().skip(1).map(|b| b * b).sum::<f64>() * ridge / 2.0;
    nll + pen
}

/// Solves `h · d = g`, preferring Cholesky and falling back to LU.
pub fn solve_spd(h: &DMatrix<f64>, g: &DVector<f64>) -> Option<DVector<f64>> {
    if let Some(ch) = h.clone().cholesky() {
        return Some(ch.solve(g));
    }
    h.clone().lu().solve(g)
}

fn invert(h: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    if let Some(ch) = h.clone().cholesky() {
        return Some(ch.inverse());
    }
    h.clone().try_inverse()
}

/// Fits `P(y=1|x) = σ(b0 + x·b)` by penalized Newton steps with step halving.
/// `x` must not contain an intercept column; `y` holds 0/1 values.
pub fn fit_logistic(x: &DMatrix<f64>, y: &[f64], opts: &IrlsOptions) -> Result<IrlsFit, StatsError> {
    let (n, p) = x.shape();
    if n == 0 || y.len() != n {
        return Err(StatsError::Shape(format!("{n} rows but {} labels", y.len())));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let a = design(x);
    let yv = DVector::from_column_slice(y);
    let mut beta = DVector::zeros(p + 1);
    let ybar = y.iter().sum::<f64>() / n as f64;
    if ybar > 0.0 && ybar < 1.0 {
        beta[0] = (ybar / (1.0 - ybar)).ln();
    }
    let mut penalty = DMatrix::identity(p + 1, p + 1) * opts.ridge;
    penalty[(0, 0)] = 0.0;
    let mut loss = penalized_loss(&a, y, &beta, opts.ridge);
    let mut history = vec![loss];
    let mut converged = false;
    let mut separated = false;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        let eta = &a * &beta;
        if opts.detect_separation
            && eta
                .iter()
                .zip(y)
                .all(|(&e, &yi)| if yi > 0.5 { e > 0.0 } else { e < 0.0 })
        {
            separated = true;
            break;
        }
        iterations += 1;
        let mu: DVector<f64> = eta.map(sigmoid);
        let w: DVector<f64> = mu.map(|m| (m * (1.0 - m)).max(1e-12));
        let mut grad = a.transpose() * (&mu - &yv);
        grad += &penalty * &beta;
        let aw = DMatrix::from_fn(n, p + 1, |i, j| a[(i, j)] * w[i]);
        let h = a.transpose() * aw + &penalty;
        let step = solve_spd(&h, &grad).ok_or(StatsError::Singular)?;
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let cand = &beta - &step * t;
            let l = penalized_loss(&a, y, &cand, opts.ridge);
            if l.is_finite() && l <= loss {
                accepted = Some((cand, l));
                break;
            }
            t *= 0.5;
        }
        let Some((cand, l)) = accepted else {
            converged = true;
            break;
        };
        let change = (loss - l).abs() / (loss.abs() + 1e-12);
        let max_step = (&cand - &beta).amax();
        beta = cand;
        loss = l;
        history.push(loss);
        if change < opts.tol || max_step < 1e-10 {
            converged = true;
            break;
        }
    }
    let eta = &a * &beta;
    let mu: DVector<f64> = eta.map(sigmoid);
    let aw = DMatrix::from_fn(n, p + 1, |i, j| a[(i, j)] * (mu[i] * (1.0 - mu[i])).max(1e-12));
    let h = a.transpose() * aw + &penalty;
    Ok(IrlsFit {
        coefficients: beta,
        covariance: invert(&h),
        iterations,
        converged,
        separated,
        loss_history: history,
    })
}
