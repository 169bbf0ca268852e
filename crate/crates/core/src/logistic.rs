//! Explicit solution of the stochastic logistic equation along a sampled
//! Brownian path:
//!
//! ```text
//! G(t) = lambda exp((a - sigma^2/2) t + sigma B(t)),   L(t) = G(t) / (1 + b int_0^t G)
//! ```

use crate::brownian::BrownianPath;
use crate::error::{Error, Result};
use crate::model::LogisticParams;

/// Largest exponent accepted before reporting overflow.
pub const MAX_LOG: f64 = 709.0;

/// Geometric Brownian motion `G` and its running trapezoid integral.
#[derive(Debug, Clone, PartialEq)]
pub struct GbmPath {
    pub t_grid: Vec<f64>,
    pub g: Vec<f64>,
    pub int_g: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticPath {
    pub t_grid: Vec<f64>,
    pub l: Vec<f64>,
}

pub fn gbm_path(lp: &LogisticParams, bp: &BrownianPath) -> Result<GbmPath> {
    let mu = lp.log_drift();
    let ln_lambda = lp.lambda.ln();
    let mut g = Vec::with_capacity(bp.t_grid.len());
    for (&t, &b) in bp.t_grid.iter().zip(&bp.values) {
        let e = ln_lambda + mu * t + lp.sigma * b;
        if e > MAX_LOG {
            return Err(Error::Overflow { what: "G", t });
        }
        g.push(e.exp());
    }
    let mut int_g = Vec::with_capacity(g.len());
    let mut acc = 0.0;
    int_g.push(acc);
    for w in g.windows(2) {
        acc += 0.5 * bp.dt * (w[0] + w[1]);
        int_g.push(acc);
    }
    if !acc.is_finite() {
        return Err(Error::Overflow {
            what: "int G",
            t: bp.t_end(),
        });
    }
    Ok(GbmPath {
        t_grid: bp.t_grid.clone(),
        g,
        int_g,
    })
}

/// `L = G / (1 + b int G)` from an already computed GBM path.
pub fn logistic_from_gbm(lp: &LogisticParams, gbm: &GbmPath) -> LogisticPath {
    let l = gbm
        .g
        .iter()
        .zip(&gbm.int_g)
        .map(|(g, ig)| g / (1.0 + lp.b * ig))
        .collect();
    LogisticPath {
        t_grid: gbm.t_grid.clone(),
        l,
    }
}

pub fn logistic_exact(lp: &LogisticParams, bp: &BrownianPath) -> Result<LogisticPath> {
    Ok(logistic_from_gbm(lp, &gbm_path(lp, bp)?))
}

/// Both sides of `int_0^t L = (1/b) ln(1 + b int_0^t G)` at the end of the
/// path, the left side by the trapezoid rule.
pub fn log_integral_identity(lp: &LogisticParams, bp: &BrownianPath) -> Result<(f64, f64)> {
    if lp.b <= 0.0 {
        return Err(Error::invalid("b", lp.b, "identity needs b > 0"));
    }
    let gbm = gbm_path(lp, bp)?;
    let path = logistic_from_gbm(lp, &gbm);
    let lhs: f64 = path.l.windows(2).map(|w| 0.5 * bp.dt * (w[0] + w[1])).sum();
    let int_g = *gbm.int_g.last().expect("non-empty path");
    let rhs = (lp.b * int_g).ln_1p() / lp.b;
    Ok((lhs, rhs))
}
