//! Seeded Monte Carlo estimators for moments and distribution functions of
//! the system and of the logistic law, used as an independent oracle for
//! the quadrature brackets.
//!
//! Path `i` of a batch with base seed `s` always draws its noise from
//! [`path_seeds`]`(s, i)`, so a batch of `n1 + n2` paths is the
//! concatenation of batches `(s, n1)` and `(s + n1, n2)`.

use serde::Serialize;

use crate::brownian::BrownianPath;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::logistic::logistic_exact;
use crate::model::{LogisticParams, ModelParams};
use crate::sim::{euler_logistic, path_seeds, simulate_streaming, simulate_terminal};

pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_SYSTEM_PATHS: usize = 10_000;
pub const DEFAULT_LOGISTIC_PATHS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(n_paths)`.
    pub std_err: f64,
    pub n_paths: usize,
    pub seed_base: u64,
}

impl McEstimate {
    /// Mean and standard error of `samples`.
    pub fn from_samples(samples: &[f64], seed_base: u64) -> Self {
        let mut acc = Welford::default();
        for &x in samples {
            acc.push(x);
        }
        acc.estimate(seed_base)
    }

    /// Pools two estimates over disjoint path sets; `self` keeps its seed.
    pub fn merge(&self, other: &McEstimate) -> McEstimate {
        let a = Welford::from_estimate(self);
        let b = Welford::from_estimate(other);
        a.merge(&b).estimate(self.seed_base)
    }

    /// Whether `value` is within `k` standard errors plus `slack`.
    pub fn agrees_with(&self, value: f64, k: f64, slack: f64) -> bool {
        (self.mean - value).abs() <= k * self.std_err + slack
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Welford {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn from_estimate(e: &McEstimate) -> Self {
        let n = e.n_paths;
        let var = e.std_err * e.std_err * n as f64;
        Welford {
            n,
            mean: e.mean,
            m2: var * n.saturating_sub(1) as f64,
        }
    }

    fn merge(&self, o: &Welford) -> Welford {
        let n = self.n + o.n;
        if n == 0 {
            return Welford::default();
        }
        let d = o.mean - self.mean;
        Welford {
            n,
            mean: self.mean + d * o.n as f64 / n as f64,
            m2: self.m2 + o.m2 + d * d * (self.n as f64) * (o.n as f64) / n as f64,
        }
    }

    fn estimate(&self, seed_base: u64) -> McEstimate {
        let std_err = if self.n > 1 {
            (self.m2.max(0.0) / (self.n - 1) as f64 / self.n as f64).sqrt()
        } else {
            0.0
        };
        McEstimate {
            mean: self.mean,
            std_err,
            n_paths: self.n,
            seed_base,
        }
    }
}

/// Simulation settings shared by the estimators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McConfig {
    pub dt: f64,
    /// Correlation between the two drivers.
    pub rho: f64,
    pub exec: Exec,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            dt: DEFAULT_DT,
            rho: 0.0,
            exec: Exec::default(),
        }
    }
}

impl McConfig {
    /// Number of steps to reach `t`, which must lie on the grid.
    pub fn steps_to(&self, t: f64) -> Result<usize> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::invalid("t", t, "must be positive and finite"));
        }
        let n = (t / self.dt).round();
        if n < 1.0 || (n * self.dt - t).abs() > 1e-9 * t.max(1.0) {
            return Err(Error::invalid("t", t, "not on the simulation grid"));
        }
        Ok(n as usize)
    }
}

fn check_paths(n_paths: usize) -> Result<()> {
    if n_paths < 2 {
        return Err(Error::invalid(
            "n_paths",
            n_paths as f64,
            "need at least two paths",
        ));
    }
    Ok(())
}

/// `(X(t), Y(t))` for paths `0..n_paths`, in path order.
pub fn system_terminal_samples(
    params: &ModelParams,
    t: f64,
    n_paths: usize,
    seed_base: u64,
    cfg: &McConfig,
) -> Result<Vec<(f64, f64)>> {
    let n_steps = cfg.steps_to(t)?;
    cfg.exec
        .map_indexed(n_paths, |i| {
            simulate_terminal(params, t, n_steps, seed_base, i as u64, cfg.rho)
        })
        .into_iter()
        .collect()
}

/// `L(t)` from the explicit formula on paths `0..n_paths`; path `i` uses the
/// first seed of `path_seeds(seed_base, i)`.
pub fn logistic_terminal_samples(
    lp: &LogisticParams,
    t: f64,
    n_paths: usize,
    seed_base: u64,
    cfg: &McConfig,
) -> Result<Vec<f64>> {
    let n_steps = cfg.steps_to(t)?;
    cfg.exec
        .map_indexed(n_paths, |i| {
            let (seed, _) = path_seeds(seed_base, i as u64);
            let bp = BrownianPath::sample(t, n_steps, seed)?;
            let l = logistic_exact(lp, &bp)?;
            Ok(*l.l.last().expect("non-empty path"))
        })
        .into_iter()
        .collect()
}

/// Estimate of `E[X(t)^p Y(t)^q]`.
pub fn mc_moment(
    params: &ModelParams,
    p: f64,
    q: f64,
    t: f64,
    n_paths: usize,
    seed_base: u64,
    cfg: &McConfig,
) -> Result<McEstimate> {
    check_paths(n_paths)?;
    if p == 0.0 && q == 0.0 {
        return Ok(McEstimate {
            mean: 1.0,
            std_err: 0.0,
            n_paths,
            seed_base,
        });
    }
    let samples = system_terminal_samples(params, t, n_paths, seed_base, cfg)?;
    moment_of(&samples, p, q, t, seed_base)
}

/// Moment estimate from already simulated terminal states.
pub fn moment_of(
    samples: &[(f64, f64)],
    p: f64,
    q: f64,
    t: f64,
    seed_base: u64,
) -> Result<McEstimate> {
    let values: Vec<f64> = samples
        .iter()
        .map(|&(x, y)| x.powf(p) * y.powf(q))
        .collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Overflow { what: "X^p Y^q", t });
    }
    Ok(McEstimate::from_samples(&values, seed_base))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Marginal {
    X,
    Y,
    Joint,
}

/// Empirical frequency of `{X <= z1}`, `{Y <= z2}` or both, with binomial
/// standard error `sqrt(p (1 - p) / n)`.
pub fn cdf_of(
    samples: &[(f64, f64)],
    z1: f64,
    z2: f64,
    marginal: Marginal,
    seed_base: u64,
) -> McEstimate {
    let hits = samples
        .iter()
        .filter(|&&(x, y)| match marginal {
            Marginal::X => x <= z1,
            Marginal::Y => y <= z2,
            Marginal::Joint => x <= z1 && y <= z2,
        })
        .count();
    frequency(hits, samples.len(), seed_base)
}

pub fn frequency(hits: usize, n: usize, seed_base: u64) -> McEstimate {
    let p = hits as f64 / n as f64;
    McEstimate {
        mean: p,
        std_err: (p * (1.0 - p) / n as f64).sqrt(),
        n_paths: n,
        seed_base,
    }
}

/// Empirical distribution function at each `(z1, z2)` level.
pub fn mc_cdf(
    params: &ModelParams,
    levels: &[(f64, f64)],
    t: f64,
    n_paths: usize,
    seed_base: u64,
    marginal: Marginal,
    cfg: &McConfig,
) -> Result<Vec<McEstimate>> {
    check_paths(n_paths)?;
    for &(z1, z2) in levels {
        if !(z1 > 0.0 && z2 > 0.0) {
            return Err(Error::invalid(
                "level",
                z1.min(z2),
                "levels must be positive",
            ));
        }
    }
    let samples = system_terminal_samples(params, t, n_paths, seed_base, cfg)?;
    Ok(levels
        .iter()
        .map(|&(z1, z2)| cdf_of(&samples, z1, z2, marginal, seed_base))
        .collect())
}

/// Empirical `q`-quantile (nearest rank on the sorted sample).
pub fn quantile(samples: &[f64], q: f64) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let idx = ((q * s.len() as f64).ceil() as usize).clamp(1, s.len()) - 1;
    s[idx]
}

/// Time average `(1/T) int_0^T L` of the log-Euler logistic path driven by
/// `seed`, by the trapezoid rule. Returns `lambda` when `T = 0`.
pub fn mc_ergodic_average(lp: &LogisticParams, t_end: f64, dt: f64, seed: u64) -> Result<f64> {
    if t_end == 0.0 {
        return Ok(lp.lambda);
    }
    let n_steps = (t_end / dt).round().max(1.0) as usize;
    let bp = BrownianPath::sample(t_end, n_steps, seed)?;
    let path = euler_logistic(lp, &bp)?;
    Ok(trapezoid_mean(&path, bp.dt, t_end))
}

/// Time average of the prey density `X` over `[0, T]` on path `index`.
pub fn prey_time_average(
    params: &ModelParams,
    t_end: f64,
    dt: f64,
    seed_base: u64,
    index: u64,
) -> Result<f64> {
    let n_steps = (t_end / dt).round().max(1.0) as usize;
    let h = t_end / n_steps as f64;
    let mut acc = 0.0;
    let mut prev = params.x0;
    simulate_streaming(params, t_end, n_steps, seed_base, index, 0.0, |i, x, _| {
        if i > 0 {
            acc += 0.5 * h * (prev + x);
        }
        prev = x;
    })?;
    Ok(acc / t_end)
}

fn trapezoid_mean(v: &[f64], dt: f64, t_end: f64) -> f64 {
    let s: f64 = v.windows(2).map(|w| 0.5 * dt * (w[0] + w[1])).sum();
    s / t_end
}
