//! Log-coordinate Euler scheme for the coupled system and for the two
//! logistic comparison equations, all driven by the same increments.
//!
//! For `dZ = Z f(Z) dt + sigma Z dB` the scheme advances
//! `ln Z += (f(Z) - sigma^2/2) dt + sigma dB`, so every state stays
//! positive and the geometric Brownian part is integrated exactly.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::brownian::BrownianPath;
use crate::error::{Error, Result};
use crate::logistic::{gbm_path, logistic_exact, MAX_LOG};
use crate::model::{LogisticParams, ModelParams};

/// Time-aligned paths of the system, its comparison processes and the GBM
/// building blocks on one noise realization.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryBundle {
    pub t_grid: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub l1: Vec<f64>,
    pub l2: Vec<f64>,
    pub g1: Vec<f64>,
    pub g2: Vec<f64>,
    pub int_g1: Vec<f64>,
    pub int_g2: Vec<f64>,
    pub seeds: (u64, u64),
    pub dt: f64,
}

impl TrajectoryBundle {
    pub fn len(&self) -> usize {
        self.t_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t_grid.is_empty()
    }
}

/// Seeds of the two drivers of path `index` in a batch starting at
/// `seed_base`. Distinct paths never share a stream.
pub fn path_seeds(seed_base: u64, index: u64) -> (u64, u64) {
    let k = seed_base.wrapping_add(index).wrapping_mul(2);
    (k, k.wrapping_add(1))
}

#[inline]
fn log_step(ln_z: f64, rate: f64, dt: f64, sigma: f64, db: f64) -> f64 {
    ln_z + rate * dt + sigma * db
}

fn checked_exp(ln_z: f64, what: &'static str, t: f64) -> Result<f64> {
    if ln_z > MAX_LOG || ln_z.is_nan() {
        Err(Error::Overflow { what, t })
    } else {
        Ok(ln_z.exp())
    }
}

/// Simulates the coupled system and both logistic comparison equations.
///
/// `bp1` drives the prey, `bp2` the predator; correlated drivers can be
/// built with [`BrownianPath::correlated_with`].
pub fn simulate_system(
    params: &ModelParams,
    bp1: &BrownianPath,
    bp2: &BrownianPath,
) -> Result<TrajectoryBundle> {
    params.validate_limits()?;
    bp1.check_same_grid(bp2)?;
    let ModelParams {
        a1,
        b1,
        c1,
        a2,
        b2,
        c2,
        beta,
        sigma1,
        sigma2,
        x0,
        y0,
    } = *params;
    let mu1 = a1 - 0.5 * sigma1 * sigma1;
    let mu2 = -a2 - 0.5 * sigma2 * sigma2;
    let dt = bp1.dt;
    let n = bp1.n_steps();

    let mut x = Vec::with_capacity(n + 1);
    let mut y = Vec::with_capacity(n + 1);
    let mut l1 = Vec::with_capacity(n + 1);
    let mut l2 = Vec::with_capacity(n + 1);
    let (mut lx, mut ly, mut ll1, mut ll2) = (x0.ln(), y0.ln(), x0.ln(), y0.ln());
    let (mut xv, mut yv, mut l1v, mut l2v) = (x0, y0, x0, y0);
    x.push(xv);
    y.push(yv);
    l1.push(l1v);
    l2.push(l2v);

    for i in 0..n {
        let (db1, db2) = (bp1.increments[i], bp2.increments[i]);
        let t = bp1.t_grid[i + 1];
        let prey_loss = c1 * yv / (beta + yv);
        let predator_gain = c2 * xv / (beta + yv);
        lx = log_step(lx, mu1 - b1 * xv - prey_loss, dt, sigma1, db1);
        ly = log_step(ly, mu2 - b2 * yv + predator_gain, dt, sigma2, db2);
        ll1 = log_step(ll1, mu1 - b1 * l1v, dt, sigma1, db1);
        ll2 = log_step(ll2, mu2 - b2 * l2v, dt, sigma2, db2);
        xv = checked_exp(lx, "X", t)?;
        yv = checked_exp(ly, "Y", t)?;
        l1v = checked_exp(ll1, "L1", t)?;
        l2v = checked_exp(ll2, "L2", t)?;
        x.push(xv);
        y.push(yv);
        l1.push(l1v);
        l2.push(l2v);
    }

    let gbm1 = gbm_path(&params.prey_logistic(), bp1)?;
    let gbm2 = gbm_path(&params.predator_logistic(), bp2)?;
    Ok(TrajectoryBundle {
        t_grid: bp1.t_grid.clone(),
        x,
        y,
        l1,
        l2,
        g1: gbm1.g,
        g2: gbm2.g,
        int_g1: gbm1.int_g,
        int_g2: gbm2.int_g,
        seeds: (bp1.seed, bp2.seed),
        dt,
    })
}

/// Samples both drivers from `path_seeds(seed_base, index)` and simulates.
/// With `rho != 0` the predator driver is `rho B1 + sqrt(1 - rho^2) B_perp`.
pub fn simulate_seeded(
    params: &ModelParams,
    t_end: f64,
    n_steps: usize,
    seed_base: u64,
    index: u64,
    rho: f64,
) -> Result<TrajectoryBundle> {
    let (s1, s2) = path_seeds(seed_base, index);
    let bp1 = BrownianPath::sample(t_end, n_steps, s1)?;
    let mut bp2 = BrownianPath::sample(t_end, n_steps, s2)?;
    if rho != 0.0 {
        bp2 = bp1.correlated_with(&bp2, rho)?;
    }
    simulate_system(params, &bp1, &bp2)
}

/// Runs the system scheme without storing paths, calling
/// `observe(step, x, y)` at every grid point including `step = 0`.
///
/// Increments are drawn exactly as [`simulate_seeded`] draws them, so the
/// observed states agree bit-for-bit with its `x` and `y`.
pub fn simulate_streaming(
    params: &ModelParams,
    t_end: f64,
    n_steps: usize,
    seed_base: u64,
    index: u64,
    rho: f64,
    mut observe: impl FnMut(usize, f64, f64),
) -> Result<()> {
    params.validate_limits()?;
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::invalid(
            "t_end",
            t_end,
            "must be positive and finite",
        ));
    }
    if n_steps == 0 {
        return Err(Error::invalid("n_steps", 0.0, "need at least one step"));
    }
    if !(-1.0..=1.0).contains(&rho) {
        return Err(Error::invalid("rho", rho, "must lie in [-1, 1]"));
    }
    let (s1, s2) = path_seeds(seed_base, index);
    let mut rng1 = ChaCha8Rng::seed_from_u64(s1);
    let mut rng2 = ChaCha8Rng::seed_from_u64(s2);
    let dt = t_end / n_steps as f64;
    let sd = dt.sqrt();
    let perp = (1.0 - rho * rho).sqrt();
    let ModelParams {
        a1,
        b1,
        c1,
        a2,
        b2,
        c2,
        beta,
        sigma1,
        sigma2,
        x0,
        y0,
    } = *params;
    let mu1 = a1 - 0.5 * sigma1 * sigma1;
    let mu2 = -a2 - 0.5 * sigma2 * sigma2;
    let (mut lx, mut ly) = (x0.ln(), y0.ln());
    let (mut xv, mut yv) = (x0, y0);
    observe(0, xv, yv);
    for i in 1..=n_steps {
        let z1: f64 = StandardNormal.sample(&mut rng1);
        let z2: f64 = StandardNormal.sample(&mut rng2);
        let db1 = sd * z1;
        let mut db2 = sd * z2;
        if rho != 0.0 {
            db2 = rho * db1 + perp * db2;
        }
        let prey_loss = c1 * yv / (beta + yv);
        let predator_gain = c2 * xv / (beta + yv);
        lx = log_step(lx, mu1 - b1 * xv - prey_loss, dt, sigma1, db1);
        ly = log_step(ly, mu2 - b2 * yv + predator_gain, dt, sigma2, db2);
        let t = i as f64 * dt;
        xv = checked_exp(lx, "X", t)?;
        yv = checked_exp(ly, "Y", t)?;
        observe(i, xv, yv);
    }
    Ok(())
}

/// `(X(t_end), Y(t_end))` of path `index`.
pub fn simulate_terminal(
    params: &ModelParams,
    t_end: f64,
    n_steps: usize,
    seed_base: u64,
    index: u64,
    rho: f64,
) -> Result<(f64, f64)> {
    let mut last = (params.x0, params.y0);
    simulate_streaming(params, t_end, n_steps, seed_base, index, rho, |_, x, y| {
        last = (x, y);
    })?;
    Ok(last)
}

/// Log-Euler solution of the logistic equation along `bp`.
pub fn euler_logistic(lp: &LogisticParams, bp: &BrownianPath) -> Result<Vec<f64>> {
    lp.validate()?;
    let mu = lp.log_drift();
    let mut ln_l = lp.lambda.ln();
    let mut l = lp.lambda;
    let mut out = Vec::with_capacity(bp.n_steps() + 1);
    out.push(l);
    for (i, db) in bp.increments.iter().enumerate() {
        ln_l = log_step(ln_l, mu - lp.b * l, bp.dt, lp.sigma, *db);
        l = checked_exp(ln_l, "L", bp.t_grid[i + 1])?;
        out.push(l);
    }
    Ok(out)
}

/// Terminal absolute errors of the log-Euler logistic solution against the
/// explicit formula evaluated on `bp`, for step sizes
/// `dt_0 > dt_0/2 > ... > bp.dt` (coarsest first), `dt_0 = bp.dt * 2^(refinements-1)`.
pub fn strong_error_probe(
    lp: &LogisticParams,
    bp: &BrownianPath,
    refinements: usize,
) -> Result<Vec<f64>> {
    if refinements < 2 {
        return Err(Error::invalid(
            "refinements",
            refinements as f64,
            "need at least two levels",
        ));
    }
    let reference = *logistic_exact(lp, bp)?.l.last().expect("non-empty path");
    (0..refinements)
        .map(|k| {
            let factor = 1usize << (refinements - 1 - k);
            let coarse = bp.coarsen(factor)?;
            let euler = euler_logistic(lp, &coarse)?;
            Ok((euler.last().expect("non-empty path") - reference).abs())
        })
        .collect()
}
