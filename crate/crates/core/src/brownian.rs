//! Discretized Brownian paths with running extrema, and the closed-form
//! densities of `B(t)`, its running maximum/minimum and their joint laws.

use std::f64::consts::PI;

use libm::erfc;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// A Brownian trajectory on the uniform grid `t_i = i * dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct BrownianPath {
    pub t_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub increments: Vec<f64>,
    pub run_max: Vec<f64>,
    pub run_min: Vec<f64>,
    pub seed: u64,
    pub dt: f64,
}

impl BrownianPath {
    /// Samples `n_steps` i.i.d. `N(0, dt)` increments from a ChaCha8 stream
    /// seeded with `seed`.
    pub fn sample(t_end: f64, n_steps: usize, seed: u64) -> Result<Self> {
        check_grid(t_end, n_steps)?;
        let dt = t_end / n_steps as f64;
        let sd = dt.sqrt();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let increments = (0..n_steps)
            .map(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                sd * z
            })
            .collect();
        Self::from_increments(dt, increments, seed)
    }

    /// Builds a path from given increments on the grid `i * dt`.
    pub fn from_increments(dt: f64, increments: Vec<f64>, seed: u64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::invalid("dt", dt, "must be positive and finite"));
        }
        if increments.is_empty() {
            return Err(Error::invalid("n_steps", 0.0, "need at least one step"));
        }
        let n = increments.len();
        let mut t_grid = Vec::with_capacity(n + 1);
        let mut values = Vec::with_capacity(n + 1);
        let mut run_max = Vec::with_capacity(n + 1);
        let mut run_min = Vec::with_capacity(n + 1);
        let (mut b, mut hi, mut lo) = (0.0f64, 0.0f64, 0.0f64);
        t_grid.push(0.0);
        values.push(0.0);
        run_max.push(0.0);
        run_min.push(0.0);
        for (i, db) in increments.iter().enumerate() {
            b += db;
            hi = hi.max(b);
            lo = lo.min(b);
            t_grid.push((i + 1) as f64 * dt);
            values.push(b);
            run_max.push(hi);
            run_min.push(lo);
        }
        Ok(BrownianPath {
            t_grid,
            values,
            increments,
            run_max,
            run_min,
            seed,
            dt,
        })
    }

    /// `rho * self + sqrt(1 - rho^2) * other`, a Brownian motion with
    /// correlation `rho` to `self`.
    pub fn correlated_with(&self, other: &BrownianPath, rho: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&rho) {
            return Err(Error::invalid("rho", rho, "must lie in [-1, 1]"));
        }
        self.check_same_grid(other)?;
        let s = (1.0 - rho * rho).sqrt();
        let incs = self
            .increments
            .iter()
            .zip(&other.increments)
            .map(|(a, b)| rho * a + s * b)
            .collect();
        Self::from_increments(self.dt, incs, other.seed)
    }

    /// The same path observed every `factor` steps.
    pub fn coarsen(&self, factor: usize) -> Result<Self> {
        if factor == 0 || self.n_steps() % factor != 0 {
            return Err(Error::GridMismatch(format!(
                "cannot coarsen {} steps by {factor}",
                self.n_steps()
            )));
        }
        let incs = self
            .increments
            .chunks_exact(factor)
            .map(|c| c.iter().sum())
            .collect();
        Self::from_increments(self.dt * factor as f64, incs, self.seed)
    }

    pub fn n_steps(&self) -> usize {
        self.increments.len()
    }

    pub fn t_end(&self) -> f64 {
        *self.t_grid.last().expect("path has at least one step")
    }

    pub fn check_same_grid(&self, other: &BrownianPath) -> Result<()> {
        if self.n_steps() != other.n_steps() || self.dt != other.dt {
            return Err(Error::GridMismatch(format!(
                "{} steps of {} vs {} steps of {}",
                self.n_steps(),
                self.dt,
                other.n_steps(),
                other.dt
            )));
        }
        Ok(())
    }
}

fn check_grid(t_end: f64, n_steps: usize) -> Result<()> {
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
    Ok(())
}

/// Samples a Brownian path on `[0, t_end]` with `n_steps` uniform steps.
pub fn sample_path(t_end: f64, n_steps: usize, seed: u64) -> Result<BrownianPath> {
    BrownianPath::sample(t_end, n_steps, seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremum {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JointWith {
    /// `(B(t), M(t))` on `{v > 0, u < v}`.
    Max,
    /// `(B(t), m(t))` on `{v < 0, u > v}`.
    Min,
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid("t", t, "must be positive and finite"))
    }
}

/// Density of `N(0, t)` at `r`.
pub fn gaussian_density(r: f64, t: f64) -> f64 {
    (-0.5 * r * r / t).exp() / (2.0 * PI * t).sqrt()
}

/// Standard normal distribution function.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Density of the running maximum (`2 N(z)` on `z >= 0`) or minimum
/// (`2 N(z)` on `z <= 0`) of Brownian motion at time `t`.
pub fn density_extremum(z: f64, t: f64, which: Extremum) -> Result<f64> {
    check_time(t)?;
    let inside = match which {
        Extremum::Max => z >= 0.0,
        Extremum::Min => z <= 0.0,
    };
    Ok(if inside {
        2.0 * gaussian_density(z, t)
    } else {
        0.0
    })
}

/// Joint density of `B(t)` with its running maximum or minimum, evaluated
/// at `(u, v)`; zero outside the support.
pub fn joint_density(u: f64, v: f64, t: f64, which: JointWith) -> Result<f64> {
    check_time(t)?;
    let arg = match which {
        JointWith::Max if v > 0.0 && u < v => 2.0 * v - u,
        JointWith::Min if v < 0.0 && u > v => u - 2.0 * v,
        _ => return Ok(0.0),
    };
    Ok(wedge_density(arg, t))
}

/// `-2 N'(r) = 2 r / t * N(r)`, the joint density written in terms of the
/// positive argument `r` (`2v - u` or `u - 2v`).
pub(crate) fn wedge_density(r: f64, t: f64) -> f64 {
    2.0 * r / t * gaussian_density(r, t)
}
