//! Simulation and verification toolkit for a stochastic predator-prey
//! system with a ratio-dependent (arena) functional response.
//!
//! The crate provides
//!
//! * model parameters, regime classification and derived thresholds ([`model`]);
//! * Brownian paths and the laws of their running extrema ([`brownian`]);
//! * the explicit logistic solution along a path ([`logistic`]);
//! * a positivity-preserving simulator for the coupled system ([`sim`]);
//! * almost-sure envelopes for both species ([`envelope`]);
//! * adaptive quadrature for the bound integrals ([`quadrature`]);
//! * moment and distribution-function brackets ([`bounds`]);
//! * seeded, reproducible Monte Carlo estimators ([`montecarlo`]).

#[cfg(test)]
macro_rules! assert_close {
    ($a:expr, $b:expr, $tol:expr) => {{
        let (a, b, tol): (f64, f64, f64) = ($a, $b, $tol);
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }};
}

pub mod bounds;
pub mod brownian;
pub mod config;
pub mod envelope;
pub mod error;
pub mod exec;
pub mod io;
pub mod logistic;
pub mod model;
pub mod montecarlo;
pub mod quadrature;
pub mod sim;
pub mod validation;

pub use error::{Error, Result};
pub use exec::Exec;
pub use model::{ModelParams, Regime, RegimeTag};
