//! Model parameters, derived thresholds, regime classification and the
//! stationary law of the logistic comparison equation.
//!
//! The coupled system is
//!
//! ```text
//! dX = [X(a1 - b1 X) - c1 X Y / (beta + Y)] dt + sigma1 X dB1,   X(0) = x0
//! dY = [Y(-a2 - b2 Y) + c2 X Y / (beta + Y)] dt + sigma2 Y dB2,  Y(0) = y0
//! ```
//!
//! and its two comparison processes are the logistic equations
//! `dL = L(a - b L) dt + sigma L dB` obtained by dropping the interaction
//! terms (`a = a1` for the prey, `a = -a2` for the predator).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::FlatConfig;
use crate::error::{Error, Result};

/// Guard on `|a - sigma^2/2 + p sigma^2|` below which [`growth_integral`]
/// switches to its series expansion.
pub const SINGULARITY_EPS: f64 = 1e-9;

/// Config keys, in canonical order.
pub const PARAM_KEYS: [&str; 11] = [
    "a1", "b1", "c1", "a2", "b2", "c2", "beta", "sigma1", "sigma2", "x0", "y0",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub a1: f64,
    pub b1: f64,
    pub c1: f64,
    pub a2: f64,
    pub b2: f64,
    pub c2: f64,
    pub beta: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub x0: f64,
    pub y0: f64,
}

impl ModelParams {
    /// Initial densities used by the two-noise-level presets.
    pub const FIGURE2_X0: f64 = 2.0;
    pub const FIGURE2_Y0: f64 = 1.5;

    /// Reference parameter set (a1=1, b1=0.1, c1=6, a2=2, b2=0.5,
    /// c2=0.9, beta=5) at the given noise intensities.
    pub fn figure2(sigma1: f64, sigma2: f64) -> Self {
        ModelParams {
            a1: 1.0,
            b1: 0.1,
            c1: 6.0,
            a2: 2.0,
            b2: 0.5,
            c2: 0.9,
            beta: 5.0,
            sigma1,
            sigma2,
            x0: Self::FIGURE2_X0,
            y0: Self::FIGURE2_Y0,
        }
    }

    fn fields(&self) -> [(&'static str, f64); 11] {
        [
            ("a1", self.a1),
            ("b1", self.b1),
            ("c1", self.c1),
            ("a2", self.a2),
            ("b2", self.b2),
            ("c2", self.c2),
            ("beta", self.beta),
            ("sigma1", self.sigma1),
            ("sigma2", self.sigma2),
            ("x0", self.x0),
            ("y0", self.y0),
        ]
    }

    /// Every field finite and strictly positive.
    pub fn validate(&self) -> Result<()> {
        for (name, value) in self.fields() {
            if !value.is_finite() {
                return Err(Error::invalid(name, value, "must be finite"));
            }
            if value <= 0.0 {
                return Err(Error::invalid(name, value, "must be strictly positive"));
            }
        }
        Ok(())
    }

    /// Like [`validate`](Self::validate) but admits the limiting cases
    /// `c1 = 0`, `c2 = 0`, `sigma1 = 0`, `sigma2 = 0` (no interaction, no
    /// noise). Used for degenerate reference runs.
    pub fn validate_limits(&self) -> Result<()> {
        for (name, value) in self.fields() {
            if !value.is_finite() {
                return Err(Error::invalid(name, value, "must be finite"));
            }
            let may_vanish = matches!(name, "c1" | "c2" | "sigma1" | "sigma2");
            if value < 0.0 || (value == 0.0 && !may_vanish) {
                return Err(Error::invalid(name, value, "must be strictly positive"));
            }
        }
        Ok(())
    }

    /// Exponent `c2 / (beta b1)` of the predator envelope.
    pub fn envelope_exponent(&self) -> f64 {
        self.c2 / (self.beta * self.b1)
    }

    /// Prey comparison process `L1`.
    pub fn prey_logistic(&self) -> LogisticParams {
        LogisticParams {
            a: self.a1,
            b: self.b1,
            sigma: self.sigma1,
            lambda: self.x0,
        }
    }

    /// Predator comparison process `L2` (drift rate `-a2`).
    pub fn predator_logistic(&self) -> LogisticParams {
        LogisticParams {
            a: -self.a2,
            b: self.b2,
            sigma: self.sigma2,
            lambda: self.y0,
        }
    }

    pub fn from_flat(cfg: &FlatConfig) -> Result<Self> {
        let p = ModelParams {
            a1: cfg.require_f64("a1")?,
            b1: cfg.require_f64("b1")?,
            c1: cfg.require_f64("c1")?,
            a2: cfg.require_f64("a2")?,
            b2: cfg.require_f64("b2")?,
            c2: cfg.require_f64("c2")?,
            beta: cfg.require_f64("beta")?,
            sigma1: cfg.require_f64("sigma1")?,
            sigma2: cfg.require_f64("sigma2")?,
            x0: cfg.require_f64("x0")?,
            y0: cfg.require_f64("y0")?,
        };
        p.validate_limits()?;
        Ok(p)
    }

    /// Parses a config containing exactly the eleven parameter keys.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let cfg = FlatConfig::parse(text)?;
        cfg.reject_unknown(&PARAM_KEYS)?;
        Self::from_flat(&cfg)
    }

    /// Shortest round-tripping decimal form, one key per line.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        for (name, value) in self.fields() {
            out.push_str(&format!("{name} = {value:?}\n"));
        }
        out
    }
}

/// Threshold `sigma1^2/2 + b1 beta a2 / c2 + b1 beta sigma2^2 / (2 c2)`
/// separating predator extinction from possible coexistence.
pub fn phi(params: &ModelParams) -> f64 {
    let ModelParams {
        b1,
        a2,
        c2,
        beta,
        sigma1,
        sigma2,
        ..
    } = *params;
    0.5 * sigma1 * sigma1 + b1 * beta * a2 / c2 + b1 * beta * sigma2 * sigma2 / (2.0 * c2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegimeTag {
    PreyExtinction,
    PredatorExtinction,
    Stationary,
    Unclassified,
}

impl fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RegimeTag::PreyExtinction => "PreyExtinction",
            RegimeTag::PredatorExtinction => "PredatorExtinction",
            RegimeTag::Stationary => "Stationary",
            RegimeTag::Unclassified => "Unclassified",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Regime {
    pub tag: RegimeTag,
    pub phi: f64,
    /// `phi / (1 - sigma2^2/(2 c2) - a2/c2)`, defined only when
    /// `a2 + sigma2^2/2 < c2`.
    pub stationary_threshold: Option<f64>,
}

impl Regime {
    /// Whether `a1 < phi` holds strictly, i.e. the predator dies out.
    pub fn below_phi(&self, a1: f64) -> bool {
        a1 < self.phi
    }
}

/// Asymptotic regime of the system. Boundary equalities are left
/// unclassified.
pub fn classify_regime(params: &ModelParams) -> Regime {
    let phi = phi(params);
    let half_var1 = 0.5 * params.sigma1 * params.sigma1;
    let predator_margin = params.a2 + 0.5 * params.sigma2 * params.sigma2;
    let stationary_threshold = if predator_margin < params.c2 {
        let denom = 1.0 - predator_margin / params.c2;
        Some(phi / denom)
    } else {
        None
    };
    let a1 = params.a1;
    let tag = if a1 < half_var1 {
        RegimeTag::PreyExtinction
    } else if half_var1 < a1 && a1 < phi {
        RegimeTag::PredatorExtinction
    } else if stationary_threshold.is_some_and(|thr| a1 > thr) {
        RegimeTag::Stationary
    } else {
        RegimeTag::Unclassified
    };
    Regime {
        tag,
        phi,
        stationary_threshold,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NovikovCheck {
    /// `c2 sigma1 / (b1 sigma2)`.
    pub threshold: f64,
    /// `beta >= threshold`; false means the drift-removal measure change is
    /// not licensed.
    pub satisfied: bool,
}

pub fn novikov_threshold(params: &ModelParams) -> NovikovCheck {
    let threshold = params.c2 * params.sigma1 / (params.b1 * params.sigma2);
    NovikovCheck {
        threshold,
        satisfied: params.beta >= threshold,
    }
}

/// Parameters of `dL = L(a - b L) dt + sigma L dB`, `L(0) = lambda`.
///
/// `a` may be negative. `b = 0` (geometric Brownian motion) and
/// `sigma = 0` (deterministic logistic) are accepted as limiting cases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticParams {
    pub a: f64,
    pub b: f64,
    pub sigma: f64,
    pub lambda: f64,
}

impl LogisticParams {
    pub fn new(a: f64, b: f64, sigma: f64, lambda: f64) -> Result<Self> {
        let lp = LogisticParams {
            a,
            b,
            sigma,
            lambda,
        };
        lp.validate()?;
        Ok(lp)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.a.is_finite() {
            return Err(Error::invalid("a", self.a, "must be finite"));
        }
        for (name, value) in [("b", self.b), ("sigma", self.sigma)] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::invalid(
                    name,
                    value,
                    "must be finite and non-negative",
                ));
            }
        }
        if !self.lambda.is_finite() || self.lambda <= 0.0 {
            return Err(Error::invalid(
                "lambda",
                self.lambda,
                "must be strictly positive",
            ));
        }
        Ok(())
    }

    /// Log-drift `a - sigma^2/2` of the geometric Brownian part.
    pub fn log_drift(&self) -> f64 {
        self.a - 0.5 * self.sigma * self.sigma
    }
}

/// `lambda * (exp(rate t) - 1) / rate`, the integral of
/// `lambda exp(rate r)` over `[0, t]`, with the removable singularity at
/// `rate = 0` handled by a second-order series.
pub fn growth_integral(lambda: f64, rate: f64, t: f64) -> f64 {
    if rate.abs() < SINGULARITY_EPS {
        let x = rate * t;
        lambda * t * (1.0 + x / 2.0 + x * x / 6.0)
    } else {
        lambda * (rate * t).exp_m1() / rate
    }
}

/// The constants entering the moment and distribution-function brackets
/// of the logistic law at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticConstants {
    /// `lambda^p exp(p(a - sigma^2/2)t + p^2 sigma^2 t / 2)`.
    pub k_p: f64,
    /// `lambda (exp((a - sigma^2/2 + p sigma^2)t) - 1) / (a - sigma^2/2 + p sigma^2)`.
    pub big_k_p: f64,
    /// `lambda exp((a - sigma^2/2) t)`.
    pub k: f64,
    /// `lambda (exp((a - sigma^2/2)t) - 1) / (a - sigma^2/2)`.
    pub big_k: f64,
}

pub fn logistic_constants(lp: &LogisticParams, p: f64, t: f64) -> LogisticConstants {
    let mu = lp.log_drift();
    let var = lp.sigma * lp.sigma;
    let k_p = (p * lp.lambda.ln() + p * mu * t + 0.5 * p * p * var * t).exp();
    LogisticConstants {
        k_p,
        big_k_p: growth_integral(lp.lambda, mu + p * var, t),
        k: lp.lambda * (mu * t).exp(),
        big_k: growth_integral(lp.lambda, mu, t),
    }
}

/// Gamma law parameterized by shape and rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaLaw {
    pub shape: f64,
    pub rate: f64,
}

impl GammaLaw {
    pub fn mean(&self) -> f64 {
        self.shape / self.rate
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        statrs::function::gamma::gamma_lr(self.shape, self.rate * x)
    }
}

/// Stationary law `Gamma(2a/sigma^2 - 1, 2b/sigma^2)` of the logistic
/// equation; requires `a > sigma^2/2` and `b, sigma > 0`.
pub fn gamma_stationary(lp: &LogisticParams) -> Result<GammaLaw> {
    let var = lp.sigma * lp.sigma;
    if var <= 0.0 {
        return Err(Error::invalid(
            "sigma",
            lp.sigma,
            "stationary law needs sigma > 0",
        ));
    }
    if lp.b <= 0.0 {
        return Err(Error::invalid("b", lp.b, "stationary law needs b > 0"));
    }
    if lp.a <= 0.5 * var {
        return Err(Error::OutOfDomain(format!(
            "no stationary law for a = {} <= sigma^2/2 = {}",
            lp.a,
            0.5 * var
        )));
    }
    Ok(GammaLaw {
        shape: 2.0 * lp.a / var - 1.0,
        rate: 2.0 * lp.b / var,
    })
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn params() -> impl Strategy<Value = ModelParams> {
        (
            prop::array::uniform9(0.01f64..5.0),
            0.01f64..5.0,
            0.01f64..5.0,
        )
            .prop_map(|(v, x0, y0)| ModelParams {
                a1: v[0],
                b1: v[1],
                c1: v[2],
                a2: v[3],
                b2: v[4],
                c2: v[5],
                beta: v[6],
                sigma1: v[7],
                sigma2: v[8],
                x0,
                y0,
            })
    }

    proptest! {
        #[test]
        fn tag_invariant_under_time_rescaling(p in params(), scale in 0.1f64..10.0) {
            let s = scale.sqrt();
            let q = ModelParams {
                a1: p.a1 * scale,
                a2: p.a2 * scale,
                c1: p.c1 * scale,
                c2: p.c2 * scale,
                b1: p.b1 * scale,
                b2: p.b2 * scale,
                sigma1: p.sigma1 * s,
                sigma2: p.sigma2 * s,
                ..p
            };
            let (r, rq) = (classify_regime(&p), classify_regime(&q));
            // Skip draws within rounding of a boundary.
            let margin = |r: &Regime, a1: f64, v: f64| {
                let mut m = (a1 - 0.5 * v).abs().min((a1 - r.phi).abs());
                if let Some(thr) = r.stationary_threshold { m = m.min((a1 - thr).abs()); }
                m / a1.max(r.phi)
            };
            prop_assume!(margin(&r, p.a1, p.sigma1 * p.sigma1) > 1e-9);
            prop_assert_eq!(r.tag, rq.tag);
        }

        #[test]
        fn extinction_tags_partition(p in params()) {
            let half = 0.5 * p.sigma1 * p.sigma1;
            let r = classify_regime(&p);
            prop_assume!(p.a1 != half && p.a1 < r.phi);
            let prey = r.tag == RegimeTag::PreyExtinction;
            let pred = r.tag == RegimeTag::PredatorExtinction;
            prop_assert!(prey ^ pred);
        }

        #[test]
        fn gamma_mean_identity(a in 0.01f64..5.0, b in 0.01f64..5.0, sigma in 0.01f64..2.0) {
            let lp = LogisticParams { a, b, sigma, lambda: 1.0 };
            prop_assume!(a > 0.5 * sigma * sigma * (1.0 + 1e-9));
            let g = gamma_stationary(&lp).unwrap();
            let expected = (a - 0.5 * sigma * sigma) / b;
            prop_assert!((g.mean() - expected).abs() <= 1e-10 * expected.max(1.0));
        }

        #[test]
        fn config_round_trips(p in params()) {
            prop_assert_eq!(ModelParams::from_config_str(&p.to_config_string()).unwrap(), p);
        }
    }
}
