//! Moment and distribution-function brackets for the logistic comparison
//! processes and for the coupled system.
//!
//! Every bound is an integral against the law of a Brownian motion and its
//! running extremum, evaluated by [`crate::quadrature`]. Notation follows
//! [`crate::model::logistic_constants`]: for a logistic law with parameters
//! `(a, b, sigma, lambda)`, `k_p, K_p` enter the moment bounds and `k, K`
//! the distribution-function bounds.
//!
//! Bounds that the underlying comparison argument only licenses in one
//! regime (`a1 < phi` or `a1 > phi`) are computed for all parameters and
//! carry a validity warning outside that regime.

use serde::{Deserialize, Serialize};

use crate::brownian::JointWith;
use crate::error::{Error, Result};
use crate::model::{
    classify_regime, growth_integral, logistic_constants, phi, LogisticConstants, LogisticParams,
    ModelParams, RegimeTag,
};
use crate::quadrature::{
    self, halfline_gauss, integrate_nested, region_integral_2d, region_integral_3d,
    QuadratureResult, DEFAULT_TOL_1D, DEFAULT_TOL_2D, DEFAULT_TOL_3D, TRUNCATION_SDS,
};

/// A validated `(lower, upper)` pair with quadrature error estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
    pub lower_err: f64,
    pub upper_err: f64,
    pub source: &'static str,
}

impl Bracket {
    fn new(lower: QuadratureResult, upper: QuadratureResult, source: &'static str) -> Result<Self> {
        let b = Bracket {
            lower: lower.value,
            upper: upper.value,
            lower_err: lower.err_est,
            upper_err: upper.err_est,
            source,
        };
        if !(b.lower.is_finite() && b.upper.is_finite()) {
            return Err(Error::OutOfDomain(format!(
                "{source}: non-finite bracket {b:?}"
            )));
        }
        if b.lower - b.lower_err > b.upper + b.upper_err {
            return Err(Error::OutOfDomain(format!(
                "{source}: inverted bracket {b:?}"
            )));
        }
        Ok(b)
    }

    /// Whether `value` lies in `[lower - slack - lower_err, upper + slack + upper_err]`.
    pub fn contains(&self, value: f64, slack: f64) -> bool {
        value >= self.lower - self.lower_err - slack && value <= self.upper + self.upper_err + slack
    }
}

/// One-sided bound with its error estimate and validity information.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bound {
    pub value: f64,
    pub err_est: f64,
    /// Regime of the parameters the bound was evaluated at.
    pub regime_tag: RegimeTag,
    /// Set when the parameters lie outside the regime in which the bound is
    /// established.
    pub validity_warning: Option<String>,
    /// Amount removed by clamping a probability into `[0, 1]`.
    pub clamped_by: f64,
}

/// Quadrature tolerances for one-, two- and three-dimensional integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tol_1d: f64,
    pub tol_2d: f64,
    pub tol_3d: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_1d: DEFAULT_TOL_1D,
            tol_2d: DEFAULT_TOL_2D,
            tol_3d: DEFAULT_TOL_3D,
        }
    }
}

impl Tolerances {
    pub fn scaled(self, factor: f64) -> Self {
        Tolerances {
            tol_1d: self.tol_1d * factor,
            tol_2d: self.tol_2d * factor,
            tol_3d: self.tol_3d * factor,
        }
    }
}

/// Which drift rate enters the predator constants `k2, K2, k_{2,q}, K_{2,q}`.
///
/// The predator comparison process has drift rate `-a2`. The `+a2` form is
/// the default; `validate` compares both against simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum K2Variant {
    /// Exponent `(a2 - sigma2^2/2) t`.
    #[default]
    AsPrinted,
    /// Exponent `-(a2 + sigma2^2/2) t`, matching the predator process.
    Corrected,
}

impl K2Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            K2Variant::AsPrinted => "as-printed",
            K2Variant::Corrected => "corrected",
        }
    }

    /// Logistic parameters whose constants are used for the predator.
    pub fn predator_params(self, params: &ModelParams) -> LogisticParams {
        let mut lp = params.predator_logistic();
        if self == K2Variant::AsPrinted {
            lp.a = params.a2;
        }
        lp
    }
}

fn check_order(name: &'static str, p: f64) -> Result<()> {
    if p.is_finite() && p >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            p,
            "moment order must be finite and >= 0",
        ))
    }
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, v, "must be positive and finite"))
    }
}

/// `int_0^inf (1 + b K e^{sign sigma z})^{-p} N_{0,t}(z) dz`.
fn damped_halfline(
    b: f64,
    big_k: f64,
    sigma: f64,
    p: f64,
    sign: f64,
    t: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    halfline_gauss(
        |z| (-p * (b * big_k * (sign * sigma * z).exp()).ln_1p()).exp(),
        t,
        tol,
    )
}

/// Bracket on `E[L(t)^p]` for the logistic law `lp`.
///
/// `upper = 2 k_p int_0^inf (1 + b e^{-sigma z} K_p)^{-p} N_{0,t}(z) dz` and
/// the lower bound uses `e^{+sigma z}`. At `p = 0` both sides are exactly 1.
pub fn logistic_moment_bracket(lp: &LogisticParams, p: f64, t: f64, tol: f64) -> Result<Bracket> {
    const SOURCE: &str = "logistic-moment";
    lp.validate()?;
    check_order("p", p)?;
    check_positive("t", t)?;
    if p == 0.0 {
        let one = QuadratureResult::exact(1.0);
        return Bracket::new(one, one, SOURCE);
    }
    let c = logistic_constants(lp, p, t);
    let scale = 2.0 * c.k_p;
    let rel_tol = tol / scale.max(1.0);
    let up = damped_halfline(lp.b, c.big_k_p, lp.sigma, p, -1.0, t, rel_tol)?;
    let lo = damped_halfline(lp.b, c.big_k_p, lp.sigma, p, 1.0, t, rel_tol)?;
    Bracket::new(scaled(lo, scale), scaled(up, scale), SOURCE)
}

fn scaled(r: QuadratureResult, s: f64) -> QuadratureResult {
    QuadratureResult {
        value: r.value * s,
        err_est: r.err_est * s.abs(),
        n_evals: r.n_evals,
    }
}

/// Wedge probability `P(k e^{sigma B(t)} / (1 + b K e^{sigma E(t)}) <= z)`
/// under the joint law of `B(t)` and its running extremum `E(t)`.
///
/// With the maximum this bounds `P(L(t) <= z)` from above, with the minimum
/// from below. The maximum case is exactly 1 once `z >= k / (b K)`.
pub fn wedge_cdf(
    c: &LogisticConstants,
    b: f64,
    sigma: f64,
    z: f64,
    t: f64,
    which: JointWith,
    tol: f64,
) -> Result<QuadratureResult> {
    check_positive("z", z)?;
    check_positive("t", t)?;
    if which == JointWith::Max && b * c.big_k > 0.0 && z >= c.k / (b * c.big_k) {
        return Ok(QuadratureResult::exact(1.0));
    }
    let (ln_k, ln_z, bk) = (c.k.ln(), z.ln(), b * c.big_k);
    region_integral_2d(
        |_, _| 1.0,
        |u, v| ln_k + sigma * u - (bk * (sigma * v).exp()).ln_1p() <= ln_z,
        t,
        which,
        tol,
    )
}

/// Bracket on `P(L(t) <= z)` for the logistic law `lp`.
pub fn logistic_cdf_bracket(lp: &LogisticParams, z: f64, t: f64, tol: f64) -> Result<Bracket> {
    lp.validate()?;
    let c = logistic_constants(lp, 1.0, t);
    let up = wedge_cdf(&c, lp.b, lp.sigma, z, t, JointWith::Max, tol)?;
    let lo = wedge_cdf(&c, lp.b, lp.sigma, z, t, JointWith::Min, tol)?;
    Bracket::new(lo, up, "logistic-cdf")
}

/// Where a system bound is licensed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Licence {
    Always,
    BelowPhi,
    AbovePhi,
}

/// Moment and distribution-function bounds for the coupled system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemBounds {
    pub params: ModelParams,
    pub variant: K2Variant,
    pub tol: Tolerances,
}

impl SystemBounds {
    pub fn new(params: ModelParams, variant: K2Variant) -> Result<Self> {
        params.validate()?;
        Ok(SystemBounds {
            params,
            variant,
            tol: Tolerances::default(),
        })
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    pub fn regime_tag(&self) -> RegimeTag {
        classify_regime(&self.params).tag
    }

    fn bound(&self, r: QuadratureResult, licence: Licence, probability: bool) -> Bound {
        let phi = phi(&self.params);
        let a1 = self.params.a1;
        let validity_warning = match licence {
            Licence::Always => None,
            Licence::BelowPhi if a1 < phi => None,
            Licence::AbovePhi if a1 > phi => None,
            Licence::BelowPhi => Some(format!(
                "established for a1 < phi; here a1 = {a1}, phi = {phi}"
            )),
            Licence::AbovePhi => Some(format!(
                "established for a1 > phi; here a1 = {a1}, phi = {phi}"
            )),
        };
        let (value, clamped_by) = if probability {
            let c = r.value.clamp(0.0, 1.0);
            (c, (r.value - c).abs())
        } else {
            (r.value, 0.0)
        };
        Bound {
            value,
            err_est: r.err_est,
            regime_tag: self.regime_tag(),
            validity_warning,
            clamped_by,
        }
    }

    fn prey(&self) -> LogisticParams {
        self.params.prey_logistic()
    }

    fn predator(&self) -> LogisticParams {
        self.variant.predator_params(&self.params)
    }

    /// Upper bound on `E[X(t)^p Y(t)^q]`, defined when
    /// `m = q c2/(beta b1) - p >= 1`:
    ///
    /// `2 k_{1,p} k_{2,q} (1 + b1 x (e^{e t} - 1)/e)^m int_0^inf (1 + b2 e^{-sigma2 z} K_{2,q})^{-q} N_{0,t}(z) dz`
    /// with `e = a1 + (q c2/(beta b1) + p - 1) sigma1^2 / 2`.
    pub fn joint_moment_upper(&self, p: f64, q: f64, t: f64) -> Result<Bound> {
        check_order("p", p)?;
        check_order("q", q)?;
        check_positive("t", t)?;
        let pr = &self.params;
        let qg = q * pr.envelope_exponent();
        let m = qg - p;
        if m < 1.0 {
            return Err(Error::OutOfDomain(format!(
                "joint moment upper bound needs q c2/(beta b1) - p >= 1, got {m}"
            )));
        }
        let c1 = logistic_constants(&self.prey(), p, t);
        let pred = self.predator();
        let c2 = logistic_constants(&pred, q, t);
        let e = pr.a1 + (qg + p - 1.0) * 0.5 * pr.sigma1 * pr.sigma1;
        let growth = (m * (pr.b1 * growth_integral(pr.x0, e, t)).ln_1p()).exp();
        let scale = 2.0 * c1.k_p * c2.k_p * growth;
        let r = damped_halfline(
            pred.b,
            c2.big_k_p,
            pred.sigma,
            q,
            -1.0,
            t,
            self.tol.tol_1d / scale.max(1.0),
        )?;
        Ok(self.bound(scaled(r, scale), Licence::Always, false))
    }

    /// Lower bound on `E[X(t)^p Y(t)^q]`:
    ///
    /// `4 e^{-p c1 t} k_{1,p} k_{2,q} int (1 + b1 e^{sigma1 z} K_{1,p})^{-p} N int (1 + b2 e^{sigma2 z} K_{2,q})^{-q} N`.
    ///
    /// Established for `a1 > phi`; the prey factor `e^{-c1 t}` holds for all
    /// parameters, so outside that regime the value is still returned, with a
    /// warning.
    pub fn joint_moment_lower(&self, p: f64, q: f64, t: f64) -> Result<Bound> {
        check_order("p", p)?;
        check_order("q", q)?;
        check_positive("t", t)?;
        if p == 0.0 && q == 0.0 {
            return Ok(self.bound(QuadratureResult::exact(1.0), Licence::AbovePhi, false));
        }
        let prey = self.prey();
        let pred = self.predator();
        let c1 = logistic_constants(&prey, p, t);
        let c2 = logistic_constants(&pred, q, t);
        let scale = 4.0 * (-p * self.params.c1 * t).exp() * c1.k_p * c2.k_p;
        let tol = self.tol.tol_1d / (2.0 * scale.max(1.0));
        let i1 = damped_halfline(prey.b, c1.big_k_p, prey.sigma, p, 1.0, t, tol)?;
        let i2 = damped_halfline(pred.b, c2.big_k_p, pred.sigma, q, 1.0, t, tol)?;
        let r = QuadratureResult {
            value: scale * i1.value * i2.value,
            err_est: scale
                * (i1.err_est * i2.value.abs()
                    + i2.err_est * i1.value.abs()
                    + i1.err_est * i2.err_est),
            n_evals: i1.n_evals + i2.n_evals,
        };
        Ok(self.bound(r, Licence::AbovePhi, false))
    }

    /// Lower bound on `E[X(t)^p]` through the predator-driven prey envelope,
    /// a three-dimensional integral over `(B1(t), M1(t), M2(t))`.
    pub fn moment_lower_x(&self, p: f64, t: f64) -> Result<Bound> {
        check_order("p", p)?;
        check_positive("t", t)?;
        if p == 0.0 {
            return Ok(self.bound(QuadratureResult::exact(1.0), Licence::BelowPhi, false));
        }
        let pr = self.params;
        let k1 = logistic_constants(&self.prey(), 0.0, t);
        let pred = self.predator();
        let k2 = logistic_constants(&pred, 0.0, t);
        let gamma = pr.envelope_exponent();
        let rate = p * pr.c1 / (pr.beta * pr.b2);
        let scale = k1.k.powf(p);
        let (b1k1, b2k2) = (pr.b1 * k1.big_k, pr.b2 * k2.big_k);
        let (s1, s2) = (pr.sigma1, pr.sigma2);
        let h = |u1: f64, v1: f64, v2: f64| {
            let d1 = (b1k1 * (s1 * v1).exp()).ln_1p();
            let d2 = (b2k2 * (s2 * v2).exp()).ln_1p();
            (p * s1 * u1 - rate * (gamma * d1).exp() * d2 - p * d1).exp()
        };
        let r = region_integral_3d(h, |_, _, _| true, t, self.tol.tol_3d / scale.max(1.0))?;
        Ok(self.bound(scaled(r, scale), Licence::BelowPhi, false))
    }

    /// Lower bound on `E[Y(t)^q]`: `2 k_{2,q} int (1 + b2 e^{sigma2 z} K_{2,q})^{-q} N`.
    pub fn moment_lower_y(&self, q: f64, t: f64) -> Result<Bound> {
        check_order("q", q)?;
        check_positive("t", t)?;
        if q == 0.0 {
            return Ok(self.bound(QuadratureResult::exact(1.0), Licence::BelowPhi, false));
        }
        let pred = self.predator();
        let c2 = logistic_constants(&pred, q, t);
        let scale = 2.0 * c2.k_p;
        let r = damped_halfline(
            pred.b,
            c2.big_k_p,
            pred.sigma,
            q,
            1.0,
            t,
            self.tol.tol_1d / scale.max(1.0),
        )?;
        Ok(self.bound(scaled(r, scale), Licence::BelowPhi, false))
    }

    fn prey_wedge(&self, z: f64, t: f64, which: JointWith, tol: f64) -> Result<QuadratureResult> {
        let lp = self.prey();
        let c = logistic_constants(&lp, 1.0, t);
        wedge_cdf(&c, lp.b, lp.sigma, z, t, which, tol)
    }

    fn predator_wedge(
        &self,
        z: f64,
        t: f64,
        which: JointWith,
        tol: f64,
    ) -> Result<QuadratureResult> {
        let lp = self.predator();
        let c = logistic_constants(&lp, 1.0, t);
        wedge_cdf(&c, lp.b, lp.sigma, z, t, which, tol)
    }

    /// Lower bound on `P(X(t) <= z1)` from `X <= L1`.
    pub fn cdf_lower_x(&self, z1: f64, t: f64) -> Result<Bound> {
        let r = self.prey_wedge(z1, t, JointWith::Max, self.tol.tol_2d)?;
        Ok(self.bound(r, Licence::Always, true))
    }

    /// Upper bound on `P(Y(t) <= z2)` from `Y >= L2`.
    pub fn cdf_upper_y(&self, z2: f64, t: f64) -> Result<Bound> {
        let r = self.predator_wedge(z2, t, JointWith::Max, self.tol.tol_2d)?;
        Ok(self.bound(r, Licence::BelowPhi, true))
    }

    /// Upper bound on `P(X(t) <= z1, Y(t) <= z2)` from `X >= L1 e^{-c1 t}` and
    /// `Y >= L2`: the product of the prey wedge at `z1 e^{c1 t}` and the
    /// predator wedge at `z2`.
    pub fn cdf_joint_upper(&self, z1: f64, z2: f64, t: f64) -> Result<Bound> {
        check_positive("z1", z1)?;
        let tol = 0.5 * self.tol.tol_2d;
        let a = self.prey_wedge(z1 * (self.params.c1 * t).exp(), t, JointWith::Max, tol)?;
        let b = self.predator_wedge(z2, t, JointWith::Max, tol)?;
        let r = QuadratureResult {
            value: a.value * b.value,
            err_est: a.err_est * b.value.abs() + b.err_est * a.value.abs() + a.err_est * b.err_est,
            n_evals: a.n_evals + b.n_evals,
        };
        Ok(self.bound(r, Licence::AbovePhi, true))
    }

    /// Upper bound on `P(X(t) <= z1)` through the predator-driven prey
    /// envelope: the probability that
    /// `k1 e^{sigma1 B1 - (c1/(beta b2)) D1^gamma ln(1 + b2 K2 e^{sigma2 M2})} / D1 <= z1`
    /// with `D1 = 1 + b1 K1 e^{sigma1 M1}`.
    pub fn cdf_upper_x(&self, z1: f64, t: f64) -> Result<Bound> {
        check_positive("z1", z1)?;
        check_positive("t", t)?;
        let pr = self.params;
        let k1 = logistic_constants(&self.prey(), 0.0, t);
        let k2 = logistic_constants(&self.predator(), 0.0, t);
        let gamma = pr.envelope_exponent();
        let rate = pr.c1 / (pr.beta * pr.b2);
        let (ln_k1, ln_z1) = (k1.k.ln(), z1.ln());
        let (b1k1, b2k2) = (pr.b1 * k1.big_k, pr.b2 * k2.big_k);
        let (s1, s2) = (pr.sigma1, pr.sigma2);
        let region = |u1: f64, v1: f64, v2: f64| {
            let d1 = (b1k1 * (s1 * v1).exp()).ln_1p();
            let d2 = (b2k2 * (s2 * v2).exp()).ln_1p();
            ln_k1 + s1 * u1 - rate * (gamma * d1).exp() * d2 - d1 <= ln_z1
        };
        let r = region_integral_3d(|_, _, _| 1.0, region, t, self.tol.tol_3d)?;
        Ok(self.bound(r, Licence::BelowPhi, true))
    }

    /// Lower bound on `P(Y(t) <= z2)` from `Y <= L2 (1 + b1 int G1)^gamma`:
    ///
    /// `(2 beta b1 / (sigma1 c2)) int_0^{zeta*} F2(zeta) N_{0,t}(h(zeta)) w/(w - 1) dzeta / zeta`
    ///
    /// with `w = (z2/zeta)^{1/gamma}`, `h = ln((w - 1)/(b1 K1)) / sigma1`,
    /// `zeta* = z2 / (1 + b1 K1)^gamma` and `F2` the lower wedge bound on the
    /// predator comparison law. The integral is taken in `r = ln(zeta*/zeta)`.
    pub fn cdf_lower_y(&self, z2: f64, t: f64) -> Result<Bound> {
        check_positive("z2", z2)?;
        check_positive("t", t)?;
        let pr = self.params;
        let gamma = pr.envelope_exponent();
        let b1k1 = pr.b1 * logistic_constants(&self.prey(), 0.0, t).big_k;
        let ln_zeta_star = z2.ln() - gamma * b1k1.ln_1p();
        let s1 = pr.sigma1;
        let sd = t.sqrt();
        // r at which h(zeta) reaches the truncation point of the Gaussian.
        let r_max = gamma * ((b1k1 * (s1 * TRUNCATION_SDS * sd).exp()).ln_1p() - b1k1.ln_1p());
        let tol = self.tol.tol_2d;
        let prefactor = 2.0 * pr.beta * pr.b1 / (s1 * pr.c2);
        let inner_tol = 0.25 * tol;
        let r = integrate_nested(
            |r| {
                let zeta = (ln_zeta_star - r).exp();
                // w = (z2/zeta)^{1/gamma} = (1 + b1 K1) e^{r/gamma}
                let w = (b1k1.ln_1p() + r / gamma).exp();
                let h = ((w - 1.0) / b1k1).ln() / s1;
                let weight = prefactor * gaussian(h, t) * w / (w - 1.0);
                if weight == 0.0 || zeta <= 0.0 {
                    return Ok(QuadratureResult::exact(0.0));
                }
                let f2 = self.predator_wedge(zeta, t, JointWith::Min, inner_tol)?;
                Ok(QuadratureResult {
                    value: weight * f2.value,
                    err_est: weight * f2.err_est,
                    n_evals: f2.n_evals,
                })
            },
            0.0,
            r_max,
            0.75 * tol,
        )?;
        let tail = 2.0 * quadrature::phi_cdf(-TRUNCATION_SDS);
        let r = QuadratureResult {
            err_est: r.err_est + tail,
            ..r
        };
        Ok(self.bound(r, Licence::Always, true))
    }
}

fn gaussian(r: f64, t: f64) -> f64 {
    crate::brownian::gaussian_density(r, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{halfline_gauss, DEFAULT_TOL_1D};

    fn reference_lp() -> LogisticParams {
        LogisticParams::new(1.0, 0.1, 0.5, 1.0).unwrap()
    }

    #[test]
    fn order_zero_is_exact() {
        let b = logistic_moment_bracket(&reference_lp(), 0.0, 1.0, 1e-6).unwrap();
        assert_eq!((b.lower, b.upper), (1.0, 1.0));
        let sb = SystemBounds::new(ModelParams::figure2(0.5, 0.3), K2Variant::Corrected).unwrap();
        assert_eq!(sb.joint_moment_lower(0.0, 0.0, 1.0).unwrap().value, 1.0);
        assert_eq!(sb.moment_lower_x(0.0, 1.0).unwrap().value, 1.0);
        assert_eq!(sb.moment_lower_y(0.0, 1.0).unwrap().value, 1.0);
    }

    #[test]
    fn gbm_limit_is_exact_moment() {
        let lp = LogisticParams::new(0.7, 0.0, 0.4, 1.5).unwrap();
        let (p, t) = (2.0f64, 1.3);
        let exact = lp.lambda.powf(p)
            * (p * lp.log_drift() * t + 0.5 * p * p * lp.sigma * lp.sigma * t).exp();
        let b = logistic_moment_bracket(&lp, p, t, 1e-8).unwrap();
        assert_close!(b.lower, exact, 1e-7);
        assert_close!(b.upper, exact, 1e-7);
    }

    #[test]
    fn moment_bracket_is_ordered() {
        for p in [0.5, 1.0, 2.0] {
            let b = logistic_moment_bracket(&reference_lp(), p, 1.0, 1e-6).unwrap();
            assert!(b.lower < b.upper, "{b:?}");
        }
    }

    #[test]
    fn cdf_triviality() {
        let lp = reference_lp();
        let t = 1.0;
        let c = logistic_constants(&lp, 1.0, t);
        let level = c.k / (lp.b * c.big_k);
        let b = logistic_cdf_bracket(&lp, level, t, 1e-5).unwrap();
        assert_eq!(b.upper, 1.0);
        let b = logistic_cdf_bracket(&lp, 1e-12, t, 1e-5).unwrap();
        assert!(b.upper < 1e-5 && b.lower < 1e-5);
    }

    #[test]
    fn wedge_cdf_against_semi_analytic_inner_integral() {
        // For fixed v the wedge condition reads u <= c(v), and
        // int_{-inf}^{c} f_{B,M}(u, v) du = 2 N_{0,t}(2v - c).
        let lp = reference_lp();
        let (t, z) = (1.0, 2.5);
        let c = logistic_constants(&lp, 1.0, t);
        let bk = lp.b * c.big_k;
        let cut = |v: f64| ((z * (1.0 + bk * (lp.sigma * v).exp())) / c.k).ln() / lp.sigma;
        let oracle = quadrature::integrate(
            |v| 2.0 * gaussian(2.0 * v - cut(v).min(v), t),
            0.0,
            12.0,
            1e-10,
        )
        .unwrap()
        .value;
        let got = wedge_cdf(&c, lp.b, lp.sigma, z, t, JointWith::Max, 1e-7).unwrap();
        assert_close!(got.value, oracle, 1e-6);
    }

    #[test]
    fn joint_upper_domain() {
        let sb = SystemBounds::new(ModelParams::figure2(0.5, 0.3), K2Variant::Corrected).unwrap();
        assert!(matches!(
            sb.joint_moment_upper(0.0, 0.0, 1.0),
            Err(Error::OutOfDomain(_))
        ));
        assert!(matches!(
            sb.joint_moment_upper(1.0, 1.0, 1.0),
            Err(Error::OutOfDomain(_))
        ));
        let v = sb.joint_moment_upper(0.0, 1.0, 1e-8).unwrap();
        assert_close!(v.value, sb.params.y0, 1e-6);
    }

    #[test]
    fn no_interaction_reduces_to_logistic() {
        let mut p = ModelParams::figure2(0.5, 0.3);
        p.c1 = 1e-300;
        let sb = SystemBounds::new(p, K2Variant::Corrected).unwrap();
        let jl = sb.joint_moment_lower(1.0, 0.0, 1.0).unwrap();
        let lb = logistic_moment_bracket(&p.prey_logistic(), 1.0, 1.0, DEFAULT_TOL_1D).unwrap();
        assert_close!(jl.value, lb.lower, 1e-6);

        let mx = sb.moment_lower_x(1.0, 1.0).unwrap();
        assert!(mx.value <= lb.upper + mx.err_est + lb.upper_err);

        let lo = sb.cdf_lower_x(2.0, 1.0).unwrap();
        let up = sb.cdf_upper_x(2.0, 1.0).unwrap();
        assert!(up.value + up.err_est >= lo.value - lo.err_est);
    }

    #[test]
    fn warnings_follow_regime() {
        let sb = SystemBounds::new(ModelParams::figure2(0.5, 0.3), K2Variant::Corrected).unwrap();
        assert!(sb
            .moment_lower_y(1.0, 1.0)
            .unwrap()
            .validity_warning
            .is_none());
        assert!(sb
            .joint_moment_lower(1.0, 1.0, 1.0)
            .unwrap()
            .validity_warning
            .is_some());
        assert!(sb.cdf_lower_x(1.0, 1.0).unwrap().validity_warning.is_none());
    }

    #[test]
    fn cdf_limits() {
        let sb = SystemBounds::new(ModelParams::figure2(0.5, 0.3), K2Variant::Corrected).unwrap();
        let t = 1.0;
        for f in [
            sb.cdf_lower_x(1e-9, t).unwrap(),
            sb.cdf_upper_x(1e-9, t).unwrap(),
            sb.cdf_upper_y(1e-9, t).unwrap(),
            sb.cdf_lower_y(1e-9, t).unwrap(),
            sb.cdf_joint_upper(1e-9, 1.0, t).unwrap(),
        ] {
            assert!(f.value <= 1e-4, "{f:?}");
        }
        assert_eq!(sb.cdf_lower_x(1e6, t).unwrap().value, 1.0);
        assert_eq!(sb.cdf_upper_y(1e6, t).unwrap().value, 1.0);
        assert_eq!(sb.cdf_joint_upper(1e6, 1e6, t).unwrap().value, 1.0);
    }

    #[test]
    fn cdf_lower_y_matches_gaussian_route() {
        // Substituting zeta = z2 / (1 + b1 K1 e^{sigma1 m})^gamma turns the
        // bound into E[F2(zeta(M1(t)))] over the running maximum of B1.
        let sb = SystemBounds::new(ModelParams::figure2(0.5, 0.3), K2Variant::Corrected).unwrap();
        let (t, z2) = (1.0, 0.6);
        let pr = sb.params;
        let gamma = pr.envelope_exponent();
        let b1k1 = pr.b1 * logistic_constants(&pr.prey_logistic(), 0.0, t).big_k;
        let lp2 = sb.predator();
        let c2 = logistic_constants(&lp2, 1.0, t);
        let oracle = halfline_gauss(
            |m| {
                let zeta = z2 / (1.0 + b1k1 * (pr.sigma1 * m).exp()).powf(gamma);
                2.0 * wedge_cdf(&c2, lp2.b, lp2.sigma, zeta, t, JointWith::Min, 1e-7)
                    .unwrap()
                    .value
            },
            t,
            1e-6,
        )
        .unwrap();
        let got = sb.cdf_lower_y(z2, t).unwrap();
        assert_close!(got.value, oracle.value, 2e-5);
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn logistic_brackets_ordered(
            a in -1.0f64..2.0,
            b in 0.01f64..1.0,
            sigma in 0.1f64..1.0,
            lambda in 0.2f64..3.0,
            p in 0.0f64..3.0,
            t in 0.1f64..2.0,
        ) {
            let lp = LogisticParams { a, b, sigma, lambda };
            let m = logistic_moment_bracket(&lp, p, t, 1e-6).unwrap();
            prop_assert!(m.lower - m.lower_err <= m.upper + m.upper_err);
            let c = logistic_cdf_bracket(&lp, lambda, t, 1e-5).unwrap();
            prop_assert!(c.lower - c.lower_err <= c.upper + c.upper_err);
            prop_assert!((0.0..=1.0 + 1e-5).contains(&c.upper));
        }

        #[test]
        fn cdf_bounds_monotone_in_level(z in 0.05f64..5.0, dz in 0.01f64..2.0) {
            let sb = SystemBounds::new(ModelParams::figure2(0.5, 0.3), K2Variant::Corrected).unwrap();
            let t = 1.0;
            let tol = 1e-5;
            let pairs = [
                (sb.cdf_lower_x(z, t).unwrap(), sb.cdf_lower_x(z + dz, t).unwrap()),
                (sb.cdf_upper_y(z, t).unwrap(), sb.cdf_upper_y(z + dz, t).unwrap()),
            ];
            for (lo, hi) in pairs {
                prop_assert!(lo.value <= hi.value + lo.err_est + hi.err_est + tol);
            }
        }
    }
}
