//! Adaptive Gauss-Kronrod quadrature for the bound integrals.
//!
//! The building block is a globally adaptive 7/15-point Gauss-Kronrod rule.
//! Panels are refined in order of their local error, `|K15 - G7|` rescaled
//! as in QUADPACK. Two
//! extensions cover the integral shapes needed here:
//!
//! * **Masks.** An integrand restricted to `{pred}` is integrated by checking
//!   the predicate on each panel first. Panels where it is false everywhere
//!   contribute zero; panels with a sign change are split at the transition,
//!   located by bisection. The integrand is never evaluated outside the mask.
//! * **Nesting.** The integrand may itself be a quadrature result. Its error
//!   estimate is integrated with the Kronrod weights and added to the outer
//!   estimate, while refinement is driven by the outer rule error only.
//!
//! Gaussian half-lines are mapped onto `[0, 1)` by `z = s / (1 - s)` in
//! standard-deviation units, so no mass is truncated however far out the
//! integrand lives.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::brownian::{std_normal_cdf, JointWith};
use crate::error::{Error, Result};

pub const DEFAULT_TOL_1D: f64 = 1e-6;
pub const DEFAULT_TOL_2D: f64 = 1e-5;
pub const DEFAULT_TOL_3D: f64 = 1e-4;
/// Truncation point, in standard deviations, for callers integrating a
/// Gaussian range on a finite interval.
pub const TRUNCATION_SDS: f64 = 8.0;
pub const MAX_SUBDIVISIONS: usize = 4000;

/// Share of an outer tolerance handed to the inner integrals.
const INNER_SHARE: f64 = 0.25;
/// Predicate probes per panel, endpoints included.
const MASK_PROBES: usize = 17;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub err_est: f64,
    pub n_evals: usize,
}

impl QuadratureResult {
    pub fn exact(value: f64) -> Self {
        QuadratureResult {
            value,
            err_est: 0.0,
            n_evals: 0,
        }
    }

    fn scalar(value: f64) -> Self {
        QuadratureResult {
            value,
            err_est: 0.0,
            n_evals: 1,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    rule_err: f64,
    inner_err: f64,
}

impl Panel {
    fn empty(a: f64, b: f64) -> Self {
        Panel {
            a,
            b,
            value: 0.0,
            rule_err: 0.0,
            inner_err: 0.0,
        }
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rule_err
            .total_cmp(&other.rule_err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

struct Adaptive<F, M> {
    f: F,
    mask: Option<M>,
    n_evals: usize,
}

impl<F, M> Adaptive<F, M>
where
    F: FnMut(f64) -> Result<QuadratureResult>,
    M: FnMut(f64) -> bool,
{
    /// Evaluates the integrand at `x`, or zero outside the mask.
    fn eval(&mut self, x: f64) -> Result<QuadratureResult> {
        if let Some(mask) = self.mask.as_mut() {
            if !mask(x) {
                return Ok(QuadratureResult::exact(0.0));
            }
        }
        (self.f)(x)
    }

    fn gk15(&mut self, a: f64, b: f64) -> Result<Panel> {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let centre = self.eval(c)?;
        let mut fv = [0.0; 15];
        fv[14] = centre.value;
        let mut kron = WGK[7] * centre.value;
        let mut gauss = WG[3] * centre.value;
        let mut inner = WGK[7] * centre.err_est;
        self.n_evals += centre.n_evals;
        for j in 0..7 {
            let dx = h * XGK[j];
            let lo = self.eval(c - dx)?;
            let hi = self.eval(c + dx)?;
            self.n_evals += lo.n_evals + hi.n_evals;
            fv[2 * j] = lo.value;
            fv[2 * j + 1] = hi.value;
            kron += WGK[j] * (lo.value + hi.value);
            inner += WGK[j] * (lo.err_est + hi.err_est);
            if j % 2 == 1 {
                gauss += WG[j / 2] * (lo.value + hi.value);
            }
        }
        // QUADPACK scaling: the raw |K - G| is sharpened for smooth panels
        // and inflated towards the panel's variation for rough ones.
        let mean = 0.5 * kron;
        let mut resasc = WGK[7] * (fv[14] - mean).abs();
        for j in 0..7 {
            resasc += WGK[j] * ((fv[2 * j] - mean).abs() + (fv[2 * j + 1] - mean).abs());
        }
        let resasc = resasc * h.abs();
        let mut rule_err = ((kron - gauss) * h).abs();
        if resasc > 0.0 && rule_err > 0.0 {
            rule_err = resasc * (200.0 * rule_err / resasc).powf(1.5).min(1.0);
        }
        let value = kron * h;
        if !value.is_finite() {
            return Err(Error::NonConvergence {
                value,
                err_est: f64::INFINITY,
                n_evals: self.n_evals,
            });
        }
        Ok(Panel {
            a,
            b,
            value,
            rule_err,
            inner_err: inner * h.abs(),
        })
    }

    /// Finds the point in `(lo, hi)` where the mask changes value.
    fn bisect(mask: &mut M, mut lo: f64, mut hi: f64) -> f64 {
        let at_lo = mask(lo);
        let width = (hi - lo).abs();
        for _ in 0..128 {
            if (hi - lo).abs() <= 1e-14 * width {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if mask(mid) == at_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Integrates `[a, b]` as one or more panels, splitting at mask
    /// transitions and dropping the parts outside the mask.
    fn process(&mut self, a: f64, b: f64, out: &mut Vec<Panel>) -> Result<()> {
        self.process_at_depth(a, b, out, 0)
    }

    fn process_at_depth(&mut self, a: f64, b: f64, out: &mut Vec<Panel>, depth: u32) -> Result<()> {
        let Some(mask) = self.mask.as_mut() else {
            out.push(self.gk15(a, b)?);
            return Ok(());
        };
        let w = b - a;
        let nudge = 1e-9 * w;
        let probes: Vec<f64> = (0..MASK_PROBES)
            .map(|i| {
                let x = a + w * i as f64 / (MASK_PROBES - 1) as f64;
                x.clamp(a + nudge, b - nudge)
            })
            .collect();
        let inside: Vec<bool> = probes.iter().map(|&x| mask(x)).collect();
        if inside.iter().all(|&v| !v) {
            out.push(Panel::empty(a, b));
            return Ok(());
        }
        if inside.iter().all(|&v| v) || depth >= 3 {
            out.push(self.gk15(a, b)?);
            return Ok(());
        }
        let mut cuts = vec![(a, inside[0])];
        for i in 0..MASK_PROBES - 1 {
            if inside[i] != inside[i + 1] {
                cuts.push((Self::bisect(mask, probes[i], probes[i + 1]), inside[i + 1]));
            }
        }
        cuts.push((b, false));
        for seg in cuts.windows(2) {
            let ((lo, on), (hi, _)) = (seg[0], seg[1]);
            if hi <= lo {
                continue;
            }
            if on {
                // Re-probe so islands narrower than the probe spacing are
                // still found.
                self.process_at_depth(lo, hi, out, depth + 1)?;
            } else {
                out.push(Panel::empty(lo, hi));
            }
        }
        Ok(())
    }

    fn run(
        &mut self,
        a: f64,
        b: f64,
        tol: f64,
        max_subdivisions: usize,
    ) -> Result<QuadratureResult> {
        if a == b {
            return Ok(QuadratureResult::exact(0.0));
        }
        let min_width = 1e-13 * (b - a).abs();
        let mut fresh = Vec::new();
        self.process(a, b, &mut fresh)?;
        let mut heap: BinaryHeap<Panel> = BinaryHeap::new();
        let mut settled: Vec<Panel> = Vec::new();
        for p in fresh.drain(..) {
            heap.push(p);
        }
        let mut subdivisions = 0;
        loop {
            let rule: f64 = heap.iter().chain(&settled).map(|p| p.rule_err).sum();
            let inner: f64 = heap.iter().chain(&settled).map(|p| p.inner_err).sum();
            let done = rule + inner <= tol || rule <= 0.1 * tol;
            if done || subdivisions >= max_subdivisions {
                break;
            }
            let Some(worst) = heap.pop() else { break };
            if worst.rule_err == 0.0 {
                heap.push(worst);
                break;
            }
            if (worst.b - worst.a).abs() <= min_width {
                settled.push(worst);
                continue;
            }
            subdivisions += 1;
            let mid = 0.5 * (worst.a + worst.b);
            self.process(worst.a, mid, &mut fresh)?;
            self.process(mid, worst.b, &mut fresh)?;
            for p in fresh.drain(..) {
                heap.push(p);
            }
        }
        let mut panels: Vec<Panel> = heap.into_vec();
        panels.extend(settled);
        panels.sort_by(|x, y| x.a.total_cmp(&y.a));
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let err_est: f64 = panels.iter().map(|p| p.rule_err + p.inner_err).sum();
        if err_est > tol {
            return Err(Error::NonConvergence {
                value,
                err_est,
                n_evals: self.n_evals,
            });
        }
        Ok(QuadratureResult {
            value,
            err_est,
            n_evals: self.n_evals,
        })
    }
}

fn run_adaptive<F, M>(f: F, mask: Option<M>, a: f64, b: f64, tol: f64) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<QuadratureResult>,
    M: FnMut(f64) -> bool,
{
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::invalid("tol", tol, "must be positive and finite"));
    }
    let mut adaptive = Adaptive {
        f,
        mask,
        n_evals: 0,
    };
    adaptive.run(a, b, tol, MAX_SUBDIVISIONS)
}

/// `int_a^b f` to absolute tolerance `tol`.
pub fn integrate(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    let g = |x: f64| Ok(QuadratureResult::scalar(f(x)));
    run_adaptive(g, None::<fn(f64) -> bool>, a, b, tol)
}

/// `int_a^b f 1{pred}`; `f` is evaluated only where `pred` holds.
pub fn integrate_masked(
    mut f: impl FnMut(f64) -> f64,
    pred: impl FnMut(f64) -> bool,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    let g = |x: f64| Ok(QuadratureResult::scalar(f(x)));
    run_adaptive(g, Some(pred), a, b, tol)
}

/// `int_a^b f` where each value of `f` is itself an integral with an error
/// estimate.
pub fn integrate_nested(
    f: impl FnMut(f64) -> Result<QuadratureResult>,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    run_adaptive(f, None::<fn(f64) -> bool>, a, b, tol)
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid("t", t, "must be positive and finite"))
    }
}

fn std_normal_pdf(s: f64) -> f64 {
    (-0.5 * s * s).exp() / (2.0 * PI).sqrt()
}

/// `int_0^inf f(u) w(u) du` for a weight `w` with Gaussian tails, after the
/// substitution `u = s / (1 - s)`. `f` is not evaluated where the weight
/// underflows.
fn halfline_nested(
    mut f: impl FnMut(f64) -> Result<QuadratureResult>,
    weight: impl Fn(f64) -> f64,
    tol: f64,
) -> Result<QuadratureResult> {
    integrate_nested(
        |s| {
            let c = 1.0 - s;
            let u = s / c;
            let w = weight(u) / (c * c);
            if !(w > 0.0 && w.is_finite()) {
                return Ok(QuadratureResult::exact(0.0));
            }
            let r = f(u)?;
            Ok(QuadratureResult {
                value: w * r.value,
                err_est: w * r.err_est,
                n_evals: r.n_evals,
            })
        },
        0.0,
        1.0,
        tol,
    )
}

/// `int_0^inf f(z) N_{0,t}(z) dz` with `N_{0,t}` the centred Gaussian
/// density of variance `t`.
pub fn halfline_gauss(mut f: impl FnMut(f64) -> f64, t: f64, tol: f64) -> Result<QuadratureResult> {
    check_time(t)?;
    let sd = t.sqrt();
    halfline_nested(
        |u| Ok(QuadratureResult::scalar(f(sd * u))),
        std_normal_pdf,
        tol,
    )
}

/// Maps standardized wedge coordinates `(rho, s)`, `0 <= s <= rho`, to
/// `(u, v) = (B(t), extremum)`.
///
/// For the maximum, `rho = (2v - u)/sqrt(t)` and `s = v/sqrt(t)`; for the
/// minimum, `rho = (u - 2v)/sqrt(t)` and `s = -v/sqrt(t)`. In these
/// coordinates the joint density becomes `2 rho phi(rho)` times Lebesgue
/// measure in `s` on `[0, rho]`.
#[inline]
pub fn wedge_point(rho: f64, s: f64, sd: f64, which: JointWith) -> (f64, f64) {
    match which {
        JointWith::Max => (sd * (2.0 * s - rho), sd * s),
        JointWith::Min => (sd * (rho - 2.0 * s), -sd * s),
    }
}

/// `int int h(u, v) f(u, v) 1{region(u, v)} du dv` over the support of the
/// joint density `f` of `B(t)` with its running maximum or minimum.
pub fn region_integral_2d(
    h: impl Fn(f64, f64) -> f64,
    region: impl Fn(f64, f64) -> bool,
    t: f64,
    which: JointWith,
    tol: f64,
) -> Result<QuadratureResult> {
    check_time(t)?;
    let sd = t.sqrt();
    // int_0^inf 2 rho phi(rho) d rho = 2 phi(0)
    let inner_tol = INNER_SHARE * tol / (2.0 * std_normal_pdf(0.0));
    halfline_nested(
        |rho| {
            integrate_masked(
                |s| {
                    let (u, v) = wedge_point(rho, s, sd, which);
                    h(u, v)
                },
                |s| {
                    let (u, v) = wedge_point(rho, s, sd, which);
                    region(u, v)
                },
                0.0,
                rho,
                inner_tol,
            )
        },
        |rho| 2.0 * rho * std_normal_pdf(rho),
        (1.0 - INNER_SHARE) * tol,
    )
}

/// `int h(u1, v1, v2) f_{B,M}(u1, v1) 2 N_{0,t}(v2) 1{region}` over
/// `{v1 > 0, u1 < v1, v2 > 0}`: a Brownian motion with its running maximum,
/// tensored with the running maximum of an independent Brownian motion.
pub fn region_integral_3d(
    h: impl Fn(f64, f64, f64) -> f64,
    region: impl Fn(f64, f64, f64) -> bool,
    t: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    check_time(t)?;
    let sd = t.sqrt();
    // The outer weight 2 phi integrates to one.
    let inner_tol = INNER_SHARE * tol;
    halfline_nested(
        |s2| {
            let v2 = sd * s2;
            region_integral_2d(
                |u1, v1| h(u1, v1, v2),
                |u1, v1| region(u1, v1, v2),
                t,
                JointWith::Max,
                inner_tol,
            )
        },
        |s2| 2.0 * std_normal_pdf(s2),
        (1.0 - INNER_SHARE) * tol,
    )
}

/// `P(Z <= x)` for standard normal `Z`, re-exported for integrand code.
pub fn phi_cdf(x: f64) -> f64 {
    std_normal_cdf(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brownian::{density_extremum, joint_density, Extremum};

    #[test]
    fn polynomials_are_exact() {
        let r = integrate(|x| x.powi(5) - 3.0 * x * x + 1.0, -1.0, 2.0, 1e-12).unwrap();
        assert_close!(r.value, 10.5 - 9.0 + 3.0, 1e-12);
    }

    #[test]
    fn halfline_constant_and_moment() {
        let r = halfline_gauss(|_| 1.0, 1.0, 1e-6).unwrap();
        assert_close!(r.value, 0.5, 1e-6);
        let r = halfline_gauss(|z| z, 1.0, 1e-6).unwrap();
        assert_close!(r.value, 1.0 / (2.0 * PI).sqrt(), 1e-6);
        let r = halfline_gauss(|z| z, 4.0, 1e-6).unwrap();
        assert_close!(r.value, 2.0 / (2.0 * PI).sqrt(), 1e-6);
    }

    #[test]
    fn halfline_against_fine_grid() {
        // Composite Simpson on a fine grid as an independent reference.
        let n = 200_000;
        let h = 12.0 / n as f64;
        let g = |z: f64| (-z).exp() * std_normal_pdf(z);
        let mut reference = g(0.0) + g(12.0);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            reference += w * g(i as f64 * h);
        }
        reference *= h / 3.0;
        let r = halfline_gauss(|z| (-z).exp(), 1.0, 1e-8).unwrap();
        assert_close!(r.value, reference, 1e-8);
        // Closed form e^{1/2} Phi(-1).
        assert_close!(r.value, 0.5f64.exp() * std_normal_cdf(-1.0), 1e-8);
    }

    #[test]
    fn mass_beyond_eight_deviations() {
        // A smooth step at z = 10: all of the integral lives past 8 sd.
        let f = |z: f64| 1.0 / (1.0 + (-3.0 * (z - 10.0)).exp());
        let g = |z: f64| f(z) * std_normal_pdf(z);
        let n = 400_000;
        let h = 16.0 / n as f64;
        let mut reference = g(0.0) + g(16.0);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            reference += w * g(i as f64 * h);
        }
        reference *= h / 3.0;
        assert!(reference > 1e-25);
        let r = halfline_gauss(f, 1.0, 1e-30).unwrap();
        assert!(
            (r.value - reference).abs() <= 1e-6 * reference,
            "{} vs {reference}",
            r.value
        );
    }

    #[test]
    fn masked_interval() {
        let r = integrate_masked(|_| 1.0, |x| x > 0.3 && x < 0.7, 0.0, 1.0, 1e-10).unwrap();
        assert_close!(r.value, 0.4, 1e-10);
        let r = integrate_masked(|x| x, |x| x < 1.0 / 3.0, 0.0, 1.0, 1e-10).unwrap();
        assert_close!(r.value, 1.0 / 18.0, 1e-10);
    }

    #[test]
    fn mask_blocks_evaluation_outside() {
        let r = integrate_masked(
            |x| {
                assert!(x >= 0.5 - 1e-9);
                x.sqrt()
            },
            |x| x >= 0.5,
            0.0,
            1.0,
            1e-9,
        )
        .unwrap();
        assert_close!(r.value, (1.0 - 0.5f64.powf(1.5)) * 2.0 / 3.0, 1e-9);
    }

    #[test]
    fn empty_region_is_zero() {
        let r = region_integral_2d(|_, _| 1.0, |_, _| false, 1.0, JointWith::Max, 1e-5).unwrap();
        assert_eq!(r.value, 0.0);
        let r = region_integral_3d(|_, _, _| 1.0, |_, _, _| false, 1.0, 1e-4).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn normalizations() {
        for t in [0.25, 1.0, 4.0] {
            let r = halfline_gauss(|_| 2.0, t, 1e-6).unwrap();
            assert_close!(r.value, 1.0, 1e-6);
            for which in [JointWith::Max, JointWith::Min] {
                let r = region_integral_2d(|_, _| 1.0, |_, _| true, t, which, 1e-5).unwrap();
                assert_close!(r.value, 1.0, 1e-5);
            }
            let r = region_integral_3d(|_, _, _| 1.0, |_, _, _| true, t, 1e-4).unwrap();
            assert_close!(r.value, 1.0, 1e-4);
        }
    }

    #[test]
    fn reflection_principle_cdf() {
        let (t, vstar) = (2.0f64, 0.9);
        let exact = 2.0 * std_normal_cdf(vstar / t.sqrt()) - 1.0;
        let r = region_integral_2d(|_, _| 1.0, |_, v| v <= vstar, t, JointWith::Max, 1e-5).unwrap();
        assert_close!(r.value, exact, 1e-5);
        let r = region_integral_3d(|_, _, _| 1.0, |_, _, v2| v2 <= vstar, t, 1e-4).unwrap();
        assert_close!(r.value, exact, 1e-4);
        // P(m(t) >= -v*) by symmetry.
        let r =
            region_integral_2d(|_, _| 1.0, |_, v| v >= -vstar, t, JointWith::Min, 1e-5).unwrap();
        assert_close!(r.value, exact, 1e-5);
    }

    #[test]
    fn wedge_against_direct_density() {
        // P(B(t) <= c, M(t) <= d) = Phi(c/sd) - Phi((c - 2d)/sd) for c <= d,
        // obtained from the reflection principle.
        let (t, c, d) = (1.5f64, 0.2, 0.8);
        let sd = t.sqrt();
        let exact = std_normal_cdf(c / sd) - std_normal_cdf((c - 2.0 * d) / sd);
        let r = region_integral_2d(|_, _| 1.0, |u, v| u <= c && v <= d, t, JointWith::Max, 1e-6)
            .unwrap();
        assert_close!(r.value, exact, 1e-6);

        // The same by brute-force midpoint sums of the density.
        let n = 1200;
        let (ulo, vhi) = (-8.0 * sd, d);
        let (hu, hv) = ((c - ulo) / n as f64, vhi / n as f64);
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                let u = ulo + (i as f64 + 0.5) * hu;
                let v = (j as f64 + 0.5) * hv;
                sum += joint_density(u, v, t, JointWith::Max).unwrap();
            }
        }
        assert_close!(sum * hu * hv, exact, 2e-4);
    }

    #[test]
    fn marginal_of_joint_is_extremum_density() {
        let t = 1.0;
        for v in [0.2, 1.0, 2.5] {
            let r = integrate(
                |u| joint_density(u, v, t, JointWith::Max).unwrap(),
                v - 12.0,
                v,
                1e-10,
            )
            .unwrap();
            let expected = density_extremum(v, t, Extremum::Max).unwrap();
            assert_close!(r.value, expected, 1e-6);
        }
    }

    #[test]
    fn halving_tol_is_consistent() {
        let f = |u: f64, v: f64| (0.3 * u).exp() / (1.0 + (0.5 * v).exp());
        let region = |u: f64, v: f64| 0.7 * u - 0.2 * v <= 0.4;
        for tol in [1e-3, 1e-4, 1e-5] {
            let a = region_integral_2d(f, region, 1.0, JointWith::Max, tol).unwrap();
            let b = region_integral_2d(f, region, 1.0, JointWith::Max, tol / 2.0).unwrap();
            assert!((a.value - b.value).abs() <= a.err_est + b.err_est);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(halfline_gauss(|_| 1.0, 0.0, 1e-6).is_err());
        assert!(integrate(|x| x, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn nonconvergence_is_reported() {
        let err = integrate(|x| (x - 1.0 / 3.0).abs().powf(-0.95), -1.0, 1.0, 1e-10).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }));
    }
}
