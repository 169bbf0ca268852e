//! Almost-sure envelopes of the prey and predator densities along a
//! simulated bundle, and a containment audit.
//!
//! With `gamma = c2 / (beta b1)`:
//!
//! ```text
//! L2 <= Y <= L2 (1 + b1 int G1)^gamma
//! L1 max(e^{-c1 t}, exp(-(c1/(beta b2)) (1 + b1 int G1)^gamma ln(1 + b2 int G2))) <= X <= L1
//! ```

use serde::Serialize;

use crate::model::ModelParams;
use crate::sim::TrajectoryBundle;

/// Which factor attains the maximum in the prey lower envelope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LowerBranch {
    /// `e^{-c1 t}`, the bound that holds when the predator persists.
    Predation,
    /// The bound driven by the predator comparison integral.
    Coupled,
}

impl LowerBranch {
    pub fn as_str(self) -> &'static str {
        match self {
            LowerBranch::Predation => "predation",
            LowerBranch::Coupled => "coupled",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopeSample {
    pub t: f64,
    pub y_lo: f64,
    pub y_hi: f64,
    pub x_lo: f64,
    pub x_hi: f64,
    pub regime_used: LowerBranch,
}

/// Predator envelope `(y_lo, y_hi)` at every grid point.
pub fn envelope_y(bundle: &TrajectoryBundle, params: &ModelParams) -> Vec<(f64, f64)> {
    let gamma = params.envelope_exponent();
    bundle
        .l2
        .iter()
        .zip(&bundle.int_g1)
        .map(|(&l2, &ig1)| (l2, l2 * (gamma * (params.b1 * ig1).ln_1p()).exp()))
        .collect()
}

/// Prey envelope `(x_lo, x_hi, branch)` at every grid point.
pub fn envelope_x(bundle: &TrajectoryBundle, params: &ModelParams) -> Vec<(f64, f64, LowerBranch)> {
    let gamma = params.envelope_exponent();
    let rate = params.c1 / (params.beta * params.b2);
    (0..bundle.len())
        .map(|i| {
            let l1 = bundle.l1[i];
            let predation = -params.c1 * bundle.t_grid[i];
            let growth = (gamma * (params.b1 * bundle.int_g1[i]).ln_1p()).exp();
            let coupled = -rate * growth * (params.b2 * bundle.int_g2[i]).ln_1p();
            let (log_factor, branch) = if coupled.is_nan() || predation >= coupled {
                (predation, LowerBranch::Predation)
            } else {
                (coupled, LowerBranch::Coupled)
            };
            (l1 * log_factor.exp(), l1, branch)
        })
        .collect()
}

pub fn envelopes(bundle: &TrajectoryBundle, params: &ModelParams) -> Vec<EnvelopeSample> {
    envelope_y(bundle, params)
        .into_iter()
        .zip(envelope_x(bundle, params))
        .zip(&bundle.t_grid)
        .map(
            |(((y_lo, y_hi), (x_lo, x_hi, regime_used)), &t)| EnvelopeSample {
                t,
                y_lo,
                y_hi,
                x_lo,
                x_hi,
                regime_used,
            },
        )
        .collect()
}

/// Containment statistics over one or more bundles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ViolationReport {
    pub n_points: u64,
    pub n_viol_y: u64,
    pub n_viol_x: u64,
    pub worst_rel_excess: f64,
    pub dt: f64,
}

impl ViolationReport {
    pub fn empty(dt: f64) -> Self {
        ViolationReport {
            n_points: 0,
            n_viol_y: 0,
            n_viol_x: 0,
            worst_rel_excess: 0.0,
            dt,
        }
    }

    /// Audits one bundle against given envelope samples.
    pub fn from_samples(
        bundle: &TrajectoryBundle,
        samples: &[EnvelopeSample],
        tol_rel: f64,
    ) -> Self {
        let mut report = Self::empty(bundle.dt);
        for (i, s) in samples.iter().enumerate() {
            let y_excess = rel_excess(bundle.y[i], s.y_lo, s.y_hi);
            let x_excess = rel_excess(bundle.x[i], s.x_lo, s.x_hi);
            report.n_points += 1;
            report.n_viol_y += u64::from(y_excess > tol_rel);
            report.n_viol_x += u64::from(x_excess > tol_rel);
            report.worst_rel_excess = report.worst_rel_excess.max(y_excess).max(x_excess);
        }
        report
    }

    /// Combines two reports; associative and commutative.
    pub fn merge(self, other: Self) -> Self {
        ViolationReport {
            n_points: self.n_points + other.n_points,
            n_viol_y: self.n_viol_y + other.n_viol_y,
            n_viol_x: self.n_viol_x + other.n_viol_x,
            worst_rel_excess: self.worst_rel_excess.max(other.worst_rel_excess),
            dt: self.dt,
        }
    }

    /// Violations per grid point, counting the two species separately.
    pub fn violation_fraction(&self) -> f64 {
        if self.n_points == 0 {
            return 0.0;
        }
        (self.n_viol_x + self.n_viol_y) as f64 / self.n_points as f64
    }
}

/// Relative distance by which `v` leaves `[lo, hi]` (0 inside).
fn rel_excess(v: f64, lo: f64, hi: f64) -> f64 {
    if v > hi {
        (v - hi) / hi
    } else if v < lo {
        (lo - v) / lo
    } else {
        0.0
    }
}

pub fn audit_bundle(
    bundle: &TrajectoryBundle,
    params: &ModelParams,
    tol_rel: f64,
) -> ViolationReport {
    ViolationReport::from_samples(bundle, &envelopes(bundle, params), tol_rel)
}

/// Audits every bundle and merges the reports.
pub fn audit(bundles: &[TrajectoryBundle], params: &ModelParams, tol_rel: f64) -> ViolationReport {
    let dt = bundles.first().map_or(0.0, |b| b.dt);
    bundles
        .iter()
        .map(|b| audit_bundle(b, params, tol_rel))
        .fold(ViolationReport::empty(dt), ViolationReport::merge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::simulate_seeded;

    fn bundle(params: &ModelParams, t_end: f64, n: usize, seed: u64) -> TrajectoryBundle {
        simulate_seeded(params, t_end, n, seed, 0, 0.0).unwrap()
    }

    #[test]
    fn start_values_collapse() {
        let p = ModelParams::figure2(0.5, 0.3);
        let b = bundle(&p, 1.0, 100, 1);
        let s = envelopes(&b, &p)[0];
        assert_eq!((s.y_lo, s.y_hi), (p.y0, p.y0));
        assert_eq!((s.x_lo, s.x_hi), (p.x0, p.x0));
    }

    #[test]
    fn no_interaction_collapses_envelopes() {
        let mut p = ModelParams::figure2(0.5, 0.3);
        p.c1 = 0.0;
        p.c2 = 0.0;
        let b = bundle(&p, 5.0, 5000, 2);
        for (i, s) in envelopes(&b, &p).iter().enumerate() {
            assert_eq!(s.y_hi, b.l2[i]);
            assert_eq!(s.x_lo, b.l1[i]);
        }
        let r = audit(&[b], &p, 0.0);
        assert_eq!(r.n_viol_x + r.n_viol_y, 0);
    }

    #[test]
    fn containment_on_seeded_paths() {
        let p = ModelParams::figure2(0.5, 0.3);
        let b = bundle(&p, 5.0, 5000, 3);
        let s = envelopes(&b, &p)[5000];
        assert!(s.y_lo <= b.y[5000] && b.y[5000] <= s.y_hi);

        let p = ModelParams::figure2(1.5, 1.3);
        let b = bundle(&p, 10.0, 10_000, 4);
        let env = envelopes(&b, &p);
        for i in [1000, 5000, 10_000] {
            assert!(
                env[i].x_lo <= b.x[i] && b.x[i] <= env[i].x_hi,
                "t index {i}"
            );
        }
    }

    #[test]
    fn rel_excess_cases() {
        assert_eq!(rel_excess(1.0, 0.5, 2.0), 0.0);
        assert_close!(rel_excess(2.2, 0.5, 2.0), 0.1, 1e-12);
        assert_close!(rel_excess(0.4, 0.5, 2.0), 0.2, 1e-12);
    }

    #[test]
    fn flipped_envelope_is_detected() {
        let p = ModelParams::figure2(0.5, 0.3);
        let b = bundle(&p, 2.0, 2000, 5);
        let flipped: Vec<_> = envelopes(&b, &p)
            .into_iter()
            .map(|s| EnvelopeSample {
                y_lo: s.y_hi * 1.5,
                y_hi: s.y_hi * 2.0,
                ..s
            })
            .collect();
        let r = ViolationReport::from_samples(&b, &flipped, 1e-2);
        assert!(r.n_viol_y > 0);
    }
}
