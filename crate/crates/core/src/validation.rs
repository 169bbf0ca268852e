//! Acceptance checks: envelope containment, scheme accuracy, bracket
//! containment against Monte Carlo, regime behaviour, stationarity,
//! quadrature normalizations and the Novikov threshold.
//!
//! Each check returns a [`CheckOutcome`] and never panics on a failed
//! inequality, so a suite run always reports every check.

use serde::Serialize;

use crate::bounds::{
    logistic_cdf_bracket, logistic_moment_bracket, wedge_cdf, Bound, K2Variant, SystemBounds,
};
use crate::brownian::{sample_path, JointWith};
use crate::envelope::{envelopes, EnvelopeSample, ViolationReport};
use crate::error::Result;
use crate::exec::Exec;
use crate::model::{
    gamma_stationary, logistic_constants, novikov_threshold, LogisticParams, ModelParams,
};
use crate::montecarlo::{
    cdf_of, frequency, logistic_terminal_samples, mc_ergodic_average, moment_of, prey_time_average,
    quantile, system_terminal_samples, Marginal, McConfig, McEstimate,
};
use crate::quadrature::{
    halfline_gauss, region_integral_2d, region_integral_3d, DEFAULT_TOL_1D, DEFAULT_TOL_2D,
    DEFAULT_TOL_3D,
};
use crate::sim::{simulate_seeded, strong_error_probe};

/// Relative excess beyond which a grid point counts as a violation.
pub const ENVELOPE_TOL_REL: f64 = 1e-2;
/// Largest admissible violation fraction at the coarse step.
pub const ENVELOPE_MAX_FRACTION: f64 = 1e-3;
/// Admissible range of the terminal error ratio between `dt` and `dt/4`.
pub const STRONG_RATIO_RANGE: (f64, f64) = (1.4, 3.0);
/// Largest admissible scheme error for the pure geometric case.
pub const GBM_EXACTNESS: f64 = 1e-12;
/// Extinction threshold as a fraction of the initial density.
pub const EXTINCTION_FRACTION: f64 = 1e-2;
/// Relative tolerance on the prey time average in the persistence regime.
pub const PREY_AVERAGE_REL: f64 = 0.10;
/// Relative tolerance on the logistic time average.
pub const ERGODIC_REL: f64 = 0.05;
/// Largest admissible Kolmogorov distance to the stationary law.
pub const KS_MAX: f64 = 0.05;
pub const NOVIKOV_THRESHOLDS: [f64; 2] = [15.0, 10.385];

/// Parameters of the reference logistic law.
pub fn reference_logistic() -> LogisticParams {
    LogisticParams {
        a: 1.0,
        b: 0.1,
        sigma: 0.5,
        lambda: 1.0,
    }
}

/// The two noise levels of the reference experiment.
pub const SIGMA_PAIRS: [(f64, f64); 2] = [(0.5, 0.3), (1.5, 1.3)];

/// Sample sizes and horizons for one suite run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scale {
    pub envelope_bundles: usize,
    pub envelope_horizon: f64,
    /// Coarse and fine step of the containment audit.
    pub envelope_dts: (f64, f64),
    pub strong_paths: usize,
    pub strong_dt: f64,
    pub logistic_paths: usize,
    pub system_paths: usize,
    pub regime_paths: usize,
    pub regime_horizon: f64,
    pub average_seeds: usize,
    pub average_horizon: f64,
    pub average_dt: f64,
    pub stationary_samples: usize,
    pub stationary_dt: f64,
    /// Standard errors allowed on Monte Carlo comparisons.
    pub se_mult: f64,
    /// Multiplier applied to the relative tolerances.
    pub tol_factor: f64,
}

impl Scale {
    pub fn full() -> Self {
        Scale {
            envelope_bundles: 1000,
            envelope_horizon: 10.0,
            envelope_dts: (1e-3, 1e-4),
            strong_paths: 100,
            strong_dt: 1e-3,
            logistic_paths: 100_000,
            system_paths: 10_000,
            regime_paths: 1000,
            regime_horizon: 50.0,
            average_seeds: 20,
            average_horizon: 200.0,
            average_dt: 1e-3,
            stationary_samples: 10_000,
            stationary_dt: 1e-3,
            se_mult: 3.0,
            tol_factor: 1.0,
        }
    }

    /// Reduced sample sizes with correspondingly looser tolerances.
    pub fn quick() -> Self {
        Scale {
            envelope_bundles: 50,
            envelope_dts: (1e-3, 2.5e-4),
            strong_paths: 50,
            logistic_paths: 10_000,
            system_paths: 2000,
            regime_paths: 200,
            average_seeds: 8,
            average_dt: 1e-2,
            stationary_samples: 2000,
            stationary_dt: 1e-2,
            se_mult: 4.0,
            tol_factor: 2.0,
            ..Scale::full()
        }
    }
}

/// A deliberate defect used to check that the suite can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Swap the lower and upper envelopes before auditing.
    FlipEnvelope,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(id: u8, name: &'static str, passed: bool, detail: String) -> Self {
        CheckOutcome {
            id,
            name,
            passed,
            detail,
        }
    }

    fn from_result(id: u8, name: &'static str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Self::new(id, name, passed, detail),
            Err(e) => Self::new(id, name, false, format!("error: {e}")),
        }
    }
}

impl std::fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{verdict}] {}. {}: {}", self.id, self.name, self.detail)
    }
}

pub const CHECK_NAMES: [&str; 9] = [
    "envelope-containment",
    "exact-vs-scheme",
    "logistic-moment-brackets",
    "logistic-cdf-brackets",
    "system-brackets",
    "regime-consistency",
    "ergodic-gamma",
    "density-normalizations",
    "novikov-threshold",
];

/// Suite configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Suite {
    pub scale: Scale,
    pub seed_base: u64,
    pub exec: Exec,
    pub fault: Option<Fault>,
}

impl Suite {
    pub fn new(scale: Scale, seed_base: u64) -> Self {
        Suite {
            scale,
            seed_base,
            exec: Exec::default(),
            fault: None,
        }
    }

    /// Seed base reserved for check `id`, disjoint from the others.
    fn seeds(&self, id: u8) -> u64 {
        self.seed_base.wrapping_add(u64::from(id) << 40)
    }

    fn mc(&self, dt: f64) -> McConfig {
        McConfig {
            dt,
            rho: 0.0,
            exec: self.exec,
        }
    }

    /// Runs check `id` (1 to 9).
    pub fn run(&self, id: u8) -> CheckOutcome {
        let name = CHECK_NAMES[usize::from(id) - 1];
        let r = match id {
            1 => self.envelope_containment(),
            2 => self.exact_vs_scheme(),
            3 => self.logistic_moments(),
            4 => self.logistic_cdf(),
            5 => self.system_brackets(),
            6 => self.regime_consistency(),
            7 => self.ergodic_gamma(),
            8 => density_normalizations(),
            9 => Ok(novikov()),
            _ => panic!("no check with id {id}"),
        };
        CheckOutcome::from_result(id, name, r)
    }

    pub fn run_all(&self) -> Vec<CheckOutcome> {
        (1..=9).map(|id| self.run(id)).collect()
    }

    fn audit(&self, params: &ModelParams, dt: f64) -> Result<ViolationReport> {
        let s = &self.scale;
        let n_steps = (s.envelope_horizon / dt).round() as usize;
        let seed = self.seeds(1);
        let reports = self.exec.map_indexed(s.envelope_bundles, |i| {
            let b = simulate_seeded(params, s.envelope_horizon, n_steps, seed, i as u64, 0.0)?;
            let mut env = envelopes(&b, params);
            if self.fault == Some(Fault::FlipEnvelope) {
                env.iter_mut().for_each(flip);
            }
            Ok(ViolationReport::from_samples(&b, &env, ENVELOPE_TOL_REL))
        });
        reports
            .into_iter()
            .try_fold(ViolationReport::empty(dt), |acc, r: Result<_>| {
                Ok(acc.merge(r?))
            })
    }

    /// Containment of simulated paths in their envelopes at two step sizes.
    pub fn envelope_containment(&self) -> Result<(bool, String)> {
        let (coarse, fine) = self.scale.envelope_dts;
        let mut passed = true;
        let mut detail = Vec::new();
        for (s1, s2) in SIGMA_PAIRS {
            let params = ModelParams::figure2(s1, s2);
            let rc = self.audit(&params, coarse)?;
            let rf = self.audit(&params, fine)?;
            let (fc, ff) = (rc.violation_fraction(), rf.violation_fraction());
            passed &= fc < ENVELOPE_MAX_FRACTION && ff < fc;
            detail.push(format!(
                "sigma=({s1},{s2}) fraction {fc:.3e} at dt={coarse} -> {ff:.3e} at dt={fine} (worst excess {:.2e} -> {:.2e})",
                rc.worst_rel_excess, rf.worst_rel_excess
            ));
        }
        Ok((passed, detail.join("; ")))
    }

    /// Log-Euler against the explicit logistic formula on shared paths.
    pub fn exact_vs_scheme(&self) -> Result<(bool, String)> {
        let s = &self.scale;
        let t_end = 1.0;
        let fine_steps = (4.0 * t_end / s.strong_dt).round() as usize;
        let seed = self.seeds(2);
        let lp = reference_logistic();
        let gbm = LogisticParams { b: 0.0, ..lp };
        let per_path = self.exec.map_indexed(s.strong_paths, |i| {
            let bp = sample_path(t_end, fine_steps, seed.wrapping_add(i as u64))?;
            let e = strong_error_probe(&lp, &bp, 3)?;
            let g = strong_error_probe(&gbm, &bp, 3)?;
            Ok((e[0], e[2], g.into_iter().fold(0.0, f64::max)))
        });
        let mut coarse = 0.0;
        let mut fine = 0.0;
        let mut gbm_worst = 0.0f64;
        for r in per_path {
            let (c, f, g): (f64, f64, f64) = r?;
            coarse += c;
            fine += f;
            gbm_worst = gbm_worst.max(g);
        }
        let ratio = coarse / fine;
        let (lo, hi) = STRONG_RATIO_RANGE;
        let passed = (lo..=hi).contains(&ratio) && gbm_worst <= GBM_EXACTNESS;
        let n = s.strong_paths as f64;
        Ok((
            passed,
            format!(
                "mean terminal error {:.3e} at dt={} vs {:.3e} at dt/4, ratio {ratio:.3} (want [{lo}, {hi}]); b=0 worst error {gbm_worst:.1e}",
                coarse / n,
                s.strong_dt,
                fine / n
            ),
        ))
    }

    fn logistic_samples(&self, t: f64) -> Result<Vec<f64>> {
        let lp = reference_logistic();
        let cfg = self.mc(crate::montecarlo::DEFAULT_DT);
        logistic_terminal_samples(&lp, t, self.scale.logistic_paths, self.seeds(3), &cfg)
    }

    /// Monte Carlo logistic moments inside the moment brackets.
    pub fn logistic_moments(&self) -> Result<(bool, String)> {
        let lp = reference_logistic();
        let k = self.scale.se_mult;
        let mut passed = true;
        let mut detail = Vec::new();
        let zero = logistic_moment_bracket(&lp, 0.0, 1.0, DEFAULT_TOL_1D)?;
        if (zero.lower, zero.upper) != (1.0, 1.0) {
            passed = false;
            detail.push(format!("p=0 gave ({}, {})", zero.lower, zero.upper));
        }
        for t in [0.5, 1.0] {
            let samples = self.logistic_samples(t)?;
            for p in [0.5, 1.0, 2.0] {
                let pw: Vec<f64> = samples.iter().map(|l| l.powf(p)).collect();
                let est = McEstimate::from_samples(&pw, self.seeds(3));
                let br = logistic_moment_bracket(&lp, p, t, DEFAULT_TOL_1D)?;
                let ok = br.contains(est.mean, k * est.std_err);
                passed &= ok;
                detail.push(format!(
                    "t={t} p={p}: {:.5} in [{:.5}, {:.5}]{}",
                    est.mean,
                    br.lower,
                    br.upper,
                    if ok { "" } else { " VIOLATED" }
                ));
            }
        }
        Ok((passed, detail.join("; ")))
    }

    /// Empirical logistic CDF at the deciles inside the CDF brackets.
    pub fn logistic_cdf(&self) -> Result<(bool, String)> {
        let lp = reference_logistic();
        let t = 1.0;
        let k = self.scale.se_mult;
        let samples = self.logistic_samples(t)?;
        let mut passed = true;
        let mut worst: f64 = f64::NEG_INFINITY;
        let mut failures = Vec::new();
        for d in 1..=9 {
            let z = quantile(&samples, d as f64 / 10.0);
            let hits = samples.iter().filter(|&&l| l <= z).count();
            let f = frequency(hits, samples.len(), self.seeds(4));
            let br = logistic_cdf_bracket(&lp, z, t, DEFAULT_TOL_2D)?;
            let slack = k * f.std_err;
            // Signed distance outside the slackened bracket; negative inside.
            let out = (br.lower - br.lower_err - slack - f.mean)
                .max(f.mean - br.upper - br.upper_err - slack);
            worst = worst.max(out);
            if out > 0.0 {
                passed = false;
                failures.push(format!(
                    "decile {d}: {:.4} vs [{:.4}, {:.4}]",
                    f.mean, br.lower, br.upper
                ));
            }
        }
        let c = logistic_constants(&lp, 1.0, t);
        let trivial_at = c.k / (lp.b * c.big_k);
        let mut trivial = true;
        for z in [trivial_at, 2.0 * trivial_at] {
            let u = wedge_cdf(&c, lp.b, lp.sigma, z, t, JointWith::Max, DEFAULT_TOL_2D)?;
            trivial &= u.value == 1.0;
        }
        passed &= trivial;
        let mut detail = format!(
            "9 deciles, largest excursion outside bracket {worst:.2e}; upper bound exactly 1 from z={trivial_at:.4}: {trivial}"
        );
        if !failures.is_empty() {
            detail.push_str(&format!("; {}", failures.join(", ")));
        }
        Ok((passed, detail))
    }

    /// System moments and CDFs at the sample medians against every bound,
    /// for both predator constant variants.
    pub fn system_brackets(&self) -> Result<(bool, String)> {
        let params = ModelParams::figure2(0.5, 0.3);
        let t = 1.0;
        let seed = self.seeds(5);
        let k = self.scale.se_mult;
        let samples = system_terminal_samples(
            &params,
            t,
            self.scale.system_paths,
            seed,
            &self.mc(crate::montecarlo::DEFAULT_DT),
        )?;
        let ex = moment_of(&samples, 1.0, 0.0, t, seed)?;
        let ey = moment_of(&samples, 0.0, 1.0, t, seed)?;
        let exy = moment_of(&samples, 1.0, 1.0, t, seed)?;
        let xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let ys: Vec<f64> = samples.iter().map(|s| s.1).collect();
        let (mx, my) = (quantile(&xs, 0.5), quantile(&ys, 0.5));
        let fx = cdf_of(&samples, mx, my, Marginal::X, seed);
        let fy = cdf_of(&samples, mx, my, Marginal::Y, seed);
        let fj = cdf_of(&samples, mx, my, Marginal::Joint, seed);

        // Lower bounds must not exceed the estimate, upper bounds must not
        // fall below it.
        let below = |b: &Bound, e: &McEstimate| b.value - b.err_est <= e.mean + k * e.std_err;
        let above = |b: &Bound, e: &McEstimate| b.value + b.err_est >= e.mean - k * e.std_err;

        let mut common_ok = true;
        let mut notes = Vec::new();
        let mut passing = Vec::new();
        for variant in [K2Variant::AsPrinted, K2Variant::Corrected] {
            let sb = SystemBounds::new(params, variant)?;
            // (label, passed, depends on the predator constants)
            let checks: Vec<(&str, bool, bool)> = vec![
                (
                    "E[X] >= moment_lower_x",
                    below(&sb.moment_lower_x(1.0, t)?, &ex),
                    true,
                ),
                (
                    "E[X] >= joint_lower(1,0)",
                    below(&sb.joint_moment_lower(1.0, 0.0, t)?, &ex),
                    false,
                ),
                (
                    "E[Y] >= moment_lower_y",
                    below(&sb.moment_lower_y(1.0, t)?, &ey),
                    true,
                ),
                (
                    "E[Y] >= joint_lower(0,1)",
                    below(&sb.joint_moment_lower(0.0, 1.0, t)?, &ey),
                    true,
                ),
                (
                    "E[Y] <= joint_upper(0,1)",
                    above(&sb.joint_moment_upper(0.0, 1.0, t)?, &ey),
                    true,
                ),
                (
                    "E[XY] >= joint_lower(1,1)",
                    below(&sb.joint_moment_lower(1.0, 1.0, t)?, &exy),
                    true,
                ),
                (
                    "F_X >= cdf_lower_x",
                    below(&sb.cdf_lower_x(mx, t)?, &fx),
                    false,
                ),
                (
                    "F_X <= cdf_upper_x",
                    above(&sb.cdf_upper_x(mx, t)?, &fx),
                    true,
                ),
                (
                    "F_Y >= cdf_lower_y",
                    below(&sb.cdf_lower_y(my, t)?, &fy),
                    true,
                ),
                (
                    "F_Y <= cdf_upper_y",
                    above(&sb.cdf_upper_y(my, t)?, &fy),
                    true,
                ),
                (
                    "F_XY <= cdf_joint_upper",
                    above(&sb.cdf_joint_upper(mx, my, t)?, &fj),
                    true,
                ),
            ];
            let failed_y: Vec<&str> = checks.iter().filter(|c| c.2 && !c.1).map(|c| c.0).collect();
            for c in checks.iter().filter(|c| !c.2 && !c.1) {
                common_ok = false;
                notes.push(format!("{} violated", c.0));
            }
            if failed_y.is_empty() {
                passing.push(variant.as_str());
            } else {
                notes.push(format!(
                    "{} fails: {}",
                    variant.as_str(),
                    failed_y.join(", ")
                ));
            }
        }
        notes.dedup();
        let passed = common_ok && !passing.is_empty();
        let arbitration = if passing.is_empty() {
            "no K2 variant passes".to_string()
        } else {
            format!(
                "K2 variants passing all predator checks: {}",
                passing.join(", ")
            )
        };
        let mut detail = format!(
            "E[X]={:.4}, E[Y]={:.4}, E[XY]={:.4}, medians ({mx:.4}, {my:.4}); {arbitration}",
            ex.mean, ey.mean, exy.mean
        );
        if !notes.is_empty() {
            detail.push_str(&format!("; {}", notes.join("; ")));
        }
        Ok((passed, detail))
    }

    /// Extinction and persistence in the two noise regimes.
    pub fn regime_consistency(&self) -> Result<(bool, String)> {
        let s = &self.scale;
        let seed = self.seeds(6);
        let cfg = self.mc(crate::montecarlo::DEFAULT_DT);
        let t = s.regime_horizon;
        let thr = EXTINCTION_FRACTION;

        let noisy = ModelParams::figure2(1.5, 1.3);
        let samples = system_terminal_samples(&noisy, t, s.regime_paths, seed, &cfg)?;
        let (mx, my) = means(&samples);
        let noisy_ok = mx < thr * noisy.x0 && my < thr * noisy.y0;

        let calm = ModelParams::figure2(0.5, 0.3);
        let samples = system_terminal_samples(&calm, t, s.regime_paths, seed, &cfg)?;
        let (_, cy) = means(&samples);
        let target = (calm.a1 - 0.5 * calm.sigma1 * calm.sigma1) / calm.b1;
        let averages = self.exec.map_indexed(s.average_seeds, |i| {
            prey_time_average(
                &calm,
                s.average_horizon,
                s.average_dt,
                seed.wrapping_add(1 << 32),
                i as u64,
            )
        });
        let averages: Vec<f64> = averages.into_iter().collect::<Result<_>>()?;
        let avg = averages.iter().sum::<f64>() / averages.len() as f64;
        let rel = (avg - target).abs() / target;
        let calm_ok = cy < thr * calm.y0 && rel <= PREY_AVERAGE_REL * s.tol_factor;
        Ok((
            noisy_ok && calm_ok,
            format!(
                "sigma=(1.5,1.3): mean X({t})={mx:.4} ({:.2}% of x0), mean Y({t})={my:.3e}; sigma=(0.5,0.3): mean Y({t})={cy:.3e}, prey time average {avg:.4} vs {target} ({:.2}% off)",
                100.0 * mx / noisy.x0,
                100.0 * rel
            ),
        ))
    }

    /// Logistic time averages and the law of `L(T)` against the stationary
    /// Gamma law.
    pub fn ergodic_gamma(&self) -> Result<(bool, String)> {
        let s = &self.scale;
        let lp = reference_logistic();
        let law = gamma_stationary(&lp)?;
        let seed = self.seeds(7);
        let averages = self.exec.map_indexed(s.average_seeds, |i| {
            mc_ergodic_average(
                &lp,
                s.average_horizon,
                s.average_dt,
                seed.wrapping_add(i as u64),
            )
        });
        let averages: Vec<f64> = averages.into_iter().collect::<Result<_>>()?;
        let avg = averages.iter().sum::<f64>() / averages.len() as f64;
        let rel = (avg - law.mean()).abs() / law.mean();

        let cfg = self.mc(s.stationary_dt);
        let samples = logistic_terminal_samples(
            &lp,
            s.average_horizon,
            s.stationary_samples,
            seed.wrapping_add(1 << 32),
            &cfg,
        )?;
        let ks = kolmogorov_distance(&samples, |x| law.cdf(x));
        let passed = rel <= ERGODIC_REL * s.tol_factor && ks < KS_MAX * s.tol_factor;
        Ok((
            passed,
            format!(
                "time average {avg:.4} vs {:.4} ({:.2}% off); KS distance of L({}) to Gamma({}, {}) is {ks:.4}",
                law.mean(),
                100.0 * rel,
                s.average_horizon,
                law.shape,
                law.rate
            ),
        ))
    }
}

fn flip(s: &mut EnvelopeSample) {
    std::mem::swap(&mut s.y_lo, &mut s.y_hi);
    std::mem::swap(&mut s.x_lo, &mut s.x_hi);
}

fn means(samples: &[(f64, f64)]) -> (f64, f64) {
    let n = samples.len() as f64;
    let (sx, sy) = samples
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    (sx / n, sy / n)
}

/// `sup_x |F_n(x) - F(x)|` for the empirical law of `samples`.
pub fn kolmogorov_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Total mass of the running-maximum, joint and product densities.
pub fn density_normalizations() -> Result<(bool, String)> {
    let mut worst = [0.0f64; 3];
    for t in [0.25, 1.0, 4.0] {
        let r = halfline_gauss(|_| 2.0, t, DEFAULT_TOL_1D)?;
        worst[0] = worst[0].max((r.value - 1.0).abs());
        for which in [JointWith::Max, JointWith::Min] {
            let r = region_integral_2d(|_, _| 1.0, |_, _| true, t, which, DEFAULT_TOL_2D)?;
            worst[1] = worst[1].max((r.value - 1.0).abs());
        }
        let r = region_integral_3d(|_, _, _| 1.0, |_, _, _| true, t, DEFAULT_TOL_3D)?;
        worst[2] = worst[2].max((r.value - 1.0).abs());
    }
    let passed =
        worst[0] <= DEFAULT_TOL_1D && worst[1] <= DEFAULT_TOL_2D && worst[2] <= DEFAULT_TOL_3D;
    Ok((
        passed,
        format!(
            "largest deviation from 1: 1D {:.1e}, 2D {:.1e}, 3D {:.1e}",
            worst[0], worst[1], worst[2]
        ),
    ))
}

fn novikov() -> (bool, String) {
    let mut passed = true;
    let mut detail = Vec::new();
    for ((s1, s2), expected) in SIGMA_PAIRS.into_iter().zip(NOVIKOV_THRESHOLDS) {
        let params = ModelParams::figure2(s1, s2);
        let n = novikov_threshold(&params);
        passed &= !n.satisfied && (n.threshold - expected).abs() <= 1e-3 * expected;
        detail.push(format!(
            "sigma=({s1},{s2}): threshold {:.4}, satisfied={}",
            n.threshold, n.satisfied
        ));
        let mut edge = params;
        edge.beta = n.threshold;
        let at_edge = novikov_threshold(&edge).satisfied;
        passed &= at_edge;
        detail.push(format!("beta at threshold: satisfied={at_edge}"));
    }
    (passed, detail.join("; "))
}
