use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use arena_sde::bounds::{Bound, SystemBounds};
use arena_sde::envelope::envelopes;
use arena_sde::io::{write_bounds, write_bundle, BoundsRow};
use arena_sde::model::{
    classify_regime, gamma_stationary, novikov_threshold, GammaLaw, NovikovCheck,
};
use arena_sde::montecarlo::{
    cdf_of, moment_of, system_terminal_samples, Marginal, McConfig, McEstimate,
};
use arena_sde::sim::simulate_seeded;
use arena_sde::validation::{CheckOutcome, Fault, Scale, Suite};
use arena_sde::{ModelParams, Regime};
use serde::Serialize;

use crate::run_config::RunConfig;

/// Standard errors allowed when comparing a bound with its Monte Carlo
/// estimate.
const MC_SE_MULT: f64 = 3.0;

#[derive(Debug, Serialize)]
pub struct RegimeReport {
    pub params: ModelParams,
    pub regime: Regime,
    pub novikov: NovikovCheck,
    /// Stationary law of the prey comparison process, when it exists.
    pub prey_stationary: Option<GammaLaw>,
}

pub fn regime_report(rc: &RunConfig) -> RegimeReport {
    let params = rc.params;
    RegimeReport {
        params,
        regime: classify_regime(&params),
        novikov: novikov_threshold(&params),
        prey_stationary: gamma_stationary(&params.prey_logistic()).ok(),
    }
}

pub fn print_regime(report: &RegimeReport, json: bool, out: &mut impl Write) -> Result<()> {
    if json {
        serde_json::to_writer_pretty(&mut *out, report)?;
        writeln!(out)?;
        return Ok(());
    }
    let r = &report.regime;
    writeln!(out, "regime:               {}", r.tag)?;
    writeln!(out, "phi:                  {:.6}", r.phi)?;
    match r.stationary_threshold {
        Some(thr) => writeln!(out, "stationary threshold: {thr:.6}")?,
        None => writeln!(
            out,
            "stationary threshold: undefined (a2 + sigma2^2/2 >= c2)"
        )?,
    }
    let n = &report.novikov;
    writeln!(
        out,
        "novikov threshold:    {:.6} (beta = {}, satisfied = {})",
        n.threshold, report.params.beta, n.satisfied
    )?;
    match &report.prey_stationary {
        Some(g) => writeln!(
            out,
            "prey stationary law:  Gamma(shape {:.6}, rate {:.6}), mean {:.6}",
            g.shape,
            g.rate,
            g.mean()
        )?,
        None => writeln!(out, "prey stationary law:  none")?,
    }
    Ok(())
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn steps(rc: &RunConfig) -> usize {
    ((rc.horizon / rc.dt).round() as usize).max(1)
}

fn write_paths(
    rc: &RunConfig,
    params: &ModelParams,
    n_paths: usize,
    dir: &Path,
    prefix: &str,
    files: &mut Vec<PathBuf>,
) -> Result<()> {
    for i in 0..n_paths {
        let bundle = simulate_seeded(params, rc.horizon, steps(rc), rc.seed_base, i as u64, 0.0)?;
        let env = envelopes(&bundle, params);
        let path = dir.join(format!("{prefix}path{i:04}.csv"));
        let mut w = create(&path)?;
        write_bundle(&mut w, &bundle, &env, rc.stride)
            .with_context(|| format!("writing {}", path.display()))?;
        w.flush()?;
        files.push(path);
    }
    Ok(())
}

/// Writes one bundle file per path and returns the paths written.
pub fn simulate(rc: &RunConfig, dir: &Path, figure2: bool) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let mut files = Vec::new();
    if figure2 {
        let preset = |s1: f64, s2: f64| ModelParams {
            x0: rc.params.x0,
            y0: rc.params.y0,
            ..ModelParams::figure2(s1, s2)
        };
        for (s1, s2) in arena_sde::validation::SIGMA_PAIRS {
            let prefix = format!("figure2_sigma_{s1}_{s2}_");
            write_paths(rc, &preset(s1, s2), rc.n_paths, dir, &prefix, &mut files)?;
        }
        write_paths(
            rc,
            &preset(0.0, 0.0),
            1,
            dir,
            "figure2_deterministic_",
            &mut files,
        )?;
    } else {
        write_paths(rc, &rc.params, rc.n_paths, dir, "bundle_", &mut files)?;
    }
    Ok(files)
}

/// What a bounds row is about.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantity {
    /// `E[X^p Y^q]` through the joint bounds.
    Moment {
        p: f64,
        q: f64,
    },
    /// `E[X^p]` through the predator-driven prey bound.
    PreyMoment {
        p: f64,
    },
    /// `E[Y^q]` through the predator comparison bound.
    PredatorMoment {
        q: f64,
    },
    CdfX {
        z1: f64,
    },
    CdfY {
        z2: f64,
    },
    CdfJoint {
        z1: f64,
        z2: f64,
    },
}

impl Quantity {
    fn name(&self) -> &'static str {
        match self {
            Quantity::Moment { .. } => "moment",
            Quantity::PreyMoment { .. } => "prey_moment",
            Quantity::PredatorMoment { .. } => "predator_moment",
            Quantity::CdfX { .. } => "cdf_x",
            Quantity::CdfY { .. } => "cdf_y",
            Quantity::CdfJoint { .. } => "cdf_joint",
        }
    }

    /// Expands the requested moments and levels into rows.
    pub fn expand(moments: &[(f64, f64)], levels: &[(f64, f64)]) -> Vec<Quantity> {
        let mut out = Vec::new();
        for &(p, q) in moments {
            out.push(Quantity::Moment { p, q });
            if q == 0.0 && p > 0.0 {
                out.push(Quantity::PreyMoment { p });
            }
            if p == 0.0 && q > 0.0 {
                out.push(Quantity::PredatorMoment { q });
            }
        }
        for &(z1, z2) in levels {
            out.push(Quantity::CdfX { z1 });
            out.push(Quantity::CdfY { z2 });
            out.push(Quantity::CdfJoint { z1, z2 });
        }
        out
    }

    fn bounds(
        &self,
        sb: &SystemBounds,
        t: f64,
    ) -> (
        Option<arena_sde::Result<Bound>>,
        Option<arena_sde::Result<Bound>>,
    ) {
        match *self {
            Quantity::Moment { p, q } if p == 0.0 && q == 0.0 => {
                let one = Bound {
                    value: 1.0,
                    err_est: 0.0,
                    regime_tag: sb.regime_tag(),
                    validity_warning: None,
                    clamped_by: 0.0,
                };
                (Some(Ok(one.clone())), Some(Ok(one)))
            }
            Quantity::Moment { p, q } => (
                Some(sb.joint_moment_lower(p, q, t)),
                Some(sb.joint_moment_upper(p, q, t)),
            ),
            Quantity::PreyMoment { p } => (Some(sb.moment_lower_x(p, t)), None),
            Quantity::PredatorMoment { q } => (Some(sb.moment_lower_y(q, t)), None),
            Quantity::CdfX { z1 } => (Some(sb.cdf_lower_x(z1, t)), Some(sb.cdf_upper_x(z1, t))),
            Quantity::CdfY { z2 } => (Some(sb.cdf_lower_y(z2, t)), Some(sb.cdf_upper_y(z2, t))),
            Quantity::CdfJoint { z1, z2 } => (None, Some(sb.cdf_joint_upper(z1, z2, t))),
        }
    }

    fn estimate(&self, samples: &[(f64, f64)], t: f64, seed: u64) -> arena_sde::Result<McEstimate> {
        match *self {
            Quantity::Moment { p, q } => moment_of(samples, p, q, t, seed),
            Quantity::PreyMoment { p } => moment_of(samples, p, 0.0, t, seed),
            Quantity::PredatorMoment { q } => moment_of(samples, 0.0, q, t, seed),
            Quantity::CdfX { z1 } => Ok(cdf_of(samples, z1, 0.0, Marginal::X, seed)),
            Quantity::CdfY { z2 } => Ok(cdf_of(samples, 0.0, z2, Marginal::Y, seed)),
            Quantity::CdfJoint { z1, z2 } => Ok(cdf_of(samples, z1, z2, Marginal::Joint, seed)),
        }
    }

    fn fill_levels(&self, row: &mut BoundsRow) {
        match *self {
            Quantity::Moment { p, q } => (row.p, row.q) = (Some(p), Some(q)),
            Quantity::PreyMoment { p } => row.p = Some(p),
            Quantity::PredatorMoment { q } => row.q = Some(q),
            Quantity::CdfX { z1 } => row.z1 = Some(z1),
            Quantity::CdfY { z2 } => row.z2 = Some(z2),
            Quantity::CdfJoint { z1, z2 } => (row.z1, row.z2) = (Some(z1), Some(z2)),
        }
    }
}

/// Folds one side of a bracket into the row; failures become warnings.
fn side(
    r: Option<arena_sde::Result<Bound>>,
    label: &str,
    warnings: &mut Vec<String>,
) -> (Option<f64>, Option<f64>) {
    match r {
        None => (None, None),
        Some(Ok(b)) => {
            if let Some(w) = b.validity_warning {
                warnings.push(format!("{label}: {w}"));
            }
            (Some(b.value), Some(b.err_est))
        }
        Some(Err(arena_sde::Error::OutOfDomain(msg))) => {
            warnings.push(format!("{label}: out-of-domain: {msg}"));
            (None, None)
        }
        Some(Err(e)) => {
            warnings.push(format!("{label}: error: {e}"));
            (None, None)
        }
    }
}

pub fn bounds_rows(
    rc: &RunConfig,
    times: &[f64],
    quantities: &[Quantity],
    validate_mc: bool,
) -> Result<Vec<BoundsRow>> {
    let sb = SystemBounds::new(rc.params, rc.k2_variant)?.with_tolerances(rc.tolerances);
    let mc = McConfig {
        dt: rc.dt,
        ..McConfig::default()
    };
    let mut rows = Vec::new();
    for &t in times {
        let samples = if validate_mc {
            Some(system_terminal_samples(
                &rc.params,
                t,
                rc.mc_paths,
                rc.seed_base,
                &mc,
            )?)
        } else {
            None
        };
        for quantity in quantities {
            let (lo, hi) = quantity.bounds(&sb, t);
            let mut warnings = Vec::new();
            let (lower, err_lo) = side(lo, "lower", &mut warnings);
            let (upper, err_hi) = side(hi, "upper", &mut warnings);
            let mut row = BoundsRow {
                quantity: quantity.name().to_string(),
                t,
                lower,
                upper,
                err_lo,
                err_hi,
                regime_tag: sb.regime_tag().to_string(),
                validity_warning: warnings.join(" | "),
                k2_variant: rc.k2_variant.as_str().to_string(),
                ..BoundsRow::default()
            };
            quantity.fill_levels(&mut row);
            if let Some(samples) = &samples {
                match quantity.estimate(samples, t, rc.seed_base) {
                    Ok(est) => {
                        let slack = MC_SE_MULT * est.std_err;
                        let above_lower =
                            lower.map_or(true, |l| l - err_lo.unwrap_or(0.0) <= est.mean + slack);
                        let below_upper =
                            upper.map_or(true, |u| est.mean - slack <= u + err_hi.unwrap_or(0.0));
                        row.mc_estimate = Some(est.mean);
                        row.mc_std_err = Some(est.std_err);
                        row.mc_verdict = if above_lower && below_upper {
                            "inside"
                        } else {
                            "outside"
                        }
                        .to_string();
                    }
                    Err(e) => row.mc_verdict = format!("error: {e}"),
                }
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

pub fn write_bounds_to(
    rows: &[BoundsRow],
    dir: Option<&Path>,
    stdout: &mut impl Write,
) -> Result<Option<PathBuf>> {
    match dir {
        Some(dir) => {
            ensure_dir(dir)?;
            let path = dir.join("bounds.csv");
            let mut w = create(&path)?;
            write_bounds(&mut w, rows).with_context(|| format!("writing {}", path.display()))?;
            w.flush()?;
            Ok(Some(path))
        }
        None => {
            write_bounds(&mut *stdout, rows)?;
            Ok(None)
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub scale: &'static str,
    pub seed_base: u64,
    pub fault: Option<Fault>,
    pub checks: Vec<CheckOutcome>,
}

/// Runs every check, reporting each line through `progress` as it finishes.
pub fn validate(
    rc: &RunConfig,
    quick: bool,
    fault: Option<Fault>,
    mut progress: impl FnMut(&CheckOutcome),
) -> ValidationReport {
    let scale = if quick { Scale::quick() } else { Scale::full() };
    let mut suite = Suite::new(scale, rc.seed_base);
    suite.fault = fault;
    let checks: Vec<CheckOutcome> = (1..=9)
        .map(|id| {
            let c = suite.run(id);
            progress(&c);
            c
        })
        .collect();
    ValidationReport {
        passed: checks.iter().all(|c| c.passed),
        scale: if quick { "quick" } else { "full" },
        seed_base: rc.seed_base,
        fault,
        checks,
    }
}
