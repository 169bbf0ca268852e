//! Run configuration: model parameters plus run settings, read from flat
//! `key = value` text or from a JSON object with the same keys.
//!
//! Model keys not present fall back to the `sigma = (0.5, 0.3)` preset.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use arena_sde::bounds::{K2Variant, Tolerances};
use arena_sde::config::FlatConfig;
use arena_sde::model::PARAM_KEYS;
use arena_sde::ModelParams;
use serde::Serialize;

pub const RUN_KEYS: [&str; 13] = [
    "horizon",
    "dt",
    "n_paths",
    "mc_paths",
    "seed_base",
    "stride",
    "tol_1d",
    "tol_2d",
    "tol_3d",
    "out",
    "k2_variant",
    "moments",
    "levels",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub params: ModelParams,
    pub horizon: f64,
    pub dt: f64,
    /// Paths written by `simulate`.
    pub n_paths: usize,
    /// Paths used for Monte Carlo validation of bounds.
    pub mc_paths: usize,
    pub seed_base: u64,
    /// Keep every `stride`-th grid point in bundle files.
    pub stride: usize,
    pub tolerances: Tolerances,
    pub out: Option<PathBuf>,
    pub k2_variant: K2Variant,
    /// Moment orders `(p, q)` for `bounds`.
    pub moments: Vec<(f64, f64)>,
    /// Distribution-function levels `(z1, z2)` for `bounds`.
    pub levels: Vec<(f64, f64)>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: ModelParams::figure2(0.5, 0.3),
            horizon: 10.0,
            dt: arena_sde::montecarlo::DEFAULT_DT,
            n_paths: 1,
            mc_paths: arena_sde::montecarlo::DEFAULT_SYSTEM_PATHS,
            seed_base: 0,
            stride: 1,
            tolerances: Tolerances::default(),
            out: None,
            k2_variant: K2Variant::default(),
            moments: Vec::new(),
            levels: Vec::new(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    /// Parses flat text, or JSON when the first non-blank character is `{`.
    pub fn parse(text: &str) -> Result<Self> {
        let flat = if text.trim_start().starts_with('{') {
            flat_from_json(text)?
        } else {
            FlatConfig::parse(text)?
        };
        let allowed: Vec<&str> = PARAM_KEYS.iter().chain(RUN_KEYS.iter()).copied().collect();
        flat.reject_unknown(&allowed)?;
        Self::from_flat(&flat)
    }

    fn from_flat(cfg: &FlatConfig) -> Result<Self> {
        let mut rc = RunConfig::default();
        let p = &mut rc.params;
        for (key, slot) in [
            ("a1", &mut p.a1),
            ("b1", &mut p.b1),
            ("c1", &mut p.c1),
            ("a2", &mut p.a2),
            ("b2", &mut p.b2),
            ("c2", &mut p.c2),
            ("beta", &mut p.beta),
            ("sigma1", &mut p.sigma1),
            ("sigma2", &mut p.sigma2),
            ("x0", &mut p.x0),
            ("y0", &mut p.y0),
        ] {
            if let Some(v) = cfg.get_f64(key)? {
                *slot = v;
            }
        }
        rc.params.validate_limits()?;

        let positive = |key: &str, default: f64| -> Result<f64> {
            let v = cfg.get_f64(key)?.unwrap_or(default);
            if !(v > 0.0 && v.is_finite()) {
                bail!("{} must be positive, got {v}", located(cfg, key));
            }
            Ok(v)
        };
        let count = |key: &str, default: usize| -> Result<usize> {
            let v = cfg.get_u64(key)?.map_or(default, |v| v as usize);
            if v == 0 {
                bail!("{} must be at least 1", located(cfg, key));
            }
            Ok(v)
        };
        rc.horizon = positive("horizon", rc.horizon)?;
        rc.dt = positive("dt", rc.dt)?;
        if rc.dt >= rc.horizon {
            bail!(
                "dt = {} must be smaller than horizon = {}",
                rc.dt,
                rc.horizon
            );
        }
        rc.n_paths = count("n_paths", rc.n_paths)?;
        rc.mc_paths = count("mc_paths", rc.mc_paths)?;
        rc.stride = count("stride", rc.stride)?;
        rc.seed_base = cfg.get_u64("seed_base")?.unwrap_or(rc.seed_base);
        rc.tolerances = Tolerances {
            tol_1d: positive("tol_1d", rc.tolerances.tol_1d)?,
            tol_2d: positive("tol_2d", rc.tolerances.tol_2d)?,
            tol_3d: positive("tol_3d", rc.tolerances.tol_3d)?,
        };
        rc.out = cfg.get_str("out").map(PathBuf::from);
        if let Some(v) = cfg.get_str("k2_variant") {
            rc.k2_variant = parse_variant(v).with_context(|| located(cfg, "k2_variant"))?;
        }
        if let Some(v) = cfg.get_str("moments") {
            rc.moments = parse_pairs(v).with_context(|| located(cfg, "moments"))?;
        }
        if let Some(v) = cfg.get_str("levels") {
            rc.levels = parse_pairs(v).with_context(|| located(cfg, "levels"))?;
        }
        Ok(rc)
    }
}

fn located(cfg: &FlatConfig, key: &str) -> String {
    match cfg.line_of(key) {
        Some(line) if line > 0 => format!("line {line}: `{key}`"),
        _ => format!("`{key}`"),
    }
}

pub fn parse_variant(s: &str) -> Result<K2Variant> {
    match s.trim() {
        "as-printed" => Ok(K2Variant::AsPrinted),
        "corrected" => Ok(K2Variant::Corrected),
        other => bail!("unknown K2 variant `{other}` (expected as-printed or corrected)"),
    }
}

/// Parses `a,b; c,d; ...`.
pub fn parse_pairs(s: &str) -> Result<Vec<(f64, f64)>> {
    s.split(';')
        .map(str::trim)
        .filter(|item| !item.is_empty())
        .map(parse_pair)
        .collect()
}

pub fn parse_pair(s: &str) -> Result<(f64, f64)> {
    let Some((a, b)) = s.split_once(',') else {
        bail!("expected `a,b`, found `{s}`");
    };
    let num = |v: &str| -> Result<f64> {
        let x: f64 = v
            .trim()
            .parse()
            .with_context(|| format!("`{}` is not a number", v.trim()))?;
        if !x.is_finite() {
            bail!("`{}` is not finite", v.trim());
        }
        Ok(x)
    };
    Ok((num(a)?, num(b)?))
}

/// Flattens a JSON object into the flat representation; line numbers are
/// not available for JSON input.
fn flat_from_json(text: &str) -> Result<FlatConfig> {
    let value: serde_json::Value = serde_json::from_str(text).context("parsing JSON config")?;
    let serde_json::Value::Object(map) = value else {
        bail!("JSON config must be an object");
    };
    let mut cfg = FlatConfig::default();
    for (key, v) in map {
        let s = match v {
            serde_json::Value::String(s) => s,
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::Array(items) => json_pairs(&key, &items)?,
            other => bail!("`{key}`: unsupported JSON value {other}"),
        };
        cfg.insert(&key, s);
    }
    Ok(cfg)
}

/// `[[p, q], ...]` to `p,q; ...`.
fn json_pairs(key: &str, items: &[serde_json::Value]) -> Result<String> {
    let mut parts = Vec::new();
    for item in items {
        match item.as_array().map(Vec::as_slice) {
            Some([a, b]) if a.is_number() && b.is_number() => parts.push(format!("{a},{b}")),
            _ => bail!("`{key}`: expected a list of [a, b] pairs"),
        }
    }
    Ok(parts.join("; "))
}
