//! CSV export. Every file starts with a `# schema: <name>/v<N>` line
//! followed by a header row.

use std::io::Write;

use serde::Serialize;

use crate::brownian::BrownianPath;
use crate::envelope::EnvelopeSample;
use crate::sim::TrajectoryBundle;

pub const BROWNIAN_SCHEMA: &str = "arena-sde/brownian/v1";
pub const BUNDLE_SCHEMA: &str = "arena-sde/bundle/v1";
pub const BOUNDS_SCHEMA: &str = "arena-sde/bounds/v1";
pub const MC_SCHEMA: &str = "arena-sde/montecarlo/v1";

#[derive(Debug, thiserror::Error)]
pub enum CsvError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("bundle has {bundle} points but {envelopes} envelope samples")]
    Length { bundle: usize, envelopes: usize },
}

fn writer<W: Write>(mut out: W, schema: &str) -> Result<csv::Writer<W>, CsvError> {
    writeln!(out, "# schema: {schema}")?;
    Ok(csv::Writer::from_writer(out))
}

fn write_rows<W: Write, R: Serialize>(
    out: W,
    schema: &str,
    rows: impl IntoIterator<Item = R>,
) -> Result<(), CsvError> {
    let mut w = writer(out, schema)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct BrownianRow {
    t: f64,
    #[serde(rename = "B")]
    b: f64,
    #[serde(rename = "M")]
    max: f64,
    m: f64,
}

/// Columns `t, B, M, m`.
pub fn write_brownian<W: Write>(out: W, path: &BrownianPath) -> Result<(), CsvError> {
    let rows = (0..path.t_grid.len()).map(|i| BrownianRow {
        t: path.t_grid[i],
        b: path.values[i],
        max: path.run_max[i],
        m: path.run_min[i],
    });
    write_rows(out, BROWNIAN_SCHEMA, rows)
}

#[derive(Serialize)]
struct BundleRow {
    t: f64,
    #[serde(rename = "X")]
    x: f64,
    #[serde(rename = "Y")]
    y: f64,
    #[serde(rename = "L1")]
    l1: f64,
    #[serde(rename = "L2")]
    l2: f64,
    y_lo: f64,
    y_hi: f64,
    x_lo: f64,
    x_hi: f64,
    regime_used: &'static str,
}

/// Columns `t, X, Y, L1, L2, y_lo, y_hi, x_lo, x_hi, regime_used`, keeping
/// every `stride`-th grid point (the last point is always written).
pub fn write_bundle<W: Write>(
    out: W,
    bundle: &TrajectoryBundle,
    envelopes: &[EnvelopeSample],
    stride: usize,
) -> Result<(), CsvError> {
    if envelopes.len() != bundle.len() {
        return Err(CsvError::Length {
            bundle: bundle.len(),
            envelopes: envelopes.len(),
        });
    }
    let stride = stride.max(1);
    let last = bundle.len() - 1;
    let rows = (0..bundle.len())
        .filter(|i| i % stride == 0 || *i == last)
        .map(|i| {
            let e = &envelopes[i];
            BundleRow {
                t: bundle.t_grid[i],
                x: bundle.x[i],
                y: bundle.y[i],
                l1: bundle.l1[i],
                l2: bundle.l2[i],
                y_lo: e.y_lo,
                y_hi: e.y_hi,
                x_lo: e.x_lo,
                x_hi: e.x_hi,
                regime_used: e.regime_used.as_str(),
            }
        });
    write_rows(out, BUNDLE_SCHEMA, rows)
}

/// One row of the bounds table. Empty cells stand for quantities that do
/// not apply (no `q` for a prey moment, no MC run without validation).
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BoundsRow {
    pub quantity: String,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub z1: Option<f64>,
    pub z2: Option<f64>,
    pub t: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub err_lo: Option<f64>,
    pub err_hi: Option<f64>,
    pub regime_tag: String,
    pub validity_warning: String,
    pub k2_variant: String,
    pub mc_estimate: Option<f64>,
    pub mc_std_err: Option<f64>,
    pub mc_verdict: String,
}

pub fn write_bounds<W: Write>(out: W, rows: &[BoundsRow]) -> Result<(), CsvError> {
    write_rows(out, BOUNDS_SCHEMA, rows)
}

/// One Monte Carlo estimate; `level` holds a moment order `p,q` or a CDF
/// level `z1,z2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McRow {
    pub quantity: String,
    pub level: String,
    pub estimate: f64,
    pub std_err: f64,
    pub n_paths: usize,
    pub seed_base: u64,
}

pub fn write_mc<W: Write>(out: W, rows: &[McRow]) -> Result<(), CsvError> {
    write_rows(out, MC_SCHEMA, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brownian::sample_path;
    use crate::envelope::envelopes;
    use crate::model::ModelParams;
    use crate::sim::simulate_seeded;

    #[test]
    fn brownian_layout() {
        let p = sample_path(1.0, 4, 1).unwrap();
        let mut buf = Vec::new();
        write_brownian(&mut buf, &p).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# schema: arena-sde/brownian/v1"));
        assert_eq!(lines.next(), Some("t,B,M,m"));
        assert_eq!(lines.count(), 5);
    }

    #[test]
    fn bundle_layout_and_stride() {
        let params = ModelParams::figure2(0.5, 0.3);
        let b = simulate_seeded(&params, 1.0, 10, 1, 0, 0.0).unwrap();
        let env = envelopes(&b, &params);
        let mut buf = Vec::new();
        write_bundle(&mut buf, &b, &env, 4).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[1], "t,X,Y,L1,L2,y_lo,y_hi,x_lo,x_hi,regime_used");
        // points 0, 4, 8 and the final point 10
        assert_eq!(lines.len(), 2 + 4);
        assert!(write_bundle(Vec::new(), &b, &env[1..], 1).is_err());
    }

    #[test]
    fn bounds_header() {
        let mut buf = Vec::new();
        write_bounds(&mut buf, &[BoundsRow::default()]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().nth(1).unwrap().starts_with(
            "quantity,p,q,z1,z2,t,lower,upper,err_lo,err_hi,regime_tag,validity_warning"
        ));
    }
}
