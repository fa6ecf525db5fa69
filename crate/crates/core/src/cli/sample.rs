use std::fmt::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::conic::{aspheric_terms, conic_implicit_residual, conic_sag, Region};
use crate::solution::{branch_plan, quartic_residual};

use super::spec::{CurveKind, CurveSpec};
use super::svg::{self, Curve};
use super::{fmt_f64, CliError, Format};

pub const CSV_HEADER: &str = "y,z,region,branch,lambda,one_minus_AB,residual_quartic";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRow {
    pub y: f64,
    pub z: f64,
    pub region: Region,
    /// Root and sign, e.g. `TrigA+`; `conic` for conic specs.
    pub branch: String,
    pub lambda: Option<f64>,
    #[serde(rename = "one_minus_AB")]
    pub one_minus_ab: f64,
    /// Quartic residual of the base curve for ovals, implicit conic
    /// residual for conics.
    pub residual_quartic: f64,
}

/// Rows in grid order. Aspheric terms are added to `z` only; the other
/// columns describe the base curve.
pub fn sample_rows(spec: &CurveSpec) -> Result<Vec<SampleRow>, CliError> {
    let ys = spec.grid();
    match spec.kind {
        CurveKind::Conic(c) => Ok(ys
            .iter()
            .map(|&y| {
                let (z, region) = conic_sag(&c, y);
                SampleRow {
                    y,
                    z: z + aspheric_terms(&spec.asphere, y),
                    region,
                    branch: "conic".to_string(),
                    lambda: None,
                    one_minus_ab: c.fold_margin(y),
                    residual_quartic: conic_implicit_residual(&c, z, y),
                }
            })
            .collect()),
        CurveKind::Oval(p) => {
            let plan = branch_plan(&p, spec.ymax)?;
            ys.par_iter()
                .map(|&y| {
                    let r = plan
                        .evaluate(y)
                        .map_err(|e| CliError::invalid(format!("evaluation failed at y = {y}: {e}")))?;
                    Ok(SampleRow {
                        y,
                        z: r.z + aspheric_terms(&spec.asphere, y),
                        region: r.region,
                        branch: format!("{}{}", r.branch.name(), r.sign.symbol()),
                        lambda: Some(r.lambda),
                        one_minus_ab: r.one_minus_ab,
                        residual_quartic: quartic_residual(&p, r.z, y),
                    })
                })
                .collect()
        }
    }
}

pub fn to_csv(rows: &[SampleRow]) -> String {
    let mut s = String::with_capacity(64 * (rows.len() + 1));
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            fmt_f64(r.y),
            fmt_f64(r.z),
            r.region.name(),
            r.branch,
            r.lambda.map(fmt_f64).unwrap_or_default(),
            fmt_f64(r.one_minus_ab),
            fmt_f64(r.residual_quartic)
        );
    }
    s
}

/// Mirrors the sampled half-profile to negative `y` for plotting.
pub fn to_svg(rows: &[SampleRow], dashed: bool) -> String {
    let pts = rows
        .iter()
        .rev()
        .map(|r| Some((r.z, -r.y)))
        .chain(rows.iter().skip_while(|r| r.y == 0.0).map(|r| Some((r.z, r.y))));
    svg::render(&[Curve::from_samples(pts, dashed, String::new())])
}

pub fn cmd_sample(spec: &CurveSpec, format: Format) -> Result<String, CliError> {
    let rows = sample_rows(spec)?;
    Ok(match format {
        Format::Csv => to_csv(&rows),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&rows).map_err(|e| CliError::invalid(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Svg => to_svg(&rows, matches!(spec.kind, CurveKind::Conic(_))),
    })
}
