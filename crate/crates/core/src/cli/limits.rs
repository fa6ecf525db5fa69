//! Convergence of the oval towards its conic limits.

use std::fmt::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::conic::{conic_sag, limit_conic_eta_i_zero, limit_conic_eta_o_zero, ConicParams, Region};
use crate::error::Result;
use crate::oval::{validate_params, OvalParams};
use crate::resolvent::disc_positive_roots;
use crate::solution::branch_plan;

use super::spec::{linspace, require, Config};
use super::{fmt_f64, CliError};

pub const DEFAULT_SWEEP: [f64; 4] = [1e-3, 1e-4, 1e-5, 1e-6];

/// Which parameter is sent to zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum LimitKind {
    /// `eta_i -> 0` with `eta_o` fixed.
    EtaIZero { m: f64, eta_o: f64, epsilon: f64 },
    /// `eta_o -> 0` with `eta_i` fixed.
    EtaOZero { m: f64, eta_i: f64, epsilon: f64 },
}

impl LimitKind {
    pub fn conic(&self) -> ConicParams {
        match *self {
            LimitKind::EtaIZero { m, eta_o, epsilon } => limit_conic_eta_i_zero(m, eta_o, epsilon),
            LimitKind::EtaOZero { m, eta_i, epsilon } => limit_conic_eta_o_zero(m, eta_i, epsilon),
        }
    }

    pub fn params(&self, eta: f64) -> Result<OvalParams> {
        match *self {
            LimitKind::EtaIZero { m, eta_o, epsilon } => validate_params(m, eta, eta_o, epsilon),
            LimitKind::EtaOZero { m, eta_i, epsilon } => validate_params(m, eta_i, eta, epsilon),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            LimitKind::EtaIZero { .. } => "eta_i",
            LimitKind::EtaOZero { .. } => "eta_o",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitRow {
    pub eta: f64,
    /// `sup |z - z_conic|` over Exact samples of the oval.
    pub sup_exact: f64,
    pub worst_y_exact: f64,
    /// `sup |B - c0 y^2|` over Interpolated samples.
    pub sup_interpolated: f64,
    pub worst_y_interpolated: f64,
    pub exact_points: usize,
    pub interpolated_points: usize,
    /// Positive zeros of the resolvent discriminant, anywhere in `y`.
    pub disc_roots: Vec<f64>,
}

pub fn limit_row(kind: &LimitKind, eta: f64, ys: &[f64]) -> Result<LimitRow> {
    let conic = kind.conic();
    let p = kind.params(eta)?;
    let ymax = ys.iter().fold(0.0f64, |a, &y| a.max(y.abs()));
    let plan = branch_plan(&p, ymax)?;
    let evals = ys.par_iter().map(|&y| plan.evaluate(y).map(|r| (y, r))).collect::<Result<Vec<_>>>()?;
    let mut row = LimitRow {
        eta,
        sup_exact: 0.0,
        worst_y_exact: f64::NAN,
        sup_interpolated: 0.0,
        worst_y_interpolated: f64::NAN,
        exact_points: 0,
        interpolated_points: 0,
        disc_roots: disc_positive_roots(&p)?.0,
    };
    for (y, r) in evals {
        match r.region {
            Region::Exact => {
                row.exact_points += 1;
                let e = (r.z - conic_sag(&conic, y).0).abs();
                if !(e <= row.sup_exact) {
                    row.sup_exact = e;
                    row.worst_y_exact = y;
                }
            }
            Region::Interpolated => {
                row.interpolated_points += 1;
                let e = (r.b - conic.c0 * y * y).abs();
                if !(e <= row.sup_interpolated) {
                    row.sup_interpolated = e;
                    row.worst_y_interpolated = y;
                }
            }
        }
    }
    Ok(row)
}

pub fn limit_table(kind: &LimitKind, sweep: &[f64], ys: &[f64]) -> Result<Vec<LimitRow>> {
    sweep.iter().map(|&eta| limit_row(kind, eta, ys)).collect()
}

pub fn to_csv(kind: &LimitKind, rows: &[LimitRow]) -> String {
    let mut s = format!(
        "{},sup_exact,worst_y_exact,sup_interpolated,worst_y_interpolated,exact_points,interpolated_points,disc_roots\n",
        kind.name()
    );
    for r in rows {
        let roots: Vec<String> = r.disc_roots.iter().map(|&x| fmt_f64(x)).collect();
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            fmt_f64(r.eta),
            fmt_f64(r.sup_exact),
            fmt_f64(r.worst_y_exact),
            fmt_f64(r.sup_interpolated),
            fmt_f64(r.worst_y_interpolated),
            r.exact_points,
            r.interpolated_points,
            roots.join(";")
        );
    }
    s
}

pub fn kind_from(cfg: &Config) -> std::result::Result<LimitKind, CliError> {
    let m = require(cfg.m, "m")?;
    let epsilon = require(cfg.epsilon, "epsilon")?;
    let eta_i = cfg.eta_i_list();
    match (eta_i.as_slice(), cfg.eta_o) {
        ([], Some(eta_o)) => Ok(LimitKind::EtaIZero { m, eta_o, epsilon }),
        ([eta_i], None) => Ok(LimitKind::EtaOZero { m, eta_i: *eta_i, epsilon }),
        _ => Err(CliError::invalid(
            "invalid field: eta_i/eta_o (give exactly one; the other is swept to zero)",
        )),
    }
}

pub fn sweep_from(cfg: &Config) -> std::result::Result<Vec<f64>, CliError> {
    let sweep = cfg.sweep.clone().unwrap_or_else(|| DEFAULT_SWEEP.to_vec());
    if sweep.is_empty() || sweep.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(CliError::invalid("invalid field: sweep (values must be positive)"));
    }
    if sweep.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(CliError::invalid("invalid field: sweep (values must decrease)"));
    }
    Ok(sweep)
}

/// Default grid: 201 points over `[0, 2]`.
pub fn grid_from(cfg: &Config) -> std::result::Result<Vec<f64>, CliError> {
    let ymax = cfg.ymax.unwrap_or(2.0);
    let n = cfg.samples.unwrap_or(201);
    if !(ymax.is_finite() && ymax > 0.0) {
        return Err(CliError::invalid(format!("invalid field: ymax = {ymax} (must be > 0)")));
    }
    if n < 2 {
        return Err(CliError::invalid(format!("invalid field: samples = {n} (must be >= 2)")));
    }
    Ok(linspace(0.0, ymax, n))
}

pub fn cmd_limits(cfg: &Config) -> std::result::Result<String, CliError> {
    let kind = kind_from(cfg)?;
    let rows = limit_table(&kind, &sweep_from(cfg)?, &grid_from(cfg)?)?;
    Ok(to_csv(&kind, &rows))
}
