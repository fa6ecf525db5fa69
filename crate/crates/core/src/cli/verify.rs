//! Oracle suites run by `verify`; tolerances match the acceptance tests.

use std::fmt::Write;

use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;

use crate::conic::Region;
use crate::error::Result;
use crate::oracle::{continuous_root_track, snell_residual};
use crate::oval::{swap_form, OvalParams};
use crate::solution::{branch_plan, quadratic_residual, quartic_residual, BranchPlan, EvalResult};

use super::limits::{limit_table, LimitKind};
use super::spec::{default_verify_ymax, linspace, oval_from, Config};
use super::{fmt_f64, CliError};

pub const QUARTIC_TOL: f64 = 1e-8;
pub const QUADRATIC_TOL: f64 = 1e-9;
pub const TRACKING_TOL: f64 = 1e-8;
pub const SNELL_TOL: f64 = 1e-6;
pub const SNELL_STEP: f64 = 1e-6;
pub const SNELL_POINTS: usize = 20;
pub const SYMMETRY_TOL: f64 = 1e-9;
pub const LIMIT_TOL: f64 = 1e-4;
pub const GRID_POINTS: usize = 101;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize)]
pub enum Suite {
    Quartic,
    Tracking,
    Snell,
    Limits,
    Symmetry,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Quartic, Suite::Tracking, Suite::Snell, Suite::Limits, Suite::Symmetry];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Quartic => "quartic",
            Suite::Tracking => "tracking",
            Suite::Snell => "snell",
            Suite::Limits => "limits",
            Suite::Symmetry => "symmetry",
        }
    }
}

/// Largest value seen and where.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Worst {
    pub value: f64,
    pub y: f64,
    pub count: usize,
}

impl Default for Worst {
    fn default() -> Self {
        Self {
            value: 0.0,
            y: f64::NAN,
            count: 0,
        }
    }
}

impl Worst {
    pub fn add(&mut self, value: f64, y: f64) {
        self.count += 1;
        if !(value <= self.value) {
            self.value = value;
            self.y = y;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub metric: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub worst_y: f64,
    pub points: usize,
    pub passed: bool,
}

impl SuiteReport {
    fn new(suite: Suite, metric: &'static str, w: Worst, tolerance: f64) -> Self {
        Self {
            suite: suite.name(),
            metric,
            value: w.value,
            tolerance,
            worst_y: w.y,
            points: w.count,
            passed: w.value <= tolerance,
        }
    }
}

pub fn evaluate_all(plan: &BranchPlan, ys: &[f64]) -> Result<Vec<EvalResult>> {
    ys.par_iter().map(|&y| plan.evaluate(y)).collect()
}

/// Quartic and quadratic-factor residuals over Exact samples.
pub fn quartic_check(plan: &BranchPlan, ys: &[f64]) -> Result<(Worst, Worst)> {
    let mut quart = Worst::default();
    let mut quad = Worst::default();
    for (&y, r) in ys.iter().zip(evaluate_all(plan, ys)?) {
        if r.region == Region::Exact {
            quart.add(quartic_residual(plan.params(), r.z, y), y);
            quad.add(quadratic_residual(r.a, r.b, r.z), y);
        }
    }
    Ok((quart, quad))
}

/// `|evaluate - tracked|` over Exact samples where the tracked root exists.
pub fn tracking_check(plan: &BranchPlan, ys: &[f64]) -> Result<Worst> {
    let tracked = continuous_root_track(plan.params(), ys)?;
    let mut w = Worst::default();
    for ((&y, r), t) in ys.iter().zip(evaluate_all(plan, ys)?).zip(tracked) {
        if let (Region::Exact, Some(zt)) = (r.region, t) {
            w.add((r.z - zt).abs(), y);
        }
    }
    Ok(w)
}

/// Up to `n` grid points whose neighbours are Exact too, spread evenly.
pub fn interior_exact_points(plan: &BranchPlan, ys: &[f64], n: usize) -> Result<Vec<f64>> {
    let evals = evaluate_all(plan, ys)?;
    let joints: Vec<f64> = plan.joints().iter().map(|j| j.y).collect();
    let spacing = ys.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let candidates: Vec<f64> = (1..ys.len().saturating_sub(1))
        .filter(|&i| (i - 1..=i + 1).all(|j| evals[j].region == Region::Exact))
        .map(|i| ys[i])
        .filter(|y| joints.iter().all(|j| (y - j).abs() > 0.5 * spacing))
        .collect();
    if candidates.len() <= n {
        return Ok(candidates);
    }
    Ok((0..n)
        .map(|k| candidates[(k * (candidates.len() - 1)) / (n - 1).max(1)])
        .collect())
}

pub fn snell_check(plan: &BranchPlan, points: &[f64], h: f64) -> Result<Worst> {
    let joints: Vec<f64> = plan.joints().iter().map(|j| j.y).collect();
    let mut w = Worst::default();
    for &y in points {
        let r = snell_residual(plan.params(), |t| plan.evaluate(t).map(|e| e.z), y, h, &joints)?;
        w.add(r.abs(), y);
    }
    Ok(w)
}

/// Pointwise difference between the curve and its swapped form.
pub fn symmetry_check(plan: &BranchPlan, ys: &[f64]) -> Result<Worst> {
    let swapped = branch_plan(&swap_form(plan.params()), plan.y_max())?;
    let a = evaluate_all(plan, ys)?;
    let b = evaluate_all(&swapped, ys)?;
    let mut w = Worst::default();
    for ((&y, ra), rb) in ys.iter().zip(a).zip(b) {
        w.add((ra.z - rb.z).abs(), y);
    }
    Ok(w)
}

/// Sup errors of the `eta_i -> 0` sweep; fails unless strictly decreasing
/// and within tolerance at the last value.
fn limits_reports(p: &OvalParams, sweep: &[f64]) -> Result<Vec<SuiteReport>> {
    let kind = LimitKind::EtaIZero {
        m: p.m(),
        eta_o: p.eta_o(),
        epsilon: p.epsilon(),
    };
    let rows = limit_table(&kind, sweep, &linspace(0.0, 2.0, 201))?;
    let monotone = rows.windows(2).all(|w| w[1].sup_exact < w[0].sup_exact);
    let last = rows.last().expect("non-empty sweep");
    let mut exact = SuiteReport::new(
        Suite::Limits,
        "sup_exact",
        Worst {
            value: last.sup_exact,
            y: last.worst_y_exact,
            count: last.exact_points,
        },
        LIMIT_TOL,
    );
    exact.passed &= monotone;
    let interp = SuiteReport::new(
        Suite::Limits,
        "sup_interpolated",
        Worst {
            value: last.sup_interpolated,
            y: last.worst_y_interpolated,
            count: last.interpolated_points,
        },
        LIMIT_TOL,
    );
    Ok(vec![exact, interp])
}

pub fn run_suites(p: &OvalParams, ymax: f64, suites: &[Suite], sweep: &[f64]) -> Result<Vec<SuiteReport>> {
    let plan = branch_plan(p, ymax)?;
    let ys = linspace(0.0, ymax, GRID_POINTS);
    let mut out = Vec::new();
    for &s in suites {
        match s {
            Suite::Quartic => {
                let (quart, quad) = quartic_check(&plan, &ys)?;
                out.push(SuiteReport::new(s, "quartic_residual", quart, QUARTIC_TOL));
                out.push(SuiteReport::new(s, "quadratic_residual", quad, QUADRATIC_TOL));
            }
            Suite::Tracking => out.push(SuiteReport::new(s, "max_abs_dz", tracking_check(&plan, &ys)?, TRACKING_TOL)),
            Suite::Snell => {
                let pts = interior_exact_points(&plan, &ys, SNELL_POINTS)?;
                out.push(SuiteReport::new(s, "max_snell", snell_check(&plan, &pts, SNELL_STEP)?, SNELL_TOL));
            }
            Suite::Limits => out.extend(limits_reports(p, sweep)?),
            Suite::Symmetry => out.push(SuiteReport::new(s, "max_abs_dz", symmetry_check(&plan, &ys)?, SYMMETRY_TOL)),
        }
    }
    Ok(out)
}

pub fn cmd_verify(cfg: &Config, suites: &[Suite]) -> std::result::Result<Vec<SuiteReport>, CliError> {
    let p = oval_from(cfg)?;
    let ymax = match cfg.ymax {
        Some(y) if !(y.is_finite() && y > 0.0) => {
            return Err(CliError::invalid(format!("invalid field: ymax = {y} (must be > 0)")))
        }
        Some(y) => y,
        None => default_verify_ymax(&p),
    };
    let suites = if suites.is_empty() { &Suite::ALL[..] } else { suites };
    let sweep = super::limits::sweep_from(cfg)?;
    Ok(run_suites(&p, ymax, suites, &sweep)?)
}

pub fn render(reports: &[SuiteReport]) -> String {
    let mut s = String::from("suite,metric,value,tolerance,worst_y,points,status\n");
    for r in reports {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.suite,
            r.metric,
            fmt_f64(r.value),
            fmt_f64(r.tolerance),
            fmt_f64(r.worst_y),
            r.points,
            if r.passed { "PASS" } else { "FAIL" }
        );
    }
    s
}
