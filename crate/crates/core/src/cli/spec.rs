//! Curve specification assembled from an optional JSON config and flags.

use std::path::Path;

use serde::Deserialize;

use crate::conic::ConicParams;
use crate::oval::{validate_params, OvalParams};
use crate::resolvent::disc_positive_roots;

use super::CliError;

/// Flat config document. Field names mirror the command-line flags.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub m: Option<f64>,
    pub eta_i: Option<OneOrMany>,
    pub eta_o: Option<f64>,
    pub epsilon: Option<f64>,
    pub c0: Option<f64>,
    #[serde(rename = "K")]
    pub k: Option<f64>,
    pub ymax: Option<f64>,
    pub samples: Option<usize>,
    pub asphere: Option<Vec<f64>>,
    pub sweep: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

impl OneOrMany {
    fn into_vec(self) -> Vec<f64> {
        match self {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::invalid(format!("config {}: {e}", path.display())))
    }

    /// Values in `over` replace those in `self`.
    pub fn overlay(self, over: Config) -> Config {
        Config {
            m: over.m.or(self.m),
            eta_i: over.eta_i.or(self.eta_i),
            eta_o: over.eta_o.or(self.eta_o),
            epsilon: over.epsilon.or(self.epsilon),
            c0: over.c0.or(self.c0),
            k: over.k.or(self.k),
            ymax: over.ymax.or(self.ymax),
            samples: over.samples.or(self.samples),
            asphere: over.asphere.or(self.asphere),
            sweep: over.sweep.or(self.sweep),
        }
    }

    pub fn eta_i_list(&self) -> Vec<f64> {
        self.eta_i.clone().map(OneOrMany::into_vec).unwrap_or_default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveKind {
    Oval(OvalParams),
    Conic(ConicParams),
}

/// One curve to sample or verify.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    pub kind: CurveKind,
    pub asphere: Vec<f64>,
    pub ymax: f64,
    pub samples: usize,
}

/// Family of curves sharing `c0` and `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub c0: f64,
    pub m: f64,
    pub epsilon: f64,
    pub eta_i: Vec<f64>,
    pub ymax: f64,
    pub samples: usize,
}

pub(crate) fn require(value: Option<f64>, field: &str) -> Result<f64, CliError> {
    let v = value.ok_or_else(|| CliError::invalid(format!("missing field: {field}")))?;
    if !v.is_finite() {
        return Err(CliError::invalid(format!("invalid field: {field} = {v}")));
    }
    Ok(v)
}

fn check_grid(ymax: f64, samples: usize) -> Result<(), CliError> {
    if !(ymax.is_finite() && ymax > 0.0) {
        return Err(CliError::invalid(format!("invalid field: ymax = {ymax} (must be > 0)")));
    }
    if samples < 2 {
        return Err(CliError::invalid(format!("invalid field: samples = {samples} (must be >= 2)")));
    }
    Ok(())
}

pub(crate) fn oval_from(cfg: &Config) -> Result<OvalParams, CliError> {
    let eta_i = match cfg.eta_i_list().as_slice() {
        [x] => *x,
        [] => return Err(CliError::invalid("missing field: eta_i")),
        _ => return Err(CliError::invalid("invalid field: eta_i (expected a single value)")),
    };
    let m = require(cfg.m, "m")?;
    let eta_o = require(cfg.eta_o, "eta_o")?;
    let epsilon = require(cfg.epsilon, "epsilon")?;
    validate_params(m, eta_i, eta_o, epsilon).map_err(CliError::from)
}

/// Default plan range for verification: `min(2, 1.5 * first disc root)`.
pub fn default_verify_ymax(p: &OvalParams) -> f64 {
    match disc_positive_roots(p) {
        Ok(r) if !r.is_empty() => (1.5 * r.as_slice()[0]).min(2.0),
        _ => 2.0,
    }
}

impl CurveSpec {
    pub fn from_config(cfg: &Config, default_samples: usize) -> Result<Self, CliError> {
        let conic_fields = cfg.k.is_some();
        let oval_fields = cfg.eta_i.is_some() || cfg.eta_o.is_some() || cfg.m.is_some();
        let kind = match (conic_fields, oval_fields) {
            (true, true) => {
                return Err(CliError::invalid(
                    "invalid field: K (conic and oval parameters are mutually exclusive)",
                ))
            }
            (true, false) => {
                let c = ConicParams::new(require(cfg.c0, "c0")?, require(cfg.k, "K")?)?;
                CurveKind::Conic(c)
            }
            (false, _) => CurveKind::Oval(oval_from(cfg)?),
        };
        let asphere = cfg.asphere.clone().unwrap_or_default();
        if let Some(bad) = asphere.iter().find(|c| !c.is_finite()) {
            return Err(CliError::invalid(format!("invalid field: asphere = {bad}")));
        }
        let spec = CurveSpec {
            kind,
            asphere,
            ymax: cfg.ymax.unwrap_or(2.0),
            samples: cfg.samples.unwrap_or(default_samples),
        };
        check_grid(spec.ymax, spec.samples)?;
        Ok(spec)
    }

    pub fn grid(&self) -> Vec<f64> {
        linspace(0.0, self.ymax, self.samples)
    }
}

impl FamilySpec {
    pub fn from_config(cfg: &Config) -> Result<Self, CliError> {
        let eta_i = cfg.eta_i_list();
        if eta_i.is_empty() {
            return Err(CliError::invalid("missing field: eta_i"));
        }
        if let Some(bad) = eta_i.iter().find(|x| !x.is_finite()) {
            return Err(CliError::invalid(format!("invalid field: eta_i = {bad}")));
        }
        let spec = FamilySpec {
            c0: require(cfg.c0, "c0")?,
            m: require(cfg.m, "m")?,
            epsilon: require(cfg.epsilon, "epsilon")?,
            eta_i,
            ymax: cfg.ymax.unwrap_or(2.0),
            samples: cfg.samples.unwrap_or(201),
        };
        check_grid(spec.ymax, spec.samples)?;
        Ok(spec)
    }
}

/// `n` points from `a` to `b` inclusive; the end points are exact.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    b
                } else {
                    a + (b - a) * (i as f64) / ((n - 1) as f64)
                }
            })
            .collect(),
    }
}
