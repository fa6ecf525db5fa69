use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::conic::{conic_sag, family, FamilyMember, MemberKind};
use crate::solution::branch_plan;

use super::spec::{linspace, FamilySpec};
use super::svg::{self, Curve};
use super::{fmt_f64, write_file, CliError};

#[derive(Debug, Clone, PartialEq, Serialize)]
struct FamilyDoc<'a> {
    c0: f64,
    m: f64,
    epsilon: f64,
    members: &'a [FamilyMember],
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyOutput {
    pub members: Vec<FamilyMember>,
    pub json: String,
    pub svg: String,
}

/// Sampled profile over `[-ymax, ymax]`; failed samples become gaps.
pub fn member_curve(member: &FamilyMember, ymax: f64, samples: usize) -> Result<Curve, CliError> {
    let ys = linspace(-ymax, ymax, samples);
    let label = format!("eta_i = {}", fmt_f64(member.eta_i));
    Ok(match &member.kind {
        MemberKind::OpticalSolution(p) => {
            let plan = branch_plan(p, ymax)?;
            let pts: Vec<_> = ys.par_iter().map(|&y| plan.evaluate(y).ok().map(|r| (r.z, y))).collect();
            Curve::from_samples(pts, false, label)
        }
        kind => {
            let c = kind.conic().expect("conic member");
            Curve::from_samples(ys.iter().map(|&y| Some((conic_sag(c, y).0, y))), true, label)
        }
    })
}

pub fn cmd_family(spec: &FamilySpec) -> Result<FamilyOutput, CliError> {
    let members = family(spec.c0, spec.m, spec.epsilon, &spec.eta_i)?;
    let doc = FamilyDoc {
        c0: spec.c0,
        m: spec.m,
        epsilon: spec.epsilon,
        members: &members,
    };
    let mut json = serde_json::to_string_pretty(&doc).map_err(|e| CliError::invalid(e.to_string()))?;
    json.push('\n');
    let curves = members
        .iter()
        .map(|m| member_curve(m, spec.ymax, spec.samples))
        .collect::<Result<Vec<_>, _>>()?;
    let svg = svg::render(&curves);
    Ok(FamilyOutput { members, json, svg })
}

pub fn write_family(out: &FamilyOutput, dir: &Path) -> Result<(PathBuf, PathBuf), CliError> {
    Ok((
        write_file(dir, "family.json", &out.json)?,
        write_file(dir, "family.svg", &out.svg)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn members_and_json_tags() {
        let spec = FamilySpec {
            c0: 0.3,
            m: 1.5,
            epsilon: 0.6,
            eta_i: vec![0.3, 0.18, 0.0],
            ymax: 2.0,
            samples: 41,
        };
        let out = cmd_family(&spec).unwrap();
        assert_eq!(out.members.len(), 3);
        assert!(out.json.contains(r#""kind": "OpticalSolution""#));
        assert!(out.json.contains(r#""kind": "Circle""#));
        assert!(out.json.contains(r#""kind": "Ellipse""#));
        assert_eq!(out.svg.matches("stroke-dasharray").count(), 4);
    }
}
