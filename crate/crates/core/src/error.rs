use thiserror::Error;

use crate::oval::DegenerateKind;
use crate::resolvent::LambdaBranch;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {field} = {value}")]
    InvalidInput { field: &'static str, value: f64 },

    #[error("degenerate oval parameters: {0}")]
    Degenerate(DegenerateKind),

    #[error("degenerate cubic: leading coefficient is zero")]
    DegenerateCubic,

    #[error("branch {branch:?} is not valid for discriminant {disc:e}")]
    InvalidBranch { branch: LambdaBranch, disc: f64 },

    #[error("factorization domain violated at y = {y}: a2 + 2*lambda*b2 = {value:e} (lambda = {lambda:e})")]
    FactorizationDomain { y: f64, lambda: f64, value: f64 },

    #[error("vanishing quadratic factor at y = {y}: p = {p:e} (lambda = {lambda:e})")]
    VanishingFactor { y: f64, lambda: f64, p: f64 },

    #[error("precondition failed: {0}")]
    Precondition(&'static str),

    #[error(
        "branch plan discontinuous at y = {y}: left {left}, right candidates {right_plus} (+) / {right_minus} (-)"
    )]
    BranchPlanFailure {
        y: f64,
        left: f64,
        right_plus: f64,
        right_minus: f64,
    },

    #[error("|y| = {y} exceeds the plan range {y_max}")]
    OutOfRange { y: f64, y_max: f64 },

    #[error("discriminant sextic returned {count} positive roots (at most 2 expected)")]
    DiscRootAnomaly { count: usize },

    #[error("oracle root tracking ambiguous at y = {y}")]
    OracleAmbiguity { y: f64 },

    #[error("y = {y} lies within {margin} of a region boundary or branch joint")]
    NearBoundary { y: f64, margin: f64 },
}
