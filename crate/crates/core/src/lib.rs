//! Explicit sag of Cartesian ovals through the vertex.
//!
//! The quartic of the oval is factored through its resolvent cubic, and the
//! factor carrying the origin is solved in closed form. Beyond the fold of
//! that factor the curve continues as `z = B`, the analogue of replacing a
//! conic by its osculating parabola.
//!
//! ```
//! use superconic::{branch_plan, validate_params};
//!
//! let p = validate_params(1.5, 0.3, 0.26, 0.6).unwrap();
//! let plan = branch_plan(&p, 2.0).unwrap();
//! let z = plan.evaluate(0.5).unwrap().z;
//! assert!(z > 0.0);
//! ```

pub mod cli;
pub mod conic;
pub mod error;
pub mod oracle;
pub mod oval;
pub mod resolvent;
pub mod scalar;
pub mod solution;

pub use conic::{
    asphere_sag, conic_implicit_residual, conic_sag, family, limit_conic_eta_i_zero, limit_conic_eta_o_zero,
    Asphere, ConicParams, FamilyMember, MemberKind, Region,
};
pub use error::{Error, Result};
pub use oval::{curvature, swap_form, validate_params, DegenerateKind, OvalParams};
pub use resolvent::{disc_positive_roots, LambdaBranch};
pub use solution::{branch_plan, BranchPlan, EvalResult, SolutionSign};
