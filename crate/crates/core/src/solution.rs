//! The optical solution: the quartic root through the origin.
//!
//! For a real resolvent root `lambda` the quartic splits as
//! `(b2 x^2 + p+ x + q+)(b2 x^2 + p- x + q-)`, or in `z`,
//! `(A+ z^2 - 2z + B+)(A- z^2 - 2z + B-)`. The optical solution is
//! `z = B / (1 + sqrt(1 - AB))` for one of the two signs; where `1 - AB < 0`
//! the curve is continued by `z = B`.
//!
//! Which sign, and which closed-form `lambda`, is fixed at `y = 0` by the
//! ordering of the resolvent roots and then carried along `y` through the
//! zeros of the resolvent discriminant by a [`BranchPlan`].

use rayon::prelude::*;
use serde::Serialize;

use crate::conic::{aspheric_terms, Region};
use crate::error::{Error, Result};
use crate::oval::{resolvent_coeffs, Cubic, OvalParams, QuarticAt, ResolventCoeffs};
use crate::resolvent::{classify_cubic, disc_positive_roots, disc_sextic_coeffs, root, LambdaBranch};
use crate::scalar::{Dd, Scalar};

/// `1 - AB` in `[-CLAMP_FOLD, 0)` is treated as the fold itself.
pub const CLAMP_FOLD: f64 = 1e-12;
/// Allowed relative jump between adjacent segments at a joint.
pub const JOINT_TOL: f64 = 1e-7;
const VANISHING_P_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SolutionSign {
    /// `z = B+ / (1 + sqrt(1 - A+ B+))`.
    Plus,
    /// `z = B- / (1 + sqrt(1 - A- B-))`.
    Minus,
}

impl SolutionSign {
    pub fn value(self) -> f64 {
        match self {
            SolutionSign::Plus => 1.0,
            SolutionSign::Minus => -1.0,
        }
    }

    fn of(positive: bool) -> Self {
        if positive {
            SolutionSign::Plus
        } else {
            SolutionSign::Minus
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            SolutionSign::Plus => "+",
            SolutionSign::Minus => "-",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadFactors {
    pub p_plus: f64,
    pub p_minus: f64,
    pub q_plus: f64,
    pub q_minus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ABPair {
    pub a_plus: f64,
    pub a_minus: f64,
    pub b_plus: f64,
    pub b_minus: f64,
}

impl ABPair {
    pub fn get(&self, sign: SolutionSign) -> (f64, f64) {
        match sign {
            SolutionSign::Plus => (self.a_plus, self.b_plus),
            SolutionSign::Minus => (self.a_minus, self.b_minus),
        }
    }
}

/// `p` and `q` of one quadratic factor, in precision `T`.
fn factor<T: Scalar>(quart: &QuarticAt<T>, lambda: T, sign: f64, y: f64) -> Result<(T, T)> {
    let two = T::of(2.0);
    let w = quart.a2 + two * lambda * quart.b2;
    if w <= T::of(0.0) {
        return Err(Error::FactorizationDomain {
            y,
            lambda: lambda.to_f64(),
            value: w.to_f64(),
        });
    }
    let sw = w.sqrt();
    let s = T::of(sign);
    let p = quart.b1 + s * sw;
    let q = quart.b0 + lambda + s * (quart.a1 + two * lambda * quart.b1) / (two * sw);
    Ok((p, q))
}

fn check_p<T: Scalar>(quart: &QuarticAt<T>, p: T, lambda: T, y: f64) -> Result<()> {
    let scale = quart.b1.abs().to_f64() + (quart.a2.abs() + (T::of(2.0) * lambda * quart.b2).abs()).to_f64().sqrt();
    if p.abs().to_f64() <= VANISHING_P_TOL * scale {
        return Err(Error::VanishingFactor {
            y,
            lambda: lambda.to_f64(),
            p: p.to_f64(),
        });
    }
    Ok(())
}

pub fn factors(params: &OvalParams, y: f64, lambda: f64) -> Result<QuadFactors> {
    let quart = QuarticAt::<f64>::new(params, y);
    let (p_plus, q_plus) = factor(&quart, lambda, 1.0, y)?;
    let (p_minus, q_minus) = factor(&quart, lambda, -1.0, y)?;
    Ok(QuadFactors {
        p_plus,
        p_minus,
        q_plus,
        q_minus,
    })
}

pub fn ab_pair(params: &OvalParams, y: f64, lambda: f64) -> Result<ABPair> {
    let quart = QuarticAt::<f64>::new(params, y);
    let f = factors(params, y, lambda)?;
    check_p(&quart, f.p_plus, lambda, y)?;
    check_p(&quart, f.p_minus, lambda, y)?;
    let eio = params.eta_i() * params.eta_o();
    let b2 = quart.b2;
    Ok(ABPair {
        a_plus: -2.0 * b2 * eio / f.p_plus,
        a_minus: -2.0 * b2 * eio / f.p_minus,
        b_plus: -2.0 * f.q_plus / (eio * f.p_plus),
        b_minus: -2.0 * f.q_minus / (eio * f.p_minus),
    })
}

/// Root and sign to start from at `y = 0`.
///
/// With `sigma * delta != 0` the largest trigonometric root is used and the
/// sign follows from the ordering of the three roots at the origin. When
/// `sigma` or `delta` vanishes the single-root formula is used with the sign
/// of `k`.
pub fn initial_selection(p: &OvalParams) -> (LambdaBranch, SolutionSign) {
    if p.sigma_is_zero() || p.delta_is_zero() {
        return (LambdaBranch::PositiveDisc, SolutionSign::of(p.k() > 0.0));
    }
    let sign = selection_for_branch(p, LambdaBranch::TrigA).expect("trig branch with sigma*delta != 0");
    (LambdaBranch::TrigA, sign)
}

/// Sign that makes `branch` produce the optical solution near `y = 0`.
pub fn selection_for_branch(p: &OvalParams, branch: LambdaBranch) -> Result<SolutionSign> {
    if p.sigma_is_zero() || p.delta_is_zero() {
        return Err(Error::Precondition("sign tables need sigma * delta != 0"));
    }
    let by_k = SolutionSign::of(p.k() > 0.0);
    let by_eta = SolutionSign::of(p.eta_i() > p.eta_o());
    let (delta_pos, sigma_pos) = (p.delta() > 0.0, p.sigma() > 0.0);
    // Each branch is matched to the root it starts from at y = 0:
    // roots 0 and 2k^2 take the sign of k, the sigma root the sign of eta_i - eta_o.
    Ok(match branch {
        LambdaBranch::TrigA => {
            if delta_pos {
                by_k
            } else {
                by_eta
            }
        }
        LambdaBranch::TrigB => {
            if delta_pos && sigma_pos {
                by_eta
            } else {
                by_k
            }
        }
        LambdaBranch::TrigC => {
            if delta_pos && !sigma_pos {
                by_eta
            } else {
                by_k
            }
        }
        LambdaBranch::PositiveDisc => {
            return Err(Error::Precondition("sign tables cover the trigonometric roots only"))
        }
    })
}

/// Value of the optical solution at one `y` with diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    pub z: f64,
    pub region: Region,
    pub lambda: f64,
    pub one_minus_ab: f64,
    pub a: f64,
    pub b: f64,
    pub branch: LambdaBranch,
    pub sign: SolutionSign,
    /// The Exact sample is the factor's larger root `(1 + sqrt(1 - AB)) / A`.
    pub conjugate: bool,
}

/// Evaluates the candidate selected by `(branch, sign)` at `y >= 0`.
///
/// `conjugate` picks the other root of the quadratic factor; it is needed
/// past a zero of `p`, where `B / (1 + sqrt(1 - AB))` changes from one root
/// to the other.
///
/// `lambda` comes from the closed form and is then refined by Newton steps
/// on the resolvent in double-double precision; the factor coefficients
/// are assembled in the same precision, since near the conic limits `q`
/// is a small difference of order-one terms.
pub fn solve_with(
    params: &OvalParams,
    resolvent: &ResolventCoeffs,
    y: f64,
    branch: LambdaBranch,
    sign: SolutionSign,
    conjugate: bool,
) -> Result<EvalResult> {
    let cubic = resolvent.at(y);
    let cls = classify_cubic(&cubic)?;
    let lambda0 = root(&cls, branch, cubic.a, cubic.b)?;

    let quart = QuarticAt::<Dd>::new(params, y);
    let lambda = polish_root(&quart.resolvent(), lambda0, &cubic);

    let (p, q) = factor(&quart, lambda, sign.value(), y)?;
    check_p(&quart, p, lambda, y)?;
    let eio = Dd::of(params.eta_i()) * Dd::of(params.eta_o());
    let two = Dd::of(2.0);
    let a = -(two * quart.b2 * eio) / p;
    let b = -(two * q) / (eio * p);
    let one_minus_ab = Dd::of(1.0) - a * b;
    let oab = one_minus_ab.to_f64();

    let (z, region) = if oab >= -CLAMP_FOLD {
        let root = if oab > 0.0 { one_minus_ab.sqrt() } else { Dd::of(0.0) };
        let z = if conjugate {
            (Dd::of(1.0) + root) / a
        } else {
            b / (Dd::of(1.0) + root)
        };
        (z.to_f64(), Region::Exact)
    } else {
        (b.to_f64(), Region::Interpolated)
    };
    Ok(EvalResult {
        z,
        region,
        lambda: lambda.to_f64(),
        one_minus_ab: oab,
        a: a.to_f64(),
        b: b.to_f64(),
        branch,
        sign,
        conjugate,
    })
}

/// `p` of the selected factor and its discriminant `p^2 - 4 b2 q` in `x`.
fn factor_p(params: &OvalParams, resolvent: &ResolventCoeffs, y: f64, branch: LambdaBranch, sign: SolutionSign) -> Option<(f64, f64)> {
    let cubic = resolvent.at(y);
    let cls = classify_cubic(&cubic).ok()?;
    let lambda = root(&cls, branch, cubic.a, cubic.b).ok()?;
    let quart = QuarticAt::<f64>::new(params, y);
    let (p, q) = factor(&quart, lambda, sign.value(), y).ok()?;
    Some((p, p * p - 4.0 * quart.b2 * q))
}

/// Zeros of `p` inside `(lo, hi)` at which the factor's roots are real.
fn factor_pole_crossings(params: &OvalParams, resolvent: &ResolventCoeffs, seg: &Segment) -> Vec<f64> {
    const SCAN: usize = 256;
    let at = |y: f64| factor_p(params, resolvent, y, seg.branch, seg.sign);
    let ys: Vec<f64> = (0..=SCAN)
        .map(|i| seg.y_lo + (seg.y_hi - seg.y_lo) * i as f64 / SCAN as f64)
        .collect();
    let vals: Vec<_> = ys.iter().map(|&y| at(y)).collect();
    let mut out = Vec::new();
    for i in 0..SCAN {
        let (Some((p0, d0)), Some((p1, d1))) = (vals[i], vals[i + 1]) else {
            continue;
        };
        if p0 == 0.0 || (p0 > 0.0) == (p1 > 0.0) || d0 <= 0.0 || d1 <= 0.0 {
            continue;
        }
        let (mut lo, mut hi) = (ys[i], ys[i + 1]);
        let lo_positive = p0 > 0.0;
        while hi - lo > 4.0 * f64::EPSILON * hi {
            let mid = 0.5 * (lo + hi);
            match at(mid) {
                Some((p, _)) if p != 0.0 && (p > 0.0) == lo_positive => lo = mid,
                Some(_) => hi = mid,
                None => break,
            }
        }
        out.push(0.5 * (lo + hi));
    }
    out
}

fn polish_root(cubic: &Cubic<Dd>, start: f64, approx: &Cubic) -> Dd {
    let scale = approx.b.abs().max(approx.c.abs().sqrt()).max(approx.a.abs()) / approx.a.abs();
    let mut x = Dd::of(start);
    let mut fx = cubic.eval(x).abs();
    for _ in 0..4 {
        let d = cubic.derivative_at(x);
        if d.to_f64() == 0.0 {
            break;
        }
        let step = cubic.eval(x) / d;
        if step.to_f64().abs() > 1e-6 * (start.abs() + scale) {
            break;
        }
        let next = x - step;
        let fnext = cubic.eval(next).abs();
        if fnext.to_f64() > fx.to_f64() {
            break;
        }
        x = next;
        fx = fnext;
        if step.to_f64() == 0.0 {
            break;
        }
    }
    x
}

/// A run of `y` over which one closed-form root and one sign are used.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Segment {
    pub y_lo: f64,
    pub y_hi: f64,
    pub branch: LambdaBranch,
    pub sign: SolutionSign,
    /// Root of the factor used at `y_lo`.
    pub conjugate: bool,
    /// Zeros of `p` inside the segment where the factor root in use swaps.
    pub flips: Vec<f64>,
}

impl Segment {
    pub fn conjugate_at(&self, y: f64) -> bool {
        self.conjugate ^ (self.flips.partition_point(|&f| f < y) % 2 == 1)
    }
}

/// Continuity check where two segments meet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Joint {
    pub y: f64,
    pub z_left: f64,
    pub z_right: f64,
}

/// Root/sign schedule over `[0, y_max]`; joints sit at the positive zeros
/// of the resolvent discriminant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchPlan {
    params: OvalParams,
    #[serde(skip)]
    resolvent: ResolventCoeffs,
    y_max: f64,
    segments: Vec<Segment>,
    joints: Vec<Joint>,
}

pub fn branch_plan(params: &OvalParams, y_max: f64) -> Result<BranchPlan> {
    if !y_max.is_finite() || y_max <= 0.0 {
        return Err(Error::InvalidInput { field: "y_max", value: y_max });
    }
    let resolvent = resolvent_coeffs(params);
    let sextic = disc_sextic_coeffs(params);
    let (branch0, sign0) = initial_selection(params);

    let mut cuts: Vec<f64> = disc_positive_roots(params)?
        .as_slice()
        .chunks(2)
        .filter(|pair| pair.len() == 1 || pair[0] != pair[1])
        .flatten()
        .copied()
        .filter(|&y| y > 0.0 && y < y_max)
        .collect();
    cuts.dedup();

    let mut bounds = Vec::with_capacity(cuts.len() + 2);
    bounds.push(0.0);
    bounds.extend(&cuts);
    bounds.push(y_max);

    // Branch that continues the root through a disc zero at `y` into a
    // region where disc has the sign found at `probe`.
    let continuing = |y: f64, probe: f64| -> Result<LambdaBranch> {
        if sextic.eval(probe) > 0.0 {
            return Ok(LambdaBranch::PositiveDisc);
        }
        let cls = classify_cubic(&resolvent.at(y))?;
        Ok(if cls.r > 0.0 {
            LambdaBranch::TrigA
        } else {
            LambdaBranch::TrigC
        })
    };

    let first_branch = if branch0.is_trig() {
        branch0
    } else {
        continuing(0.0, 0.5 * bounds[1])?
    };
    let mut first = Segment {
        y_lo: 0.0,
        y_hi: bounds[1],
        branch: first_branch,
        sign: sign0,
        conjugate: false,
        flips: Vec::new(),
    };
    first.flips = factor_pole_crossings(params, &resolvent, &first);
    let mut segments = vec![first];
    let mut joints = Vec::with_capacity(cuts.len());

    for w in bounds.windows(2).skip(1) {
        let (y0, y1) = (w[0], w[1]);
        let prev = segments.last().expect("at least one segment");
        let branch = continuing(y0, 0.5 * (y0 + y1))?;
        let left = solve_with(params, &resolvent, y0, prev.branch, prev.sign, prev.conjugate_at(y0))?;
        let mut best: Option<(f64, SolutionSign, bool, f64)> = None;
        let mut candidates = [f64::NAN; 2];
        for (i, sign) in [SolutionSign::Plus, SolutionSign::Minus].into_iter().enumerate() {
            for conjugate in [false, true] {
                let Ok(r) = solve_with(params, &resolvent, y0, branch, sign, conjugate) else {
                    continue;
                };
                if !conjugate {
                    candidates[i] = r.z;
                }
                let gap = (r.z - left.z).abs();
                if best.is_none_or(|b| gap < b.0) {
                    best = Some((gap, sign, conjugate, r.z));
                }
            }
        }
        let Some((_, sign, conjugate, z_right)) = best.filter(|b| b.0 <= JOINT_TOL * (1.0 + left.z.abs())) else {
            return Err(Error::BranchPlanFailure {
                y: y0,
                left: left.z,
                right_plus: candidates[0],
                right_minus: candidates[1],
            });
        };
        joints.push(Joint {
            y: y0,
            z_left: left.z,
            z_right,
        });
        let mut seg = Segment {
            y_lo: y0,
            y_hi: y1,
            branch,
            sign,
            conjugate,
            flips: Vec::new(),
        };
        seg.flips = factor_pole_crossings(params, &resolvent, &seg);
        segments.push(seg);
    }

    Ok(BranchPlan {
        params: *params,
        resolvent,
        y_max,
        segments,
        joints,
    })
}

/// One grid sample; errors stay in the sample.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSample {
    pub y: f64,
    pub result: Result<EvalResult>,
    /// Relative residual of the squared oval equation at the sample.
    pub residual_quartic: Option<f64>,
}

impl BranchPlan {
    pub fn params(&self) -> &OvalParams {
        &self.params
    }
    pub fn y_max(&self) -> f64 {
        self.y_max
    }
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }
    pub fn joints(&self) -> &[Joint] {
        &self.joints
    }

    pub fn segment_for(&self, y: f64) -> &Segment {
        let i = self.segments.partition_point(|s| s.y_hi < y);
        &self.segments[i.min(self.segments.len() - 1)]
    }

    /// The optical solution (or its interpolating curve) at `y`.
    pub fn evaluate(&self, y: f64) -> Result<EvalResult> {
        let ya = y.abs();
        if !(ya <= self.y_max * (1.0 + 1e-12)) {
            return Err(Error::OutOfRange { y, y_max: self.y_max });
        }
        let seg = self.segment_for(ya);
        solve_with(&self.params, &self.resolvent, ya, seg.branch, seg.sign, seg.conjugate_at(ya))
    }

    /// Same as [`Self::evaluate`] with an explicit root, sign and factor root.
    pub fn evaluate_with(&self, y: f64, branch: LambdaBranch, sign: SolutionSign, conjugate: bool) -> Result<EvalResult> {
        solve_with(&self.params, &self.resolvent, y.abs(), branch, sign, conjugate)
    }

    /// Optical solution plus `sum f[n-2] y^(2n)`, `f[0]` being the `y^4` term.
    pub fn superconic_evaluate(&self, f: &[f64], y: f64) -> Result<f64> {
        Ok(self.evaluate(y)?.z + aspheric_terms(f, y))
    }

    pub fn sample(&self, y: f64) -> CurveSample {
        let result = self.evaluate(y);
        let residual_quartic = result
            .as_ref()
            .ok()
            .filter(|r| r.region == Region::Exact)
            .map(|r| quartic_residual(&self.params, r.z, y));
        CurveSample {
            y,
            result,
            residual_quartic,
        }
    }

    pub fn evaluate_grid(&self, ys: &[f64]) -> Vec<CurveSample> {
        ys.iter().map(|&y| self.sample(y)).collect()
    }

    /// Parallel version of [`Self::evaluate_grid`]; output order and values
    /// are identical.
    pub fn evaluate_grid_par(&self, ys: &[f64]) -> Vec<CurveSample> {
        ys.par_iter().map(|&y| self.sample(y)).collect()
    }
}

/// `|(b2x^2+b1x+b0)^2 - (a2x^2+a1x+a0)|` at `x = eta_i eta_o z`, relative to
/// the largest intermediate term.
pub fn quartic_residual(params: &OvalParams, z: f64, y: f64) -> f64 {
    let q = QuarticAt::<Dd>::new(params, y);
    let x = Dd::of(params.eta_i()) * Dd::of(params.eta_o()) * Dd::of(z);
    let (l2, l1, l0) = (q.b2 * x * x, q.b1 * x, q.b0);
    let (r2, r1, r0) = (q.a2 * x * x, q.a1 * x, q.a0);
    let lhs = l2 + l1 + l0;
    let residual = (lhs * lhs - (r2 + r1 + r0)).to_f64().abs();
    let lmax = l2.abs().to_f64().max(l1.abs().to_f64()).max(l0.abs().to_f64());
    let scale = (lmax * lmax)
        .max(r2.abs().to_f64())
        .max(r1.abs().to_f64())
        .max(r0.abs().to_f64());
    if scale == 0.0 {
        0.0
    } else {
        residual / scale
    }
}

/// `|A z^2 - 2z + B|` relative to its largest term.
pub fn quadratic_residual(a: f64, b: f64, z: f64) -> f64 {
    let terms = [a * z * z, -2.0 * z, b];
    let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    if scale == 0.0 {
        0.0
    } else {
        (terms[0] + terms[1] + terms[2]).abs() / scale
    }
}
