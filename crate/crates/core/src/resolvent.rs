//! Closed-form cubic machinery for the resolvent of the oval quartic.
//!
//! With `q = (3ac - b^2) / (3a^2)`, `r = (9abc - 27a^2 d - 2b^3) / (27a^3)`
//! and `disc = r^2 + 4q^3/27`, a positive discriminant leaves one real root
//! (Cardano form) and a negative one three real roots (trigonometric form).
//! As a function of `y` the discriminant is a cubic in `y^2`; its positive
//! zeros are where the root selection has to switch branches.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oval::{Cubic, OvalParams};

/// Relative band around `disc = 0` in which both root formulas are accepted.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Which closed-form root of the resolvent is in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LambdaBranch {
    /// Single real root, `disc >= 0`.
    PositiveDisc,
    /// `-b/3a + 2 rho^(1/3) cos(theta/3)`, the largest real root.
    TrigA,
    /// `-b/3a + 2 rho^(1/3) cos((theta - 2 pi)/3)`, the middle root.
    TrigB,
    /// `-b/3a + 2 rho^(1/3) cos((theta + 2 pi)/3)`, the smallest root.
    TrigC,
}

impl LambdaBranch {
    pub const TRIG: [LambdaBranch; 3] = [LambdaBranch::TrigA, LambdaBranch::TrigB, LambdaBranch::TrigC];

    pub fn is_trig(self) -> bool {
        !matches!(self, LambdaBranch::PositiveDisc)
    }

    pub fn name(self) -> &'static str {
        match self {
            LambdaBranch::PositiveDisc => "PositiveDisc",
            LambdaBranch::TrigA => "TrigA",
            LambdaBranch::TrigB => "TrigB",
            LambdaBranch::TrigC => "TrigC",
        }
    }
}

/// Polar form of the depressed cubic, available when `q < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrigForm {
    /// `sqrt(-q^3 / 27)`.
    pub rho: f64,
    /// `arccos(r / (2 rho))` in `[0, pi]`, argument clamped to `[-1, 1]`.
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubicClassification {
    pub q: f64,
    pub r: f64,
    pub disc: f64,
    pub trig: Option<TrigForm>,
}

impl CubicClassification {
    /// Magnitude of the two terms whose difference is `disc`.
    pub fn disc_scale(&self) -> f64 {
        (self.r * self.r).max(4.0 * self.q.abs().powi(3) / 27.0)
    }

    /// `disc` lies within the numerical band around zero.
    pub fn on_boundary(&self) -> bool {
        self.disc.abs() <= BOUNDARY_TOL * self.disc_scale()
    }
}

pub fn classify(a: f64, b: f64, c: f64, d: f64) -> Result<CubicClassification> {
    if a == 0.0 || !a.is_finite() {
        return Err(Error::DegenerateCubic);
    }
    let q = (3.0 * a * c - b * b) / (3.0 * a * a);
    let r = (9.0 * a * b * c - 27.0 * a * a * d - 2.0 * b * b * b) / (27.0 * a * a * a);
    let disc = r * r + 4.0 / 27.0 * q * q * q;
    let trig = (q < 0.0).then(|| {
        let rho = (-q * q * q / 27.0).sqrt();
        let cos_theta = (r / (2.0 * rho)).clamp(-1.0, 1.0);
        TrigForm {
            rho,
            theta: cos_theta.acos(),
        }
    });
    Ok(CubicClassification { q, r, disc, trig })
}

pub fn classify_cubic(c: &Cubic) -> Result<CubicClassification> {
    classify(c.a, c.b, c.c, c.d)
}

/// Evaluates one closed-form root. `a` and `b` are the leading cubic
/// coefficients the classification was computed from.
pub fn root(cls: &CubicClassification, branch: LambdaBranch, a: f64, b: f64) -> Result<f64> {
    let shift = -b / (3.0 * a);
    let boundary = cls.on_boundary();
    match branch {
        LambdaBranch::PositiveDisc => {
            if cls.disc < 0.0 && !boundary {
                return Err(Error::InvalidBranch { branch, disc: cls.disc });
            }
            let s = cls.disc.max(0.0).sqrt();
            Ok(shift + ((cls.r + s) / 2.0).cbrt() + ((cls.r - s) / 2.0).cbrt())
        }
        _ => {
            if cls.disc > 0.0 && !boundary {
                return Err(Error::InvalidBranch { branch, disc: cls.disc });
            }
            let Some(t) = cls.trig else {
                // q >= 0 with disc ~ 0 only happens at a triple root
                return Ok(shift);
            };
            let offset = match branch {
                LambdaBranch::TrigA => 0.0,
                LambdaBranch::TrigB => -2.0 * PI,
                LambdaBranch::TrigC => 2.0 * PI,
                LambdaBranch::PositiveDisc => unreachable!(),
            };
            Ok(shift + 2.0 * t.rho.cbrt() * ((t.theta + offset) / 3.0).cos())
        }
    }
}

/// The three resolvent roots at `y = 0`: `0`, `2k^2` and `2 eps^2 m^2 sigma / (1+m)`.
pub fn lambda_at_zero(p: &OvalParams) -> [f64; 3] {
    let (m, e, k) = (p.m(), p.epsilon(), p.k());
    [0.0, 2.0 * k * k, 2.0 * e * e * m * m * p.sigma() / (1.0 + m)]
}

/// Identifies one of the three roots at `y = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroRoot {
    /// `lambda = 0`.
    Origin,
    /// `lambda = 2k^2`.
    KSquared,
    /// `lambda = 2 eps^2 m^2 sigma / (1+m)`.
    Sigma,
}

/// Coefficient of `y^2` in the small-`y` expansion of the resolvent root
/// that starts at `which`.
pub fn lambda_y2_correction(p: &OvalParams, which: ZeroRoot) -> Result<f64> {
    if p.sigma_is_zero() || p.delta_is_zero() {
        return Err(Error::Precondition("y^2 correction needs sigma * delta != 0"));
    }
    let (m, ei, eo) = (p.m(), p.eta_i(), p.eta_o());
    let kk = (eo - m * ei) * (eo - m * ei);
    // sigma / eta_i and delta / eta_o
    let s = ei - 2.0 * eo + m * ei;
    let d = eo - 2.0 * m * ei + m * eo;
    Ok(match which {
        ZeroRoot::Origin => 2.0 * m * m * ei * eo * eo * kk / ((m - 1.0) * s),
        ZeroRoot::KSquared => 2.0 * ei * ei * eo * kk / ((m - 1.0) * d),
        ZeroRoot::Sigma => -2.0 * ei * eo * (ei - eo).powi(4) * m * m * (1.0 + m) / ((m - 1.0) * s * d),
    })
}

/// `disc(y) = d6 y^6 + d4 y^4 + d2 y^2 + d0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscSextic {
    pub d6: f64,
    pub d4: f64,
    pub d2: f64,
    pub d0: f64,
}

impl DiscSextic {
    pub fn eval(&self, y: f64) -> f64 {
        let u = y * y;
        ((self.d6 * u + self.d4) * u + self.d2) * u + self.d0
    }
}

pub fn disc_sextic_coeffs(p: &OvalParams) -> DiscSextic {
    let (m, ei, eo, e, k) = (p.m(), p.eta_i(), p.eta_o(), p.epsilon(), p.k());
    let m2 = m * m;
    let m3 = m2 * m;
    let m4 = m2 * m2;
    let m5 = m4 * m;
    let kk4 = (eo - ei * m).powi(4);
    let e2 = e * e;
    let e6 = e2 * e2 * e2;
    let e8 = e6 * e2;
    let e10 = e8 * e2;

    let d4_star = eo.powi(4) * (8.0 + 20.0 * m2 - m4)
        + 4.0 * ei * eo.powi(3) * (-4.0 - 4.0 * m - 15.0 * m2 - 5.0 * m3 + m4)
        + 2.0 * ei * ei * eo * eo * (2.0 + 20.0 * m + 37.0 * m2 + 20.0 * m3 + 2.0 * m4)
        - 4.0 * ei.powi(3) * eo * (-1.0 + 5.0 * m + 15.0 * m2 + 4.0 * m3 + 4.0 * m4)
        + ei.powi(4) * (-1.0 + 20.0 * m2 + 8.0 * m4);

    let d2_star = -2.0 * eo.powi(6) * (1.0 + m).powi(3)
        + 2.0 * ei.powi(6) * m2 * (1.0 + m).powi(3)
        + 2.0 * ei * eo.powi(5) * (1.0 + m).powi(2) * (2.0 + 6.0 * m + m2)
        - 2.0 * ei.powi(5) * eo * m * (1.0 + m).powi(2) * (1.0 + 6.0 * m + 2.0 * m2)
        + ei.powi(4) * eo * eo * (1.0 + 11.0 * m + 29.0 * m2 + 39.0 * m3 + 18.0 * m4 - 2.0 * m5)
        + 4.0 * ei.powi(3) * eo.powi(3) * (-1.0 - 2.0 * m + m2 - m3 + 2.0 * m4 + m5)
        - ei * ei * eo.powi(4) * (-2.0 + 18.0 * m + 39.0 * m2 + 29.0 * m3 + 11.0 * m4 + m5);

    DiscSextic {
        d6: -256.0 / 27.0 * e6 * ei.powi(6) * (ei - eo).powi(2) * eo.powi(6) * m4 * kk4,
        d4: 64.0 * e8 * ei.powi(4) * eo.powi(4) * m4 * kk4 * d4_star
            / (27.0 * (1.0 - m).powi(2) * (1.0 + m).powi(2)),
        d2: 128.0 * e10 * ei * ei * eo * eo * m4 * kk4 * d2_star / (27.0 * (1.0 - m) * (1.0 + m).powi(4)),
        d0: -64.0 / 27.0 * e8 * m4 * k.powi(4) / (1.0 + m).powi(4) * p.sigma().powi(2) * p.delta().powi(2),
    }
}

/// Positive zeros of the discriminant, sorted, always 0 or 2 entries.
/// A tangential zero is reported twice.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscRoots(pub Vec<f64>);

impl DiscRoots {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
}

/// Finds the positive `y` with `disc(y) = 0` by solving the sextic as a
/// cubic in `u = y^2` with [`classify`]/[`root`], then bisecting each
/// estimate on the sextic itself.
///
/// When `sigma * delta = 0` the sextic has a zero at `u = 0`; only the
/// remaining quadratic factor is searched.
pub fn disc_positive_roots(p: &OvalParams) -> Result<DiscRoots> {
    let sextic = disc_sextic_coeffs(p);
    let mut us: Vec<f64> = if p.sigma_is_zero() || p.delta_is_zero() {
        quadratic_real_roots(sextic.d6, sextic.d4, sextic.d2)
    } else {
        cubic_real_roots(sextic.d6, sextic.d4, sextic.d2, sextic.d0)?
    };
    us.retain(|&u| u > 0.0 && u.is_finite());
    us.sort_by(f64::total_cmp);
    if us.len() > 2 {
        return Err(Error::DiscRootAnomaly { count: us.len() });
    }
    if us.len() == 1 {
        // The product of the u-roots has the sign of -d0/d6 < 0, so a lone
        // positive root is the numerical shadow of a tangency.
        us.push(us[0]);
    }

    let mut ys: Vec<f64> = us.iter().map(|u| u.sqrt()).collect();
    if ys.len() == 2 {
        let tangential = (us[1] - us[0]).abs() <= 1e-9 * us[1];
        if tangential {
            let y = 0.5 * (ys[0] + ys[1]);
            ys = vec![y, y];
        } else {
            let mid = 0.5 * (ys[0] + ys[1]);
            ys[0] = polish_on_sextic(&sextic, ys[0], 0.0, mid);
            ys[1] = polish_on_sextic(&sextic, ys[1], mid, f64::INFINITY);
        }
    }
    Ok(DiscRoots(ys))
}

fn cubic_real_roots(a: f64, b: f64, c: f64, d: f64) -> Result<Vec<f64>> {
    let cls = classify(a, b, c, d)?;
    if cls.disc > 0.0 && !cls.on_boundary() {
        Ok(vec![root(&cls, LambdaBranch::PositiveDisc, a, b)?])
    } else {
        LambdaBranch::TRIG.iter().map(|&br| root(&cls, br, a, b)).collect()
    }
}

fn quadratic_real_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        return if b != 0.0 { vec![-c / b] } else { Vec::new() };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let t = -0.5 * (b + b.signum() * disc.sqrt());
    if t == 0.0 {
        return vec![0.0, 0.0];
    }
    vec![t / a, c / t]
}

/// Bisects `disc(y)` around the estimate `y0`, staying inside `(lo, hi)`.
fn polish_on_sextic(s: &DiscSextic, y0: f64, lo: f64, hi: f64) -> f64 {
    let f0 = s.eval(y0);
    if f0 == 0.0 {
        return y0;
    }
    let mut width = 1e-12 * y0;
    let mut bracket = None;
    for _ in 0..80 {
        let a = (y0 - width).max(lo + 0.5 * (y0 - lo));
        let b = (y0 + width).min(if hi.is_finite() { hi - 0.5 * (hi - y0) } else { f64::MAX });
        let (fa, fb) = (s.eval(a), s.eval(b));
        if fa.signum() != fb.signum() {
            bracket = Some((a, fa, b));
            break;
        }
        width *= 4.0;
    }
    let Some((mut a, mut fa, mut b)) = bracket else {
        return y0;
    };
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = s.eval(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}
