//! Cartesian-oval parameters and closed-form coefficient assembly.
//!
//! An oval through the origin is fixed by the index ratio `m`, the scaled
//! inverse source and focus distances `eta_i = epsilon / z_i` and
//! `eta_o = epsilon / z_o`, and the length scale `epsilon`. Squaring the
//! oval equation twice in `x = eta_i * eta_o * z` gives
//!
//! ```text
//! (b2 x^2 + b1 x + b0)^2 = a2 x^2 + a1 x + a0
//! ```
//!
//! whose resolvent cubic `a l^3 + b l^2 + c l + d = 0` drives the
//! factorisation used by [`crate::solution`].

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Relative threshold below which a defining quantity is treated as zero.
pub const DEGENERACY_TOL: f64 = 1e-14;

/// Why a parameter set falls outside the quartic regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum DegenerateKind {
    /// `k = epsilon (eta_o - m eta_i) = 0`: the oval is a circle.
    KZero,
    /// `m = 1`: equal indices.
    MUnity,
    /// `eta_i = eta_o`: the oval is a circle.
    EtaEqual,
    /// `eta_i = 0`: source at infinity, the conic limit with `K = -1/m^2`.
    EtaIZero,
    /// `eta_o = 0`: focus at infinity, the conic limit with `K = -m^2`.
    EtaOZero,
}

impl fmt::Display for DegenerateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DegenerateKind::KZero => "k = 0",
            DegenerateKind::MUnity => "m = 1",
            DegenerateKind::EtaEqual => "eta_i = eta_o",
            DegenerateKind::EtaIZero => "eta_i = 0",
            DegenerateKind::EtaOZero => "eta_o = 0",
        };
        f.write_str(s)
    }
}

/// Validated oval constants together with the derived quantities used by
/// root selection. Only obtainable through [`validate_params`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OvalParams {
    m: f64,
    eta_i: f64,
    eta_o: f64,
    epsilon: f64,
    k: f64,
    kappa: f64,
    sigma: f64,
    delta: f64,
    c0: f64,
}

impl OvalParams {
    pub fn m(&self) -> f64 {
        self.m
    }
    pub fn eta_i(&self) -> f64 {
        self.eta_i
    }
    pub fn eta_o(&self) -> f64 {
        self.eta_o
    }
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    /// `epsilon (eta_o - m eta_i)`.
    pub fn k(&self) -> f64 {
        self.k
    }
    /// `k / (eta_i eta_o) = z_i - m z_o`.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }
    /// `(1+m) eta_i^2 - 2 eta_i eta_o`.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }
    /// `(1+m) eta_o^2 - 2 m eta_i eta_o`.
    pub fn delta(&self) -> f64 {
        self.delta
    }
    /// Vertex curvature of the optical solution.
    pub fn c0(&self) -> f64 {
        self.c0
    }

    /// `true` when `sigma` vanishes relative to its own terms.
    pub fn sigma_is_zero(&self) -> bool {
        let scale = ((1.0 + self.m) * self.eta_i * self.eta_i).abs() + (2.0 * self.eta_i * self.eta_o).abs();
        self.sigma.abs() <= 1e-12 * scale
    }

    /// `true` when `delta` vanishes relative to its own terms.
    pub fn delta_is_zero(&self) -> bool {
        let scale = ((1.0 + self.m) * self.eta_o * self.eta_o).abs()
            + (2.0 * self.m * self.eta_i * self.eta_o).abs();
        self.delta.abs() <= 1e-12 * scale
    }
}

/// Checks the quartic-regime assumptions and fills in the derived fields.
///
/// Degenerate sets are reported in the order `MUnity`, `EtaIZero`,
/// `EtaOZero`, `EtaEqual`, `KZero`.
pub fn validate_params(m: f64, eta_i: f64, eta_o: f64, epsilon: f64) -> Result<OvalParams> {
    if !m.is_finite() || m <= 0.0 {
        return Err(Error::InvalidInput { field: "m", value: m });
    }
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::InvalidInput { field: "epsilon", value: epsilon });
    }
    if !eta_i.is_finite() {
        return Err(Error::InvalidInput { field: "eta_i", value: eta_i });
    }
    if !eta_o.is_finite() {
        return Err(Error::InvalidInput { field: "eta_o", value: eta_o });
    }

    if (m - 1.0).abs() <= DEGENERACY_TOL {
        return Err(Error::Degenerate(DegenerateKind::MUnity));
    }
    if eta_i.abs() <= DEGENERACY_TOL {
        return Err(Error::Degenerate(DegenerateKind::EtaIZero));
    }
    if eta_o.abs() <= DEGENERACY_TOL {
        return Err(Error::Degenerate(DegenerateKind::EtaOZero));
    }
    if (eta_i - eta_o).abs() <= DEGENERACY_TOL * eta_i.abs().max(eta_o.abs()) {
        return Err(Error::Degenerate(DegenerateKind::EtaEqual));
    }
    let k = epsilon * (eta_o - m * eta_i);
    if k.abs() <= DEGENERACY_TOL * epsilon * (eta_i.abs() * m).max(eta_o.abs()) {
        return Err(Error::Degenerate(DegenerateKind::KZero));
    }

    Ok(OvalParams {
        m,
        eta_i,
        eta_o,
        epsilon,
        k,
        kappa: k / (eta_i * eta_o),
        sigma: (1.0 + m) * eta_i * eta_i - 2.0 * eta_i * eta_o,
        delta: (1.0 + m) * eta_o * eta_o - 2.0 * m * eta_i * eta_o,
        c0: curvature(m, eta_i, eta_o, epsilon),
    })
}

/// Vertex curvature `(eta_i - m eta_o) / (epsilon (1 - m))`.
pub fn curvature(m: f64, eta_i: f64, eta_o: f64, epsilon: f64) -> f64 {
    (eta_i - m * eta_o) / (epsilon * (1.0 - m))
}

/// Inverts [`curvature`] for `eta_o`.
pub fn eta_o_from_curvature(c0: f64, m: f64, eta_i: f64, epsilon: f64) -> f64 {
    (eta_i - epsilon * (1.0 - m) * c0) / m
}

/// The oval equation is unchanged by `eta_i <-> eta_o`, `m -> 1/m`.
pub fn swap_form(p: &OvalParams) -> OvalParams {
    validate_params(1.0 / p.m, p.eta_o, p.eta_i, p.epsilon)
        .expect("swap of a valid parameter set is valid")
}

/// `constant + slope * y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Affine {
    pub constant: f64,
    pub slope: f64,
}

impl Affine {
    #[inline]
    pub fn at(&self, y: f64) -> f64 {
        self.constant + self.slope * y * y
    }
}

/// Coefficients of the twice-squared oval equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuarticCoeffs {
    pub a2: f64,
    pub a1: f64,
    pub a0: Affine,
    pub b2: f64,
    pub b1: f64,
    pub b0: Affine,
}

impl QuarticCoeffs {
    pub fn at(&self, y: f64) -> QuarticAt<f64> {
        QuarticAt {
            a2: self.a2,
            a1: self.a1,
            a0: self.a0.at(y),
            b2: self.b2,
            b1: self.b1,
            b0: self.b0.at(y),
        }
    }
}

pub fn quartic_coeffs(p: &OvalParams) -> QuarticCoeffs {
    let (m, ei, eo, e, k) = (p.m, p.eta_i, p.eta_o, p.epsilon, p.k);
    let a2 = 4.0 * k * k * m * m;
    let b2 = 1.0 - m * m;
    QuarticCoeffs {
        a2,
        a1: -2.0 * a2 * e * ei,
        a0: Affine {
            constant: a2 * e * e * ei * ei,
            slope: a2 * ei * ei * eo * eo,
        },
        b2,
        b1: -2.0 * e * (eo - m * m * ei),
        b0: Affine {
            constant: e * e * (eo * eo - m * m * ei * ei) - k * k,
            slope: b2 * ei * ei * eo * eo,
        },
    }
}

/// Quartic coefficients at a fixed `y`, in any scalar precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticAt<T> {
    pub a2: T,
    pub a1: T,
    pub a0: T,
    pub b2: T,
    pub b1: T,
    pub b0: T,
}

impl<T: Scalar> QuarticAt<T> {
    /// Builds the coefficients directly in precision `T` from the raw
    /// parameters, so that no `f64` rounding of `k` leaks in.
    pub fn new(p: &OvalParams, y: f64) -> Self {
        let m = T::of(p.m);
        let ei = T::of(p.eta_i);
        let eo = T::of(p.eta_o);
        let e = T::of(p.epsilon);
        let y2 = T::of(y) * T::of(y);
        let one = T::of(1.0);
        let two = T::of(2.0);
        let k = e * (eo - m * ei);
        let a2 = T::of(4.0) * k * k * m * m;
        let b2 = one - m * m;
        let eio2 = ei * ei * eo * eo;
        QuarticAt {
            a2,
            a1: -(two * a2 * e * ei),
            a0: a2 * e * e * ei * ei + a2 * eio2 * y2,
            b2,
            b1: -(two * e * (eo - m * m * ei)),
            b0: e * e * (eo * eo - m * m * ei * ei) - k * k + b2 * eio2 * y2,
        }
    }

    /// Generic resolvent composition (already divided by 8).
    pub fn resolvent(&self) -> Cubic<T> {
        let two = T::of(2.0);
        let four = T::of(4.0);
        let eight = T::of(8.0);
        Cubic {
            a: self.b2,
            b: (self.a2 + four * self.b2 * self.b0 - self.b1 * self.b1) / two,
            c: self.a2 * self.b0 + self.a0 * self.b2 - self.a1 * self.b1 / two,
            d: self.a2 * self.a0 / two - self.a1 * self.a1 / eight,
        }
    }
}

/// `a x^3 + b x^2 + c x + d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cubic<T = f64> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Scalar> Cubic<T> {
    #[inline]
    pub fn eval(&self, x: T) -> T {
        ((self.a * x + self.b) * x + self.c) * x + self.d
    }

    #[inline]
    pub fn derivative_at(&self, x: T) -> T {
        (T::of(3.0) * self.a * x + T::of(2.0) * self.b) * x + self.c
    }
}

/// Closed-form resolvent coefficients in `m`, `eta_i`, `eta_o`, `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResolventCoeffs {
    pub a: f64,
    pub b: Affine,
    pub c: Affine,
    /// `d = d_slope * y^2`.
    pub d_slope: f64,
}

impl ResolventCoeffs {
    pub fn at(&self, y: f64) -> Cubic {
        Cubic {
            a: self.a,
            b: self.b.at(y),
            c: self.c.at(y),
            d: self.d_slope * y * y,
        }
    }
}

pub fn resolvent_coeffs(p: &OvalParams) -> ResolventCoeffs {
    let (m, ei, eo, e) = (p.m, p.eta_i, p.eta_o, p.epsilon);
    let e2 = e * e;
    let e4 = e2 * e2;
    let m2 = m * m;
    let eio2 = ei * ei * eo * eo;
    let kk = (eo - m * ei) * (eo - m * ei);
    ResolventCoeffs {
        a: 1.0 - m2,
        b: Affine {
            constant: 2.0
                * e2
                * (m - 1.0)
                * (eo * eo * (1.0 + m) + 2.0 * ei * ei * m2 * (1.0 + m) - 2.0 * ei * eo * m * (1.0 + 2.0 * m)),
            slope: 2.0 * eio2 * (m2 - 1.0) * (m2 - 1.0),
        },
        c: Affine {
            constant: 4.0 * e4 * m2 * (1.0 - m) * ei * (ei - 2.0 * eo + m * ei) * kk,
            slope: 8.0 * e2 * m2 * (1.0 - m2) * eio2 * kk,
        },
        d_slope: 8.0 * e4 * m2 * m2 * eio2 * kk * kk,
    }
}
