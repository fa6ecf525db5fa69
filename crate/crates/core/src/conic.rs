//! Conic and aspheric sags, the conic limits of the oval, and the family of
//! curves sharing one vertex curvature.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oval::{eta_o_from_curvature, validate_params, DegenerateKind, OvalParams};

/// Whether a sample lies on the curve itself or on its parabolic continuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Region {
    Exact,
    Interpolated,
}

impl Region {
    pub fn name(self) -> &'static str {
        match self {
            Region::Exact => "Exact",
            Region::Interpolated => "Interpolated",
        }
    }
}

/// Vertex curvature `c0` and conic constant `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConicParams {
    pub c0: f64,
    pub k: f64,
}

impl ConicParams {
    pub fn new(c0: f64, k: f64) -> Result<Self> {
        if !c0.is_finite() {
            return Err(Error::InvalidInput { field: "c0", value: c0 });
        }
        if !k.is_finite() {
            return Err(Error::InvalidInput { field: "K", value: k });
        }
        Ok(Self { c0, k })
    }

    /// Aperture where the sag folds back, if any.
    pub fn fold(&self) -> Option<f64> {
        (self.k > -1.0 && self.c0 != 0.0).then(|| 1.0 / ((1.0 + self.k).sqrt() * self.c0.abs()))
    }

    /// `1 - (1+K) c0^2 y^2`; negative beyond the fold.
    pub fn fold_margin(&self, y: f64) -> f64 {
        1.0 - (1.0 + self.k) * self.c0 * self.c0 * y * y
    }
}

pub fn conic_sag(c: &ConicParams, y: f64) -> (f64, Region) {
    let cy2 = c.c0 * y * y;
    let w = c.fold_margin(y);
    if w >= 0.0 {
        (cy2 / (1.0 + w.sqrt()), Region::Exact)
    } else {
        (cy2, Region::Interpolated)
    }
}

/// `(1+K) c0 z^2 - 2z + c0 y^2`.
pub fn conic_implicit_residual(c: &ConicParams, z: f64, y: f64) -> f64 {
    (1.0 + c.k) * c.c0 * z * z - 2.0 * z + c.c0 * y * y
}

/// `sum f[j] y^(2j+4)`, i.e. `f[0]` multiplies `y^4`.
pub fn aspheric_terms(f: &[f64], y: f64) -> f64 {
    if f.is_empty() {
        return 0.0;
    }
    let u = y * y;
    let acc = f.iter().rev().fold(0.0, |acc, &c| acc * u + c);
    acc * u * u
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Asphere {
    pub conic: ConicParams,
    /// Coefficients of `y^4, y^6, ...`.
    pub f: Vec<f64>,
}

impl Asphere {
    pub fn new(conic: ConicParams, f: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = f.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidInput { field: "asphere", value: bad });
        }
        Ok(Self { conic, f })
    }
}

pub fn asphere_sag(a: &Asphere, y: f64) -> f64 {
    conic_sag(&a.conic, y).0 + aspheric_terms(&a.f, y)
}

/// Conic reached as the source recedes to infinity (`eta_i -> 0`).
pub fn limit_conic_eta_i_zero(m: f64, eta_o: f64, epsilon: f64) -> ConicParams {
    ConicParams {
        c0: eta_o / (epsilon * (1.0 - 1.0 / m)),
        k: -1.0 / (m * m),
    }
}

/// Conic reached as the focus recedes to infinity (`eta_o -> 0`).
pub fn limit_conic_eta_o_zero(m: f64, eta_i: f64, epsilon: f64) -> ConicParams {
    ConicParams {
        c0: eta_i / (epsilon * (1.0 - m)),
        k: -m * m,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "params")]
pub enum MemberKind {
    OpticalSolution(OvalParams),
    Circle(ConicParams),
    Ellipse(ConicParams),
    Hyperbola(ConicParams),
}

impl MemberKind {
    pub fn name(&self) -> &'static str {
        match self {
            MemberKind::OpticalSolution(_) => "OpticalSolution",
            MemberKind::Circle(_) => "Circle",
            MemberKind::Ellipse(_) => "Ellipse",
            MemberKind::Hyperbola(_) => "Hyperbola",
        }
    }

    pub fn conic(&self) -> Option<&ConicParams> {
        match self {
            MemberKind::OpticalSolution(_) => None,
            MemberKind::Circle(c) | MemberKind::Ellipse(c) | MemberKind::Hyperbola(c) => Some(c),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilyMember {
    pub eta_i: f64,
    pub eta_o: f64,
    pub kind: MemberKind,
}

/// Members with vertex curvature `c0` and index ratio `m`, one per `eta_i`.
///
/// Degeneracy is decided by [`validate_params`], so a member is an optical
/// solution exactly when its parameters validate.
pub fn family(c0: f64, m: f64, epsilon: f64, eta_i_list: &[f64]) -> Result<Vec<FamilyMember>> {
    if !c0.is_finite() {
        return Err(Error::InvalidInput { field: "c0", value: c0 });
    }
    if !(m.is_finite() && m > 1.0) {
        return Err(Error::InvalidInput { field: "m", value: m });
    }
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidInput { field: "epsilon", value: epsilon });
    }
    eta_i_list
        .iter()
        .map(|&eta_i| {
            let eta_o = eta_o_from_curvature(c0, m, eta_i, epsilon);
            let kind = match validate_params(m, eta_i, eta_o, epsilon) {
                Ok(p) => MemberKind::OpticalSolution(p),
                Err(Error::Degenerate(DegenerateKind::EtaIZero)) => MemberKind::Ellipse(ConicParams {
                    c0,
                    k: -1.0 / (m * m),
                }),
                Err(Error::Degenerate(DegenerateKind::EtaOZero)) => {
                    MemberKind::Hyperbola(ConicParams { c0, k: -m * m })
                }
                Err(Error::Degenerate(DegenerateKind::EtaEqual | DegenerateKind::KZero)) => {
                    MemberKind::Circle(ConicParams { c0, k: 0.0 })
                }
                Err(e) => return Err(e),
            };
            Ok(FamilyMember { eta_i, eta_o, kind })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_sag() {
        let c = ConicParams::new(1.0, 0.0).unwrap();
        let (z, r) = conic_sag(&c, 0.6);
        assert!((z - 0.2).abs() < 1e-15 && r == Region::Exact);
        assert_eq!(conic_sag(&c, 1.5), (2.25, Region::Interpolated));
        assert_eq!(conic_sag(&c, 0.0).0, 0.0);
        assert!(conic_implicit_residual(&c, z, 0.6).abs() < 1e-15);
        assert!((conic_implicit_residual(&c, 2.25, 1.5) - 2.8125).abs() < 1e-15);
    }

    #[test]
    fn fold_continuity() {
        let c = ConicParams::new(1.3, -4.0 / 9.0).unwrap();
        let y = c.fold().unwrap();
        let target = 1.0 / ((1.0 + c.k) * c.c0);
        let (zl, rl) = conic_sag(&c, y * (1.0 - 1e-12));
        assert_eq!(rl, Region::Exact);
        assert!((zl - target).abs() < 1e-5);
        let (zr, rr) = conic_sag(&c, y * (1.0 + 1e-12));
        assert_eq!(rr, Region::Interpolated);
        assert!((zr - target).abs() < 1e-5);
    }

    #[test]
    fn hyperbola_has_no_fold() {
        let c = limit_conic_eta_o_zero(1.5, -0.09, 0.6);
        assert!((c.c0 - 0.3).abs() < 1e-15 && c.k == -2.25);
        assert!(c.fold().is_none());
        for i in 0..50 {
            assert_eq!(conic_sag(&c, i as f64).1, Region::Exact);
        }
    }

    #[test]
    fn ellipse_limit() {
        let c = limit_conic_eta_i_zero(1.5, 0.26, 0.6);
        assert!((c.c0 - 1.3).abs() < 1e-14);
        assert!((c.k + 4.0 / 9.0).abs() < 1e-15);
        assert!(limit_conic_eta_i_zero(1e9, 0.26, 0.6).k.abs() < 1e-15);
    }

    #[test]
    fn asphere_terms() {
        let c = ConicParams::new(0.3, -0.5).unwrap();
        let a = Asphere::new(c, vec![]).unwrap();
        assert_eq!(asphere_sag(&a, 0.7), conic_sag(&c, 0.7).0);
        let a = Asphere::new(c, vec![0.1]).unwrap();
        assert!((asphere_sag(&a, 1.0) - conic_sag(&c, 1.0).0 - 0.1).abs() < 1e-16);
        let f = [0.1, -0.02, 0.003];
        let y: f64 = 1.3;
        let direct = 0.1 * y.powi(4) - 0.02 * y.powi(6) + 0.003 * y.powi(8);
        assert!((aspheric_terms(&f, y) - direct).abs() < 1e-15);
        assert!(Asphere::new(c, vec![f64::NAN]).is_err());
    }

    #[test]
    fn family_members() {
        let m = family(0.3, 1.5, 0.6, &[0.18, 0.072, 0.0, -0.09, 0.3]).unwrap();
        assert_eq!(m[0].kind, MemberKind::Circle(ConicParams { c0: 0.3, k: 0.0 }));
        assert_eq!(m[0].kind, m[1].kind);
        assert_eq!(m[2].kind, MemberKind::Ellipse(ConicParams { c0: 0.3, k: -1.0 / 2.25 }));
        assert_eq!(m[3].kind, MemberKind::Hyperbola(ConicParams { c0: 0.3, k: -2.25 }));
        match m[4].kind {
            MemberKind::OpticalSolution(p) => {
                assert!((p.eta_o() - 0.26).abs() < 1e-15);
                assert!((p.c0() - 0.3).abs() < 1e-14);
            }
            other => panic!("{other:?}"),
        }
        assert!(family(0.3, 1.0, 0.6, &[0.1]).is_err());
    }
}
