//! Brute-force checks that avoid the resolvent path entirely.
//!
//! Roots of the expanded quartic are isolated between the real roots of its
//! successive derivatives and refined by bisection, all evaluated in
//! double-double precision. The origin branch is then followed by
//! nearest-root continuation.

use crate::error::{Error, Result};
use crate::oval::{OvalParams, QuarticAt};
use crate::scalar::{Dd, Scalar};

/// Expanded quartic in `x` at fixed `y`; `c[i]` multiplies `x^i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticPoly {
    pub c: [Dd; 5],
}

impl QuarticPoly {
    pub fn new(params: &OvalParams, y: f64) -> Self {
        let q = QuarticAt::<Dd>::new(params, y);
        let two = Dd::of(2.0);
        Self {
            c: [
                q.b0 * q.b0 - q.a0,
                two * q.b1 * q.b0 - q.a1,
                q.b1 * q.b1 + two * q.b2 * q.b0 - q.a2,
                two * q.b2 * q.b1,
                q.b2 * q.b2,
            ],
        }
    }

    pub fn coeffs_f64(&self) -> [f64; 5] {
        self.c.map(Scalar::to_f64)
    }

    pub fn eval(&self, x: f64) -> f64 {
        horner(&self.c, Dd::of(x)).to_f64()
    }

    /// Sum of the absolute monomials at `x`; the yardstick for residuals.
    pub fn scale(&self, x: f64) -> f64 {
        let ax = x.abs();
        self.coeffs_f64().iter().rev().fold(0.0, |acc, c| acc * ax + c.abs())
    }
}

fn horner(c: &[Dd], x: Dd) -> Dd {
    c.iter().rev().fold(Dd::of(0.0), |acc, &ci| acc * x + ci)
}

fn derivative(c: &[Dd]) -> Vec<Dd> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &ci)| ci * Dd::of(i as f64))
        .collect()
}

fn trim(c: &[Dd]) -> &[Dd] {
    let mut n = c.len();
    while n > 0 && c[n - 1].to_f64() == 0.0 {
        n -= 1;
    }
    &c[..n]
}

fn bisect(c: &[Dd], mut lo: f64, mut hi: f64, sign_lo: bool) -> f64 {
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-15 * mid.abs().max(f64::MIN_POSITIVE) {
            return mid;
        }
        let v = horner(c, Dd::of(mid)).to_f64();
        if v == 0.0 {
            return mid;
        }
        if (v > 0.0) == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Real roots of `c` (ascending), repeated by multiplicity where a root
/// coincides with a critical point.
fn real_roots(c: &[Dd]) -> Vec<f64> {
    let c = trim(c);
    let n = c.len();
    if n < 2 {
        return Vec::new();
    }
    let lead = c[n - 1].to_f64();
    if n == 2 {
        return vec![-(c[0] / c[1]).to_f64()];
    }
    let bound = 1.0
        + c[..n - 1]
            .iter()
            .map(|ci| (ci.to_f64() / lead).abs())
            .fold(0.0, f64::max);
    let mut pts = vec![-bound];
    pts.extend(real_roots(&derivative(c)).into_iter().filter(|x| x.abs() < bound));
    pts.push(bound);
    pts.dedup();

    let scale_at = |x: f64| c.iter().rev().fold(0.0, |acc, ci| acc * x.abs() + ci.to_f64().abs());
    let vals: Vec<f64> = pts.iter().map(|&x| horner(c, Dd::of(x)).to_f64()).collect();
    let is_zero: Vec<bool> = pts
        .iter()
        .zip(&vals)
        .map(|(&x, &v)| v.abs() <= 1e-28 * scale_at(x))
        .collect();

    let mut roots = Vec::new();
    for i in 0..pts.len() {
        if i > 0 && !is_zero[i - 1] && !is_zero[i] && (vals[i - 1] > 0.0) != (vals[i] > 0.0) {
            roots.push(bisect(c, pts[i - 1], pts[i], vals[i - 1] > 0.0));
        }
        if is_zero[i] && i > 0 && i + 1 < pts.len() {
            roots.push(pts[i]);
            let (l, r) = (vals[i - 1], vals[i + 1]);
            if !is_zero[i - 1] && !is_zero[i + 1] && (l > 0.0) == (r > 0.0) {
                roots.push(pts[i]);
            }
        }
    }
    roots
}

/// All real roots `x` of the quartic at `y`, ascending.
pub fn quartic_roots_numeric(params: &OvalParams, y: f64) -> Vec<f64> {
    let poly = QuarticPoly::new(params, y);
    let mut roots = real_roots(&poly.c);
    roots.sort_by(f64::total_cmp);
    roots
}

/// Real roots converted to sag, `z = x / (eta_i eta_o)`, ascending in `x`.
pub fn quartic_roots_z(params: &OvalParams, y: f64) -> Vec<f64> {
    let s = params.eta_i() * params.eta_o();
    quartic_roots_numeric(params, y).into_iter().map(|x| x / s).collect()
}

const MAX_HALVINGS: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Pick {
    Accepted(f64),
    Ambiguous,
    Far,
}

fn pick(candidates: &[f64], predicted: f64, prev: f64, allowance: f64) -> Pick {
    let tie = 1e-10 * (1.0 + prev.abs());
    let mut ds: Vec<(f64, f64)> = candidates.iter().map(|&z| ((z - predicted).abs(), z)).collect();
    ds.sort_by(|a, b| a.0.total_cmp(&b.0));
    // a double root shows up twice; both copies are the same point
    ds.dedup_by(|b, a| (b.1 - a.1).abs() <= tie);
    match ds.as_slice() {
        [] => Pick::Far,
        [(d1, z), rest @ ..] => {
            if *d1 > allowance {
                Pick::Far
            } else if rest.first().is_some_and(|(d2, _)| *d1 > 0.25 * d2) {
                Pick::Ambiguous
            } else {
                Pick::Accepted(*z)
            }
        }
    }
}

/// Follows the quartic root that starts at `z = 0` along ascending `ys`.
///
/// `None` marks points past where the tracked root stops being real.
pub fn continuous_root_track(params: &OvalParams, ys: &[f64]) -> Result<Vec<Option<f64>>> {
    match ys.first() {
        None => return Ok(Vec::new()),
        Some(&y0) if y0 != 0.0 => return Err(Error::Precondition("tracking starts at y = 0")),
        _ => {}
    }
    if ys.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Precondition("tracking grid must be strictly ascending"));
    }

    let mut out = Vec::with_capacity(ys.len());
    out.push(Some(0.0));
    let (mut y, mut z) = (0.0, 0.0);
    let mut slope = 0.0;

    'grid: for &target in &ys[1..] {
        let mut h = target - y;
        let mut halvings = 0u32;
        while y < target {
            let y_next = if y + h >= target { target } else { y + h };
            let step = y_next - y;
            let predicted = z + slope * step;
            let allowance = 1e-9 * (1.0 + z.abs()) + step * (1.0 + 4.0 * slope.abs());
            match pick(&quartic_roots_z(params, y_next), predicted, z, allowance) {
                Pick::Accepted(z_next) => {
                    slope = (z_next - z) / step;
                    y = y_next;
                    z = z_next;
                    halvings = 0;
                    h = (2.0 * step).min(target - y).max(0.0);
                    if h == 0.0 {
                        h = step;
                    }
                }
                outcome => {
                    halvings += 1;
                    if halvings > MAX_HALVINGS {
                        if outcome == Pick::Ambiguous {
                            return Err(Error::OracleAmbiguity { y: y_next });
                        }
                        break 'grid;
                    }
                    h = 0.5 * step;
                }
            }
        }
        out.push(Some(z));
    }
    out.resize(ys.len(), None);
    Ok(out)
}

/// Sign of the distance term for a point at `z` relative to the point
/// `epsilon / eta` on the axis: `+1` on the vertex side.
fn side(eta: f64, z: f64, epsilon: f64) -> f64 {
    if eta * z < epsilon {
        1.0
    } else {
        -1.0
    }
}

/// Oval equation in its eta-scaled form; zero on the oval.
pub fn oval_signed_residual(params: &OvalParams, z: f64, y: f64) -> f64 {
    let (m, ei, eo, e) = (params.m(), params.eta_i(), params.eta_o(), params.epsilon());
    let di = (ei * z - e).hypot(ei * y);
    let d_o = (eo * z - e).hypot(eo * y);
    eo * side(ei, z, e) * di - m * ei * side(eo, z, e) * d_o - params.k()
}

/// Direction (cos, sin) of the ray joining the curve point to the axis point
/// `epsilon / eta`, oriented as the ray travels.
fn ray_direction(eta: f64, z: f64, y: f64, epsilon: f64) -> (f64, f64) {
    let s = side(eta, z, epsilon);
    let (dz, dy) = (epsilon - eta * z, eta * y);
    let r = dz.hypot(dy);
    (s * dz / r, -s * dy / r)
}

/// Refraction-law residual `sin(phi - theta) - m sin(phi - theta')` at `y`,
/// where `phi` is the surface-normal angle from a central difference of
/// `sag` with step `h`.
///
/// `boundaries` lists the folds and joints of the curve; `y` within `2h`
/// of any of them is rejected.
pub fn snell_residual<F>(params: &OvalParams, sag: F, y: f64, h: f64, boundaries: &[f64]) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(h > 0.0) {
        return Err(Error::InvalidInput { field: "h", value: h });
    }
    if let Some(b) = boundaries.iter().find(|&&b| (y - b).abs() <= 2.0 * h) {
        return Err(Error::NearBoundary { y, margin: (y - b).abs() });
    }
    let z = sag(y)?;
    let slope = (sag(y + h)? - sag(y - h)?) / (2.0 * h);
    let phi = (-slope).atan();
    let (sp, cp) = phi.sin_cos();
    let e = params.epsilon();
    let (ci, si) = ray_direction(params.eta_i(), z, y, e);
    let (co, so) = ray_direction(params.eta_o(), z, y, e);
    Ok((sp * ci - cp * si) - params.m() * (sp * co - cp * so))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oval::{quartic_coeffs, validate_params};

    fn c1() -> OvalParams {
        validate_params(1.5, 0.3, 0.26, 0.6).unwrap()
    }

    #[test]
    fn simple_polynomials() {
        let c: Vec<Dd> = [-6.0, 11.0, -6.0, 1.0].iter().map(|&v| Dd::of(v)).collect();
        let r = real_roots(&c);
        assert_eq!(r.len(), 3);
        for (got, want) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-14, "{r:?}");
        }
        // (x-1)^2 (x+2)
        let c: Vec<Dd> = [2.0, -3.0, 0.0, 1.0].iter().map(|&v| Dd::of(v)).collect();
        let r = real_roots(&c);
        assert_eq!(r.len(), 3, "{r:?}");
        // x^2 + 1
        let c: Vec<Dd> = [1.0, 0.0, 1.0].iter().map(|&v| Dd::of(v)).collect();
        assert!(real_roots(&c).is_empty());
    }

    #[test]
    fn expansion_matches_two_sided_form() {
        let p = c1();
        let poly = QuarticPoly::new(&p, 0.4);
        let q = quartic_coeffs(&p).at(0.4);
        for x in [-3.0, -0.5, 0.1, 0.7, 2.0] {
            let l = q.b2 * x * x + q.b1 * x + q.b0;
            let two_sided = l * l - (q.a2 * x * x + q.a1 * x + q.a0);
            assert!((poly.eval(x) - two_sided).abs() <= 1e-12 * poly.scale(x));
        }
    }

    #[test]
    fn origin_is_root_at_zero() {
        let p = c1();
        let poly = QuarticPoly::new(&p, 0.0);
        assert!(poly.c[0].to_f64().abs() <= 1e-18);
        assert!(quartic_roots_numeric(&p, 0.0).iter().any(|x| x.abs() < 1e-12));
    }

    #[test]
    fn residuals_of_isolated_roots() {
        let p = c1();
        for y in [0.0, 0.3, 0.9, 2.5] {
            let poly = QuarticPoly::new(&p, y);
            let roots = quartic_roots_numeric(&p, y);
            assert!(roots.len().is_multiple_of(2) && roots.len() <= 4, "{roots:?}");
            for x in roots {
                assert!(poly.eval(x).abs() <= 1e-10 * poly.scale(x));
            }
        }
    }

    #[test]
    fn track_starts_at_origin_and_grows_like_curvature() {
        let p = c1();
        let ys: Vec<f64> = (0..11).map(|i| 0.01 * i as f64).collect();
        let t = continuous_root_track(&p, &ys).unwrap();
        assert_eq!(t[0], Some(0.0));
        let z = t[10].unwrap();
        assert!((z / (0.01 * 0.01 * 100.0) - 0.15).abs() < 1e-3, "{z}");
        assert!(continuous_root_track(&p, &[0.5]).is_err());
    }

    #[test]
    fn signed_residual_at_origin() {
        for (m, ei, eo) in [(1.5, 0.3, 0.26), (2.0, -0.2, 0.1), (0.7, 0.4, -0.3)] {
            let p = validate_params(m, ei, eo, 0.6).unwrap();
            assert!(oval_signed_residual(&p, 0.0, 0.0).abs() < 1e-15);
        }
    }

    #[test]
    fn snell_rejects_near_boundary() {
        let p = c1();
        let r = snell_residual(&p, |y| Ok(0.15 * y * y), 1.0, 1e-3, &[1.001]);
        assert!(matches!(r, Err(Error::NearBoundary { .. })));
    }
}
