#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use superconic::resolvent::disc_positive_roots;
use superconic::{validate_params, OvalParams};

pub const M: f64 = 1.5;
pub const EPSILON: f64 = 0.6;
pub const C0: f64 = 0.3;

/// The six optical-solution members of the reference family.
pub const C_ETA_I: [f64; 6] = [0.3, 0.15, 0.01, -0.01, -0.15, -0.3];

pub fn member(eta_i: f64) -> OvalParams {
    let eta_o = superconic::oval::eta_o_from_curvature(C0, M, eta_i, EPSILON);
    validate_params(M, eta_i, eta_o, EPSILON).unwrap()
}

pub fn c_members() -> Vec<OvalParams> {
    C_ETA_I.iter().map(|&e| member(e)).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random parameters with m in (1, 3], eta in [-0.5, 0.5], epsilon in
/// [0.2, 1], kept away from the degenerate sets.
pub fn random_params(rng: &mut impl Rng) -> OvalParams {
    loop {
        let m = 1.0 + 2.0 * (1.0 - rng.random::<f64>());
        if m - 1.0 < 0.01 {
            continue;
        }
        let eta_i: f64 = rng.random_range(-0.5..=0.5);
        let eta_o: f64 = rng.random_range(-0.5..=0.5);
        let epsilon = rng.random_range(0.2..=1.0);
        if eta_i.abs().min(eta_o.abs()) < 0.02 || (eta_i - eta_o).abs() < 0.02 {
            continue;
        }
        let Ok(p) = validate_params(m, eta_i, eta_o, epsilon) else {
            continue;
        };
        if p.k().abs() < 0.01 * epsilon || p.sigma().abs() < 1e-3 || p.delta().abs() < 1e-3 {
            continue;
        }
        return p;
    }
}

/// `min(2, 1.5 * first disc root)`.
pub fn grid_ymax(p: &OvalParams) -> f64 {
    match disc_positive_roots(p) {
        Ok(r) if !r.is_empty() => (1.5 * r.as_slice()[0]).min(2.0),
        _ => 2.0,
    }
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    superconic::cli::spec::linspace(a, b, n)
}
