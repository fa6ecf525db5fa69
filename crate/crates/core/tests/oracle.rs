mod common;

use superconic::oracle::{oval_signed_residual, quartic_roots_z, snell_residual};
use superconic::{branch_plan, Error, Region};

#[test]
fn exact_points_satisfy_the_unsquared_oval() {
    for p in common::c_members() {
        let ymax = common::grid_ymax(&p);
        let plan = branch_plan(&p, ymax).unwrap();
        for y in common::linspace(0.0, ymax, 51) {
            let r = plan.evaluate(y).unwrap();
            if r.region == Region::Exact {
                let res = oval_signed_residual(&p, r.z, y);
                assert!(res.abs() < 1e-10, "eta_i = {}, y = {y}: {res:e}", p.eta_i());
            }
        }
    }
}

#[test]
fn evaluated_point_is_a_numeric_quartic_root() {
    let p = common::member(0.15);
    let plan = branch_plan(&p, 1.0).unwrap();
    for y in [0.05, 0.3, 0.6, 0.9] {
        let z = plan.evaluate(y).unwrap().z;
        let roots = quartic_roots_z(&p, y);
        let nearest = roots.iter().map(|r| (r - z).abs()).fold(f64::INFINITY, f64::min);
        assert!(nearest < 1e-10 * (1.0 + z.abs()), "y = {y}: {z} vs {roots:?}");
    }
}

#[test]
fn snell_refuses_points_near_joints() {
    let p = common::member(0.3);
    let plan = branch_plan(&p, 2.0).unwrap();
    let joint = plan.joints()[0].y;
    let sag = |t: f64| plan.evaluate(t).map(|e| e.z);
    let err = snell_residual(&p, sag, joint + 1e-7, 1e-6, &[joint]).unwrap_err();
    assert!(matches!(err, Error::NearBoundary { .. }));
    assert!(snell_residual(&p, sag, 0.3, 1e-6, &[joint]).unwrap().abs() < 1e-6);
}
