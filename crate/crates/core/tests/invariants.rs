use proptest::prelude::*;

use flagmetric::geom::{CurveScalarField, FlagGeometry, ScalarField};
use flagmetric::metrics::{flag_metric, FlagWeights, TangentVector};
use flagmetric::{shapes, Flag, Vec3};

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Rotation by `angle` about the unit axis `k` (Rodrigues).
fn rotate(p: Vec3, k: Vec3, angle: f64) -> Vec3 {
    let (s, c) = angle.sin_cos();
    p * c + k.cross(&p) * s + k * (k.dot(&p) * (1.0 - c))
}

fn test_vector(f: &Flag) -> TangentVector<f64> {
    let v_c = f.v(f.equator_row());
    TangentVector::new(
        CurveScalarField::from_fn(f, |u, _| 0.4 + (2.0 * u).cos()),
        ScalarField::from_fn(f, |u, v, _| 1.0 + u.sin() * (v - v_c).cos()),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn invariants_and_metric_survive_rigid_motions(
        axis in (-1.0f64..1.0, -1.0f64..1.0, 0.2f64..1.0),
        angle in -3.0f64..3.0,
        shift in (-5.0f64..5.0, -5.0f64..5.0, -5.0f64..5.0),
    ) {
        let f = shapes::bumpy_sphere::<f64>(1.0, 0.06, 3, 48, 25).unwrap();
        let k = Vec3::new(axis.0, axis.1, axis.2).normalized();
        let t = Vec3::new(shift.0, shift.1, shift.2);
        let moved = f.map_points(|p| rotate(p, k, angle) + t).unwrap();
        let (g, h) = (FlagGeometry::new(&f).unwrap(), FlagGeometry::new(&moved).unwrap());

        for (a, b) in [
            (&g.invariants.kappa_g, &h.invariants.kappa_g),
            (&g.invariants.kappa_n, &h.invariants.kappa_n),
            (&g.invariants.tau_g, &h.invariants.tau_g),
            (&g.surface.kappa1, &h.surface.kappa1),
            (&g.surface.kappa2, &h.surface.kappa2),
        ] {
            prop_assert!(max_abs_diff(a, b) <= 1e-10);
        }
        let w = FlagWeights::new(1.0, 0.5, 2.0, 1.5, 1.0, 0.7);
        let before = flag_metric(&g, &test_vector(&f), &w).unwrap();
        let after = flag_metric(&h, &test_vector(&moved), &w).unwrap();
        prop_assert!((before - after).abs() <= 1e-10 * before);
    }

    #[test]
    fn uniform_scaling_scales_curvatures(scale in 0.2f64..5.0) {
        let f = shapes::ellipsoid::<f64>(1.0, 1.2, 0.8, 48, 25).unwrap();
        let big = f.map_points(|p| p * scale).unwrap();
        let (g, h) = (FlagGeometry::new(&f).unwrap(), FlagGeometry::new(&big).unwrap());
        let rescaled: Vec<f64> = h.surface.kappa1.iter().map(|k| k * scale).collect();
        prop_assert!(max_abs_diff(&g.surface.kappa1, &rescaled) <= 1e-10);
        let rescaled: Vec<f64> = h.invariants.kappa_n.iter().map(|k| k * scale).collect();
        prop_assert!(max_abs_diff(&g.invariants.kappa_n, &rescaled) <= 1e-10);
        prop_assert!((h.surface.area() - scale * scale * g.surface.area()).abs() <= 1e-10 * h.surface.area());
    }
}

/// Reverses the longitude: column `i` of the result is column `−i mod N_u` of `f`.
fn reverse_u(f: &Flag) -> Flag {
    let n = f.n_u();
    let pts = (0..f.n_v())
        .flat_map(|j| (0..n).map(move |i| (i, j)))
        .map(|(i, j)| f.point((n - i) % n, j))
        .collect();
    f.with_points(pts).unwrap()
}

#[test]
fn reversing_orientation() {
    let f = shapes::bumpy_sphere::<f64>(1.0, 0.07, 3, 64, 33).unwrap();
    let r = reverse_u(&f);
    let (g, h) = (FlagGeometry::new(&f).unwrap(), FlagGeometry::new(&r).unwrap());
    let n = f.n_u();
    let back = |x: &[f64]| -> Vec<f64> { (0..n).map(|i| x[(n - i) % n]).collect() };
    let neg = |x: &[f64]| -> Vec<f64> { x.iter().map(|v| -v).collect() };

    // the normal flips with the parameter orientation, the in-surface normal does not
    assert!(max_abs_diff(&back(&h.invariants.kappa_n), &neg(&g.invariants.kappa_n)) <= 1e-12);
    assert!(max_abs_diff(&back(&h.invariants.kappa_g), &g.invariants.kappa_g) <= 1e-12);
    assert!(max_abs_diff(&back(&h.invariants.tau_g), &g.invariants.tau_g) <= 1e-12);
    let k_max = g.invariants.tau_g.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    assert!(k_max > 1e-3, "fixture should twist the Darboux frame");

    for r in 0..f.n_interior_rows() {
        let row = |x: &[f64]| x[r * n..(r + 1) * n].to_vec();
        assert!(max_abs_diff(&back(&row(&h.surface.kappa1)), &neg(&row(&g.surface.kappa2))) <= 1e-11);
        assert!(max_abs_diff(&back(&row(&h.surface.kappa2)), &neg(&row(&g.surface.kappa1))) <= 1e-11);
    }
}

#[test]
fn single_precision_closed_form() {
    let f = shapes::sphere::<f32>(1.0, 64, 33).unwrap();
    let g = FlagGeometry::new(&f).unwrap();
    let tv = TangentVector::new(
        CurveScalarField::constant(64, 0.0),
        ScalarField::constant(&f, 1.0),
    )
    .unwrap();
    let val = flag_metric(&g, &tv, &FlagWeights::ones()).unwrap();
    let expected = 18.0 * std::f32::consts::PI;
    assert!((val - expected).abs() <= 0.02 * expected, "{val}");
    assert!(g.surface.kappa1.iter().all(|k| (k + 1.0).abs() < 1e-2));
}

#[test]
fn analytic_spheroid_curvatures() {
    let c = 1.7;
    let f = shapes::ellipsoid::<f64>(1.0, 1.0, c, 128, 65).unwrap();
    let g = FlagGeometry::new(&f).unwrap();
    let n = f.n_u();
    let mut worst = 0.0f64;
    for r in 0..f.n_interior_rows() {
        let (k1, k2) = shapes::spheroid_principal_curvatures(c, f.v(r + 1));
        let (hi, lo) = (k1.max(k2), k1.min(k2));
        for i in 0..n {
            let k = r * n + i;
            worst = worst
                .max((g.surface.kappa1[k] - hi).abs())
                .max((g.surface.kappa2[k] - lo).abs());
        }
    }
    assert!(worst <= 1e-4, "{worst}");
}
