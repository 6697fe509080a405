use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use flagmetric::metrics::{apply_reparameterization, FlagWeights, FourierReparam};
use flagmetric::shapedist::{distance, linear_path, path_energy, FlagPath, StraightenOptions};
use flagmetric::{shapes, Flag, Vec3};

fn sphere_path(radius: impl Fn(f64) -> f64, steps: usize) -> FlagPath<f64> {
    let flags = (0..=steps)
        .map(|k| shapes::sphere(radius(k as f64 / steps as f64), 64, 33).unwrap())
        .collect();
    FlagPath::new(flags).unwrap()
}

// Growing the unit sphere to radius 2 at unit normal speed: the curve contributes
// ∫ 2π/R dt and the surface 16π, so E = 16π + 2π ln 2.
#[test]
fn concentric_spheres_energy() {
    let exact = 16.0 * PI + 2.0 * PI * 2f64.ln();
    let w = FlagWeights::ones();
    let e16 = path_energy(&sphere_path(|t| 1.0 + t, 16), &w).unwrap();
    let e32 = path_energy(&sphere_path(|t| 1.0 + t, 32), &w).unwrap();
    assert!((e16 - e32).abs() <= 0.01 * e32, "{e16} {e32}");
    assert!((e32 - exact).abs() <= 0.01 * exact, "{e32} vs {exact}");
}

#[test]
fn uneven_time_parameterization_costs_energy() {
    let w = FlagWeights::ones();
    let even = path_energy(&sphere_path(|t| 1.0 + t, 16), &w).unwrap();
    let uneven = path_energy(&sphere_path(|t| 1.0 + t * t, 16), &w).unwrap();
    assert!(uneven > 1.2 * even, "{uneven} vs {even}");
}

#[test]
fn path_energy_is_unchanged_by_a_common_reparameterization() {
    let a = shapes::bumpy_sphere::<f64>(1.0, 0.05, 3, 64, 33).unwrap();
    let b = shapes::ellipsoid::<f64>(1.0, 1.1, 1.3, 64, 33).unwrap();
    let path = linear_path(&a, &b, 4).unwrap();
    let w = FlagWeights::ones();
    let base = path_energy(&path, &w).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..3 {
        let gamma = FourierReparam::random(&mut rng, a.v(a.equator_row()), 3);
        let moved: Vec<Flag> = path
            .flags()
            .iter()
            .map(|f| apply_reparameterization(f, &gamma).unwrap())
            .collect();
        let e = path_energy(&FlagPath::new(moved).unwrap(), &w).unwrap();
        assert!((e - base).abs() <= 1e-3 * base, "{e} vs {base}");
    }
}

fn quick() -> StraightenOptions {
    StraightenOptions {
        max_iters: 4,
        ..StraightenOptions::default()
    }
}

#[test]
fn rotated_copy_is_a_different_shape() {
    let a = shapes::ellipsoid::<f64>(1.0, 1.0, 1.4, 32, 17).unwrap();
    let rotated = a.map_points(|p| Vec3::new(p.x, -p.z, p.y)).unwrap();
    let r = distance(&a, &rotated, 4, &FlagWeights::ones(), &quick()).unwrap();
    assert!(r.distance() > 0.1, "{}", r.distance());
    assert!(r.history.windows(2).all(|h| h[1] <= h[0]));
}

#[test]
fn distance_is_invariant_under_rigid_motions() {
    let a = shapes::sphere::<f64>(1.0, 32, 17).unwrap();
    let b = shapes::ellipsoid::<f64>(1.0, 1.0, 1.3, 32, 17).unwrap();
    let motion = |p: Vec3| Vec3::new(-p.y, p.x, p.z) + Vec3::new(2.0, -1.0, 0.5);
    let w = FlagWeights::new(1.0, 0.5, 0.5, 2.0, 1.0, 1.0);
    let d = distance(&a, &b, 4, &w, &quick()).unwrap().distance();
    let moved = distance(
        &a.map_points(motion).unwrap(),
        &b.map_points(motion).unwrap(),
        4,
        &w,
        &quick(),
    )
    .unwrap()
    .distance();
    assert!((d - moved).abs() <= 1e-6 * d, "{d} vs {moved}");
}

#[test]
fn identical_endpoints_have_zero_distance() {
    let a = shapes::bumpy_sphere::<f64>(1.0, 0.05, 2, 32, 17).unwrap();
    let r = distance(&a, &a, 3, &FlagWeights::ones(), &quick()).unwrap();
    // interpolating a point with itself is exact only up to roundoff
    assert!(r.distance() <= 1e-12, "{}", r.distance());
}
