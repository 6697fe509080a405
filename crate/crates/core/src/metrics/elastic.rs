//! Elastic metrics on parameterized curves and surfaces.

use crate::error::{check_len, FlagError, Result};
use crate::geom::{integrate_curve_values, integrate_surface_values, CurveSamples, SurfaceInvariants};
use crate::linalg::Vec3;
use crate::scalar::Real;
use crate::variations::{CurveVariation, SurfaceVariation};

use super::params::{CurveElasticWeights, SurfaceElasticWeights};

/// `∫ [a (D_s δf¹)^∥ (D_s δf²)^∥ + b ⟨(D_s δf¹)^⊥, (D_s δf²)^⊥⟩] dℓ`.
pub fn curve_elastic_metric<T: Real>(
    curve: &CurveSamples<T>,
    df1: &[Vec3<T>],
    df2: &[Vec3<T>],
    w: CurveElasticWeights<T>,
) -> Result<T> {
    check_len("first curve variation", curve.len(), df1.len())?;
    check_len("second curve variation", curve.len(), df2.len())?;
    let d1 = curve.d_arc(df1);
    let d2 = curve.d_arc(df2);
    let density: Vec<T> = (0..curve.len())
        .map(|i| {
            let t = curve.tangent[i];
            let (p1, p2) = (d1[i].dot(&t), d2[i].dot(&t));
            let q1 = d1[i] - t * p1;
            let q2 = d2[i] - t * p2;
            w.a * p1 * p2 + w.b * q1.dot(&q2)
        })
        .collect();
    Ok(integrate_curve_values(&density, curve))
}

/// `a ∫ (δr/r)² dℓ + b ∫ |δt|² dℓ`.
pub fn curve_elastic_energy<T: Real>(
    curve: &CurveSamples<T>,
    var: &CurveVariation<T>,
    w: CurveElasticWeights<T>,
) -> Result<T> {
    check_len("speed variation", curve.len(), var.delta_speed.len())?;
    check_len("tangent variation", curve.len(), var.delta_tangent.len())?;
    let density: Vec<T> = (0..curve.len())
        .map(|i| {
            let s = var.delta_speed[i] / curve.speed[i];
            w.a * s * s + w.b * var.delta_tangent[i].norm_squared()
        })
        .collect();
    Ok(integrate_curve_values(&density, curve))
}

/// How [`surface_elastic_energy`] treats a non-symmetric `δg`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AsymmetricPolicy {
    #[default]
    Reject,
    Symmetrize,
}

/// `a′ ∫ Tr((g⁻¹δg)₀²) dA + b′ ∫ Tr(g⁻¹δg)² dA + c′ ∫ |δν|² dA`.
pub fn surface_elastic_energy<T: Real>(
    inv: &SurfaceInvariants<T>,
    var: &SurfaceVariation<T>,
    w: SurfaceElasticWeights<T>,
    policy: AsymmetricPolicy,
) -> Result<T> {
    check_len("metric variation", inv.len(), var.delta_metric.len())?;
    check_len("normal variation", inv.len(), var.delta_normal.len())?;
    let tol = T::lit(1e-12);
    let mut density = Vec::with_capacity(inv.len());
    for k in 0..inv.len() {
        let mut dg = var.delta_metric[k];
        if (dg.b - dg.c).abs() > tol * (T::one() + dg.frobenius()) {
            match policy {
                AsymmetricPolicy::Reject => return Err(FlagError::NonSymmetric(k)),
                AsymmetricPolicy::Symmetrize => {
                    let m = (dg.b + dg.c) / T::lit(2.0);
                    dg.b = m;
                    dg.c = m;
                }
            }
        }
        let b = inv.metric[k].inverse().mul_mat(&dg);
        let b0 = b.traceless();
        let tr = b.trace();
        density
            .push(w.a * b0.mul_mat(&b0).trace() + w.b * tr * tr + w.c * var.delta_normal[k].norm_squared());
    }
    Ok(integrate_surface_values(&density, inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{FlagGeometry, ScalarField};
    use crate::linalg::Mat2;
    use crate::shapes;
    use crate::variations::{analytic_surface_variation, curve_variation_from_displacement};
    use std::f64::consts::PI;

    fn geom(f: &crate::geom::ParameterizedFlag<f64>) -> FlagGeometry<f64> {
        FlagGeometry::new(f).unwrap()
    }

    #[test]
    fn constants_have_zero_curve_energy() {
        let f = shapes::bumpy_sphere::<f64>(1.0, 0.05, 4, 64, 33).unwrap();
        let g = geom(&f);
        let c = vec![Vec3::new(0.3, -1.0, 2.0); 64];
        let w = CurveElasticWeights { a: 1.0, b: 1.0 };
        assert_eq!(curve_elastic_metric(&g.curve, &c, &c, w).unwrap(), 0.0);
    }

    #[test]
    fn curve_metric_is_bilinear() {
        let f = shapes::bumpy_sphere::<f64>(1.0, 0.05, 4, 64, 33).unwrap();
        let g = geom(&f);
        let x: Vec<Vec3<f64>> = (0..64)
            .map(|i| Vec3::new((i as f64 * 0.2).sin(), 1.0, (i as f64 * 0.1).cos()))
            .collect();
        let y: Vec<Vec3<f64>> = (0..64)
            .map(|i| g.frame.normal[i] * (i as f64 * 0.3).cos())
            .collect();
        let w = CurveElasticWeights { a: 0.7, b: 1.3 };
        let base = curve_elastic_metric(&g.curve, &x, &y, w).unwrap();
        let x2: Vec<_> = x.iter().map(|&v| v * 2.0).collect();
        let y3: Vec<_> = y.iter().map(|&v| v * 3.0).collect();
        let scaled = curve_elastic_metric(&g.curve, &x2, &y3, w).unwrap();
        assert!((scaled - 6.0 * base).abs() <= 1e-12 * scaled.abs());
    }

    #[test]
    fn normal_field_on_sphere_equator_is_pure_stretch() {
        let f = shapes::sphere::<f64>(1.0, 128, 65).unwrap();
        let g = geom(&f);
        let nu = g.frame.surface_normal.clone();
        for a in [1.0, 2.5] {
            let w = CurveElasticWeights { a, b: 3.0 };
            let val = curve_elastic_metric(&g.curve, &nu, &nu, w).unwrap();
            assert!((val - a * 2.0 * PI).abs() <= 1e-3, "{val}");
        }
    }

    #[test]
    fn energy_of_zero_variation_vanishes() {
        let f = shapes::sphere::<f64>(1.0, 32, 17).unwrap();
        let g = geom(&f);
        let var = CurveVariation {
            delta_speed: vec![0.0; 32],
            delta_tangent: vec![Vec3::zero(); 32],
        };
        let w = CurveElasticWeights { a: 1.0, b: 1.0 };
        assert_eq!(curve_elastic_energy(&g.curve, &var, w).unwrap(), 0.0);
    }

    #[test]
    fn pure_stretch_energy_on_circle() {
        let f = shapes::sphere::<f64>(1.0, 256, 65).unwrap();
        let g = geom(&f);
        let var = CurveVariation {
            delta_speed: g.curve.speed.clone(),
            delta_tangent: vec![Vec3::zero(); 256],
        };
        let w = CurveElasticWeights { a: 1.0, b: 5.0 };
        let e = curve_elastic_energy(&g.curve, &var, w).unwrap();
        assert!((e - 2.0 * PI).abs() <= 1e-6);
    }

    #[test]
    fn energy_agrees_with_metric_on_the_diagonal() {
        let f = shapes::bumpy_sphere::<f64>(1.0, 0.08, 3, 96, 49).unwrap();
        let g = geom(&f);
        let df: Vec<Vec3<f64>> = (0..96)
            .map(|i| {
                let u = f.u(i);
                Vec3::new((2.0 * u).sin(), 0.3 * u.cos(), 1.0 + (3.0 * u).cos())
            })
            .collect();
        let w = CurveElasticWeights { a: 0.6, b: 1.7 };
        let var = curve_variation_from_displacement(&g.curve, &df).unwrap();
        let lhs = curve_elastic_energy(&g.curve, &var, w).unwrap();
        let rhs = curve_elastic_metric(&g.curve, &df, &df, w).unwrap();
        assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs(), "{lhs} {rhs}");
    }

    #[test]
    fn conformal_variation_has_no_shear_term() {
        let f = shapes::ellipsoid::<f64>(1.0, 1.0, 2.0, 64, 33).unwrap();
        let g = geom(&f);
        let var = SurfaceVariation {
            delta_metric: g.surface.metric.clone(),
            delta_normal: vec![Vec3::zero(); g.surface.len()],
        };
        let shear = SurfaceElasticWeights {
            a: 1.0,
            b: 0.0,
            c: 0.0,
        };
        let area = SurfaceElasticWeights {
            a: 0.0,
            b: 1.0,
            c: 0.0,
        };
        let e_shear = surface_elastic_energy(&g.surface, &var, shear, AsymmetricPolicy::Reject).unwrap();
        let e_area = surface_elastic_energy(&g.surface, &var, area, AsymmetricPolicy::Reject).unwrap();
        assert!(e_shear.abs() <= 1e-12);
        assert!((e_area - 4.0 * g.surface.area()).abs() <= 1e-10 * e_area);
        let zero = SurfaceVariation {
            delta_metric: vec![Mat2::zero(); g.surface.len()],
            delta_normal: vec![Vec3::zero(); g.surface.len()],
        };
        let all = SurfaceElasticWeights {
            a: 1.0,
            b: 1.0,
            c: 1.0,
        };
        assert_eq!(
            surface_elastic_energy(&g.surface, &zero, all, AsymmetricPolicy::Reject).unwrap(),
            0.0
        );
    }

    #[test]
    fn asymmetric_metric_variation_is_rejected_by_default() {
        let f = shapes::sphere::<f64>(1.0, 32, 17).unwrap();
        let g = geom(&f);
        let mut dg = vec![Mat2::zero(); g.surface.len()];
        dg[5] = Mat2::new(0.0, 1.0, 0.0, 0.0);
        let var = SurfaceVariation {
            delta_metric: dg,
            delta_normal: vec![Vec3::zero(); g.surface.len()],
        };
        let w = SurfaceElasticWeights {
            a: 1.0,
            b: 1.0,
            c: 1.0,
        };
        assert!(matches!(
            surface_elastic_energy(&g.surface, &var, w, AsymmetricPolicy::Reject),
            Err(FlagError::NonSymmetric(5))
        ));
        assert!(surface_elastic_energy(&g.surface, &var, w, AsymmetricPolicy::Symmetrize).is_ok());
    }

    #[test]
    fn unit_normal_variation_of_sphere() {
        let f = shapes::sphere::<f64>(1.0, 128, 65).unwrap();
        let g = geom(&f);
        let h = ScalarField::constant(&f, 1.0);
        let var = analytic_surface_variation(&g.surface, &h).unwrap();
        let w = SurfaceElasticWeights {
            a: 0.0,
            b: 1.0,
            c: 0.0,
        };
        let e = surface_elastic_energy(&g.surface, &var, w, AsymmetricPolicy::Reject).unwrap();
        // Tr(g⁻¹δg) = 4 on the unit sphere, so the b′ term is 16 · area ≈ 64π
        assert!((e - 64.0 * PI).abs() <= 0.02 * 64.0 * PI, "{e}");
    }
}
