use serde::Serialize;

use crate::error::{check_len, Result};
use crate::geom::{
    arc_length_derivative, integrate_curve_values, integrate_surface_values, surface_gradient,
    CurveScalarField, FlagGeometry, ScalarField, SurfaceInvariants,
};
use crate::scalar::Real;

use super::params::FlagWeights;
use super::projection::TangentVector;

/// The six weighted integrals making up `G(h₁, h₂)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct MetricTerms<T> {
    pub a1: T,
    pub b1: T,
    pub c1: T,
    pub a2: T,
    pub b2: T,
    pub c2: T,
}

impl<T: Real> MetricTerms<T> {
    pub fn curve_total(&self) -> T {
        self.a1 + self.b1 + self.c1
    }

    pub fn surface_total(&self) -> T {
        self.a2 + self.b2 + self.c2
    }

    pub fn total(&self) -> T {
        self.curve_total() + self.surface_total()
    }
}

fn curve_terms<T: Real>(
    geom: &FlagGeometry<T>,
    h1: &CurveScalarField<T>,
    h2c: &CurveScalarField<T>,
    a1: T,
    b1: T,
    c1: T,
) -> Result<(T, T, T)> {
    let ds_h1 = arc_length_derivative(h1, &geom.curve)?;
    let ds_h2 = arc_length_derivative(h2c, &geom.curve)?;
    let inv = &geom.invariants;
    let n = geom.curve.len();
    let mut da = Vec::with_capacity(n);
    let mut db = Vec::with_capacity(n);
    let mut dc = Vec::with_capacity(n);
    for i in 0..n {
        let x = h1[i] * inv.kappa_g[i] + h2c[i] * inv.kappa_n[i];
        let y = ds_h1[i] - h2c[i] * inv.tau_g[i];
        let z = ds_h2[i] + h1[i] * inv.tau_g[i];
        da.push(x * x);
        db.push(y * y);
        dc.push(z * z);
    }
    let c = &geom.curve;
    Ok((
        a1 * integrate_curve_values(&da, c),
        b1 * integrate_curve_values(&db, c),
        c1 * integrate_curve_values(&dc, c),
    ))
}

fn surface_terms<T: Real>(
    inv: &SurfaceInvariants<T>,
    h2: &ScalarField<T>,
    a2: T,
    b2: T,
    c2: T,
) -> Result<(T, T, T)> {
    check_len("h2", inv.len(), h2.len())?;
    let grad = surface_gradient(h2, inv)?;
    let n = inv.len();
    let mut da = Vec::with_capacity(n);
    let mut db = Vec::with_capacity(n);
    for k in 0..n {
        let h = h2[k];
        let diff = inv.kappa1[k] - inv.kappa2[k];
        let sum = inv.kappa1[k] + inv.kappa2[k];
        da.push(h * h * diff * diff);
        db.push(h * h * sum * sum);
    }
    Ok((
        a2 * integrate_surface_values(&da, inv),
        b2 * integrate_surface_values(&db, inv),
        c2 * integrate_surface_values(&grad.norm_squared, inv),
    ))
}

/// `a₁∫(h₁κ_g + h₂κ_n)² dℓ + b₁∫(D_s h₁ − h₂τ_g)² dℓ + c₁∫(D_s h₂ + h₁τ_g)² dℓ`,
/// with `h₂` already restricted to the curve.
pub fn normal_curve_energy<T: Real>(
    geom: &FlagGeometry<T>,
    h1: &CurveScalarField<T>,
    h2_on_curve: &CurveScalarField<T>,
    a1: T,
    b1: T,
    c1: T,
) -> Result<T> {
    let (a, b, c) = curve_terms(geom, h1, h2_on_curve, a1, b1, c1)?;
    Ok(a + b + c)
}

/// `a₂∫h₂²(κ₁−κ₂)² dA + b₂∫h₂²(κ₁+κ₂)² dA + c₂∫|∇h₂|² dA`.
pub fn normal_surface_energy<T: Real>(
    inv: &SurfaceInvariants<T>,
    h2: &ScalarField<T>,
    a2: T,
    b2: T,
    c2: T,
) -> Result<T> {
    let (a, b, c) = surface_terms(inv, h2, a2, b2, c2)?;
    Ok(a + b + c)
}

/// All six weighted terms of the flag metric.
pub fn flag_metric_terms<T: Real>(
    geom: &FlagGeometry<T>,
    tv: &TangentVector<T>,
    w: &FlagWeights<T>,
) -> Result<MetricTerms<T>> {
    tv.check_against(geom)?;
    let h2c = CurveScalarField::from_values(tv.h2.row(geom.curve_row).to_vec());
    let (a1, b1, c1) = curve_terms(geom, &tv.h1, &h2c, w.a1, w.b1, w.c1)?;
    let (a2, b2, c2) = surface_terms(&geom.surface, &tv.h2, w.a2, w.b2, w.c2)?;
    Ok(MetricTerms {
        a1,
        b1,
        c1,
        a2,
        b2,
        c2,
    })
}

/// Squared norm `G(h₁, h₂)` of a shape-space tangent vector.
pub fn flag_metric<T: Real>(geom: &FlagGeometry<T>, tv: &TangentVector<T>, w: &FlagWeights<T>) -> Result<T> {
    Ok(flag_metric_terms(geom, tv, w)?.total())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::ParameterizedFlag;
    use crate::shapes;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn sphere_geom(n_u: usize, n_v: usize) -> (ParameterizedFlag<f64>, FlagGeometry<f64>) {
        let f = shapes::sphere::<f64>(1.0, n_u, n_v).unwrap();
        let g = FlagGeometry::new(&f).unwrap();
        (f, g)
    }

    fn constant_tv(f: &ParameterizedFlag<f64>, h1: f64, h2: f64) -> TangentVector<f64> {
        TangentVector::new(
            CurveScalarField::constant(f.n_u(), h1),
            ScalarField::constant(f, h2),
        )
        .unwrap()
    }

    #[test]
    fn zero_tangent_vector_has_zero_norm() {
        let (f, g) = sphere_geom(32, 17);
        let tv = TangentVector::zeros(&f);
        assert_eq!(flag_metric(&g, &tv, &FlagWeights::ones()).unwrap(), 0.0);
        let zero = CurveScalarField::constant(32, 0.0);
        assert_eq!(normal_curve_energy(&g, &zero, &zero, 1.0, 1.0, 1.0).unwrap(), 0.0);
        let h = ScalarField::zeros_like(&f);
        assert_eq!(normal_surface_energy(&g.surface, &h, 1.0, 1.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn constant_speeds_on_sphere_equator() {
        let (_, g) = sphere_geom(128, 65);
        for (h1, h2) in [(0.0, 1.0), (0.7, -2.0), (3.0, 0.5)] {
            let e = normal_curve_energy(
                &g,
                &CurveScalarField::constant(128, h1),
                &CurveScalarField::constant(128, h2),
                1.3,
                1.0,
                1.0,
            )
            .unwrap();
            let expect = 1.3 * h2 * h2 * 2.0 * PI;
            assert!((e - expect).abs() <= 1e-3, "{e} {expect}");
        }
    }

    #[test]
    fn unit_normal_speed_on_sphere_surface() {
        let (f, g) = sphere_geom(128, 65);
        let h = ScalarField::constant(&f, 1.0);
        let (a, b, c) = surface_terms(&g.surface, &h, 1.0, 1.0, 1.0).unwrap();
        assert!(a.abs() <= 1e-8);
        assert!((b - 16.0 * PI).abs() <= 0.02 * 16.0 * PI);
        assert_eq!(c, 0.0);
    }

    #[test]
    fn closed_form_on_round_sphere() {
        let (f, g) = sphere_geom(128, 65);
        let w = FlagWeights::ones();
        let base = flag_metric(&g, &constant_tv(&f, 0.0, 1.5), &w).unwrap();
        let expect = (2.0 * PI + 16.0 * PI) * 1.5 * 1.5;
        assert!((base - expect).abs() <= 0.02 * expect);
        for h1 in [0.3, -1.0, 4.0] {
            let other = flag_metric(&g, &constant_tv(&f, h1, 1.5), &w).unwrap();
            assert!((other - base).abs() <= 1e-10 * base);
        }
    }

    #[test]
    fn metric_is_quadratic() {
        let f = shapes::bumpy_sphere::<f64>(1.0, 0.05, 4, 48, 25).unwrap();
        let g = FlagGeometry::new(&f).unwrap();
        let tv = TangentVector::new(
            CurveScalarField::from_fn(&f, |u, _| u.cos() + 0.2),
            ScalarField::from_fn(&f, |u, v, _| (2.0 * u).sin() * v.sin() + 0.5),
        )
        .unwrap();
        let w = FlagWeights::new(0.5, 1.0, 2.0, 1.5, 0.3, 1.1);
        let base = flag_metric(&g, &tv, &w).unwrap();
        let twice = flag_metric(&g, &tv.scale(2.0), &w).unwrap();
        assert!((twice - 4.0 * base).abs() <= 1e-13 * twice);
    }

    fn field_from(coeffs: &[f64], f: &ParameterizedFlag<f64>) -> TangentVector<f64> {
        let c = coeffs.to_vec();
        let c2 = c.clone();
        TangentVector::new(
            CurveScalarField::from_fn(f, move |u, _| c[0] + c[1] * u.cos() + c[2] * (2.0 * u).sin()),
            ScalarField::from_fn(f, move |u, v, p| {
                c2[3] + c2[4] * p.z + c2[5] * u.sin() * v.sin() + c2[6] * (3.0 * v).cos()
            }),
        )
        .unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn polarization_identity(
            a in proptest::collection::vec(-2.0f64..2.0, 7),
            b in proptest::collection::vec(-2.0f64..2.0, 7),
        ) {
            let f = shapes::bumpy_sphere::<f64>(1.0, 0.06, 3, 32, 17).unwrap();
            let g = FlagGeometry::new(&f).unwrap();
            let w = FlagWeights::ones();
            let (x, y) = (field_from(&a, &f), field_from(&b, &f));
            let gm = |t: &TangentVector<f64>| flag_metric(&g, t, &w).unwrap();
            let lhs = gm(&x.axpy(1.0, &y)) + gm(&x.axpy(-1.0, &y));
            let rhs = 2.0 * gm(&x) + 2.0 * gm(&y);
            prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1e-300));
        }

        #[test]
        fn metric_is_positive(a in proptest::collection::vec(-2.0f64..2.0, 7)) {
            prop_assume!(a.iter().any(|x| x.abs() > 1e-3));
            let f = shapes::ellipsoid::<f64>(1.0, 1.2, 0.9, 32, 17).unwrap();
            let g = FlagGeometry::new(&f).unwrap();
            let val = flag_metric(&g, &field_from(&a, &f), &FlagWeights::ones()).unwrap();
            prop_assert!(val > 0.0);
        }
    }
}
