//! Analytic fixtures: round spheres, ellipsoids and bumpy spheres in the
//! standard longitude/colatitude parameterization.

use crate::error::{FlagError, Result};
use crate::geom::ParameterizedFlag;
use crate::linalg::Vec3;
use crate::scalar::Real;

/// Row of the marked curve for a grid with `n_v` rows: `(n_v - 1) / 2` rounded.
pub fn default_equator_row(n_v: usize) -> usize {
    ((n_v - 1) as f64 / 2.0).round() as usize
}

#[inline]
fn unit<T: Real>(u: T, v: T) -> Vec3<T> {
    Vec3::new(v.sin() * u.cos(), v.sin() * u.sin(), v.cos())
}

pub fn sphere<T: Real>(radius: T, n_u: usize, n_v: usize) -> Result<ParameterizedFlag<T>> {
    sphere_with_curve_row(radius, n_u, n_v, default_equator_row(n_v))
}

/// Round sphere with the marked curve on an arbitrary latitude row.
pub fn sphere_with_curve_row<T: Real>(
    radius: T,
    n_u: usize,
    n_v: usize,
    curve_row: usize,
) -> Result<ParameterizedFlag<T>> {
    ParameterizedFlag::from_fn(n_u, n_v, curve_row, |u, v| unit(u, v) * radius)
}

/// Ellipsoid `(x/a)² + (y/b)² + (z/c)² = 1`.
pub fn ellipsoid<T: Real>(a: T, b: T, c: T, n_u: usize, n_v: usize) -> Result<ParameterizedFlag<T>> {
    ParameterizedFlag::from_fn(n_u, n_v, default_equator_row(n_v), |u, v| {
        let p = unit(u, v);
        Vec3::new(a * p.x, b * p.y, c * p.z)
    })
}

/// Radial graph `R (1 + A Y(u, v))` over the sphere with
/// `Y = ½ (sinᵏ v cos k u + cos k v)`, a smooth function on S² for integer `k`.
pub fn bumpy_sphere<T: Real>(
    radius: T,
    amplitude: T,
    frequency: u32,
    n_u: usize,
    n_v: usize,
) -> Result<ParameterizedFlag<T>> {
    let k = T::lit(frequency as f64);
    let half = T::lit(0.5);
    ParameterizedFlag::from_fn(n_u, n_v, default_equator_row(n_v), |u: T, v: T| {
        let y = half * (v.sin().powi(frequency as i32) * (k * u).cos() + (k * v).cos());
        unit(u, v) * (radius * (T::one() + amplitude * y))
    })
}

/// Flat annulus `((ρ₀ + s v) cos u, (ρ₀ + s v) sin u, 0)`.
///
/// An open fixture: its boundary rows are circles rather than poles, which is
/// harmless because pole rows are never read. `II` vanishes identically.
pub fn flat_annulus<T: Real>(
    inner_radius: T,
    width_scale: T,
    n_u: usize,
    n_v: usize,
) -> Result<ParameterizedFlag<T>> {
    ParameterizedFlag::from_fn(n_u, n_v, default_equator_row(n_v), |u, v| {
        let rho = inner_radius + width_scale * v;
        Vec3::new(rho * u.cos(), rho * u.sin(), T::zero())
    })
}

/// Named analytic shape with its parameters, as accepted by `synth`.
#[derive(Clone, Debug, PartialEq)]
pub enum ShapeSpec {
    Sphere {
        radius: f64,
    },
    Ellipsoid {
        a: f64,
        b: f64,
        c: f64,
    },
    BumpySphere {
        radius: f64,
        amplitude: f64,
        frequency: u32,
    },
}

impl ShapeSpec {
    /// Parses `sphere`, `ellipsoid` or `bumpy_sphere` with its numeric parameters.
    ///
    /// Missing parameters take defaults: `sphere(1)`, `ellipsoid(1,1,1)`,
    /// `bumpy_sphere(1, 0.05, 4)`.
    pub fn parse(name: &str, params: &[f64]) -> Result<Self> {
        let get = |k: usize, d: f64| params.get(k).copied().unwrap_or(d);
        let bad = |what: &str| FlagError::InvalidParameter(format!("{name}: {what}"));
        let spec = match name {
            "sphere" => Self::Sphere { radius: get(0, 1.0) },
            "ellipsoid" => Self::Ellipsoid {
                a: get(0, 1.0),
                b: get(1, 1.0),
                c: get(2, 1.0),
            },
            "bumpy_sphere" => {
                let f = get(2, 4.0);
                if f < 0.0 || f.fract() != 0.0 {
                    return Err(bad("frequency must be a non-negative integer"));
                }
                Self::BumpySphere {
                    radius: get(0, 1.0),
                    amplitude: get(1, 0.05),
                    frequency: f as u32,
                }
            }
            other => return Err(FlagError::UnknownShape(other.to_string())),
        };
        let positive = match &spec {
            Self::Sphere { radius } => *radius > 0.0,
            Self::Ellipsoid { a, b, c } => *a > 0.0 && *b > 0.0 && *c > 0.0,
            Self::BumpySphere {
                radius, amplitude, ..
            } => *radius > 0.0 && amplitude.abs() < 1.0,
        };
        if !positive {
            return Err(bad("parameters out of range"));
        }
        Ok(spec)
    }

    pub fn build<T: Real>(&self, n_u: usize, n_v: usize) -> Result<ParameterizedFlag<T>> {
        match *self {
            Self::Sphere { radius } => sphere(T::lit(radius), n_u, n_v),
            Self::Ellipsoid { a, b, c } => ellipsoid(T::lit(a), T::lit(b), T::lit(c), n_u, n_v),
            Self::BumpySphere {
                radius,
                amplitude,
                frequency,
            } => bumpy_sphere(T::lit(radius), T::lit(amplitude), frequency, n_u, n_v),
        }
    }
}

/// Closed-form principal curvatures `(κ₁, κ₂)` of the ellipsoid of revolution
/// `x² + y² + (z/c)² = 1` at colatitude `v`, under the outward-normal convention.
pub fn spheroid_principal_curvatures(c: f64, v: f64) -> (f64, f64) {
    let s = (v.cos().powi(2) + c * c * v.sin().powi(2)).sqrt();
    let meridian = -c / s.powi(3);
    let parallel = -c / s;
    (meridian.max(parallel), meridian.min(parallel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::fundamental_forms;

    #[test]
    fn parse_shapes() {
        assert_eq!(
            ShapeSpec::parse("sphere", &[2.0]).unwrap(),
            ShapeSpec::Sphere { radius: 2.0 }
        );
        assert!(matches!(
            ShapeSpec::parse("torus", &[]),
            Err(FlagError::UnknownShape(_))
        ));
        assert!(ShapeSpec::parse("bumpy_sphere", &[1.0, 0.05, 2.5]).is_err());
    }

    #[test]
    fn bumpy_sphere_is_an_immersion() {
        assert!(bumpy_sphere::<f64>(1.0, 0.05, 4, 64, 33).is_ok());
    }

    #[test]
    fn ellipsoid_curvatures_match_closed_form() {
        let (n_u, n_v) = (128, 65);
        let f = ellipsoid::<f64>(1.0, 1.0, 2.0, n_u, n_v).unwrap();
        let inv = fundamental_forms(&f).unwrap();
        for r in 0..n_v - 2 {
            let (k1, k2) = spheroid_principal_curvatures(2.0, f.v(r + 1));
            for i in 0..n_u {
                let k = r * n_u + i;
                assert!((inv.kappa1[k] - k1).abs() <= 2e-3, "row {r}");
                assert!((inv.kappa2[k] - k2).abs() <= 2e-3, "row {r}");
            }
        }
    }
}
