//! First and second fundamental forms, principal curvatures, gradients and
//! area integrals over the interior nodes of a flag.
//!
//! Sign convention: `ν = F_v × F_u / |F_v × F_u|` and `II = ⟨∂²F, ν⟩`. With `u`
//! the longitude and `v` the colatitude this is the outward normal of the standard
//! sphere, and the round unit sphere has `κ₁ = κ₂ = -1`. Only even powers of the curvatures enter the
//! metric, so metric values do not depend on this choice.

use crate::error::{check_len, FlagError, Result};
use crate::linalg::{Mat2, Vec3};
use crate::scalar::Real;

use super::fields::ScalarField;
use super::flag::ParameterizedFlag;
use super::stencil::Stencils;

/// Per-interior-node geometry of the surface. Vectors are indexed like [`ScalarField`].
#[derive(Clone, Debug)]
pub struct SurfaceInvariants<T> {
    pub(crate) stencils: Stencils<T>,
    pub n_u: usize,
    pub n_rows: usize,
    pub du: T,
    pub dv: T,
    /// `∂F/∂u`.
    pub f_u: Vec<Vec3<T>>,
    /// `∂F/∂v`.
    pub f_v: Vec<Vec3<T>>,
    /// First fundamental form `g`.
    pub metric: Vec<Mat2<T>>,
    /// Second fundamental form `II`.
    pub second: Vec<Mat2<T>>,
    /// Shape operator `L = g⁻¹ II`.
    pub shape: Vec<Mat2<T>>,
    /// Larger principal curvature.
    pub kappa1: Vec<T>,
    /// Smaller principal curvature.
    pub kappa2: Vec<T>,
    pub normal: Vec<Vec3<T>>,
    /// `√det g`, the area density with respect to `du dv`.
    pub area_density: Vec<T>,
}

/// Gradient of a scalar field with respect to the induced metric.
#[derive(Clone, Debug)]
pub struct SurfaceGradient<T> {
    /// Coordinate components `g⁻¹ (h_u, h_v)ᵀ`.
    pub coords: Vec<[T; 2]>,
    /// The same gradient as a vector in R³.
    pub ambient: Vec<Vec3<T>>,
    /// `|∇h|² = (h_u, h_v) g⁻¹ (h_u, h_v)ᵀ`.
    pub norm_squared: Vec<T>,
    /// Raw partials `(h_u, h_v)`.
    pub partials: Vec<[T; 2]>,
}

fn partials<T: Real>(flag: &ParameterizedFlag<T>, st: &Stencils<T>) -> (Vec<Vec3<T>>, Vec<Vec3<T>>) {
    st.gradient(flag.interior())
}

fn degenerate(k: usize, n_u: usize, det: f64) -> FlagError {
    FlagError::DegenerateGrid {
        row: k / n_u + 1,
        col: k % n_u,
        reason: format!("det g = {det:e} at or below the immersion threshold"),
    }
}

pub(crate) fn first_fundamental_form_check<T: Real>(flag: &ParameterizedFlag<T>, threshold: T) -> Result<()> {
    let st = flag.stencils();
    let (f_u, f_v) = partials(flag, &st);
    for (k, (a, b)) in f_u.iter().zip(&f_v).enumerate() {
        let det = a.norm_squared() * b.norm_squared() - a.dot(b) * a.dot(b);
        if !(det > threshold) {
            return Err(degenerate(k, flag.n_u(), det.as_f64()));
        }
    }
    Ok(())
}

/// Computes `g`, `ν`, `II`, `L` and `κ₁ ≥ κ₂` at every interior node.
pub fn fundamental_forms<T: Real>(flag: &ParameterizedFlag<T>) -> Result<SurfaceInvariants<T>> {
    let st = flag.stencils();
    let n_u = flag.n_u();
    let n_rows = flag.n_interior_rows();
    let interior = flag.interior();
    let (f_u, f_v) = partials(flag, &st);
    let threshold = flag.immersion_threshold();

    let count = n_u * n_rows;
    let mut metric = Vec::with_capacity(count);
    let mut second = Vec::with_capacity(count);
    let mut shape = Vec::with_capacity(count);
    let mut kappa1 = Vec::with_capacity(count);
    let mut kappa2 = Vec::with_capacity(count);
    let mut normal = Vec::with_capacity(count);
    let mut area_density = Vec::with_capacity(count);

    for r in 0..n_rows {
        let row = &interior[r * n_u..(r + 1) * n_u];
        let fv_row = &f_v[r * n_u..(r + 1) * n_u];
        for i in 0..n_u {
            let k = r * n_u + i;
            let (fu, fv) = (f_u[k], f_v[k]);
            let g = Mat2::symmetric(fu.dot(&fu), fu.dot(&fv), fv.dot(&fv));
            let det = g.det();
            if !(det > threshold) {
                return Err(degenerate(k, n_u, det.as_f64()));
            }
            let nu = fv.cross(&fu).normalized();
            let f_uu = st.d_uu(row, i);
            let f_uv = st.d_u(fv_row, i);
            let f_vv = st.d_vv(interior, r, i);
            let ii = Mat2::symmetric(f_uu.dot(&nu), f_uv.dot(&nu), f_vv.dot(&nu));
            let l = g.inverse().mul_mat(&ii);
            let (k1, k2) = l.real_eigenvalues();
            metric.push(g);
            second.push(ii);
            shape.push(l);
            kappa1.push(k1);
            kappa2.push(k2);
            normal.push(nu);
            area_density.push(det.sqrt());
        }
    }

    Ok(SurfaceInvariants {
        stencils: st,
        n_u,
        n_rows,
        du: flag.du(),
        dv: flag.dv(),
        f_u,
        f_v,
        metric,
        second,
        shape,
        kappa1,
        kappa2,
        normal,
        area_density,
    })
}

/// First fundamental form and unit normal only; the cheap subset used by
/// finite-difference oracles.
pub(crate) fn metric_and_normal<T: Real>(flag: &ParameterizedFlag<T>) -> (Vec<Mat2<T>>, Vec<Vec3<T>>) {
    let st = flag.stencils();
    let (f_u, f_v) = partials(flag, &st);
    f_u.iter()
        .zip(&f_v)
        .map(|(a, b)| {
            (
                Mat2::symmetric(a.dot(a), a.dot(b), b.dot(b)),
                b.cross(a).normalized(),
            )
        })
        .unzip()
}

impl<T: Real> SurfaceInvariants<T> {
    pub fn len(&self) -> usize {
        self.metric.len()
    }

    pub fn is_empty(&self) -> bool {
        self.metric.is_empty()
    }

    /// Quadrature weight `√det g Δu Δv` of interior node `k`.
    #[inline]
    pub fn area_weight(&self, k: usize) -> T {
        self.area_density[k] * self.du * self.dv
    }

    /// Total area over the interior nodes.
    pub fn area(&self) -> T {
        (0..self.len()).map(|k| self.area_weight(k)).sum()
    }

    /// Partials `(h_u, h_v)` of a field at every interior node.
    pub fn partials(&self, h: &ScalarField<T>) -> Result<Vec<[T; 2]>> {
        check_len("scalar field", self.len(), h.len())?;
        let (hu, hv) = self.stencils.gradient(h.values());
        Ok(hu.into_iter().zip(hv).map(|(a, b)| [a, b]).collect())
    }

    /// Partials of an arbitrary vector field on interior nodes.
    pub fn vector_partials(&self, x: &[Vec3<T>]) -> Result<(Vec<Vec3<T>>, Vec<Vec3<T>>)> {
        check_len("vector field", self.len(), x.len())?;
        Ok(self.stencils.gradient(x))
    }
}

/// Gradient of `h` with respect to the induced metric and its squared norm.
pub fn surface_gradient<T: Real>(
    h: &ScalarField<T>,
    inv: &SurfaceInvariants<T>,
) -> Result<SurfaceGradient<T>> {
    let partials = inv.partials(h)?;
    let n = partials.len();
    let mut coords = Vec::with_capacity(n);
    let mut ambient = Vec::with_capacity(n);
    let mut norm_squared = Vec::with_capacity(n);
    for (k, p) in partials.iter().enumerate() {
        let ginv = inv.metric[k].inverse();
        let c = ginv.mul_vec(*p);
        coords.push(c);
        ambient.push(inv.f_u[k] * c[0] + inv.f_v[k] * c[1]);
        norm_squared.push(ginv.quadratic_form(*p));
    }
    Ok(SurfaceGradient {
        coords,
        ambient,
        norm_squared,
        partials,
    })
}

/// `∫ w dA ≈ Σ w_k √det g_k Δu Δv` over interior nodes (periodic trapezoid in `u`).
pub fn integrate_surface<T: Real>(w: &ScalarField<T>, inv: &SurfaceInvariants<T>) -> Result<T> {
    check_len("scalar field", inv.len(), w.len())?;
    Ok(integrate_surface_values(w.values(), inv))
}

pub(crate) fn integrate_surface_values<T: Real>(w: &[T], inv: &SurfaceInvariants<T>) -> T {
    let s: T = w.iter().zip(&inv.area_density).map(|(&x, &a)| x * a).sum();
    s * inv.du * inv.dv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    fn max_err(v: &[f64], target: f64) -> f64 {
        v.iter().map(|x| (x - target).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn unit_sphere_curvatures_are_minus_one() {
        let f = shapes::sphere::<f64>(1.0, 128, 65).unwrap();
        let inv = fundamental_forms(&f).unwrap();
        assert!(max_err(&inv.kappa1, -1.0) <= 1e-3);
        assert!(max_err(&inv.kappa2, -1.0) <= 1e-3);
        // outward normal
        let p = f.point(3, 20);
        assert!(inv.normal[19 * 128 + 3].dot(&p) > 0.99);
    }

    #[test]
    fn radius_two_sphere() {
        let f = shapes::sphere::<f64>(2.0, 128, 65).unwrap();
        let inv = fundamental_forms(&f).unwrap();
        assert!(max_err(&inv.kappa1, -0.5) <= 1e-3);
        assert!(max_err(&inv.kappa2, -0.5) <= 1e-3);
    }

    #[test]
    fn flat_annulus_has_zero_second_form() {
        let f = shapes::flat_annulus::<f64>(1.0, 1.0, 32, 9).unwrap();
        let inv = fundamental_forms(&f).unwrap();
        for ii in &inv.second {
            assert!(ii.frobenius() <= 1e-14, "{ii:?}");
        }
        assert!(inv.kappa1.iter().chain(&inv.kappa2).all(|k| k.abs() <= 1e-14));
    }

    #[test]
    fn principal_curvatures_match_trace_and_determinant() {
        let f = shapes::bumpy_sphere::<f64>(1.0, 0.1, 3, 64, 33).unwrap();
        let inv = fundamental_forms(&f).unwrap();
        for k in 0..inv.len() {
            let l = inv.shape[k];
            let (k1, k2) = (inv.kappa1[k], inv.kappa2[k]);
            assert!(k1 >= k2);
            assert!((k1 + k2 - l.trace()).abs() <= 1e-10 * (1.0 + l.trace().abs()));
            assert!((k1 * k2 - l.det()).abs() <= 1e-10 * (1.0 + l.det().abs()));
            assert!((inv.normal[k].norm() - 1.0).abs() <= 1e-14);
        }
    }

    #[test]
    fn normal_is_orthogonal_to_partials() {
        let f = shapes::ellipsoid::<f64>(1.0, 1.5, 0.7, 48, 25).unwrap();
        let inv = fundamental_forms(&f).unwrap();
        for k in 0..inv.len() {
            let nu = inv.normal[k];
            let s = inv.f_u[k].norm() + inv.f_v[k].norm();
            assert!(nu.dot(&inv.f_u[k]).abs() <= 1e-14 * s);
            assert!(nu.dot(&inv.f_v[k]).abs() <= 1e-14 * s);
        }
    }

    #[test]
    fn gradient_of_constant_vanishes() {
        let f = shapes::sphere::<f64>(1.0, 64, 33).unwrap();
        let inv = fundamental_forms(&f).unwrap();
        let h = ScalarField::constant(&f, 3.5);
        let g = surface_gradient(&h, &inv).unwrap();
        assert!(g.norm_squared.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn gradient_of_height_on_sphere() {
        let f = shapes::sphere::<f64>(1.0, 128, 65).unwrap();
        let inv = fundamental_forms(&f).unwrap();
        let h = ScalarField::from_fn(&f, |_, _, p| p.z);
        let g = surface_gradient(&h, &inv).unwrap();
        for (k, &z) in h.values().iter().enumerate() {
            assert!((g.norm_squared[k] - (1.0 - z * z)).abs() <= 1e-2);
        }
    }

    #[test]
    fn gradient_is_linear() {
        let f = shapes::ellipsoid::<f64>(1.0, 1.0, 2.0, 32, 17).unwrap();
        let inv = fundamental_forms(&f).unwrap();
        let h = ScalarField::from_fn(&f, |u, v, _| (2.0 * u).sin() * v.sin());
        let g1 = surface_gradient(&h, &inv).unwrap();
        let g2 = surface_gradient(&h.scale(2.0), &inv).unwrap();
        for k in 0..inv.len() {
            assert_eq!(g2.coords[k][0], 2.0 * g1.coords[k][0]);
            assert_eq!(g2.coords[k][1], 2.0 * g1.coords[k][1]);
        }
    }

    #[test]
    fn sphere_area() {
        let f = shapes::sphere::<f64>(1.0, 128, 65).unwrap();
        let inv = fundamental_forms(&f).unwrap();
        let one = ScalarField::constant(&f, 1.0);
        let a = integrate_surface(&one, &inv).unwrap();
        assert!((a - 4.0 * std::f64::consts::PI).abs() <= 1e-2, "{a}");
        let zero = ScalarField::zeros_like(&f);
        assert_eq!(integrate_surface(&zero, &inv).unwrap(), 0.0);
    }

    #[test]
    fn f32_sphere_is_usable() {
        let f = shapes::sphere::<f32>(1.0, 64, 33).unwrap();
        let inv = fundamental_forms(&f).unwrap();
        assert!(inv.kappa1.iter().all(|k| (k + 1.0).abs() < 1e-2));
    }
}
