//! The marked curve: samples, Darboux frame and curvature invariants.
//!
//! The curve is oriented by increasing `u`; flipping that orientation changes
//! the sign of `κ_g`. Derivatives in the curve parameter use the same periodic
//! stencil as `F_u`, so the discrete tangent lies exactly in the discrete
//! tangent plane of the surface.

use crate::error::{check_len, Result};
use crate::linalg::Vec3;
use crate::scalar::Real;

use super::fields::CurveScalarField;
use super::flag::ParameterizedFlag;
use super::stencil::Stencils;
use super::surface::{fundamental_forms, SurfaceInvariants};

/// Samples `f_i`, speeds `r_i = |ḟ_i|` and unit tangents of the marked curve.
#[derive(Clone, Debug)]
pub struct CurveSamples<T> {
    pub(crate) stencils: Stencils<T>,
    pub points: Vec<Vec3<T>>,
    pub velocity: Vec<Vec3<T>>,
    pub speed: Vec<T>,
    pub tangent: Vec<Vec3<T>>,
    /// Parameter spacing `Δu`.
    pub du: T,
}

impl<T: Real> CurveSamples<T> {
    pub fn from_flag(flag: &ParameterizedFlag<T>) -> Self {
        Self::from_points(flag.curve_points().to_vec(), flag.stencils(), flag.du())
    }

    pub(crate) fn from_points(points: Vec<Vec3<T>>, stencils: Stencils<T>, du: T) -> Self {
        let velocity = stencils.d_u_row(&points);
        let speed: Vec<T> = velocity.iter().map(|v| v.norm()).collect();
        let tangent = velocity.iter().zip(&speed).map(|(&v, &r)| v / r).collect();
        Self {
            stencils,
            points,
            velocity,
            speed,
            tangent,
            du,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Quadrature weight `r_i Δu` of sample `i`.
    #[inline]
    pub fn length_weight(&self, i: usize) -> T {
        self.speed[i] * self.du
    }

    pub fn length(&self) -> T {
        self.speed.iter().copied().sum::<T>() * self.du
    }

    /// Parameter derivative of a vector field along the curve.
    pub fn d_param(&self, x: &[Vec3<T>]) -> Vec<Vec3<T>> {
        self.stencils.d_u_row(x)
    }

    /// Arc-length derivative `D_s X = Ẋ / r` of a vector field along the curve.
    pub fn d_arc(&self, x: &[Vec3<T>]) -> Vec<Vec3<T>> {
        self.stencils
            .d_u_row(x)
            .into_iter()
            .zip(&self.speed)
            .map(|(d, &r)| d / r)
            .collect()
    }
}

/// Orthonormal `(t, n, ν)` along the curve with `n = ν × t`.
#[derive(Clone, Debug)]
pub struct DarbouxFrame<T> {
    pub tangent: Vec<Vec3<T>>,
    pub normal: Vec<Vec3<T>>,
    pub surface_normal: Vec<Vec3<T>>,
}

impl<T: Real> DarbouxFrame<T> {
    /// Restricts the surface normal to the curve row and completes the frame.
    ///
    /// `ν` is re-orthogonalized against `t` (Gram–Schmidt); in exact arithmetic the
    /// correction vanishes because `t` is proportional to the discrete `F_u`.
    pub fn from_parts(curve: &CurveSamples<T>, surface: &SurfaceInvariants<T>, curve_row: usize) -> Self {
        let n_u = curve.len();
        let mut tangent = Vec::with_capacity(n_u);
        let mut normal = Vec::with_capacity(n_u);
        let mut surface_normal = Vec::with_capacity(n_u);
        for i in 0..n_u {
            let t = curve.tangent[i].normalized();
            let raw = surface.normal[curve_row * n_u + i];
            let nu = (raw - t * raw.dot(&t)).normalized();
            tangent.push(t);
            normal.push(nu.cross(&t));
            surface_normal.push(nu);
        }
        Self {
            tangent,
            normal,
            surface_normal,
        }
    }

    pub fn len(&self) -> usize {
        self.tangent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tangent.is_empty()
    }

    /// Largest deviation of `[t n ν]` from an orthonormal triple.
    pub fn orthonormality_residual(&self) -> T {
        let one = T::one();
        (0..self.len())
            .map(|i| {
                let (t, n, nu) = (self.tangent[i], self.normal[i], self.surface_normal[i]);
                [
                    (t.dot(&t) - one).abs(),
                    (n.dot(&n) - one).abs(),
                    (nu.dot(&nu) - one).abs(),
                    t.dot(&n).abs(),
                    t.dot(&nu).abs(),
                    n.dot(&nu).abs(),
                ]
                .into_iter()
                .fold(T::zero(), T::max)
            })
            .fold(T::zero(), T::max)
    }
}

/// Geodesic curvature, normal curvature and geodesic torsion per curve sample.
#[derive(Clone, Debug)]
pub struct CurveInvariants<T> {
    pub kappa_g: Vec<T>,
    pub kappa_n: Vec<T>,
    pub tau_g: Vec<T>,
}

impl<T: Real> CurveInvariants<T> {
    /// `κ_g = ⟨ṫ, n⟩/r`, `κ_n = ⟨ṫ, ν⟩/r`, `τ_g = ⟨ṅ, ν⟩/r`.
    pub fn from_frame(curve: &CurveSamples<T>, frame: &DarbouxFrame<T>) -> Self {
        let t_dot = curve.d_param(&frame.tangent);
        let n_dot = curve.d_param(&frame.normal);
        let n = curve.len();
        let mut kappa_g = Vec::with_capacity(n);
        let mut kappa_n = Vec::with_capacity(n);
        let mut tau_g = Vec::with_capacity(n);
        for i in 0..n {
            let r = curve.speed[i];
            kappa_g.push(t_dot[i].dot(&frame.normal[i]) / r);
            kappa_n.push(t_dot[i].dot(&frame.surface_normal[i]) / r);
            tau_g.push(n_dot[i].dot(&frame.surface_normal[i]) / r);
        }
        Self {
            kappa_g,
            kappa_n,
            tau_g,
        }
    }

    /// Per-sample `‖ṫ/r − (κ_g n + κ_n ν)‖`.
    pub fn frame_residual(&self, curve: &CurveSamples<T>, frame: &DarbouxFrame<T>) -> Vec<T> {
        let t_dot = curve.d_param(&frame.tangent);
        (0..curve.len())
            .map(|i| {
                let lhs = t_dot[i] / curve.speed[i];
                let rhs = frame.normal[i] * self.kappa_g[i] + frame.surface_normal[i] * self.kappa_n[i];
                (lhs - rhs).norm()
            })
            .collect()
    }
}

/// Computes the Darboux frame of the marked curve.
pub fn darboux_frame<T: Real>(flag: &ParameterizedFlag<T>) -> Result<DarbouxFrame<T>> {
    let surface = fundamental_forms(flag)?;
    let curve = CurveSamples::from_flag(flag);
    Ok(DarbouxFrame::from_parts(
        &curve,
        &surface,
        flag.equator_interior_row(),
    ))
}

/// Computes `κ_g`, `κ_n`, `τ_g` along the marked curve.
pub fn curve_invariants<T: Real>(flag: &ParameterizedFlag<T>) -> Result<CurveInvariants<T>> {
    let surface = fundamental_forms(flag)?;
    let curve = CurveSamples::from_flag(flag);
    let frame = DarbouxFrame::from_parts(&curve, &surface, flag.equator_interior_row());
    Ok(CurveInvariants::from_frame(&curve, &frame))
}

/// `D_s h = ḣ / r`, periodic.
pub fn arc_length_derivative<T: Real>(
    h: &CurveScalarField<T>,
    curve: &CurveSamples<T>,
) -> Result<CurveScalarField<T>> {
    check_len("curve field", curve.len(), h.len())?;
    let d = curve.stencils.d_u_row(h.values());
    Ok(CurveScalarField::from_values(
        d.into_iter().zip(&curve.speed).map(|(x, &r)| x / r).collect(),
    ))
}

/// `∫ w dℓ ≈ Σ w_i r_i Δu`.
pub fn integrate_curve<T: Real>(w: &CurveScalarField<T>, curve: &CurveSamples<T>) -> Result<T> {
    check_len("curve field", curve.len(), w.len())?;
    Ok(integrate_curve_values(w.values(), curve))
}

pub(crate) fn integrate_curve_values<T: Real>(w: &[T], curve: &CurveSamples<T>) -> T {
    let s: T = w.iter().zip(&curve.speed).map(|(&x, &r)| x * r).sum();
    s * curve.du
}
