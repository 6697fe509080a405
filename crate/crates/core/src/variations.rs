//! First variations of the curve speed and tangent under a normal deformation
//! `h₁ n + h₂ ν`, and of the induced metric and surface normal under `h ν`, both
//! in closed form and as central finite differences in the deformation size.
//!
//! The finite-difference oracles rebuild the geometry from displaced samples with
//! the same stencils, so the analytic and numeric results differ only by the
//! `O(ε²)` truncation of the central difference and by discrete product-rule
//! defects of the stencils.

use crate::error::{check_len, Result};
use crate::geom::{
    arc_length_derivative, metric_and_normal, surface_gradient, CurveSamples, CurveScalarField, FlagGeometry,
    ParameterizedFlag, ScalarField, SurfaceInvariants,
};
use crate::linalg::{Mat2, Vec3};
use crate::scalar::Real;

/// Variation `(δr, δt)` of the speed and the unit tangent along the curve.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveVariation<T> {
    pub delta_speed: Vec<T>,
    pub delta_tangent: Vec<Vec3<T>>,
}

/// Variation `(δg, δν)` of the induced metric and the unit normal at interior nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceVariation<T> {
    pub delta_metric: Vec<Mat2<T>>,
    pub delta_normal: Vec<Vec3<T>>,
}

impl<T: Real> CurveVariation<T> {
    /// `max_i |⟨δt_i, t_i⟩|`.
    pub fn tangent_leak(&self, curve: &CurveSamples<T>) -> T {
        self.delta_tangent
            .iter()
            .zip(&curve.tangent)
            .fold(T::zero(), |m, (d, t)| m.max(d.dot(t).abs()))
    }
}

impl<T: Real> SurfaceVariation<T> {
    /// `max_k |⟨δν_k, ν_k⟩|`.
    pub fn normal_leak(&self, inv: &SurfaceInvariants<T>) -> T {
        self.delta_normal
            .iter()
            .zip(&inv.normal)
            .fold(T::zero(), |m, (d, n)| m.max(d.dot(n).abs()))
    }
}

/// `δr = −r(h₁κ_g + h₂κ_n)`, `δt = (D_s h₁ − h₂τ_g) n + (D_s h₂ + h₁τ_g) ν`.
pub fn analytic_curve_variation<T: Real>(
    geom: &FlagGeometry<T>,
    h1: &CurveScalarField<T>,
    h2_on_curve: &CurveScalarField<T>,
) -> Result<CurveVariation<T>> {
    let n = geom.curve.len();
    check_len("h1", n, h1.len())?;
    check_len("h2 on curve", n, h2_on_curve.len())?;
    let ds1 = arc_length_derivative(h1, &geom.curve)?;
    let ds2 = arc_length_derivative(h2_on_curve, &geom.curve)?;
    let inv = &geom.invariants;
    let fr = &geom.frame;
    let mut delta_speed = Vec::with_capacity(n);
    let mut delta_tangent = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b) = (h1[i], h2_on_curve[i]);
        delta_speed.push(-geom.curve.speed[i] * (a * inv.kappa_g[i] + b * inv.kappa_n[i]));
        delta_tangent.push(
            fr.normal[i] * (ds1[i] - b * inv.tau_g[i]) + fr.surface_normal[i] * (ds2[i] + a * inv.tau_g[i]),
        );
    }
    Ok(CurveVariation {
        delta_speed,
        delta_tangent,
    })
}

/// Central differences of `r` and `t` along `f ± ε(h₁ n + h₂ ν)`.
pub fn numeric_curve_variation<T: Real>(
    geom: &FlagGeometry<T>,
    h1: &CurveScalarField<T>,
    h2_on_curve: &CurveScalarField<T>,
    eps: T,
) -> Result<CurveVariation<T>> {
    let n = geom.curve.len();
    check_len("h1", n, h1.len())?;
    check_len("h2 on curve", n, h2_on_curve.len())?;
    let fr = &geom.frame;
    let push: Vec<Vec3<T>> = (0..n)
        .map(|i| fr.normal[i] * h1[i] + fr.surface_normal[i] * h2_on_curve[i])
        .collect();
    let displaced = |s: T| {
        let pts = geom
            .curve
            .points
            .iter()
            .zip(&push)
            .map(|(&p, &d)| p + d * s)
            .collect();
        CurveSamples::from_points(pts, geom.curve.stencils.clone(), geom.curve.du)
    };
    let plus = displaced(eps);
    let minus = displaced(-eps);
    let two_eps = eps + eps;
    Ok(CurveVariation {
        delta_speed: (0..n)
            .map(|i| (plus.speed[i] - minus.speed[i]) / two_eps)
            .collect(),
        delta_tangent: (0..n)
            .map(|i| (plus.tangent[i] - minus.tangent[i]) / two_eps)
            .collect(),
    })
}

/// Linearization of `(r, t)` for an arbitrary displacement `δf` of the curve samples:
/// `δr = ⟨t, δḟ⟩`, `δt = (δḟ − δr t)/r`.
pub fn curve_variation_from_displacement<T: Real>(
    curve: &CurveSamples<T>,
    delta_f: &[Vec3<T>],
) -> Result<CurveVariation<T>> {
    check_len("curve displacement", curve.len(), delta_f.len())?;
    let d = curve.d_param(delta_f);
    let mut delta_speed = Vec::with_capacity(d.len());
    let mut delta_tangent = Vec::with_capacity(d.len());
    for (i, &x) in d.iter().enumerate() {
        let t = curve.tangent[i];
        let dr = x.dot(&t);
        delta_speed.push(dr);
        delta_tangent.push((x - t * dr) / curve.speed[i]);
    }
    Ok(CurveVariation {
        delta_speed,
        delta_tangent,
    })
}

/// `δg = −2h·II` (so `g⁻¹δg = −2hL`) and `δν = −∇h`.
pub fn analytic_surface_variation<T: Real>(
    inv: &SurfaceInvariants<T>,
    h: &ScalarField<T>,
) -> Result<SurfaceVariation<T>> {
    let grad = surface_gradient(h, inv)?;
    let m2 = T::lit(-2.0);
    Ok(SurfaceVariation {
        delta_metric: inv
            .second
            .iter()
            .zip(h.values())
            .map(|(ii, &x)| ii.scale(m2 * x))
            .collect(),
        delta_normal: grad.ambient.into_iter().map(|g| -g).collect(),
    })
}

/// Central differences of `g` and `ν` along `F ± ε h ν` (interior nodes displaced, poles fixed).
pub fn numeric_surface_variation<T: Real>(
    flag: &ParameterizedFlag<T>,
    inv: &SurfaceInvariants<T>,
    h: &ScalarField<T>,
    eps: T,
) -> Result<SurfaceVariation<T>> {
    check_len("scalar field", inv.len(), h.len())?;
    let n_u = flag.n_u();
    let displaced = |s: T| {
        let mut pts = flag.points().to_vec();
        for (k, (&x, &nu)) in h.values().iter().zip(&inv.normal).enumerate() {
            pts[n_u + k] += nu * (x * s);
        }
        metric_and_normal(&flag.with_points_unchecked(pts))
    };
    let (g_plus, nu_plus) = displaced(eps);
    let (g_minus, nu_minus) = displaced(-eps);
    let inv_two_eps = T::one() / (eps + eps);
    Ok(SurfaceVariation {
        delta_metric: g_plus
            .iter()
            .zip(&g_minus)
            .map(|(a, b)| a.sub(b).scale(inv_two_eps))
            .collect(),
        delta_normal: nu_plus
            .iter()
            .zip(&nu_minus)
            .map(|(&a, &b)| (a - b) * inv_two_eps)
            .collect(),
    })
}

/// Default finite-difference step: `1e-5` times the radius of a circle with the
/// same length as the marked curve.
pub fn default_epsilon<T: Real>(geom: &FlagGeometry<T>) -> T {
    T::lit(1e-5) * geom.curve.length() / T::TAU()
}

/// Largest pointwise error of `numeric` against `analytic`.
///
/// `max_rel = max_k |a_k − n_k| / (|a_k| + scale)` with `scale` the larger of
/// `max_k |a_k|` and a natural scale of the field, which keeps the ratio finite
/// when the analytic field vanishes up to rounding.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorSummary<T> {
    pub max_abs: T,
    pub max_rel: T,
    pub scale: T,
}

fn summarize<T: Real>(pairs: impl Iterator<Item = (T, T)> + Clone, fallback_scale: T) -> ErrorSummary<T> {
    let peak = pairs.clone().fold(T::zero(), |m, (a, _)| m.max(a));
    let scale = peak.max(fallback_scale);
    let mut max_abs = T::zero();
    let mut max_rel = T::zero();
    for (a, d) in pairs {
        max_abs = max_abs.max(d);
        let rel = if scale > T::zero() { d / (a + scale) } else { d };
        max_rel = max_rel.max(rel);
    }
    ErrorSummary {
        max_abs,
        max_rel,
        scale,
    }
}

pub fn compare_scalars<T: Real>(analytic: &[T], numeric: &[T], fallback_scale: T) -> ErrorSummary<T> {
    summarize(
        analytic
            .iter()
            .zip(numeric)
            .map(|(&a, &b)| (a.abs(), (a - b).abs())),
        fallback_scale,
    )
}

pub fn compare_vectors<T: Real>(
    analytic: &[Vec3<T>],
    numeric: &[Vec3<T>],
    fallback_scale: T,
) -> ErrorSummary<T> {
    summarize(
        analytic
            .iter()
            .zip(numeric)
            .map(|(a, b)| (a.norm(), (*a - *b).norm())),
        fallback_scale,
    )
}

pub fn compare_matrices<T: Real>(
    analytic: &[Mat2<T>],
    numeric: &[Mat2<T>],
    fallback_scale: T,
) -> ErrorSummary<T> {
    summarize(
        analytic
            .iter()
            .zip(numeric)
            .map(|(a, b)| (a.frobenius(), a.sub(b).frobenius())),
        fallback_scale,
    )
}

/// Errors of a numeric curve variation against the analytic formulas.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveVariationCheck<T> {
    pub speed: ErrorSummary<T>,
    pub tangent: ErrorSummary<T>,
}

/// Compares analytic and numeric `(δr, δt)`. The fallback scale for identically
/// vanishing fields is `max(|h₁|, |h₂|)` times the largest curvature magnitude.
pub fn check_curve_variation<T: Real>(
    geom: &FlagGeometry<T>,
    h1: &CurveScalarField<T>,
    h2_on_curve: &CurveScalarField<T>,
    eps: T,
) -> Result<CurveVariationCheck<T>> {
    let a = analytic_curve_variation(geom, h1, h2_on_curve)?;
    let n = numeric_curve_variation(geom, h1, h2_on_curve, eps)?;
    let inv = &geom.invariants;
    let kappa = inv
        .kappa_g
        .iter()
        .chain(&inv.kappa_n)
        .chain(&inv.tau_g)
        .fold(T::zero(), |m, x| m.max(x.abs()));
    let hmax = h1.max_abs().max(h2_on_curve.max_abs());
    let rmax = geom.curve.speed.iter().fold(T::zero(), |m, &r| m.max(r));
    Ok(CurveVariationCheck {
        speed: compare_scalars(&a.delta_speed, &n.delta_speed, rmax * hmax * kappa),
        tangent: compare_vectors(&a.delta_tangent, &n.delta_tangent, hmax * kappa),
    })
}

/// Errors of numeric surface variations against the closed forms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfaceVariationCheck<T> {
    /// `|δν_numeric|²` against `|∇h|²`.
    pub normal_norm: ErrorSummary<T>,
    /// `|δν_analytic|²` against `|∇h|²` at fixed discrete `g`.
    pub normal_norm_algebraic: ErrorSummary<T>,
    /// Numeric `g⁻¹δg` against `−2hL`, Frobenius norm.
    pub shape_operator: ErrorSummary<T>,
    /// Numeric `Tr(g⁻¹δg)` against `−2h(κ₁ + κ₂)`.
    pub trace: ErrorSummary<T>,
    /// Numeric `δν` against `−∇h`.
    pub normal: ErrorSummary<T>,
}

pub fn check_surface_variation<T: Real>(
    flag: &ParameterizedFlag<T>,
    inv: &SurfaceInvariants<T>,
    h: &ScalarField<T>,
    eps: T,
) -> Result<SurfaceVariationCheck<T>> {
    let grad = surface_gradient(h, inv)?;
    let analytic = analytic_surface_variation(inv, h)?;
    let numeric = numeric_surface_variation(flag, inv, h, eps)?;
    let kappa = inv
        .kappa1
        .iter()
        .chain(&inv.kappa2)
        .fold(T::zero(), |m, x| m.max(x.abs()));
    let hmax = h.max_abs();
    let vec_fallback = hmax * kappa;
    let sq_fallback = vec_fallback * vec_fallback;

    let num_sq: Vec<T> = numeric.delta_normal.iter().map(|d| d.norm_squared()).collect();
    let ana_sq: Vec<T> = analytic.delta_normal.iter().map(|d| d.norm_squared()).collect();
    let two = T::lit(2.0);
    let target: Vec<Mat2<T>> = inv
        .shape
        .iter()
        .zip(h.values())
        .map(|(l, &x)| l.scale(-two * x))
        .collect();
    let measured: Vec<Mat2<T>> = inv
        .metric
        .iter()
        .zip(&numeric.delta_metric)
        .map(|(g, dg)| g.inverse().mul_mat(dg))
        .collect();
    let target_tr: Vec<T> = (0..inv.len())
        .map(|k| -two * h[k] * (inv.kappa1[k] + inv.kappa2[k]))
        .collect();
    let measured_tr: Vec<T> = measured.iter().map(|m| m.trace()).collect();

    Ok(SurfaceVariationCheck {
        normal_norm: compare_scalars(&grad.norm_squared, &num_sq, sq_fallback),
        normal_norm_algebraic: compare_scalars(&grad.norm_squared, &ana_sq, sq_fallback),
        shape_operator: compare_matrices(&target, &measured, two * vec_fallback),
        trace: compare_scalars(&target_tr, &measured_tr, two * vec_fallback),
        normal: compare_vectors(&analytic.delta_normal, &numeric.delta_normal, vec_fallback),
    })
}
