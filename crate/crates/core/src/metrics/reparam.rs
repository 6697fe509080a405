//! Equator-preserving reparameterizations `γ(u, v) = (α(u), β(u, v))` and
//! resampling of flags and deformation fields along them.

use rand::Rng;

use crate::error::{FlagError, Result};
use crate::geom::{cubic_weights, ParameterizedFlag};
use crate::linalg::Linear;
use crate::scalar::Real;

use super::projection::DeformationField;

/// A diffeomorphism of the parameter sphere in product form that maps the
/// marked row to itself: `α` is a circle diffeomorphism, `β(u, ·)` fixes the
/// poles and the curve colatitude.
pub trait EquatorPreserving<T: Real> {
    fn alpha(&self, u: T) -> T;
    fn beta(&self, u: T, v: T) -> T;
}

/// `α(u) = u + s + Σ_k (a_k cos ku + b_k sin ku)`,
/// `β(u, v) = v + m(u) sin²v sin(v − v_c)` with `m(u) = Σ_k (c_k cos ku + d_k sin ku)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierReparam<T> {
    pub shift: T,
    /// `(a_k, b_k)` for `k = 1, 2, …`.
    pub alpha_modes: Vec<(T, T)>,
    /// `(c_k, d_k)` for `k = 0, 1, …` (the `k = 0` sine coefficient is ignored).
    pub beta_modes: Vec<(T, T)>,
    /// Colatitude of the marked curve.
    pub curve_colatitude: T,
}

impl<T: Real> FourierReparam<T> {
    pub fn identity(curve_colatitude: T) -> Self {
        Self {
            shift: T::zero(),
            alpha_modes: Vec::new(),
            beta_modes: Vec::new(),
            curve_colatitude,
        }
    }

    /// Rigid rotation `u ↦ u + shift`.
    pub fn rotation(shift: T, curve_colatitude: T) -> Self {
        Self {
            shift,
            ..Self::identity(curve_colatitude)
        }
    }

    /// A random smooth reparameterization with `α′ ≥ 1/2` and `∂β/∂v ≥ 1/2`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, curve_colatitude: T, modes: usize) -> Self {
        let modes = modes.max(1);
        // Σ k (|a_k| + |b_k|) ≤ 1/2 keeps α′ ≥ 1/2
        let budget_a = 0.5 / (modes * (modes + 1)) as f64;
        let alpha_modes = (1..=modes)
            .map(|k| {
                let s = budget_a / k as f64;
                (T::lit(rng.gen_range(-s..s)), T::lit(rng.gen_range(-s..s)))
            })
            .collect();
        // |d/dv (sin²v sin(v − v_c))| ≤ 3, so Σ|m| ≤ 1/6 keeps ∂β/∂v ≥ 1/2
        let budget_b = 1.0 / (6.0 * (2 * modes + 1) as f64);
        let beta_modes = (0..=modes)
            .map(|_| {
                (
                    T::lit(rng.gen_range(-budget_b..budget_b)),
                    T::lit(rng.gen_range(-budget_b..budget_b)),
                )
            })
            .collect();
        Self {
            shift: T::lit(rng.gen_range(-1.0..1.0)),
            alpha_modes,
            beta_modes,
            curve_colatitude,
        }
    }

    fn beta_amplitude(&self, u: T) -> T {
        self.beta_modes
            .iter()
            .enumerate()
            .map(|(k, &(c, d))| {
                let ku = T::from_usize_exact(k) * u;
                if k == 0 {
                    c
                } else {
                    c * ku.cos() + d * ku.sin()
                }
            })
            .sum()
    }
}

impl<T: Real> EquatorPreserving<T> for FourierReparam<T> {
    fn alpha(&self, u: T) -> T {
        let wiggle: T = self
            .alpha_modes
            .iter()
            .enumerate()
            .map(|(k, &(a, b))| {
                let ku = T::from_usize_exact(k + 1) * u;
                a * ku.cos() + b * ku.sin()
            })
            .sum();
        u + self.shift + wiggle
    }

    fn beta(&self, u: T, v: T) -> T {
        let s = v.sin();
        v + self.beta_amplitude(u) * s * s * (v - self.curve_colatitude).sin()
    }
}

/// Checks that `γ` is an orientation-preserving, equator-preserving
/// diffeomorphism when sampled on the flag's grid.
pub fn check_reparameterization<T: Real>(
    flag: &ParameterizedFlag<T>,
    gamma: &impl EquatorPreserving<T>,
) -> Result<()> {
    let (n_u, n_v) = (flag.n_u(), flag.n_v());
    let tol = T::lit(1e-10);
    let probe = T::lit(1e-6);
    let two = T::lit(2.0);
    let v_eq = flag.v(flag.equator_row());
    let fail = |msg: String| Err(FlagError::NotADiffeo(msg));

    let u0 = flag.u(0);
    if ((gamma.alpha(u0 + T::TAU()) - gamma.alpha(u0)) - T::TAU()).abs() > tol {
        return fail("α does not advance by one full turn".into());
    }
    for i in 0..n_u {
        let u = flag.u(i);
        let da = (gamma.alpha(u + probe) - gamma.alpha(u - probe)) / (two * probe);
        if !(da > T::zero()) {
            return fail(format!("α′ ≤ 0 at column {i}"));
        }
        if (gamma.beta(u, v_eq) - v_eq).abs() > tol {
            return fail(format!("β moves the curve row at column {i}"));
        }
        if gamma.beta(u, T::zero()).abs() > tol || (gamma.beta(u, T::PI()) - T::PI()).abs() > tol {
            return fail(format!("β moves a pole at column {i}"));
        }
        for j in 0..n_v {
            let v = flag.v(j);
            let lo = (v - probe).max(T::zero());
            let hi = (v + probe).min(T::PI());
            let db = (gamma.beta(u, hi) - gamma.beta(u, lo)) / (hi - lo);
            if !(db > T::zero()) {
                return fail(format!("∂β/∂v ≤ 0 at row {j}, column {i}"));
            }
        }
    }
    Ok(())
}

/// Samples a grid-valued quantity at `γ(u_i, v_j)` by bicubic interpolation,
/// periodic in `u` and clamped in `v`.
pub fn resample_grid<T: Real, V: Linear<T>>(
    values: &[V],
    n_u: usize,
    n_v: usize,
    gamma: &impl EquatorPreserving<T>,
) -> Vec<V> {
    let du = std::f64::consts::TAU / n_u as f64;
    let dv = std::f64::consts::PI / (n_v - 1) as f64;
    let mut out = Vec::with_capacity(n_u * n_v);
    for j in 0..n_v {
        for i in 0..n_u {
            let u: T = crate::geom::u_coord(i, n_u);
            let v: T = crate::geom::v_coord(j, n_v);
            let x = gamma.alpha(u).as_f64() / du;
            let y = (gamma.beta(u, v).as_f64() / dv).clamp(0.0, (n_v - 1) as f64);
            let (xi, xw) = cubic_weights(x, n_u, true);
            let (yi, yw) = cubic_weights(y, n_v, false);
            let mut acc = V::zero_value();
            for (a, &wy) in yi.iter().zip(&yw) {
                if wy == 0.0 {
                    continue;
                }
                let row = *a as usize * n_u;
                let mut line = V::zero_value();
                for (b, &wx) in xi.iter().zip(&xw) {
                    if wx == 0.0 {
                        continue;
                    }
                    let col = b.rem_euclid(n_u as isize) as usize;
                    line = line + values[row + col] * T::lit(wx);
                }
                acc = acc + line * T::lit(wy);
            }
            out.push(acc);
        }
    }
    out
}

/// The flag `F ∘ γ`.
pub fn apply_reparameterization<T: Real>(
    flag: &ParameterizedFlag<T>,
    gamma: &impl EquatorPreserving<T>,
) -> Result<ParameterizedFlag<T>> {
    check_reparameterization(flag, gamma)?;
    let pts = resample_grid(flag.points(), flag.n_u(), flag.n_v(), gamma);
    flag.with_points(pts)
}

/// The deformation `X ∘ γ`.
pub fn transport_deformation<T: Real>(
    x: &DeformationField<T>,
    gamma: &impl EquatorPreserving<T>,
) -> Result<DeformationField<T>> {
    DeformationField::new(
        x.n_u(),
        x.n_v(),
        resample_grid(x.vectors(), x.n_u(), x.n_v(), gamma),
    )
}
