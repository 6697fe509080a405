use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{FlagError, Result};
use crate::geom::{FlagGeometry, ParameterizedFlag};
use crate::linalg::Vec3;
use crate::metrics::FlagWeights;
use crate::scalar::Real;

use super::path::{grid_normals, linear_path, path_energy, step_energy, FlagPath};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StraightenOptions {
    pub max_iters: usize,
    /// First trial step length in coefficient space.
    pub step: f64,
    /// Sufficient-decrease constant of the Armijo test.
    pub armijo: f64,
    /// Step shrink factor per backtrack.
    pub backtrack: f64,
    pub max_backtracks: usize,
    /// Stop when an accepted step lowers the energy by less than `tol · E`.
    pub tol: f64,
    /// Central-difference step of the gradient probes.
    pub probe_eps: f64,
}

impl Default for StraightenOptions {
    fn default() -> Self {
        Self {
            max_iters: 20,
            step: 1e-2,
            armijo: 1e-4,
            backtrack: 0.5,
            max_backtracks: 30,
            tol: 1e-6,
            probe_eps: 1e-6,
        }
    }
}

impl StraightenOptions {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.step, self.armijo, self.probe_eps, self.tol];
        if positive.iter().any(|x| !(*x > 0.0 && x.is_finite())) || self.max_backtracks == 0 {
            return Err(FlagError::InvalidParameter(
                "optimizer step, armijo, probe_eps, tol and max_backtracks must be positive".into(),
            ));
        }
        if self.tol <= f64::EPSILON {
            return Err(FlagError::InvalidParameter(
                "tol must exceed machine epsilon".into(),
            ));
        }
        if !(self.backtrack > 0.0 && self.backtrack < 1.0) || self.armijo >= 1.0 {
            return Err(FlagError::InvalidParameter(
                "backtrack must lie in (0, 1) and armijo below 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StraightenStatus {
    /// Relative decrease fell below the tolerance, or the gradient vanished.
    Converged,
    MaxIterations,
    /// No step satisfied the Armijo test; the best path found is returned.
    LineSearchFailed,
}

#[derive(Clone, Debug)]
pub struct StraightenResult<T> {
    pub path: FlagPath<T>,
    /// Energy before the first iteration and after every accepted step.
    pub history: Vec<T>,
    pub iterations: usize,
    pub status: StraightenStatus,
}

impl<T: Real> StraightenResult<T> {
    pub fn energy(&self) -> T {
        *self.history.last().expect("history holds the initial energy")
    }

    pub fn distance(&self) -> T {
        self.energy().sqrt()
    }

    /// Turns a failed line search into [`FlagError::LineSearchFailed`].
    pub fn into_checked(self) -> Result<Self> {
        match self.status {
            StraightenStatus::LineSearchFailed => Err(FlagError::LineSearchFailed {
                iterations: self.iterations,
            }),
            _ => Ok(self),
        }
    }
}

/// Number of basis fields per interior flag.
pub const MODES_PER_FLAG: usize = 16;

fn surface_mode<T: Real>(m: usize, u: T, v: T) -> T {
    let (su, cu, sv, cv) = (u.sin(), u.cos(), v.sin(), v.cos());
    let two = T::lit(2.0);
    match m {
        0..=4 => (T::from_usize_exact(m) * v).cos(),
        5 => sv * cu,
        6 => sv * su,
        7 => sv * sv * (two * u).cos(),
        8 => sv * sv * (two * u).sin(),
        9 => cv * sv * cu,
        10 => cv * sv * su,
        _ => unreachable!(),
    }
}

fn curve_mode<T: Real>(m: usize, u: T) -> T {
    let two = T::lit(2.0);
    match m {
        0 => T::one(),
        1 => u.cos(),
        2 => u.sin(),
        3 => (two * u).cos(),
        4 => (two * u).sin(),
        _ => unreachable!(),
    }
}

/// Normal perturbation fields spanning the search space at one flag.
///
/// Eleven fields `h₂ ν` with `h₂` smooth on the sphere (the poles move along the
/// mean ring normal), and five in-surface fields `h₁(u) b(v) (ν × F_u/|F_u|)`
/// whose restriction to the curve is `h₁ n`; `b(v) = sin²v / sin²v_c` vanishes at
/// the poles.
pub fn normal_basis<T: Real>(flag: &ParameterizedFlag<T>, geom: &FlagGeometry<T>) -> Vec<Vec<Vec3<T>>> {
    let (n_u, n_v) = (flag.n_u(), flag.n_v());
    let normals = grid_normals(geom, n_v);
    let v_c = flag.v(flag.equator_row());
    let bump_norm = v_c.sin() * v_c.sin();
    let mut basis = Vec::with_capacity(MODES_PER_FLAG);
    for m in 0..11 {
        let mut field = Vec::with_capacity(n_u * n_v);
        for j in 0..n_v {
            for i in 0..n_u {
                field.push(normals[j * n_u + i] * surface_mode(m, flag.u(i), flag.v(j)));
            }
        }
        basis.push(field);
    }
    for m in 0..5 {
        let mut field = vec![Vec3::zero(); n_u * n_v];
        for r in 0..flag.n_interior_rows() {
            let v = flag.v(r + 1);
            let bump = v.sin() * v.sin() / bump_norm;
            for i in 0..n_u {
                let k = r * n_u + i;
                let side = geom.surface.normal[k].cross(&geom.surface.f_u[k].normalized());
                field[n_u + k] = side * (curve_mode(m, flag.u(i)) * bump);
            }
        }
        basis.push(field);
    }
    basis
}

fn displaced<T: Real>(flag: &ParameterizedFlag<T>, field: &[Vec3<T>], s: T) -> ParameterizedFlag<T> {
    flag.with_points_unchecked(
        flag.points()
            .iter()
            .zip(field)
            .map(|(&p, &x)| p + x * s)
            .collect(),
    )
}

/// Energy of the two steps touching interior flag `k` when it is replaced by `moved`.
fn local_energy<T: Real>(
    path: &FlagPath<T>,
    geoms: &[FlagGeometry<T>],
    k: usize,
    moved: &ParameterizedFlag<T>,
    w: &FlagWeights<T>,
) -> Result<T> {
    let flags = path.flags();
    let dt = path.dt();
    let before = step_energy(&geoms[k - 1], &flags[k - 1], moved, dt, w)?;
    let geom = FlagGeometry::new(moved)?;
    let after = step_energy(&geom, moved, &flags[k + 1], dt, w)?;
    Ok((before + after) * dt)
}

/// Gradient of the path energy with respect to the basis coefficients of every
/// interior flag, by central differences.
fn gradient<T: Real>(
    path: &FlagPath<T>,
    bases: &[Vec<Vec<Vec3<T>>>],
    w: &FlagWeights<T>,
    eps: T,
) -> Result<Vec<T>> {
    let geoms: Vec<FlagGeometry<T>> = path
        .flags()
        .par_iter()
        .map(FlagGeometry::new)
        .collect::<Result<_>>()?;
    let interior = path.steps() - 1;
    let probes: Vec<(usize, usize)> = (0..interior)
        .flat_map(|k| (0..bases[k].len()).map(move |m| (k + 1, m)))
        .collect();
    probes
        .par_iter()
        .map(|&(k, m)| {
            let flag = &path.flags()[k];
            let plus = local_energy(path, &geoms, k, &displaced(flag, &bases[k - 1][m], eps), w)?;
            let minus = local_energy(path, &geoms, k, &displaced(flag, &bases[k - 1][m], -eps), w)?;
            Ok((plus - minus) / (eps + eps))
        })
        .collect()
}

/// Moves every interior flag by `−α · Σ_m g_{k,m} B_{k,m}`; `None` if a moved flag
/// is not an immersion.
fn trial_path<T: Real>(
    path: &FlagPath<T>,
    bases: &[Vec<Vec<Vec3<T>>>],
    grad: &[T],
    alpha: T,
) -> Option<FlagPath<T>> {
    let mut out = path.clone();
    let mut offset = 0;
    for (k, basis) in bases.iter().enumerate() {
        let flag = &mut out.flags_mut()[k + 1];
        let mut pts = flag.points().to_vec();
        for (m, field) in basis.iter().enumerate() {
            let c = -alpha * grad[offset + m];
            for (p, &x) in pts.iter_mut().zip(field) {
                *p += x * c;
            }
        }
        offset += basis.len();
        *flag = flag.with_points(pts).ok()?;
    }
    Some(out)
}

/// Lowers the path energy by Armijo-backtracked gradient descent over the normal
/// basis of every interior flag; the endpoints stay fixed and the energy history is
/// non-increasing.
pub fn straighten<T: Real>(
    path: FlagPath<T>,
    w: &FlagWeights<T>,
    opts: &StraightenOptions,
) -> Result<StraightenResult<T>> {
    opts.validate()?;
    let mut path = path;
    let mut energy = path_energy(&path, w)?;
    let mut history = vec![energy];
    let mut alpha = T::lit(opts.step);
    let eps = T::lit(opts.probe_eps);
    let armijo = T::lit(opts.armijo);
    let shrink = T::lit(opts.backtrack);
    let tol = T::lit(opts.tol);

    if path.steps() < 2 {
        return Ok(StraightenResult {
            path,
            history,
            iterations: 0,
            status: StraightenStatus::Converged,
        });
    }

    for iter in 0..opts.max_iters {
        let bases: Vec<_> = path.flags()[1..path.steps()]
            .iter()
            .map(|f| FlagGeometry::new(f).map(|g| normal_basis(f, &g)))
            .collect::<Result<_>>()?;
        let grad = gradient(&path, &bases, w, eps)?;
        let g2: T = grad.iter().map(|&g| g * g).sum();
        if !(g2 > T::zero()) || energy == T::zero() {
            return Ok(StraightenResult {
                path,
                history,
                iterations: iter,
                status: StraightenStatus::Converged,
            });
        }

        let mut accepted = None;
        let mut trial_alpha = alpha;
        for _ in 0..opts.max_backtracks {
            if let Some(candidate) = trial_path(&path, &bases, &grad, trial_alpha) {
                if let Ok(e) = path_energy(&candidate, w) {
                    if e <= energy - armijo * trial_alpha * g2 {
                        accepted = Some((candidate, e));
                        break;
                    }
                }
            }
            trial_alpha = trial_alpha * shrink;
        }

        let Some((candidate, e)) = accepted else {
            return Ok(StraightenResult {
                path,
                history,
                iterations: iter,
                status: StraightenStatus::LineSearchFailed,
            });
        };
        // grow after an immediate success, otherwise keep the reduced step
        alpha = if trial_alpha == alpha {
            alpha / shrink
        } else {
            trial_alpha
        };
        let decrease = energy - e;
        path = candidate;
        energy = e;
        history.push(energy);
        if decrease <= tol * energy {
            return Ok(StraightenResult {
                path,
                history,
                iterations: iter + 1,
                status: StraightenStatus::Converged,
            });
        }
    }
    Ok(StraightenResult {
        path,
        history,
        iterations: opts.max_iters,
        status: StraightenStatus::MaxIterations,
    })
}

/// `√E` of the straightened linear path between `a` and `b` with `steps` time steps.
pub fn distance<T: Real>(
    a: &ParameterizedFlag<T>,
    b: &ParameterizedFlag<T>,
    steps: usize,
    w: &FlagWeights<T>,
    opts: &StraightenOptions,
) -> Result<StraightenResult<T>> {
    straighten(linear_path(a, b, steps)?, w, opts)
}
