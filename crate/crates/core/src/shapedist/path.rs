use rayon::prelude::*;

use crate::error::{FlagError, Result};
use crate::geom::{FlagGeometry, ParameterizedFlag};
use crate::linalg::Vec3;
use crate::metrics::{flag_metric, psi_project, DeformationField, FlagWeights};
use crate::scalar::Real;

/// Flags `F_0, …, F_K` sharing one grid layout, with time step `Δt = 1/K`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlagPath<T> {
    flags: Vec<ParameterizedFlag<T>>,
}

impl<T: Real> FlagPath<T> {
    pub fn new(flags: Vec<ParameterizedFlag<T>>) -> Result<Self> {
        if flags.len() < 2 {
            return Err(FlagError::InvalidParameter(
                "a path needs at least two flags".into(),
            ));
        }
        if let Some(k) = flags.iter().position(|f| !f.same_layout(&flags[0])) {
            return Err(FlagError::BadDimensions(format!(
                "flag {k} of the path has a different grid layout"
            )));
        }
        Ok(Self { flags })
    }

    /// Number of time steps `K`.
    pub fn steps(&self) -> usize {
        self.flags.len() - 1
    }

    pub fn dt(&self) -> T {
        T::one() / T::from_usize_exact(self.steps())
    }

    pub fn flags(&self) -> &[ParameterizedFlag<T>] {
        &self.flags
    }

    pub fn into_flags(self) -> Vec<ParameterizedFlag<T>> {
        self.flags
    }

    pub fn start(&self) -> &ParameterizedFlag<T> {
        &self.flags[0]
    }

    pub fn end(&self) -> &ParameterizedFlag<T> {
        &self.flags[self.steps()]
    }

    /// The same flags traversed backwards.
    pub fn reversed(&self) -> Self {
        Self {
            flags: self.flags.iter().rev().cloned().collect(),
        }
    }

    pub(crate) fn flags_mut(&mut self) -> &mut [ParameterizedFlag<T>] {
        &mut self.flags
    }
}

/// `G_{F}(Ψ_F((to − F)/Δt))`, the metric of one forward-difference step.
pub fn step_energy<T: Real>(
    geom: &FlagGeometry<T>,
    from: &ParameterizedFlag<T>,
    to: &ParameterizedFlag<T>,
    dt: T,
    w: &FlagWeights<T>,
) -> Result<T> {
    let x = DeformationField::difference(to, from, dt)?;
    flag_metric(geom, &psi_project(geom, &x)?, w)
}

/// Per-step contributions `G_k(Ψ_k((F_{k+1} − F_k)/Δt)) Δt`.
pub fn path_energy_terms<T: Real>(path: &FlagPath<T>, w: &FlagWeights<T>) -> Result<Vec<T>> {
    let dt = path.dt();
    let flags = path.flags();
    (0..path.steps())
        .into_par_iter()
        .map(|k| {
            let geom = FlagGeometry::new(&flags[k])?;
            Ok(step_energy(&geom, &flags[k], &flags[k + 1], dt, w)? * dt)
        })
        .collect()
}

/// `E = Σ_k G_k(Ψ_k((F_{k+1} − F_k)/Δt)) Δt`.
pub fn path_energy<T: Real>(path: &FlagPath<T>, w: &FlagWeights<T>) -> Result<T> {
    Ok(path_energy_terms(path, w)?.into_iter().sum())
}

fn lerp_points<T: Real>(a: &ParameterizedFlag<T>, b: &ParameterizedFlag<T>, t: T) -> Vec<Vec3<T>> {
    let s = T::one() - t;
    a.points()
        .iter()
        .zip(b.points())
        .map(|(&p, &q)| p * s + q * t)
        .collect()
}

fn check_endpoints<T: Real>(a: &ParameterizedFlag<T>, b: &ParameterizedFlag<T>, steps: usize) -> Result<()> {
    if steps == 0 {
        return Err(FlagError::InvalidParameter(
            "a path needs at least one step".into(),
        ));
    }
    if !a.same_layout(b) {
        return Err(FlagError::BadDimensions(format!(
            "endpoint layouts differ: {}x{} row {} vs {}x{} row {}",
            a.n_u(),
            a.n_v(),
            a.equator_row(),
            b.n_u(),
            b.n_v(),
            b.equator_row()
        )));
    }
    Ok(())
}

/// Unit normals at every grid node: interior nodes from the surface, each pole
/// from the normalized mean of the adjacent ring.
pub(crate) fn grid_normals<T: Real>(geom: &FlagGeometry<T>, n_v: usize) -> Vec<Vec3<T>> {
    let n_u = geom.n_u();
    let interior = &geom.surface.normal;
    let ring_mean = |r: usize| {
        interior[r * n_u..(r + 1) * n_u]
            .iter()
            .fold(Vec3::zero(), |acc, &x| acc + x)
            .normalized()
    };
    let north = ring_mean(0);
    let south = ring_mean(n_v - 3);
    let mut out = Vec::with_capacity(n_u * n_v);
    out.extend(std::iter::repeat_n(north, n_u));
    out.extend_from_slice(interior);
    out.extend(std::iter::repeat_n(south, n_u));
    out
}

/// Straight-line interpolation of the samples, `F_k = (1 − k/K) A + (k/K) B`.
///
/// If an intermediate flag fails the immersion check the path is rebuilt by
/// normal-offset blending: each intermediate flag is additionally pushed along
/// the blended unit normal by `t(1 − t) · s · D`, `D` the largest sample
/// displacement, for the first `s` in `0.25, 0.5, 1, 2` that yields valid flags.
pub fn linear_path<T: Real>(
    a: &ParameterizedFlag<T>,
    b: &ParameterizedFlag<T>,
    steps: usize,
) -> Result<FlagPath<T>> {
    check_endpoints(a, b, steps)?;
    let k_t = |k: usize| T::from_usize_exact(k) / T::from_usize_exact(steps);
    let straight: Result<Vec<_>> = (0..=steps)
        .map(|k| match k {
            0 => Ok(a.clone()),
            k if k == steps => Ok(b.clone()),
            k => a.with_points(lerp_points(a, b, k_t(k))),
        })
        .collect();
    let first_error = match straight {
        Ok(flags) => return FlagPath::new(flags),
        Err(e) => e,
    };

    let na = grid_normals(&FlagGeometry::new(a)?, a.n_v());
    let nb = grid_normals(&FlagGeometry::new(b)?, b.n_v());
    let reach = a
        .points()
        .iter()
        .zip(b.points())
        .map(|(&p, &q)| (q - p).norm())
        .fold(T::zero(), T::max);
    for s in [0.25, 0.5, 1.0, 2.0] {
        let amp = T::lit(s) * reach;
        let blended: Result<Vec<_>> = (0..=steps)
            .map(|k| {
                if k == 0 {
                    return Ok(a.clone());
                }
                if k == steps {
                    return Ok(b.clone());
                }
                let t = k_t(k);
                let bump = t * (T::one() - t) * amp;
                let pts = lerp_points(a, b, t)
                    .into_iter()
                    .enumerate()
                    .map(|(i, p)| p + (na[i] * (T::one() - t) + nb[i] * t).normalized() * bump)
                    .collect();
                a.with_points(pts)
            })
            .collect();
        if let Ok(flags) = blended {
            return FlagPath::new(flags);
        }
    }
    Err(first_error)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    #[test]
    fn constant_path_has_zero_energy() {
        let f = shapes::bumpy_sphere::<f64>(1.0, 0.05, 4, 32, 17).unwrap();
        let p = FlagPath::new(vec![f.clone(); 5]).unwrap();
        assert_eq!(path_energy(&p, &FlagWeights::ones()).unwrap(), 0.0);
    }

    #[test]
    fn linear_path_hits_both_endpoints() {
        let a = shapes::sphere::<f64>(1.0, 32, 17).unwrap();
        let b = shapes::ellipsoid::<f64>(1.0, 1.0, 1.3, 32, 17).unwrap();
        let p = linear_path(&a, &b, 4).unwrap();
        assert_eq!(p.steps(), 4);
        assert_eq!(p.start(), &a);
        assert_eq!(p.end(), &b);
        assert!((p.dt() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn collapsing_interpolation_falls_back_to_normal_offsets() {
        // antipodal map: the straight path passes through the origin
        let a = shapes::sphere::<f64>(1.0, 32, 17).unwrap();
        let b = a.map_points(|p| -p).unwrap();
        let p = linear_path(&a, &b, 2).unwrap();
        assert!(p.flags()[1].check_immersion().is_ok());
    }

    #[test]
    fn mismatched_layouts_are_rejected() {
        let a = shapes::sphere::<f64>(1.0, 32, 17).unwrap();
        let b = shapes::sphere::<f64>(1.0, 32, 19).unwrap();
        assert!(matches!(linear_path(&a, &b, 4), Err(FlagError::BadDimensions(_))));
        assert!(FlagPath::new(vec![a]).is_err());
    }
}
