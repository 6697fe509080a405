//! Tangent vectors to pre-shape space and their normal components.

use crate::error::{check_len, Result};
use crate::geom::{CurveScalarField, FlagGeometry, ParameterizedFlag, ScalarField};
use crate::linalg::Vec3;
use crate::scalar::Real;

/// A deformation `X` of the sampled embedding: one vector per grid node, pole rows included.
#[derive(Clone, Debug, PartialEq)]
pub struct DeformationField<T> {
    n_u: usize,
    n_v: usize,
    vectors: Vec<Vec3<T>>,
}

impl<T: Real> DeformationField<T> {
    pub fn new(n_u: usize, n_v: usize, vectors: Vec<Vec3<T>>) -> Result<Self> {
        check_len("deformation field", n_u * n_v, vectors.len())?;
        Ok(Self { n_u, n_v, vectors })
    }

    pub fn zeros(flag: &ParameterizedFlag<T>) -> Self {
        Self {
            n_u: flag.n_u(),
            n_v: flag.n_v(),
            vectors: vec![Vec3::zero(); flag.n_u() * flag.n_v()],
        }
    }

    /// `X(u, v) = f(u, v, F(u, v))` at every grid node.
    pub fn from_fn(flag: &ParameterizedFlag<T>, f: impl Fn(T, T, Vec3<T>) -> Vec3<T>) -> Self {
        let mut vectors = Vec::with_capacity(flag.n_u() * flag.n_v());
        for j in 0..flag.n_v() {
            for i in 0..flag.n_u() {
                vectors.push(f(flag.u(i), flag.v(j), flag.point(i, j)));
            }
        }
        Self {
            n_u: flag.n_u(),
            n_v: flag.n_v(),
            vectors,
        }
    }

    /// `(to - from) / dt`, the forward-difference velocity between two flags.
    pub fn difference(to: &ParameterizedFlag<T>, from: &ParameterizedFlag<T>, dt: T) -> Result<Self> {
        check_len("flag samples", from.points().len(), to.points().len())?;
        let vectors = to
            .points()
            .iter()
            .zip(from.points())
            .map(|(&b, &a)| (b - a) / dt)
            .collect();
        Self::new(from.n_u(), from.n_v(), vectors)
    }

    #[inline]
    pub fn n_u(&self) -> usize {
        self.n_u
    }

    #[inline]
    pub fn n_v(&self) -> usize {
        self.n_v
    }

    pub fn vectors(&self) -> &[Vec3<T>] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<Vec3<T>> {
        self.vectors
    }

    pub fn interior(&self) -> &[Vec3<T>] {
        &self.vectors[self.n_u..(self.n_v - 1) * self.n_u]
    }

    pub fn row(&self, j: usize) -> &[Vec3<T>] {
        &self.vectors[j * self.n_u..(j + 1) * self.n_u]
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            n_u: self.n_u,
            n_v: self.n_v,
            vectors: self.vectors.iter().map(|&x| x * s).collect(),
        }
    }
}

/// A tangent vector to shape space: normal speed `h₁` of the curve inside the
/// surface and normal speed `h₂` of the surface.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector<T> {
    pub h1: CurveScalarField<T>,
    pub h2: ScalarField<T>,
}

impl<T: Real> TangentVector<T> {
    pub fn new(h1: CurveScalarField<T>, h2: ScalarField<T>) -> Result<Self> {
        check_len("h1 against h2 columns", h2.n_u(), h1.len())?;
        Ok(Self { h1, h2 })
    }

    pub fn zeros(flag: &ParameterizedFlag<T>) -> Self {
        Self {
            h1: CurveScalarField::constant(flag.n_u(), T::zero()),
            h2: ScalarField::zeros_like(flag),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            h1: self.h1.scale(s),
            h2: self.h2.scale(s),
        }
    }

    /// `self + s · other`.
    pub fn axpy(&self, s: T, other: &Self) -> Self {
        Self {
            h1: self.h1.axpy(s, &other.h1),
            h2: self.h2.axpy(s, &other.h2),
        }
    }

    pub(crate) fn check_against(&self, geom: &FlagGeometry<T>) -> Result<()> {
        check_len("h1", geom.curve.len(), self.h1.len())?;
        check_len("h2", geom.surface.len(), self.h2.len())
    }
}

/// `Ψ(X) = (⟨X|_C, n⟩, ⟨X, ν⟩)`: the normal components of a deformation.
///
/// Deformations tangent to the surface whose restriction to the curve is tangent
/// to the curve are mapped to zero.
pub fn psi_project<T: Real>(geom: &FlagGeometry<T>, x: &DeformationField<T>) -> Result<TangentVector<T>> {
    let n_u = geom.n_u();
    check_len("deformation columns", n_u, x.n_u())?;
    check_len(
        "deformation interior nodes",
        geom.surface.len(),
        x.interior().len(),
    )?;
    let h2: Vec<T> = x
        .interior()
        .iter()
        .zip(&geom.surface.normal)
        .map(|(v, nu)| v.dot(nu))
        .collect();
    let curve_x = &x.interior()[geom.curve_row * n_u..(geom.curve_row + 1) * n_u];
    let h1: Vec<T> = curve_x
        .iter()
        .zip(&geom.frame.normal)
        .map(|(v, n)| v.dot(n))
        .collect();
    Ok(TangentVector {
        h1: CurveScalarField::from_values(h1),
        h2: ScalarField::new(n_u, geom.surface.n_rows, h2)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::FlagGeometry;
    use crate::shapes;

    #[test]
    fn unit_normal_field_projects_to_one_and_zero() {
        let f = shapes::ellipsoid::<f64>(1.0, 1.2, 0.8, 48, 25).unwrap();
        let g = FlagGeometry::new(&f).unwrap();
        // place ν on interior nodes
        let mut vecs = vec![Vec3::zero(); f.points().len()];
        vecs[f.n_u()..(f.n_v() - 1) * f.n_u()].copy_from_slice(&g.surface.normal);
        let x = DeformationField::new(f.n_u(), f.n_v(), vecs).unwrap();
        let tv = psi_project(&g, &x).unwrap();
        assert!(tv.h2.values().iter().all(|&h| (h - 1.0).abs() < 1e-14));
        assert!(tv.h1.values().iter().all(|&h| h.abs() < 1e-14));
    }

    #[test]
    fn vertical_field_is_in_the_kernel() {
        let f = shapes::bumpy_sphere::<f64>(1.0, 0.08, 3, 48, 25).unwrap();
        let g = FlagGeometry::new(&f).unwrap();
        let n_u = f.n_u();
        let mut vecs = vec![Vec3::zero(); f.points().len()];
        for k in 0..g.surface.len() {
            let (r, i) = (k / n_u, k % n_u);
            let x = if r == g.curve_row {
                g.curve.tangent[i] * (1.0 + (i as f64).sin())
            } else {
                g.surface.f_u[k] * 0.3 + g.surface.f_v[k] * (0.1 * r as f64).cos()
            };
            vecs[n_u + k] = x;
        }
        let x = DeformationField::new(n_u, f.n_v(), vecs).unwrap();
        let tv = psi_project(&g, &x).unwrap();
        assert!(tv.h1.max_abs() < 1e-14);
        assert!(tv.h2.max_abs() < 1e-14);
    }

    #[test]
    fn constant_field_on_sphere() {
        let f = shapes::sphere::<f64>(1.0, 64, 33).unwrap();
        let g = FlagGeometry::new(&f).unwrap();
        let e3 = Vec3::new(0.0, 0.0, 1.0);
        let x = DeformationField::from_fn(&f, |_, _, _| e3);
        let tv = psi_project(&g, &x).unwrap();
        for r in 0..f.n_interior_rows() {
            // outward ν = F, so ⟨e₃, ν⟩ = cos v
            let expect = f.v(r + 1).cos();
            for i in 0..64 {
                assert!((tv.h2.at(i, r) - expect).abs() < 1e-5);
            }
        }
        for i in 0..64 {
            assert!((tv.h1[i] - e3.dot(&g.frame.normal[i])).abs() < 1e-15);
            assert!((tv.h1[i] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn mismatched_field_is_rejected() {
        let f = shapes::sphere::<f64>(1.0, 32, 17).unwrap();
        let g = FlagGeometry::new(&f).unwrap();
        let other = shapes::sphere::<f64>(1.0, 32, 19).unwrap();
        let x = DeformationField::zeros(&other);
        assert!(psi_project(&g, &x).is_err());
    }
}
