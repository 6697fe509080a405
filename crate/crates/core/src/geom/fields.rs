use std::ops::Index;

use crate::error::{check_len, Result};
use crate::linalg::Vec3;
use crate::scalar::Real;

use super::flag::ParameterizedFlag;

/// One value per interior grid node, row-major over interior rows.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField<T> {
    n_u: usize,
    n_rows: usize,
    values: Vec<T>,
}

impl<T: Real> ScalarField<T> {
    pub fn new(n_u: usize, n_rows: usize, values: Vec<T>) -> Result<Self> {
        check_len("scalar field", n_u * n_rows, values.len())?;
        Ok(Self { n_u, n_rows, values })
    }

    pub fn zeros_like(flag: &ParameterizedFlag<T>) -> Self {
        Self::constant(flag, T::zero())
    }

    pub fn constant(flag: &ParameterizedFlag<T>, c: T) -> Self {
        let n_rows = flag.n_interior_rows();
        Self {
            n_u: flag.n_u(),
            n_rows,
            values: vec![c; flag.n_u() * n_rows],
        }
    }

    /// Evaluates `f(u, v, F(u, v))` at every interior node.
    pub fn from_fn(flag: &ParameterizedFlag<T>, f: impl Fn(T, T, Vec3<T>) -> T) -> Self {
        let n_u = flag.n_u();
        let n_rows = flag.n_interior_rows();
        let mut values = Vec::with_capacity(n_u * n_rows);
        for j in 1..=n_rows {
            for i in 0..n_u {
                values.push(f(flag.u(i), flag.v(j), flag.point(i, j)));
            }
        }
        Self { n_u, n_rows, values }
    }

    #[inline]
    pub fn n_u(&self) -> usize {
        self.n_u
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// Value at column `i` of interior row `r` (grid row `r + 1`).
    #[inline]
    pub fn at(&self, i: usize, r: usize) -> T {
        self.values[r * self.n_u + i]
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.values[r * self.n_u..(r + 1) * self.n_u]
    }

    /// Restriction to the marked curve row.
    pub fn restrict_to_curve(&self, flag: &ParameterizedFlag<T>) -> CurveScalarField<T> {
        CurveScalarField::from_values(self.row(flag.equator_interior_row()).to_vec())
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            n_u: self.n_u,
            n_rows: self.n_rows,
            values: self.values.iter().map(|&x| f(x)).collect(),
        }
    }

    /// `self + s · other`.
    pub fn axpy(&self, s: T, other: &Self) -> Self {
        Self {
            n_u: self.n_u,
            n_rows: self.n_rows,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| a + s * b)
                .collect(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|x| x * s)
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl<T> Index<usize> for ScalarField<T> {
    type Output = T;
    fn index(&self, k: usize) -> &T {
        &self.values[k]
    }
}

/// One value per sample of the marked curve.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveScalarField<T> {
    values: Vec<T>,
}

impl<T: Real> CurveScalarField<T> {
    pub fn from_values(values: Vec<T>) -> Self {
        Self { values }
    }

    pub fn constant(n: usize, c: T) -> Self {
        Self { values: vec![c; n] }
    }

    /// Evaluates `f(u, f(u))` along the curve row.
    pub fn from_fn(flag: &ParameterizedFlag<T>, f: impl Fn(T, Vec3<T>) -> T) -> Self {
        let j = flag.equator_row();
        Self {
            values: (0..flag.n_u()).map(|i| f(flag.u(i), flag.point(i, j))).collect(),
        }
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            values: self.values.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn axpy(&self, s: T, other: &Self) -> Self {
        Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| a + s * b)
                .collect(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|x| x * s)
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }
}

impl<T> Index<usize> for CurveScalarField<T> {
    type Output = T;
    fn index(&self, k: usize) -> &T {
        &self.values[k]
    }
}
