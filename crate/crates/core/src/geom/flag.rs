use crate::error::{FlagError, Result};
use crate::linalg::Vec3;
use crate::scalar::Real;

use super::stencil::Stencils;

pub const MIN_N_U: usize = 8;
pub const MIN_N_V: usize = 5;

/// A sampled embedding `F(u, v)` of the sphere together with its marked curve.
///
/// Samples are stored row-major: row `j` holds the `n_u` points at colatitude
/// `v_j = π j / (n_v - 1)`, column `i` is longitude `u_i = 2π i / n_u`. Rows `0`
/// and `n_v - 1` are the poles; they are kept for export but never read by any
/// derivative stencil. The decorating curve is the row `equator_row`, traversed
/// in the direction of increasing `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterizedFlag<T> {
    n_u: usize,
    n_v: usize,
    equator_row: usize,
    points: Vec<Vec3<T>>,
}

impl<T: Real> ParameterizedFlag<T> {
    /// Validates dimensions and the immersion condition.
    pub fn new(points: Vec<Vec3<T>>, n_u: usize, n_v: usize, equator_row: usize) -> Result<Self> {
        let flag = Self::new_unchecked(points, n_u, n_v, equator_row)?;
        flag.check_immersion()?;
        Ok(flag)
    }

    /// Checks dimensions only; the immersion check is deferred to geometry evaluation.
    pub fn new_unchecked(points: Vec<Vec3<T>>, n_u: usize, n_v: usize, equator_row: usize) -> Result<Self> {
        if n_u < MIN_N_U || n_v < MIN_N_V {
            return Err(FlagError::BadDimensions(format!(
                "grid {n_u}x{n_v} is smaller than the minimum {MIN_N_U}x{MIN_N_V}"
            )));
        }
        if points.len() != n_u * n_v {
            return Err(FlagError::BadDimensions(format!(
                "expected {} samples for a {n_u}x{n_v} grid, got {}",
                n_u * n_v,
                points.len()
            )));
        }
        if equator_row == 0 || equator_row >= n_v - 1 {
            return Err(FlagError::BadDimensions(format!(
                "equator row {equator_row} must lie strictly between the poles (0, {})",
                n_v - 1
            )));
        }
        if let Some(k) = points.iter().position(|p| !p.is_finite()) {
            return Err(FlagError::DegenerateGrid {
                row: k / n_u,
                col: k % n_u,
                reason: "non-finite sample".into(),
            });
        }
        Ok(Self {
            n_u,
            n_v,
            equator_row,
            points,
        })
    }

    /// Samples `f(u, v)` on the grid.
    pub fn from_fn(n_u: usize, n_v: usize, equator_row: usize, f: impl Fn(T, T) -> Vec3<T>) -> Result<Self> {
        let mut points = Vec::with_capacity(n_u * n_v);
        for j in 0..n_v {
            for i in 0..n_u {
                points.push(f(u_coord(i, n_u), v_coord(j, n_v)));
            }
        }
        Self::new(points, n_u, n_v, equator_row)
    }

    #[inline]
    pub fn n_u(&self) -> usize {
        self.n_u
    }

    #[inline]
    pub fn n_v(&self) -> usize {
        self.n_v
    }

    #[inline]
    pub fn equator_row(&self) -> usize {
        self.equator_row
    }

    /// Number of interior (non-pole) rows.
    #[inline]
    pub fn n_interior_rows(&self) -> usize {
        self.n_v - 2
    }

    /// Index of the marked curve among the interior rows.
    #[inline]
    pub fn equator_interior_row(&self) -> usize {
        self.equator_row - 1
    }

    #[inline]
    pub fn points(&self) -> &[Vec3<T>] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Vec3<T>> {
        self.points
    }

    #[inline]
    pub fn point(&self, i: usize, j: usize) -> Vec3<T> {
        self.points[j * self.n_u + i]
    }

    pub fn row(&self, j: usize) -> &[Vec3<T>] {
        &self.points[j * self.n_u..(j + 1) * self.n_u]
    }

    /// Samples of the interior rows only, row-major.
    pub fn interior(&self) -> &[Vec3<T>] {
        &self.points[self.n_u..(self.n_v - 1) * self.n_u]
    }

    pub fn curve_points(&self) -> &[Vec3<T>] {
        self.row(self.equator_row)
    }

    #[inline]
    pub fn du(&self) -> T {
        T::TAU() / T::from_usize_exact(self.n_u)
    }

    #[inline]
    pub fn dv(&self) -> T {
        T::PI() / T::from_usize_exact(self.n_v - 1)
    }

    #[inline]
    pub fn u(&self, i: usize) -> T {
        u_coord(i, self.n_u)
    }

    #[inline]
    pub fn v(&self, j: usize) -> T {
        v_coord(j, self.n_v)
    }

    pub fn same_layout(&self, other: &Self) -> bool {
        self.n_u == other.n_u && self.n_v == other.n_v && self.equator_row == other.equator_row
    }

    /// Replaces the samples, keeping the layout.
    pub fn with_points(&self, points: Vec<Vec3<T>>) -> Result<Self> {
        Self::new(points, self.n_u, self.n_v, self.equator_row)
    }

    pub(crate) fn with_points_unchecked(&self, points: Vec<Vec3<T>>) -> Self {
        debug_assert_eq!(points.len(), self.points.len());
        Self {
            n_u: self.n_u,
            n_v: self.n_v,
            equator_row: self.equator_row,
            points,
        }
    }

    /// Applies `p ↦ f(p)` to every sample (rigid motions, scalings).
    pub fn map_points(&self, f: impl Fn(Vec3<T>) -> Vec3<T>) -> Result<Self> {
        self.with_points(self.points.iter().map(|&p| f(p)).collect())
    }

    pub(crate) fn stencils(&self) -> Stencils<T> {
        Stencils::new(self.n_u, self.n_v)
    }

    /// Median length of the grid edges between interior samples.
    pub fn median_edge_length(&self) -> T {
        let n = self.n_u;
        let mut edges: Vec<T> = Vec::with_capacity(2 * self.points.len());
        for j in 1..self.n_v - 1 {
            for i in 0..n {
                let p = self.point(i, j);
                edges.push((self.point((i + 1) % n, j) - p).norm());
                if j + 1 < self.n_v - 1 {
                    edges.push((self.point(i, j + 1) - p).norm());
                }
            }
        }
        let mid = edges.len() / 2;
        let (_, m, _) = edges.select_nth_unstable_by(mid, |a, b| a.partial_cmp(b).unwrap());
        *m
    }

    /// Threshold below which `det g` counts as degenerate: `1e-12 · h⁴`, `h` the median edge.
    pub fn immersion_threshold(&self) -> T {
        let h = self.median_edge_length();
        T::lit(1e-12) * h * h * h * h
    }

    /// Fails if two adjacent interior samples coincide or `det g ≤ ε_imm` somewhere.
    pub fn check_immersion(&self) -> Result<()> {
        let n = self.n_u;
        let h = self.median_edge_length();
        if !(h > T::zero()) {
            return Err(FlagError::DegenerateGrid {
                row: 1,
                col: 0,
                reason: "all interior samples coincide".into(),
            });
        }
        let min_edge = T::lit(1e-9) * h;
        for j in 1..self.n_v - 1 {
            for i in 0..n {
                let p = self.point(i, j);
                let coincide_u = (self.point((i + 1) % n, j) - p).norm() <= min_edge;
                let coincide_v = j + 1 < self.n_v - 1 && (self.point(i, j + 1) - p).norm() <= min_edge;
                if coincide_u || coincide_v {
                    return Err(FlagError::DegenerateGrid {
                        row: j,
                        col: i,
                        reason: "adjacent samples coincide".into(),
                    });
                }
            }
        }
        super::surface::first_fundamental_form_check(self, self.immersion_threshold())
    }
}

#[inline]
pub fn u_coord<T: Real>(i: usize, n_u: usize) -> T {
    T::TAU() * T::from_usize_exact(i) / T::from_usize_exact(n_u)
}

#[inline]
pub fn v_coord<T: Real>(j: usize, n_v: usize) -> T {
    T::PI() * T::from_usize_exact(j) / T::from_usize_exact(n_v - 1)
}

/// Validating constructor from a flat row-major grid.
pub fn build_flag<T: Real>(
    grid: Vec<Vec3<T>>,
    n_u: usize,
    n_v: usize,
    equator_row: usize,
) -> Result<ParameterizedFlag<T>> {
    ParameterizedFlag::new(grid, n_u, n_v, equator_row)
}
