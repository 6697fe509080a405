//! Finite-difference and interpolation weights on the longitude/colatitude grid.
//!
//! Derivatives are sixth order. In `u` the seven-point centered stencil wraps
//! around the periodic direction. In `v` only interior rows are ever read: rows
//! next to the poles use skewed windows built from interior samples, so the
//! degenerate pole rows never enter a stencil. Stencils act on differences from
//! the value at the evaluation node, so constants differentiate to exact zeros.

use crate::linalg::Linear;
use crate::scalar::Real;

/// Weights `c[k][j]` of the `k`-th derivative at `x0` from samples at `nodes[j]`.
///
/// Fornberg's recursion; with `max_order = 0` it yields Lagrange interpolation weights.
pub fn fornberg_weights(x0: f64, nodes: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; max_order + 1];
    if n == 0 {
        return c;
    }
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] *= c4 / c3;
        }
        c1 = c2;
    }
    c
}

/// Formal order of accuracy of every derivative stencil on grids large enough
/// to hold the full windows.
pub const ORDER: usize = 6;

/// A window of consecutive interior rows and the weights applied to them.
#[derive(Clone, Debug)]
pub(crate) struct RowStencil<T> {
    pub start: usize,
    pub weights: Vec<T>,
}

#[derive(Clone, Debug)]
pub(crate) struct Stencils<T> {
    pub n_u: usize,
    /// Number of interior rows (`n_v - 2`).
    pub n_rows: usize,
    u1: Vec<T>,
    u2: Vec<T>,
    half_u: usize,
    v1: Vec<RowStencil<T>>,
    v2: Vec<RowStencil<T>>,
}

fn scaled<T: Real>(w: &[f64], h: f64, order: i32) -> Vec<T> {
    let s = h.powi(order);
    w.iter().map(|&x| T::lit(x / s)).collect()
}

fn row_window(r: usize, n_rows: usize, width: usize) -> usize {
    let width = width.min(n_rows);
    let start = r as isize - (width / 2) as isize;
    start.clamp(0, (n_rows - width) as isize) as usize
}

impl<T: Real> Stencils<T> {
    pub fn new(n_u: usize, n_v: usize) -> Self {
        let du = std::f64::consts::TAU / n_u as f64;
        let dv = std::f64::consts::PI / (n_v - 1) as f64;
        let n_rows = n_v - 2;

        let half_u = (ORDER / 2).min((n_u - 1) / 2);
        let offsets: Vec<f64> = (-(half_u as isize)..=half_u as isize).map(|k| k as f64).collect();
        let cu = fornberg_weights(0.0, &offsets, 2);

        let mut v1 = Vec::with_capacity(n_rows);
        let mut v2 = Vec::with_capacity(n_rows);
        for r in 0..n_rows {
            let w1 = (ORDER + 1).min(n_rows);
            let s1 = row_window(r, n_rows, w1);
            let centered = r >= ORDER / 2 && r + ORDER / 2 < n_rows;
            let w2 = if centered {
                ORDER + 1
            } else {
                (ORDER + 2).min(n_rows)
            };
            let s2 = row_window(r, n_rows, w2);
            let nodes1: Vec<f64> = (s1..s1 + w1).map(|k| k as f64).collect();
            let nodes2: Vec<f64> = (s2..s2 + w2).map(|k| k as f64).collect();
            let c1 = fornberg_weights(r as f64, &nodes1, 1);
            let c2 = fornberg_weights(r as f64, &nodes2, 2);
            v1.push(RowStencil {
                start: s1,
                weights: scaled(&c1[1], dv, 1),
            });
            v2.push(RowStencil {
                start: s2,
                weights: scaled(&c2[2], dv, 2),
            });
        }

        Self {
            n_u,
            n_rows,
            u1: scaled(&cu[1], du, 1),
            u2: scaled(&cu[2], du, 2),
            half_u,
            v1,
            v2,
        }
    }

    #[inline]
    fn periodic<V: Linear<T>>(&self, row: &[V], i: usize, w: &[T]) -> V {
        let n = self.n_u;
        let centre = row[i];
        let mut acc = V::zero_value();
        for (k, &wk) in w.iter().enumerate() {
            let idx = (i + n + k - self.half_u) % n;
            acc = acc + (row[idx] - centre) * wk;
        }
        acc
    }

    /// First derivative along a periodic row of length `n_u`.
    #[inline]
    pub fn d_u<V: Linear<T>>(&self, row: &[V], i: usize) -> V {
        self.periodic(row, i, &self.u1)
    }

    #[inline]
    pub fn d_uu<V: Linear<T>>(&self, row: &[V], i: usize) -> V {
        self.periodic(row, i, &self.u2)
    }

    /// Applies `d_u` along every sample of a periodic row.
    pub fn d_u_row<V: Linear<T>>(&self, row: &[V]) -> Vec<V> {
        (0..row.len()).map(|i| self.d_u(row, i)).collect()
    }

    #[inline]
    fn along_v<V: Linear<T>>(&self, field: &[V], r: usize, i: usize, s: &RowStencil<T>) -> V {
        let centre = field[r * self.n_u + i];
        let mut acc = V::zero_value();
        for (k, &wk) in s.weights.iter().enumerate() {
            acc = acc + (field[(s.start + k) * self.n_u + i] - centre) * wk;
        }
        acc
    }

    /// First `v` derivative of an interior-row field (row-major, `n_rows × n_u`).
    #[inline]
    pub fn d_v<V: Linear<T>>(&self, field: &[V], r: usize, i: usize) -> V {
        self.along_v(field, r, i, &self.v1[r])
    }

    #[inline]
    pub fn d_vv<V: Linear<T>>(&self, field: &[V], r: usize, i: usize) -> V {
        self.along_v(field, r, i, &self.v2[r])
    }

    /// Both first partials of an interior field at every interior node.
    pub fn gradient<V: Linear<T>>(&self, field: &[V]) -> (Vec<V>, Vec<V>) {
        let n = self.n_u;
        let mut fu = Vec::with_capacity(field.len());
        let mut fv = Vec::with_capacity(field.len());
        for r in 0..self.n_rows {
            let row = &field[r * n..(r + 1) * n];
            for i in 0..n {
                fu.push(self.d_u(row, i));
                fv.push(self.d_v(field, r, i));
            }
        }
        (fu, fv)
    }
}

/// Interpolation weights for a cubic through the four nodes around `x`.
///
/// `x` is in index units on `0..n`. Positions within `1e-9` of a node snap to it
/// so that sampling at node positions reproduces the data exactly.
pub(crate) fn cubic_weights(x: f64, n: usize, periodic: bool) -> ([isize; 4], [f64; 4]) {
    let nearest = x.round();
    if (x - nearest).abs() < 1e-9 {
        let k = nearest as isize;
        return ([k, k, k, k], [1.0, 0.0, 0.0, 0.0]);
    }
    let base = x.floor() as isize;
    let mut first = base - 1;
    if !periodic {
        first = first.clamp(0, n as isize - 4);
    }
    let nodes: Vec<f64> = (0..4).map(|k| (first + k) as f64).collect();
    let w = fornberg_weights(x, &nodes, 0);
    (
        [first, first + 1, first + 2, first + 3],
        [w[0][0], w[0][1], w[0][2], w[0][3]],
    )
}
