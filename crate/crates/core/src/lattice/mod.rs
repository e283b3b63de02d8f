//! Evolving lattices `(x_{m,n}, t_{m,n}, u_{m,n})`, their generating mesh
//! functions, and extraction of local stencils.

mod csv_io;
mod mesh;
mod stencil;

use std::ops::RangeInclusive;

use crate::equation::Equation;
use crate::error::{Error, Result};

pub use csv_io::fmt_f64;
pub use mesh::{MeshFn, MeshFunctions, MeshPreset};
pub use stencil::{Coord, CoordSpace, Point, StencilShape, StencilView, Steps};

/// How `u` is filled when a lattice is built.
pub enum UInit<'a> {
    Unset,
    Eval(&'a dyn Fn(f64, f64) -> f64),
    /// Row-major values over the whole window.
    Tabulated(&'a [f64]),
}

/// The full discrete field over a window of time levels `m` and columns `n`.
///
/// Unset `u` values are stored as NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct MovingLattice {
    pub equation: Equation,
    m_range: RangeInclusive<i64>,
    n_range: RangeInclusive<i64>,
    x: Vec<f64>,
    t: Vec<f64>,
    u: Vec<f64>,
}

/// Builds `t_{m,n} = gamma(m)`, `x_{m,n} = hstep(m) n + xorigin(m)`.
pub fn build_lattice(
    equation: Equation,
    mesh: &MeshFunctions,
    m_range: RangeInclusive<i64>,
    n_range: RangeInclusive<i64>,
    u_init: UInit<'_>,
) -> Result<MovingLattice> {
    if m_range.is_empty() || n_range.is_empty() {
        return Err(Error::mesh("empty index range"));
    }
    mesh.validate(m_range.clone())?;
    let rows = range_len(&m_range);
    let cols = range_len(&n_range);
    let mut x = Vec::with_capacity(rows * cols);
    let mut t = Vec::with_capacity(rows * cols);
    for m in m_range.clone() {
        let gamma = mesh.gamma.eval(m)?;
        let h = mesh.hstep.eval(m)?;
        let x0 = mesh.xorigin.eval(m)?;
        for n in n_range.clone() {
            x.push(h * n as f64 + x0);
            t.push(gamma);
        }
    }
    let u = match u_init {
        UInit::Unset => vec![f64::NAN; rows * cols],
        UInit::Eval(f) => x.iter().zip(&t).map(|(&x, &t)| f(x, t)).collect(),
        UInit::Tabulated(values) => {
            if values.len() != rows * cols {
                return Err(Error::mesh(format!(
                    "tabulated u has {} values, window has {}",
                    values.len(),
                    rows * cols
                )));
            }
            values.to_vec()
        }
    };
    let lat = MovingLattice {
        equation,
        m_range,
        n_range,
        x,
        t,
        u,
    };
    lat.check_monotone()?;
    Ok(lat)
}

/// True iff every row has bit-identical `t` values.
pub fn flat_time_layers(lat: &MovingLattice) -> bool {
    lat.m_range.clone().all(|m| {
        let row = lat.row_t(m);
        row.iter().all(|&t| t == row[0])
    })
}

fn range_len(r: &RangeInclusive<i64>) -> usize {
    (r.end() - r.start() + 1) as usize
}

impl MovingLattice {
    /// Assembles a lattice from row-major arrays; checks shape and mesh monotonicity.
    pub fn from_arrays(
        equation: Equation,
        m_range: RangeInclusive<i64>,
        n_range: RangeInclusive<i64>,
        x: Vec<f64>,
        t: Vec<f64>,
        u: Vec<f64>,
    ) -> Result<Self> {
        if m_range.is_empty() || n_range.is_empty() {
            return Err(Error::mesh("empty index range"));
        }
        let size = range_len(&m_range) * range_len(&n_range);
        if x.len() != size || t.len() != size || u.len() != size {
            return Err(Error::mesh("array lengths do not match the index window"));
        }
        let lat = Self {
            equation,
            m_range,
            n_range,
            x,
            t,
            u,
        };
        lat.check_monotone()?;
        Ok(lat)
    }

    pub fn m_range(&self) -> RangeInclusive<i64> {
        self.m_range.clone()
    }

    pub fn n_range(&self) -> RangeInclusive<i64> {
        self.n_range.clone()
    }

    pub fn rows(&self) -> usize {
        range_len(&self.m_range)
    }

    pub fn cols(&self) -> usize {
        range_len(&self.n_range)
    }

    pub fn contains(&self, m: i64, n: i64) -> bool {
        self.m_range.contains(&m) && self.n_range.contains(&n)
    }

    fn idx(&self, m: i64, n: i64) -> usize {
        debug_assert!(self.contains(m, n), "({m}, {n}) outside lattice");
        (m - self.m_range.start()) as usize * self.cols() + (n - self.n_range.start()) as usize
    }

    fn row_span(&self, m: i64) -> std::ops::Range<usize> {
        let start = self.idx(m, *self.n_range.start());
        start..start + self.cols()
    }

    pub fn x(&self, m: i64, n: i64) -> f64 {
        self.x[self.idx(m, n)]
    }

    pub fn t(&self, m: i64, n: i64) -> f64 {
        self.t[self.idx(m, n)]
    }

    pub fn u(&self, m: i64, n: i64) -> f64 {
        self.u[self.idx(m, n)]
    }

    pub fn point(&self, m: i64, n: i64) -> Point {
        let i = self.idx(m, n);
        Point::new(self.x[i], self.t[i], self.u[i])
    }

    pub fn set_u(&mut self, m: i64, n: i64, value: f64) {
        let i = self.idx(m, n);
        self.u[i] = value;
    }

    pub fn set_point(&mut self, m: i64, n: i64, p: Point) {
        let i = self.idx(m, n);
        self.x[i] = p.x;
        self.t[i] = p.t;
        self.u[i] = p.u;
    }

    pub fn row_x(&self, m: i64) -> &[f64] {
        &self.x[self.row_span(m)]
    }

    pub fn row_t(&self, m: i64) -> &[f64] {
        &self.t[self.row_span(m)]
    }

    pub fn row_u(&self, m: i64) -> &[f64] {
        &self.u[self.row_span(m)]
    }

    pub fn row_x_mut(&mut self, m: i64) -> &mut [f64] {
        let span = self.row_span(m);
        &mut self.x[span]
    }

    pub fn row_u_mut(&mut self, m: i64) -> &mut [f64] {
        let span = self.row_span(m);
        &mut self.u[span]
    }

    pub fn x_values(&self) -> &[f64] {
        &self.x
    }

    pub fn t_values(&self) -> &[f64] {
        &self.t
    }

    pub fn u_values(&self) -> &[f64] {
        &self.u
    }

    /// Iterates `(m, n, point)` in row-major order.
    pub fn points(&self) -> impl Iterator<Item = (i64, i64, Point)> + '_ {
        self.m_range
            .clone()
            .flat_map(move |m| self.n_range.clone().map(move |n| (m, n, self.point(m, n))))
    }

    /// Applies `f` to every point, producing a lattice with the same index window.
    pub fn map_points(&self, mut f: impl FnMut(Point) -> Result<Point>) -> Result<Self> {
        let mut out = self.clone();
        for i in 0..self.x.len() {
            let p = f(Point::new(self.x[i], self.t[i], self.u[i]))?;
            out.x[i] = p.x;
            out.t[i] = p.t;
            out.u[i] = p.u;
        }
        out.check_monotone()?;
        Ok(out)
    }

    /// Errors unless `x` is strictly increasing in `n` on every row.
    pub fn check_monotone(&self) -> Result<()> {
        for m in self.m_range.clone() {
            let row = self.row_x(m);
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::mesh(format!("non-finite x on row m={m}")));
            }
            if let Some(k) = row.windows(2).position(|w| w[1] <= w[0]) {
                return Err(Error::mesh(format!(
                    "mesh tangling on row m={m} between n={} and n={}",
                    self.n_range.start() + k as i64,
                    self.n_range.start() + k as i64 + 1
                )));
            }
        }
        Ok(())
    }

    /// Largest `|u|` over set values.
    pub fn max_abs_u(&self) -> f64 {
        self.u
            .iter()
            .filter(|v| !v.is_nan())
            .fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    pub fn stencil_at(&self, m: i64, n: i64, shape: StencilShape) -> Result<StencilView> {
        StencilView::extract(self, m, n, shape)
    }
}
