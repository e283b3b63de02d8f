use crate::error::{Error, Result};

use super::MovingLattice;

/// A lattice point `(x, t, u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub t: f64,
    pub u: f64,
}

impl Point {
    pub const fn new(x: f64, t: f64, u: f64) -> Self {
        Self { x, t, u }
    }
}

/// Which lattice neighbours a stencil covers.
///
/// Slots are ordered level by level (lowest `m` first), and by increasing
/// `n` offset within a level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StencilShape {
    /// Levels `m, m+1`, offsets `n-1..=n+1`.
    SixPoint,
    /// Levels `m, m+1`, offsets `n-2..=n+2`.
    TenPoint,
    /// Levels `m-1, m, m+1`, offsets `n-1..=n+1`.
    NinePoint,
}

impl StencilShape {
    pub fn levels(self) -> &'static [i64] {
        match self {
            StencilShape::SixPoint | StencilShape::TenPoint => &[0, 1],
            StencilShape::NinePoint => &[-1, 0, 1],
        }
    }

    /// Largest `|n offset|`.
    pub fn reach(self) -> i64 {
        match self {
            StencilShape::TenPoint => 2,
            _ => 1,
        }
    }

    pub fn len(self) -> usize {
        self.levels().len() * (2 * self.reach() as usize + 1)
    }

    pub fn is_empty(self) -> bool {
        false
    }

    /// `(level, offset)` pairs in slot order.
    pub fn slots(self) -> Vec<(i64, i64)> {
        let r = self.reach();
        self.levels()
            .iter()
            .flat_map(|&l| (-r..=r).map(move |o| (l, o)))
            .collect()
    }

    pub fn slot(self, level: i64, offset: i64) -> Option<usize> {
        let r = self.reach();
        let li = self.levels().iter().position(|&l| l == level)?;
        (offset.abs() <= r).then(|| li * (2 * r as usize + 1) + (offset + r) as usize)
    }
}

/// Step sizes derived from the stencil coordinates.
///
/// A hat denotes level `m+1`; `hh_*` fields are the hatted steps. Fields that
/// need the `±2` neighbours are `None` on narrow stencils.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Steps {
    pub h_plus: f64,
    pub h_minus: f64,
    pub h_pp: Option<f64>,
    pub h_mm: Option<f64>,
    pub hh_plus: f64,
    pub hh_minus: f64,
    pub hh_pp: Option<f64>,
    pub hh_mm: Option<f64>,
    pub sigma: f64,
    pub sigma_plus: f64,
    pub tau: f64,
    pub t_plus: f64,
    pub t_minus: f64,
}

/// A local window of lattice points around a base point `(m, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StencilView {
    pub shape: StencilShape,
    pub base: (i64, i64),
    points: Vec<Point>,
    pub steps: Steps,
}

impl StencilView {
    pub fn from_points(shape: StencilShape, points: Vec<Point>) -> Result<Self> {
        if points.len() != shape.len() {
            return Err(Error::Parse(format!(
                "{shape:?} stencil needs {} points, got {}",
                shape.len(),
                points.len()
            )));
        }
        let steps = compute_steps(shape, &points);
        Ok(Self {
            shape,
            base: (0, 0),
            points,
            steps,
        })
    }

    pub(super) fn extract(lat: &MovingLattice, m: i64, n: i64, shape: StencilShape) -> Result<Self> {
        let r = shape.reach();
        let fits = shape
            .levels()
            .iter()
            .all(|&l| lat.contains(m + l, n - r) && lat.contains(m + l, n + r));
        if !fits {
            return Err(Error::Boundary { m, n });
        }
        let points = shape
            .slots()
            .into_iter()
            .map(|(l, o)| lat.point(m + l, n + o))
            .collect::<Vec<_>>();
        let mut view = Self::from_points(shape, points)?;
        view.base = (m, n);
        Ok(view)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn has(&self, level: i64, offset: i64) -> bool {
        self.shape.slot(level, offset).is_some()
    }

    /// Point at `(level, offset)`; panics if the slot is not in the stencil.
    pub fn p(&self, level: i64, offset: i64) -> Point {
        let i = self
            .shape
            .slot(level, offset)
            .unwrap_or_else(|| panic!("slot ({level}, {offset}) not in {:?}", self.shape));
        self.points[i]
    }

    pub fn u(&self, level: i64, offset: i64) -> f64 {
        self.p(level, offset).u
    }

    pub fn get(&self, coord: Coord) -> f64 {
        match coord {
            Coord::X(i) => self.points[i].x,
            Coord::T(i) => self.points[i].t,
            Coord::U(i) => self.points[i].u,
            Coord::Layer(level) => self.p(level, 0).t,
        }
    }

    pub fn set(&mut self, coord: Coord, value: f64) {
        match coord {
            Coord::X(i) => self.points[i].x = value,
            Coord::T(i) => self.points[i].t = value,
            Coord::U(i) => self.points[i].u = value,
            Coord::Layer(level) => {
                for (i, (l, _)) in self.shape.slots().into_iter().enumerate() {
                    if l == level {
                        self.points[i].t = value;
                    }
                }
            }
        }
        self.steps = compute_steps(self.shape, &self.points);
    }

    pub fn with(&self, coord: Coord, value: f64) -> Self {
        let mut s = self.clone();
        s.set(coord, value);
        s
    }

    /// Replaces every point, keeping the shape.
    pub fn map_points(&self, mut f: impl FnMut(Point) -> Result<Point>) -> Result<Self> {
        let points = self.points.iter().map(|&p| f(p)).collect::<Result<Vec<_>>>()?;
        let mut s = Self::from_points(self.shape, points)?;
        s.base = self.base;
        Ok(s)
    }

    /// Largest `|u|` over the stencil.
    pub fn max_abs_u(&self) -> f64 {
        self.points.iter().fold(0.0_f64, |a, p| a.max(p.u.abs()))
    }
}

fn compute_steps(shape: StencilShape, pts: &[Point]) -> Steps {
    let at = |l: i64, o: i64| shape.slot(l, o).map(|i| pts[i]);
    let p = |l, o| at(l, o).expect("stencil always has offsets -1..=1 on levels 0 and 1");
    let (b, hb) = (p(0, 0), p(1, 0));
    let diff = |a: Option<Point>, c: Option<Point>| Some(a?.x - c?.x);
    Steps {
        h_plus: p(0, 1).x - b.x,
        h_minus: b.x - p(0, -1).x,
        h_pp: diff(at(0, 2), at(0, 1)),
        h_mm: diff(at(0, -1), at(0, -2)),
        hh_plus: p(1, 1).x - hb.x,
        hh_minus: hb.x - p(1, -1).x,
        hh_pp: diff(at(1, 2), at(1, 1)),
        hh_mm: diff(at(1, -1), at(1, -2)),
        sigma: hb.x - b.x,
        sigma_plus: p(1, 1).x - p(0, 1).x,
        tau: hb.t - b.t,
        t_plus: p(0, 1).t - b.t,
        t_minus: b.t - p(0, -1).t,
    }
}

/// One real coordinate of a stencil.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coord {
    X(usize),
    T(usize),
    U(usize),
    /// The shared `t` of every point on a level (flat time layers).
    Layer(i64),
}

/// An ordered set of active stencil coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordSpace {
    pub shape: StencilShape,
    pub coords: Vec<Coord>,
}

impl CoordSpace {
    /// Every `x`, `t` and `u` of every point.
    pub fn full(shape: StencilShape) -> Self {
        let n = shape.len();
        let coords = (0..n).flat_map(|i| [Coord::X(i), Coord::T(i), Coord::U(i)]).collect();
        Self { shape, coords }
    }

    /// All `x`, one `t` per level, all `u`: 14 coordinates on the six-point
    /// stencil, 22 on the ten-point one.
    pub fn flat_layers(shape: StencilShape) -> Self {
        let n = shape.len();
        let coords = (0..n)
            .map(Coord::X)
            .chain(shape.levels().iter().map(|&l| Coord::Layer(l)))
            .chain((0..n).map(Coord::U))
            .collect();
        Self { shape, coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}
