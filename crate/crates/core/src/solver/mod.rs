//! Time stepping of difference schemes over evolving lattices.
//!
//! Each step fills level `m + 1` from level `m`. Explicit schemes are solved
//! point by point; implicit schemes solve one nonlinear system per level by
//! damped Newton with a banded Jacobian. Solution-adapted schemes move the new
//! level's `x` with the solution; every other scheme takes `x` from the mesh
//! functions and checks that the lattice equations hold.

mod band;
mod newton;

use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{build_lattice, MeshFunctions, MovingLattice, Point, StencilView, UInit};
use crate::schemes::{make_scheme, LatticeRule, SchemeDef, SolveVar, Variant};

pub use band::{BandLu, BandMatrix};
pub use newton::NewtonOptions;

pub type SolutionFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Initial values on the first level.
#[derive(Clone)]
pub enum InitialData {
    Eval(SolutionFn),
    /// One value per column.
    Tabulated(Vec<f64>),
}

impl fmt::Debug for InitialData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialData::Eval(_) => f.write_str("Eval(..)"),
            InitialData::Tabulated(v) => write!(f, "Tabulated(len={})", v.len()),
        }
    }
}

/// How the columns too close to the edge for a full stencil are filled.
#[derive(Clone)]
pub enum BoundaryPolicy {
    /// Dirichlet values from a known solution `u(x, t)`.
    Exact(SolutionFn),
    /// Keep the previous level's value.
    Copy,
    /// Linear extrapolation in `x` from the two nearest interior columns.
    LinearExtrapolate,
}

impl BoundaryPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            BoundaryPolicy::Exact(_) => "exact",
            BoundaryPolicy::Copy => "copy",
            BoundaryPolicy::LinearExtrapolate => "linear_extrapolate",
        }
    }
}

impl fmt::Debug for BoundaryPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub scheme: SchemeDef,
    pub mesh: MeshFunctions,
    /// Index of the initial level.
    pub m0: i64,
    pub n_range: RangeInclusive<i64>,
    pub initial: InitialData,
    pub boundary: BoundaryPolicy,
    /// Number of levels computed after the initial one.
    pub steps: usize,
    pub newton: NewtonOptions,
}

impl SimConfig {
    /// Copy boundaries, default Newton options, initial level `m = 0`.
    pub fn new(
        scheme: SchemeDef,
        mesh: MeshFunctions,
        n_range: RangeInclusive<i64>,
        initial: InitialData,
        steps: usize,
    ) -> Self {
        Self {
            scheme,
            mesh,
            m0: 0,
            n_range,
            initial,
            boundary: BoundaryPolicy::Copy,
            steps,
            newton: NewtonOptions::default(),
        }
    }

    pub fn with_boundary(mut self, boundary: BoundaryPolicy) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_m0(mut self, m0: i64) -> Self {
        self.m0 = m0;
        self
    }

    pub fn with_newton(mut self, newton: NewtonOptions) -> Self {
        self.newton = newton;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.newton.validate()?;
        if self.steps == 0 {
            return Err(Error::Parse("steps must be at least 1".into()));
        }
        let reach = self.scheme.shape.reach() as usize;
        let cols = (self.n_range.end() - self.n_range.start() + 1).max(0) as usize;
        if cols < 2 * reach + 3 {
            return Err(Error::Parse(format!(
                "{} needs at least {} columns, got {cols}",
                self.scheme.name(),
                2 * reach + 3
            )));
        }
        if let InitialData::Tabulated(v) = &self.initial {
            if v.len() != cols {
                return Err(Error::Parse(format!("{} initial values for {cols} columns", v.len())));
            }
        }
        Ok(())
    }
}

/// Per-level solver diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelDiagnostics {
    /// The level that was computed.
    pub m: i64,
    /// `max |E1| / scale` over the interior stencils of the step.
    pub max_residual: f64,
    /// Zero for explicit schemes.
    pub newton_iters: usize,
    /// `max |σ/τ|` over the columns of the step.
    pub sigma_tau_max: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub scheme: String,
    pub lattice: MovingLattice,
    pub levels: Vec<LevelDiagnostics>,
}

impl Trajectory {
    pub fn max_residual(&self) -> f64 {
        self.levels.iter().fold(0.0, |a, l| a.max(l.max_residual))
    }

    pub fn newton_iterations(&self) -> usize {
        self.levels.iter().map(|l| l.newton_iters).sum()
    }

    /// Largest pointwise `|u - exact(x, t)|` over the lattice.
    pub fn max_error(&self, exact: impl Fn(f64, f64) -> f64) -> f64 {
        self.lattice
            .points()
            .fold(0.0, |a, (_, _, p)| a.max((p.u - exact(p.x, p.t)).abs()))
    }
}

/// `max |σ/τ|` over every pair of consecutive levels.
pub fn monitor_sigma_tau(traj: &Trajectory) -> f64 {
    let lat = &traj.lattice;
    let mut worst = 0.0_f64;
    for m in lat.m_range().take(lat.rows().saturating_sub(1)) {
        for n in lat.n_range() {
            let (a, b) = (lat.point(m, n), lat.point(m + 1, n));
            worst = worst.max(((b.x - a.x) / (b.t - a.t)).abs());
        }
    }
    worst
}

/// Runs `cfg.steps` levels from the initial data.
pub fn run(cfg: &SimConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let full = cfg.scheme;
    // the uniform wave demo marches with the two-level E1; E4 and E5 only
    // constrain the mesh, which is checked below
    let scheme = if full.variant == Variant::WaveDemoUniform {
        make_scheme(full.equation, Variant::WaveDemo)?
    } else {
        full
    };
    let last = cfg.m0 + cfg.steps as i64;
    let mut lat = build_lattice(
        full.equation,
        &cfg.mesh,
        cfg.m0..=last,
        cfg.n_range.clone(),
        UInit::Unset,
    )?;
    if full.lattice_rule == LatticeRule::Mesh {
        check_mesh(&full, &lat)?;
    }
    let first: Vec<f64> = match &cfg.initial {
        InitialData::Eval(f) => {
            let (xs, ts) = (lat.row_x(cfg.m0).to_vec(), lat.row_t(cfg.m0).to_vec());
            xs.iter().zip(&ts).map(|(&x, &t)| f(x, t)).collect()
        }
        InitialData::Tabulated(v) => v.clone(),
    };
    if first.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("initial data is not finite"));
    }
    lat.row_u_mut(cfg.m0).copy_from_slice(&first);

    let mut levels = Vec::with_capacity(cfg.steps);
    for m in cfg.m0..last {
        let diag = step(&scheme, cfg, &mut lat, m)?;
        log::debug!(
            "{} level {}: residual {:e}, {} Newton iterations",
            scheme.name(),
            diag.m,
            diag.max_residual,
            diag.newton_iters
        );
        levels.push(diag);
    }
    Ok(Trajectory {
        scheme: full.name(),
        lattice: lat,
        levels,
    })
}

/// Checks `E2` and the `u`-independent lattice equations on every stencil.
fn check_mesh(scheme: &SchemeDef, lat: &MovingLattice) -> Result<()> {
    for m in lat.m_range() {
        for n in lat.n_range() {
            let s = match lat.stencil_at(m, n, scheme.shape) {
                Ok(s) => s,
                Err(Error::Boundary { .. }) => continue,
                Err(e) => return Err(e),
            };
            let p = s.p(0, 0);
            let tol = 1e-9 * (1.0 + p.x.abs() + p.t.abs());
            for a in 2..=scheme.components() {
                let e = scheme.component(a, &s)?;
                if e.abs() > tol {
                    return Err(Error::mesh(format!(
                        "the mesh violates E{a} of {} at (m={m}, n={n}): {e:e}",
                        scheme.name()
                    )));
                }
            }
        }
    }
    Ok(())
}

/// The data of one step from level `m` to `m + 1`.
struct Level<'a> {
    scheme: &'a SchemeDef,
    boundary: &'a BoundaryPolicy,
    old: Vec<Point>,
    /// Mesh `x` of the new level (ignored by implicit adapted schemes).
    mesh_x: Vec<f64>,
    t_hat: f64,
    tau: f64,
    reach: usize,
}

impl Level<'_> {
    fn cols(&self) -> usize {
        self.old.len()
    }

    fn interior(&self) -> std::ops::Range<usize> {
        self.reach..self.cols() - self.reach
    }

    fn is_boundary(&self, j: usize) -> bool {
        !self.interior().contains(&j)
    }

    /// `x` of the new level given its `u` values.
    fn new_x(&self, u_new: &[f64]) -> Vec<f64> {
        match self.scheme.lattice_rule {
            LatticeRule::Adapted { speed, level: 1 } => self
                .old
                .iter()
                .zip(u_new)
                .map(|(p, &u)| p.x + speed * self.tau * u)
                .collect(),
            _ => self.mesh_x.clone(),
        }
    }

    fn stencil(&self, j: usize, x_new: &[f64], u_new: &[f64]) -> Result<StencilView> {
        let shape = self.scheme.shape;
        let points = shape
            .slots()
            .into_iter()
            .map(|(l, o)| {
                let k = (j as i64 + o) as usize;
                if l == 0 {
                    self.old[k]
                } else {
                    Point::new(x_new[k], self.t_hat, u_new[k])
                }
            })
            .collect();
        StencilView::from_points(shape, points)
    }

    /// Target value at boundary column `b` given the new level so far.
    fn boundary_value(&self, b: usize, x_new: &[f64], u_new: &[f64]) -> f64 {
        match self.boundary {
            BoundaryPolicy::Exact(f) => f(x_new[b], self.t_hat),
            BoundaryPolicy::Copy => self.old[b].u,
            BoundaryPolicy::LinearExtrapolate => {
                let (i1, i2) = if b < self.reach {
                    (self.reach, self.reach + 1)
                } else {
                    (self.cols() - 1 - self.reach, self.cols() - 2 - self.reach)
                };
                let slope = (u_new[i1] - u_new[i2]) / (x_new[i1] - x_new[i2]);
                u_new[i1] + slope * (x_new[b] - x_new[i1])
            }
        }
    }

    fn scale(&self, u: &[f64]) -> f64 {
        let sv = self.scheme.solve_var;
        let y = self
            .old
            .iter()
            .map(|p| p.u)
            .chain(u.iter().copied())
            .fold(0.0_f64, |a, v| a.max(sv.forward(v).abs()));
        (y / self.tau).max(1.0)
    }

    /// Newton residual in the solve variable: `E1` on interior columns,
    /// `(y - target)/τ` on boundary columns.
    fn residuals(&self, y: &[f64]) -> Result<Vec<f64>> {
        let sv = self.scheme.solve_var;
        let u: Vec<f64> = y.iter().map(|&v| sv.inverse(v)).collect::<Result<_>>()?;
        let x = self.new_x(&u);
        (0..self.cols())
            .map(|j| {
                if self.is_boundary(j) {
                    Ok((y[j] - sv.forward(self.boundary_value(j, &x, &u))) / self.tau)
                } else {
                    self.scheme.e1(&self.stencil(j, &x, &u)?)
                }
            })
            .collect()
    }

    fn max_scaled_residual(&self, x_new: &[f64], u_new: &[f64]) -> Result<f64> {
        let mut worst = 0.0_f64;
        for j in self.interior() {
            let s = self.stencil(j, x_new, u_new)?;
            worst = worst.max(self.scheme.e1(&s)?.abs() / self.scheme.scale(&s));
        }
        Ok(worst)
    }
}

fn check_order(x_new: &[f64], m: i64, lat: &MovingLattice) -> Result<()> {
    match x_new
        .windows(2)
        .position(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
    {
        Some(k) => Err(Error::mesh(format!(
            "mesh tangling on level m={m} near n={}",
            lat.n_range().start() + k as i64
        ))),
        None => Ok(()),
    }
}

fn step(scheme: &SchemeDef, cfg: &SimConfig, lat: &mut MovingLattice, m: i64) -> Result<LevelDiagnostics> {
    let old: Vec<Point> = lat.n_range().map(|n| lat.point(m, n)).collect();
    let t_hat = lat.t(m + 1, *lat.n_range().start());
    let tau = t_hat - old[0].t;
    let mut mesh_x = lat.row_x(m + 1).to_vec();
    if let LatticeRule::Adapted { speed, level: 0 } = scheme.lattice_rule {
        mesh_x = old.iter().map(|p| p.x + speed * tau * p.u).collect();
    }
    let level = Level {
        scheme,
        boundary: &cfg.boundary,
        old,
        mesh_x,
        t_hat,
        tau,
        reach: scheme.shape.reach() as usize,
    };
    let guess: Vec<f64> = level.old.iter().map(|p| p.u).collect();

    let (u_new, newton_iters) = if scheme.variant.is_explicit() {
        let x_new = level.new_x(&guess);
        check_order(&x_new, m + 1, lat)?;
        let mut u_new = guess;
        for j in level.interior() {
            let s = level.stencil(j, &x_new, &u_new)?;
            u_new[j] = scheme.solve_explicit_update(&s).map_err(|e| match e {
                Error::SingularUpdate(r) => Error::SingularUpdate(format!("level {}: {r}", m + 1)),
                other => other,
            })?;
        }
        for b in (0..level.cols()).filter(|&b| level.is_boundary(b)) {
            u_new[b] = level.boundary_value(b, &x_new, &u_new);
        }
        (u_new, 0)
    } else {
        let sv = scheme.solve_var;
        let y0: Vec<f64> = guess.iter().map(|&u| sv.forward(u)).collect();
        let polynomial = !scheme.variant.is_adapted()
            && !(sv == SolveVar::ExpHalf && matches!(cfg.boundary, BoundaryPolicy::LinearExtrapolate));
        let residual = |y: &[f64]| level.residuals(y);
        let problem = newton::Problem {
            residual: &residual,
            bandwidth: level.reach + 1,
            // central differences are exact for residuals of degree <= 2
            rel_step: if polynomial { 1e-2 } else { 1e-7 },
            scale: level.scale(&guess),
            level: m + 1,
        };
        let out = newton::solve(&problem, y0, &cfg.newton)?;
        let u_new = out.y.iter().map(|&y| sv.inverse(y)).collect::<Result<Vec<_>>>()?;
        (u_new, out.iterations)
    };

    let x_new = level.new_x(&u_new);
    if u_new.iter().any(|v| !v.is_finite()) {
        return Err(Error::Solver {
            level: m + 1,
            reason: "non-finite solution values".into(),
        });
    }
    check_order(&x_new, m + 1, lat)?;
    let max_residual = level.max_scaled_residual(&x_new, &u_new)?;
    let sigma_tau_max = level
        .old
        .iter()
        .zip(&x_new)
        .fold(0.0_f64, |a, (p, &x)| a.max(((x - p.x) / tau).abs()));
    lat.row_x_mut(m + 1).copy_from_slice(&x_new);
    lat.row_u_mut(m + 1).copy_from_slice(&u_new);
    Ok(LevelDiagnostics {
        m: m + 1,
        max_residual,
        newton_iters,
        sigma_tau_max,
    })
}
