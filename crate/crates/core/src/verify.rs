//! Verification harness: on-manifold invariance suites, convergence-order
//! studies and group-orbit tests. Every report serializes to JSON and is a
//! deterministic function of its inputs and seed.

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::equation::Equation;
use crate::error::{Error, Result};
use crate::exact::ExactSolution;
use crate::lattice::{Coord, MeshFunctions, MeshPreset, Point, StencilView};
use crate::schemes::{LatticeRule, SchemeDef};
use crate::solver::{monitor_sigma_tau, run, BoundaryPolicy, InitialData, SimConfig, SolutionFn};
use crate::symmetry::{apply_group, invariance_defect, DefectMode, GroupElement, SampleBox, SymmetryAlgebra};

/// Pass threshold for on-manifold defects, relative to the stencil scale.
pub const INVARIANCE_TOL: f64 = 1e-7;
/// Pass threshold for residuals of transformed exact solutions.
pub const ORBIT_TOL: f64 = 1e-9;

/// Projected stencils must satisfy every residual component to this level.
const SHELL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorDefect {
    pub scheme: String,
    pub generator: String,
    /// `max |pr V[E1]| / scale` over the projected stencils.
    pub max_defect: f64,
    pub mean_defect: f64,
    /// `max |pr V[E_a]|` over the lattice equations `a >= 2`.
    pub max_lattice_defect: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub scheme: String,
    pub seed: u64,
    pub requested: usize,
    /// Samples projected onto the solution manifold and evaluated.
    pub used: usize,
    /// Samples whose projection failed.
    pub skipped: usize,
    pub tolerance: f64,
    pub generators: Vec<GeneratorDefect>,
    pub pass: bool,
}

impl InvarianceReport {
    pub fn failing(&self) -> Vec<&str> {
        self.generators
            .iter()
            .filter(|g| !g.pass)
            .map(|g| g.generator.as_str())
            .collect()
    }

    pub fn generator(&self, label: &str) -> Option<&GeneratorDefect> {
        self.generators.iter().find(|g| g.generator == label)
    }
}

/// Sampling ranges for a scheme; the box keeps `u` positive so the
/// logarithmic invariants are defined.
fn sample_box() -> SampleBox {
    SampleBox::default()
}

/// A stencil with flat layers, uniform steps on each level and random `u`.
/// Schemes whose lattice equation is `σ = 0` (standard schemes and the wave
/// demo) get vertical columns.
fn raw_stencil<R: Rng + ?Sized>(scheme: &SchemeDef, bx: &SampleBox, rng: &mut R) -> Result<StencilView> {
    let shape = scheme.shape;
    let t0 = rng.random_range(bx.t.clone());
    let x0 = rng.random_range(bx.x.clone());
    let tau = rng.random_range(bx.tau.clone());
    let pinned = scheme.variant.is_standard() || scheme.equation == Equation::WaveDemo;
    let mut rows = Vec::new();
    for &level in shape.levels() {
        let base = if level == 0 || pinned {
            x0
        } else {
            x0 + level as f64 * rng.random_range(bx.sigma.clone())
        };
        rows.push((level, base, rng.random_range(bx.step.clone())));
    }
    let points = shape
        .slots()
        .into_iter()
        .map(|(l, o)| {
            let &(_, base, h) = rows.iter().find(|r| r.0 == l).expect("level of shape");
            Point::new(base + o as f64 * h, t0 + l as f64 * tau, rng.random_range(bx.u.clone()))
        })
        .collect();
    StencilView::from_points(shape, points)
}

/// Moves the new level so that the adapted lattice equation holds.
fn place_adapted_level(scheme: &SchemeDef, s: &StencilView) -> Result<StencilView> {
    let LatticeRule::Adapted { speed, level } = scheme.lattice_rule else {
        return Ok(s.clone());
    };
    let tau = s.steps.tau;
    let target = s.p(0, 0).x + speed * tau * s.u(level, 0);
    let shift = target - s.p(1, 0).x;
    s.map_points(|p| {
        if p.t > s.p(0, 0).t {
            Ok(Point::new(p.x + shift, p.t, p.u))
        } else {
            Ok(p)
        }
    })
}

/// Solves `E1 = 0` in the projection slot, keeping the lattice equations
/// satisfied when they depend on that slot. Secant iteration in the solve
/// variable; for the affine cases it converges in one step.
fn project(scheme: &SchemeDef, raw: &StencilView) -> Result<StencilView> {
    let (l, o) = scheme.projection_slot;
    let idx = scheme
        .shape
        .slot(l, o)
        .ok_or_else(|| Error::Unsupported(format!("projection slot {:?}", scheme.projection_slot)))?;
    let coord = Coord::U(idx);
    let sv = scheme.solve_var;
    let at = |y: f64| -> Result<StencilView> { place_adapted_level(scheme, &raw.with(coord, sv.inverse(y)?)) };
    let f = |y: f64| -> Result<f64> { scheme.e1(&at(y)?) };

    let mut y0 = sv.forward(raw.get(coord));
    let mut y1 = y0 * (1.0 + 1e-3) + 1e-3;
    let (mut f0, mut f1) = (f(y0)?, f(y1)?);
    for _ in 0..40 {
        let s = at(y1)?;
        let scale = scheme.scale(&s);
        if f1.abs() <= SHELL_TOL * scale {
            let on_shell = (2..=scheme.components())
                .map(|a| scheme.component(a, &s))
                .collect::<Result<Vec<_>>>()?
                .iter()
                .all(|e| e.abs() <= SHELL_TOL * (1.0 + s.p(0, 0).x.abs()));
            return if on_shell {
                Ok(s)
            } else {
                Err(Error::numeric("lattice equations not satisfied after projection"))
            };
        }
        let slope = (f1 - f0) / (y1 - y0);
        if slope == 0.0 || !slope.is_finite() {
            return Err(Error::SingularUpdate("E1 is flat in the projection slot".into()));
        }
        let y2 = y1 - f1 / slope;
        y0 = y1;
        f0 = f1;
        y1 = y2;
        f1 = f(y1)?;
    }
    Err(Error::numeric("projection did not converge"))
}

/// On-manifold defect statistics of `scheme` under every generator of `algebra`.
///
/// Each sample is a random stencil on which the lattice equations hold by
/// construction and `E1 = 0` is solved for the projection slot. Samples whose
/// projection fails are skipped and counted.
pub fn invariance_suite(
    scheme: &SchemeDef,
    algebra: &SymmetryAlgebra,
    n_samples: usize,
    seed: u64,
) -> Result<InvarianceReport> {
    if algebra.equation != scheme.equation {
        return Err(Error::Unsupported(format!(
            "{} algebra for the {} scheme",
            algebra.equation,
            scheme.name()
        )));
    }
    let bx = sample_box();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stencils = Vec::with_capacity(n_samples);
    let mut skipped = 0;
    for _ in 0..n_samples {
        let raw = place_adapted_level(scheme, &raw_stencil(scheme, &bx, &mut rng)?)?;
        match project(scheme, &raw) {
            Ok(s) => stencils.push(s),
            Err(e) => {
                log::debug!("{}: sample skipped: {e}", scheme.name());
                skipped += 1;
            }
        }
    }

    let e1 = |s: &StencilView| scheme.e1(s);
    let mut generators = Vec::with_capacity(algebra.dim());
    for v in &algebra.basis {
        let (mut max_defect, mut sum, mut max_lattice) = (0.0_f64, 0.0, 0.0_f64);
        for s in &stencils {
            let scale = scheme.scale(s);
            let d = invariance_defect(v, &e1, s, DefectMode::OnManifold { tol: SHELL_TOL * scale })?;
            max_defect = max_defect.max(d.abs() / scale);
            sum += d.abs() / scale;
            for a in 2..=scheme.components() {
                let ea = |s: &StencilView| scheme.component(a, s);
                let tol = SHELL_TOL * (1.0 + s.p(0, 0).x.abs());
                max_lattice = max_lattice.max(invariance_defect(v, &ea, s, DefectMode::OnManifold { tol })?.abs());
            }
        }
        let used = stencils.len();
        generators.push(GeneratorDefect {
            scheme: scheme.name(),
            generator: v.label.clone(),
            max_defect,
            mean_defect: if used > 0 { sum / used as f64 } else { f64::NAN },
            max_lattice_defect: max_lattice,
            pass: used > 0 && max_defect <= INVARIANCE_TOL && max_lattice <= INVARIANCE_TOL,
        });
    }
    let pass = generators.iter().all(|g| g.pass);
    Ok(InvarianceReport {
        scheme: scheme.name(),
        seed,
        requested: n_samples,
        used: stencils.len(),
        skipped,
        tolerance: INVARIANCE_TOL,
        generators,
        pass,
    })
}

/// One mesh of a refinement sequence.
#[derive(Debug, Clone)]
pub struct Refinement {
    pub mesh: MeshFunctions,
    pub m0: i64,
    pub n_range: RangeInclusive<i64>,
    pub steps: usize,
}

impl Refinement {
    pub fn h(&self) -> Result<f64> {
        self.mesh.hstep.eval(self.m0)
    }

    pub fn tau(&self) -> Result<f64> {
        Ok(self.mesh.gamma.eval(self.m0 + 1)? - self.mesh.gamma.eval(self.m0)?)
    }
}

/// Orthogonal meshes covering `x_span` with `τ = ratio h^2`, marched from
/// `t0` to `t_end` (rounded to whole steps).
pub fn orthogonal_refinements(x_span: (f64, f64), t0: f64, t_end: f64, ratio: f64, hs: &[f64]) -> Vec<Refinement> {
    hs.iter()
        .map(|&h| {
            let tau = ratio * h * h;
            let cols = ((x_span.1 - x_span.0) / h).round() as i64;
            Refinement {
                mesh: MeshFunctions::orthogonal(h, x_span.0, tau, t0),
                m0: 0,
                n_range: 0..=cols,
                steps: ((t_end - t0) / tau).round() as usize,
            }
        })
        .collect()
}

/// Halves `h` and quarters `τ` of a preset `levels` times, keeping the
/// covered region of the `(x, t)` plane fixed.
pub fn preset_refinements(
    preset: MeshPreset,
    n_range: RangeInclusive<i64>,
    steps: usize,
    levels: usize,
) -> Vec<Refinement> {
    (0..levels)
        .map(|k| {
            let (a, b) = (1i64 << k, 1i64 << (2 * k));
            let (hf, tf) = (a as f64, b as f64);
            let p = match preset {
                MeshPreset::Orthogonal { h, x0, tau, t0 } => MeshPreset::Orthogonal {
                    h: h / hf,
                    x0,
                    tau: tau / tf,
                    t0,
                },
                MeshPreset::Fundamental { h, x0, tau, t0 } => MeshPreset::Fundamental {
                    h: h / hf,
                    x0,
                    tau: tau / tf,
                    t0,
                },
                MeshPreset::Galilean { h, x0, tau, t0, c } => MeshPreset::Galilean {
                    h: h / hf,
                    x0,
                    tau: tau / tf,
                    t0,
                    c,
                },
            };
            Refinement {
                mesh: MeshFunctions::from_preset(p),
                m0: 0,
                n_range: n_range.start() * a..=n_range.end() * a,
                steps: steps * b as usize,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceLevel {
    pub tau: f64,
    pub h: f64,
    /// Largest pointwise error over the whole run.
    pub err_max: f64,
    /// Discrete L2 error `sqrt(h Σ e_n^2)` on the final level.
    pub err_l2: f64,
    /// `log(err_max_prev / err_max) / log(h_prev / h)`; absent on the first level.
    pub order: Option<f64>,
    pub sigma_tau_max: f64,
    /// Tolerance scale `max(1, |u|_inf / τ)` of the run.
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub scheme: String,
    pub levels: Vec<ConvergenceLevel>,
    /// False when `max |σ/τ|` grows under refinement.
    pub sigma_tau_bounded: bool,
}

impl ConvergenceReport {
    /// Observed orders between successive levels.
    pub fn orders(&self) -> Vec<f64> {
        self.levels.iter().filter_map(|l| l.order).collect()
    }
}

/// Runs `scheme` on every refinement with Dirichlet data from `exact` and
/// measures the error against it.
pub fn convergence_study(
    scheme: &SchemeDef,
    exact: SolutionFn,
    refinements: &[Refinement],
) -> Result<ConvergenceReport> {
    let mut levels: Vec<ConvergenceLevel> = Vec::with_capacity(refinements.len());
    for r in refinements {
        let (h, tau) = (r.h()?, r.tau()?);
        if let Some(prev) = levels.last() {
            if !(tau < prev.tau && h < prev.h) {
                return Err(Error::Parse("refinements must strictly decrease in τ and h".into()));
            }
        }
        let cfg = SimConfig::new(
            *scheme,
            r.mesh.clone(),
            r.n_range.clone(),
            InitialData::Eval(exact.clone()),
            r.steps,
        )
        .with_m0(r.m0)
        .with_boundary(BoundaryPolicy::Exact(exact.clone()));
        let traj = run(&cfg)?;
        let err_max = traj.max_error(|x, t| exact(x, t));
        let lat = &traj.lattice;
        let last = *lat.m_range().end();
        let sq: f64 = lat
            .n_range()
            .map(|n| {
                let p = lat.point(last, n);
                (p.u - exact(p.x, p.t)).powi(2)
            })
            .sum();
        let order = levels.last().map(|p| (p.err_max / err_max).ln() / (p.h / h).ln());
        levels.push(ConvergenceLevel {
            tau,
            h,
            err_max,
            err_l2: (h * sq).sqrt(),
            order,
            sigma_tau_max: monitor_sigma_tau(&traj),
            scale: (lat.max_abs_u() / tau).max(1.0),
        });
    }
    let first = levels.first().map_or(0.0, |l| l.sigma_tau_max);
    let sigma_tau_bounded = levels.iter().all(|l| l.sigma_tau_max <= 2.0 * first + 1e-9);
    if !sigma_tau_bounded {
        log::warn!("{}: max |σ/τ| grows under refinement", scheme.name());
    }
    Ok(ConvergenceReport {
        scheme: scheme.name(),
        levels,
        sigma_tau_bounded,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitReport {
    pub scheme: String,
    pub solution: String,
    pub parameters: Vec<f64>,
    /// `max |E1| / scale` on the untransformed solution.
    pub base_residual: f64,
    /// `max |E1| / scale` after the transformation.
    pub max_residual: f64,
    /// `max |E_a|`, `a >= 2`, after the transformation.
    pub max_lattice_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Residuals of `scheme` on the image of `exact` (default window) under `g`.
pub fn orbit_test(scheme: &SchemeDef, exact: &ExactSolution, g: &GroupElement) -> Result<OrbitReport> {
    let lat = exact.window_lattice()?;
    let base = scheme.lattice_residuals(&lat)?;
    let moved = scheme.lattice_residuals(&apply_group(g, &lat)?)?;
    let max_lattice_residual = moved.max_abs.iter().skip(1).fold(0.0_f64, |a, &b| a.max(b));
    Ok(OrbitReport {
        scheme: scheme.name(),
        solution: exact.name.clone(),
        parameters: g.parameters.clone(),
        base_residual: base.max_scaled_e1,
        max_residual: moved.max_scaled_e1,
        max_lattice_residual,
        tolerance: ORBIT_TOL,
        pass: moved.max_scaled_e1 <= ORBIT_TOL && max_lattice_residual <= crate::exact::LATTICE_TOL,
    })
}
