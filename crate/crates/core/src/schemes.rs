//! Invariant, solution-adapted and standard difference schemes.
//!
//! Every scheme is a system `E1 = 0, E2 = 0, E3 = 0` on a stencil: `E1`
//! approximates the PDE, `E2 = T+` keeps time layers flat and `E3` fixes the
//! spatial lattice. The uniform wave demo adds `E4` and `E5`.
//!
//! Invariant `E1` residuals are a combination of elementary invariants
//! multiplied by a positive normalizing factor that gives `E1` the dimensions
//! of `u_t`. The factor is not itself invariant, which is harmless: it only
//! rescales the combination, so the zero set and weak invariance are kept.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::equation::Equation;
use crate::error::{Error, Result};
use crate::invariants::{burgers_invariants, heat_invariants, kdv_invariants, potential_invariants};
use crate::lattice::{Coord, MovingLattice, StencilShape, StencilView};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    InvariantExplicit,
    InvariantImplicit,
    /// Explicit scheme on a solution-dependent lattice.
    AdaptedExplicit,
    /// Implicit scheme on a solution-dependent lattice.
    AdaptedImplicit,
    StandardExplicit,
    StandardImplicit,
    WaveDemo,
    /// The wave demo with the lattice forced to be uniform in `x` and `t`.
    WaveDemoUniform,
}

impl Variant {
    pub const ALL: [Variant; 8] = [
        Variant::InvariantExplicit,
        Variant::InvariantImplicit,
        Variant::AdaptedExplicit,
        Variant::AdaptedImplicit,
        Variant::StandardExplicit,
        Variant::StandardImplicit,
        Variant::WaveDemo,
        Variant::WaveDemoUniform,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Variant::InvariantExplicit => "invariant_explicit",
            Variant::InvariantImplicit => "invariant_implicit",
            Variant::AdaptedExplicit => "adapted_explicit",
            Variant::AdaptedImplicit => "adapted_implicit",
            Variant::StandardExplicit => "standard_explicit",
            Variant::StandardImplicit => "standard_implicit",
            Variant::WaveDemo => "wave_demo",
            Variant::WaveDemoUniform => "wave_demo_uniform",
        }
    }

    /// The new level can be filled point by point. The wave demo couples
    /// neighbouring new values and is solved as a (linear) system.
    pub fn is_explicit(self) -> bool {
        matches!(
            self,
            Variant::InvariantExplicit | Variant::AdaptedExplicit | Variant::StandardExplicit
        )
    }

    pub fn is_adapted(self) -> bool {
        matches!(self, Variant::AdaptedExplicit | Variant::AdaptedImplicit)
    }

    pub fn is_standard(self) -> bool {
        matches!(self, Variant::StandardExplicit | Variant::StandardImplicit)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.tag() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "variant",
                name: s.to_string(),
            })
    }
}

/// The variable in which `E1` is affine in each `u` slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveVar {
    Identity,
    /// `y = exp(-w/2)`, the heat variable behind the potential form.
    ExpHalf,
}

impl SolveVar {
    pub fn forward(self, w: f64) -> f64 {
        match self {
            SolveVar::Identity => w,
            SolveVar::ExpHalf => (-0.5 * w).exp(),
        }
    }

    pub fn inverse(self, y: f64) -> Result<f64> {
        match self {
            SolveVar::Identity => Ok(y),
            SolveVar::ExpHalf if y > 0.0 => Ok(-2.0 * y.ln()),
            SolveVar::ExpHalf => Err(Error::domain(format!("exp(-w/2) = {y} is not positive"))),
        }
    }
}

/// How the new level's `x` coordinates are determined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeRule {
    /// Taken from the mesh functions; `E3` is only checked.
    Mesh,
    /// `x̂ = x + speed * tau * u` with `u` read on `level` (0 or 1).
    Adapted { speed: f64, level: i64 },
}

type StencilFn = fn(&StencilView) -> Result<f64>;

/// A difference scheme: its residual functions plus what the solver and the
/// verification harness need to know about them.
#[derive(Debug, Clone, Copy)]
pub struct SchemeDef {
    pub equation: Equation,
    pub variant: Variant,
    pub shape: StencilShape,
    pub solve_var: SolveVar,
    pub lattice_rule: LatticeRule,
    /// A `u` slot in which `E1` is affine (in `solve_var`).
    pub projection_slot: (i64, i64),
    e1: StencilFn,
    e3: StencilFn,
}

/// Variants implemented for `equation`.
pub fn variants_for(equation: Equation) -> Vec<Variant> {
    Variant::ALL
        .into_iter()
        .filter(|&v| make_scheme(equation, v).is_ok())
        .collect()
}

pub fn make_scheme(equation: Equation, variant: Variant) -> Result<SchemeDef> {
    use Equation as Eq;
    use Variant as V;
    let six = StencilShape::SixPoint;
    let ten = StencilShape::TenPoint;
    let mesh = LatticeRule::Mesh;
    let hat = (1, 0);
    let (shape, solve_var, rule, slot, e1, e3): (_, _, _, _, StencilFn, StencilFn) = match (equation, variant) {
        (Eq::Heat, V::InvariantExplicit) => (six, SolveVar::Identity, mesh, hat, heat::explicit, uniform_old),
        (Eq::Heat, V::InvariantImplicit) => (six, SolveVar::Identity, mesh, hat, heat::implicit, uniform_new),
        (Eq::Heat, V::StandardExplicit) => (six, SolveVar::Identity, mesh, hat, heat::standard_explicit, sigma),
        (Eq::Heat, V::StandardImplicit) => (six, SolveVar::Identity, mesh, hat, heat::standard_implicit, sigma),

        (Eq::PotentialBurgers, V::InvariantExplicit) => {
            (six, SolveVar::ExpHalf, mesh, hat, potential::explicit, uniform_old)
        }
        (Eq::PotentialBurgers, V::InvariantImplicit) => {
            (six, SolveVar::ExpHalf, mesh, hat, potential::implicit, uniform_new)
        }
        (Eq::PotentialBurgers, V::StandardExplicit) => {
            (six, SolveVar::Identity, mesh, hat, potential::standard_explicit, sigma)
        }
        (Eq::PotentialBurgers, V::StandardImplicit) => (
            six,
            SolveVar::Identity,
            mesh,
            (1, -1),
            potential::standard_implicit,
            sigma,
        ),

        (Eq::Burgers, V::InvariantExplicit) => (six, SolveVar::Identity, mesh, hat, burgers::explicit, uniform_old),
        (Eq::Burgers, V::InvariantImplicit) => (six, SolveVar::Identity, mesh, (1, 1), burgers::implicit, uniform_new),
        (Eq::Burgers, V::AdaptedExplicit) => (
            six,
            SolveVar::Identity,
            LatticeRule::Adapted { speed: 1.0, level: 0 },
            hat,
            burgers::adapted_explicit,
            burgers::drift_old,
        ),
        (Eq::Burgers, V::AdaptedImplicit) => (
            six,
            SolveVar::Identity,
            LatticeRule::Adapted { speed: 1.0, level: 1 },
            hat,
            burgers::adapted_implicit,
            burgers::drift_new,
        ),
        (Eq::Burgers, V::StandardExplicit) => (six, SolveVar::Identity, mesh, hat, burgers::standard_explicit, sigma),
        (Eq::Burgers, V::StandardImplicit) => {
            (six, SolveVar::Identity, mesh, (1, 1), burgers::standard_implicit, sigma)
        }

        (Eq::Kdv, V::InvariantExplicit) => (ten, SolveVar::Identity, mesh, hat, kdv::explicit, uniform_old),
        (Eq::Kdv, V::InvariantImplicit) => (ten, SolveVar::Identity, mesh, (1, 2), kdv::implicit, uniform_new),
        (Eq::Kdv, V::AdaptedExplicit) => (
            ten,
            SolveVar::Identity,
            LatticeRule::Adapted { speed: -1.0, level: 0 },
            hat,
            kdv::adapted_explicit,
            kdv::drift_old,
        ),
        (Eq::Kdv, V::AdaptedImplicit) => (
            ten,
            SolveVar::Identity,
            LatticeRule::Adapted { speed: -1.0, level: 1 },
            hat,
            kdv::adapted_implicit,
            kdv::drift_new,
        ),
        (Eq::Kdv, V::StandardExplicit) => (ten, SolveVar::Identity, mesh, hat, kdv::standard_explicit, sigma),
        (Eq::Kdv, V::StandardImplicit) => (ten, SolveVar::Identity, mesh, (1, 2), kdv::standard_implicit, sigma),

        (Eq::WaveDemo, V::WaveDemo) => (six, SolveVar::Identity, mesh, hat, wave::e1, sigma),
        (Eq::WaveDemo, V::WaveDemoUniform) => (StencilShape::NinePoint, SolveVar::Identity, mesh, hat, wave::e1, sigma),
        _ => {
            return Err(Error::Unsupported(format!(
                "no {variant} scheme for the {equation} equation"
            )))
        }
    };
    Ok(SchemeDef {
        equation,
        variant,
        shape,
        solve_var,
        lattice_rule: rule,
        projection_slot: slot,
        e1,
        e3,
    })
}

/// Residual statistics of a scheme over every stencil that fits a lattice.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualStats {
    pub scheme: String,
    pub stencils: usize,
    /// `max |E_a|` for each residual component.
    pub max_abs: Vec<f64>,
    pub mean_abs: Vec<f64>,
    /// `max |E1| / scale` with the per-stencil scale of [`SchemeDef::scale`].
    pub max_scaled_e1: f64,
    /// Base point of the stencil attaining `max_scaled_e1`.
    pub worst: Option<(i64, i64)>,
}

impl SchemeDef {
    pub fn name(&self) -> String {
        format!("{}/{}", self.equation, self.variant)
    }

    /// Number of residual components (3, or 5 for the uniform wave demo).
    pub fn components(&self) -> usize {
        if self.variant == Variant::WaveDemoUniform {
            5
        } else {
            3
        }
    }

    fn check_shape(&self, s: &StencilView) -> Result<()> {
        if s.shape == self.shape {
            Ok(())
        } else {
            Err(Error::Unsupported(format!(
                "{} needs a {:?} stencil, got {:?}",
                self.name(),
                self.shape,
                s.shape
            )))
        }
    }

    pub fn e1(&self, s: &StencilView) -> Result<f64> {
        self.check_shape(s)?;
        (self.e1)(s)
    }

    pub fn e3(&self, s: &StencilView) -> Result<f64> {
        self.check_shape(s)?;
        (self.e3)(s)
    }

    /// `E_a` for `a` in `1..=components()`.
    pub fn component(&self, a: usize, s: &StencilView) -> Result<f64> {
        match a {
            1 => self.e1(s),
            2 => {
                self.check_shape(s)?;
                Ok(s.steps.t_plus)
            }
            3 => self.e3(s),
            4 if self.components() == 5 => {
                self.check_shape(s)?;
                Ok(s.p(1, 0).t - 2.0 * s.p(0, 0).t + s.p(-1, 0).t)
            }
            5 if self.components() == 5 => {
                self.check_shape(s)?;
                Ok(s.steps.h_plus - s.steps.h_minus)
            }
            _ => Err(Error::Unsupported(format!("{} has no residual E{a}", self.name()))),
        }
    }

    pub fn residual(&self, s: &StencilView) -> Result<Vec<f64>> {
        (1..=self.components()).map(|a| self.component(a, s)).collect()
    }

    /// Tolerance scale `max(1, |y|_inf / tau)` over the stencil, where `y` is
    /// the solve variable (`exp(-w/2)` for the invariant potential schemes).
    pub fn scale(&self, s: &StencilView) -> f64 {
        let y = s
            .points()
            .iter()
            .map(|p| self.solve_var.forward(p.u).abs())
            .fold(0.0_f64, f64::max);
        (y / s.steps.tau.abs()).max(1.0)
    }

    /// Solves `E1 = 0` for the `u` value of `slot`, other slots fixed.
    ///
    /// `E1` is affine in the solve variable of the slot, so one secant step
    /// gives the root; a second step with the same slope removes round-off.
    pub fn solve_slot(&self, s: &StencilView, slot: (i64, i64)) -> Result<f64> {
        self.check_shape(s)?;
        let index = self
            .shape
            .slot(slot.0, slot.1)
            .ok_or_else(|| Error::Unsupported(format!("slot {slot:?} is not in {:?}", self.shape)))?;
        let coord = Coord::U(index);
        let sv = self.solve_var;
        let mut y0 = sv.forward(s.get(coord));
        if !y0.is_finite() {
            y0 = sv.forward(s.u(0, 0));
        }
        let eval = |y: f64| -> Result<f64> { (self.e1)(&s.with(coord, sv.inverse(y)?)) };
        let dy = 1.0 + y0.abs();
        let y1 = if sv == SolveVar::ExpHalf && y0 - dy <= 0.0 {
            y0 + dy
        } else {
            y0 - dy
        };
        let (f0, f1) = (eval(y0)?, eval(y1)?);
        let slope = (f1 - f0) / (y1 - y0);
        if slope == 0.0 || !slope.is_finite() {
            return Err(Error::SingularUpdate(format!(
                "{}: E1 does not depend on slot {slot:?} at base {:?}",
                self.name(),
                s.base
            )));
        }
        let mut y = y0 - f0 / slope;
        let r = eval(y)?;
        y -= r / slope;
        sv.inverse(y)
    }

    /// The value of `û` that makes `E1` vanish on an explicit scheme.
    pub fn solve_explicit_update(&self, s: &StencilView) -> Result<f64> {
        if !self.variant.is_explicit() {
            return Err(Error::Unsupported(format!("{} is not explicit", self.name())));
        }
        self.solve_slot(s, (1, 0))
    }

    /// Residuals over every stencil of `lat` that fits.
    pub fn lattice_residuals(&self, lat: &MovingLattice) -> Result<ResidualStats> {
        if lat.equation != self.equation {
            return Err(Error::Unsupported(format!(
                "{} applied to a {} lattice",
                self.name(),
                lat.equation
            )));
        }
        let k = self.components();
        let mut max_abs = vec![0.0_f64; k];
        let mut sum = vec![0.0_f64; k];
        let mut stencils = 0;
        let mut max_scaled_e1 = 0.0_f64;
        let mut worst = None;
        for m in lat.m_range() {
            for n in lat.n_range() {
                let s = match lat.stencil_at(m, n, self.shape) {
                    Ok(s) => s,
                    Err(Error::Boundary { .. }) => continue,
                    Err(e) => return Err(e),
                };
                let r = self.residual(&s)?;
                for (a, v) in r.iter().enumerate() {
                    max_abs[a] = max_abs[a].max(v.abs());
                    sum[a] += v.abs();
                }
                let scaled = r[0].abs() / self.scale(&s);
                if scaled >= max_scaled_e1 {
                    max_scaled_e1 = scaled;
                    worst = Some((m, n));
                }
                stencils += 1;
            }
        }
        let mean_abs = sum.iter().map(|v| v / stencils.max(1) as f64).collect();
        Ok(ResidualStats {
            scheme: self.name(),
            stencils,
            max_abs,
            mean_abs,
            max_scaled_e1,
            worst,
        })
    }
}

/// `h+ = h-` on the lower level, as `I1 - 1`.
fn uniform_old(s: &StencilView) -> Result<f64> {
    Ok(s.steps.h_plus / s.steps.h_minus - 1.0)
}

/// `ĥ+ = ĥ-` on the upper level.
fn uniform_new(s: &StencilView) -> Result<f64> {
    Ok(s.steps.hh_plus / s.steps.hh_minus - 1.0)
}

/// The orthogonal lattice `σ = 0` of the standard schemes.
fn sigma(s: &StencilView) -> Result<f64> {
    Ok(s.steps.sigma)
}

mod heat {
    use super::*;

    pub(super) fn explicit(s: &StencilView) -> Result<f64> {
        let i = heat_invariants(s)?;
        let (i3, i4) = (i.get(3), i.get(4));
        let c = i3.powf(1.5) * i4 - i3 - (i.get(5) + i.get(6)) * (i3 / 4.0).exp() + 2.0;
        Ok(s.u(0, 0) / (s.steps.h_plus * s.steps.hh_plus) * c)
    }

    pub(super) fn implicit(s: &StencilView) -> Result<f64> {
        let i = heat_invariants(s)?;
        let (i3, i4) = (i.get(3), i.get(4));
        let c = i3 - i3.sqrt() / i4 - (i.get(7) + i.get(8)) * (-i3 / 4.0).exp() + 2.0;
        Ok(s.u(1, 0) / (s.steps.h_plus * s.steps.hh_plus) * c)
    }

    pub(super) fn standard_explicit(s: &StencilView) -> Result<f64> {
        let h = s.steps.h_plus;
        let u = |o| s.u(0, o);
        Ok((s.u(1, 0) - u(0)) / s.steps.tau - (u(1) - 2.0 * u(0) + u(-1)) / (h * h))
    }

    pub(super) fn standard_implicit(s: &StencilView) -> Result<f64> {
        let h = s.steps.hh_plus;
        let uh = |o| s.u(1, o);
        Ok((uh(0) - s.u(0, 0)) / s.steps.tau - (uh(1) - 2.0 * uh(0) + uh(-1)) / (h * h))
    }
}

mod potential {
    use super::*;

    pub(super) fn explicit(s: &StencilView) -> Result<f64> {
        let i = potential_invariants(s)?;
        let (i3, i4) = (i.get(3), i.get(4));
        let c = i3.powf(1.5) * i4 - i3 - (i.get(5) + i.get(6)) * (i3 / 4.0).exp() + 2.0;
        Ok((-0.5 * s.u(0, 0)).exp() / (s.steps.h_plus * s.steps.hh_plus) * c)
    }

    pub(super) fn implicit(s: &StencilView) -> Result<f64> {
        let i = potential_invariants(s)?;
        let (i3, i4) = (i.get(3), i.get(4));
        let c = i3 - i3.sqrt() / i4 - (i.get(7) + i.get(8)) * (-i3 / 4.0).exp() + 2.0;
        Ok((-0.5 * s.u(1, 0)).exp() / (s.steps.h_plus * s.steps.hh_plus) * c)
    }

    fn standard(s: &StencilView, level: i64, h: f64) -> f64 {
        let w = |o| s.u(level, o);
        let wx = (w(1) - w(0)) / h;
        (s.u(1, 0) - s.u(0, 0)) / s.steps.tau + 0.5 * wx * wx - (w(1) - 2.0 * w(0) + w(-1)) / (h * h)
    }

    pub(super) fn standard_explicit(s: &StencilView) -> Result<f64> {
        Ok(standard(s, 0, s.steps.h_plus))
    }

    pub(super) fn standard_implicit(s: &StencilView) -> Result<f64> {
        Ok(standard(s, 1, s.steps.hh_plus))
    }
}

mod burgers {
    use super::*;

    pub(super) fn explicit(s: &StencilView) -> Result<f64> {
        let i = burgers_invariants(s)?;
        let c = (2.0 * i.get(6) - i.get(7)) * i.get(3) - i.get(8) * i.get(6) - i.get(4);
        Ok(c / s.steps.h_plus.powi(3))
    }

    pub(super) fn implicit(s: &StencilView) -> Result<f64> {
        let i = burgers_invariants(s)?;
        let c = (i.get(6) - 2.0 * i.get(7)) * i.get(3) - i.get(9) * i.get(7) - i.get(5);
        Ok(c / s.steps.hh_plus.powi(3))
    }

    pub(super) fn adapted_explicit(s: &StencilView) -> Result<f64> {
        let i = burgers_invariants(s)?;
        let c = -i.get(7) * i.get(3) - i.get(4);
        Ok(c / (s.steps.h_plus * s.steps.hh_plus * s.steps.hh_plus))
    }

    pub(super) fn adapted_implicit(s: &StencilView) -> Result<f64> {
        let i = burgers_invariants(s)?;
        let c = i.get(6) * i.get(3) - i.get(5);
        Ok(c / (s.steps.h_plus * s.steps.h_plus * s.steps.hh_plus))
    }

    /// `I6 = h+ (σ/τ - v)`.
    pub(super) fn drift_old(s: &StencilView) -> Result<f64> {
        burgers_invariants(s).map(|i| i.get(6))
    }

    /// `I7 = ĥ+ (σ/τ - v̂)`.
    pub(super) fn drift_new(s: &StencilView) -> Result<f64> {
        burgers_invariants(s).map(|i| i.get(7))
    }

    fn standard(s: &StencilView, level: i64, hp: f64, hm: f64) -> f64 {
        let v = |o| s.u(level, o);
        let vxp = (v(1) - v(0)) / hp;
        let vxm = (v(0) - v(-1)) / hm;
        (s.u(1, 0) - s.u(0, 0)) / s.steps.tau + v(0) * vxp - (vxp - vxm) / hp
    }

    pub(super) fn standard_explicit(s: &StencilView) -> Result<f64> {
        Ok(standard(s, 0, s.steps.h_plus, s.steps.h_minus))
    }

    pub(super) fn standard_implicit(s: &StencilView) -> Result<f64> {
        Ok(standard(s, 1, s.steps.hh_plus, s.steps.hh_minus))
    }
}

mod kdv {
    use super::*;

    /// `h+^2 τ`, the factor turning `I14` into `(û - u)/τ`.
    fn norm(s: &StencilView) -> f64 {
        s.steps.h_plus * s.steps.h_plus * s.steps.tau
    }

    pub(super) fn explicit(s: &StencilView) -> Result<f64> {
        let i = kdv_invariants(s)?;
        let c = i.get(14)
            - i.get(9) * i.get(8) * (i.get(12) + i.get(11)) / 2.0
            - 0.5 * (i.get(13) - i.get(12) - i.get(11) + i.get(10));
        Ok(c / norm(s))
    }

    pub(super) fn implicit(s: &StencilView) -> Result<f64> {
        let i = kdv_invariants(s)?;
        let c = i.get(14)
            - (i.get(9) + i.get(14) / i.get(8)) * i.get(8) * (i.get(17) + i.get(16)) / 2.0
            - 0.5 * (i.get(18) - i.get(17) - i.get(16) + i.get(15)) * i.get(7).powi(2);
        Ok(c / norm(s))
    }

    pub(super) fn adapted_explicit(s: &StencilView) -> Result<f64> {
        let i = kdv_invariants(s)?;
        let c = i.get(14) - 0.5 * (i.get(13) - i.get(12) - i.get(11) + i.get(10));
        Ok(c / norm(s))
    }

    pub(super) fn adapted_implicit(s: &StencilView) -> Result<f64> {
        let i = kdv_invariants(s)?;
        let c = i.get(14) - 0.5 * (i.get(18) - i.get(17) - i.get(16) + i.get(15)) * i.get(7).powi(2);
        Ok(c / norm(s))
    }

    /// `I9 = (σ + τu)/h+`.
    pub(super) fn drift_old(s: &StencilView) -> Result<f64> {
        kdv_invariants(s).map(|i| i.get(9))
    }

    /// `I9 + I14/I8 = (σ + τû)/h+`.
    pub(super) fn drift_new(s: &StencilView) -> Result<f64> {
        kdv_invariants(s).map(|i| i.get(9) + i.get(14) / i.get(8))
    }

    fn standard(s: &StencilView, level: i64, h: f64) -> f64 {
        let u = |o| s.u(level, o);
        (s.u(1, 0) - s.u(0, 0)) / s.steps.tau
            - u(0) * (u(1) - u(-1)) / (2.0 * h)
            - (u(2) - 2.0 * u(1) + 2.0 * u(-1) - u(-2)) / (2.0 * h * h * h)
    }

    pub(super) fn standard_explicit(s: &StencilView) -> Result<f64> {
        Ok(standard(s, 0, s.steps.h_plus))
    }

    pub(super) fn standard_implicit(s: &StencilView) -> Result<f64> {
        Ok(standard(s, 1, s.steps.hh_plus))
    }
}

mod wave {
    use super::*;

    pub(super) fn e1(s: &StencilView) -> Result<f64> {
        let st = &s.steps;
        let upper = (s.u(1, 1) - s.u(1, 0)) / st.hh_plus;
        let lower = (s.u(0, 1) - s.u(0, 0)) / st.h_plus;
        Ok((upper - lower) / st.tau)
    }
}
