//! The `solve` configuration file (TOML).
//!
//! ```toml
//! equation = "heat"
//! variant = "invariant_explicit"
//! steps = 50
//! seed = 7                  # optional, overridden by INVPDELTA_SEED
//! boundary = "exact"        # exact | copy | linear_extrapolate (default copy)
//!
//! [mesh]
//! preset = "fundamental"    # orthogonal | fundamental | galilean
//! h = 0.05
//! x0 = 0.0
//! tau = 0.005
//! t0 = 10.0
//! c = 0.3                   # galilean only
//! n_min = -15
//! n_max = 14
//!
//! [initial]
//! name = "fundamental"      # a catalog entry of the equation, or "exp" (heat)
//! noise = 0.0               # relative seeded perturbation of the initial level
//!
//! [newton]                  # optional
//! tol = 1e-12
//! max_iter = 50
//! damping = true
//! ```

use std::sync::Arc;

use anyhow::{bail, Context, Result};
use invpdelta::solver::SolutionFn;
use invpdelta::{
    find_exact, make_scheme, BoundaryPolicy, Equation, InitialData, MeshFunctions, MeshPreset, NewtonOptions,
    SimConfig, Variant,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveConfig {
    pub equation: Equation,
    pub variant: Variant,
    pub steps: usize,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub boundary: BoundaryKind,
    pub mesh: MeshConfig,
    pub initial: InitialConfig,
    #[serde(default)]
    pub newton: NewtonOptions,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    Exact,
    #[default]
    Copy,
    LinearExtrapolate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetKind {
    Orthogonal,
    Fundamental,
    Galilean,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    pub preset: PresetKind,
    pub h: f64,
    #[serde(default)]
    pub x0: f64,
    pub tau: f64,
    #[serde(default)]
    pub t0: f64,
    pub c: Option<f64>,
    pub n_min: i64,
    pub n_max: i64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    pub name: String,
    #[serde(default)]
    pub noise: f64,
}

impl MeshConfig {
    pub fn preset(&self) -> Result<MeshPreset> {
        let (h, x0, tau, t0) = (self.h, self.x0, self.tau, self.t0);
        if !(h > 0.0 && tau > 0.0) {
            bail!("mesh.h and mesh.tau must be positive");
        }
        Ok(match (self.preset, self.c) {
            (PresetKind::Orthogonal, None) => MeshPreset::Orthogonal { h, x0, tau, t0 },
            (PresetKind::Fundamental, None) => MeshPreset::Fundamental { h, x0, tau, t0 },
            (PresetKind::Galilean, Some(c)) => MeshPreset::Galilean { h, x0, tau, t0, c },
            (PresetKind::Galilean, None) => bail!("the galilean preset needs mesh.c"),
            (_, Some(_)) => bail!("mesh.c only applies to the galilean preset"),
        })
    }
}

impl SolveConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: SolveConfig = toml::from_str(text).context("invalid solve configuration")?;
        if cfg.mesh.n_max <= cfg.mesh.n_min {
            bail!("mesh.n_max must exceed mesh.n_min");
        }
        if !(cfg.initial.noise >= 0.0 && cfg.initial.noise.is_finite()) {
            bail!("initial.noise must be a non-negative number");
        }
        Ok(cfg)
    }

    /// The named solution used for the initial level and exact boundaries.
    pub fn solution(&self) -> Result<SolutionFn> {
        if self.initial.name == "exp" {
            if self.equation != Equation::Heat {
                bail!("initial data `exp` is only defined for the heat equation");
            }
            return Ok(Arc::new(|x: f64, t: f64| (t + x).exp()));
        }
        Ok(find_exact(self.equation, &self.initial.name)?.u_fn())
    }

    /// Builds the simulation with the effective seed.
    pub fn build(&self, seed: u64) -> Result<SimConfig> {
        let scheme = make_scheme(self.equation, self.variant)?;
        let mesh = MeshFunctions::from_preset(self.mesh.preset()?);
        let exact = self.solution()?;
        let initial = if self.initial.noise > 0.0 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let values = (self.mesh.n_min..=self.mesh.n_max)
                .map(|n| {
                    let (x, t) = mesh.point(0, n)?;
                    Ok(exact(x, t) * (1.0 + self.initial.noise * rng.random_range(-1.0..1.0)))
                })
                .collect::<invpdelta::Result<Vec<f64>>>()?;
            InitialData::Tabulated(values)
        } else {
            InitialData::Eval(exact.clone())
        };
        let boundary = match self.boundary {
            BoundaryKind::Exact => BoundaryPolicy::Exact(exact),
            BoundaryKind::Copy => BoundaryPolicy::Copy,
            BoundaryKind::LinearExtrapolate => BoundaryPolicy::LinearExtrapolate,
        };
        Ok(
            SimConfig::new(scheme, mesh, self.mesh.n_min..=self.mesh.n_max, initial, self.steps)
                .with_boundary(boundary)
                .with_newton(self.newton),
        )
    }
}
