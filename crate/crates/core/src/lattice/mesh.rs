use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A real function of the time index `m`.
#[derive(Clone)]
pub enum MeshFn {
    Constant(f64),
    /// `slope * m + intercept`
    Affine {
        slope: f64,
        intercept: f64,
    },
    /// `values[m - start]`
    Tabulated {
        start: i64,
        values: Vec<f64>,
    },
    Eval(Arc<dyn Fn(i64) -> f64 + Send + Sync>),
}

impl MeshFn {
    pub fn eval(&self, m: i64) -> Result<f64> {
        match self {
            MeshFn::Constant(c) => Ok(*c),
            MeshFn::Affine { slope, intercept } => Ok(slope * m as f64 + intercept),
            MeshFn::Tabulated { start, values } => usize::try_from(m - start)
                .ok()
                .and_then(|i| values.get(i).copied())
                .ok_or_else(|| Error::mesh(format!("tabulated mesh function undefined at m={m}"))),
            MeshFn::Eval(f) => Ok(f(m)),
        }
    }

    pub fn eval_fn(f: impl Fn(i64) -> f64 + Send + Sync + 'static) -> Self {
        MeshFn::Eval(Arc::new(f))
    }
}

impl fmt::Debug for MeshFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeshFn::Constant(c) => write!(f, "Constant({c})"),
            MeshFn::Affine { slope, intercept } => write!(f, "Affine({slope}*m + {intercept})"),
            MeshFn::Tabulated { start, values } => {
                write!(f, "Tabulated(start={start}, len={})", values.len())
            }
            MeshFn::Eval(_) => f.write_str("Eval(..)"),
        }
    }
}

/// Named lattice families with closed-form mesh functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeshPreset {
    /// `t = tau*m + t0`, `x = h*n + x0`.
    Orthogonal { h: f64, x0: f64, tau: f64, t0: f64 },
    /// `t = tau*m + t0`, `x = (h*n + x0) * t`.
    Fundamental { h: f64, x0: f64, tau: f64, t0: f64 },
    /// `t = tau*m + t0`, `x = h*n + x0 + 2*c*t`.
    Galilean { h: f64, x0: f64, tau: f64, t0: f64, c: f64 },
}

impl MeshPreset {
    pub fn name(&self) -> &'static str {
        match self {
            MeshPreset::Orthogonal { .. } => "orthogonal",
            MeshPreset::Fundamental { .. } => "fundamental",
            MeshPreset::Galilean { .. } => "galilean",
        }
    }
}

/// The free functions `t = gamma(m)`, `x = hstep(m) * n + xorigin(m)` of a flat-layer lattice.
#[derive(Debug, Clone)]
pub struct MeshFunctions {
    pub gamma: MeshFn,
    pub hstep: MeshFn,
    pub xorigin: MeshFn,
    pub preset: Option<MeshPreset>,
}

impl MeshFunctions {
    pub fn new(gamma: MeshFn, hstep: MeshFn, xorigin: MeshFn) -> Self {
        Self {
            gamma,
            hstep,
            xorigin,
            preset: None,
        }
    }

    pub fn from_preset(preset: MeshPreset) -> Self {
        let mut mesh = match preset {
            MeshPreset::Orthogonal { h, x0, tau, t0 } => Self::new(
                MeshFn::Affine {
                    slope: tau,
                    intercept: t0,
                },
                MeshFn::Constant(h),
                MeshFn::Constant(x0),
            ),
            MeshPreset::Fundamental { h, x0, tau, t0 } => Self::new(
                MeshFn::Affine {
                    slope: tau,
                    intercept: t0,
                },
                MeshFn::Affine {
                    slope: h * tau,
                    intercept: h * t0,
                },
                MeshFn::Affine {
                    slope: x0 * tau,
                    intercept: x0 * t0,
                },
            ),
            MeshPreset::Galilean { h, x0, tau, t0, c } => Self::new(
                MeshFn::Affine {
                    slope: tau,
                    intercept: t0,
                },
                MeshFn::Constant(h),
                MeshFn::Affine {
                    slope: 2.0 * c * tau,
                    intercept: x0 + 2.0 * c * t0,
                },
            ),
        };
        mesh.preset = Some(preset);
        mesh
    }

    pub fn orthogonal(h: f64, x0: f64, tau: f64, t0: f64) -> Self {
        Self::from_preset(MeshPreset::Orthogonal { h, x0, tau, t0 })
    }

    pub fn fundamental(h: f64, x0: f64, tau: f64, t0: f64) -> Self {
        Self::from_preset(MeshPreset::Fundamental { h, x0, tau, t0 })
    }

    pub fn galilean(h: f64, x0: f64, tau: f64, t0: f64, c: f64) -> Self {
        Self::from_preset(MeshPreset::Galilean { h, x0, tau, t0, c })
    }

    /// Coordinates `(x, t)` of lattice point `(m, n)`.
    pub fn point(&self, m: i64, n: i64) -> Result<(f64, f64)> {
        let h = self.hstep.eval(m)?;
        Ok((h * n as f64 + self.xorigin.eval(m)?, self.gamma.eval(m)?))
    }

    /// Checks `gamma` strictly increasing and `hstep > 0` over `ms`.
    pub fn validate(&self, ms: std::ops::RangeInclusive<i64>) -> Result<()> {
        let mut prev: Option<f64> = None;
        for m in ms {
            let t = self.gamma.eval(m)?;
            let h = self.hstep.eval(m)?;
            if !t.is_finite() || !h.is_finite() || !self.xorigin.eval(m)?.is_finite() {
                return Err(Error::mesh(format!("non-finite mesh function value at m={m}")));
            }
            if h <= 0.0 {
                return Err(Error::mesh(format!("spatial step hstep({m}) = {h} is not positive")));
            }
            if let Some(p) = prev {
                if t <= p {
                    return Err(Error::mesh(format!(
                        "gamma is not strictly increasing at m={m}: {p} -> {t}"
                    )));
                }
            }
            prev = Some(t);
        }
        Ok(())
    }
}
