//! Damped Newton iteration with a banded finite-difference Jacobian.

use serde::{Deserialize, Serialize};

use super::band::BandMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NewtonOptions {
    /// Converged when `max |F| <= tol * scale`.
    pub tol: f64,
    pub max_iter: usize,
    /// Halve the step (up to 8 times) while the residual does not decrease.
    pub damping: bool,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 50,
            damping: true,
        }
    }
}

impl NewtonOptions {
    pub fn validate(&self) -> Result<()> {
        if self.tol > 0.0 && self.tol.is_finite() && self.max_iter > 0 {
            Ok(())
        } else {
            Err(Error::Parse(format!("invalid Newton options {self:?}")))
        }
    }
}

pub(crate) struct Problem<'a> {
    pub residual: &'a dyn Fn(&[f64]) -> Result<Vec<f64>>,
    /// Row `i` depends only on unknowns `i - bandwidth ..= i + bandwidth`.
    pub bandwidth: usize,
    /// Jacobian column `j` uses the step `rel_step * (1 + |y_j|)`.
    pub rel_step: f64,
    pub scale: f64,
    pub level: i64,
}

pub(crate) struct Outcome {
    pub y: Vec<f64>,
    pub iterations: usize,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |a, x| a.max(x.abs()))
}

fn fail(level: i64, reason: impl Into<String>) -> Error {
    Error::Solver {
        level,
        reason: reason.into(),
    }
}

/// Central differences, perturbing every `2 bw + 1`-th column at once.
fn jacobian(p: &Problem<'_>, y: &[f64]) -> Result<BandMatrix> {
    let n = y.len();
    let bw = p.bandwidth;
    let stride = 2 * bw + 1;
    let mut jac = BandMatrix::zeros(n, bw, bw);
    let steps: Vec<f64> = y.iter().map(|v| p.rel_step * (1.0 + v.abs())).collect();
    for color in 0..stride.min(n) {
        let mut plus = y.to_vec();
        let mut minus = y.to_vec();
        for j in (color..n).step_by(stride) {
            plus[j] += steps[j];
            minus[j] -= steps[j];
        }
        let fp = (p.residual)(&plus)?;
        let fm = (p.residual)(&minus)?;
        for j in (color..n).step_by(stride) {
            let h = plus[j] - minus[j];
            for i in j.saturating_sub(bw)..=(j + bw).min(n - 1) {
                jac.set(i, j, (fp[i] - fm[i]) / h);
            }
        }
    }
    Ok(jac)
}

pub(crate) fn solve(p: &Problem<'_>, y0: Vec<f64>, opts: &NewtonOptions) -> Result<Outcome> {
    let target = opts.tol * p.scale;
    let mut y = y0;
    let mut f = (p.residual)(&y)?;
    let mut r = norm(&f);
    let mut iterations = 0;
    while r > target {
        if iterations == opts.max_iter {
            return Err(fail(
                p.level,
                format!(
                    "Newton did not converge in {} iterations (residual {r:e})",
                    opts.max_iter
                ),
            ));
        }
        let lu = jacobian(p, &y)?
            .lu()
            .map_err(|e| fail(p.level, format!("Jacobian: {e}")))?;
        let rhs: Vec<f64> = f.iter().map(|v| -v).collect();
        let dy = lu.solve(&rhs);
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=8 {
            let trial: Vec<f64> = y.iter().zip(&dy).map(|(a, d)| a + lambda * d).collect();
            if let Ok(ft) = (p.residual)(&trial) {
                let rt = norm(&ft);
                if rt.is_finite() && (rt < r || !opts.damping) {
                    accepted = Some((trial, ft, rt));
                    break;
                }
            }
            if !opts.damping {
                break;
            }
            lambda *= 0.5;
        }
        iterations += 1;
        match accepted {
            Some((trial, ft, rt)) => {
                y = trial;
                f = ft;
                r = rt;
            }
            // no further decrease possible: accept if already at round-off level
            None if r <= 1e3 * target => break,
            None => {
                return Err(fail(
                    p.level,
                    format!("damped Newton step failed to reduce residual {r:e}"),
                ))
            }
        }
    }
    log::trace!("level {}: Newton converged in {iterations} iterations", p.level);
    Ok(Outcome { y, iterations })
}
