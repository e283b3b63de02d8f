//! Point symmetry algebras of the supported equations, discrete prolongation,
//! numerical invariance checks and finite group actions.

mod group;
mod prolong;
mod sampling;

use std::fmt;
use std::sync::Arc;

use crate::equation::Equation;
use crate::error::{Error, Result};
use crate::lattice::Point;

pub use group::{
    apply_group, group_element, heat_sigma_tau_prediction, potential_map, sigma_tau_under_group, GroupElement,
    PotentialDirection,
};
pub use prolong::{
    defect_estimates, invariance_defect, invariant_count, invariant_count_on, numerical_rank, prolong, z_matrix,
    DefectEstimates, DefectMode, DefectOptions,
};
pub use sampling::{random_stencil, sample_stencils, SampleBox};

type Coeffs = Arc<dyn Fn(f64, f64, f64) -> [f64; 3] + Send + Sync>;
type Flow = Arc<dyn Fn(Point, f64) -> Result<Point> + Send + Sync>;

/// `xi(x,t,u) d/dx + eta(x,t,u) d/dt + phi(x,t,u) d/du`, optionally with its
/// one-parameter flow in closed form.
#[derive(Clone)]
pub struct VectorField {
    pub label: String,
    coeffs: Coeffs,
    flow: Option<Flow>,
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VectorField")
            .field("label", &self.label)
            .field("closed_form_flow", &self.flow.is_some())
            .finish()
    }
}

impl VectorField {
    pub fn new(label: impl Into<String>, coeffs: impl Fn(f64, f64, f64) -> [f64; 3] + Send + Sync + 'static) -> Self {
        Self {
            label: label.into(),
            coeffs: Arc::new(coeffs),
            flow: None,
        }
    }

    pub fn with_flow(mut self, flow: impl Fn(Point, f64) -> Result<Point> + Send + Sync + 'static) -> Self {
        self.flow = Some(Arc::new(flow));
        self
    }

    /// `[xi, eta, phi]` at `p`.
    pub fn eval(&self, p: Point) -> [f64; 3] {
        (self.coeffs)(p.x, p.t, p.u)
    }

    pub fn xi(&self, p: Point) -> f64 {
        self.eval(p)[0]
    }

    pub fn eta(&self, p: Point) -> f64 {
        self.eval(p)[1]
    }

    pub fn phi(&self, p: Point) -> f64 {
        self.eval(p)[2]
    }

    pub fn has_closed_form_flow(&self) -> bool {
        self.flow.is_some()
    }

    /// `exp(eps V) p`, closed form when available, else RK4 quadrature.
    pub fn flow(&self, p: Point, eps: f64) -> Result<Point> {
        match &self.flow {
            Some(f) => f(p, eps),
            None => self.integrate_flow(p, eps),
        }
    }

    /// Integrates the flow with classical RK4 from the coefficients alone.
    pub fn integrate_flow(&self, p: Point, eps: f64) -> Result<Point> {
        let steps = ((eps.abs() * 2000.0).ceil() as usize).max(4);
        let dt = eps / steps as f64;
        let f = |y: [f64; 3]| (self.coeffs)(y[0], y[1], y[2]);
        let mut y = [p.x, p.t, p.u];
        let axpy = |y: [f64; 3], a: f64, k: [f64; 3]| [y[0] + a * k[0], y[1] + a * k[1], y[2] + a * k[2]];
        for _ in 0..steps {
            let k1 = f(y);
            let k2 = f(axpy(y, dt / 2.0, k1));
            let k3 = f(axpy(y, dt / 2.0, k2));
            let k4 = f(axpy(y, dt, k3));
            for i in 0..3 {
                y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::numeric(format!("flow of {} blew up", self.label)));
        }
        Ok(Point::new(y[0], y[1], y[2]))
    }
}

/// A basis of the finite-dimensional symmetry algebra of an equation.
#[derive(Debug, Clone)]
pub struct SymmetryAlgebra {
    pub equation: Equation,
    pub basis: Vec<VectorField>,
}

impl SymmetryAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn positive_denominator(d: f64, what: &str) -> Result<f64> {
    if d > 0.0 && d.is_finite() {
        Ok(d)
    } else {
        Err(Error::domain(format!("{what}: denominator {d} is not positive")))
    }
}

fn translation_x() -> VectorField {
    VectorField::new("V1", |_, _, _| [1.0, 0.0, 0.0]).with_flow(|p, e| Ok(Point::new(p.x + e, p.t, p.u)))
}

fn translation_t() -> VectorField {
    VectorField::new("V2", |_, _, _| [0.0, 1.0, 0.0]).with_flow(|p, e| Ok(Point::new(p.x, p.t + e, p.u)))
}

/// `x d/dx + k t d/dt + w u d/du` with closed-form dilation flow.
fn dilation(label: &str, kt: f64, wu: f64) -> VectorField {
    VectorField::new(label, move |x, t, u| [x, kt * t, wu * u])
        .with_flow(move |p, e| Ok(Point::new(p.x * e.exp(), p.t * (kt * e).exp(), p.u * (wu * e).exp())))
}

fn heat_algebra() -> Vec<VectorField> {
    vec![
        translation_x(),
        translation_t(),
        VectorField::new("V3", |_, _, u| [0.0, 0.0, u]).with_flow(|p, e| Ok(Point::new(p.x, p.t, p.u * e.exp()))),
        dilation("V4", 2.0, 0.0),
        VectorField::new("V5", |x, t, u| [2.0 * t, 0.0, -x * u]).with_flow(|p, e| {
            Ok(Point::new(
                p.x + 2.0 * e * p.t,
                p.t,
                p.u * (-e * p.x - e * e * p.t).exp(),
            ))
        }),
        VectorField::new("V6", |x, t, u| [4.0 * t * x, 4.0 * t * t, -(x * x + 2.0 * t) * u]).with_flow(|p, e| {
            let d = positive_denominator(1.0 - 4.0 * e * p.t, "heat V6 flow")?;
            Ok(Point::new(
                p.x / d,
                p.t / d,
                p.u * d.sqrt() * (-e * p.x * p.x / d).exp(),
            ))
        }),
    ]
}

fn burgers_algebra() -> Vec<VectorField> {
    vec![
        translation_x(),
        translation_t(),
        VectorField::new("V3", |_, t, _| [t, 0.0, 1.0]).with_flow(|p, e| Ok(Point::new(p.x + e * p.t, p.t, p.u + e))),
        dilation("V4", 2.0, -1.0),
        VectorField::new("V5", |x, t, v| [t * x, t * t, x - t * v]).with_flow(|p, e| {
            let d = positive_denominator(1.0 - e * p.t, "Burgers V5 flow")?;
            Ok(Point::new(p.x / d, p.t / d, p.u * d + e * p.x))
        }),
    ]
}

fn potential_burgers_algebra() -> Vec<VectorField> {
    vec![
        translation_x(),
        translation_t(),
        VectorField::new("V3", |x, t, _| [t, 0.0, x])
            .with_flow(|p, e| Ok(Point::new(p.x + e * p.t, p.t, p.u + e * p.x + 0.5 * e * e * p.t))),
        dilation("V4", 2.0, 0.0),
        VectorField::new("V5", |x, t, _| [t * x, t * t, 0.5 * x * x + t]).with_flow(|p, e| {
            let d = positive_denominator(1.0 - e * p.t, "potential Burgers V5 flow")?;
            Ok(Point::new(p.x / d, p.t / d, p.u + e * p.x * p.x / (2.0 * d) - d.ln()))
        }),
        VectorField::new("V6", |_, _, _| [0.0, 0.0, 1.0]).with_flow(|p, e| Ok(Point::new(p.x, p.t, p.u + e))),
    ]
}

fn kdv_algebra() -> Vec<VectorField> {
    vec![
        translation_x(),
        translation_t(),
        VectorField::new("V3", |_, t, _| [t, 0.0, -1.0]).with_flow(|p, e| Ok(Point::new(p.x + e * p.t, p.t, p.u - e))),
        dilation("V4", 3.0, -2.0),
    ]
}

fn wave_demo_algebra() -> Vec<VectorField> {
    let mut b = vec![translation_x(), translation_t()];
    b.push(VectorField::new("V3", |x, _, _| [x, 0.0, 0.0]).with_flow(|p, e| Ok(Point::new(p.x * e.exp(), p.t, p.u))));
    b.push(VectorField::new("V4", |_, t, _| [0.0, t, 0.0]).with_flow(|p, e| Ok(Point::new(p.x, p.t * e.exp(), p.u))));
    b
}

/// The finite-dimensional symmetry algebra of `equation`, basis in the
/// conventional order `V1, V2, ...`.
///
/// The wave demo returns translations and independent dilations of `x` and `t`.
pub fn builtin_algebra(equation: Equation) -> SymmetryAlgebra {
    let basis = match equation {
        Equation::Heat => heat_algebra(),
        Equation::Burgers => burgers_algebra(),
        Equation::PotentialBurgers => potential_burgers_algebra(),
        Equation::Kdv => kdv_algebra(),
        Equation::WaveDemo => wave_demo_algebra(),
    };
    SymmetryAlgebra { equation, basis }
}

/// `alpha(x,t) d/du` for a solution `alpha` of the heat equation.
pub fn heat_superposition(label: &str, alpha: impl Fn(f64, f64) -> f64 + Send + Sync + Clone + 'static) -> VectorField {
    let a = alpha.clone();
    VectorField::new(label, move |x, t, _| [0.0, 0.0, alpha(x, t)])
        .with_flow(move |p, e| Ok(Point::new(p.x, p.t, p.u + e * a(p.x, p.t))))
}

/// `alpha(x,t) exp(w/2) d/dw`, the image of [`heat_superposition`] under `u = exp(-w/2)`.
pub fn potential_superposition(
    label: &str,
    alpha: impl Fn(f64, f64) -> f64 + Send + Sync + Clone + 'static,
) -> VectorField {
    let a = alpha.clone();
    VectorField::new(label, move |x, t, w| [0.0, 0.0, alpha(x, t) * (0.5 * w).exp()]).with_flow(move |p, e| {
        let z = (-0.5 * p.u).exp() - 0.5 * e * a(p.x, p.t);
        if z <= 0.0 {
            return Err(Error::domain("superposition flow leaves exp(-w/2) > 0"));
        }
        Ok(Point::new(p.x, p.t, -2.0 * z.ln()))
    })
}
