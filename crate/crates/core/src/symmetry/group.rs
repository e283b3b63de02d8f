use crate::equation::Equation;
use crate::error::{Error, Result};
use crate::lattice::{MovingLattice, Point, StencilView};

use super::{builtin_algebra, VectorField};

#[derive(Debug, Clone)]
enum Action {
    /// Translations, scaling, dilation, Galilei boost and projective map of
    /// the heat equation composed in that order, in closed form.
    HeatComposite([f64; 6]),
    /// `exp(e_k V_k) ... exp(e_1 V_1)`: the first pair is applied first.
    Flows(Vec<(VectorField, f64)>),
}

/// A finite symmetry transformation acting on points `(x, t, u)`.
#[derive(Debug, Clone)]
pub struct GroupElement {
    pub equation: Equation,
    pub parameters: Vec<f64>,
    action: Action,
}

/// One parameter per basis generator, applied in basis order (`V1` first).
///
/// For the heat equation the six-parameter composite is evaluated in closed
/// form; every other equation composes the one-parameter flows.
pub fn group_element(equation: Equation, params: &[f64]) -> Result<GroupElement> {
    let alg = builtin_algebra(equation);
    if params.len() != alg.dim() {
        return Err(Error::Parse(format!(
            "{equation} group needs {} parameters, got {}",
            alg.dim(),
            params.len()
        )));
    }
    let action = if equation == Equation::Heat {
        let mut e = [0.0; 6];
        e.copy_from_slice(params);
        Action::HeatComposite(e)
    } else {
        Action::Flows(alg.basis.into_iter().zip(params.iter().copied()).collect())
    };
    Ok(GroupElement {
        equation,
        parameters: params.to_vec(),
        action,
    })
}

impl GroupElement {
    pub fn identity(equation: Equation) -> Self {
        GroupElement {
            equation,
            parameters: vec![0.0; builtin_algebra(equation).dim()],
            action: Action::Flows(Vec::new()),
        }
    }

    /// `exp(eps V_k)` for the basis generator with zero-based index `k`.
    pub fn one_parameter(equation: Equation, k: usize, eps: f64) -> Result<Self> {
        let alg = builtin_algebra(equation);
        let v = alg.basis.get(k).cloned().ok_or_else(|| Error::Unknown {
            kind: "generator",
            name: format!("V{}", k + 1),
        })?;
        let mut parameters = vec![0.0; alg.dim()];
        parameters[k] = eps;
        Ok(GroupElement {
            equation,
            parameters,
            action: Action::Flows(vec![(v, eps)]),
        })
    }

    /// Flows of arbitrary fields, applied in the order given.
    pub fn from_flows(equation: Equation, flows: Vec<(VectorField, f64)>) -> Self {
        let parameters = flows.iter().map(|f| f.1).collect();
        GroupElement {
            equation,
            parameters,
            action: Action::Flows(flows),
        }
    }

    /// The composition `other ∘ self` (self first).
    pub fn then(&self, other: &GroupElement) -> GroupElement {
        let mut flows = self.as_flows();
        flows.extend(other.as_flows());
        GroupElement::from_flows(self.equation, flows)
    }

    fn as_flows(&self) -> Vec<(VectorField, f64)> {
        match &self.action {
            Action::Flows(f) => f.clone(),
            Action::HeatComposite(e) => {
                let b = builtin_algebra(Equation::Heat).basis;
                // translations and the central scaling commute; dilation, boost, projective in order
                [0, 1, 2, 3, 4, 5].into_iter().map(|k| (b[k].clone(), e[k])).collect()
            }
        }
    }

    pub fn inverse(&self) -> GroupElement {
        let flows = self.as_flows().into_iter().rev().map(|(v, e)| (v, -e)).collect();
        GroupElement::from_flows(self.equation, flows)
    }

    /// Maps a point and the solution value carried by it.
    pub fn apply_point(&self, p: Point) -> Result<Point> {
        let out = match &self.action {
            Action::HeatComposite(e) => heat_composite(e, p)?,
            Action::Flows(flows) => {
                let mut q = p;
                for (v, eps) in flows {
                    if *eps != 0.0 {
                        q = v.flow(q, *eps)?;
                    }
                }
                q
            }
        };
        if [out.x, out.t, out.u].iter().all(|v| v.is_finite()) {
            Ok(out)
        } else {
            Err(Error::domain(format!("group action is singular at {p:?}")))
        }
    }

    pub fn apply_stencil(&self, s: &StencilView) -> Result<StencilView> {
        s.map_points(|p| self.apply_point(p))
    }
}

fn heat_composite(e: &[f64; 6], p: Point) -> Result<Point> {
    let [e1, e2, e3, e4, e5, e6] = *e;
    let s = (2.0 * e4).exp() * (p.t + e2);
    let d = 1.0 - 4.0 * e6 * s;
    if d <= 0.0 {
        return Err(Error::domain(format!(
            "heat group denominator 1 - 4 e6 exp(2 e4)(t + e2) = {d} at t = {}",
            p.t
        )));
    }
    let x = (e4.exp() * (p.x + e1) + 2.0 * e5 * s) / d;
    let t = s / d;
    // 1 / (1 + 4 e6 t~) = d
    let u = p.u * d.sqrt() * (e3 - d * (e5 * x - e5 * e5 * t + e6 * x * x)).exp();
    Ok(Point::new(x, t, u))
}

/// Applies `g` to every lattice point; the result must still be untangled.
pub fn apply_group(g: &GroupElement, lat: &MovingLattice) -> Result<MovingLattice> {
    if g.equation != lat.equation {
        return Err(Error::Unsupported(format!(
            "{} group element applied to a {} lattice",
            g.equation, lat.equation
        )));
    }
    lat.map_points(|p| g.apply_point(p))
}

/// `sigma / tau` measured on the transformed stencil.
pub fn sigma_tau_under_group(g: &GroupElement, s: &StencilView) -> Result<f64> {
    let a = g.apply_point(s.p(0, 0))?;
    let b = g.apply_point(s.p(1, 0))?;
    Ok((b.x - a.x) / (b.t - a.t))
}

/// Closed-form transformed ratio for the heat composite with parameters `e`:
/// `(sigma/tau)(exp(-e4) - 4 e6 exp(e4)(t + e2)) + 2 e5 + 4 e6 exp(e4)(x + e1)`.
pub fn heat_sigma_tau_prediction(e: &[f64; 6], s: &StencilView) -> f64 {
    let b = s.p(0, 0);
    let ratio = s.steps.sigma / s.steps.tau;
    ratio * ((-e[3]).exp() - 4.0 * e[5] * e[3].exp() * (b.t + e[1]))
        + 2.0 * e[4]
        + 4.0 * e[5] * e[3].exp() * (b.x + e[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialDirection {
    /// `w = -2 ln u`
    HeatToPotential,
    /// `u = exp(-w/2)`
    PotentialToHeat,
}

/// Pointwise change of dependent variable; the lattice is unchanged.
pub fn potential_map(direction: PotentialDirection, lat: &MovingLattice) -> Result<MovingLattice> {
    let (from, to) = match direction {
        PotentialDirection::HeatToPotential => (Equation::Heat, Equation::PotentialBurgers),
        PotentialDirection::PotentialToHeat => (Equation::PotentialBurgers, Equation::Heat),
    };
    if lat.equation != from {
        return Err(Error::Unsupported(format!("{direction:?} needs a {from} lattice")));
    }
    let mut out = lat.map_points(|p| {
        let u = match direction {
            PotentialDirection::HeatToPotential if p.u > 0.0 => -2.0 * p.u.ln(),
            PotentialDirection::HeatToPotential => return Err(Error::domain(format!("u = {} is not positive", p.u))),
            PotentialDirection::PotentialToHeat => (-0.5 * p.u).exp(),
        };
        Ok(Point { u, ..p })
    })?;
    out.equation = to;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_lattice, MeshFn, MeshFunctions, StencilShape, UInit};
    use approx::assert_relative_eq;

    #[test]
    fn zero_parameters_are_identity() {
        let p = Point::new(0.3, 0.8, 1.7);
        for eq in Equation::ALL {
            let dim = builtin_algebra(eq).dim();
            let g = group_element(eq, &vec![0.0; dim]).unwrap();
            assert_eq!(g.apply_point(p).unwrap(), p);
        }
    }

    #[test]
    fn heat_time_translation() {
        let g = group_element(Equation::Heat, &[0.0, 0.7, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let q = g.apply_point(Point::new(0.3, 0.8, 1.7)).unwrap();
        assert_eq!((q.x, q.u), (0.3, 1.7));
        assert_relative_eq!(q.t, 1.5, max_relative = 1e-15);
    }

    #[test]
    fn heat_closed_form_matches_flow_composition() {
        let e = [0.1, 0.2, -0.1, 0.05, 0.1, 0.02];
        let closed = group_element(Equation::Heat, &e).unwrap();
        let b = builtin_algebra(Equation::Heat).basis;
        let flows = GroupElement::from_flows(Equation::Heat, (0..6).map(|k| (b[k].clone(), e[k])).collect());
        for p in [Point::new(0.3, 0.8, 1.7), Point::new(-1.2, 0.1, 0.4)] {
            let a = closed.apply_point(p).unwrap();
            let c = flows.apply_point(p).unwrap();
            assert_relative_eq!(a.x, c.x, max_relative = 1e-13);
            assert_relative_eq!(a.t, c.t, max_relative = 1e-13);
            assert_relative_eq!(a.u, c.u, max_relative = 1e-13);
            let back = closed.inverse().apply_point(a).unwrap();
            assert_relative_eq!(back.x, p.x, max_relative = 1e-12, epsilon = 1e-14);
            assert_relative_eq!(back.u, p.u, max_relative = 1e-12);
        }
    }

    #[test]
    fn singular_denominator_is_a_domain_error() {
        let g = group_element(Equation::Heat, &[0.0, 0.0, 0.0, 0.0, 0.0, 0.1]).unwrap();
        assert!(matches!(
            g.apply_point(Point::new(0.0, 2.5, 1.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn potential_round_trip() {
        let mesh = MeshFunctions::orthogonal(0.1, 0.0, 0.01, 0.0);
        let lat = build_lattice(
            Equation::PotentialBurgers,
            &mesh,
            0..=3,
            -5..=5,
            UInit::Eval(&|x, t| x * x - t),
        )
        .unwrap();
        let heat = potential_map(PotentialDirection::PotentialToHeat, &lat).unwrap();
        let back = potential_map(PotentialDirection::HeatToPotential, &heat).unwrap();
        for (a, b) in lat.u_values().iter().zip(back.u_values()) {
            assert!((a - b).abs() <= 1e-14 * (1.0 + a.abs()));
        }
        let zero = build_lattice(
            Equation::PotentialBurgers,
            &mesh,
            0..=1,
            0..=3,
            UInit::Eval(&|_, _| 0.0),
        )
        .unwrap();
        let ones = potential_map(PotentialDirection::PotentialToHeat, &zero).unwrap();
        assert!(ones.u_values().iter().all(|&u| u == 1.0));
    }

    #[test]
    fn potential_map_rejects_nonpositive_u() {
        let mesh = MeshFunctions::orthogonal(0.1, -1.0, 0.01, 0.0);
        let lat = build_lattice(Equation::Heat, &mesh, 0..=1, 0..=20, UInit::Eval(&|x, _| x)).unwrap();
        assert!(matches!(
            potential_map(PotentialDirection::HeatToPotential, &lat),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn sigma_tau_pure_boost_and_projective() {
        let mesh = MeshFunctions::new(
            MeshFn::Affine {
                slope: 0.01,
                intercept: 0.5,
            },
            MeshFn::Constant(0.1),
            MeshFn::Constant(0.0),
        );
        let lat = build_lattice(Equation::Heat, &mesh, 0..=1, -3..=3, UInit::Eval(&|_, _| 1.0)).unwrap();
        let s = lat.stencil_at(0, 2, StencilShape::SixPoint).unwrap();
        let boost = group_element(Equation::Heat, &[0.0, 0.0, 0.0, 0.0, 0.3, 0.0]).unwrap();
        assert_relative_eq!(sigma_tau_under_group(&boost, &s).unwrap(), 0.6, max_relative = 1e-10);
        let proj = group_element(Equation::Heat, &[0.0, 0.0, 0.0, 0.0, 0.0, 0.05]).unwrap();
        // sigma = 0: ratio is 4 e6 x
        assert_relative_eq!(
            sigma_tau_under_group(&proj, &s).unwrap(),
            4.0 * 0.05 * 0.2,
            max_relative = 1e-10
        );
    }
}
