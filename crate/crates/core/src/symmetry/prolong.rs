use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::{Coord, CoordSpace, StencilView};

use super::sampling::{random_stencil, SampleBox};
use super::{SymmetryAlgebra, VectorField};

/// Coefficients `(xi, eta, phi)` of `v` at every stencil point, in slot order.
pub fn prolong(v: &VectorField, s: &StencilView) -> Result<Vec<[f64; 3]>> {
    s.points()
        .iter()
        .map(|&p| {
            let c = v.eval(p);
            if c.iter().all(|x| x.is_finite()) {
                Ok(c)
            } else {
                Err(Error::numeric(format!("{} coefficients overflow at {p:?}", v.label)))
            }
        })
        .collect()
}

/// Component of the prolonged field along one active coordinate.
fn prolonged_along(v: &VectorField, s: &StencilView, coord: Coord) -> f64 {
    let pts = s.points();
    match coord {
        Coord::X(i) => v.xi(pts[i]),
        Coord::T(i) => v.eta(pts[i]),
        Coord::U(i) => v.phi(pts[i]),
        Coord::Layer(level) => v.eta(s.p(level, 0)),
    }
}

/// Rows: basis generators; columns: the active coordinates of `space`.
pub fn z_matrix(alg: &SymmetryAlgebra, s: &StencilView, space: &CoordSpace) -> DMatrix<f64> {
    DMatrix::from_fn(alg.dim(), space.dim(), |r, c| {
        prolonged_along(&alg.basis[r], s, space.coords[c])
    })
}

/// Number of singular values above `rel_tol * sigma_max`; the default
/// relative threshold is `max(rows, cols) * f64::EPSILON`.
pub fn numerical_rank(m: &DMatrix<f64>, rel_tol: Option<f64>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.max();
    if smax == 0.0 {
        return 0;
    }
    let tol = rel_tol.unwrap_or(m.nrows().max(m.ncols()) as f64 * f64::EPSILON) * smax;
    sv.iter().filter(|&&s| s > tol).count()
}

/// `dim(space) - rank Z`, with the rank maximised over the given stencils.
pub fn invariant_count_on(alg: &SymmetryAlgebra, space: &CoordSpace, stencils: &[StencilView]) -> Result<usize> {
    if stencils.is_empty() {
        return Err(Error::Sampling("no stencils to sample".into()));
    }
    let ranks: Vec<usize> = stencils
        .iter()
        .map(|s| numerical_rank(&z_matrix(alg, s, space), None))
        .collect();
    let mut distinct = ranks.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if ranks.len() > 1 && distinct.len() == ranks.len() {
        return Err(Error::Sampling(format!("rank unstable across samples: {ranks:?}")));
    }
    let rank = *distinct.last().unwrap_or(&0);
    Ok(space.dim() - rank)
}

/// Invariant count over eight seeded generic stencils.
pub fn invariant_count(alg: &SymmetryAlgebra, space: &CoordSpace, seed: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bx = SampleBox::default();
    let stencils: Vec<_> = (0..8).map(|_| random_stencil(space.shape, &bx, &mut rng)).collect();
    invariant_count_on(alg, space, &stencils)
}

/// Whether the defect is required to vanish everywhere or only where `F = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DefectMode {
    Strong,
    /// The stencil must satisfy `|F| <= tol`.
    OnManifold {
        tol: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefectOptions {
    /// Gradient step is `grad_rel_step * (1 + |coordinate|)`.
    pub grad_rel_step: f64,
    /// Flow parameter for the first central difference.
    pub flow_eps: f64,
    /// Allowed relative disagreement between the two estimators.
    pub agreement: f64,
}

impl Default for DefectOptions {
    fn default() -> Self {
        Self {
            grad_rel_step: 1e-6,
            flow_eps: 1e-5,
            agreement: 1e-6,
        }
    }
}

/// The two estimates of `pr V[F]` at a stencil.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefectEstimates {
    pub value: f64,
    /// Prolonged coefficients dotted with a central-difference gradient of `F`.
    pub gradient: f64,
    /// Richardson-extrapolated `d/de F(exp(e V) s)` at `e = 0`.
    pub flow: f64,
    /// `sum |coefficient * partial derivative|`, the scale of the cancellation.
    pub magnitude: f64,
}

pub fn defect_estimates(
    v: &VectorField,
    f: &dyn Fn(&StencilView) -> Result<f64>,
    s: &StencilView,
    opts: &DefectOptions,
) -> Result<DefectEstimates> {
    let value = f(s)?;
    let mut gradient = 0.0;
    let mut magnitude = 0.0;
    for coord in CoordSpace::full(s.shape).coords {
        let c = prolonged_along(v, s, coord);
        if c == 0.0 {
            continue;
        }
        if !c.is_finite() {
            return Err(Error::numeric(format!("{} coefficient overflow", v.label)));
        }
        let x = s.get(coord);
        let h = opts.grad_rel_step * (1.0 + x.abs());
        if x + h == x {
            return Err(Error::numeric("gradient step underflow"));
        }
        let d = (f(&s.with(coord, x + h))? - f(&s.with(coord, x - h))?) / (2.0 * h);
        gradient += c * d;
        magnitude += (c * d).abs();
    }

    let along = |e: f64| -> Result<f64> { f(&s.map_points(|p| v.flow(p, e))?) };
    let central = |e: f64| -> Result<f64> { Ok((along(e)? - along(-e)?) / (2.0 * e)) };
    let e = opts.flow_eps;
    let flow = (4.0 * central(e / 2.0)? - central(e)?) / 3.0;

    let est = DefectEstimates {
        value,
        gradient,
        flow,
        magnitude,
    };
    if !(gradient.is_finite() && flow.is_finite()) {
        return Err(Error::numeric(format!("non-finite defect for {}", v.label)));
    }
    let allowed = opts.agreement * (1.0 + value.abs() + magnitude);
    if (gradient - flow).abs() > allowed {
        return Err(Error::numeric(format!(
            "defect estimators disagree for {}: gradient {gradient:e}, flow {flow:e}",
            v.label
        )));
    }
    Ok(est)
}

/// `pr V[F]` at `s`, cross-checked by two independent estimators.
pub fn invariance_defect(
    v: &VectorField,
    f: &dyn Fn(&StencilView) -> Result<f64>,
    s: &StencilView,
    mode: DefectMode,
) -> Result<f64> {
    if let DefectMode::OnManifold { tol } = mode {
        let value = f(s)?;
        if value.abs() > tol {
            return Err(Error::domain(format!(
                "stencil is off the solution manifold (|F| = {value:e} > {tol:e})"
            )));
        }
    }
    Ok(defect_estimates(v, f, s, &DefectOptions::default())?.gradient)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equation::Equation;
    use crate::lattice::{Point, StencilShape};
    use crate::symmetry::builtin_algebra;

    fn stencil() -> StencilView {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        random_stencil(StencilShape::SixPoint, &SampleBox::default(), &mut rng)
    }

    #[test]
    fn translation_prolongs_to_unit_x() {
        let v1 = &builtin_algebra(Equation::Heat).basis[0];
        let s = stencil();
        assert!(prolong(v1, &s).unwrap().iter().all(|c| *c == [1.0, 0.0, 0.0]));
    }

    #[test]
    fn t_plus_is_weakly_invariant() {
        let s = stencil();
        let tp = |s: &StencilView| Ok(s.steps.t_plus);
        for v in builtin_algebra(Equation::Heat).basis {
            let d = invariance_defect(&v, &tp, &s, DefectMode::OnManifold { tol: 0.0 }).unwrap();
            assert!(d.abs() < 1e-9, "{}: {d}", v.label);
        }
    }

    #[test]
    fn disagreeing_estimators_are_reported() {
        // Coefficients say d/dx but the "closed form" flow moves t.
        let bogus =
            VectorField::new("bogus", |_, _, _| [1.0, 0.0, 0.0]).with_flow(|p, e| Ok(Point::new(p.x, p.t + e, p.u)));
        let f = |s: &StencilView| Ok(s.p(0, 0).x + 2.0 * s.p(1, 0).t);
        let err = defect_estimates(&bogus, &f, &stencil(), &DefectOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Numeric(_)));
    }

    #[test]
    fn rank_threshold() {
        let m = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0]);
        assert_eq!(numerical_rank(&m, None), 1);
        assert_eq!(numerical_rank(&DMatrix::identity(4, 4), None), 4);
        assert_eq!(numerical_rank(&DMatrix::zeros(2, 2), None), 0);
    }

    #[test]
    fn heat_has_eight_invariants() {
        let alg = builtin_algebra(Equation::Heat);
        let space = CoordSpace::flat_layers(StencilShape::SixPoint);
        assert_eq!(space.dim(), 14);
        assert_eq!(invariant_count(&alg, &space, 11).unwrap(), 8);
    }
}
