//! Exact discrete solutions of the invariant schemes, each on the lattice
//! where it is exact, plus generation of new ones by the symmetry group.

use std::f64::consts::PI;
use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Arc;

use crate::equation::Equation;
use crate::error::{Error, Result};
use crate::lattice::{build_lattice, MeshFn, MeshFunctions, MovingLattice, Point, UInit};
use crate::schemes::{make_scheme, ResidualStats, Variant};
use crate::solver::{BoundaryPolicy, InitialData, SolutionFn};
use crate::symmetry::{group_element, GroupElement};

/// Exactness tolerance on `|E1| / scale`.
pub const EXACT_TOL: f64 = 1e-10;
/// Tolerance on the remaining residual components (lattice equations).
pub const LATTICE_TOL: f64 = 1e-9;

#[derive(Clone)]
pub struct ExactSolution {
    pub equation: Equation,
    pub name: String,
    pub description: String,
    u: SolutionFn,
    /// The lattice family on which the solution is exact.
    pub mesh: MeshFunctions,
    pub m_range: RangeInclusive<i64>,
    pub n_range: RangeInclusive<i64>,
    /// Schemes this solution satisfies exactly.
    pub schemes: Vec<Variant>,
    /// Seed solution and group elements it was obtained from.
    pub provenance: Vec<String>,
}

impl fmt::Debug for ExactSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExactSolution")
            .field("equation", &self.equation)
            .field("name", &self.name)
            .field("mesh", &self.mesh)
            .field("schemes", &self.schemes)
            .field("provenance", &self.provenance)
            .finish()
    }
}

const WINDOW: RangeInclusive<i64> = 0..=29;
const CENTERED: RangeInclusive<i64> = -15..=14;

impl ExactSolution {
    fn new(
        equation: Equation,
        name: &str,
        description: &str,
        u: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        mesh: MeshFunctions,
        n_range: RangeInclusive<i64>,
        schemes: &[Variant],
    ) -> Self {
        Self {
            equation,
            name: name.to_string(),
            description: description.to_string(),
            u: Arc::new(u),
            mesh,
            m_range: WINDOW,
            n_range,
            schemes: schemes.to_vec(),
            provenance: vec![format!("closed form: {description}")],
        }
    }

    pub fn u(&self, x: f64, t: f64) -> f64 {
        (self.u)(x, t)
    }

    pub fn u_fn(&self) -> SolutionFn {
        self.u.clone()
    }

    pub fn lattice(&self, m_range: RangeInclusive<i64>, n_range: RangeInclusive<i64>) -> Result<MovingLattice> {
        let u = self.u.clone();
        build_lattice(
            self.equation,
            &self.mesh,
            m_range,
            n_range,
            UInit::Eval(&move |x, t| u(x, t)),
        )
    }

    /// The default 30 x 30 window.
    pub fn window_lattice(&self) -> Result<MovingLattice> {
        self.lattice(self.m_range.clone(), self.n_range.clone())
    }

    pub fn boundary(&self) -> BoundaryPolicy {
        BoundaryPolicy::Exact(self.u.clone())
    }

    pub fn initial_data(&self) -> InitialData {
        InitialData::Eval(self.u.clone())
    }

    /// Residuals of every listed scheme on the default window.
    pub fn residuals(&self) -> Result<Vec<ResidualStats>> {
        let lat = self.window_lattice()?;
        self.schemes
            .iter()
            .map(|&v| make_scheme(self.equation, v)?.lattice_residuals(&lat))
            .collect()
    }

    /// Errors unless every listed scheme is satisfied to the exactness tolerance.
    pub fn verify(&self) -> Result<Vec<ResidualStats>> {
        let stats = self.residuals()?;
        for s in &stats {
            let lattice_ok = s.max_abs.iter().skip(1).all(|&e| e <= LATTICE_TOL);
            if !(s.max_scaled_e1 <= EXACT_TOL && lattice_ok) {
                return Err(Error::numeric(format!(
                    "{} is not an exact solution of {}: max |E1|/scale = {:e}, max |E_a| = {:?}",
                    self.name, s.scheme, s.max_scaled_e1, s.max_abs
                )));
            }
        }
        Ok(stats)
    }
}

fn invariant_pair() -> Vec<Variant> {
    vec![Variant::InvariantExplicit, Variant::InvariantImplicit]
}

fn with_standard() -> Vec<Variant> {
    vec![
        Variant::InvariantExplicit,
        Variant::InvariantImplicit,
        Variant::StandardExplicit,
        Variant::StandardImplicit,
    ]
}

fn with_adapted() -> Vec<Variant> {
    vec![
        Variant::InvariantExplicit,
        Variant::InvariantImplicit,
        Variant::AdaptedExplicit,
        Variant::AdaptedImplicit,
    ]
}

/// Parameters shared by the heat-family entries.
mod params {
    pub const B: f64 = 1.5;
    pub const A_LIN: f64 = 0.5;
    pub const B_LIN: f64 = 1.0;
    pub const C_WAVE: f64 = 0.3;
    /// Rectangular lattice for constant and linear solutions.
    pub const ORTHO: (f64, f64, f64, f64) = (0.1, 0.0, 0.002, 0.5);
    /// The lattice `x = (h n + x0)(τ m + t0)`, `t = τ m + t0`.
    pub const FUND: (f64, f64, f64, f64) = (0.05, 0.0, 0.005, 10.0);
    /// Composite heat group element producing the transformed linear entry.
    pub const TRANSFORM: [f64; 6] = [0.1, 0.2, 0.1, 0.05, 0.1, 0.02];
}

fn ortho() -> MeshFunctions {
    let (h, x0, tau, t0) = params::ORTHO;
    MeshFunctions::orthogonal(h, x0, tau, t0)
}

fn fund() -> MeshFunctions {
    let (h, x0, tau, t0) = params::FUND;
    MeshFunctions::fundamental(h, x0, tau, t0)
}

fn galilean() -> MeshFunctions {
    let (h, x0, tau, t0) = params::ORTHO;
    MeshFunctions::galilean(h, x0, tau, t0, params::C_WAVE)
}

fn fundamental_heat(x: f64, t: f64) -> f64 {
    (-x * x / (4.0 * t)).exp() / (4.0 * PI * t).sqrt()
}

fn traveling_heat(x: f64, t: f64) -> f64 {
    let c = params::C_WAVE;
    (params::A_LIN * (x - 2.0 * c * t) + params::B_LIN) * (-c * x + c * c * t).exp()
}

fn heat_catalog() -> Vec<ExactSolution> {
    use params::*;
    let eq = Equation::Heat;
    let linear = ExactSolution::new(
        eq,
        "linear",
        "u = a x + b, a = 0.5, b = 1",
        |x, _| A_LIN * x + B_LIN,
        ortho(),
        WINDOW,
        &with_standard(),
    );
    let transformed = transformed_linear(&linear);
    vec![
        ExactSolution::new(eq, "constant", "u = 1.5", |_, _| B, ortho(), WINDOW, &with_standard()),
        linear,
        ExactSolution::new(
            eq,
            "fundamental",
            "u = exp(-x^2/(4t)) / sqrt(4 pi t)",
            fundamental_heat,
            fund(),
            CENTERED,
            &invariant_pair(),
        ),
        ExactSolution::new(
            eq,
            "traveling_wave",
            "u = (a(x - 2ct) + b) exp(-c x + c^2 t), c = 0.3",
            traveling_heat,
            galilean(),
            WINDOW,
            &invariant_pair(),
        ),
        transformed,
    ]
}

fn transformed_linear(linear: &ExactSolution) -> ExactSolution {
    let g = group_element(Equation::Heat, &params::TRANSFORM).expect("six heat parameters");
    let mut out = image_under(linear, &g);
    out.name = "transformed_linear".into();
    out.description = "the linear solution under the six-parameter heat group".into();
    out
}

/// `w = -2 ln u` applied to a heat entry; same lattice.
fn potential_image(heat: &ExactSolution) -> ExactSolution {
    let u = heat.u.clone();
    let mut out = heat.clone();
    out.equation = Equation::PotentialBurgers;
    out.u = Arc::new(move |x, t| -2.0 * u(x, t).ln());
    out.description = format!("w = -2 ln u with {}", heat.description);
    out.schemes = invariant_pair();
    out.provenance.push("mapped by w = -2 ln u".into());
    out
}

fn potential_catalog() -> Vec<ExactSolution> {
    heat_catalog()
        .iter()
        .filter(|h| h.name != "transformed_linear")
        .map(potential_image)
        .collect()
}

fn burgers_catalog() -> Vec<ExactSolution> {
    let eq = Equation::Burgers;
    vec![
        ExactSolution::new(eq, "constant", "v = 0.7", |_, _| 0.7, ortho(), WINDOW, &with_standard()),
        ExactSolution::new(
            eq,
            "rational",
            "v = x / t",
            |x, t| x / t,
            fund(),
            CENTERED,
            &with_adapted(),
        ),
    ]
}

fn kdv_catalog() -> Vec<ExactSolution> {
    let eq = Equation::Kdv;
    vec![
        ExactSolution::new(eq, "constant", "u = 0.3", |_, _| 0.3, ortho(), WINDOW, &with_standard()),
        ExactSolution::new(
            eq,
            "rational",
            "u = -x / t",
            |x, t| -x / t,
            fund(),
            CENTERED,
            &with_adapted(),
        ),
    ]
}

fn wave_catalog() -> Vec<ExactSolution> {
    vec![ExactSolution::new(
        Equation::WaveDemo,
        "separable",
        "u = f(x) + g(t) with f = sin(3x), g = t^2",
        |x, t| (3.0 * x).sin() + t * t,
        MeshFunctions::orthogonal(0.1, 0.0, 0.01, 0.0),
        WINDOW,
        &[Variant::WaveDemo, Variant::WaveDemoUniform],
    )]
}

/// Every exact solution known for `equation`.
pub fn catalog(equation: Equation) -> Vec<ExactSolution> {
    match equation {
        Equation::Heat => heat_catalog(),
        Equation::PotentialBurgers => potential_catalog(),
        Equation::Burgers => burgers_catalog(),
        Equation::Kdv => kdv_catalog(),
        Equation::WaveDemo => wave_catalog(),
    }
}

pub fn find_exact(equation: Equation, name: &str) -> Result<ExactSolution> {
    catalog(equation)
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::Unknown {
            kind: "exact solution",
            name: format!("{equation}/{name}"),
        })
}

/// The image of `seed` under `g`, without verification.
fn image_under(seed: &ExactSolution, g: &GroupElement) -> ExactSolution {
    let base = seed.mesh.clone();
    let gx = g.clone();
    // x̃ is affine in x at fixed t for every group here, so the image of a
    // flat-layer lattice is again described by mesh functions
    let image = move |m: i64, n: i64| -> Point {
        base.point(m, n)
            .and_then(|(x, t)| gx.apply_point(Point::new(x, t, 0.0)))
            .unwrap_or(Point::new(f64::NAN, f64::NAN, f64::NAN))
    };
    let (i1, i2, i3) = (image.clone(), image.clone(), image);
    let mesh = MeshFunctions::new(
        MeshFn::eval_fn(move |m| i1(m, 0).t),
        MeshFn::eval_fn(move |m| i2(m, 1).x - i2(m, 0).x),
        MeshFn::eval_fn(move |m| i3(m, 0).x),
    );
    let inverse = g.inverse();
    let forward = g.clone();
    let seed_u = seed.u.clone();
    let u = move |x: f64, t: f64| -> f64 {
        // the actions are fiber preserving: (x, t) do not depend on u
        inverse
            .apply_point(Point::new(x, t, 0.0))
            .and_then(|q| forward.apply_point(Point::new(q.x, q.t, seed_u(q.x, q.t))))
            .map_or(f64::NAN, |p| p.u)
    };
    let mut provenance = seed.provenance.clone();
    provenance.push(format!("group element {:?}", g.parameters));
    ExactSolution {
        equation: seed.equation,
        name: format!("{}_image", seed.name),
        description: format!("image of {} under a symmetry", seed.name),
        u: Arc::new(u),
        mesh,
        m_range: seed.m_range.clone(),
        n_range: seed.n_range.clone(),
        schemes: seed.schemes.iter().copied().filter(|v| !v.is_standard()).collect(),
        provenance,
    }
}

/// Maps `seed` by `g` and re-verifies exactness on the default window.
pub fn generate_by_group(seed: &ExactSolution, g: &GroupElement) -> Result<ExactSolution> {
    if g.equation != seed.equation {
        return Err(Error::Unsupported(format!(
            "{} group element applied to a {} solution",
            g.equation, seed.equation
        )));
    }
    // surface domain errors with their own message before building closures
    let probe = seed.window_lattice()?;
    for (_, _, p) in probe.points() {
        g.apply_point(p)?;
    }
    let out = image_under(seed, g);
    out.verify()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_names() {
        let names = |e| catalog(e).into_iter().map(|s| s.name).collect::<Vec<_>>();
        assert_eq!(
            names(Equation::Heat),
            [
                "constant",
                "linear",
                "fundamental",
                "traveling_wave",
                "transformed_linear"
            ]
        );
        assert_eq!(names(Equation::Burgers), ["constant", "rational"]);
        assert_eq!(names(Equation::Kdv), ["constant", "rational"]);
        assert_eq!(names(Equation::PotentialBurgers).len(), 4);
        assert!(find_exact(Equation::Heat, "soliton").is_err());
    }

    #[test]
    fn fundamental_uses_the_figure_lattice() {
        let f = find_exact(Equation::Heat, "fundamental").unwrap();
        let lat = f.window_lattice().unwrap();
        assert_eq!(lat.t(0, 0), 10.0);
        assert!((lat.x(3, 4) - 0.2 * 10.015).abs() < 1e-13);
    }

    #[test]
    fn every_entry_is_exact() {
        for eq in Equation::ALL {
            for sol in catalog(eq) {
                let stats = sol.verify().unwrap_or_else(|e| panic!("{eq}/{}: {e}", sol.name));
                assert_eq!(stats.len(), sol.schemes.len());
            }
        }
    }

    #[test]
    fn identity_image_is_the_seed() {
        let seed = find_exact(Equation::Heat, "linear").unwrap();
        let g = GroupElement::identity(Equation::Heat);
        let image = generate_by_group(&seed, &g).unwrap();
        let (a, b) = (seed.window_lattice().unwrap(), image.window_lattice().unwrap());
        for ((p, q), r) in a
            .u_values()
            .iter()
            .zip(b.u_values())
            .zip(a.x_values().iter().zip(b.x_values()))
        {
            assert!((p - q).abs() < 1e-14 && (r.0 - r.1).abs() < 1e-14);
        }
    }

    #[test]
    fn singular_group_action_is_a_domain_error() {
        let seed = find_exact(Equation::Heat, "fundamental").unwrap();
        let g = group_element(Equation::Heat, &[0.0, 0.0, 0.0, 0.0, 0.0, 0.1]).unwrap();
        assert!(matches!(generate_by_group(&seed, &g), Err(Error::Domain(_))));
    }
}
