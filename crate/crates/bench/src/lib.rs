//! Fixtures shared by the benchmarks: ready-made lattices and run
//! configurations sized so that one iteration takes milliseconds.

use std::sync::Arc;

use invpdelta::solver::SolutionFn;
use invpdelta::{
    find_exact, make_scheme, BoundaryPolicy, Equation, InitialData, MeshFunctions, MovingLattice, SimConfig, Variant,
};

/// Sampled window of a catalog solution.
pub fn exact_lattice(equation: Equation, name: &str) -> MovingLattice {
    find_exact(equation, name)
        .and_then(|s| s.window_lattice())
        .expect("catalog entry exists")
}

/// Heat with `u = exp(t + x)` on an orthogonal mesh of `cols` nodes over
/// `[0, 1]` with `tau = 0.4 h^2`.
pub fn heat_exp_config(variant: Variant, cols: i64, steps: usize) -> SimConfig {
    let h = 1.0 / (cols - 1) as f64;
    let f: SolutionFn = Arc::new(|x: f64, t: f64| (t + x).exp());
    SimConfig::new(
        make_scheme(Equation::Heat, variant).expect("heat variant"),
        MeshFunctions::orthogonal(h, 0.0, 0.4 * h * h, 0.0),
        0..=cols - 1,
        InitialData::Eval(f.clone()),
        steps,
    )
    .with_boundary(BoundaryPolicy::Exact(f))
}

/// Burgers on its rational solution, marching on the catalog lattice.
pub fn burgers_rational_config(variant: Variant, steps: usize) -> SimConfig {
    let sol = find_exact(Equation::Burgers, "rational").expect("catalog entry exists");
    let u = sol.u_fn();
    SimConfig::new(
        make_scheme(Equation::Burgers, variant).expect("burgers variant"),
        sol.mesh.clone(),
        sol.n_range.clone(),
        InitialData::Eval(u.clone()),
        steps,
    )
    .with_m0(*sol.m_range.start())
    .with_boundary(BoundaryPolicy::Exact(u))
}
