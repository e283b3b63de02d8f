use invpdelta::symmetry::{apply_group, potential_map, PotentialDirection};
use invpdelta::{
    builtin_algebra, catalog, find_exact, generate_by_group, group_element, make_scheme, Equation, GroupElement, Point,
    Variant,
};
use proptest::prelude::*;

fn close(a: Point, b: Point, tol: f64) -> bool {
    let d = |p: f64, q: f64| (p - q).abs() <= tol * (1.0 + p.abs().max(q.abs()));
    d(a.x, b.x) && d(a.t, b.t) && d(a.u, b.u)
}

fn params(eq: Equation) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-0.05..0.05f64, builtin_algebra(eq).dim())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn inverse_undoes_every_element(
        eq in prop::sample::select(vec![Equation::Heat, Equation::Burgers, Equation::PotentialBurgers, Equation::Kdv]),
        seed in any::<u64>(),
        x in -1.0..1.0f64,
        t in 0.5..1.0f64,
        u in 0.5..2.0f64,
    ) {
        let dim = builtin_algebra(eq).dim();
        let ps: Vec<f64> = (0..dim).map(|k| ((seed >> (k * 8)) & 0xff) as f64 / 255.0 * 0.1 - 0.05).collect();
        let g = group_element(eq, &ps).unwrap();
        let p = Point::new(x, t, u);
        let there = g.apply_point(p).unwrap();
        let back = g.inverse().apply_point(there).unwrap();
        prop_assert!(close(back, p, 1e-10), "{eq}: {p:?} -> {there:?} -> {back:?}");
        let back2 = g.apply_point(g.inverse().apply_point(p).unwrap()).unwrap();
        prop_assert!(close(back2, p, 1e-10));
    }

    /// Images of exact heat solutions remain exact for the invariant schemes.
    #[test]
    fn heat_orbits_stay_exact(ps in params(Equation::Heat)) {
        let g = group_element(Equation::Heat, &ps).unwrap();
        for name in ["linear", "traveling_wave"] {
            let seed = find_exact(Equation::Heat, name).unwrap();
            let image = generate_by_group(&seed, &g).unwrap();
            prop_assert_eq!(image.schemes.len(), 2);
        }
    }

    #[test]
    fn burgers_and_kdv_orbits_stay_exact(
        pb in params(Equation::Burgers),
        pk in params(Equation::Kdv),
    ) {
        for (eq, ps) in [(Equation::Burgers, pb), (Equation::Kdv, pk)] {
            let g = group_element(eq, &ps).unwrap();
            for seed in catalog(eq) {
                let image = generate_by_group(&seed, &g);
                prop_assert!(image.is_ok(), "{eq}/{}: {:?}", seed.name, image.err());
            }
        }
    }
}

#[test]
fn composition_is_associative_and_inverse_is_two_sided() {
    let a = GroupElement::one_parameter(Equation::Heat, 4, 0.05).unwrap();
    let b = GroupElement::one_parameter(Equation::Heat, 5, 0.01).unwrap();
    let c = GroupElement::one_parameter(Equation::Heat, 3, -0.1).unwrap();
    let p = Point::new(0.3, 0.7, 1.2);
    let left = a.then(&b).then(&c).apply_point(p).unwrap();
    let right = a.then(&b.then(&c)).apply_point(p).unwrap();
    assert!(close(left, right, 1e-12));
    let ab = a.then(&b);
    assert!(close(ab.then(&ab.inverse()).apply_point(p).unwrap(), p, 1e-12));
    assert!(close(ab.inverse().then(&ab).apply_point(p).unwrap(), p, 1e-12));
}

#[test]
fn group_and_potential_map_commute_with_exactness() {
    let heat = find_exact(Equation::Heat, "fundamental")
        .unwrap()
        .window_lattice()
        .unwrap();
    let w = potential_map(PotentialDirection::HeatToPotential, &heat).unwrap();
    let scheme = make_scheme(Equation::PotentialBurgers, Variant::InvariantImplicit).unwrap();
    assert!(scheme.lattice_residuals(&w).unwrap().max_scaled_e1 <= 1e-10);
    let g = group_element(Equation::PotentialBurgers, &[0.01, 0.02, -0.03, 0.1, 0.05, 0.001]).unwrap();
    let moved = apply_group(&g, &w).unwrap();
    assert!(scheme.lattice_residuals(&moved).unwrap().max_scaled_e1 <= 1e-9);
    let back = potential_map(PotentialDirection::PotentialToHeat, &w).unwrap();
    for ((a, b), _) in heat.u_values().iter().zip(back.u_values()).zip(0..) {
        assert!((a - b).abs() <= 1e-14 * a.abs().max(1e-300));
    }
}

#[test]
fn catalog_groups_reject_foreign_elements() {
    let seed = find_exact(Equation::Kdv, "constant").unwrap();
    let g = GroupElement::identity(Equation::Heat);
    assert!(generate_by_group(&seed, &g).is_err());
}
