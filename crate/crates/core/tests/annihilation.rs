use invpdelta::invariants::{invariant_component, invariant_len, invariant_shape};
use invpdelta::lattice::CoordSpace;
use invpdelta::symmetry::{
    builtin_algebra, invariance_defect, invariant_count, sample_stencils, DefectMode, SampleBox,
};
use invpdelta::Equation;

const PDES: [Equation; 4] = [
    Equation::Heat,
    Equation::Burgers,
    Equation::PotentialBurgers,
    Equation::Kdv,
];

#[test]
fn every_invariant_is_annihilated_by_every_generator() {
    for eq in PDES {
        let alg = builtin_algebra(eq);
        let stencils = sample_stencils(invariant_shape(eq), &SampleBox::default(), 100, 11);
        for k in 1..=invariant_len(eq).unwrap() {
            let f = invariant_component(eq, k);
            for v in &alg.basis {
                let mut worst = 0.0_f64;
                for s in &stencils {
                    let value = f(s).unwrap();
                    let d = invariance_defect(v, &f, s, DefectMode::Strong).unwrap();
                    worst = worst.max(d.abs() / (1.0 + value.abs()));
                }
                assert!(worst <= 1e-7, "{eq} I{k} under {}: {worst:e}", v.label);
            }
        }
    }
}

#[test]
fn invariant_sets_have_the_counted_size() {
    for eq in PDES {
        let space = CoordSpace::flat_layers(invariant_shape(eq));
        let mu = invariant_count(&builtin_algebra(eq), &space, 5).unwrap();
        assert_eq!(Some(mu), invariant_len(eq), "{eq}");
    }
}
