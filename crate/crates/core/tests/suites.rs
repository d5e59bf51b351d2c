use supermac::quadrature::QuadratureSpec;
use supermac::supermac::SuperMacdonald;
use supermac::verify::{self, SuiteReport};
use supermac::{ParamSet, Partition};

fn assert_passed(r: &SuiteReport) {
    if let Some(c) = r.first_failure() {
        panic!("{}: {} = {:e} (tol {:e}) {:?}", r.suite, c.name, c.value, c.tolerance, c.counterexample);
    }
}

#[test]
fn grid_doubling_leaves_norms_unchanged() {
    let sm = SuperMacdonald::new(ParamSet::default_exact());
    assert_passed(&verify::convergence(&sm, &[(1, 1), (2, 1)], 4, &QuadratureSpec::default()).unwrap());
}

#[test]
fn operator_is_self_adjoint_in_allowed_region() {
    let sm = SuperMacdonald::new(ParamSet::default_exact());
    assert_passed(&verify::self_adjoint(&sm, &[(1, 1)], 3, &QuadratureSpec::default()).unwrap());
    assert_passed(&verify::self_adjoint(&sm, &[(1, 1)], 2, &QuadratureSpec::alternate()).unwrap());
}

#[test]
fn alternate_radii_reproduce_norms() {
    let sm = SuperMacdonald::new(ParamSet::default_exact());
    assert_passed(&verify::norms(&sm, &[(1, 1), (1, 2)], 4, &QuadratureSpec::alternate()).unwrap());
}

#[test]
fn selected_eigenfunctions() {
    let sm = SuperMacdonald::new(ParamSet::default_exact());
    let lambdas: Vec<Partition> = ["3,1", "2,2,1"].iter().map(|s| s.parse().unwrap()).collect();
    assert_passed(&verify::eigen(&sm, &[(2, 1)], Some(&lambdas), 6, 5, 11).unwrap());
}
