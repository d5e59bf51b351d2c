use std::sync::OnceLock;

use num::complex::Complex64;
use proptest::prelude::*;

use supermac::operators::{identity_residual, sample_rational_points};
use supermac::partition::partitions_up_to;
use supermac::quadrature::{hermitian_form, QuadratureSpec};
use supermac::sampling::Sampler;
use supermac::supermac::{check_membership, phi, sv_translate, SuperMacdonald, SvDirection};
use supermac::symfunc::{Basis, SymFunc};
use supermac::{BiSymPoly, ParamSet, Partition, Rational};

fn sm() -> &'static SuperMacdonald<Rational> {
    static SM: OnceLock<SuperMacdonald<Rational>> = OnceLock::new();
    SM.get_or_init(|| SuperMacdonald::new(ParamSet::default_exact()))
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn partition(max_weight: usize) -> impl Strategy<Value = Partition> {
    let all = partitions_up_to(max_weight);
    (0..all.len()).prop_map(move |i| all[i].clone())
}

fn hook_partition(n: usize, m: usize, max_weight: usize) -> impl Strategy<Value = Partition> {
    let all: Vec<Partition> = partitions_up_to(max_weight).into_iter().filter(|l| l.in_fat_hook(n, m)).collect();
    (0..all.len()).prop_map(move |i| all[i].clone())
}

/// Power-sum combinations of degree at most 3.
fn power_sum_fn() -> impl Strategy<Value = SymFunc<Rational>> {
    prop::collection::vec((partition(3), -3i64..=3), 1..4)
        .prop_map(|terms| SymFunc::from_terms(Basis::PowerSum, None, terms.into_iter().map(|(l, c)| (l, rat(c)))))
}

fn bisym(n: usize, m: usize) -> impl Strategy<Value = BiSymPoly<Rational>> {
    prop::collection::vec((0usize..3, 0usize..3, -4i64..=4), 1..4).prop_map(move |terms| {
        let mut out = BiSymPoly::zero(n, m);
        for (r, s, c) in terms {
            let x = if r == 0 { BiSymPoly::one(n, m) } else { BiSymPoly::x_power_sum(n, m, r) };
            let y = if s == 0 { BiSymPoly::one(n, m) } else { BiSymPoly::y_power_sum(n, m, s) };
            out = out.add(&x.mul(&y).unwrap().scale(&rat(c))).unwrap();
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn phi_is_multiplicative(f in power_sum_fn(), g in power_sum_fn(), n in 1usize..=2, m in 1usize..=2) {
        let params = sm().params();
        let lhs = phi(&f.mul(&g).unwrap(), n, m, params).unwrap();
        let rhs = phi(&f, n, m, params).unwrap().mul(&phi(&g, n, m, params).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_is_commutative_and_pointwise(a in bisym(2, 1), b in bisym(2, 1), seed in any::<u64>()) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(&ab, &b.mul(&a).unwrap());
        let (x, y) = Sampler::new(seed).rational_point(2, 1);
        let lhs: Rational = ab.evaluate(&x, &y).unwrap();
        let rhs: Rational = a.evaluate(&x, &y).unwrap() * b.evaluate::<Rational>(&x, &y).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_distributes(a in bisym(1, 2), b in bisym(1, 2), c in bisym(1, 2)) {
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn conjugation_reverses_dominance(l in partition(7), mu in partition(7)) {
        prop_assert_eq!(l.conjugate().conjugate(), l.clone());
        if l.weight() == mu.weight() {
            prop_assert_eq!(l.dominated_by(&mu), mu.conjugate().dominated_by(&l.conjugate()));
        }
    }

    #[test]
    fn sv_translation_round_trips(a in bisym(1, 1)) {
        let params = sm().params();
        let there = sv_translate(&a, params, SvDirection::ToSv).unwrap();
        prop_assert_eq!(sv_translate(&there, params, SvDirection::FromSv).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn no_y_variables_gives_macdonald(l in partition(5), n in 1usize..=3) {
        let p = sm().context().p_in(&l, n).unwrap();
        let expect = BiSymPoly::from_product(n, 0, &p, &SymFunc::one(Basis::Monomial)).unwrap();
        prop_assert_eq!(sm().sp(&l, n, 0).unwrap(), expect);
    }

    #[test]
    fn sp_matches_two_alphabet_expansion(l in hook_partition(2, 2, 6)) {
        prop_assert_eq!(sm().sp(&l, 2, 2).unwrap(), sm().sp_via_expansion(&l, 2, 2).unwrap());
    }

    #[test]
    fn sp_satisfies_shift_symmetry(l in hook_partition(2, 1, 5), seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let points: Vec<_> = (0..3).map(|_| s.rational_point(2, 1)).collect();
        let verdict = check_membership(&sm().sp(&l, 2, 1).unwrap(), sm().params(), &points).unwrap();
        prop_assert!(verdict.holds);
    }

    #[test]
    fn coefficients_sum_to_constant(n in 0usize..=3, m in 0usize..=3, seed in any::<u64>()) {
        prop_assume!(n + m > 0);
        let params = ParamSet::default_exact();
        for pt in sample_rational_points(&mut Sampler::new(seed), n, m, &params, 2) {
            prop_assert_eq!(identity_residual(&pt, &params).unwrap(), rat(0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn form_is_hermitian_and_positive(cf in prop::collection::vec(-3i64..=3, 4), cg in prop::collection::vec(-3i64..=3, 4)) {
        let basis: Vec<BiSymPoly<Rational>> =
            ["1", "2", "1,1", "2,1"].iter().map(|s| sm().sp(&s.parse().unwrap(), 1, 1).unwrap()).collect();
        let combine = |c: &[i64]| {
            basis.iter().zip(c).fold(BiSymPoly::zero(1, 1), |acc, (p, &k)| acc.add(&p.scale(&rat(k))).unwrap())
        };
        let (f, g) = (combine(&cf).compile(), combine(&cg).compile());
        let (spec, fp) = (QuadratureSpec::default(), sm().params().to_f64());
        let fg = hermitian_form(&f, &g, &spec, &fp).unwrap();
        let gf = hermitian_form(&g, &f, &spec, &fp).unwrap();
        prop_assert!((fg - gf.conj()).norm() <= 1e-9 * (1.0 + fg.norm()));
        let ff: Complex64 = hermitian_form(&f, &f, &spec, &fp).unwrap();
        prop_assert!(ff.re >= -1e-12 && ff.im.abs() <= 1e-9 * (1.0 + ff.re));
    }
}

#[test]
fn non_member_fails_shift_symmetry() {
    let mut s = Sampler::new(7);
    let points: Vec<_> = (0..2).map(|_| s.rational_point(1, 1)).collect();
    let x = BiSymPoly::<Rational>::x_power_sum(1, 1, 1);
    let verdict = check_membership(&x, sm().params(), &points).unwrap();
    assert!(!verdict.holds);
    assert!(verdict.witness.is_some());
}
