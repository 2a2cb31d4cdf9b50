mod common;

use num_rational::BigRational;
use proptest::prelude::*;

use common::IdealOracle;
use operad_pbw::corpus::builtin;
use operad_pbw::element::{Monomial, OperadElement};
use operad_pbw::free::monomials_of_weight;
use operad_pbw::rewrite::RewriteSystem;

fn pool(name: &str) -> Vec<Monomial> {
    let p = builtin(name).unwrap();
    (1..=3).flat_map(|s| monomials_of_weight(&p.gens, s, s + 1)).collect()
}

fn element(field: operad_pbw::field::Field, pool: &[Monomial], picks: &[(usize, i64)]) -> OperadElement {
    OperadElement::from_terms(
        field,
        picks.iter().map(|&(k, c)| (pool[k % pool.len()].clone(), BigRational::from_integer(c.into()))),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lie_normal_forms(picks in prop::collection::vec((0usize..1000, -4i64..5), 1..5)) {
        let p = builtin("lie").unwrap();
        let rs = RewriteSystem::new(&p).unwrap();
        let x = element(p.gens.field(), &pool("lie"), &picks);
        let y = rs.normal_form(&x).unwrap();
        prop_assert!(y.support().all(|m| rs.is_basis_monomial(m)));
        prop_assert_eq!(rs.normal_form(&y).unwrap(), y.clone());
        let oracle = IdealOracle::new(&p, 3, 4);
        prop_assert!(oracle.contains(&y.sub(&x)));
    }

    #[test]
    fn normal_form_is_linear(a in prop::collection::vec((0usize..1000, -4i64..5), 1..4),
                             b in prop::collection::vec((0usize..1000, -4i64..5), 1..4)) {
        let p = builtin("perm").unwrap();
        let rs = RewriteSystem::new(&p).unwrap();
        let pool = pool("perm");
        let (x, y) = (element(p.gens.field(), &pool, &a), element(p.gens.field(), &pool, &b));
        let lhs = rs.normal_form(&x.add(&y)).unwrap();
        let rhs = rs.normal_form(&x).unwrap().add(&rs.normal_form(&y).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}
