use operad_pbw::corpus::builtin;
use operad_pbw::dual::{dual, find_isomorphism, identity_map, same_relation_span, DualMode};
use operad_pbw::format::{parse, print};
use operad_pbw::rewrite::RewriteSystem;

fn split(name: &str) -> RewriteSystem {
    RewriteSystem::new(&builtin(name).unwrap()).unwrap()
}

fn assert_dual_is(name: &str, mode: DualMode, expected: &str) {
    let d = dual(&split(name), mode).unwrap();
    let target = builtin(expected).unwrap();
    let iso = find_isomorphism(&d, &target).unwrap();
    assert!(iso.is_some(), "dual of {name} is not {expected}:\n{}", print(&d));
}

#[test]
fn com_and_lie_are_dual() {
    assert_dual_is("com", DualMode::Shriek, "lie");
    assert_dual_is("lie", DualMode::Shriek, "com");
}

#[test]
fn assoc_is_self_dual() {
    assert_dual_is("assoc", DualMode::Shriek, "assoc");
    assert_dual_is("assoc-ns", DualMode::Shriek, "assoc-ns");
}

#[test]
fn poisson_is_self_dual() {
    assert_dual_is("poisson", DualMode::Shriek, "poisson");
}

#[test]
fn perm_and_prelie_are_dual() {
    assert_dual_is("perm", DualMode::Shriek, "prelie");
    assert_dual_is("prelie", DualMode::Shriek, "perm");
}

#[test]
fn totally_associative_dualizes_to_partially_associative() {
    assert_dual_is("tot-assoc-3", DualMode::KDual, "part-assoc-3");
}

#[test]
fn shriek_double_dual_is_the_identity_on_relation_spans() {
    for name in ["assoc", "assoc-ns", "com", "lie", "poisson", "perm", "prelie"] {
        let p = builtin(name).unwrap();
        let dd = dual(&RewriteSystem::new(&dual(&split(name), DualMode::Shriek).unwrap()).unwrap(), DualMode::Shriek)
            .unwrap();
        assert!(same_relation_span(&p, &dd, &identity_map(&p)).unwrap(), "{name}");
        assert_eq!(dd.order, p.order, "{name}");
    }
}

#[test]
fn dual_quadratic_basis_is_the_former_leading_set() {
    for name in ["com", "lie", "poisson", "perm", "assoc", "tot-assoc-3", "m-dend(3)"] {
        let rs = split(name);
        let mode = if name == "tot-assoc-3" { DualMode::KDual } else { DualMode::Shriek };
        let d = RewriteSystem::new(&dual(&rs, mode).unwrap()).unwrap();
        let mut a = rs.leading_monomials();
        let mut b = d.quadratic_basis();
        a.sort();
        b.sort();
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn kdual_is_defined_for_every_builtin_and_round_trips() {
    for name in operad_pbw::corpus::builtin_names() {
        let d = dual(&split(name), DualMode::KDual).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(parse(&print(&d)).unwrap(), d, "{name}");
        assert!(d.gens.generators().iter().all(|g| g.degree % 2 != 0 || name == "part-assoc-3"));
    }
}
