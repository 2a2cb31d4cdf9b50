use operad_pbw::bar::BarComplex;
use operad_pbw::corpus::builtin;
use operad_pbw::dual::{dual, DualMode};
use operad_pbw::ideal::dimension;
use operad_pbw::rewrite::RewriteSystem;

fn split(name: &str) -> RewriteSystem {
    RewriteSystem::new(&builtin(name).unwrap()).unwrap()
}

#[test]
fn koszul_dims_match_the_dual_presentation() {
    for name in ["assoc", "com", "lie", "perm", "prelie"] {
        let rs = split(name);
        let d = dual(&rs, DualMode::Shriek).unwrap();
        let drs = RewriteSystem::new(&d).unwrap();
        let report = BarComplex::new(&rs).homology(3, 4, usize::MAX);
        for c in &report.cells {
            assert_eq!(c.koszul_dim, dimension(&drs, c.weight, c.arity), "{name} ({}, {})", c.weight, c.arity);
        }
    }
}

#[test]
fn odd_generators_and_kdual_duals() {
    let cases = [("part-assoc-3", 3, 7), ("tot-assoc-3", 3, 7)];
    for (name, w, r) in cases {
        let report = BarComplex::new(&split(name)).homology(w, r, usize::MAX);
        assert!(report.ok(), "{name}");
    }
    for name in ["com", "assoc", "lie"] {
        let d = dual(&split(name), DualMode::KDual).unwrap();
        let rs = RewriteSystem::new(&d).unwrap();
        let report = BarComplex::new(&rs).homology(3, 4, usize::MAX);
        assert!(report.cells.iter().all(|c| c.square_zero && c.is_diagonal()), "kdual of {name}");
        assert!(report.ok(), "kdual of {name}");
    }
}

#[test]
fn euler_characteristic_matches_chain_counts() {
    let rs = split("prelie");
    let bar = BarComplex::new(&rs);
    for (s, r) in [(2, 3), (3, 4)] {
        let cell = bar.cell(s, r, usize::MAX);
        let from_basis: i64 = (1..=s).map(|d| (-1i64).pow(d as u32 - 1) * bar.basis(s, r, d).len() as i64).sum();
        assert_eq!(cell.euler, from_basis);
        assert_eq!(cell.homology_euler(), from_basis);
    }
}

#[test]
fn cap_skips_large_cells() {
    let rs = split("assoc");
    let cell = BarComplex::new(&rs).cell(3, 4, 10);
    assert!(cell.skipped);
    assert!(!cell.ok());
}
