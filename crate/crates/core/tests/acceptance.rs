//! Acceptance run: one PASS/FAIL line per criterion, details indented
//! below a failing line. Exits non-zero if any criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{factorial, IdealOracle};
use operad_pbw::bar::BarComplex;
use operad_pbw::corpus::{builtin, builtin_names};
use operad_pbw::dual::{dual, find_isomorphism, identity_map, same_relation_span, DualMode};
use operad_pbw::element::{Monomial, OperadElement};
use operad_pbw::format::parse_element;
use operad_pbw::free::{compose_monomials, monomials_of_weight, pointed_shuffles};
use operad_pbw::generators::{GenId, GeneratorModule};
use operad_pbw::ideal::{check_pbw, dimension};
use operad_pbw::order::{Comparison, MonomialOrder, PathWordOrder, WordOrder};
use operad_pbw::presentation::Presentation;
use operad_pbw::rewrite::RewriteSystem;
use operad_pbw::symmetrize::symmetrize;
use operad_pbw::tree::Tree;

struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: String, details: Vec<String>) -> Self {
        Outcome { pass, summary, details }
    }
}

fn split(p: &Presentation) -> RewriteSystem {
    RewriteSystem::new(p).unwrap_or_else(|e| panic!("{}: {e}", p.name))
}

fn within(t: Duration, limit_secs: u64) -> bool {
    t <= Duration::from_secs(limit_secs)
}

// ---------------------------------------------------------------- 1

/// Grafting, leaf relabeling and canonical sorting for binary generators,
/// done directly on trees. `swap[g]` is the generator `A_1(g)` up to sign.
fn oracle_composite(a: &Monomial, i: usize, b: &Monomial, w: &[u32], swap: &[GenId]) -> Monomial {
    fn min_leaf(t: &Monomial) -> u32 {
        match t {
            Tree::Leaf(l) => *l,
            Tree::Vertex(_, ch) => ch.iter().map(min_leaf).min().unwrap(),
        }
    }
    fn build(a: &Monomial, i: u32, b: &Monomial, n: u32, w: &[u32]) -> Monomial {
        match a {
            Tree::Leaf(l) if *l == i => relabel(b, &|x| w[(x + i - 2) as usize]),
            Tree::Leaf(l) if *l < i => Tree::Leaf(w[*l as usize - 1]),
            Tree::Leaf(l) => Tree::Leaf(w[(*l + n - 2) as usize]),
            Tree::Vertex(g, ch) => Tree::Vertex(*g, ch.iter().map(|c| build(c, i, b, n, w)).collect()),
        }
    }
    fn relabel(t: &Monomial, f: &dyn Fn(u32) -> u32) -> Monomial {
        match t {
            Tree::Leaf(l) => Tree::Leaf(f(*l)),
            Tree::Vertex(g, ch) => Tree::Vertex(*g, ch.iter().map(|c| relabel(c, f)).collect()),
        }
    }
    fn sort(t: Monomial, swap: &[GenId]) -> Monomial {
        match t {
            Tree::Leaf(_) => t,
            Tree::Vertex(g, ch) => {
                let mut ch: Vec<Monomial> = ch.into_iter().map(|c| sort(c, swap)).collect();
                if min_leaf(&ch[0]) > min_leaf(&ch[1]) {
                    ch.swap(0, 1);
                    Tree::Vertex(swap[g as usize], ch)
                } else {
                    Tree::Vertex(g, ch)
                }
            }
        }
    }
    sort(build(a, i as u32, b, b.arity() as u32, w), swap)
}

fn oracle_words(t: &Monomial) -> Vec<Vec<GenId>> {
    fn go(t: &Monomial, path: &mut Vec<GenId>, out: &mut BTreeMap<u32, Vec<GenId>>) {
        match t {
            Tree::Leaf(l) => {
                out.insert(*l, path.clone());
            }
            Tree::Vertex(g, ch) => {
                path.push(*g);
                for c in ch {
                    go(c, path, out);
                }
                path.pop();
            }
        }
    }
    let mut out = BTreeMap::new();
    go(t, &mut Vec::new(), &mut out);
    out.into_values().collect()
}

/// `a ≤ b` for the path-word order with letters ranked by id.
fn oracle_le(a: &Monomial, b: &Monomial, kind: WordOrder) -> bool {
    for (x, y) in oracle_words(a).iter().zip(oracle_words(b).iter()) {
        if x.len() != y.len() {
            return (x.len() < y.len()) == (kind == WordOrder::Lex);
        }
        if x != y {
            return x < y;
        }
    }
    true
}

fn criterion_order() -> Outcome {
    const PER_CASE: usize = 2000;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut triples, mut composites, mut violations, mut mismatches, mut skipped) =
        (0usize, 0usize, 0usize, 0usize, 0usize);
    let mut details = Vec::new();
    for name in ["com", "assoc", "lie"] {
        let gens = builtin(name).unwrap().gens;
        let swap: Vec<GenId> = gens.ids().map(|g| gens.action(g, 1)[0].0).collect();
        let pools: Vec<Vec<Monomial>> =
            (0..=4).map(|r| if r < 2 { vec![] } else { monomials_of_weight(&gens, r - 1, r) }).collect();
        for kind in [WordOrder::Lex, WordOrder::RevLenLex] {
            let order = PathWordOrder::default_for(&gens, kind);
            let mut done = 0;
            while done < PER_CASE {
                let m = rng.random_range(2..=4);
                let n = rng.random_range(2..=3);
                let (mut a, mut ap) = (pools[m].choose(&mut rng).unwrap(), pools[m].choose(&mut rng).unwrap());
                match order.compare(a, ap) {
                    Comparison::Incomparable => {
                        skipped += 1;
                        continue;
                    }
                    Comparison::Greater => std::mem::swap(&mut a, &mut ap),
                    _ => {}
                }
                if !oracle_le(a, ap, kind) {
                    mismatches += 1;
                    details.push(format!("{name} {kind}: library and oracle disagree on {a} <= {ap}"));
                }
                let b = pools[n].choose(&mut rng).unwrap();
                let i = rng.random_range(1..=m);
                for w in pointed_shuffles(m, n, i).iter() {
                    let lhs = compose_monomials(&gens, a, i, b, w).unwrap();
                    let rhs = compose_monomials(&gens, ap, i, b, w).unwrap();
                    let (l, r) = (lhs.support().next().unwrap(), rhs.support().next().unwrap());
                    let (ol, or) =
                        (oracle_composite(a, i, b, w.images(), &swap), oracle_composite(ap, i, b, w.images(), &swap));
                    if *l != ol || *r != or {
                        mismatches += 1;
                        details.push(format!("{name}: composite of {a} o_{i} {b} by {w} differs from the oracle"));
                    }
                    if !order.compare(l, r).is_le() || !oracle_le(&ol, &or, kind) {
                        violations += 1;
                        details.push(format!("{name} {kind}: {w}.({a} o_{i} {b}) > {w}.({ap} o_{i} {b})"));
                    }
                    composites += 1;
                }
                done += 1;
                triples += 1;
            }
        }
    }
    let t = start.elapsed();
    details.truncate(10);
    Outcome::new(
        violations == 0 && mismatches == 0 && within(t, 60),
        format!(
            "{triples} triples, {composites} shuffled composites, {violations} violations, {mismatches} oracle mismatches, {skipped} incomparable draws redrawn, {t:.1?}"
        ),
        details,
    )
}

// ---------------------------------------------------------------- 2

fn monomial_set(gens: &GeneratorModule, texts: &[&str]) -> BTreeSet<Monomial> {
    texts
        .iter()
        .map(|t| {
            let x = parse_element(gens, t).unwrap_or_else(|e| panic!("{t}: {e}"));
            assert_eq!(x.len(), 1, "{t} is not a single monomial");
            x.into_terms().next().unwrap().0
        })
        .collect()
}

fn criterion_golden_splits() -> Outcome {
    let mut dend: Vec<String> = Vec::new();
    for a in 1..=3 {
        for b in 1..=3 {
            dend.push(format!("d{a}(d{b}(1,2),3)"));
        }
    }
    dend.extend(["d3(1,d3(2,3))", "d3(1,d2(2,3))", "d2(1,d2(2,3))"].map(String::from));
    let dend: Vec<&str> = dend.iter().map(String::as_str).collect();
    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("assoc-ns", vec!["m(m(1,2),3)"]),
        ("com", vec!["m(1,m(2,3))"]),
        ("lie", vec!["b(b(1,2),3)", "b(b(1,3),2)"]),
        ("poisson", vec!["m(m(1,2),3)", "b(b(1,2),3)", "b(b(1,3),2)", "b(m(1,2),3)", "m(b(1,3),2)", "m(b(1,2),3)"]),
        ("perm", vec!["p(p(1,2),3)", "p(p'(1,3),2)", "p(p'(1,2),3)"]),
        ("tot-assoc-3", vec!["t(t(1,2,3),4,5)"]),
        ("m-dend", dend),
    ];
    let mut details = Vec::new();
    for (name, golden) in &cases {
        let p = builtin(name).unwrap();
        let got: BTreeSet<Monomial> = split(&p).quadratic_basis().into_iter().collect();
        let want = monomial_set(&p.gens, golden);
        if got != want {
            details.push(format!("{name}: got {} monomials, expected {}", got.len(), want.len()));
        }
    }
    Outcome::new(details.is_empty(), format!("{} presentations compared as monomial sets", cases.len()), details)
}

// ---------------------------------------------------------------- 3

fn criterion_check_pbw() -> Outcome {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut cells = 0;
    let mut certified = Vec::new();
    for name in builtin_names() {
        let p = builtin(name).unwrap();
        let (w, r) = if name == "poisson" { (4, 5) } else { (4, 6) };
        let rs = split(&p);
        let report = check_pbw(&rs, w, r);
        let oracle = IdealOracle::new(&p, w, r);
        for c in &report.cells {
            cells += 1;
            let (rank, dim) = (oracle.rank(c.weight, c.arity), oracle.dim(c.weight, c.arity));
            if c.weight >= 2 && (rank != c.ideal_rank || dim != c.dimension) {
                details.push(format!(
                    "{name} ({}, {}): certificate rank {} dim {}, oracle rank {rank} dim {dim}",
                    c.weight, c.arity, c.ideal_rank, c.dimension
                ));
            }
        }
        match report.first_failure() {
            None => certified.push(name),
            Some(c) => details.push(format!(
                "{name}: not PBW at (s, r) = ({}, {}): {} basis monomials for dimension {}; {} = 0",
                c.weight,
                c.arity,
                c.basis_count,
                c.dimension,
                c.witness.as_deref().unwrap_or("count mismatch")
            )),
        }
    }
    let t = start.elapsed();
    Outcome::new(
        details.is_empty() && within(t, 300),
        format!(
            "{} of {} builtins certified, {cells} cells cross-checked, {t:.1?}",
            certified.len(),
            builtin_names().len()
        ),
        details,
    )
}

// ---------------------------------------------------------------- 4

fn criterion_dims() -> Outcome {
    let cases: Vec<(&str, usize, fn(usize) -> usize)> = vec![
        ("com", 6, |_| 1),
        ("lie", 5, |r| factorial(r - 1)),
        ("assoc", 5, factorial),
        ("perm", 5, |r| r),
        ("prelie", 4, |r| r.pow(r as u32 - 1)),
        ("poisson", 4, factorial),
    ];
    let mut details = Vec::new();
    let mut checked = 0;
    for (name, max_r, expected) in cases {
        let p = builtin(name).unwrap();
        let rs = split(&p);
        let oracle = IdealOracle::new(&p, max_r - 1, max_r);
        for r in 2..=max_r {
            let (want, got, lib) = (expected(r), oracle.dim(r - 1, r), dimension(&rs, r - 1, r));
            checked += 1;
            if got != want || lib != want {
                details.push(format!("dim {name}({r}): expected {want}, oracle {got}, library {lib}"));
            }
        }
    }
    Outcome::new(details.is_empty(), format!("{checked} arity dimensions against closed forms"), details)
}

// ---------------------------------------------------------------- 5

fn criterion_duality() -> Outcome {
    let cases = [
        ("com", DualMode::Shriek, "lie"),
        ("assoc", DualMode::Shriek, "assoc"),
        ("poisson", DualMode::Shriek, "poisson"),
        ("perm", DualMode::Shriek, "prelie"),
        ("tot-assoc-3", DualMode::KDual, "part-assoc-3"),
    ];
    let mut details = Vec::new();
    for (name, mode, target) in cases {
        let d = match dual(&split(&builtin(name).unwrap()), mode) {
            Ok(d) => d,
            Err(e) => {
                details.push(format!("dual of {name}: {e}"));
                continue;
            }
        };
        let t = builtin(target).unwrap();
        if find_isomorphism(&d, &t).unwrap().is_none() {
            details.push(format!("dual of {name} does not span the relations of {target}"));
        }
    }
    Outcome::new(details.is_empty(), format!("{} dual presentations identified", cases.len() - details.len()), details)
}

// ---------------------------------------------------------------- 6

fn criterion_double_dual() -> Outcome {
    let mut details = Vec::new();
    let mut checked = Vec::new();
    for name in builtin_names() {
        let p = builtin(name).unwrap();
        if p.gens.generators().iter().any(|g| g.arity != 2) {
            continue;
        }
        let once = dual(&split(&p), DualMode::Shriek).unwrap();
        let twice = dual(&split(&once), DualMode::Shriek).unwrap();
        if !same_relation_span(&p, &twice, &identity_map(&p)).unwrap() {
            details.push(format!("{name}: double dual changes the relation span"));
        }
        checked.push(name);
    }
    Outcome::new(details.is_empty(), format!("binary builtins {}", checked.join(", ")), details)
}

// ---------------------------------------------------------------- 7

fn criterion_bar() -> Outcome {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut cells = 0;
    let mut hard = true;
    for (name, w, r) in [("com", 3, 5), ("assoc", 3, 5), ("lie", 3, 5), ("poisson", 3, 4)] {
        let rs = split(&builtin(name).unwrap());
        let report = BarComplex::new(&rs).homology(w, r, usize::MAX);
        for c in &report.cells {
            cells += 1;
            if !c.square_zero {
                hard = false;
                details.push(format!("{name} ({}, {}): d^2 != 0", c.weight, c.arity));
            }
            if !c.is_diagonal() {
                details.push(format!("{name} ({}, {}): off-diagonal homology {:?}", c.weight, c.arity, c.homology));
            }
            if c.koszul_dim != c.dual_basis_count {
                details.push(format!(
                    "{name} ({}, {}): dim K = {} but {} dual basis monomials",
                    c.weight, c.arity, c.koszul_dim, c.dual_basis_count
                ));
            }
        }
    }
    let t = start.elapsed();
    Outcome::new(
        hard && details.is_empty() && within(t, 600),
        format!("{cells} cells, d^2 = 0 {}, {t:.1?}", if hard { "everywhere" } else { "FAILS" }),
        details,
    )
}

// ---------------------------------------------------------------- 8

fn random_element(rng: &mut ChaCha8Rng, field: operad_pbw::field::Field, pools: &[Vec<Monomial>]) -> OperadElement {
    let mut x = OperadElement::zero(field);
    for _ in 0..rng.random_range(1..=4) {
        let pool = pools.choose(rng).unwrap();
        let c = loop {
            let c: i64 = rng.random_range(-3..=3);
            if c != 0 {
                break c;
            }
        };
        x.add_term(pool.choose(rng).unwrap().clone(), BigRational::from_integer(c.into()));
    }
    x
}

fn criterion_normal_forms() -> Outcome {
    const SAMPLES: usize = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut details = Vec::new();
    let mut total = 0;
    for name in builtin_names() {
        let p = builtin(name).unwrap();
        let rs = split(&p);
        let k = p.gens.max_arity();
        let max_r = 4 * (k - 1) + 1;
        let pools: Vec<Vec<Monomial>> = (1..=4)
            .flat_map(|s| (1..=max_r).map(move |r| (s, r)))
            .map(|(s, r)| monomials_of_weight(&p.gens, s, r))
            .filter(|v| !v.is_empty())
            .collect();
        let oracle = IdealOracle::new(&p, 4, max_r);
        let mut failures = 0;
        for _ in 0..SAMPLES {
            let x = random_element(&mut rng, p.gens.field(), &pools);
            let y = rs.normal_form(&x).unwrap();
            let sound = oracle.contains(&y.sub(&x));
            let idempotent = rs.normal_form(&y).unwrap() == y;
            if !sound || !idempotent {
                failures += 1;
                if failures <= 2 {
                    details.push(format!("{name}: {} (sound {sound}, idempotent {idempotent})", x.display(&p.gens)));
                }
            }
            total += 1;
        }
        if failures > 2 {
            details.push(format!("{name}: {failures} failures in total"));
        }
    }
    Outcome::new(
        details.is_empty(),
        format!("{total} random elements over {} builtins", builtin_names().len()),
        details,
    )
}

// ---------------------------------------------------------------- 9

fn criterion_symmetrize() -> Outcome {
    let p = symmetrize(&builtin("assoc-ns").unwrap()).unwrap();
    let rs = split(&p);
    let report = check_pbw(&rs, 4, 5);
    let oracle = IdealOracle::new(&p, 4, 5);
    let mut details = Vec::new();
    if let Some(c) = report.first_failure() {
        details.push(format!("not PBW at ({}, {})", c.weight, c.arity));
    }
    for r in 2..=5 {
        let (lib, orc) = (report.cell(r - 1, r).unwrap().dimension, oracle.dim(r - 1, r));
        if lib != factorial(r) || orc != factorial(r) {
            details.push(format!("arity {r}: library {lib}, oracle {orc}, expected {}", factorial(r)));
        }
    }
    Outcome::new(
        details.is_empty(),
        format!("{} with {} generators, dims r! for r <= 5", p.name, p.gens.len()),
        details,
    )
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("order compatibility", criterion_order),
        ("golden quadratic bases", criterion_golden_splits),
        ("PBW certificates for every builtin", criterion_check_pbw),
        ("dimension oracles", criterion_dims),
        ("duality goldens", criterion_duality),
        ("double dual", criterion_double_dual),
        ("bar homology", criterion_bar),
        ("normal form soundness", criterion_normal_forms),
        ("symmetrization", criterion_symmetrize),
    ];
    let mut failed = 0;
    for (k, (label, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Outcome::new(false, format!("panicked: {}", msg.unwrap_or_default()), vec![])
        });
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {}. {label}: {}", k + 1, outcome.summary);
        for d in &outcome.details {
            println!("         {d}");
        }
        failed += usize::from(!outcome.pass);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
