use std::time::Instant;

use almabel::catalog::constraint::{parse_pred, Expr, Pred, Rel};
use almabel::catalog::{
    build, known_structures, manifest, recognize, resolve, sample_params, skt_probe, table3_complex_structure,
    unimodular_predicate, AlgebraName, CatalogError, Role, Source, FAMILIES, KAHLER_LIST, ROWS, SKT_LIST,
    SPLIT_GK_LIST,
};
use almabel::genkahler::{verify_gk, GkTriple};
use almabel::hermitian::{nijenhuis, skt_verdict, HermitianStructure};
use almabel::liealg::LieAlgebra;
use almabel::numerics::{QMatrix, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> Scalar {
    Scalar::new(n, d)
}

fn random_basis(rng: &mut ChaCha8Rng) -> QMatrix {
    loop {
        let p = QMatrix::from_fn(6, 6, |_, _| Scalar::new(rng.gen_range(-3..=3), rng.gen_range(1..=2)));
        if !p.det().is_zero() {
            return p;
        }
    }
}

#[test]
fn round_trip_every_row() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let start = Instant::now();
    let mut failures = Vec::new();
    for r in ROWS {
        for _ in 0..3 {
            let name = sample_params(r.name, &mut rng, 8).unwrap();
            let l = build(&name).unwrap();
            if !recognize(&l).contains(&name) {
                failures.push(format!("{name}"));
            }
            let moved = l.change_basis(&random_basis(&mut rng)).unwrap();
            if !recognize(&moved).contains(&name) {
                failures.push(format!("{name} (conjugated)"));
            }
        }
    }
    eprintln!("round trip took {:?}", start.elapsed());
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn theorem_families_are_listed_by_label() {
    let r = recognize(&build(&AlgebraName::new("k15^{0}", &[])).unwrap());
    assert!(r.names().contains(&"k15^{0}".to_string()), "{:?}", r.names());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let moved = build(&AlgebraName::new("k15^{0}", &[])).unwrap().change_basis(&random_basis(&mut rng)).unwrap();
    let r = recognize(&moved);
    assert!(r.names().contains(&"k15^{0}".to_string()), "{:?}", r.names());
    // k15^0 is also g3.5+3R at p = 0
    assert!(r.contains(&AlgebraName::new("g3.5+3R", &[("p", q(0, 1))])));
}

/// Sets the parameter a `x = expr` predicate solves for.
fn force_equation(pred: &str, name: &mut AlgebraName) -> bool {
    let Ok(Pred::Chain(Expr::Var(v), rest)) = parse_pred(pred) else { return false };
    let [(Rel::Eq, e)] = rest.as_slice() else { return false };
    let Ok(val) = e.eval(&name.params) else { return false };
    name.params.insert(v, val);
    true
}

#[test]
fn unimodularity_column_matches_the_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut yes, mut no) = (0, 0);
    for r in ROWS {
        for _ in 0..4 {
            let mut name = sample_params(r.name, &mut rng, 8).unwrap();
            let l = build(&name).unwrap();
            assert_eq!(unimodular_predicate(&name).unwrap(), l.is_unimodular(), "{name}");
            if let Some(p) = r.unimodular {
                if force_equation(p, &mut name) && resolve(&name).is_ok() {
                    assert!(unimodular_predicate(&name).unwrap(), "{name}");
                    assert!(build(&name).unwrap().is_unimodular(), "{name}");
                    yes += 1;
                } else {
                    no += 1;
                }
            }
        }
    }
    assert!(yes > 20 && no > 0, "{yes} {no}");
}

#[test]
fn printed_examples() {
    let k13 = build(&AlgebraName::new("k13", &[])).unwrap();
    assert_eq!(k13.structure_equations_string(), "(f^{16},0,0,0,0,0)");
    let g612 = AlgebraName::new("g6.12", &[("p", q(1, 1)), ("q", q(-1, 4))]);
    assert!(unimodular_predicate(&g612).unwrap());
    assert!(build(&g612).unwrap().is_unimodular());
    let k25 = build(&AlgebraName::new("k25^{0,0,1}", &[])).unwrap();
    assert_eq!(k25.structure_equations_string(), "(f^{26},-f^{16},f^{46},-f^{36},0,0)");
}

#[test]
fn violations_name_the_clause() {
    let err = build(&AlgebraName::new("g6.1", &[("p", q(2, 1)), ("q", q(1, 2)), ("r", q(1, 3)), ("s", q(1, 4))]));
    assert!(matches!(&err, Err(CatalogError::Violation { clause, .. }) if clause == "1 >= |p| >= |q| >= |r| >= |s| > 0"), "{err:?}");
    let err = build(&AlgebraName::new("k17", &[("p", q(0, 1))]));
    assert!(matches!(&err, Err(CatalogError::Violation { clause, .. }) if clause == "1 >= |p| > 0"), "{err:?}");
    let err = build(&AlgebraName::new("g6.11", &[("p", q(1, 1)), ("q", q(1, 2)), ("r", q(1, 2)), ("s", q(2, 1))]));
    assert!(matches!(&err, Err(CatalogError::Violation { clause, .. }) if clause.contains("|s| <= 1")), "{err:?}");
    assert!(matches!(build(&AlgebraName::new("k17", &[])), Err(CatalogError::MissingParam { .. })));
    assert!(matches!(build(&AlgebraName::new("k99", &[])), Err(CatalogError::UnknownName(_))));
}

#[test]
fn table3_structures_are_integrable() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for r in ROWS.iter().filter(|r| r.source == Source::ComplexList) {
        let j = table3_complex_structure(r.name).unwrap();
        for _ in 0..3 {
            let name = sample_params(r.name, &mut rng, 8).unwrap();
            assert!(nijenhuis(&build(&name).unwrap(), &j).is_zero(), "{name}");
        }
    }
    let k24 = table3_complex_structure("k24").unwrap();
    let e1 = k24.col(0);
    assert_eq!(e1, vec![q(0, 1), q(0, 1), q(1, 1), q(0, 1), q(0, 1), q(0, 1)]);
    assert!(matches!(table3_complex_structure("g6.1"), Err(CatalogError::NotComplexListed(_))));
}

fn listed_instance(label: &str, rng: &mut ChaCha8Rng) -> AlgebraName {
    sample_params(label, rng, 8).unwrap()
}

#[test]
fn known_structures_pass_their_verdicts() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for f in FAMILIES {
        for _ in 0..2 {
            let name = listed_instance(f.label, &mut rng);
            let l = build(&name).unwrap();
            let Ok(structures) = known_structures(&name) else {
                assert!(!KAHLER_LIST.contains(&f.label) && !SKT_LIST.contains(&f.label) && !SPLIT_GK_LIST.contains(&f.label));
                continue;
            };
            for s in structures {
                match s.role {
                    Role::Kahler => {
                        let v = skt_verdict(&l, &HermitianStructure::new(s.j, s.g).unwrap()).unwrap();
                        assert!(v.is_kahler, "{name}");
                    }
                    Role::Skt => {
                        let v = skt_verdict(&l, &HermitianStructure::new(s.j, s.g).unwrap()).unwrap();
                        assert!(v.is_skt && !v.is_kahler, "{name}");
                    }
                    Role::GkSplit => {
                        let t = GkTriple::new(s.j, s.j_minus.unwrap(), s.g).unwrap();
                        let v = verify_gk(&l, &t).unwrap();
                        assert!(v.valid && v.split, "{name}: {:?}", v.failures);
                    }
                }
            }
        }
    }
    assert!(matches!(known_structures(&AlgebraName::new("k14", &[])), Err(CatalogError::NotCovered(_))));
}

#[test]
fn skt_probe_finds_nothing_off_the_list() {
    let probes = [
        AlgebraName::new("k2", &[("q", q(1, 2)), ("r", q(1, 3))]),
        AlgebraName::new("k5", &[("p", q(1, 2))]),
        AlgebraName::new("k14", &[]),
        AlgebraName::new("k16", &[]),
        AlgebraName::new("k21", &[]),
    ];
    for name in probes {
        let p = skt_probe(&name).unwrap();
        assert!(p.tried > 100, "{name}");
        assert_eq!(p.found, None, "{name}");
    }
    let listed = skt_probe(&AlgebraName::new("k17^{-1/2}", &[])).unwrap();
    assert!(listed.found.is_some());
}

#[test]
fn manifest_lists_everything() {
    let m = manifest();
    assert_eq!(m["rows"].as_array().unwrap().len(), ROWS.len());
    assert_eq!(m["families"].as_array().unwrap().len(), FAMILIES.len());
    let k17 = m["rows"].as_array().unwrap().iter().find(|r| r["name"] == "k17").unwrap();
    assert_eq!(k17["structure_equations"], "(f^{16},pf^{26},pf^{36},0,0,0)");
    assert_eq!(k17["unimodular"], "trace = 0");
}

#[test]
fn abelian_input_is_flagged_nilpotent() {
    let r = recognize(&LieAlgebra::abelian(6));
    assert!(r.candidates.is_empty());
    assert!(r.invariants.nilpotent);
}
