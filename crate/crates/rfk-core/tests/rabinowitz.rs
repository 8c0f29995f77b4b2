use std::collections::BTreeMap;

use rfk_core::exact_linalg::SparseMatrix;
use rfk_core::graded_complex::{ChainMap, GradedComplex};
use rfk_core::limit_systems::{homological, DirectedSystem};
use rfk_core::rabinowitz::*;
use rfk_core::random::{corpus, random_complex, rng};
use rfk_core::{Error, Field};

fn two_term(field: Field) -> GradedComplex {
    // K --1--> K in degrees 0, 1 plus a cycle in degree 0
    let mut spaces = BTreeMap::new();
    spaces.insert(0, 2);
    spaces.insert(1, 1);
    let mut diffs = BTreeMap::new();
    diffs.insert(0, SparseMatrix::from_ints(field, &[vec![1, 0]]));
    GradedComplex::new(field, spaces, diffs).unwrap()
}

fn constant(c: &GradedComplex, w: i64, map: &ChainMap) -> DirectedSystem {
    DirectedSystem::constant(c, -w, w, map).unwrap()
}

#[test]
fn identity_continuation_kills_rfh() {
    let f = Field::Rational;
    let c = two_term(f);
    let sys = constant(&c, 3, &ChainMap::identity(&c));
    let rfc = build_rfc_from_system(&sys, 3, 3).unwrap();
    assert!(rfc.total.is_acyclic());
    assert!(rfc.ses.pass);
    assert!(rfc.long_exact_sequence().unwrap().verify().unwrap().pass);
    let bound = rfc.continuation_rank_bound().unwrap();
    for b in &bound {
        assert!(b.ok);
        assert_eq!(b.rank, c.homology_dim(b.degree));
    }
}

#[test]
fn zero_continuation_splits() {
    let f = Field::Prime(5);
    let c = two_term(f);
    let mut maps = BTreeMap::new();
    let mut levels = BTreeMap::new();
    for w in -2..=2 {
        levels.insert(w, c.clone());
        if w < 2 {
            maps.insert(w, if w == 0 { ChainMap::zero(&c, &c, 0) } else { ChainMap::identity(&c) });
        }
    }
    let sys = DirectedSystem::new(f, levels, maps).unwrap();
    let n = 4;
    let rfc = build_rfc_from_system(&sys, 2, n).unwrap();
    let hw = rfc.cw_plus.homology();
    let lower = homological(&rfc.cw_minus.homology(), n);
    for k in -3..5 {
        let expect = hw.get(&k).copied().unwrap_or(0) + lower.get(&(n - 1 - k)).copied().unwrap_or(0);
        assert_eq!(rfc.total.homology_dim(k), expect, "degree {k}");
    }
    assert!(rfc.continuation_rank_bound().unwrap().iter().all(|b| b.rank == 0));
}

#[test]
fn cone_matches_weight_model() {
    for case in corpus(11, 12) {
        let rfc = build_rfc_from_system(&case.system, case.window, case.n).unwrap();
        assert!(rfc.dimension_identity());
        let phi = rfc.phi().unwrap();
        assert!(phi.is_quasi_isomorphism().unwrap());
        assert!(rfc.ses.pass, "case {}", case.index);
    }
}

#[test]
fn degree_dependent_sign_is_rejected() {
    let f = Field::Rational;
    let mut r = rng(3);
    let c = loop {
        let c = random_complex(&mut r, f, 0, 2, 4);
        if c.degrees().iter().any(|&k| !c.diff(k).is_zero()) {
            break c;
        }
    };
    let sys = constant(&c, 2, &ChainMap::identity(&c));
    let minus = DirectedSystem::constant(&c, -2, 0, &ChainMap::identity(&c)).unwrap();
    let plus = DirectedSystem::constant(&c, 1, 2, &ChainMap::identity(&c)).unwrap();
    let err = build_rfc_with(&minus, &plus, &sys.map(0).unwrap(), 2, 3, SignRule::DegreeDependent).unwrap_err();
    assert!(matches!(err, Error::NotAChainMap { .. }));
    assert!(build_rfc(&minus, &plus, &sys.map(0).unwrap(), 2, 3).is_ok());
}

#[test]
fn fixture_satisfies_ainfinity() {
    for cont in [false, true] {
        let fam = dg_fixture(Field::Rational, cont);
        let tuples = fam.basis_tuples(&[-1, 0, 1], 3).unwrap();
        let rep = verify_ainfinity(&fam, &tuples).unwrap();
        assert!(rep.pass(), "{:?}", rep.failures.first());
    }
}

#[test]
fn every_sign_flip_is_detected() {
    let fam = dg_fixture(Field::Rational, true);
    let tuples = fam.basis_tuples(&[0, 1], 3).unwrap();
    for (label, g) in sign_flip_variants(&fam) {
        let rep = verify_ainfinity(&g, &tuples).unwrap();
        assert!(!rep.pass(), "{label}");
        assert!(!rep.offending_terms().is_empty() || rep.failures[0].identity == "trivial");
    }
}
