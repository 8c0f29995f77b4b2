use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rfk_core::cy_pairing::*;
use rfk_core::exact_linalg::{rank, SparseMatrix};
use rfk_core::ginzburg::{build_ginzburg, hom_dims, TreeQuiver};
use rfk_core::limit_systems::{choose_slopes, SpectrumSet};
use rfk_core::random::{random_complex, rng};
use rfk_core::{ChainMap, Error, Field, GradedComplex, Rat};

const FIELDS: [Field; 2] = [Field::Rational, Field::Prime(5)];

/// Rank of the induced map in every degree, against the homology of both ends.
fn induced_iso(m: &ChainMap) -> bool {
    let mut ks: BTreeSet<i64> = m.source().degrees().into_iter().collect();
    ks.extend(m.target().degrees());
    ks.into_iter().all(|k| {
        let (hs, ht) = (m.source().homology_dim(k), m.target().homology_dim(k));
        hs == ht && rank(&m.induced(k).unwrap()) == hs
    })
}

#[test]
fn frobenius_pairings_are_quasi_isomorphisms() {
    for field in FIELDS {
        for n in 2..=5 {
            for cont in [true, false] {
                let input = frobenius_input(field, n, cont).unwrap();
                let p = chain_pairings(&input).unwrap();
                assert!(induced_iso(&p.alpha), "alpha n={n} cont={cont}");
                assert!(induced_iso(&p.gamma), "gamma n={n} cont={cont}");
                assert!(induced_iso(&p.beta), "beta n={n} cont={cont}");
                let rfh: usize = input.rfc01.total().homology().values().sum();
                assert_eq!(rfh, if cont { 0 } else { 4 });
                let r = verify_diagram(&p, &input).unwrap();
                assert!(r.squares_commute());
                assert!(r.five_lemma_certified && r.beta_quasi_iso && r.pass());
            }
        }
    }
}

#[test]
fn squares_reduce_to_the_sub_sub_block() {
    // Theta vanishes on A x A, which is what both squares need
    let input = frobenius_input(Field::Rational, 3, false).unwrap();
    let p = chain_pairings(&input).unwrap();
    for (&k, m) in &p.theta {
        let (ay, ax) = (input.rfc10.a_dim(2 - k), input.rfc01.a_dim(k));
        assert!(m.block(0, ay, 0, ax).is_zero(), "degree {k}");
    }
}

#[test]
fn zero_product_gives_zero_pairings() {
    let mut input = frobenius_input(Field::Rational, 3, true).unwrap();
    input.product = Product::new();
    let p = chain_pairings(&input).unwrap();
    assert!(p.alpha.blocks().is_empty() && p.beta.blocks().is_empty() && p.gamma.blocks().is_empty());
    assert!(verify_diagram(&p, &input).unwrap().squares_commute());
}

#[test]
fn non_cycle_trace_is_rejected() {
    let f = Field::Rational;
    let n = 3;
    let target = GradedComplex::new(
        f,
        BTreeMap::from([(n - 1, 1), (n, 1)]),
        BTreeMap::from([(n - 1, SparseMatrix::identity(f, 1))]),
    )
    .unwrap();
    let input = frobenius_input(f, n, false).unwrap();
    let pi = ChainMap::zero(&input.rfc00.quotient(), &target, 1);
    assert!(matches!(TraceFunctional::new(n, pi.clone(), vec![f.one()]), Err(Error::NotACycle(_))));
    let mut bad = input.clone();
    bad.trace = TraceFunctional { n, target, pi, psi: vec![f.one()] };
    assert!(matches!(chain_pairings(&bad), Err(Error::NotACycle(_))));
}

#[test]
fn broken_leibniz_is_reported() {
    let f = Field::Rational;
    let mut input = frobenius_input(f, 3, true).unwrap();
    // flip mu^2(uq, 1), which the trace sees; mu^1 no longer acts as a derivation
    input.product.insert(f, (2, 0), (0, 0), 0, f.from_int(-2));
    let e = chain_pairings(&input).unwrap_err();
    assert!(matches!(e, Error::NotAChainMap { .. }), "{e:?}");
}

#[test]
fn corrupted_beta_block_is_localized() {
    let input = frobenius_input(Field::Rational, 3, false).unwrap();
    let mut p = chain_pairings(&input).unwrap();
    let k = 0;
    let b = p.beta.block(k);
    p.beta.set_block(k, b.scale(&Field::Rational.from_int(2))).unwrap();
    let r = verify_diagram(&p, &input).unwrap();
    let fails = r.failures();
    assert!(!fails.is_empty());
    assert!(fails.iter().all(|(_, d)| *d == k), "{fails:?}");
}

#[test]
fn nondegenerate_basics() {
    let f = Field::Rational;
    assert!(nondegenerate(&SparseMatrix::identity(f, 3)).nondegenerate);
    let zero_row = SparseMatrix::from_ints(f, &[vec![1, 2], vec![0, 0]]);
    assert!(!nondegenerate(&zero_row).nondegenerate);
    let rect = nondegenerate(&SparseMatrix::from_ints(f, &[vec![1, 0, 0], vec![0, 1, 0]]));
    assert!(!rect.nondegenerate);
    assert_eq!((rect.rows, rect.cols, rect.rank), (2, 3, 2));
}

#[test]
fn trace_pairings_of_fixtures_are_nondegenerate() {
    for n in 2..=5 {
        for cat in [frobenius_category(Field::Rational, n).unwrap(), zigzag_a2(Field::Rational, n).unwrap()] {
            let p = trace_pairing(&cat, &standard_traces(&cat).unwrap()).unwrap();
            for (key, v) in pairing_nondegenerate(&cat, &p) {
                assert!(v.nondegenerate, "{key:?} {v:?}");
            }
        }
    }
}

#[test]
fn ginzburg_a2_composition_trace_verdict() {
    let f = Field::Rational;
    let g = build_ginzburg(&TreeQuiver::a(2), 3).unwrap();
    // degree 0 at a vertex: e_v against itself
    let m = ginzburg_trace_pairing(&g, 0, 0, 0, f).unwrap();
    assert!(nondegenerate(&m).nondegenerate);
    // H^{-3}(e1 Γ e1) pairs against H^3 = 0: rectangular
    assert_eq!(hom_dims(&g, 0, 0, -3, f)[&-3], 1);
    let m = ginzburg_trace_pairing(&g, 0, 0, -3, f).unwrap();
    let v = nondegenerate(&m);
    assert_eq!((v.rows, v.cols, v.nondegenerate), (0, 1, false));
    // between the two vertices nothing lands in degree 0
    let m = ginzburg_trace_pairing(&g, 0, 1, 0, f).unwrap();
    assert_eq!(m.nrows() * m.ncols(), 0);
}

#[test]
fn bifunctoriality_of_trace_pairings() {
    for n in 2..=5 {
        let cat = frobenius_category(Field::Rational, n).unwrap();
        let p = trace_pairing(&cat, &standard_traces(&cat).unwrap()).unwrap();
        let r = bifunctoriality_check(&cat, &p, &basis_samples(&cat)).unwrap();
        assert!(r.pass() && r.samples > 0);
        let cat = zigzag_a2(Field::Rational, n).unwrap();
        let p = trace_pairing(&cat, &standard_traces(&cat).unwrap()).unwrap();
        assert!(bifunctoriality_check(&cat, &p, &basis_samples(&cat)).unwrap().pass());
    }
}

#[test]
fn unequal_traces_break_symmetry_only() {
    let f = Field::Rational;
    let cat = zigzag_a2(f, 3).unwrap();
    let p = trace_pairing(&cat, &[vec![f.one()], vec![f.from_int(2)]]).unwrap();
    let r = bifunctoriality_check(&cat, &p, &basis_samples(&cat)).unwrap();
    assert!(r.identity1.is_empty());
    assert!(!r.identity2.is_empty());
    let w = &r.identity2[0];
    assert_ne!(w.i, w.j);
}

#[test]
fn zero_samples_hold() {
    let f = Field::Rational;
    let cat = zigzag_a2(f, 3).unwrap();
    let p = trace_pairing(&cat, &[vec![f.one()], vec![f.from_int(2)]]).unwrap();
    let s = Sample { i: 0, j: 1, k: 1, f: vec![f.zero()], g: vec![f.zero()] };
    assert!(bifunctoriality_check(&cat, &p, &[s]).unwrap().pass());
}

fn scalar_of(cat: &FiniteCategoryPresentation, a: &PairingData, b: &PairingData) -> rfk_core::Result<ScalarReport> {
    cy_scalar(cat, a, b, &default_generators(cat)?, &spanning_chains(cat)?)
}

#[test]
fn cy_scalar_on_scalings() {
    let f = Field::Rational;
    let cat = frobenius_category(f, 3).unwrap();
    let a = trace_pairing(&cat, &standard_traces(&cat).unwrap()).unwrap();
    assert_eq!(scalar_of(&cat, &a, &a.scaled(&f.from_int(2))).unwrap().c, f.from_int(2));
    let cat = zigzag_a2(f, 3).unwrap();
    let a = trace_pairing(&cat, &standard_traces(&cat).unwrap()).unwrap();
    let r = scalar_of(&cat, &a, &a.scaled(&f.from_int(3))).unwrap();
    assert_eq!(r.c, f.from_int(3));
    assert_eq!(r.links.len(), 1);
}

#[test]
fn cy_scalar_mixed_scaling_is_inconsistent() {
    let f = Field::Rational;
    let cat = zigzag_a2(f, 3).unwrap();
    let a = trace_pairing(&cat, &standard_traces(&cat).unwrap()).unwrap();
    let b = trace_pairing(&cat, &[vec![f.from_int(2)], vec![f.from_int(3)]]).unwrap();
    assert_eq!(scalar_of(&cat, &a, &b).unwrap_err(), Error::Inconsistent { i: 0, j: 1 });
    // same witness when the scaling is applied block-wise
    let b = a.scaled_where(|i, _| i == 0, &f.from_int(2)).scaled_where(|i, _| i == 1, &f.from_int(3));
    assert_eq!(scalar_of(&cat, &a, &b).unwrap_err(), Error::Inconsistent { i: 0, j: 1 });
}

#[test]
fn cy_scalar_hypotheses() {
    let f = Field::Rational;
    // two objects with no morphisms between them
    let mut cat = FiniteCategoryPresentation::new(f, 3, vec!["a".into(), "b".into()]);
    for i in 0..2 {
        cat.set_hom(i, i, 0, 1);
        cat.set_hom(i, i, 2, 1);
        cat.set_identity(i, vec![f.one()]);
        cat.add_composition(i, i, i, 0, 0, 0, 0, 0, f.one());
        cat.add_composition(i, i, i, 0, 2, 0, 0, 0, f.one());
        cat.add_composition(i, i, i, 2, 0, 0, 0, 0, f.one());
    }
    cat.validate().unwrap();
    assert!(matches!(spanning_chains(&cat), Err(Error::HypothesisFailed(_))));
    let a = trace_pairing(&cat, &standard_traces(&cat).unwrap()).unwrap();
    let chains = vec![vec![0], vec![1]];
    let e = cy_scalar(&cat, &a, &a, &default_generators(&cat).unwrap(), &chains).unwrap_err();
    assert!(matches!(e, Error::HypothesisFailed(_)));
    // Hom(X, X[n-1]) of dimension two
    let mut big = frobenius_category(f, 3).unwrap();
    big.set_hom(0, 0, 2, 2);
    let e = cy_scalar(&big, &a, &a, &[vec![f.one()]], &[vec![0]]).unwrap_err();
    assert!(matches!(e, Error::HypothesisFailed(_)));
}

#[test]
fn json_roundtrip() {
    let f = Field::Prime(7);
    let cat = zigzag_a2(f, 4).unwrap();
    let back = FiniteCategoryPresentation::from_json(f, &cat.to_json()).unwrap();
    assert_eq!(back, cat);
    let p = trace_pairing(&cat, &standard_traces(&cat).unwrap()).unwrap();
    assert_eq!(PairingData::from_json(f, &p.to_json()).unwrap(), p);
}

#[test]
fn sigma_slopes_clear_the_spectrum() {
    let mut spectra = SpectrumSet::new();
    spectra.insert((0, 1), [Rat::new(1, 2), Rat::new(3, 1)].into_iter().collect());
    spectra.insert((1, 0), [Rat::new(2, 3)].into_iter().collect());
    let table = choose_slopes(&spectra, (-4, 4)).unwrap();
    for (i, j) in [(0, 1), (1, 0)] {
        let s = choose_sigmas(&table, &spectra, i, j);
        assert_eq!(s.len(), 4);
        assert!(s.iter().all(|c| c.within_bounds && c.gap_clear));
        assert!(sigmas_decreasing(&s));
    }
    let spec: BTreeSet<Rat> = [Rat::from_int(1)].into_iter().collect();
    assert!(!gap_clear(&spec, &Rat::from_int(0), &Rat::from_int(2)));
    assert!(gap_clear(&spec, &Rat::from_int(2), &Rat::from_int(3)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dual_and_homology_commute(seed in any::<u64>(), n in -2i64..5) {
        let f = if seed % 2 == 0 { Field::Rational } else { Field::Prime(3) };
        let c = random_complex(&mut rng(seed), f, -2, 2, 4);
        let d = c.dualize();
        let s = shifted_dual(&c, n);
        for k in -4..=6 {
            prop_assert_eq!(d.homology_dim(k), c.homology_dim(-k));
            prop_assert_eq!(s.homology_dim(k), c.homology_dim(n - 1 - k));
        }
    }

    #[test]
    fn cy_scalar_invariant_under_relabel_and_rescale(c in 1i64..7, g0 in 1i64..5, g1 in 1i64..5, swap in any::<bool>()) {
        let f = Field::Prime(7);
        let cat = zigzag_a2(f, 3).unwrap();
        let a = trace_pairing(&cat, &standard_traces(&cat).unwrap()).unwrap();
        let b = a.scaled(&f.from_int(c));
        let base = scalar_of(&cat, &a, &b).unwrap().c;
        prop_assert_eq!(&base, &f.from_int(c));
        let gens = vec![vec![f.from_int(g0)], vec![f.from_int(g1)]];
        let chains = spanning_chains(&cat).unwrap();
        prop_assert_eq!(&cy_scalar(&cat, &a, &b, &gens, &chains).unwrap().c, &base);
        let perm = if swap { vec![1, 0] } else { vec![0, 1] };
        let (pc, pa, pb) = (cat.permuted(&perm), a.permuted(&perm), b.permuted(&perm));
        prop_assert_eq!(&scalar_of(&pc, &pa, &pb).unwrap().c, &base);
    }

    #[test]
    fn genuine_multiples_are_never_inconsistent(num in 1i64..50, den in 1i64..50, n in 2i64..6) {
        let f = Field::Rational;
        let cat = zigzag_a2(f, n).unwrap();
        let traces = vec![vec![f.from_int(num)], vec![f.from_int(num)]];
        let a = trace_pairing(&cat, &traces).unwrap();
        let c = f.from_rat(&Rat::new(den, num)).unwrap();
        let r = scalar_of(&cat, &a, &a.scaled(&c)).unwrap();
        prop_assert_eq!(r.c, c);
    }
}
