use std::collections::BTreeSet;

use proptest::prelude::*;

use rfk_core::popsicle::*;
use rfk_core::Error;

// Catalan numbers by the convolution recursion.
fn catalan(n: usize) -> u64 {
    let mut c = vec![1u64];
    for m in 1..=n {
        c.push((0..m).map(|i| c[i] * c[m - 1 - i]).sum());
    }
    c[n]
}

// Faces of the associahedron K_k of codimension d are planar rooted trees
// with k leaves and d + 1 internal vertices, each with at least two children.
fn bracketings(k: usize, d: usize) -> u64 {
    let (n, v) = (k, d + 1);
    // sub[n][v]: a leaf or such a tree; seq[n][v][c]: ordered child lists with
    // c = min(children, 2)
    let mut sub = vec![vec![0u64; v + 1]; n + 1];
    sub[1][0] = 1;
    for nn in 2..=n {
        for vv in 1..=v {
            let mut seq = vec![vec![[0u64; 3]; vv]; nn + 1];
            seq[0][0][0] = 1;
            for a in 0..nn {
                for b in 0..vv {
                    for c in 0..3 {
                        let cur = seq[a][b][c];
                        if cur == 0 {
                            continue;
                        }
                        for x in 1..=nn - a {
                            for y in 0..vv - b {
                                if x == nn && c == 0 {
                                    continue;
                                }
                                seq[a + x][b + y][(c + 1).min(2)] += cur * sub[x][y];
                            }
                        }
                    }
                }
            }
            sub[nn][vv] = seq[nn][vv - 1][2];
        }
    }
    sub[n][v]
}

#[test]
fn oracle_sanity() {
    assert_eq!(catalan(3), 5);
    assert_eq!(bracketings(4, 2), catalan(3));
    assert_eq!(bracketings(5, 1), 9);
}

#[test]
fn unflavored_census_matches_associahedron() {
    for k in 2..=6 {
        let t = PopsicleType::unweighted(k, &[]).unwrap();
        let c = census(&t).unwrap();
        assert_eq!(c.dimension, k as i64 - 2);
        assert_eq!(c.strata.len() as u64, bracketings(k, 1), "k = {k}");
        assert_eq!(c.family_two, 0);
        let broken = enumerate_broken(&t, k.saturating_sub(2)).unwrap();
        for d in 0..=k - 2 {
            let n = broken.iter().filter(|b| b.codimension() == d).count() as u64;
            assert_eq!(n, bracketings(k, d), "k = {k}, codim {d}");
        }
        let vertices = broken.iter().filter(|b| b.codimension() == k - 2).count() as u64;
        assert_eq!(vertices, catalan(k - 1));
    }
}

#[test]
fn stability_threshold() {
    assert!(matches!(PopsicleType::unweighted(1, &[]), Err(Error::Unstable { .. })));
    assert!(matches!(PopsicleType::unweighted(0, &[]), Err(Error::Unstable { .. })));
    let t = PopsicleType::unweighted(1, &[1]).unwrap();
    assert_eq!(moduli_dim(&t).unwrap(), 0);
    assert!(enumerate_codim1(&t).unwrap().is_empty());
    assert!(PopsicleType::unweighted(2, &[3]).is_err());
    assert!(matches!(
        PopsicleType::new(2, BTreeSet::new(), vec![1, 0, 0]),
        Err(Error::WeightMismatch(_))
    ));
}

fn flavored() -> impl Strategy<Value = (usize, Vec<usize>)> {
    (1usize..=5).prop_flat_map(|k| (Just(k), prop::collection::btree_set(1..=k, 0..=k.min(3))))
        .prop_map(|(k, f)| (k, f.into_iter().collect::<Vec<usize>>()))
        .prop_filter("stable", |(k, f)| k + f.len() >= 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn strata_are_stable_and_weighted((k, fl) in flavored()) {
        let t = PopsicleType::unweighted(k, &fl).unwrap();
        for s in enumerate_codim1(&t).unwrap() {
            let inner_in = s.j - s.i;
            prop_assert!(inner_in + s.f1.len() >= 2);
            prop_assert!(s.outer_labels.len() + 1 + (fl.len() - s.f1.len()) >= 3);
            prop_assert_eq!(s.inner_weights[0], s.inner_weights[1..].iter().sum::<i64>() + s.f1.len() as i64);
            prop_assert_eq!(s.outer_weights[0], s.outer_weights[1..].iter().sum::<i64>() + s.outer_flavor.len() as i64);
            prop_assert_eq!(s.outer_labels.iter().filter(|l| **l == Label::Star).count(), 1);
            let moved = fl.iter().filter(|&&l| l > s.i && l <= s.j && !s.f1.contains(&l)).count();
            prop_assert_eq!(s.family == Family::Two, moved >= 2);
        }
        for b in enumerate_broken(&t, 2).unwrap() {
            prop_assert!(b.is_stable());
            prop_assert_eq!(b.codimension(), b.finite_edges());
            prop_assert_eq!(b.dimension(), moduli_dim(&t).unwrap() - b.codimension() as i64);
        }
    }

    #[test]
    fn codim1_exhaustive_and_duplicate_free((k, fl) in flavored()) {
        let t = PopsicleType::unweighted(k, &fl).unwrap();
        let got: Vec<(usize, usize, Vec<usize>)> = enumerate_codim1(&t).unwrap().into_iter().map(|s| (s.i, s.j, s.f1)).collect();
        let set: BTreeSet<_> = got.iter().cloned().collect();
        prop_assert_eq!(set.len(), got.len());
        // brute force over all triples and all subsets of F
        let mut expect = BTreeSet::new();
        for i in 0..k {
            for j in i + 1..=k {
                for mask in 0u32..1 << fl.len() {
                    let f1: Vec<usize> = fl.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &x)| x).collect();
                    if f1.iter().any(|&l| l <= i || l > j) {
                        continue;
                    }
                    let inner = j - i + f1.len() >= 2;
                    let outer = k - (j - i) + 1 + 1 + fl.len() - f1.len() >= 3;
                    if inner && outer {
                        expect.insert((i, j, f1));
                    }
                }
            }
        }
        prop_assert_eq!(set, expect);
    }

    #[test]
    fn family_two_never_in_terms((k, fl) in flavored()) {
        for term in ainfinity_terms(k, &fl) {
            let moved = fl.iter().filter(|&&l| l > term.i && l <= term.j && !term.f1.contains(&l)).count();
            prop_assert!(moved <= 1);
        }
    }
}

#[test]
fn two_inputs_all_strips() {
    let terms = ainfinity_terms(2, &[]);
    assert!(terms.iter().all(|t| t.kinds.iter().all(|k| *k != TermKind::Regular)));
}
