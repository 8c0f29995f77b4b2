use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use rfk_core::graded_complex::{ChainMap, GradedComplex};
use rfk_core::limit_systems::*;
use rfk_core::random::{corpus, random_complex, random_system, rng};
use rfk_core::{Field, Rat};

fn d_squared_zero(c: &GradedComplex) -> bool {
    let Some((lo, hi)) = c.range() else { return true };
    (lo - 1..=hi).all(|k| c.diff(k + 1).mul(&c.diff(k)).unwrap().is_zero())
}

#[test]
fn corpus_telescopes_compute_limits() {
    for case in corpus(11, 60) {
        let (sys, w) = (&case.system, case.window);
        let tel = telescope(sys, w).unwrap();
        let cot = cotelescope(sys, w).unwrap();
        assert!(d_squared_zero(&tel) && d_squared_zero(&cot), "case {}", case.index);
        // a finite sequence has its last term as colimit and its first as limit
        let top = sys.level(w as i64).unwrap();
        let bottom = sys.level(-(w as i64)).unwrap();
        let ks: BTreeSet<i64> = sys.degrees().into_iter().chain(tel.degrees()).chain(cot.degrees()).collect();
        for k in ks {
            assert_eq!(tel.homology_dim(k), top.homology_dim(k), "case {} degree {k}", case.index);
            assert_eq!(cot.homology_dim(k), bottom.homology_dim(k), "case {} degree {k}", case.index);
            let d = direct_limit_homology(sys, k, w).unwrap();
            let i = inverse_limit_homology(sys, k, w).unwrap();
            if d.stabilized_at.is_some() {
                assert_eq!(d.dimension, tel.homology_dim(k));
            }
            if i.stabilized_at.is_some() {
                assert_eq!(i.dimension, cot.homology_dim(k));
            }
        }
        assert!(quotient_tower_chain(sys, w as i64, &BTreeMap::new()).unwrap().certified(), "case {}", case.index);
    }
}

#[test]
fn telescope_independent_of_window_after_isomorphisms() {
    let f = Field::Rational;
    let mut r = rng(5);
    for _ in 0..10 {
        let sys = random_system(&mut r, f, 6, 4);
        // random_system is the identity from some level on, at the latest from 6
        let h: Vec<_> = (1..=6).map(|w| telescope(&sys, w).unwrap().homology()).collect();
        let stable_from = (1..6).rev().take_while(|&w| h[w] == h[w - 1]).last().unwrap_or(6);
        for w in stable_from..=6 {
            assert_eq!(h[w - 1], h[5]);
        }
    }
}

#[test]
fn window_one_is_level_one() {
    let f = Field::Prime(5);
    let sys = random_system(&mut rng(2), f, 2, 4);
    let tel = telescope(&sys, 1).unwrap();
    assert_eq!(tel.homology(), sys.level(1).unwrap().homology());
}

#[test]
fn cotelescope_window_zero_is_level_zero() {
    let f = Field::Rational;
    let c = random_complex(&mut rng(9), f, -1, 1, 4);
    let sys = DirectedSystem::constant(&c, -1, 1, &ChainMap::identity(&c)).unwrap();
    let cot = cotelescope(&sys, 0).unwrap();
    assert_eq!(cot.total_dim(), c.total_dim());
    assert_eq!(cot.homology(), c.homology());
}

#[test]
fn json_roundtrip() {
    let f = Field::Prime(7);
    let sys = random_system(&mut rng(4), f, 3, 4);
    let back = DirectedSystem::from_json(f, &sys.to_json()).unwrap();
    assert_eq!(back.to_json(), sys.to_json());
}

#[test]
fn slopes_reject_nonpositive_spectrum() {
    let mut s = SpectrumSet::new();
    s.insert((0, 1), [Rat::zero()].into_iter().collect());
    assert!(choose_slopes(&s, (-2, 2)).is_err());
}

fn spectra() -> impl Strategy<Value = SpectrumSet> {
    let entry = (1i64..40, 1i64..8).prop_map(|(n, d)| Rat::new(n, d));
    prop::collection::btree_map((0usize..3, 0usize..3), prop::collection::btree_set(entry, 0..5), 0..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chosen_slopes_pass_scan(s in spectra(), lo in -4i64..=0, hi in 1i64..=4) {
        let t = choose_slopes(&s, (lo, hi)).unwrap();
        prop_assert!(verify_slopes(&t, &s).pass());
        // direct scan of the four conditions
        let empty = BTreeSet::new();
        for (&(i, j), row) in &t.tau {
            let spec = s.get(&(i, j)).unwrap_or(&empty);
            prop_assert!(row.values().all(|x| !spec.contains(x)));
            prop_assert!(row[&0].is_negative() && row[&1].is_positive());
            for w in lo..hi {
                prop_assert!(row[&(w + 1)].sub(&row[&w]) >= t.a);
            }
            for (&(j2, k), row2) in &t.tau {
                if j2 != j {
                    continue;
                }
                let ik = &t.tau[&(i, k)];
                for v in lo..=hi {
                    for w in lo..=hi {
                        if let Some(sum) = ik.get(&(v + w)) {
                            prop_assert!(row2[&w].add(&row[&v]) <= *sum);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn telescope_homology_is_last_level(seed in any::<u64>(), w in 1usize..=4) {
        let sys = random_system(&mut rng(seed), Field::Prime(3), w as i64, 4);
        let tel = telescope(&sys, w).unwrap();
        prop_assert!(d_squared_zero(&tel));
        let top = sys.level(w as i64).unwrap();
        for k in -3..=4 {
            prop_assert_eq!(tel.homology_dim(k), top.homology_dim(k));
        }
    }
}
