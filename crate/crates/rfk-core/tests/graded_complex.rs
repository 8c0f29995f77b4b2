use proptest::prelude::*;

use rfk_core::field::Field;
use rfk_core::graded_complex::{cone, cone_inclusion, cone_projection, long_exact_sequence, verify_short_exact, ChainMap, GradedComplex};
use rfk_core::random::{random_chain_map, random_complex, rng};

fn d_squared_zero(c: &GradedComplex) -> bool {
    let Some((lo, hi)) = c.range() else { return true };
    (lo - 1..=hi).all(|k| c.diff(k + 1).mul(&c.diff(k)).unwrap().is_zero())
}

fn fields() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(Field::Prime(2)), Just(Field::Prime(5))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn euler_characteristic(field in fields(), seed in any::<u64>()) {
        let c = random_complex(&mut rng(seed), field, -2, 2, 5);
        prop_assert!(d_squared_zero(&c));
        prop_assert_eq!(c.euler_characteristic(), c.homology_euler_characteristic());
        // oracle: alternating sums taken directly
        let chi: i64 = c.spaces().iter().map(|(&k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) }).sum();
        let hchi: i64 = c.homology().iter().map(|(&k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) }).sum();
        prop_assert_eq!(chi, hchi);
    }

    #[test]
    fn cone_sequence_exact(field in fields(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = random_complex(&mut r, field, -1, 2, 4);
        let y = random_complex(&mut r, field, -1, 2, 4);
        let f = random_chain_map(&mut r, &x, &y);
        let c = cone(&f).unwrap();
        prop_assert!(d_squared_zero(&c));
        let i = cone_inclusion(&f, &c).unwrap();
        let p = cone_projection(&f, &c).unwrap();
        prop_assert!(verify_short_exact(&i, &p).unwrap().pass);
        prop_assert!(long_exact_sequence(&i, &p).unwrap().verify().unwrap().pass);
        for k in -3..=3 {
            prop_assert_eq!(c.dim(k), x.dim(k + 1) + y.dim(k));
        }
    }

    #[test]
    fn cone_acyclic_iff_quasi_isomorphism(field in fields(), seed in any::<u64>(), same in any::<bool>()) {
        let mut r = rng(seed);
        let x = random_complex(&mut r, field, 0, 2, 3);
        let y = if same { x.clone() } else { random_complex(&mut r, field, 0, 2, 3) };
        let f = random_chain_map(&mut r, &x, &y);
        prop_assert_eq!(cone(&f).unwrap().is_acyclic(), f.is_quasi_isomorphism().unwrap());
        // a quasi-isomorphism from the other direction
        let id = ChainMap::identity(&x).scale(&field.from_int(-1));
        prop_assert!(id.is_quasi_isomorphism().unwrap());
        prop_assert!(cone(&id).unwrap().is_acyclic());
    }

    #[test]
    fn dual_commutes_with_homology(field in fields(), seed in any::<u64>()) {
        let c = random_complex(&mut rng(seed), field, -2, 2, 4);
        let d = c.dualize();
        prop_assert!(d_squared_zero(&d));
        for k in -3..=3 {
            prop_assert_eq!(d.homology_dim(k), c.homology_dim(-k));
        }
    }

    #[test]
    fn dual_of_cone_is_cone_of_dual(field in fields(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = random_complex(&mut r, field, -1, 1, 3);
        let y = random_complex(&mut r, field, -1, 1, 3);
        let f = random_chain_map(&mut r, &x, &y);
        let lhs = cone(&f).unwrap().dualize();
        let rhs = cone(&f.dual().unwrap()).unwrap();
        for k in -4..=4 {
            prop_assert_eq!(lhs.dim(k), rhs.dim(k - 1));
            prop_assert_eq!(lhs.homology_dim(k), rhs.homology_dim(k - 1));
        }
    }

    #[test]
    fn json_roundtrip(field in fields(), seed in any::<u64>()) {
        let c = random_complex(&mut rng(seed), field, -1, 2, 4);
        let back = GradedComplex::from_json(field, &c.to_json()).unwrap();
        prop_assert_eq!(back.homology(), c.homology());
        prop_assert_eq!(back.spaces(), c.spaces());
    }
}

#[test]
fn empty_complex_has_no_homology() {
    let z = GradedComplex::zero(Field::Rational);
    assert!(z.is_acyclic());
    assert!(z.homology().values().all(|&d| d == 0));
    assert_eq!(z.euler_characteristic(), 0);
}

#[test]
fn cone_of_identity_is_acyclic_and_of_zero_splits() {
    let f = Field::Rational;
    let c = random_complex(&mut rng(3), f, 0, 2, 4);
    assert!(cone(&ChainMap::identity(&c)).unwrap().is_acyclic());
    let z = cone(&ChainMap::zero(&c, &c, 0)).unwrap();
    for k in -1..=3 {
        assert_eq!(z.homology_dim(k), c.homology_dim(k) + c.homology_dim(k + 1));
    }
}
