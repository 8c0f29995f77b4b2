use proptest::prelude::*;
use rfk_core::reeb_period::*;
use rfk_core::{Error, Rat};

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

fn q(n: i64) -> Rat {
    Rat::from_int(n)
}

#[test]
fn action_matches_closed_form() {
    let p = HamiltonianProfile::quadratic();
    assert_eq!(action_at(&p, &q(1)).unwrap(), q(0));
    for x in [q(1), r(3, 2), q(2), r(7, 5), r(11, 10)] {
        let closed = x.mul(&x).sub(&q(1)).neg();
        assert_eq!(action_at(&p, &x).unwrap(), closed, "r = {}", x);
    }
    assert_eq!(action_at(&p, &q(2)).unwrap(), q(-3));
    assert_eq!(action_at(&p, &r(3, 2)).unwrap(), r(-5, 4));
    assert!(action_at(&p, &r(1, 2)).is_err());
}

#[test]
fn action_beyond_the_kink_is_constant() {
    let p = HamiltonianProfile::quadratic();
    assert_eq!(action_at(&p, &q(5)).unwrap(), action_at(&p, &q(2)).unwrap());
}

#[test]
fn chord_radii_examples() {
    let p = HamiltonianProfile::quadratic();
    let c = chord_radii(&p, &[q(1)]).unwrap();
    assert_eq!(c.len(), 1);
    assert_eq!(c[0].radius, r(3, 2));
    assert_eq!(c[0].action, r(-5, 4));
    assert!(chord_radii(&p, &[q(5)]).unwrap().is_empty());
    let two = chord_radii(&p, &[q(1), r(3, 2)]).unwrap();
    assert_eq!(two.len(), 2);
    for c in &two {
        // 2(r − 1) = T
        assert_eq!(c.radius, q(1).add(&c.period.div(&q(2)).unwrap()));
    }
    assert!(two[0].radius < two[1].radius);
    assert!(two[0].action > two[1].action);
}

#[test]
fn slope_equal_to_nu_has_no_isolated_chord() {
    let p = HamiltonianProfile::quadratic();
    assert!(chord_radii(&p, &[q(2)]).unwrap().is_empty());
}

#[test]
fn irrational_radius_is_reported() {
    // h = r³/3 − r²/2 + r/2 gives h' = r² − r + 1/2, h'(r) = 1 at r = (1+√3)/2
    let piece = Piece { start: q(1), end: q(2), coeffs: vec![q(0), r(1, 2), r(-1, 2), r(1, 3)] };
    let p = HamiltonianProfile::new(r(5, 2), q(2), vec![piece]).unwrap();
    assert!(matches!(chord_radii(&p, &[r(1, 2)]), Ok(ref v) if v.len() == 1 && v[0].radius == q(1)));
    assert!(matches!(chord_radii(&p, &[q(1)]), Err(Error::IrrationalChord(_))));
    // h'(r) = 5/4 at r = 3/2
    let c = chord_radii(&p, &[r(5, 4)]).unwrap();
    assert_eq!(c[0].radius, r(3, 2));
}

#[test]
fn invalid_profiles_are_rejected() {
    let one = |coeffs: Vec<Rat>, nu: Rat| {
        HamiltonianProfile::new(nu, q(2), vec![Piece { start: q(1), end: q(2), coeffs }])
    };
    // wrong slope at the kink
    assert!(matches!(one(vec![q(1), q(-2), q(1)], q(3)), Err(Error::InvalidProfile(_))));
    // concave
    assert!(matches!(one(vec![q(0), q(4), q(-1)], q(0)), Err(Error::InvalidProfile(_))));
    // h'(1) < 0
    assert!(matches!(one(vec![q(0), q(-3), q(1)], q(1)), Err(Error::InvalidProfile(_))));
    // linear piece has h'' = 0
    assert!(matches!(one(vec![q(0), q(2)], q(2)), Err(Error::InvalidProfile(_))));
    assert!(HamiltonianProfile::new(q(2), q(1), vec![]).is_err());
    // derivative jump between pieces
    let jump = HamiltonianProfile::new(
        q(6),
        q(3),
        vec![
            Piece { start: q(1), end: q(2), coeffs: vec![q(1), q(-2), q(1)] },
            Piece { start: q(2), end: q(3), coeffs: vec![q(-3), q(0), q(1)] },
        ],
    );
    assert!(matches!(jump, Err(Error::InvalidProfile(_))));
}

#[test]
fn good_pair_examples() {
    let mu = HamiltonianProfile::quadratic();
    let nu = HamiltonianProfile::quadratic_extended();
    let spec = [r(1, 2), q(1), r(3, 2), q(3), r(7, 2), q(9)];
    let rep = good_pair_check(&mu, &nu, &spec).unwrap();
    assert!(rep.good && rep.window_agrees, "{:?}", rep);
    assert_eq!(rep.window_low, q(-3));
    assert_eq!(rep.chords_mu.len(), 3);

    // enumeration oracle: every chord of either profile with action above −3
    let all_nu = chord_radii(&nu, &spec).unwrap();
    let above: Vec<_> = all_nu.iter().filter(|c| c.action > q(-3)).cloned().collect();
    assert_eq!(above, rep.chords_nu);
    assert!(all_nu.len() > above.len(), "period 3 should fall outside the window");

    let same_kink = HamiltonianProfile::new(
        q(3),
        q(2),
        vec![Piece { start: q(1), end: q(2), coeffs: vec![q(0), q(1), r(1, 2)] }],
    )
    .unwrap();
    assert!(!good_pair_check(&mu, &same_kink, &spec).unwrap().good);

    let differs = HamiltonianProfile::new(
        q(4),
        q(3),
        vec![Piece { start: q(1), end: q(3), coeffs: vec![r(-1, 3), q(1), q(-1), r(1, 3)] }],
    )
    .unwrap();
    let rep = good_pair_check(&mu, &differs, &spec).unwrap();
    assert!(!rep.good);
    assert!(rep.reason.unwrap().contains("differ"));
}

#[test]
fn profile_toml_roundtrip_and_errors() {
    let text = r#"
nu = "4"
r_nu = "3"

[[piece]]
start = "1"
end = "2"
coeffs = ["1", "-2", "1"]

[[piece]]
start = "2"
end = "3"
coeffs = ["1", "-2", "1"]
"#;
    assert_eq!(HamiltonianProfile::from_toml(text).unwrap(), HamiltonianProfile::quadratic_extended());
    match HamiltonianProfile::from_toml("nu = \"4\"\nr_nu = [") {
        Err(Error::Parse(m)) => assert!(m.contains("line"), "{}", m),
        other => panic!("{:?}", other),
    }
}

/// Closed form for a monotone segment: 2·#(integers strictly inside) plus
/// 1·#(integer endpoints), signed by the direction.
fn closed_form_doubled(nodes: &[(i64, i64)]) -> i64 {
    let mut total = 0;
    for w in nodes.windows(2) {
        let (a, b) = (w[0].1, w[1].1);
        let den = 12;
        if a == b {
            continue;
        }
        let (lo, hi, s) = if a < b { (a, b, 1) } else { (b, a, -1) };
        let mut count = 0;
        for k in (lo.div_euclid(den) - 1)..=(hi.div_euclid(den) + 1) {
            let x = k * den;
            if x > lo && x < hi {
                count += 4;
            } else if x == lo || x == hi {
                count += 2;
            }
        }
        total += s * count;
    }
    total
}

#[test]
fn rs_index_examples() {
    let neg_id = SymplecticBlockPath::new(vec![Block::Hyperbolic(q(-1))]).unwrap();
    assert_eq!(rs_index(&neg_id).unwrap(), HalfInt::from_int(0));
    let neg_rot = SymplecticBlockPath::rotation(r(1, 2), r(1, 2));
    assert_eq!(rs_index(&neg_rot).unwrap().doubled, 0);
    let full = SymplecticBlockPath::rotation(q(0), q(1));
    assert_eq!(rs_index(&full).unwrap(), HalfInt::from_int(2));
    let half = SymplecticBlockPath::rotation(q(0), r(1, 2));
    assert_eq!(rs_index(&half).unwrap(), HalfInt::from_int(1));
    assert_eq!(rs_index(&half).unwrap().to_string(), "1");
    let back = SymplecticBlockPath::rotation(q(0), r(-1, 2));
    assert_eq!(rs_index(&back).unwrap(), HalfInt::from_int(-1));
    let stuck = SymplecticBlockPath::rotation(q(1), q(1));
    assert!(matches!(rs_index(&stuck), Err(Error::NonIsolatedCrossing(_))));
    let id = SymplecticBlockPath::new(vec![Block::Hyperbolic(q(1))]).unwrap();
    assert!(matches!(rs_index(&id), Err(Error::NonIsolatedCrossing(_))));
    let hyp = SymplecticBlockPath::new(vec![Block::Hyperbolic(q(3))]).unwrap();
    assert_eq!(rs_index(&hyp).unwrap().doubled, 0);
}

#[test]
fn degree_windows_examples() {
    assert_eq!(degree_windows(2, 0, 1, -3).unwrap().iterates, vec![4]);
    assert!(degree_windows(2, 0, 1, 5).unwrap().iterates.is_empty());
    assert_eq!(degree_windows(0, 0, 1, 0), Err(Error::ZeroMaslov));
    let scan: Vec<i64> = (2..=10).filter(|m| 0 - (m - 2) * 2 <= -3 && -3 <= 1 - (m - 2) * 2).collect();
    assert_eq!(scan, vec![4]);
}

#[test]
fn shifted_periods_move_radii() {
    // on h = (r−1)², period T sits at r = 1 + T/2, so +T₀ moves it by T₀/2
    let p = HamiltonianProfile::new(
        q(20),
        q(11),
        vec![Piece { start: q(1), end: q(11), coeffs: vec![q(1), q(-2), q(1)] }],
    )
    .unwrap();
    let spec = [r(1, 3), q(2), r(5, 2)];
    let t0 = q(3);
    let base = chord_radii(&p, &spec).unwrap();
    let shifted = chord_radii(&p, &slope_shift(&spec, &t0)).unwrap();
    assert_eq!(base.len(), shifted.len());
    for (a, b) in base.iter().zip(&shifted) {
        assert_eq!(b.radius.sub(&a.radius), r(3, 2));
        assert!(b.action < a.action);
    }
    assert_eq!(degree_shift(7, 2), 5);
}

fn profile_strategy() -> impl Strategy<Value = (HamiltonianProfile, Vec<(i64, i64, i64)>)> {
    // h'' = a + b(r − 1) ≥ 0 on each piece, glued C¹
    (0i64..4, prop::collection::vec((0i64..5, 0i64..5, 1i64..4), 1..4)).prop_filter_map(
        "convex",
        |(c0, raw)| {
            let mut pieces = Vec::new();
            let mut start = q(1);
            let mut value = q(0);
            let mut slope = q(c0);
            for &(a, b, len) in &raw {
                if a == 0 && b == 0 {
                    return None;
                }
                let end = start.add(&q(len));
                // h(s + x) = value + slope·x + a x²/2 + b x³/6, expanded around 0
                let (a, b) = (q(a), q(b));
                let s = start.clone();
                let c3 = b.div(&q(6)).unwrap();
                let c2 = a.div(&q(2)).unwrap();
                let coeffs = vec![
                    value.sub(&slope.mul(&s)).add(&c2.mul(&s).mul(&s)).sub(&c3.mul(&s).mul(&s).mul(&s)),
                    slope.sub(&q(2).mul(&c2).mul(&s)).add(&q(3).mul(&c3).mul(&s).mul(&s)),
                    c2.sub(&q(3).mul(&c3).mul(&s)),
                    c3.clone(),
                ];
                let x = q(len);
                value = value.add(&slope.mul(&x)).add(&c2.mul(&x).mul(&x)).add(&c3.mul(&x).mul(&x).mul(&x));
                slope = slope.add(&a.mul(&x)).add(&b.div(&q(2)).unwrap().mul(&x).mul(&x));
                pieces.push(Piece { start: start.clone(), end: end.clone(), coeffs });
                start = end;
            }
            let p = HamiltonianProfile::new(slope, start, pieces).ok()?;
            Some((p, raw))
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn action_strictly_decreasing((p, _) in profile_strategy(), a in 0i64..1000, b in 0i64..1000) {
        prop_assume!(a != b);
        let span = p.kink().sub(&q(1));
        let at = |k: i64| q(1).add(&span.mul(&r(k, 999)));
        let (x, y) = (at(a.min(b)), at(a.max(b)));
        prop_assume!(y <= *p.kink());
        prop_assert!(action_at(&p, &x).unwrap() > action_at(&p, &y).unwrap());
    }

    #[test]
    fn good_pairs_agree_in_the_window((p, raw) in profile_strategy(), extra in (0i64..5, 1i64..5, 1i64..4),
                                      periods in prop::collection::vec((1i64..40, 1i64..4), 1..6)) {
        // extend p by one more convex piece
        let (a, b, len) = extra;
        let s = p.kink().clone();
        let e = s.add(&q(len));
        let value = p.value(&s);
        let slope = p.slope().clone();
        let (a, b) = (q(a), q(b));
        let c3 = b.div(&q(6)).unwrap();
        let c2 = a.div(&q(2)).unwrap();
        let coeffs = vec![
            value.sub(&slope.mul(&s)).add(&c2.mul(&s).mul(&s)).sub(&c3.mul(&s).mul(&s).mul(&s)),
            slope.sub(&q(2).mul(&c2).mul(&s)).add(&q(3).mul(&c3).mul(&s).mul(&s)),
            c2.sub(&q(3).mul(&c3).mul(&s)),
            c3.clone(),
        ];
        let x = q(len);
        let new_slope = slope.add(&a.mul(&x)).add(&b.div(&q(2)).unwrap().mul(&x).mul(&x));
        let mut pieces = p.pieces().to_vec();
        pieces.push(Piece { start: s, end: e.clone(), coeffs });
        let big = HamiltonianProfile::new(new_slope, e, pieces).unwrap();
        let spec: Vec<Rat> = periods.iter().map(|&(n, d)| r(n, d)).collect();
        match good_pair_check(&p, &big, &spec) {
            Ok(rep) => {
                prop_assert!(rep.good);
                prop_assert!(rep.window_agrees, "{:?} {:?}", raw, rep);
            }
            Err(Error::IrrationalChord(_)) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn rs_index_matches_closed_form(nodes in prop::collection::vec(-30i64..30, 2..7)) {
        // angles in twelfths, times 0, 1, 2, ...
        let path = SymplecticBlockPath::new(vec![Block::Rotation(
            nodes.iter().enumerate().map(|(i, &t)| (q(i as i64), r(t, 12))).collect(),
        )]).unwrap();
        let timed: Vec<(i64, i64)> = nodes.iter().enumerate().map(|(i, &t)| (i as i64, t)).collect();
        let stuck = nodes.windows(2).any(|w| w[0] == w[1] && w[0] % 12 == 0);
        match rs_index(&path) {
            Ok(v) => {
                prop_assert!(!stuck);
                prop_assert_eq!(v.doubled, closed_form_doubled(&timed));
            }
            Err(Error::NonIsolatedCrossing(_)) => prop_assert!(stuck),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn rs_index_additive(a in prop::collection::vec(-30i64..30, 2..5), b in prop::collection::vec(-30i64..30, 2..5),
                         lam in prop::sample::select(vec![-1i64, 2, 3, -5])) {
        let mk = |v: &[i64]| SymplecticBlockPath::new(vec![
            Block::Rotation(v.iter().enumerate().map(|(i, &t)| (q(i as i64), r(t, 12))).collect()),
            Block::Hyperbolic(q(lam)),
        ]).unwrap();
        let pa = mk(&a);
        // b starts where a ends, up to an integer turn
        let mut b = b;
        let off = a[a.len() - 1] - b[0] + 12 * 2;
        for x in b.iter_mut() { *x += off; }
        let pb = mk(&b);
        let (ia, ib) = (rs_index(&pa), rs_index(&pb));
        prop_assume!(ia.is_ok() && ib.is_ok());
        let joined = pa.concat(&pb).unwrap();
        prop_assert_eq!(rs_index(&joined).unwrap(), ia.clone().unwrap() + ib.clone().unwrap());
        let sum = pa.direct_sum(&pb);
        prop_assert_eq!(rs_index(&sum).unwrap(), ia.unwrap() + ib.unwrap());
    }

    #[test]
    fn degree_windows_match_scan(mu in -6i64..7, a in -20i64..20, w in 0i64..15, d in -60i64..60) {
        prop_assume!(mu != 0);
        let b = a + w;
        let dw = degree_windows(mu, a, b, d).unwrap();
        let scan: Vec<i64> = (2..200).filter(|m| a - (m - 2) * mu <= d && d <= b - (m - 2) * mu).collect();
        prop_assert_eq!(&dw.iterates, &scan);
        prop_assert!(dw.iterates.len() as i64 <= (b - a).div_euclid(mu.abs()) + 1);
    }
}
