//! Radial Hamiltonian profiles, chord radii and actions, good pairs, the
//! Robbin–Salamon index of block-diagonal symplectic paths, and the degree
//! windows bounding which iterates can land in a fixed degree.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Rat;

/// Polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Poly(pub Vec<Rat>);

impl Poly {
    pub fn new(mut c: Vec<Rat>) -> Poly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly(c)
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.0.iter().rev().fold(Rat::zero(), |acc, c| acc.mul(x).add(c))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(&Rat::from_int(i as i64)))
                .collect(),
        )
    }
}

/// One polynomial piece of the convex part of a profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub start: Rat,
    pub end: Rat,
    pub coeffs: Vec<Rat>,
}

impl Piece {
    fn poly(&self) -> Poly {
        Poly::new(self.coeffs.clone())
    }
}

/// Radial profile h on [1, ∞): piecewise polynomial (degree ≤ 3 per piece)
/// and strictly convex on [1, r_ν], linear of slope ν beyond.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HamiltonianProfile {
    nu: Rat,
    r_nu: Rat,
    pieces: Vec<Piece>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileFile {
    nu: Rat,
    r_nu: Rat,
    piece: Vec<Piece>,
}

/// Sign of a linear function on an open interval, given endpoint values.
fn linear_positive_inside(a: &Rat, b: &Rat) -> bool {
    !a.is_negative() && !b.is_negative() && !(a.is_zero() && b.is_zero())
}

impl HamiltonianProfile {
    pub fn new(nu: Rat, r_nu: Rat, pieces: Vec<Piece>) -> Result<HamiltonianProfile> {
        let bad = |m: String| Err(Error::InvalidProfile(m));
        if r_nu <= Rat::one() {
            return bad(format!("kink radius {} must exceed 1", r_nu));
        }
        if pieces.is_empty() {
            return bad("no pieces".into());
        }
        if pieces[0].start != Rat::one() {
            return bad(format!("first piece starts at {}, expected 1", pieces[0].start));
        }
        if pieces.last().unwrap().end != r_nu {
            return bad(format!("last piece ends at {}, expected {}", pieces.last().unwrap().end, r_nu));
        }
        for (k, p) in pieces.iter().enumerate() {
            if p.start >= p.end {
                return bad(format!("piece {} has empty interval", k));
            }
            if p.poly().degree().unwrap_or(0) > 3 {
                return bad(format!("piece {} has degree above 3", k));
            }
            if k > 0 && pieces[k - 1].end != p.start {
                return bad(format!("gap between pieces {} and {}", k - 1, k));
            }
        }
        for k in 1..pieces.len() {
            let x = &pieces[k].start;
            let (l, r) = (pieces[k - 1].poly(), pieces[k].poly());
            if l.eval(x) != r.eval(x) {
                return bad(format!("h jumps at {}", x));
            }
            if l.derivative().eval(x) != r.derivative().eval(x) {
                return bad(format!("h' jumps at {}", x));
            }
        }
        for (k, p) in pieces.iter().enumerate() {
            let h2 = p.poly().derivative().derivative();
            if !linear_positive_inside(&h2.eval(&p.start), &h2.eval(&p.end)) {
                return bad(format!("h'' is not positive inside piece {}", k));
            }
        }
        let first = pieces[0].poly().derivative();
        if first.eval(&Rat::one()).is_negative() {
            return bad("h'(1) < 0".into());
        }
        let last = pieces.last().unwrap().poly().derivative();
        if last.eval(&r_nu) != nu {
            return bad(format!("h'(r_nu) = {} but slope is {}", last.eval(&r_nu), nu));
        }
        Ok(HamiltonianProfile { nu, r_nu, pieces })
    }

    /// `nu`, `r_nu` and a list of `[[piece]]` tables with `start`, `end` and
    /// `coeffs` (lowest degree first). Rationals are written as strings.
    pub fn from_toml(text: &str) -> Result<HamiltonianProfile> {
        let f: ProfileFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        HamiltonianProfile::new(f.nu, f.r_nu, f.piece)
    }

    /// h(r) = (r − 1)² on [1, 2]: slope 2 with kink at 2.
    pub fn quadratic() -> HamiltonianProfile {
        HamiltonianProfile::new(
            Rat::from_int(2),
            Rat::from_int(2),
            vec![Piece { start: Rat::one(), end: Rat::from_int(2), coeffs: ints(&[1, -2, 1]) }],
        )
        .expect("quadratic profile is valid")
    }

    /// Agrees with [`HamiltonianProfile::quadratic`] on [1, 2] and keeps
    /// bending until the slope reaches 4 at r = 3.
    pub fn quadratic_extended() -> HamiltonianProfile {
        HamiltonianProfile::new(
            Rat::from_int(4),
            Rat::from_int(3),
            vec![
                Piece { start: Rat::one(), end: Rat::from_int(2), coeffs: ints(&[1, -2, 1]) },
                Piece { start: Rat::from_int(2), end: Rat::from_int(3), coeffs: ints(&[1, -2, 1]) },
            ],
        )
        .expect("extended profile is valid")
    }

    pub fn slope(&self) -> &Rat {
        &self.nu
    }

    pub fn kink(&self) -> &Rat {
        &self.r_nu
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    fn piece_at(&self, r: &Rat) -> Option<&Piece> {
        self.pieces.iter().find(|p| *r >= p.start && *r <= p.end)
    }

    pub fn value(&self, r: &Rat) -> Rat {
        match self.piece_at(r) {
            Some(p) => p.poly().eval(r),
            None => {
                let last = self.pieces.last().unwrap();
                last.poly().eval(&self.r_nu).add(&self.nu.mul(&r.sub(&self.r_nu)))
            }
        }
    }

    pub fn derivative(&self, r: &Rat) -> Rat {
        match self.piece_at(r) {
            Some(p) => p.poly().derivative().eval(r),
            None => self.nu.clone(),
        }
    }

    /// True when both profiles coincide on [1, r].
    pub fn agrees_below(&self, other: &HamiltonianProfile, r: &Rat) -> bool {
        let mut cuts: BTreeSet<Rat> = BTreeSet::new();
        cuts.insert(Rat::one());
        cuts.insert(r.clone());
        for p in self.pieces.iter().chain(other.pieces.iter()) {
            for x in [&p.start, &p.end] {
                if *x > Rat::one() && x < r {
                    cuts.insert(x.clone());
                }
            }
        }
        let cuts: Vec<Rat> = cuts.into_iter().collect();
        cuts.windows(2).all(|w| {
            let mid = w[0].add(&w[1]).div(&Rat::from_int(2)).unwrap();
            self.local_poly(&mid) == other.local_poly(&mid)
        })
    }

    fn local_poly(&self, r: &Rat) -> Poly {
        match self.piece_at(r) {
            Some(p) => p.poly(),
            None => {
                let c = self.value(&self.r_nu).sub(&self.nu.mul(&self.r_nu));
                Poly::new(vec![c, self.nu.clone()])
            }
        }
    }

    /// Unique r in [1, r_ν) with h'(r) = t, if any.
    fn solve_slope(&self, t: &Rat) -> Result<Option<Rat>> {
        if *t >= self.nu {
            return Ok(None);
        }
        for p in &self.pieces {
            let d = p.poly().derivative();
            let (lo, hi) = (d.eval(&p.start), d.eval(&p.end));
            if *t < lo || *t >= hi {
                continue;
            }
            let g = Poly::new(
                d.0.iter().enumerate().map(|(i, c)| if i == 0 { c.sub(t) } else { c.clone() }).collect(),
            );
            return root_in(&g, &p.start, &p.end).map(Some).ok_or_else(|| Error::IrrationalChord(t.to_string()));
        }
        Ok(None)
    }
}

fn ints(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| Rat::from_int(x)).collect()
}

fn rational_sqrt(x: &Rat) -> Option<Rat> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    if &sn * &sn == n && &sd * &sd == d {
        Some(Rat::from_big(BigRational::new(sn, sd)))
    } else {
        None
    }
}

/// Rational root of a polynomial of degree ≤ 2 in [lo, hi]; None when the
/// only roots there are irrational.
fn root_in(g: &Poly, lo: &Rat, hi: &Rat) -> Option<Rat> {
    let inside = |r: &Rat| r >= lo && r <= hi;
    match g.degree() {
        Some(1) => {
            let r = g.0[0].neg().div(&g.0[1]).unwrap();
            inside(&r).then_some(r)
        }
        Some(2) => {
            let (c, b, a) = (&g.0[0], &g.0[1], &g.0[2]);
            let disc = b.mul(b).sub(&Rat::from_int(4).mul(a).mul(c));
            let s = rational_sqrt(&disc)?;
            let two_a = a.mul(&Rat::from_int(2));
            [b.neg().add(&s), b.neg().sub(&s)]
                .into_iter()
                .map(|x| x.div(&two_a).unwrap())
                .find(|r| inside(r))
        }
        _ => None,
    }
}

/// A(r) = −r h′(r) + h(r).
pub fn action_at(p: &HamiltonianProfile, r: &Rat) -> Result<Rat> {
    if *r < Rat::one() {
        return Err(Error::InvalidProfile(format!("radius {} below 1", r)));
    }
    Ok(p.value(r).sub(&r.mul(&p.derivative(r))))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chord {
    pub radius: Rat,
    pub period: Rat,
    pub action: Rat,
}

/// Radii where h′ hits a period below the slope, with their actions. Output
/// is sorted by radius.
pub fn chord_radii(p: &HamiltonianProfile, spec: &[Rat]) -> Result<Vec<Chord>> {
    let periods: BTreeSet<&Rat> = spec.iter().collect();
    let mut out = Vec::new();
    for t in periods {
        if !t.is_positive() {
            return Err(Error::InvalidProfile(format!("period {} is not positive", t)));
        }
        if let Some(r) = p.solve_slope(t)? {
            let action = action_at(p, &r)?;
            out.push(Chord { radius: r, period: t.clone(), action });
        }
    }
    out.sort_by(|a, b| a.radius.cmp(&b.radius));
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct GoodPairReport {
    pub good: bool,
    pub reason: Option<String>,
    /// A_μ(r_μ); chords with action strictly above it are compared.
    pub window_low: Rat,
    pub chords_mu: Vec<Chord>,
    pub chords_nu: Vec<Chord>,
    pub window_agrees: bool,
}

impl GoodPairReport {
    pub fn pass(&self) -> bool {
        self.good && self.window_agrees
    }
}

pub fn good_pair_check(mu: &HamiltonianProfile, nu: &HamiltonianProfile, spec: &[Rat]) -> Result<GoodPairReport> {
    let window_low = action_at(mu, &mu.r_nu)?;
    let reason = if mu.nu >= nu.nu {
        Some(format!("slopes {} and {} are not increasing", mu.nu, nu.nu))
    } else if nu.r_nu <= mu.r_nu {
        Some(format!("kink {} does not exceed {}", nu.r_nu, mu.r_nu))
    } else if !mu.agrees_below(nu, &mu.r_nu) {
        Some(format!("profiles differ below {}", mu.r_nu))
    } else {
        None
    };
    if reason.is_some() {
        return Ok(GoodPairReport {
            good: false,
            reason,
            window_low,
            chords_mu: vec![],
            chords_nu: vec![],
            window_agrees: false,
        });
    }
    let keep = |cs: Vec<Chord>| -> Vec<Chord> { cs.into_iter().filter(|c| c.action > window_low).collect() };
    let chords_mu = keep(chord_radii(mu, spec)?);
    let chords_nu = keep(chord_radii(nu, spec)?);
    let window_agrees = chords_mu == chords_nu;
    Ok(GoodPairReport { good: true, reason: None, window_low, chords_mu, chords_nu, window_agrees })
}

/// Periods after one more turn around a T₀-periodic Reeb loop.
pub fn slope_shift(spec: &[Rat], t0: &Rat) -> Vec<Rat> {
    spec.iter().map(|t| t.add(t0)).collect()
}

/// Degree of the concatenated chord: one full loop lowers degree by μ.
pub fn degree_shift(degree: i64, maslov: i64) -> i64 {
    degree - maslov
}

/// Half-integer stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct HalfInt {
    pub doubled: i64,
}

impl HalfInt {
    pub fn from_int(n: i64) -> HalfInt {
        HalfInt { doubled: 2 * n }
    }

    pub fn is_integer(&self) -> bool {
        self.doubled % 2 == 0
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt { doubled: self.doubled + o.doubled }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.doubled / 2)
        } else {
            write!(f, "{}/2", self.doubled)
        }
    }
}

/// 2×2 block of a block-diagonal symplectic path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Block {
    /// t ↦ R(2π θ(t)) with θ linear between the given (t, θ) nodes.
    Rotation(Vec<(Rat, Rat)>),
    /// Constant diag(λ, 1/λ).
    Hyperbolic(Rat),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymplecticBlockPath {
    pub blocks: Vec<Block>,
}

impl SymplecticBlockPath {
    pub fn new(blocks: Vec<Block>) -> Result<SymplecticBlockPath> {
        for (k, b) in blocks.iter().enumerate() {
            match b {
                Block::Rotation(nodes) => {
                    if nodes.len() < 2 {
                        return Err(Error::InvalidOperation(format!("block {} needs two nodes", k)));
                    }
                    if nodes.windows(2).any(|w| w[0].0 >= w[1].0) {
                        return Err(Error::InvalidOperation(format!("block {} times not increasing", k)));
                    }
                }
                Block::Hyperbolic(l) => {
                    if l.is_zero() {
                        return Err(Error::InvalidOperation(format!("block {} is singular", k)));
                    }
                }
            }
        }
        Ok(SymplecticBlockPath { blocks })
    }

    /// Single rotation block with θ linear from `from` to `to` over t ∈ [0, 1].
    pub fn rotation(from: Rat, to: Rat) -> SymplecticBlockPath {
        SymplecticBlockPath { blocks: vec![Block::Rotation(vec![(Rat::zero(), from), (Rat::one(), to)])] }
    }

    pub fn direct_sum(&self, other: &SymplecticBlockPath) -> SymplecticBlockPath {
        let mut blocks = self.blocks.clone();
        blocks.extend(other.blocks.iter().cloned());
        SymplecticBlockPath { blocks }
    }

    /// Runs `self`, then `other`. Rotation angles of `other` are moved by an
    /// integer so the path stays continuous; its times follow on from ours.
    pub fn concat(&self, other: &SymplecticBlockPath) -> Result<SymplecticBlockPath> {
        if self.blocks.len() != other.blocks.len() {
            return Err(Error::ShapeMismatch("block counts differ".into()));
        }
        let mut blocks = Vec::new();
        for (k, (a, b)) in self.blocks.iter().zip(&other.blocks).enumerate() {
            match (a, b) {
                (Block::Rotation(x), Block::Rotation(y)) => {
                    let (t_end, th_end) = x.last().unwrap();
                    let (t_start, th_start) = &y[0];
                    let jump = th_end.sub(th_start);
                    if !jump.is_integer() {
                        return Err(Error::InvalidOperation(format!("block {} endpoints do not match", k)));
                    }
                    let dt = t_end.sub(t_start);
                    let mut nodes = x.clone();
                    nodes.extend(y.iter().skip(1).map(|(t, th)| (t.add(&dt), th.add(&jump))));
                    blocks.push(Block::Rotation(nodes));
                }
                (Block::Hyperbolic(l), Block::Hyperbolic(m)) if l == m => blocks.push(a.clone()),
                _ => return Err(Error::InvalidOperation(format!("block {} endpoints do not match", k))),
            }
        }
        Ok(SymplecticBlockPath { blocks })
    }
}

fn sign(r: &Rat) -> i64 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Doubled contribution of one linear segment θ: a → b. The crossing form
/// of R(2πθ) at θ ∈ ℤ has signature 2·sign(θ′); crossings at the segment
/// ends count half.
fn segment_doubled(a: &Rat, b: &Rat) -> Result<i64> {
    let s = sign(&b.sub(a));
    if s == 0 {
        if a.is_integer() {
            return Err(Error::NonIsolatedCrossing(format!("theta constant at {}", a)));
        }
        return Ok(0);
    }
    let (lo, hi) = if s > 0 { (a, b) } else { (b, a) };
    let mut total = 0i64;
    for end in [lo, hi] {
        if end.is_integer() {
            total += 2 * s;
        }
    }
    // integers strictly inside (lo, hi)
    let first = lo.floor() + BigInt::from(1);
    let mut last = hi.floor();
    if hi.is_integer() {
        last -= BigInt::from(1);
    }
    if last >= first {
        let count: BigInt = &last - &first + BigInt::from(1);
        let count = i64::try_from(count).map_err(|_| Error::InvalidOperation("too many crossings".into()))?;
        total += 4 * s * count;
    }
    Ok(total)
}

pub fn rs_index(path: &SymplecticBlockPath) -> Result<HalfInt> {
    let mut doubled = 0i64;
    for b in &path.blocks {
        match b {
            Block::Rotation(nodes) => {
                for w in nodes.windows(2) {
                    doubled += segment_doubled(&w[0].1, &w[1].1)?;
                }
            }
            Block::Hyperbolic(l) => {
                if l.is_one() {
                    return Err(Error::NonIsolatedCrossing("constant identity block".into()));
                }
            }
        }
    }
    Ok(HalfInt { doubled })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeWindows {
    pub maslov: i64,
    pub low: i64,
    pub high: i64,
    pub degree: i64,
    pub iterates: Vec<i64>,
}

impl DegreeWindows {
    /// ⌊(B − A)/|μ|⌋ + 1, or 0 for an empty window.
    pub fn bound(&self) -> i64 {
        if self.high < self.low {
            0
        } else {
            Integer::div_floor(&(self.high - self.low), &self.maslov.abs()) + 1
        }
    }

    pub fn is_finite(&self) -> bool {
        true
    }
}

/// Every m ≥ 2 with A − (m−2)μ ≤ d ≤ B − (m−2)μ.
pub fn degree_windows(maslov: i64, low: i64, high: i64, degree: i64) -> Result<DegreeWindows> {
    if maslov == 0 {
        return Err(Error::ZeroMaslov);
    }
    let mut iterates = Vec::new();
    if low <= high {
        // A ≤ d + jμ ≤ B with j = m − 2 ≥ 0
        let (x, y) = (BigInt::from(low - degree), BigInt::from(high - degree));
        let m = BigInt::from(maslov);
        let (jlo, jhi) = if maslov > 0 {
            (x.div_ceil(&m), y.div_floor(&m))
        } else {
            (y.div_ceil(&m), x.div_floor(&m))
        };
        let jlo = jlo.max(BigInt::from(0));
        let mut j = jlo;
        while j <= jhi {
            iterates.push(i64::try_from(&j).expect("iterate fits") + 2);
            j += 1;
        }
    }
    Ok(DegreeWindows { maslov, low, high, degree, iterates })
}

/// Reports for the CLI.
pub fn profile_report(p: &HamiltonianProfile, spec: &[Rat]) -> Result<serde_json::Value> {
    let chords = chord_radii(p, spec)?;
    Ok(serde_json::json!({
        "slope": p.nu.to_string(),
        "kink": p.r_nu.to_string(),
        "kink_action": action_at(p, &p.r_nu)?.to_string(),
        "chords": chords.iter().map(|c| serde_json::json!({
            "radius": c.radius.to_string(),
            "period": c.period.to_string(),
            "action": c.action.to_string(),
        })).collect::<Vec<_>>(),
    }))
}
