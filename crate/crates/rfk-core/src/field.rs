//! Ground fields: the rationals (exact, arbitrary precision) and prime fields.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational number. Small values live in machine words and spill
/// over to big integers on overflow.
#[derive(Clone, Debug)]
pub enum Rat {
    Small(i64, i64),
    Big(BigRational),
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i64
}

impl Rat {
    pub fn zero() -> Rat {
        Rat::Small(0, 1)
    }

    pub fn one() -> Rat {
        Rat::Small(1, 1)
    }

    pub fn from_int(n: i64) -> Rat {
        Rat::Small(n, 1)
    }

    /// Builds num/den in lowest terms. Panics on a zero denominator.
    pub fn new(num: i64, den: i64) -> Rat {
        assert!(den != 0, "zero denominator");
        Rat::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Rat {
        let (mut n, mut d) = (num, den);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = {
            let (mut a, mut b) = (n.unsigned_abs(), d.unsigned_abs());
            while b != 0 {
                let t = a % b;
                a = b;
                b = t;
            }
            a.max(1) as i128
        };
        n /= g;
        d /= g;
        if let (Ok(n64), Ok(d64)) = (i64::try_from(n), i64::try_from(d)) {
            if n64 != i64::MIN {
                return Rat::Small(n64, d64);
            }
        }
        Rat::Big(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_big(r: BigRational) -> Rat {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            if n != i64::MIN {
                return Rat::Small(n, d);
            }
        }
        Rat::Big(r)
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rat::Big(b) => b.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rat::Small(n, _) => *n == 0,
            Rat::Big(b) => b.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Rat::Small(n, d) => *n == 1 && *d == 1,
            Rat::Big(b) => b.is_one(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rat::Small(n, _) => *n < 0,
            Rat::Big(b) => b.is_negative(),
        }
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero() && !self.is_negative()
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rat::Small(n, _) => BigInt::from(*n),
            Rat::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rat::Small(_, d) => BigInt::from(*d),
            Rat::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rat::Small(_, d) => *d == 1,
            Rat::Big(b) => b.is_integer(),
        }
    }

    pub fn floor(&self) -> BigInt {
        self.to_big().floor().to_integer()
    }

    pub fn neg(&self) -> Rat {
        match self {
            Rat::Small(n, d) => Rat::Small(-n, *d),
            Rat::Big(b) => Rat::Big(-b),
        }
    }

    pub fn add(&self, o: &Rat) -> Rat {
        if let (Rat::Small(a, b), Rat::Small(c, d)) = (self, o) {
            if b == d {
                return Rat::from_i128(*a as i128 + *c as i128, *b as i128);
            }
            let n = *a as i128 * *d as i128 + *c as i128 * *b as i128;
            let den = *b as i128 * *d as i128;
            return Rat::from_i128(n, den);
        }
        Rat::from_big(self.to_big() + o.to_big())
    }

    pub fn sub(&self, o: &Rat) -> Rat {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Rat) -> Rat {
        if let (Rat::Small(a, b), Rat::Small(c, d)) = (self, o) {
            if *b == 1 && *d == 1 {
                return Rat::from_i128(*a as i128 * *c as i128, 1);
            }
            let g1 = gcd_i64(*a, *d).max(1);
            let g2 = gcd_i64(*c, *b).max(1);
            let n = (*a / g1) as i128 * (*c / g2) as i128;
            let den = (*b / g2) as i128 * (*d / g1) as i128;
            return Rat::from_i128(n, den);
        }
        Rat::from_big(self.to_big() * o.to_big())
    }

    pub fn inv(&self) -> Option<Rat> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Rat::Small(n, d) => Rat::from_i128(*d as i128, *n as i128),
            Rat::Big(b) => Rat::from_big(b.recip()),
        })
    }

    pub fn div(&self, o: &Rat) -> Option<Rat> {
        o.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, e: u32) -> Rat {
        let mut r = Rat::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn abs(&self) -> Rat {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Reduction mod p; `None` when p divides the denominator.
    pub fn mod_p(&self, p: u64) -> Option<u64> {
        let big_p = BigInt::from(p);
        let n = self.numer().mod_floor(&big_p).to_u64().unwrap();
        let d = self.denom().mod_floor(&big_p).to_u64().unwrap();
        if d == 0 {
            return None;
        }
        Some(mulmod(n, inv_mod(d, p), p))
    }
}

impl PartialEq for Rat {
    fn eq(&self, o: &Rat) -> bool {
        match (self, o) {
            (Rat::Small(a, b), Rat::Small(c, d)) => a == c && b == d,
            _ => self.to_big() == o.to_big(),
        }
    }
}

impl Eq for Rat {}

impl PartialOrd for Rat {
    fn partial_cmp(&self, o: &Rat) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Rat {
    fn cmp(&self, o: &Rat) -> Ordering {
        match (self, o) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&o.to_big()),
        }
    }
}

impl std::hash::Hash for Rat {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.numer().hash(state);
        self.denom().hash(state);
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small(n, 1) => write!(f, "{n}"),
            Rat::Small(n, d) => write!(f, "{n}/{d}"),
            Rat::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Rat::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rat> {
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rat::from_big(BigRational::new(n, d)))
    }
}

impl Serialize for Rat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::from_int(n)
    }
}

pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u64;
    while i.saturating_mul(i) <= p {
        if p % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

/// The ground field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u64),
}

/// A field element. Prime-field residues are kept in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(Rat),
    Fp(u64),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => write!(f, "{r}"),
            Scalar::Fp(v) => write!(f, "{v}"),
        }
    }
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) || p > (1u64 << 62) {
            return Err(Error::Parse(format!("{p} is not a usable prime")));
        }
        Ok(Field::Prime(p))
    }

    /// Parses `q` or `fp:P`.
    pub fn parse(s: &str) -> Result<Field> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(Field::Rational);
        }
        if let Some(p) = s.strip_prefix("fp:") {
            let p: u64 = p
                .parse()
                .map_err(|_| Error::Parse(format!("bad prime in field spec {s:?}")))?;
            return Field::prime(p);
        }
        Err(Error::Parse(format!("unknown field {s:?}, expected q or fp:P")))
    }

    pub fn name(&self) -> String {
        match self {
            Field::Rational => "Q".to_string(),
            Field::Prime(p) => format!("F_{p}"),
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(Rat::zero()),
            Field::Prime(_) => Scalar::Fp(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(Rat::one()),
            Field::Prime(p) => Scalar::Fp(1 % p),
        }
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(Rat::from_int(n)),
            Field::Prime(p) => Scalar::Fp((n as i128).rem_euclid(*p as i128) as u64),
        }
    }

    pub fn sign(&self, odd: bool) -> Scalar {
        if odd {
            self.from_int(-1)
        } else {
            self.one()
        }
    }

    /// Maps a rational into this field. Fails if the denominator vanishes mod p.
    pub fn from_rat(&self, r: &Rat) -> Result<Scalar> {
        match self {
            Field::Rational => Ok(Scalar::Q(r.clone())),
            Field::Prime(p) => r
                .mod_p(*p)
                .map(Scalar::Fp)
                .ok_or_else(|| Error::Parse(format!("{r} has no image in F_{p}"))),
        }
    }

    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let r: Rat = s.parse()?;
        self.from_rat(&r)
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp(v) => *v == 0,
        }
    }

    fn check(&self, a: &Scalar) {
        debug_assert!(matches!(
            (self, a),
            (Field::Rational, Scalar::Q(_)) | (Field::Prime(_), Scalar::Fp(_))
        ));
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.check(a);
        self.check(b);
        match (self, a, b) {
            (Field::Rational, Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x.add(y)),
            (Field::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp((x + y) % p),
            _ => panic!("scalar from a different field"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Field::Rational, Scalar::Q(x)) => Scalar::Q(x.neg()),
            (Field::Prime(p), Scalar::Fp(x)) => Scalar::Fp((p - x) % p),
            _ => panic!("scalar from a different field"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Rational, Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x.mul(y)),
            (Field::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp(mulmod(*x, *y, *p)),
            _ => panic!("scalar from a different field"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        match (self, a) {
            (Field::Rational, Scalar::Q(x)) => x.inv().map(Scalar::Q),
            (Field::Prime(_), Scalar::Fp(0)) => None,
            (Field::Prime(p), Scalar::Fp(x)) => Some(Scalar::Fp(inv_mod(*x, *p))),
            _ => panic!("scalar from a different field"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        self.inv(b).map(|i| self.mul(a, &i))
    }

    /// Canonical text form: `num/den` over Q, the residue over F_p.
    pub fn format(&self, a: &Scalar) -> String {
        a.to_string()
    }
}

/// Internal arithmetic used by the elimination kernels.
pub(crate) trait Arith: Sync {
    type E: Clone + PartialEq + Send + Sync;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn lift(&self, s: &Scalar) -> Self::E;
    fn lower(&self, e: &Self::E) -> Scalar;
}

pub(crate) struct QArith;

impl Arith for QArith {
    type E = Rat;
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a.add(b)
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a.mul(b)
    }
    fn neg(&self, a: &Rat) -> Rat {
        a.neg()
    }
    fn inv(&self, a: &Rat) -> Rat {
        a.inv().expect("inverse of zero")
    }
    fn lift(&self, s: &Scalar) -> Rat {
        match s {
            Scalar::Q(r) => r.clone(),
            Scalar::Fp(_) => panic!("residue in a rational matrix"),
        }
    }
    fn lower(&self, e: &Rat) -> Scalar {
        Scalar::Q(e.clone())
    }
}

pub(crate) struct PArith(pub u64);

impl Arith for PArith {
    type E = u64;
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mulmod(*a, *b, self.0)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.0 - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        inv_mod(*a, self.0)
    }
    fn lift(&self, s: &Scalar) -> u64 {
        match s {
            Scalar::Fp(v) => *v,
            Scalar::Q(_) => panic!("rational in a prime-field matrix"),
        }
    }
    fn lower(&self, e: &u64) -> Scalar {
        Scalar::Fp(*e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let r = Rat::new(4, -6);
        assert_eq!(r, Rat::Small(-2, 3));
        assert_eq!(r.to_string(), "-2/3");
        assert_eq!("6/-4".parse::<Rat>().unwrap(), Rat::new(-3, 2));
    }

    #[test]
    fn overflow_spills_to_big() {
        let a = Rat::from_int(i64::MAX);
        let b = a.mul(&a);
        assert!(matches!(b, Rat::Big(_)));
        let back = b.div(&a).unwrap();
        assert_eq!(back, a);
        assert!(matches!(back, Rat::Small(..)));
    }

    #[test]
    fn prime_field_ops() {
        let f = Field::prime(5).unwrap();
        let a = f.from_int(3);
        assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
        assert_eq!(f.from_int(-1), Scalar::Fp(4));
        assert_eq!(f.from_rat(&Rat::new(1, 2)).unwrap(), Scalar::Fp(3));
        assert!(f.from_rat(&Rat::new(1, 5)).is_err());
        assert!(Field::prime(6).is_err());
    }

    #[test]
    fn field_parse() {
        assert_eq!(Field::parse("q").unwrap(), Field::Rational);
        assert_eq!(Field::parse("fp:7").unwrap(), Field::Prime(7));
        assert!(Field::parse("fp:8").is_err());
        assert!(Field::parse("r").is_err());
    }
}
