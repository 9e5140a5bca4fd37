//! Exact coefficient arithmetic.
//!
//! Three coefficient rings are supported: the rationals (arbitrary precision,
//! always in lowest terms), the integers, and the prime fields `Z/p`. A
//! [`Scalar`] remembers which ring it belongs to; mixing rings is a contract
//! violation reported by the `checked_*` methods. The operator impls assume
//! operands were validated at a container boundary and panic on mixed rings.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// A coefficient ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    Rationals,
    Integers,
    /// The prime field `Z/p`; construct through [`Ring::zmod`].
    IntegersMod(u64),
}

impl Ring {
    /// `Z/p`, rejecting composite or trivial moduli.
    pub fn zmod(p: u64) -> Result<Ring> {
        if is_prime(p) {
            Ok(Ring::IntegersMod(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Ring::Rationals | Ring::Integers => 0,
            Ring::IntegersMod(p) => p,
        }
    }

    /// True when every nonzero element is invertible.
    pub fn is_field(self) -> bool {
        !matches!(self, Ring::Integers)
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Ring::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Ring::Integers => Scalar::Integer(BigInt::from(n)),
            Ring::IntegersMod(p) => Scalar::Residue {
                value: n.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    /// The image of `num / den` in this ring, when it exists.
    pub fn from_ratio(self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        let invalid = |reason: &str| Error::InvalidScalar {
            text: format!("{num}/{den}"),
            ring: self,
            reason: reason.to_string(),
        };
        if den.is_zero() {
            return Err(invalid("zero denominator"));
        }
        match self {
            Ring::Rationals => Ok(Scalar::Rational(BigRational::new(num.clone(), den.clone()))),
            Ring::Integers => {
                if (num % den).is_zero() {
                    Ok(Scalar::Integer(num / den))
                } else {
                    Err(invalid("not an integer"))
                }
            }
            Ring::IntegersMod(p) => {
                let pb = BigInt::from(p);
                let n = residue_of(num, &pb);
                let d = residue_of(den, &pb);
                if d == 0 {
                    return Err(invalid("denominator is divisible by the modulus"));
                }
                Ok(Scalar::Residue {
                    value: mul_mod(n, inv_mod(d, p), p),
                    modulus: p,
                })
            }
        }
    }

    /// Parses the external scalar syntax: `p/q` or `n` for rationals, decimal
    /// integers, and `r mod p` (or a bare integer or fraction, reduced) for
    /// `Z/p`.
    pub fn parse_scalar(self, text: &str) -> Result<Scalar> {
        let trimmed = text.trim();
        let invalid = |reason: &str| Error::InvalidScalar {
            text: text.to_string(),
            ring: self,
            reason: reason.to_string(),
        };
        let body = match (self, trimmed.split_once(" mod ")) {
            (Ring::IntegersMod(p), Some((value, modulus))) => {
                let m: u64 = modulus.trim().parse().map_err(|_| invalid("bad modulus"))?;
                if m != p {
                    return Err(invalid("modulus does not match the ring"));
                }
                value.trim()
            }
            (_, Some(_)) => return Err(invalid("residue syntax outside Z/p")),
            (_, None) => trimmed,
        };
        let (num, den) = match body.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (body, "1"),
        };
        let num = BigInt::from_str(num).map_err(|_| invalid("bad numerator"))?;
        let den = BigInt::from_str(den).map_err(|_| invalid("bad denominator"))?;
        self.from_ratio(&num, &den)
    }

    /// A random coefficient: numerators in `[-9, 9]` with denominators in
    /// `[1, 4]` over the rationals, `[-9, 9]` over the integers, and uniform
    /// residues over `Z/p`.
    pub fn random_scalar<R: Rng + ?Sized>(self, rng: &mut R) -> Scalar {
        match self {
            Ring::Rationals => {
                let num = rng.random_range(-9i64..=9);
                let den = rng.random_range(1i64..=4);
                Scalar::Rational(BigRational::new(num.into(), den.into()))
            }
            Ring::Integers => Scalar::Integer(rng.random_range(-9i64..=9).into()),
            Ring::IntegersMod(p) => Scalar::Residue {
                value: rng.random_range(0..p),
                modulus: p,
            },
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(self, rng: &mut R) -> Scalar {
        loop {
            let s = self.random_scalar(rng);
            if !s.is_zero() {
                return s;
            }
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Rationals => f.write_str("q"),
            Ring::Integers => f.write_str("z"),
            Ring::IntegersMod(p) => write!(f, "zmod:{p}"),
        }
    }
}

impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Ring> {
        match s.trim() {
            "q" | "Q" => Ok(Ring::Rationals),
            "z" | "Z" => Ok(Ring::Integers),
            other => {
                let p = other
                    .strip_prefix("zmod:")
                    .or_else(|| other.strip_prefix("zmod"))
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| Error::InvalidRing(s.to_string()))?;
                Ring::zmod(p)
            }
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2u64;
    while k.saturating_mul(k) <= p {
        if p % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

fn residue_of(n: &BigInt, p: &BigInt) -> u64 {
    let r = ((n % p) + p) % p;
    r.to_u64().expect("residue fits in u64")
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2)
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    result
}

/// An element of one of the supported coefficient rings.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Integer(BigInt),
    /// Canonical residue `value` in `[0, modulus)`.
    Residue { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn ring(&self) -> Ring {
        match self {
            Scalar::Rational(_) => Ring::Rationals,
            Scalar::Integer(_) => Ring::Integers,
            Scalar::Residue { modulus, .. } => Ring::IntegersMod(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Integer(n) => n.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Integer(n) => n.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    fn same_ring(&self, other: &Scalar) -> Result<()> {
        if self.ring() == other.ring() {
            Ok(())
        } else {
            Err(Error::MixedRings(self.ring(), other.ring()))
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        self.same_ring(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.same_ring(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.same_ring(other)?;
        Ok(self * other)
    }

    /// Multiplicative inverse, when one exists in the ring.
    pub fn inverse(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match self {
            Scalar::Rational(q) => Some(Scalar::Rational(q.recip())),
            Scalar::Integer(n) if n.abs().is_one() => Some(self.clone()),
            Scalar::Integer(_) => None,
            Scalar::Residue { value, modulus } => Some(Scalar::Residue {
                value: inv_mod(*value, *modulus),
                modulus: *modulus,
            }),
        }
    }

    /// Multiplies in place by a sign.
    pub fn apply_sign(self, sign: Sign) -> Scalar {
        match sign {
            Sign::Plus => self,
            Sign::Minus => -self,
        }
    }

    /// The value as a rational number; residues map to their canonical
    /// representative.
    pub fn to_rational(&self) -> BigRational {
        match self {
            Scalar::Rational(q) => q.clone(),
            Scalar::Integer(n) => BigRational::from_integer(n.clone()),
            Scalar::Residue { value, .. } => BigRational::from_integer(BigInt::from(*value)),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) if q.denom().is_one() => write!(f, "{}", q.numer()),
            Scalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::Integer(n) => write!(f, "{n}"),
            Scalar::Residue { value, modulus } => write!(f, "{value} mod {modulus}"),
        }
    }
}

fn mixed(a: &Scalar, b: &Scalar) -> ! {
    panic!("{}", Error::MixedRings(a.ring(), b.ring()))
}

impl Add for &Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Integer(a), Scalar::Integer(b)) => Scalar::Integer(a + b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q })
                if p == q =>
            {
                Scalar::Residue {
                    value: (a + b) % p,
                    modulus: *p,
                }
            }
            _ => mixed(self, rhs),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs.clone())
    }
}

impl Mul for &Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Integer(a), Scalar::Integer(b)) => Scalar::Integer(a * b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q })
                if p == q =>
            {
                Scalar::Residue {
                    value: mul_mod(*a, *b, *p),
                    modulus: *p,
                }
            }
            _ => mixed(self, rhs),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Integer(n) => Scalar::Integer(-n),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: (modulus - value) % modulus,
                modulus,
            },
        }
    }
}

impl Scalar {
    /// `self += a * b` without intermediate clones where possible.
    pub fn add_product(&mut self, a: &Scalar, b: &Scalar) {
        match (&mut *self, a, b) {
            (Scalar::Rational(acc), Scalar::Rational(x), Scalar::Rational(y)) => {
                *acc += x * y;
            }
            (Scalar::Integer(acc), Scalar::Integer(x), Scalar::Integer(y)) => {
                *acc += x * y;
            }
            (
                Scalar::Residue { value, modulus },
                Scalar::Residue { value: x, .. },
                Scalar::Residue { value: y, .. },
            ) => {
                *value = (*value + mul_mod(*x, *y, *modulus)) % *modulus;
            }
            _ => {
                let product = a * b;
                *self = &*self + &product;
            }
        }
    }
}

/// A sign `±1`, kept symbolic until it meets a ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `(-1)^n`.
    pub fn power(n: i64) -> Sign {
        if n.rem_euclid(2) == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// `(-1)^(a*b)`.
    pub fn koszul(a: i64, b: i64) -> Sign {
        if a.rem_euclid(2) == 1 && b.rem_euclid(2) == 1 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    pub fn to_scalar(self, ring: Ring) -> Scalar {
        match self {
            Sign::Plus => ring.one(),
            Sign::Minus => ring.from_i64(-1),
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

/// The Koszul sign `(-1)^(a*b)` as a unit of `ring`. Degrees may be negative
/// (the desuspended degree of a degree-0 element is -1).
pub fn koszul_sign(ring: Ring, a: i64, b: i64) -> Scalar {
    Sign::koszul(a, b).to_scalar(ring)
}

/// Basis keys that carry a degree.
pub trait Graded {
    fn degree(&self) -> usize;

    /// The desuspended degree `degree - 1`.
    fn desusp(&self) -> i64 {
        self.degree() as i64 - 1
    }
}

/// A formal linear combination of basis keys of one fixed degree, with no
/// stored zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinComb<B: Ord> {
    ring: Ring,
    degree: usize,
    terms: BTreeMap<B, Scalar>,
}

impl<B: Ord + Clone + Graded> LinComb<B> {
    pub fn zero(ring: Ring, degree: usize) -> Self {
        LinComb {
            ring,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// `coeff * key`; the degree is taken from the key.
    pub fn term(ring: Ring, key: B, coeff: Scalar) -> Result<Self> {
        let mut out = LinComb::zero(ring, key.degree());
        out.add_term(key, coeff)?;
        Ok(out)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&B, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: &B) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// Adds `coeff * key`, checking ring and degree.
    pub fn add_term(&mut self, key: B, coeff: Scalar) -> Result<()> {
        if coeff.ring() != self.ring {
            return Err(Error::MixedRings(self.ring, coeff.ring()));
        }
        if key.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: key.degree(),
            });
        }
        self.add_term_unchecked(key, coeff);
        Ok(())
    }

    pub(crate) fn add_term_unchecked(&mut self, key: B, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = &*slot.get() + &coeff;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::MixedRings(self.ring, other.ring));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        let mut out = self.clone();
        for (key, coeff) in &other.terms {
            out.add_term_unchecked(key.clone(), coeff.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> Result<Self> {
        if s.ring() != self.ring {
            return Err(Error::MixedRings(self.ring, s.ring()));
        }
        let mut out = LinComb::zero(self.ring, self.degree);
        if s.is_zero() {
            return Ok(out);
        }
        for (key, coeff) in &self.terms {
            out.add_term_unchecked(key.clone(), coeff * s);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        LinComb {
            ring: self.ring,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), -c.clone()))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Scalar {
        Ring::Rationals
            .from_ratio(&BigInt::from(n), &BigInt::from(d))
            .unwrap()
    }

    #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
    struct Key(&'static str, usize);

    impl Graded for Key {
        fn degree(&self) -> usize {
            self.1
        }
    }

    #[test]
    fn fraction_arithmetic() {
        assert_eq!(q(1, 2).checked_add(&q(1, 3)).unwrap(), q(5, 6));
        assert_eq!(q(2, 4), q(1, 2));
        assert_eq!(q(2, 4).to_string(), "1/2");
        assert_eq!(q(3, -6).to_string(), "-1/2");
        assert_eq!(q(4, 2).to_string(), "2");
    }

    #[test]
    fn modular_arithmetic() {
        let r = Ring::zmod(3).unwrap();
        let two = r.from_i64(2);
        assert_eq!(two.checked_mul(&two).unwrap(), r.one());
        assert_eq!(r.from_i64(-1).to_string(), "2 mod 3");
        assert_eq!(r.parse_scalar("1/2").unwrap(), r.from_i64(2));
        assert_eq!(r.parse_scalar("2 mod 3").unwrap(), r.from_i64(2));
        assert!(r.parse_scalar("2 mod 5").is_err());
    }

    #[test]
    fn mixed_rings_rejected() {
        let a = Ring::Rationals.one();
        let b = Ring::zmod(5).unwrap().one();
        assert_eq!(
            a.checked_add(&b),
            Err(Error::MixedRings(Ring::Rationals, Ring::IntegersMod(5)))
        );
        assert!(a.checked_mul(&Ring::Integers.one()).is_err());
    }

    #[test]
    fn primality_is_checked() {
        assert_eq!(Ring::zmod(4), Err(Error::NotPrime(4)));
        assert_eq!(Ring::zmod(1), Err(Error::NotPrime(1)));
        assert!(Ring::zmod(2).is_ok());
        assert!(Ring::zmod(7919).is_ok());
    }

    #[test]
    fn ring_round_trips_through_text() {
        for ring in [Ring::Rationals, Ring::Integers, Ring::IntegersMod(3)] {
            assert_eq!(ring.to_string().parse::<Ring>().unwrap(), ring);
        }
        assert!("zmod:9".parse::<Ring>().is_err());
        assert!("r".parse::<Ring>().is_err());
    }

    #[test]
    fn integer_ring_rejects_fractions() {
        assert!(Ring::Integers.parse_scalar("1/2").is_err());
        assert_eq!(Ring::Integers.parse_scalar("6/3").unwrap(), Ring::Integers.from_i64(2));
    }

    #[test]
    fn koszul_examples() {
        let r = Ring::Rationals;
        assert_eq!(koszul_sign(r, 1, 1), r.from_i64(-1));
        assert_eq!(koszul_sign(r, 2, 3), r.one());
        // |f| = -1 for degree-0 elements: parity of (-1)*1 is odd
        assert_eq!(koszul_sign(r, -1, 1), r.from_i64(-1));
        assert_eq!(koszul_sign(r, -1, -1), r.from_i64(-1));
        assert_eq!(koszul_sign(r, -1, 0), r.one());
    }

    #[test]
    fn lincomb_examples() {
        let r = Ring::Rationals;
        let t = Key("t", 2);
        let s = Key("s", 2);
        let x = LinComb::term(r, t.clone(), r.from_i64(2)).unwrap();
        let mut y = LinComb::term(r, t.clone(), r.from_i64(3)).unwrap();
        y.add_term(s.clone(), r.one()).unwrap();
        let sum = x.checked_add(&y).unwrap();
        assert_eq!(sum.coefficient(&t), r.from_i64(5));
        assert_eq!(sum.coefficient(&s), r.one());
        assert_eq!(sum.len(), 2);

        let cancel = x.checked_add(&x.scale(&r.from_i64(-1)).unwrap()).unwrap();
        assert!(cancel.is_zero());
        assert_eq!(cancel.degree(), 2);
        assert!(y.scale(&r.zero()).unwrap().is_zero());
        assert_eq!(y.scale(&r.zero()).unwrap().degree(), 2);
    }

    #[test]
    fn lincomb_degree_mismatch() {
        let r = Ring::Rationals;
        let x = LinComb::term(r, Key("a", 1), r.one()).unwrap();
        let y = LinComb::term(r, Key("b", 2), r.one()).unwrap();
        assert_eq!(
            x.checked_add(&y),
            Err(Error::DegreeMismatch {
                expected: 1,
                found: 2
            })
        );
        let mut z = LinComb::zero(r, 3);
        assert!(z.add_term(Key("c", 2), r.one()).is_err());
    }

    fn any_ring() -> impl Strategy<Value = Ring> {
        prop_oneof![
            Just(Ring::Rationals),
            Just(Ring::Integers),
            Just(Ring::IntegersMod(2)),
            Just(Ring::IntegersMod(3)),
            Just(Ring::IntegersMod(5)),
        ]
    }

    fn scalar_in(ring: Ring) -> impl Strategy<Value = Scalar> {
        (-30i64..=30, 1i64..=7).prop_map(move |(n, d)| match ring {
            Ring::Integers => ring.from_i64(n),
            Ring::IntegersMod(p) if d as u64 % p == 0 => ring.from_i64(n),
            _ => ring.from_ratio(&n.into(), &d.into()).unwrap(),
        })
    }

    fn triple() -> impl Strategy<Value = (Scalar, Scalar, Scalar)> {
        any_ring().prop_flat_map(|r| (scalar_in(r), scalar_in(r), scalar_in(r)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn ring_axioms((a, b, c) in triple()) {
            let r = a.ring();
            prop_assert_eq!(&(&(&a + &b) + &c), &(&a + &(&b + &c)));
            prop_assert_eq!(&(&(&a * &b) * &c), &(&a * &(&b * &c)));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &r.zero(), a.clone());
            prop_assert_eq!(&a * &r.one(), a.clone());
            prop_assert!((&a + &(-a.clone())).is_zero());
            let mut acc = a.clone();
            acc.add_product(&b, &c);
            prop_assert_eq!(acc, &a + &(&b * &c));
        }

        #[test]
        fn normalization_is_idempotent(a in any_ring().prop_flat_map(scalar_in)) {
            let reparsed = a.ring().parse_scalar(&a.to_string()).unwrap();
            prop_assert_eq!(&reparsed, &a);
            prop_assert_eq!(reparsed.to_string(), a.to_string());
            if let Scalar::Rational(q) = &a {
                prop_assert!(q.denom().is_positive());
                prop_assert!(num_integer::Integer::gcd(q.numer(), q.denom()).is_one());
            }
            if let Scalar::Residue { value, modulus } = a {
                prop_assert!(value < modulus);
            }
        }

        #[test]
        fn koszul_symmetry_and_periodicity(a in -50i64..50, b in -50i64..50) {
            prop_assert_eq!(Sign::koszul(a, b), Sign::koszul(b, a));
            prop_assert_eq!(Sign::koszul(a + 2, b), Sign::koszul(a, b));
            let expected = if (a * b).rem_euclid(2) == 1 { Sign::Minus } else { Sign::Plus };
            prop_assert_eq!(Sign::koszul(a, b), expected);
        }
    }
}
