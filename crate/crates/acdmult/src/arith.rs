//! Exact rational and elementary number-theoretic primitives.
//!
//! Everything is deterministic: rationals are arbitrary-precision and kept in
//! lowest terms, primality is decided by trial division, and the congruence
//! solver reports an unsolvable system as a value rather than an error.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator; zero is `0/1`. Serializes as `"a"` or `"a/b"`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational> {
        if rhs.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn recip(&self) -> Result<Rational> {
        Rational::one().checked_div(self)
    }

    /// `self / m` for an integer modulus; used for "lies in m·R" checks.
    pub fn div_int(&self, m: u64) -> Result<Rational> {
        if m == 0 {
            return Err(Error::ZeroModulus);
        }
        Ok(Rational(&self.0 / BigInt::from(m)))
    }

    pub fn mul_int(&self, m: u64) -> Rational {
        Rational(&self.0 * BigInt::from(m))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let malformed = |detail: &str| Error::shape("rational", format!("{detail}: {s:?}"));
        let mut parts = s.splitn(2, '/');
        let numer = parts
            .next()
            .ok_or_else(|| malformed("empty string"))?
            .trim();
        let numer =
            BigInt::from_str(numer).map_err(|_| malformed("numerator is not an integer"))?;
        match parts.next() {
            None => Ok(Rational::from_integer(numer)),
            Some(denom) => {
                let denom = BigInt::from_str(denom.trim())
                    .map_err(|_| malformed("denominator is not an integer"))?;
                if denom.is_zero() {
                    return Err(malformed("zero denominator"));
                }
                Rational::new(numer, denom)
            }
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Self {
        Rational::from_integer(n)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

macro_rules! rational_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(&self.0 $op &rhs.0)
            }
        }
    };
}

rational_binop!(Add, add, +);
rational_binop!(Sub, sub, -);
rational_binop!(Mul, mul, *);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3] {
        if n == small {
            return true;
        }
        if n.is_multiple_of(small) {
            return false;
        }
    }
    let mut f = 5u64;
    while f.saturating_mul(f) <= n {
        if n.is_multiple_of(f) || n.is_multiple_of(f + 2) {
            return false;
        }
        f += 6;
    }
    true
}

/// Prime factorization `n = ∏ p^e` by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0u32;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn bigint_valuation(x: &BigInt, p: u64) -> i64 {
    debug_assert!(!x.is_zero());
    let p = BigInt::from(p);
    let mut mag = x.abs();
    let mut v = 0i64;
    loop {
        let (q, r) = mag.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        mag = q;
        v += 1;
    }
}

/// The exponent `v` with `x = p^v · u/w`, `p ∤ u`, `p ∤ w`.
pub fn p_adic_valuation(x: &Rational, p: u64) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::UndefinedValuation);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime { p });
    }
    Ok(bigint_valuation(x.numer(), p) - bigint_valuation(x.denom(), p))
}

/// True iff `x != 0` and every prime divisor of `x` lies in `p_set`.
/// `±1` qualify for every set, including the empty one.
pub fn is_p_number(x: &BigInt, p_set: &[u64]) -> bool {
    if x.is_zero() {
        return false;
    }
    let mut mag = x.abs();
    for &p in p_set {
        if p < 2 {
            continue;
        }
        let p = BigInt::from(p);
        loop {
            let (q, r) = mag.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            mag = q;
        }
    }
    mag.is_one()
}

/// True iff `x` is a quotient of two `p_set`-numbers.
pub fn is_p_fraction(x: &Rational, p_set: &[u64]) -> bool {
    !x.is_zero() && is_p_number(x.numer(), p_set) && is_p_number(x.denom(), p_set)
}

fn extended_gcd(a: i128, b: i128) -> (i128, i128) {
    // returns (g, x) with a·x ≡ g (mod b)
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r, old_s)
}

pub(crate) fn mod_inverse_u64(a: u64, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::ZeroModulus);
    }
    if m == 1 {
        return Ok(0);
    }
    let a_red = (a % m) as i128;
    let (g, x) = extended_gcd(a_red, m as i128);
    if g != 1 {
        return Err(Error::NotInvertible {
            a: (a % m) as i64,
            m,
        });
    }
    Ok(x.rem_euclid(m as i128) as u64)
}

/// The residue `x` in `[0, m)` with `a·x ≡ 1 (mod m)`; `0` when `m = 1`.
pub fn mod_inverse(a: i64, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::ZeroModulus);
    }
    let a_red = (a as i128).rem_euclid(m as i128) as u64;
    mod_inverse_u64(a_red, m).map_err(|e| match e {
        Error::NotInvertible { .. } => Error::NotInvertible { a, m },
        other => other,
    })
}

/// Euler's totient by trial-division factorization.
pub fn euler_phi(m: u64) -> u64 {
    if m == 0 {
        return 0;
    }
    let mut phi = m;
    for (p, _) in factorize(m) {
        phi = phi / p * (p - 1);
    }
    phi
}

/// Outcome of a simultaneous-congruence solve. Unsolvable systems are a
/// normal value: downstream membership tests treat them as "not a member".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrtOutcome {
    Solved { residue: u64, modulus: u64 },
    Unsolvable,
}

impl CrtOutcome {
    pub fn solution(&self) -> Option<(u64, u64)> {
        match self {
            CrtOutcome::Solved { residue, modulus } => Some((*residue, *modulus)),
            CrtOutcome::Unsolvable => None,
        }
    }
}

/// Solves `x ≡ r_i (mod m_i)` for all pairs `(r_i, m_i)`, returning the
/// residue modulo `lcm(m_i)` or `Unsolvable` on conflicting congruences.
pub fn crt_solve(pairs: &[(u64, u64)]) -> Result<CrtOutcome> {
    let mut r: u128 = 0;
    let mut m: u128 = 1;
    for &(ri, mi) in pairs {
        if mi == 0 {
            return Err(Error::ZeroModulus);
        }
        let ri = (ri % mi) as u128;
        let mi = mi as u128;
        let g = m.gcd(&mi);
        let diff = ri as i128 - r as i128;
        if diff.rem_euclid(g as i128) != 0 {
            return Ok(CrtOutcome::Unsolvable);
        }
        let lcm = m / g * mi;
        if lcm > u64::MAX as u128 {
            return Err(Error::Overflow("crt modulus"));
        }
        let mid = mi / g;
        if mid > 1 {
            let step = diff.div_euclid(g as i128).rem_euclid(mid as i128) as u128;
            let inv = mod_inverse_u64(((m / g) % mid) as u64, mid as u64)? as u128;
            let t = step * inv % mid;
            r = (r + m * t) % lcm;
        }
        m = lcm;
    }
    Ok(CrtOutcome::Solved {
        residue: r as u64,
        modulus: m as u64,
    })
}

/// The `count` smallest primes `≡ a (mod d)`, ascending.
pub fn primes_in_progression(a: i64, d: u64, count: usize) -> Result<Vec<u64>> {
    if d == 0 {
        return Err(Error::EmptyProgression { a, d });
    }
    let r = (a as i128).rem_euclid(d as i128) as u64;
    if r.gcd(&d) != 1 {
        return Err(Error::EmptyProgression { a, d });
    }
    let mut x = r;
    while x < 2 {
        x = x
            .checked_add(d)
            .ok_or(Error::Overflow("progression candidate"))?;
    }
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        if is_prime(x) {
            out.push(x);
        }
        x = x
            .checked_add(d)
            .ok_or(Error::Overflow("progression candidate"))?;
    }
    Ok(out)
}

pub(crate) fn bigint_mod_u64(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("mod_floor result fits the modulus")
}

/// `numerator · denominator⁻¹ mod m`, defined when `gcd(denominator, m) = 1`.
pub fn reduce_rational_mod(x: &Rational, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::ZeroModulus);
    }
    if m == 1 {
        return Ok(0);
    }
    let den = bigint_mod_u64(x.denom(), m);
    if den.gcd(&m) != 1 {
        return Err(Error::NotReducible {
            x: x.to_string(),
            m,
        });
    }
    let num = bigint_mod_u64(x.numer(), m);
    let inv = mod_inverse_u64(den, m)?;
    Ok((num as u128 * inv as u128 % m as u128) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(p_adic_valuation(&rat("8"), 2).unwrap(), 3);
        assert_eq!(p_adic_valuation(&rat("9/2"), 2).unwrap(), -1);
        assert_eq!(p_adic_valuation(&rat("15"), 2).unwrap(), 0);
        assert!(matches!(
            p_adic_valuation(&Rational::zero(), 2),
            Err(Error::UndefinedValuation)
        ));
    }

    #[test]
    fn p_number_examples() {
        assert!(is_p_number(&BigInt::from(12), &[2, 3]));
        assert!(is_p_number(&BigInt::from(-1), &[]));
        assert!(!is_p_number(&BigInt::from(10), &[2, 3]));
        assert!(!is_p_number(&BigInt::from(0), &[2, 3]));
    }

    #[test]
    fn p_fraction_examples() {
        assert!(is_p_fraction(&rat("4/3"), &[2, 3]));
        // unit witness used by the ring-isomorphism fixtures: 16 = 2^4
        assert_eq!(factorize(16), vec![(2, 4)]);
        assert!(is_p_fraction(&rat("16"), &[2]));
        assert!(!is_p_fraction(&rat("1/5"), &[2, 3]));
        assert!(!is_p_fraction(&Rational::zero(), &[2]));
    }

    #[test]
    fn mod_inverse_examples() {
        assert_eq!(mod_inverse(2, 5).unwrap(), 3);
        assert_eq!(mod_inverse(3, 5).unwrap(), 2);
        assert_eq!(mod_inverse(7, 1).unwrap(), 0);
        assert_eq!(mod_inverse(-3, 5).unwrap(), 3);
        assert!(matches!(
            mod_inverse(4, 6),
            Err(Error::NotInvertible { a: 4, m: 6 })
        ));
    }

    #[test]
    fn euler_phi_examples() {
        assert_eq!(euler_phi(7), 6);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(36), 12);
    }

    /// Exhaustive-search oracle for small congruence systems.
    fn crt_brute(pairs: &[(u64, u64)]) -> Option<(u64, u64)> {
        let lcm = pairs.iter().fold(1u64, |acc, &(_, m)| acc.lcm(&m));
        (0..lcm)
            .find(|x| pairs.iter().all(|&(r, m)| x % m == r % m))
            .map(|x| (x, lcm))
    }

    #[test]
    fn crt_examples() {
        assert_eq!(
            crt_solve(&[(3, 5), (1, 5)]).unwrap(),
            CrtOutcome::Unsolvable
        );
        assert_eq!(
            crt_solve(&[(1, 5), (1, 7)]).unwrap().solution(),
            Some((1, 35))
        );
        // value frozen from the exhaustive oracle
        assert_eq!(crt_brute(&[(2, 4), (0, 6)]), Some((6, 12)));
        assert_eq!(
            crt_solve(&[(2, 4), (0, 6)]).unwrap().solution(),
            Some((6, 12))
        );
        assert_eq!(crt_solve(&[]).unwrap().solution(), Some((0, 1)));
    }

    /// Trial-division oracle: scan the progression directly.
    fn progression_brute(a: i64, d: u64, count: usize) -> Vec<u64> {
        let r = (a as i128).rem_euclid(d as i128) as u64;
        let mut x = r.max(2);
        while x % d != r {
            x += 1;
        }
        let mut out = Vec::new();
        while out.len() < count {
            if is_prime(x) {
                out.push(x);
            }
            x += d;
        }
        out
    }

    #[test]
    fn progression_examples() {
        assert_eq!(progression_brute(1, 7, 3), vec![29, 43, 71]);
        assert_eq!(primes_in_progression(1, 7, 3).unwrap(), vec![29, 43, 71]);
        assert_eq!(progression_brute(1, 5, 2), vec![11, 31]);
        assert_eq!(primes_in_progression(1, 5, 2).unwrap(), vec![11, 31]);
        assert!(matches!(
            primes_in_progression(2, 4, 1),
            Err(Error::EmptyProgression { .. })
        ));
        assert_eq!(primes_in_progression(0, 1, 4).unwrap(), vec![2, 3, 5, 7]);
    }

    #[test]
    fn reduce_examples() {
        // 9/2 mod 5: 2·2 = 4 ≡ 9 (mod 5)
        assert_eq!(reduce_rational_mod(&rat("9/2"), 5).unwrap(), 2);
        assert_eq!(reduce_rational_mod(&rat("7"), 5).unwrap(), 2);
        assert!(matches!(
            reduce_rational_mod(&rat("1/5"), 5),
            Err(Error::NotReducible { .. })
        ));
        assert_eq!(reduce_rational_mod(&rat("-3"), 5).unwrap(), 2);
    }

    #[test]
    fn rational_parse_and_display() {
        assert_eq!(rat("-9/2").to_string(), "-9/2");
        assert_eq!(rat("4/2").to_string(), "2");
        assert_eq!(rat("0").to_string(), "0");
        assert_eq!(rat("-0/7").to_string(), "0");
        assert_eq!(rat("3/-6").to_string(), "-1/2");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("a".parse::<Rational>().is_err());
    }

    proptest! {
        #[test]
        fn valuation_is_additive(
            an in -200i64..200, ad in 1i64..200,
            bn in -200i64..200, bd in 1i64..200,
            pi in 0usize..4,
        ) {
            let p = [2u64, 3, 5, 7][pi];
            prop_assume!(an != 0 && bn != 0);
            let a = Rational::new(an, ad).unwrap();
            let b = Rational::new(bn, bd).unwrap();
            let prod = &a * &b;
            prop_assert_eq!(
                p_adic_valuation(&prod, p).unwrap(),
                p_adic_valuation(&a, p).unwrap() + p_adic_valuation(&b, p).unwrap()
            );
        }

        #[test]
        fn mod_inverse_is_inverse(a in 1u64..5000, m in 1u64..5000) {
            prop_assume!(a.gcd(&m) == 1);
            let inv = mod_inverse(a as i64, m).unwrap();
            prop_assert_eq!((a as u128 * inv as u128) % m as u128, (1 % m) as u128);
        }

        #[test]
        fn crt_agrees_with_brute_force(pairs in proptest::collection::vec((0u64..30, 1u64..30), 0..4)) {
            let lcm = pairs.iter().fold(1u64, |acc, &(_, m)| acc.lcm(&m));
            prop_assume!(lcm <= 10_000);
            let got = crt_solve(&pairs).unwrap().solution();
            let want = crt_brute(&pairs);
            prop_assert_eq!(got, want);
        }

        #[test]
        fn progression_has_no_gaps(a in 1u64..40, d in 1u64..40, count in 1usize..5) {
            prop_assume!(a.gcd(&d) == 1);
            let out = primes_in_progression(a as i64, d, count).unwrap();
            prop_assert_eq!(out.len(), count);
            let last = *out.last().unwrap();
            // every prime ≡ a (mod d) up to the largest output is reported
            let expected: Vec<u64> = (2..=last).filter(|&x| x % d == a % d && is_prime(x)).collect();
            prop_assert_eq!(out, expected);
        }

        #[test]
        fn p_fraction_iff_valuations_vanish_off_p(
            n in -400i64..400, d in 1i64..400,
        ) {
            prop_assume!(n != 0);
            let x = Rational::new(n, d).unwrap();
            let p_set = [2u64, 5];
            let claim = is_p_fraction(&x, &p_set);
            let by_valuation = [3u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61,
                67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149,
                151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229, 233,
                239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311, 313, 317, 331,
                337, 347, 349, 353, 359, 367, 373, 379, 383, 389, 397]
                .iter()
                .all(|&p| p_adic_valuation(&x, p).unwrap() == 0);
            prop_assert_eq!(claim, by_valuation);
        }

        #[test]
        fn rational_string_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let x = Rational::new(n, d).unwrap();
            let s = x.to_string();
            let back: Rational = s.parse().unwrap();
            prop_assert_eq!(&back, &x);
            prop_assert_eq!(back.to_string(), s);
        }
    }
}
