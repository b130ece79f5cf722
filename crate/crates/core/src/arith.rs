//! Exact integer and rational arithmetic: p-adic valuations, quadratic
//! residues, primality, CRT and deterministic prime search.
//!
//! Primes handled here are witness primes and sampling primes, all far below
//! 2^64, so they are passed around as `u64`. Values that grow without bound
//! (discriminants, `F_n`, CRT solutions) are `BigInt`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Reduced fraction with positive denominator. Zero is `0/1`.
pub type Rational = BigRational;

/// Default upper bound for prime searches.
pub const DEFAULT_PRIME_CAP: u64 = 1_000_000;

/// Number of Miller-Rabin rounds for inputs beyond 64 bits.
pub const PROBABLE_PRIME_ROUNDS: usize = 64;

/// A p-adic valuation. `Infinite` is reserved for the valuation of zero and
/// deliberately does not convert to an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("+inf"),
        }
    }
}

/// Valuation of a nonzero integer magnitude; `p` is assumed prime.
pub(crate) fn val_uint(n: &BigUint, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let mut v = 0;
    let mut m = n.clone();
    // Strip p^8 at a time first; valuations of F_n-sized values can be large.
    let chunk = BigUint::from(p).pow(8);
    loop {
        let (q, r) = m.div_rem(&chunk);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 8;
    }
    loop {
        let (q, r) = m.div_rem(&BigUint::from(p));
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 1;
    }
    v
}

/// Valuation of an integer; `p` is assumed prime.
pub(crate) fn val_int_unchecked(n: &BigInt, p: u64) -> Valuation {
    if n.is_zero() {
        Valuation::Infinite
    } else {
        Valuation::Finite(val_uint(n.magnitude(), p))
    }
}

pub(crate) fn val_unchecked(q: &Rational, p: u64) -> Valuation {
    if q.is_zero() {
        return Valuation::Infinite;
    }
    let num = val_uint(q.numer().magnitude(), p);
    let den = val_uint(q.denom().magnitude(), p);
    Valuation::Finite(num - den)
}

/// Exact p-adic valuation of a rational number.
pub fn val(q: &Rational, p: u64) -> Result<Valuation> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(BigInt::from(p)));
    }
    Ok(val_unchecked(q, p))
}

pub fn val_int(n: &BigInt, p: u64) -> Result<Valuation> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(BigInt::from(p)));
    }
    Ok(val_int_unchecked(n, p))
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    let g = (a as i128).extended_gcd(&(p as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(p as i128) as u64)
}

/// Non-negative residue of an integer modulo `m`.
pub fn mod_u64(n: &BigInt, m: u64) -> u64 {
    let r = (n.magnitude() % m).to_u64().expect("residue below modulus");
    if n.sign() == Sign::Minus && r != 0 {
        m - r
    } else {
        r
    }
}

/// Image of a rational in `Z/pZ`, or `None` when `p` divides the denominator.
pub fn reduce_mod(q: &Rational, p: u64) -> Option<u64> {
    let den = mod_u64(q.denom(), p);
    let inv = inv_mod(den, p)?;
    Some(mul_mod(mod_u64(q.numer(), p), inv, p))
}

/// Legendre symbol `(a | p)` by Euler's criterion.
pub fn legendre(a: &BigInt, p: u64) -> Result<i8> {
    if p == 2 || !is_prime_u64(p) {
        return Err(Error::NotOddPrime(BigInt::from(p)));
    }
    Ok(legendre_unchecked(mod_u64(a, p), p))
}

pub(crate) fn legendre_unchecked(r: u64, p: u64) -> i8 {
    if r % p == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn miller_rabin_u64(n: u64, a: u64) -> bool {
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..r {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality for 64-bit inputs (the first twelve prime bases
/// are a proven witness set below 3.3 * 10^24).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    SMALL_PRIMES.iter().all(|&a| miller_rabin_u64(n, a))
}

/// Evidence level behind a primality verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Primality {
    Composite,
    Prime,
    ProbablePrime,
}

fn miller_rabin_big(n: &BigUint, a: &BigUint) -> bool {
    let one = BigUint::one();
    let n1 = n - &one;
    let r = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> r;
    let mut x = a.modpow(&d, n);
    if x == one || x == n1 {
        return true;
    }
    for _ in 1..r {
        x = x.modpow(&BigUint::from(2u32), n);
        if x == n1 {
            return true;
        }
    }
    false
}

/// Primality with its evidence level: deterministic below 2^64, otherwise
/// trial division plus `PROBABLE_PRIME_ROUNDS` Miller-Rabin rounds with
/// seeded random bases.
pub fn primality(n: &BigInt) -> Primality {
    if n.sign() != Sign::Plus {
        return Primality::Composite;
    }
    if let Some(small) = n.to_u64() {
        return if is_prime_u64(small) {
            Primality::Prime
        } else {
            Primality::Composite
        };
    }
    let n = n.magnitude();
    for p in primes_up_to(1000) {
        if (n % p).is_zero() {
            return Primality::Composite;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x6f64_6f6e_69);
    let two = BigUint::from(2u32);
    let upper = n - &two;
    for _ in 0..PROBABLE_PRIME_ROUNDS {
        let a = rng.gen_biguint_range(&two, &upper);
        if !miller_rabin_big(n, &a) {
            return Primality::Composite;
        }
    }
    Primality::ProbablePrime
}

pub fn is_prime(n: &BigInt) -> bool {
    primality(n) != Primality::Composite
}

/// Smallest prime `p` in `[start, cap]` with `pred(p)`.
pub fn next_prime_where<F>(start: u64, cap: u64, mut pred: F) -> Result<u64>
where
    F: FnMut(u64) -> bool,
{
    let mut n = start.max(2);
    while n <= cap {
        if is_prime_u64(n) && pred(n) {
            return Ok(n);
        }
        n += 1;
    }
    Err(Error::SearchCapExceeded { start, cap })
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(k, &is_p)| is_p.then_some(k as u64))
        .collect()
}

/// Smallest non-negative `x` with `x = r_i (mod m_i)` for every pair.
pub fn crt(pairs: &[(BigInt, BigInt)]) -> Result<BigInt> {
    for (_, m) in pairs {
        if !m.is_positive() {
            return Err(Error::NonPositiveModulus(m.clone()));
        }
    }
    for (i, (_, a)) in pairs.iter().enumerate() {
        for (_, b) in &pairs[i + 1..] {
            if !a.gcd(b).is_one() {
                return Err(Error::NonCoprimeModuli(a.clone(), b.clone()));
            }
        }
    }
    let mut x = BigInt::zero();
    let mut modulus = BigInt::one();
    for (r, m) in pairs {
        // x + modulus * k = r (mod m)
        let g = modulus.extended_gcd(m);
        let inv = g.x.mod_floor(m);
        let k = ((r - &x) * inv).mod_floor(m);
        x += &modulus * k;
        modulus *= m;
        x = x.mod_floor(&modulus);
    }
    Ok(x)
}

pub fn is_square_int(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// True iff `q` is the square of a rational.
pub fn is_square(q: &Rational) -> bool {
    is_square_int(q.numer()) && is_square_int(q.denom())
}

pub fn bits(n: &BigInt) -> u64 {
    n.bits()
}

pub fn rational_bits(q: &Rational) -> u64 {
    q.numer().bits() + q.denom().bits()
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats as `num/den`.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn parse_int(s: &str) -> Result<BigInt> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
}

/// Serde adapter: integers as decimal strings.
pub mod serde_int {
    use num_bigint::BigInt;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_int(&s).map_err(D::Error::custom)
    }
}

/// Serde adapter: small integers (degrees, primes) as decimal strings.
pub mod serde_u64 {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        let s = String::deserialize(d)?;
        s.trim()
            .parse()
            .map_err(|_| D::Error::custom(format!("not an unsigned integer: {s:?}")))
    }
}

/// Serde adapter: `u32` as a decimal string.
pub mod serde_u32 {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &u32, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u32, D::Error> {
        let s = String::deserialize(d)?;
        s.trim()
            .parse()
            .map_err(|_| D::Error::custom(format!("not an unsigned integer: {s:?}")))
    }
}

/// Serde adapter: rationals as `"num/den"` strings.
pub mod serde_rational {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).map_err(D::Error::custom)
    }
}
