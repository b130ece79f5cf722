//! Polynomials over `F_p` and their factorization: square-free
//! decomposition, distinct-degree splitting, then Cantor-Zassenhaus
//! equal-degree splitting driven by an explicit seed.

use std::fmt;

use num_bigint::BigUint;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Poly;
use crate::arith::{self, inv_mod, mul_mod};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyModP {
    p: u64,
    coeffs: Vec<u64>,
}

impl PolyModP {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % p).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PolyModP { p, coeffs }
    }

    pub fn from_signed(p: u64, coeffs: &[i64]) -> Self {
        let c = coeffs
            .iter()
            .map(|&c| c.rem_euclid(p as i64) as u64)
            .collect();
        PolyModP::new(p, c)
    }

    /// Reduction of a rational polynomial; `None` if `p` divides a denominator.
    pub fn from_poly(f: &Poly, p: u64) -> Option<Self> {
        let coeffs = f
            .coeffs()
            .iter()
            .map(|c| arith::reduce_mod(c, p))
            .collect::<Option<Vec<_>>>()?;
        Some(PolyModP::new(p, coeffs))
    }

    pub fn zero(p: u64) -> Self {
        PolyModP { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        PolyModP::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        PolyModP::new(p, vec![0, 1])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn monic(&self) -> Self {
        match inv_mod(self.leading(), self.p) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    pub fn scale(&self, c: u64) -> Self {
        let p = self.p;
        PolyModP::new(p, self.coeffs.iter().map(|&a| mul_mod(a, c, p)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + b) % p
            })
            .collect();
        PolyModP::new(p, c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + p - b) % p
            })
            .collect();
        PolyModP::new(p, c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return PolyModP::zero(self.p);
        }
        let p = self.p as u128;
        let mut acc = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % p;
            }
        }
        PolyModP::new(self.p, acc.into_iter().map(|c| c as u64).collect())
    }

    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let p = self.p;
        let dd = divisor.degree();
        if self.coeffs.len() < divisor.coeffs.len() {
            return (PolyModP::zero(p), self.clone());
        }
        let inv = inv_mod(divisor.leading(), p).expect("leading coefficient invertible");
        let mut r = self.coeffs.clone();
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = mul_mod(r[k + dd], inv, p);
            q[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                r[k + j] = (r[k + j] + p - mul_mod(c, b, p)) % p;
            }
        }
        r.truncate(dd);
        (PolyModP::new(p, q), PolyModP::new(p, r))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        PolyModP::new(
            p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
                .collect(),
        )
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
    }

    pub fn mul_mod(&self, other: &Self, modulus: &Self) -> Self {
        self.mul(other).rem(modulus)
    }

    /// `self^e mod modulus` for an arbitrary-size exponent.
    pub fn pow_mod(&self, e: &BigUint, modulus: &Self) -> Self {
        let mut acc = PolyModP::one(self.p).rem(modulus);
        let base = self.rem(modulus);
        for i in (0..e.bits()).rev() {
            acc = acc.mul_mod(&acc, modulus);
            if e.bit(i) {
                acc = acc.mul_mod(&base, modulus);
            }
        }
        acc
    }

    /// `g(self) mod modulus`.
    pub fn compose_mod(g: &Self, inner: &Self, modulus: &Self) -> Self {
        let inner = inner.rem(modulus);
        g.coeffs.iter().rev().fold(PolyModP::zero(g.p), |acc, &c| {
            acc.mul_mod(&inner, modulus).add(&PolyModP::new(g.p, vec![c]))
        })
    }

    /// `f(g(x))`
    pub fn compose(f: &Self, g: &Self) -> Self {
        f.coeffs.iter().rev().fold(PolyModP::zero(f.p), |acc, &c| {
            acc.mul(g).add(&PolyModP::new(f.p, vec![c]))
        })
    }

    /// Only meaningful when every exponent is a multiple of `p`.
    fn pth_root(&self) -> Self {
        let p = self.p as usize;
        PolyModP::new(
            self.p,
            self.coeffs.iter().step_by(p).copied().collect(),
        )
    }
}

impl fmt::Display for PolyModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => f.write_str("x")?,
                (1, _) => write!(f, "{c}x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{c}x^{i}")?,
            }
        }
        write!(f, " (mod {})", self.p)
    }
}

/// Square-free decomposition of a monic polynomial: pairs `(g, k)` with
/// pairwise coprime square-free `g` and `f = ∏ g^k`.
pub fn square_free(f: &PolyModP) -> Vec<(PolyModP, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_rem(&c).0.monic();
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_rem(&y).0.monic();
        if fac.degree() > 0 {
            out.push((fac, i));
        }
        w = y;
        c = c.div_rem(&w).0.monic();
        i += 1;
    }
    if c.degree() > 0 {
        let root = c.pth_root();
        for (g, k) in square_free(&root) {
            out.push((g, k * p as usize));
        }
    }
    out
}

/// Distinct-degree splitting of a monic square-free polynomial into
/// `(product of all irreducible factors of degree k, k)`.
pub fn distinct_degree(f: &PolyModP) -> Vec<(PolyModP, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = PolyModP::x(p);
    let mut h = x.rem(&rest);
    let exp = BigUint::from(p);
    let mut k = 1;
    while rest.degree() >= 2 * k {
        h = h.pow_mod(&exp, &rest);
        let g = rest.gcd(&h.sub(&x));
        if !g.is_one() {
            rest = rest.div_rem(&g).0.monic();
            h = h.rem(&rest);
            out.push((g, k));
        }
        k += 1;
    }
    if rest.degree() > 0 {
        let k = rest.degree();
        out.push((rest, k));
    }
    out
}

/// Splits a product of distinct irreducibles of common degree `k`
/// (Cantor-Zassenhaus, odd `p`).
pub fn equal_degree(f: &PolyModP, k: usize, rng: &mut ChaCha8Rng) -> Vec<PolyModP> {
    let p = f.p;
    let n = f.degree();
    if n == k {
        return vec![f.clone()];
    }
    let exp = (BigUint::from(p).pow(k as u32) - 1u32) / 2u32;
    let one = PolyModP::one(p);
    let mut factors = vec![f.clone()];
    while factors.len() < n / k {
        let h = PolyModP::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if h.degree() == 0 {
            continue;
        }
        let g = h.pow_mod(&exp, f).sub(&one);
        let mut next = Vec::with_capacity(factors.len() + 1);
        for u in factors {
            if u.degree() > k {
                let v = u.gcd(&g);
                if !v.is_one() && v.degree() < u.degree() {
                    let w = u.div_rem(&v).0.monic();
                    next.push(v);
                    next.push(w);
                    continue;
                }
            }
            next.push(u);
        }
        factors = next;
    }
    factors
}

/// Factors `f` into monic irreducibles with multiplicity. The result is
/// sorted by degree then coefficients, so it does not depend on the seed.
pub fn factor_mod_p(f: &PolyModP, seed: u64) -> Result<Vec<(PolyModP, usize)>> {
    let p = f.p;
    if p == 2 {
        return Err(Error::Unsupported("factorization modulo 2".into()));
    }
    if !arith::is_prime_u64(p) {
        return Err(Error::NotOddPrime(p.into()));
    }
    if f.degree() == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (sf, mult) in square_free(&f.monic()) {
        for (block, k) in distinct_degree(&sf) {
            for g in equal_degree(&block, k, &mut rng) {
                out.push((g, mult));
            }
        }
    }
    out.sort_by(|a, b| (a.0.degree(), &a.0.coeffs).cmp(&(b.0.degree(), &b.0.coeffs)));
    Ok(out)
}

/// No roots and no factor of degree `<= deg/2` (Rabin-style check via
/// `gcd(x^(p^i) - x, f)`).
pub fn is_irreducible(f: &PolyModP) -> bool {
    let n = f.degree();
    if n == 0 {
        return false;
    }
    let f = f.monic();
    let x = PolyModP::x(f.p);
    let exp = BigUint::from(f.p);
    let mut h = x.clone();
    for _ in 1..=n / 2 {
        h = h.pow_mod(&exp, &f);
        if !f.gcd(&h.sub(&x)).is_one() {
            return false;
        }
    }
    true
}
