//! Dense univariate polynomials over the rationals, resultants and
//! discriminants, plus the trinomial-specific closed forms in [`trinomial`]
//! and prime-field arithmetic in [`modp`].

pub mod modp;
pub mod trinomial;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, Rational, Valuation};
use crate::error::{Error, Result};

pub use modp::{factor_mod_p, PolyModP};
pub use trinomial::{
    crit_product, disc_iterate, disc_iterate_levels, disc_trinomial, Trinomial, TrinomialMap,
    DEFAULT_BIT_BUDGET,
};

/// Dense polynomial, coefficient `i` multiplies `x^i`. Trailing zeros are
/// trimmed so the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| arith::int(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    pub fn x() -> Self {
        Poly::from_ints(&[0, 1])
    }

    /// `c * x^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Poly::new(out)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Lowest common denominator of the coefficients.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                if mag.is_integer() {
                    write!(f, "{}", mag.numer())?;
                } else {
                    write!(f, "({}/{})", mag.numer(), mag.denom())?;
                }
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// JSON form `{"coeffs": ["c0", "c1", ...]}`, ascending degree.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyJson {
    pub coeffs: Vec<String>,
}

impl From<&Poly> for PolyJson {
    fn from(p: &Poly) -> Self {
        PolyJson {
            coeffs: p.coeffs.iter().map(arith::format_rational).collect(),
        }
    }
}

impl TryFrom<PolyJson> for Poly {
    type Error = Error;

    fn try_from(j: PolyJson) -> Result<Poly> {
        let coeffs = j
            .coeffs
            .iter()
            .map(|s| arith::parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(coeffs))
    }
}

/// `f(g(x))` by Horner's rule.
pub fn compose(f: &Poly, g: &Poly) -> Poly {
    f.coeffs
        .iter()
        .rev()
        .fold(Poly::zero(), |acc, c| acc.mul(g).add(&Poly::constant(c.clone())))
}

/// `f^n`, the n-fold composition; `iterate(f, 0) = x`.
pub fn iterate(f: &Poly, n: u32) -> Poly {
    (0..n).fold(Poly::x(), |acc, _| compose(f, &acc))
}

// --- integer polynomial kernel for the subresultant algorithm ---

fn trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// `lc(b)^(deg a - deg b + 1) * a mod b`
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    let mut steps_left = a.len() as i64 - b.len() as i64 + 1;
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c *= lb;
        }
        let shift = dr - db;
        for (i, c) in b.iter().enumerate() {
            r[i + shift] -= &lr * c;
        }
        trim(&mut r);
        steps_left -= 1;
    }
    if steps_left > 0 {
        let k = lb.pow(steps_left as u32);
        for c in r.iter_mut() {
            *c *= &k;
        }
    }
    r
}

fn exact_div_all(v: &mut [BigInt], by: &BigInt) {
    for c in v.iter_mut() {
        debug_assert!((&*c % by).is_zero());
        *c /= by;
    }
}

/// Resultant of two integer polynomials by the subresultant PRS.
fn resultant_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    if a.is_empty() || b.is_empty() {
        return BigInt::zero();
    }
    let (mut a, mut b, mut sign) = if a.len() < b.len() {
        let s = if (a.len() - 1) * (b.len() - 1) % 2 == 1 { -1 } else { 1 };
        (b.to_vec(), a.to_vec(), s)
    } else {
        (a.to_vec(), b.to_vec(), 1)
    };
    if b.len() == 1 {
        return BigInt::from(sign) * b[0].pow((a.len() - 1) as u32);
    }
    let ca = content(&a);
    let cb = content(&b);
    exact_div_all(&mut a, &ca);
    exact_div_all(&mut b, &cb);
    let t = ca.pow((b.len() - 1) as u32) * cb.pow((a.len() - 1) as u32);
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let mut r = pseudo_rem(&a, &b);
        a = b;
        if r.is_empty() {
            return BigInt::zero();
        }
        let divisor = &g * h.pow(delta);
        exact_div_all(&mut r, &divisor);
        b = r;
        g = a.last().unwrap().clone();
        // h <- g^delta / h^(delta - 1)
        h = if delta == 0 {
            h
        } else {
            g.pow(delta) / h.pow(delta - 1)
        };
        if b.len() == 1 {
            let da = (a.len() - 1) as u32;
            // h <- lc(b)^deg(a) / h^(deg(a) - 1)
            let num = b[0].pow(da);
            let res = if da == 0 { num * h } else { num / h.pow(da - 1) };
            return BigInt::from(sign) * t * res;
        }
    }
}

fn to_integer_poly(f: &Poly) -> (Vec<BigInt>, BigInt) {
    let den = f.denominator_lcm();
    let coeffs = f
        .coeffs
        .iter()
        .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
        .collect();
    (coeffs, den)
}

/// Exact resultant over the rationals. Denominators are cleared first and
/// restored afterwards: `Res(cf, eg) = c^deg g * e^deg f * Res(f, g)`.
pub fn resultant(f: &Poly, g: &Poly) -> Rational {
    if f.is_zero() || g.is_zero() {
        return Rational::zero();
    }
    let (fi, cf) = to_integer_poly(f);
    let (gi, cg) = to_integer_poly(g);
    let df = (fi.len() - 1) as u32;
    let dg = (gi.len() - 1) as u32;
    let r = resultant_int(&fi, &gi);
    Rational::new(r, cf.pow(dg) * cg.pow(df))
}

/// `disc(f) = (-1)^(n(n-1)/2) * Res(f, f') / lc(f)` with `n = deg f`.
pub fn disc_resultant(f: &Poly) -> Result<Rational> {
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::ConstantPolynomial),
    };
    let r = resultant(f, &f.derivative()) / f.leading();
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -r } else { r })
}

/// Eisenstein test at `p` for a monic polynomial: every lower coefficient
/// has valuation at least one and the constant term valuation exactly one.
pub fn eisenstein_at(f: &Poly, p: u64) -> Result<bool> {
    if !arith::is_prime_u64(p) {
        return Err(Error::NotPrime(BigInt::from(p)));
    }
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::ConstantPolynomial),
    };
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let lower_ok = f.coeffs[..n]
        .iter()
        .all(|c| arith::val_unchecked(c, p) >= Valuation::Finite(1));
    Ok(lower_ok && arith::val_unchecked(&f.coeffs[0], p) == Valuation::Finite(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    /// Sylvester-matrix determinant by fraction-free Bareiss elimination;
    /// independent of the subresultant route.
    fn resultant_sylvester(f: &Poly, g: &Poly) -> Rational {
        let (fi, cf) = to_integer_poly(f);
        let (gi, cg) = to_integer_poly(g);
        let m = fi.len() - 1;
        let n = gi.len() - 1;
        let size = m + n;
        let mut mat = vec![vec![BigInt::zero(); size]; size];
        for row in 0..n {
            for (j, c) in fi.iter().rev().enumerate() {
                mat[row][row + j] = c.clone();
            }
        }
        for row in 0..m {
            for (j, c) in gi.iter().rev().enumerate() {
                mat[n + row][row + j] = c.clone();
            }
        }
        let det = bareiss_det(mat);
        Rational::new(det, cf.pow(n as u32) * cg.pow(m as u32))
    }

    fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
        let n = a.len();
        if n == 0 {
            return BigInt::one();
        }
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    #[test]
    fn iterate_examples() {
        let f = Poly::from_ints(&[1, -1, 1]);
        assert_eq!(iterate(&f, 2), Poly::from_ints(&[1, -1, 2, -2, 1]));
        assert_eq!(iterate(&f, 0), Poly::x());
        let sq = Poly::from_ints(&[0, 0, 1]);
        assert_eq!(compose(&sq, &Poly::from_ints(&[1, 1])), Poly::from_ints(&[1, 2, 1]));
        assert_eq!(iterate(&f, 3).degree(), Some(8));
    }

    #[test]
    fn discriminant_sign_is_pinned() {
        let f = Poly::from_ints(&[1, 0, -1, 1]);
        assert_eq!(disc_resultant(&f).unwrap(), int(-23));
        assert_eq!(resultant_sylvester(&f, &f.derivative()), int(23));
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(disc_resultant(&Poly::from_ints(&[1, 1, 1])).unwrap(), int(-3));
        assert_eq!(
            resultant(&Poly::from_ints(&[-2, 1]), &Poly::from_ints(&[-3, 1])),
            int(-1)
        );
        assert!(matches!(
            disc_resultant(&Poly::from_ints(&[5])),
            Err(Error::ConstantPolynomial)
        ));
        // common root
        let f = Poly::from_ints(&[-1, 0, 1]);
        assert_eq!(resultant(&f, &Poly::from_ints(&[-1, 1])), int(0));
    }

    #[test]
    fn subresultant_matches_sylvester() {
        let cases = [
            (vec![3, -2, 0, 5, 1], vec![1, 0, -7]),
            (vec![1, 2, 3, 4, 5, 6], vec![-1, 1, 0, 2]),
            (vec![0, 0, 1], vec![0, 1]),
            (vec![2, 0, 0, 0, 3], vec![5, 1, 1, 1, 1, 1, 1]),
            (vec![-4, 4, 1], vec![7]),
        ];
        for (a, b) in cases {
            let f = Poly::from_ints(&a);
            let g = Poly::from_ints(&b);
            assert_eq!(resultant(&f, &g), resultant_sylvester(&f, &g), "{f} / {g}");
            assert_eq!(resultant(&g, &f), resultant_sylvester(&g, &f), "{g} / {f}");
        }
        let f = Poly::new(vec![rat(1, 2), rat(-3, 4), int(0), rat(5, 3)]);
        let g = Poly::new(vec![rat(2, 7), int(1), rat(1, 9)]);
        assert_eq!(resultant(&f, &g), resultant_sylvester(&f, &g));
    }

    #[test]
    fn eisenstein_examples() {
        assert!(eisenstein_at(&Poly::from_ints(&[-2, 0, 1]), 2).unwrap());
        assert!(!eisenstein_at(&Poly::from_ints(&[-4, 0, 1]), 2).unwrap());
        assert!(!eisenstein_at(&Poly::from_ints(&[-2, 1, 1]), 2).unwrap());
        assert!(matches!(
            eisenstein_at(&Poly::from_ints(&[-2, 0, 3]), 2),
            Err(Error::NotMonic)
        ));
        let f = Poly::new(vec![rat(3, 5), rat(6, 7), int(1)]);
        assert!(eisenstein_at(&f, 3).unwrap());
    }

    #[test]
    fn display_is_readable() {
        let f = Poly::new(vec![int(1), int(0), rat(-1, 2), int(1)]);
        assert_eq!(f.to_string(), "x^3 - (1/2)x^2 + 1");
    }
}
