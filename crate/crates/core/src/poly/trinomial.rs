//! Closed-form discriminants of trinomials and of iterates of
//! `f(x) = x^d - b x^m`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{disc_resultant, iterate, Poly};
use crate::arith::{self, Rational};
use crate::error::{Error, Result};

/// Default coefficient-bit budget for iterated discriminants.
pub const DEFAULT_BIT_BUDGET: u64 = 1 << 20;

fn ri(n: i64) -> Rational {
    arith::int(n)
}

/// `(-1)^e` as a rational.
fn neg_one_pow(e: u64) -> Rational {
    if e % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// `A x^d + B x^m + C` with `A != 0`, `d > m >= 1`, `gcd(m, d) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trinomial {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: u32,
    pub m: u32,
}

impl Trinomial {
    pub fn new(a: Rational, b: Rational, c: Rational, d: u32, m: u32) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::InvalidTrinomial("leading coefficient A is zero".into()));
        }
        if !(d > m && m >= 1) {
            return Err(Error::InvalidTrinomial(format!("need d > m >= 1, got d={d}, m={m}")));
        }
        if d.gcd(&m) != 1 {
            return Err(Error::InvalidTrinomial(format!("gcd(m, d) = {} != 1", d.gcd(&m))));
        }
        Ok(Trinomial { a, b, c, d, m })
    }

    pub fn to_poly(&self) -> Poly {
        let mut coeffs = vec![Rational::zero(); self.d as usize + 1];
        coeffs[0] = self.c.clone();
        coeffs[self.m as usize] += &self.b;
        coeffs[self.d as usize] += &self.a;
        Poly::new(coeffs)
    }
}

/// Discriminant of `A x^d + B x^m + C`:
/// `(-1)^(d(d-1)/2) A^(d-m-1) C^(m-1) [(-1)^(d-1) m^m (d-m)^(d-m) B^d + d^d A^m C^(d-m)]`.
pub fn disc_trinomial(t: &Trinomial) -> Rational {
    let (d, m) = (t.d as i64, t.m as i64);
    let sign = neg_one_pow((d * (d - 1) / 2) as u64);
    let bracket = neg_one_pow((d - 1) as u64)
        * ri(m).pow(m as i32)
        * ri(d - m).pow((d - m) as i32)
        * t.b.pow(d as i32)
        + ri(d).pow(d as i32) * t.a.pow(m as i32) * t.c.pow((d - m) as i32);
    sign * t.a.pow((d - m - 1) as i32) * t.c.pow((m - 1) as i32) * bracket
}

/// The polynomial map `f(x) = x^d - b x^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrinomialMap {
    pub d: u32,
    pub m: u32,
    pub b: Rational,
}

impl TrinomialMap {
    pub fn new(d: u32, m: u32, b: Rational) -> Result<Self> {
        if !(d > m && m >= 1) {
            return Err(Error::InvalidTrinomial(format!("need d > m >= 1, got d={d}, m={m}")));
        }
        Ok(TrinomialMap { d, m, b })
    }

    pub fn to_poly(&self) -> Poly {
        let mut coeffs = vec![Rational::zero(); self.d as usize + 1];
        coeffs[self.m as usize] = -self.b.clone();
        coeffs[self.d as usize] = Rational::one();
        Poly::new(coeffs)
    }

    /// `f(y) = y^m (y^(d-m) - b)`
    pub fn eval(&self, y: &Rational) -> Rational {
        y.pow(self.m as i32) * (y.pow((self.d - self.m) as i32) - &self.b)
    }

    /// `f^n(y)`
    pub fn eval_iter(&self, y: &Rational, n: u32) -> Rational {
        (0..n).fold(y.clone(), |acc, _| self.eval(&acc))
    }

    /// `f^n(x) - w` as an explicit polynomial.
    pub fn iterate_minus(&self, n: u32, w: &Rational) -> Poly {
        iterate(&self.to_poly(), n).sub(&Poly::constant(w.clone()))
    }
}

/// Product of `f(r) - w` over the nonzero critical points `r` of
/// `f(x) = x^d - b x^m`, via the closed form that eliminates roots of unity:
/// `d^(-d) A^(-m) [d^d A^m C^(d-m) + (-1)^(d-1) (d-m)^(d-m) m^m B^d]` with
/// `A = 1, B = -b, C = -w`.
pub fn crit_product(d: u32, m: u32, b: &Rational, w: &Rational) -> Result<Rational> {
    if b.is_zero() {
        return Err(Error::Precondition("b must be nonzero".into()));
    }
    if !(d > m && m >= 1) || d.gcd(&m) != 1 {
        return Err(Error::InvalidTrinomial(format!("need d > m >= 1 coprime, got d={d}, m={m}")));
    }
    let (d, m) = (d as i64, m as i64);
    let big_b = -b.clone();
    let big_c = -w.clone();
    let inner = ri(d).pow(d as i32) * big_c.pow((d - m) as i32)
        + neg_one_pow((d - 1) as u64)
            * ri(d - m).pow((d - m) as i32)
            * ri(m).pow(m as i32)
            * big_b.pow(d as i32);
    Ok(inner / ri(d).pow(d as i32))
}

fn check_budget(q: &Rational, budget: u64) -> Result<()> {
    let bits = arith::rational_bits(q);
    if bits > budget {
        Err(Error::BitBudgetExceeded { bits, budget })
    } else {
        Ok(())
    }
}

/// Discriminants `Δ(f^l - x0)` for `l = 0..=n`, by the iterated
/// discriminant recursion
/// `Δ(f^(k+1) - t) = Ã^(d^k) Δ(f^k - t)^d ∏_{f'(r)=0} (f^(k+1)(r) - t)^(m_r)`,
/// `Ã = (-1)^(d(d-1)/2) d^d`.
///
/// The critical points are `0` (multiplicity `m - 1`, and `f^k(0) = 0`) and
/// the roots of `d x^(d-m) = m b`. Supported exactly for `m = d - 1` (one
/// rational critical point `η = (d-1) b / d`) and for odd `d` with
/// `m = d - 2`, where `f` is odd and `f^k(η)^2 = g^k(η^2)` with
/// `g(x) = x^(d-2) (x - b)^2`. Other shapes fall back to the resultant for
/// iterates of degree at most 27.
pub fn disc_iterate_levels(
    f: &TrinomialMap,
    x0: &Rational,
    n: u32,
    budget: u64,
) -> Result<Vec<Rational>> {
    let (d, m) = (f.d, f.m);
    let mut out = vec![Rational::one()];
    if n == 0 {
        return Ok(out);
    }
    let zero_factor = (-x0.clone()).pow((m - 1) as i32);
    let a_tilde = neg_one_pow((d as u64) * (d as u64 - 1) / 2) * ri(d as i64).pow(d as i32);

    enum Crit {
        // f^k(η)
        Single(Rational),
        // f^k(η)^2
        Pair(Rational),
    }
    let mut crit = if m + 1 == d {
        Crit::Single(f.b.clone() * ri(m as i64) / ri(d as i64))
    } else if m + 2 == d && d % 2 == 1 {
        Crit::Pair(f.b.clone() * ri(m as i64) / ri(d as i64))
    } else {
        let feasible = (d as u64).checked_pow(n).is_some_and(|deg| deg <= 27);
        if !feasible {
            return Err(Error::Unsupported(format!(
                "iterated discriminant for d={d}, m={m}, n={n}"
            )));
        }
        for l in 1..=n {
            let v = disc_resultant(&f.iterate_minus(l, x0))?;
            check_budget(&v, budget)?;
            out.push(v);
        }
        return Ok(out);
    };
    let g = |z: &Rational| z.pow((d - 2) as i32) * (z - &f.b).pow(2);

    let mut deg_pow = BigInt::one(); // d^k
    for _ in 0..n {
        crit = match crit {
            Crit::Single(y) => Crit::Single(f.eval(&y)),
            Crit::Pair(z) => Crit::Pair(g(&z)),
        };
        let crit_factor = match &crit {
            Crit::Single(y) => y - x0,
            // (f^k(η) - t)(f^k(-η) - t) = t^2 - f^k(η)^2 since f is odd
            Crit::Pair(z) => x0 * x0 - z,
        };
        let exp: i32 = deg_pow
            .clone()
            .try_into()
            .map_err(|_| Error::Unsupported("exponent overflow".into()))?;
        let prev = out.last().unwrap();
        let next = a_tilde.pow(exp) * prev.pow(d as i32) * &zero_factor * crit_factor;
        check_budget(&next, budget)?;
        out.push(next);
        deg_pow *= d;
    }
    Ok(out)
}

/// `Δ(f^n - x0)`; see [`disc_iterate_levels`].
pub fn disc_iterate(f: &TrinomialMap, x0: &Rational, n: u32) -> Result<Rational> {
    Ok(disc_iterate_levels(f, x0, n, DEFAULT_BIT_BUDGET)?.pop().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::poly::compose;

    #[test]
    fn trinomial_examples() {
        let t = Trinomial::new(int(1), int(-1), int(1), 3, 2).unwrap();
        assert_eq!(disc_trinomial(&t), int(-23));
        assert_eq!(disc_resultant(&t.to_poly()).unwrap(), int(-23));
        let t = Trinomial::new(int(1), int(0), int(-1), 2, 1).unwrap();
        assert_eq!(disc_trinomial(&t), int(4));
        assert!(Trinomial::new(int(1), int(1), int(1), 4, 2).is_err());
        assert!(Trinomial::new(int(0), int(1), int(1), 3, 2).is_err());
    }

    #[test]
    fn trinomial_matches_resultant_for_listed_shapes() {
        for (d, m) in [(3, 2), (5, 3), (5, 4), (7, 5), (3, 1), (4, 1)] {
            for (b, beta) in [(2, 3), (-5, 1), (7, -2), (1, 1)] {
                let t = Trinomial::new(int(1), int(-b), int(-beta), d, m).unwrap();
                assert_eq!(disc_trinomial(&t), disc_resultant(&t.to_poly()).unwrap());
            }
        }
    }

    #[test]
    fn crit_product_examples() {
        assert_eq!(crit_product(2, 1, &int(1), &int(0)).unwrap(), rat(-1, 4));
        assert_eq!(crit_product(4, 3, &rat(4, 3), &int(0)).unwrap(), rat(-1, 3));
        assert!(crit_product(4, 3, &int(0), &int(0)).is_err());
    }

    #[test]
    fn crit_product_matches_rational_critical_point() {
        // m = d - 1: single critical point η = (d-1) b / d
        for d in 2..8u32 {
            for (b, w) in [(rat(3, 2), int(1)), (int(-2), rat(1, 5)), (rat(7, 3), int(0))] {
                let f = TrinomialMap::new(d, d - 1, b.clone()).unwrap();
                let eta = &b * int(d as i64 - 1) / int(d as i64);
                let direct = f.eval(&eta) - &w;
                assert_eq!(crit_product(d, d - 1, &b, &w).unwrap(), direct);
            }
        }
    }

    #[test]
    fn iterate_disc_examples() {
        let f = TrinomialMap::new(2, 1, int(1)).unwrap();
        assert_eq!(disc_iterate(&f, &int(1), 1).unwrap(), int(5));
        let direct = disc_resultant(&f.iterate_minus(2, &int(1))).unwrap();
        assert_eq!(disc_iterate(&f, &int(1), 2).unwrap(), direct);
    }

    #[test]
    fn iterate_disc_cubic_odd_branch() {
        let f = TrinomialMap::new(3, 1, rat(2, 3)).unwrap();
        let x0 = rat(-1, 2);
        for n in 1..=2 {
            let direct = disc_resultant(&f.iterate_minus(n, &x0)).unwrap();
            assert_eq!(disc_iterate(&f, &x0, n).unwrap(), direct);
        }
    }

    #[test]
    fn iterate_disc_level_one_is_trinomial_disc() {
        for (d, m) in [(4, 3), (5, 3), (7, 5), (6, 5)] {
            let b = rat(5, 7);
            let x0 = rat(-3, 2);
            let f = TrinomialMap::new(d, m, b.clone()).unwrap();
            let t = Trinomial::new(int(1), -b.clone(), -x0.clone(), d, m).unwrap();
            assert_eq!(disc_iterate(&f, &x0, 1).unwrap(), disc_trinomial(&t));
        }
    }

    #[test]
    fn iterate_disc_generic_fallback_and_unsupported() {
        let f = TrinomialMap::new(5, 2, int(3)).unwrap();
        let v = disc_iterate(&f, &int(1), 1).unwrap();
        assert_eq!(v, disc_resultant(&f.iterate_minus(1, &int(1))).unwrap());
        assert!(matches!(disc_iterate(&f, &int(1), 3), Err(Error::Unsupported(_))));
    }

    #[test]
    fn iterate_disc_respects_budget() {
        let f = TrinomialMap::new(2, 1, rat(3249, 1503490)).unwrap();
        let r = disc_iterate_levels(&f, &rat(57, 1198), 6, 4096);
        assert!(matches!(r, Err(Error::BitBudgetExceeded { .. })));
    }

    #[test]
    fn map_eval_agrees_with_polynomial() {
        let f = TrinomialMap::new(5, 3, rat(-2, 9)).unwrap();
        let y = rat(4, 3);
        assert_eq!(f.eval(&y), f.to_poly().eval(&y));
        let f2 = compose(&f.to_poly(), &f.to_poly());
        assert_eq!(f.eval_iter(&y, 2), f2.eval(&y));
    }
}
