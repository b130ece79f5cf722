//! Deterministic parameter construction over ℚ: witness primes, CRT for s and
//! t, and the packaged instance `(f, x0)`.
//!
//! Over ℚ the only units are ±1, so "every unit is a square mod p" is just
//! `p ≡ 1 (mod 4)`. Ties always go to the smallest candidate.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, Rational, Valuation, DEFAULT_PRIME_CAP};
use crate::error::{Error, Result};
use crate::newton::{self, RamificationTower};
use crate::poly::TrinomialMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParityCase {
    #[serde(rename = "even")]
    Even,
    #[serde(rename = "odd-case-1")]
    OddCase1,
    #[serde(rename = "odd-case-2")]
    OddCase2,
}

impl ParityCase {
    pub fn is_even(self) -> bool {
        self == ParityCase::Even
    }
}

impl fmt::Display for ParityCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParityCase::Even => "even",
            ParityCase::OddCase1 => "odd-case-1",
            ParityCase::OddCase2 => "odd-case-2",
        })
    }
}

/// `f(x) = x^d - b x^m` with base point `x0 = s/t` and its witness primes.
/// `p` is the unit-square prime used for the nonsquare test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterInstance {
    #[serde(with = "arith::serde_u32")]
    pub d: u32,
    #[serde(with = "arith::serde_u32")]
    pub m: u32,
    #[serde(rename = "case")]
    pub parity_case: ParityCase,
    #[serde(with = "arith::serde_int")]
    pub s: BigInt,
    #[serde(with = "arith::serde_int")]
    pub t: BigInt,
    #[serde(with = "arith::serde_rational")]
    pub x0: Rational,
    #[serde(with = "arith::serde_rational")]
    pub b: Rational,
    #[serde(with = "arith::serde_u64")]
    pub p: u64,
    #[serde(with = "arith::serde_u64")]
    pub p1: u64,
    #[serde(with = "arith::serde_u64")]
    pub p2: u64,
}

/// A named relation and whether it holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub name: String,
    pub holds: bool,
}

impl Relation {
    pub fn new(name: impl Into<String>, holds: bool) -> Self {
        Relation { name: name.into(), holds }
    }
}

fn big(n: impl Into<BigInt>) -> BigInt {
    n.into()
}

fn is_val(q: &Rational, p: u64, v: i64) -> bool {
    arith::val_unchecked(q, p) == Valuation::Finite(v)
}

impl IterInstance {
    pub fn map(&self) -> Result<TrinomialMap> {
        TrinomialMap::new(self.d, self.m, self.b.clone())
    }

    /// `D = s^{d-1} + t^{d-1}`
    pub fn big_d(&self) -> BigInt {
        num_traits::pow(self.s.clone(), self.d as usize - 1) + num_traits::pow(self.t.clone(), self.d as usize - 1)
    }

    /// Integer whose prime factors must not divide `F_n`.
    pub fn bad_product(&self) -> BigInt {
        let d = big(self.d);
        if self.parity_case.is_even() {
            &d * (&d - 1) * &self.s * &self.t * self.big_d()
        } else {
            big(2) * &d * (&d - 2) * &self.s * &self.t
        }
    }

    /// `b` as prescribed by `s`, `t`.
    pub fn expected_b(&self) -> Rational {
        if self.parity_case.is_even() {
            Rational::new(num_traits::pow(self.s.clone(), self.d as usize), &self.t * self.big_d())
        } else {
            &self.x0 * &self.x0
        }
    }

    /// Structural relations every constructed instance satisfies.
    pub fn relations(&self) -> Vec<Relation> {
        let d = self.d;
        let s = &self.s;
        let t = &self.t;
        let mut out = vec![
            Relation::new("x0 = s/t in lowest terms", t.is_positive() && s.gcd(t).is_one() && self.x0 == Rational::new(s.clone(), t.clone())),
            Relation::new("p, p1, p2 prime", [self.p, self.p1, self.p2].iter().all(|&q| arith::is_prime_u64(q))),
            Relation::new("p = 1 mod 4", self.p % 4 == 1),
            Relation::new("b matches s, t", self.b == self.expected_b()),
        ];
        match self.parity_case {
            ParityCase::Even => {
                let big_d = self.big_d();
                let dd = big(d);
                out.extend([
                    Relation::new("d even, m = d-1", d % 2 == 0 && d >= 2 && self.m == d - 1),
                    Relation::new("p2 = p", self.p2 == self.p),
                    Relation::new("v_p1(x0) = 1", is_val(&self.x0, self.p1, 1)),
                    Relation::new("v_p1(b) = d", is_val(&self.b, self.p1, d as i64)),
                    Relation::new("v_p2(x0) = 0", is_val(&self.x0, self.p2, 0)),
                    Relation::new("v_p2(b) = -1", is_val(&self.b, self.p2, -1)),
                    Relation::new(
                        "v_p(s^(d-1) + t^(d-1)) = 1",
                        arith::val_int_unchecked(&big_d, self.p) == Valuation::Finite(1),
                    ),
                    Relation::new("gcd(d-1, D) = 1", (&dd - 1u32).gcd(&big_d).is_one()),
                    Relation::new(
                        "gcd(s(d-1), dtD) = 1",
                        (s * (&dd - 1u32)).gcd(&(&dd * t * &big_d)).is_one(),
                    ),
                ]);
            }
            ParityCase::OddCase1 | ParityCase::OddCase2 => {
                let dd = big(d);
                let unit_prime_role = match self.parity_case {
                    ParityCase::OddCase1 => self.p == self.p1,
                    _ => self.p == self.p2,
                };
                out.extend([
                    Relation::new("d odd, m = d-2", d % 2 == 1 && d >= 3 && self.m == d - 2),
                    Relation::new("p is the case's unit-square prime", unit_prime_role),
                    Relation::new("v_p1(x0) = 1", is_val(&self.x0, self.p1, 1)),
                    Relation::new("v_p1(b) = 2", is_val(&self.b, self.p1, 2)),
                    Relation::new("v_p2(x0) = -1", is_val(&self.x0, self.p2, -1)),
                    Relation::new("v_p2(b) = -2", is_val(&self.b, self.p2, -2)),
                    Relation::new(
                        "gcd(2(d-2)s, dt) = 1",
                        (big(2) * (&dd - 2u32) * s).gcd(&(&dd * t)).is_one(),
                    ),
                ]);
            }
        }
        out
    }

    /// First failing relation, if any.
    pub fn validate(&self) -> Result<()> {
        match self.relations().into_iter().find(|r| !r.holds) {
            Some(r) => Err(Error::Construction(r.name)),
            None => Ok(()),
        }
    }

    /// Valuation tower at `p2` to depth n.
    pub fn ramification_tower(&self, n: u32) -> Result<RamificationTower> {
        let v_b = arith::val_unchecked(&self.b, self.p2)
            .finite()
            .ok_or_else(|| Error::Precondition("b = 0".into()))?;
        let v_x0 = arith::val_unchecked(&self.x0, self.p2)
            .finite()
            .ok_or_else(|| Error::Precondition("x0 = 0".into()))?;
        newton::ramification_tower(self.d, self.m, self.p2, v_b, v_x0, n)
    }
}

/// Which value the odd-case prime must see as a nonresidue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OddTarget {
    D,
    DMinus2,
}

/// Smallest p ∤ d(d-1), p ≡ 1 mod 4, with 1 - d a square mod p.
pub fn find_aux_prime_even(d: u32, cap: u64) -> Result<u64> {
    if d < 2 || d % 2 != 0 {
        return Err(Error::Precondition(format!("need even d >= 2, got {d}")));
    }
    let bad = d as u64 * (d as u64 - 1);
    let target = big(1) - big(d);
    arith::next_prime_where(3, cap, |p| {
        bad % p != 0 && p % 4 == 1 && arith::legendre(&target, p).ok() == Some(1)
    })
}

/// Smallest p ∤ 2d(d-2), p ≡ 1 mod 4, with the target a nonresidue mod p.
pub fn find_aux_prime_odd(d: u32, which: OddTarget, cap: u64) -> Result<u64> {
    if d < 3 || d % 2 == 0 {
        return Err(Error::Precondition(format!("need odd d >= 3, got {d}")));
    }
    let target = match which {
        OddTarget::D => big(d),
        OddTarget::DMinus2 => big(d - 2),
    };
    if arith::is_square_int(&target) {
        return Err(Error::Precondition(format!("{target} is a perfect square")));
    }
    let bad = 2 * d as u64 * (d as u64 - 2);
    arith::next_prime_where(3, cap, |p| {
        bad % p != 0 && p % 4 == 1 && arith::legendre(&target, p).ok() == Some(-1)
    })
}

fn smallest_prime_not_dividing(n: &BigInt, cap: u64) -> Result<u64> {
    arith::next_prime_where(2, cap, |q| !(n % q).is_zero())
}

fn finish(inst: IterInstance) -> Result<IterInstance> {
    inst.validate()?;
    Ok(inst)
}

/// Even-degree parameters.
pub fn build_params_even(d: u32) -> Result<IterInstance> {
    let cap = DEFAULT_PRIME_CAP;
    let p = find_aux_prime_even(d, cap)?;
    let s0 = (2..p)
        .find(|&a| arith::legendre(&big(a), p).ok() == Some(-1))
        .ok_or_else(|| Error::Construction(format!("no nonresidue mod {p}")))?;
    let dd = big(d);
    let p1 = smallest_prime_not_dividing(&(&dd * (&dd - 1) * p), cap)?;
    let s = arith::crt(&[
        (big(1), &dd * (&dd - 1)),
        (big(s0), big(p)),
        (big(p1), big(p1) * p1),
    ])?;
    let p_sq = big(p) * p;
    let t = arith::crt(&[(big(1), &s * (&dd - 1)), ((big(p) - &s).mod_floor(&p_sq), p_sq)])?;
    let x0 = Rational::new(s.clone(), t.clone());
    let mut inst = IterInstance {
        d,
        m: d - 1,
        parity_case: ParityCase::Even,
        s,
        t,
        x0,
        b: Rational::zero(),
        p,
        p1,
        p2: p,
    };
    inst.b = inst.expected_b();
    finish(inst)
}

/// Odd-degree parameters; Case 1 unless d is a perfect square.
pub fn build_params_odd(d: u32) -> Result<IterInstance> {
    if d >= 3 && d % 2 == 1 && !arith::is_square_int(&big(d)) {
        build_params_odd_case(d, ParityCase::OddCase1)
    } else {
        build_params_odd_case(d, ParityCase::OddCase2)
    }
}

pub fn build_params_odd_case(d: u32, case: ParityCase) -> Result<IterInstance> {
    let cap = DEFAULT_PRIME_CAP;
    let bad = big(2) * d * (d.saturating_sub(2));
    let (s, t, p1, p2, p) = match case {
        ParityCase::OddCase1 => {
            let p1 = find_aux_prime_odd(d, OddTarget::D, cap)?;
            let p2 = smallest_prime_not_dividing(&(&bad * p1), cap)?;
            (big(p1), big(p2), p1, p2, p1)
        }
        ParityCase::OddCase2 => {
            let p2 = find_aux_prime_odd(d, OddTarget::DMinus2, cap)?;
            let p1 = smallest_prime_not_dividing(&(&bad * p2), cap)?;
            (big(p1), big(p2), p1, p2, p2)
        }
        ParityCase::Even => return Err(Error::Precondition("odd builder asked for the even case".into())),
    };
    let x0 = Rational::new(s.clone(), t.clone());
    finish(IterInstance {
        d,
        m: d - 2,
        parity_case: case,
        s,
        t,
        b: &x0 * &x0,
        x0,
        p,
        p1,
        p2,
    })
}

/// Dispatch on the parity of d.
pub fn build_params(d: u32) -> Result<IterInstance> {
    if d % 2 == 0 {
        build_params_even(d)
    } else {
        build_params_odd(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn even_aux_primes() {
        assert_eq!(find_aux_prime_even(2, 1000).unwrap(), 5);
        assert_eq!(find_aux_prime_even(4, 1000).unwrap(), 13);
        assert_eq!(find_aux_prime_even(6, 1000).unwrap(), 29);
        assert!(find_aux_prime_even(3, 1000).is_err());
        assert!(matches!(find_aux_prime_even(2, 4), Err(Error::SearchCapExceeded { .. })));
    }

    #[test]
    fn odd_aux_primes() {
        assert_eq!(find_aux_prime_odd(3, OddTarget::D, 1000).unwrap(), 5);
        assert_eq!(find_aux_prime_odd(5, OddTarget::D, 1000).unwrap(), 13);
        assert_eq!(find_aux_prime_odd(9, OddTarget::DMinus2, 1000).unwrap(), 5);
        assert!(find_aux_prime_odd(9, OddTarget::D, 1000).is_err());
    }

    #[test]
    fn even_golden_d2() {
        let inst = build_params_even(2).unwrap();
        assert_eq!((inst.p, inst.p1, inst.p2), (5, 3, 5));
        assert_eq!(inst.s, big(57));
        assert_eq!(inst.t, big(1198));
        assert_eq!(inst.x0, rat(57, 1198));
        assert_eq!(inst.b, rat(3249, 1503490));
        assert_eq!(inst.big_d(), big(1255));
        assert_eq!(arith::val(&inst.b, 3).unwrap(), Valuation::Finite(2));
    }

    #[test]
    fn odd_goldens() {
        let i3 = build_params_odd(3).unwrap();
        assert_eq!(i3.parity_case, ParityCase::OddCase1);
        assert_eq!((i3.s.clone(), i3.t.clone()), (big(5), big(7)));
        assert_eq!(i3.b, rat(25, 49));

        let i5 = build_params_odd(5).unwrap();
        assert_eq!((i5.s.clone(), i5.t.clone(), i5.p1, i5.p2), (big(13), big(7), 13, 7));

        let i9 = build_params_odd(9).unwrap();
        assert_eq!(i9.parity_case, ParityCase::OddCase2);
        assert_eq!((i9.p2, i9.p1), (5, 11));
        assert_eq!(i9.x0, rat(11, 5));
        assert_eq!(i9.p, 5);
    }

    #[test]
    fn all_small_degrees_build() {
        for d in 2..=12 {
            let inst = build_params(d).unwrap();
            assert!(inst.relations().iter().all(|r| r.holds), "d={d}");
            assert_eq!(build_params(d).unwrap(), inst);
        }
    }

    #[test]
    fn even_side_conditions() {
        for d in [2u32, 4, 6, 8, 10] {
            let inst = build_params_even(d).unwrap();
            let dd = big(d);
            assert!((&inst.s - 1u32).mod_floor(&(&dd * (&dd - 1))).is_zero());
            assert_eq!(arith::legendre(&inst.s, inst.p).unwrap(), -1);
            assert_eq!(arith::val_int(&inst.s, inst.p1).unwrap(), Valuation::Finite(1));
            assert!((&inst.t - 1u32).mod_floor(&(&inst.s * (&dd - 1))).is_zero());
        }
    }

    #[test]
    fn tampering_is_named() {
        let mut inst = build_params(4).unwrap();
        inst.b *= Rational::from_integer(big(inst.p2));
        let e = inst.validate().unwrap_err().to_string();
        assert!(e.contains("b matches"), "{e}");
    }

    #[test]
    fn json_round_trip() {
        let inst = build_params(2).unwrap();
        let j = serde_json::to_value(&inst).unwrap();
        assert_eq!(j["s"], "57");
        assert_eq!(j["case"], "even");
        assert_eq!(serde_json::to_value(build_params(9).unwrap()).unwrap()["case"], "odd-case-2");
        assert_eq!(j["x0"], "57/1198");
        let back: IterInstance = serde_json::from_value(j).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn towers_for_large_degrees() {
        for d in 4..=10 {
            let tower = build_params(d).unwrap().ramification_tower(4).unwrap();
            assert!(tower.invariant_holds(), "d={d}");
        }
    }
}
