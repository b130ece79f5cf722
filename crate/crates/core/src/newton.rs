//! Newton polygons at a prime and the valuation-level ramification tower of
//! the preimage tree of a trinomial map.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, Rational, Valuation};
use crate::error::{Error, Result};
use crate::poly::Poly;

/// One edge of the lower hull: `slope` is rise over run in the
/// `(index, valuation)` plane, `length` the run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    #[serde(with = "arith::serde_rational")]
    pub slope: Rational,
    pub length: u64,
}

impl Segment {
    pub fn new(slope: Rational, length: u64) -> Self {
        Segment { slope, length }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    /// `(index, valuation)` as `[i, "v"]` pairs.
    #[serde(with = "vertex_serde")]
    pub vertices: Vec<(usize, i64)>,
    pub segments: Vec<Segment>,
}

mod vertex_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[(usize, i64)], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|(i, val)| (*i, val.to_string()))
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(usize, i64)>, D::Error> {
        let raw: Vec<(usize, String)> = Vec::deserialize(d)?;
        raw.into_iter()
            .map(|(i, v)| {
                v.parse()
                    .map(|v| (i, v))
                    .map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

impl NewtonPolygon {
    /// Sum of segment lengths.
    pub fn width(&self) -> u64 {
        self.segments.iter().map(|s| s.length).sum()
    }

    /// Root valuations with multiplicity, largest first.
    pub fn root_valuations(&self) -> Vec<(Rational, u64)> {
        self.segments
            .iter()
            .map(|s| (-s.slope.clone(), s.length))
            .collect()
    }
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i128 {
    (a.0 - o.0) as i128 * (b.1 - o.1) as i128 - (a.1 - o.1) as i128 * (b.0 - o.0) as i128
}

/// Lower convex hull of `(i, v_p(a_i))` over the nonzero coefficients.
pub fn newton_polygon(f: &Poly, p: u64) -> Result<NewtonPolygon> {
    if !arith::is_prime_u64(p) {
        return Err(Error::NotPrime(BigInt::from(p)));
    }
    match f.degree() {
        Some(n) if n >= 1 => {}
        _ => return Err(Error::ConstantPolynomial),
    }
    let pts: Vec<(i64, i64)> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| match arith::val_unchecked(c, p) {
            Valuation::Finite(v) => Some((i as i64, v)),
            Valuation::Infinite => None,
        })
        .collect();
    Ok(hull_from_points(&pts))
}

/// Lower hull of points sorted by strictly increasing first coordinate.
pub fn hull_from_points(pts: &[(i64, i64)]) -> NewtonPolygon {
    let mut hull: Vec<(i64, i64)> = Vec::with_capacity(pts.len());
    for &pt in pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], pt) <= 0 {
            hull.pop();
        }
        hull.push(pt);
    }
    let segments = hull
        .windows(2)
        .map(|w| {
            let run = w[1].0 - w[0].0;
            Segment::new(arith::rat(w[1].1 - w[0].1, run), run as u64)
        })
        .collect();
    NewtonPolygon {
        vertices: hull.iter().map(|&(i, v)| (i as usize, v)).collect(),
        segments,
    }
}

/// Predicted polygon of `x^d - b x^m - beta` when `v(b) = v_b < 0`,
/// `(d - m) | v_b` and `v(beta / b) = v > 0`.
pub fn predict_two_segments(d: u32, m: u32, v_b: i64, v_beta_over_b: &Rational) -> Result<[Segment; 2]> {
    if m == 0 || m >= d {
        return Err(Error::Precondition(format!("need 0 < m < d, got d={d}, m={m}")));
    }
    if v_b >= 0 {
        return Err(Error::Precondition(format!("need v(b) < 0, got {v_b}")));
    }
    if v_b % (d - m) as i64 != 0 {
        return Err(Error::Precondition(format!("(d-m) = {} does not divide v(b) = {v_b}", d - m)));
    }
    if !v_beta_over_b.is_positive() {
        return Err(Error::Precondition(format!(
            "need v(beta/b) > 0, got {}",
            arith::format_rational(v_beta_over_b)
        )));
    }
    Ok([
        Segment::new(-v_beta_over_b / Rational::from_integer(m.into()), m as u64),
        Segment::new(arith::rat(-v_b, (d - m) as i64), (d - m) as u64),
    ])
}

/// The valuation hypotheses at the second prime, as four separate flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerHypotheses {
    /// p2 does not divide d - m
    pub p2_coprime: bool,
    /// v(b) < min(v(x0), 0)
    pub b_dominates: bool,
    /// (d - m) | v(b)
    pub divides: bool,
    /// gcd(m, v(x0/b)) = 1
    pub coprime_m: bool,
}

impl TowerHypotheses {
    pub fn check(d: u32, m: u32, p2: u64, v_b: i64, v_x0: i64) -> Self {
        let dm = (d - m) as i64;
        TowerHypotheses {
            p2_coprime: (d - m) as u64 % p2 != 0,
            b_dominates: v_b < v_x0.min(0),
            divides: v_b % dm == 0,
            coprime_m: (m as i64).gcd(&(v_x0 - v_b)) == 1,
        }
    }

    pub fn all(&self) -> bool {
        self.p2_coprime && self.b_dominates && self.divides && self.coprime_m
    }

    pub fn first_failure(&self) -> Option<&'static str> {
        [
            (self.p2_coprime, "2a: p2 does not divide d-m"),
            (self.b_dominates, "2b: v(b) < min(v(x0), 0)"),
            (self.divides, "2c: (d-m) divides v(b)"),
            (self.coprime_m, "2d: gcd(m, v(x0/b)) = 1"),
        ]
        .into_iter()
        .find(|(ok, _)| !ok)
        .map(|(_, name)| name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerLevel {
    pub level: u32,
    /// valuation of a level-k preimage
    #[serde(with = "arith::serde_rational")]
    pub valuation: Rational,
    /// `m^k * valuation`
    #[serde(with = "arith::serde_int")]
    pub numerator: BigInt,
    #[serde(with = "arith::serde_int")]
    pub ramification_index: BigInt,
    pub coprime_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationTower {
    pub d: u32,
    pub m: u32,
    pub v_b: i64,
    pub v_x0: i64,
    pub levels: Vec<TowerLevel>,
}

impl RamificationTower {
    /// Levels 1..n all have `m^k v_k` a positive integer prime to m.
    pub fn invariant_holds(&self) -> bool {
        self.levels.iter().filter(|l| l.level > 0).all(|l| l.coprime_ok)
    }
}

/// Walks `v_k = (v_{k-1} - v(b)) / m` from `v_0 = v(x0)` to depth n.
pub fn ramification_tower(d: u32, m: u32, p2: u64, v_b: i64, v_x0: i64, n: u32) -> Result<RamificationTower> {
    if m == 0 || m >= d {
        return Err(Error::Precondition(format!("need 0 < m < d, got d={d}, m={m}")));
    }
    let hyp = TowerHypotheses::check(d, m, p2, v_b, v_x0);
    if let Some(name) = hyp.first_failure() {
        return Err(Error::Precondition(format!("condition {name} fails")));
    }
    let mq = Rational::from_integer(m.into());
    let mb = BigInt::from(m);
    let vb = Rational::from_integer(v_b.into());
    let mut v = Rational::from_integer(v_x0.into());
    let mut levels = Vec::with_capacity(n as usize + 1);
    for k in 0..=n {
        if k > 0 {
            v = (&v - &vb) / &mq;
        }
        let index = num_traits::pow(mb.clone(), k as usize);
        let scaled = &v * Rational::from_integer(index.clone());
        debug_assert!(scaled.is_integer());
        let numerator = scaled.to_integer();
        let coprime_ok = numerator.is_positive() && numerator.gcd(&mb) == BigInt::from(1);
        levels.push(TowerLevel {
            level: k,
            valuation: v.clone(),
            numerator,
            ramification_index: index,
            coprime_ok,
        });
    }
    let tower = RamificationTower { d, m, v_b, v_x0, levels };
    if !tower.invariant_holds() {
        return Err(Error::Precondition("tower coprimality invariant fails".into()));
    }
    Ok(tower)
}

/// `x^d - p^{v_b} x^m - p^{v_b + v}` for an integral `v`.
pub fn two_segment_witness(d: u32, m: u32, p: u64, v_b: i64, v: i64) -> Poly {
    let pp = |e: i64| {
        let base = Rational::from_integer(BigInt::from(p));
        if e >= 0 {
            num_traits::pow(base, e as usize)
        } else {
            num_traits::pow(base.recip(), (-e) as usize)
        }
    };
    let mut coeffs = vec![Rational::zero(); d as usize + 1];
    coeffs[d as usize] = arith::int(1);
    coeffs[m as usize] = -pp(v_b);
    coeffs[0] = -pp(v_b + v);
    Poly::new(coeffs)
}
