//! Certificates that an instance satisfies the valuation, Eisenstein and
//! nonsquare hypotheses of the full-wreath-product criterion at depths 1..N.
//!
//! Each `F_n` is computed twice: by the `M_n` recursion from `s`, `t` alone,
//! and by exact evaluation of the critical orbit of `f` itself. The two must
//! agree. The checked depths are 1..N; extending to every n is the inductive
//! argument the step-3 congruences track.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arith::{self, Primality, Rational, Valuation};
use crate::construct::{IterInstance, ParityCase};
use crate::error::{Error, Result};
use crate::newton::{RamificationTower, TowerHypotheses};
use crate::poly::{self, disc_iterate_levels, TrinomialMap, DEFAULT_BIT_BUDGET};

pub const DEFAULT_DEPTH: u32 = 3;
/// Depths whose predicted `F_n` exceeds this many bits are not attempted.
pub const F_BIT_CAP: u64 = 1 << 24;
/// Values above this size are serialized as a digest unless asked otherwise.
pub const INLINE_BITS: u64 = 4096;
pub const TRIAL_DIVISION_BOUND: u64 = 1_000_000;
/// `exhibit_odd_prime_q` is skipped above this size.
pub const EXHIBIT_MAX_BITS: u64 = 65536;
pub const EISENSTEIN_MAX_DEPTH: u32 = 3;
/// Larger iterates are checked in `Z/p1^2` instead of over ℚ.
pub const EXACT_EISENSTEIN_MAX_DEGREE: u64 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    /// d >= 4: conditions (1), (2), (3)
    Full,
    /// d in {2, 3}: conditions (1), (3)
    LowDegree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvidenceLevel {
    Deterministic,
    ProbabilisticPrimality,
}

/// Integer as decimal string, or as SHA-256 of that string plus bit length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntValue {
    pub bits: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sha256: Option<String>,
}

impl IntValue {
    pub fn new(n: &BigInt, inline: bool) -> Self {
        let bits = arith::bits(n);
        let text = n.to_string();
        if inline || bits <= INLINE_BITS {
            IntValue { bits, value: Some(text), sha256: None }
        } else {
            IntValue {
                bits,
                value: None,
                sha256: Some(hex::encode(Sha256::digest(text.as_bytes()))),
            }
        }
    }
}

/// One named check in evaluation order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub relation: String,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition1Report {
    pub v_p1_b: String,
    pub v_p1_x0: String,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition2Report {
    pub required: bool,
    pub v_p2_b: String,
    pub v_p2_x0: String,
    pub v_p2_x0_over_b: String,
    pub hypotheses: TowerHypotheses,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tower: Option<RamificationTower>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QReport {
    /// "found", "not-found" or "skipped"
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub multiplicity: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub primality: Option<Primality>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coprime_to_bad: Option<bool>,
    /// v_q of the discriminant is odd at depth n and zero below, when the
    /// discriminants fit the bit budget
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub discriminant_check: Option<bool>,
}

impl QReport {
    fn status(s: &str) -> Self {
        QReport {
            status: s.into(),
            q: None,
            multiplicity: None,
            primality: None,
            coprime_to_bad: None,
            discriminant_check: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertDepthRecord {
    pub n: u32,
    #[serde(with = "arith::serde_u64")]
    pub e_n: u64,
    pub m_n: IntValue,
    pub f_n: IntValue,
    pub f_n_bits: u64,
    pub dual_path_ok: bool,
    pub coprimality_ok: bool,
    pub congruence_ok: bool,
    /// legendre(F_n, p) = -1
    pub nonsquare_plus: bool,
    /// legendre(-F_n, p) = -1
    pub nonsquare_minus: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exhibited_q: Option<QReport>,
    #[serde(skip)]
    pub exact: Option<ExactValues>,
}

impl CertDepthRecord {
    pub fn passes(&self) -> bool {
        self.dual_path_ok && self.coprimality_ok && self.congruence_ok && self.nonsquare_plus && self.nonsquare_minus
    }
}

/// Unserialized exact values behind a depth record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactValues {
    pub m_n: BigInt,
    /// by the recursion
    pub f_n: BigInt,
    /// by direct evaluation
    pub f_n_direct: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EisensteinRecord {
    pub n: u32,
    #[serde(with = "arith::serde_u64")]
    pub degree: u64,
    /// "exact" or "mod-p1-squared"
    pub method: String,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub instance: IterInstance,
    pub requested_depth: u32,
    pub depth: u32,
    pub criterion: Criterion,
    pub condition1: Condition1Report,
    pub condition2: Condition2Report,
    pub records: Vec<CertDepthRecord>,
    pub eisenstein: Vec<EisensteinRecord>,
    pub checks: Vec<Check>,
    pub failures: Vec<String>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first_failure: Option<String>,
    pub evidence_level: EvidenceLevel,
    pub scope: String,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Debug, Clone)]
pub struct CertifyOptions {
    pub depth: u32,
    /// inline every integer regardless of size
    pub full_values: bool,
    /// try to exhibit an odd-valuation prime at each depth
    pub exhibit: bool,
    pub trial_bound: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            depth: DEFAULT_DEPTH,
            full_values: false,
            exhibit: true,
            trial_bound: TRIAL_DIVISION_BOUND,
        }
    }
}

fn big(n: impl Into<BigInt>) -> BigInt {
    n.into()
}

fn pow(b: &BigInt, e: u64) -> BigInt {
    num_traits::pow(b.clone(), e as usize)
}

fn pow_u(b: u64, e: u64) -> BigInt {
    pow(&big(b), e)
}

fn val_string(v: Valuation) -> String {
    v.to_string()
}

pub fn criterion_for(d: u32) -> Criterion {
    if d >= 4 {
        Criterion::Full
    } else {
        Criterion::LowDegree
    }
}

pub fn check_condition1(inst: &IterInstance) -> Condition1Report {
    let vb = arith::val_unchecked(&inst.b, inst.p1);
    let vx = arith::val_unchecked(&inst.x0, inst.p1);
    Condition1Report {
        v_p1_b: val_string(vb),
        v_p1_x0: val_string(vx),
        ok: vb >= Valuation::Finite(1) && vx == Valuation::Finite(1),
    }
}

/// The four valuation conditions at p2, plus the tower probe to `depth`.
pub fn check_condition2(inst: &IterInstance, depth: u32) -> Condition2Report {
    let required = criterion_for(inst.d) == Criterion::Full;
    let vb = arith::val_unchecked(&inst.b, inst.p2);
    let vx = arith::val_unchecked(&inst.x0, inst.p2);
    let (hypotheses, ratio) = match (vb.finite(), vx.finite()) {
        (Some(b), Some(x)) if inst.m >= 1 && inst.m < inst.d => (
            TowerHypotheses::check(inst.d, inst.m, inst.p2, b, x),
            Valuation::Finite(x - b),
        ),
        _ => (
            TowerHypotheses {
                p2_coprime: (inst.d.saturating_sub(inst.m)) as u64 % inst.p2.max(1) != 0,
                b_dominates: false,
                divides: false,
                coprime_m: false,
            },
            Valuation::Infinite,
        ),
    };
    let tower = if hypotheses.all() { inst.ramification_tower(depth).ok() } else { None };
    let tower_ok = tower.as_ref().is_some_and(RamificationTower::invariant_holds);
    Condition2Report {
        required,
        v_p2_b: val_string(vb),
        v_p2_x0: val_string(vx),
        v_p2_x0_over_b: val_string(ratio),
        hypotheses,
        tower,
        ok: !required || (hypotheses.all() && tower_ok),
    }
}

/// `e_n` by its recursion.
pub fn e_n(inst_case: ParityCase, d: u32, n: u32) -> u64 {
    let d = d as u64;
    let (mul, add) = if inst_case.is_even() { (d - 1, 1) } else { (d - 2, 2) };
    (1..n).fold(d, |e, _| mul * e + add)
}

/// `e_n` in closed form.
pub fn e_n_closed(inst_case: ParityCase, d: u32, n: u32) -> u64 {
    let d = d as u64;
    if inst_case.is_even() {
        if d == 2 {
            n as u64 + 1
        } else {
            ((d - 1).pow(n + 1) - 1) / (d - 2)
        }
    } else if d == 3 {
        2 * n as u64 + 1
    } else {
        ((d - 2).pow(n + 1) + (d - 2).pow(n) - 2) / (d - 3)
    }
}

/// Rough size of `F_n` in bits, used to cap the depth.
pub fn predicted_bits(inst: &IterInstance, n: u32) -> u64 {
    let d = big(inst.d);
    let scale = if inst.parity_case.is_even() {
        &d * &inst.t * inst.big_d()
    } else {
        &d * &inst.t * &inst.t
    };
    let per = arith::bits(&scale) + arith::bits(&inst.s);
    (inst.d as u64).saturating_pow(n).saturating_mul(per)
}

/// The `M_n` sequence and recursion values of `F_n` for n = 1..=depth.
pub fn recursion_values(inst: &IterInstance, depth: u32) -> Vec<(u64, BigInt, BigInt)> {
    let d = inst.d as u64;
    let s = &inst.s;
    let t = &inst.t;
    let mut out = Vec::with_capacity(depth as usize);
    if inst.parity_case.is_even() {
        let big_d = inst.big_d();
        let td = t * &big_d;
        let mut m_n = big(-1);
        let mut e = d;
        for n in 1..=depth as u64 {
            let dn = d.pow(n as u32);
            let lead = pow(s, d * e - 1) * pow_u(d - 1, (d - 1).pow(n as u32)) * &m_n;
            let f_n = lead - pow_u(d, dn) * pow(t, dn - 1) * pow(&big_d, dn);
            out.push((e, m_n.clone(), f_n));
            let next = pow(&m_n, d - 1)
                * (pow_u(d - 1, (d - 1).pow(n as u32)) * pow(s, d * (e - 1)) * &m_n
                    - pow_u(d, dn) * pow(&td, dn - 1));
            m_n = next;
            e = (d - 1) * e + 1;
        }
    } else {
        let mut m_n = big(1);
        let mut e = d;
        for n in 1..=depth as u64 {
            let dn = d.pow(n as u32);
            let f_n = pow_u(4, (d - 2).pow(n as u32 - 1))
                * pow_u(d - 2, (d - 2).pow(n as u32))
                * pow(s, 2 * e - 2)
                * &m_n
                * &m_n
                - pow_u(d, dn) * pow(t, 2 * dn - 2);
            out.push((e, m_n.clone(), f_n.clone()));
            m_n = pow(&m_n, d - 2) * f_n;
            e = (d - 2) * e + 2;
        }
    }
    out
}

/// `F_n` for n = 1..=depth from the defining expression, evaluating the
/// critical orbit of `f` (or of `g(x) = x^(d-2)(x-b)^2` on `η^2`) exactly.
pub fn direct_values(inst: &IterInstance, depth: u32) -> Vec<Rational> {
    let d = inst.d;
    let s = Rational::from_integer(inst.s.clone());
    let t = Rational::from_integer(inst.t.clone());
    let b = &inst.b;
    let mut out = Vec::with_capacity(depth as usize);
    if inst.parity_case.is_even() {
        let f = TrinomialMap { d, m: d - 1, b: b.clone() };
        let scale = Rational::from_integer(big(d) * &inst.t * inst.big_d());
        let mut y = b * arith::int(d as i64 - 1) / arith::int(d as i64);
        for n in 1..=depth {
            y = f.eval(&y);
            let k = num_traits::pow(scale.clone(), (d as usize).pow(n));
            out.push(k * (&y - &inst.x0) / &s);
        }
    } else {
        let scale = arith::int(d as i64) * &t * &t;
        let x0sq = &inst.x0 * &inst.x0;
        let mut z = b * arith::int(d as i64 - 2) / arith::int(d as i64);
        for n in 1..=depth {
            z = z.pow(d as i32 - 2) * (&z - b).pow(2);
            let k = num_traits::pow(scale.clone(), (d as usize).pow(n));
            out.push(k * (&z - &x0sq) / (&s * &s));
        }
    }
    out
}

/// Step-3 congruence at depth n, from the direct value of `F_n`.
pub fn check_step3_congruence(inst: &IterInstance, n: u32, f_n: &BigInt) -> bool {
    let d = inst.d as u64;
    let s = &inst.s;
    let t = &inst.t;
    let dn = d.pow(n);
    let dn1 = big(d.pow(n - 1));
    match inst.parity_case {
        ParityCase::Even => {
            let big_d = inst.big_d();
            let modulus = big(d) * t * &big_d;
            // (dtD)^{d^n} f^n(η) = s F_n + s d^{d^n} t^{d^n-1} D^{d^n}
            let lhs = s * f_n + s * pow_u(d, dn) * pow(t, dn - 1) * pow(&big_d, dn);
            let base = (-(pow_u(d - 1, d - 1) * pow(s, d * d))).mod_floor(&modulus);
            (lhs - base.modpow(&dn1, &modulus)).mod_floor(&modulus).is_zero()
        }
        ParityCase::OddCase1 => {
            // (dt^2)^{d^n} s^{-2} f^n(η)^2 = F_n + d^{d^n} t^{2d^n-2}
            let z = f_n + pow_u(d, dn) * pow(t, 2 * dn - 2);
            let p1 = big(inst.p1);
            (&z % s).is_zero() && (&z % &p1).is_zero()
        }
        ParityCase::OddCase2 => {
            let modulus = big(d) * t * t;
            let lhs = s * s * (f_n + pow_u(d, dn) * pow(t, 2 * dn - 2));
            let base = (big(4) * pow_u(d - 2, d - 2) * pow(s, 2 * d)).mod_floor(&modulus);
            (lhs - base.modpow(&dn1, &modulus)).mod_floor(&modulus).is_zero()
        }
    }
}

/// `(legendre(F_n, p) = -1, legendre(-F_n, p) = -1)`
pub fn check_nonsquare(inst: &IterInstance, f_n: &BigInt) -> (bool, bool) {
    let plus = arith::legendre(f_n, inst.p).ok() == Some(-1);
    let minus = arith::legendre(&-f_n, inst.p).ok() == Some(-1);
    (plus, minus)
}

/// Trial division of |n| by primes up to `bound`; returns the factors found
/// and the remaining cofactor.
pub fn trial_factor(n: &BigInt, bound: u64) -> (Vec<(u64, u64)>, BigInt) {
    let mut rest = n.abs();
    let mut found = Vec::new();
    for q in arith::primes_up_to(bound) {
        if rest.is_one() {
            break;
        }
        let qb = big(q);
        if (&rest % q).is_zero() {
            let mut k = 0;
            while (&rest % q).is_zero() {
                rest /= &qb;
                k += 1;
            }
            found.push((q, k));
        }
    }
    (found, rest)
}

/// Looks for a prime q with odd v_q(F_n) and q coprime to the bad product.
pub fn exhibit_odd_prime_q(inst: &IterInstance, n: u32, f_n: &BigInt, bound: u64) -> QReport {
    if arith::bits(f_n) > EXHIBIT_MAX_BITS || f_n.is_zero() {
        return QReport::status("skipped");
    }
    let bad = inst.bad_product();
    let (small, cofactor) = trial_factor(f_n, bound);
    let candidate = small
        .iter()
        .find(|(q, k)| k % 2 == 1 && !(&bad % *q).is_zero())
        .map(|&(q, k)| (big(q), k, Primality::Prime))
        .or_else(|| {
            if cofactor.is_one() {
                return None;
            }
            match arith::primality(&cofactor) {
                Primality::Composite => None,
                pr => Some((cofactor.clone(), 1, pr)),
            }
        });
    let Some((q, k, pr)) = candidate else {
        return QReport::status("not-found");
    };
    QReport {
        status: "found".into(),
        q: Some(q.to_string()),
        multiplicity: Some(k),
        primality: Some(pr),
        coprime_to_bad: Some(q.gcd(&bad).is_one()),
        discriminant_check: discriminant_parity(inst, n, &q),
    }
}

/// v_q(Δ(f^n - x0)) odd and v_q(Δ(f^l - x0)) = 0 for l < n, if computable.
fn discriminant_parity(inst: &IterInstance, n: u32, q: &BigInt) -> Option<bool> {
    let q = q.to_u64()?;
    let f = inst.map().ok()?;
    let levels = disc_iterate_levels(&f, &inst.x0, n, DEFAULT_BIT_BUDGET).ok()?;
    let v = |r: &Rational| arith::val_unchecked(r, q);
    let lower = levels[1..n as usize].iter().all(|r| v(r) == Valuation::Finite(0));
    let top = matches!(v(&levels[n as usize]), Valuation::Finite(k) if k % 2 == 1);
    Some(lower && top)
}

/// Eisenstein test of `f^n - x0` at p1, exactly for small degree and in
/// `Z/p1^2` otherwise (same answer whenever b and x0 are p1-integral).
pub fn eisenstein_record(inst: &IterInstance, n: u32) -> EisensteinRecord {
    let degree = (inst.d as u64).pow(n);
    let p = inst.p1;
    if degree <= EXACT_EISENSTEIN_MAX_DEGREE {
        let ok = inst
            .map()
            .and_then(|f| poly::eisenstein_at(&f.iterate_minus(n, &inst.x0), p))
            .unwrap_or(false);
        return EisensteinRecord { n, degree, method: "exact".into(), ok };
    }
    let ok = eisenstein_mod_square(inst, n).unwrap_or(false);
    EisensteinRecord { n, degree, method: "mod-p1-squared".into(), ok }
}

fn reduce_mod_big(q: &Rational, modulus: &BigInt) -> Option<u64> {
    let den = q.denom().mod_floor(modulus);
    let inv = den.modinv(modulus)?;
    (q.numer() * inv).mod_floor(modulus).to_u64()
}

fn mul_mod_poly(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    let mut out = vec![0u128; a.len() + b.len() - 1];
    let m128 = m as u128;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u128 * y as u128) % m128;
        }
    }
    out.into_iter().map(|c| c as u64).collect()
}

pub(crate) fn eisenstein_mod_square(inst: &IterInstance, n: u32) -> Option<bool> {
    let p = inst.p1;
    let m2 = p.checked_mul(p)?;
    let m2b = big(m2);
    let b = reduce_mod_big(&inst.b, &m2b)?;
    let x0 = reduce_mod_big(&inst.x0, &m2b)?;
    let (d, m) = (inst.d as usize, inst.m as usize);
    // g = f^k, iterated as g^m (g^(d-m) - b)
    let mut g = vec![0, 1u64];
    for _ in 0..n {
        let pw = |base: &Vec<u64>, e: usize| (0..e).fold(vec![1u64], |acc, _| mul_mod_poly(&acc, base, m2));
        let mut inner = pw(&g, d - m);
        inner[0] = (inner[0] + m2 - b) % m2;
        g = mul_mod_poly(&pw(&g, m), &inner, m2);
    }
    g[0] = (g[0] + m2 - x0) % m2;
    let lower_ok = g[..g.len() - 1].iter().all(|c| c % p == 0);
    Some(g.last() == Some(&1) && lower_ok && g[0] % m2 != 0)
}

/// Runs every check to the requested depth and returns the certificate.
pub fn certify(inst: &IterInstance, opts: &CertifyOptions) -> Result<Certificate> {
    if opts.depth == 0 {
        return Err(Error::Precondition("depth must be at least 1".into()));
    }
    let mut depth = opts.depth;
    while depth > 1 && predicted_bits(inst, depth) > F_BIT_CAP {
        depth -= 1;
    }
    if predicted_bits(inst, depth) > F_BIT_CAP {
        return Err(Error::BitBudgetExceeded {
            bits: predicted_bits(inst, depth),
            budget: F_BIT_CAP,
        });
    }
    let criterion = criterion_for(inst.d);
    let mut checks = Vec::new();
    let mut push = |name: String, relation: &str, ok: bool| {
        checks.push(Check { name, relation: relation.into(), ok });
    };

    let condition1 = check_condition1(inst);
    push("condition 1".into(), "v_p1(b) >= 1 and v_p1(x0) = 1", condition1.ok);

    let condition2 = check_condition2(inst, depth.max(4));
    if condition2.required {
        let h = condition2.hypotheses;
        push("condition 2a".into(), "p2 does not divide d-m", h.p2_coprime);
        push("condition 2b".into(), "v_p2(b) < min(v_p2(x0), 0)", h.b_dominates);
        push("condition 2c".into(), "(d-m) divides v_p2(b)", h.divides);
        push("condition 2d".into(), "gcd(m, v_p2(x0/b)) = 1", h.coprime_m);
        if h.all() {
            push(
                "ramification tower".into(),
                "m^k v_k is a positive integer prime to m at every level",
                condition2.ok,
            );
        }
    }

    let well_formed = inst.map().is_ok() && inst.s.is_positive() && inst.t.is_positive();
    let mut records = Vec::with_capacity(depth as usize);
    let mut evidence_level = EvidenceLevel::Deterministic;
    if well_formed {
        let rec = recursion_values(inst, depth);
        let direct = direct_values(inst, depth);
        let bad = inst.bad_product();
        let (f_def, dual_rel, cong_rel) = if inst.parity_case.is_even() {
            (
                "F_n = s^-1 (dtD)^(d^n) (f^n(eta) - x0)",
                "s^(d e_n - 1) (d-1)^((d-1)^n) M_n - d^(d^n) t^(d^n - 1) D^(d^n)",
                "(dtD)^(d^n) f^n(eta) = (-(d-1)^(d-1) s^(d^2))^(d^(n-1)) mod dtD",
            )
        } else {
            (
                "F_n = s^-2 (dt^2)^(d^n) (f^n(eta)^2 - x0^2)",
                "4^((d-2)^(n-1)) (d-2)^((d-2)^n) s^(2e_n - 2) M_n^2 - d^(d^n) t^(2d^n - 2)",
                if inst.parity_case == ParityCase::OddCase1 {
                    "s^-2 (dt^2)^(d^n) f^n(eta)^2 = 0 mod s, F_n = -d^(d^n) t^(2d^n-2) mod p1"
                } else {
                    "(dt^2)^(d^n) f^n(eta)^2 = (4(d-2)^(d-2) s^(2d))^(d^(n-1)) mod dt^2"
                },
            )
        };
        for (i, ((e, m_n, f_n), f_direct)) in rec.into_iter().zip(direct).enumerate() {
            let n = i as u32 + 1;
            let dual_path_ok = f_direct.is_integer() && f_direct.numer() == &f_n;
            let coprimality_ok = f_n.gcd(&bad).is_one();
            let congruence_ok = f_direct.is_integer() && check_step3_congruence(inst, n, f_direct.numer());
            let (plus, minus) = check_nonsquare(inst, &f_n);
            push(format!("F_{n} dual path"), &format!("{f_def} = {dual_rel}"), dual_path_ok);
            push(format!("F_{n} coprimality"), "gcd(F_n, bad primes) = 1", coprimality_ok);
            push(format!("step-3 congruence n={n}"), cong_rel, congruence_ok);
            push(format!("F_{n} nonsquare"), "legendre(F_n, p) = legendre(-F_n, p) = -1", plus && minus);
            let exhibited_q = opts.exhibit.then(|| exhibit_odd_prime_q(inst, n, &f_n, opts.trial_bound));
            if exhibited_q
                .as_ref()
                .is_some_and(|q| q.primality == Some(Primality::ProbablePrime))
            {
                evidence_level = EvidenceLevel::ProbabilisticPrimality;
            }
            records.push(CertDepthRecord {
                n,
                e_n: e,
                m_n: IntValue::new(&m_n, opts.full_values),
                f_n: IntValue::new(&f_n, opts.full_values),
                f_n_bits: arith::bits(&f_n),
                dual_path_ok,
                coprimality_ok,
                congruence_ok,
                nonsquare_plus: plus,
                nonsquare_minus: minus,
                exhibited_q,
                exact: Some(ExactValues { m_n, f_n, f_n_direct: f_direct }),
            });
        }
    } else {
        push("instance shape".into(), "f = x^d - b x^m with 0 < m < d, s, t > 0", false);
    }

    let mut eisenstein = Vec::new();
    if well_formed {
        for n in 1..=depth.min(EISENSTEIN_MAX_DEPTH) {
            let r = eisenstein_record(inst, n);
            push(format!("Eisenstein n={n}"), "f^n - x0 is Eisenstein at p1", r.ok);
            eisenstein.push(r);
        }
    }

    for r in inst.relations() {
        push(format!("instance: {}", r.name), &r.name, r.holds);
    }

    let failures: Vec<String> = checks.iter().filter(|c| !c.ok).map(|c| c.name.clone()).collect();
    let verdict = if failures.is_empty() { Verdict::Pass } else { Verdict::Fail };
    Ok(Certificate {
        instance: inst.clone(),
        requested_depth: opts.depth,
        depth,
        criterion,
        condition1,
        condition2,
        records,
        eisenstein,
        first_failure: failures.first().cloned(),
        failures,
        checks,
        verdict,
        evidence_level,
        scope: format!(
            "hypotheses verified for depths 1..{depth}; depths beyond rest on the inductive congruences"
        ),
    })
}
