//! Frobenius cycle types on the preimage tree, read off from factoring the
//! iterates `f^k - x0` modulo good primes, and their comparison with the
//! exact wreath-product distribution. Statistical evidence only.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::{self, Rational};
use crate::construct::IterInstance;
use crate::error::{Error, Result};
use crate::permgroup;
use crate::poly::{factor_mod_p, PolyModP};

/// Primes are scanned from here up.
pub const SCAN_START: u64 = 1000;
pub const SCAN_CAP: u64 = 50_000_000;

/// Irreducible factors of `f^k - x0` mod p for k = 0..=n. Level 0 is the
/// root `x - x0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorTree {
    pub p: u64,
    pub d: u32,
    /// factor degrees per level
    pub levels: Vec<Vec<usize>>,
    /// `parents[k][i]` is the index in level k-1 of factor i at level k;
    /// `parents[0]` is empty
    pub parents: Vec<Vec<usize>>,
}

impl FactorTree {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// Leaf cycle type, descending.
    pub fn leaf_type(&self) -> Vec<usize> {
        let mut t = self.levels.last().cloned().unwrap_or_default();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// Degrees at level k sum to d^k, each parent of degree e has children
    /// of total degree d·e, each child degree a multiple of e. Exactly the
    /// shapes some element of the wreath product produces.
    pub fn is_consistent(&self) -> bool {
        let d = self.d as usize;
        for (k, level) in self.levels.iter().enumerate() {
            if level.iter().sum::<usize>() != d.pow(k as u32) {
                return false;
            }
            if k == 0 {
                continue;
            }
            let prev = &self.levels[k - 1];
            let mut child_sum = vec![0usize; prev.len()];
            for (i, &par) in self.parents[k].iter().enumerate() {
                if par >= prev.len() || level[i] % prev[par] != 0 {
                    return false;
                }
                child_sum[par] += level[i];
            }
            if child_sum.iter().zip(prev).any(|(&s, &e)| s != d * e) {
                return false;
            }
        }
        true
    }
}

fn reduce(q: &Rational, p: u64) -> Result<u64> {
    arith::reduce_mod(q, p).ok_or(Error::BadReduction(p))
}

/// `f` reduced mod p, or bad reduction.
fn map_mod_p(inst: &IterInstance, p: u64) -> Result<PolyModP> {
    let b = reduce(&inst.b, p)?;
    let mut coeffs = vec![0u64; inst.d as usize + 1];
    coeffs[inst.d as usize] = 1;
    coeffs[inst.m as usize] = (p - b) % p;
    Ok(PolyModP::new(p, coeffs))
}

/// `f^k - x0 mod p` for k = 0..=n, rejecting p if the level-n iterate is
/// not squarefree (its discriminant, which the lower ones divide, vanishes).
fn iterates_mod_p(inst: &IterInstance, n: u32, p: u64) -> Result<Vec<PolyModP>> {
    if p == 2 || !arith::is_prime_u64(p) {
        return Err(Error::NotOddPrime(p.into()));
    }
    let f = map_mod_p(inst, p)?;
    let x0 = PolyModP::new(p, vec![reduce(&inst.x0, p)?]);
    let mut g = PolyModP::x(p);
    let mut out = vec![g.sub(&x0)];
    for _ in 0..n {
        g = PolyModP::compose(&f, &g);
        out.push(g.sub(&x0));
    }
    let top = out.last().unwrap();
    if top.gcd(&top.derivative()).degree() > 0 {
        return Err(Error::BadReduction(p));
    }
    Ok(out)
}

pub fn factor_tree(inst: &IterInstance, n: u32, p: u64, seed: u64) -> Result<FactorTree> {
    let iterates = iterates_mod_p(inst, n, p)?;
    let f = map_mod_p(inst, p)?;
    let mut factors: Vec<Vec<PolyModP>> = Vec::with_capacity(n as usize + 1);
    for (k, g) in iterates.iter().enumerate() {
        let fs = if k == 0 {
            vec![g.clone()]
        } else {
            factor_mod_p(g, seed ^ p.rotate_left(17) ^ k as u64)?
                .into_iter()
                .map(|(h, _)| h)
                .collect()
        };
        factors.push(fs);
    }
    let mut parents = vec![Vec::new()];
    for k in 1..factors.len() {
        let mut links = Vec::with_capacity(factors[k].len());
        for h in &factors[k] {
            let par = factors[k - 1]
                .iter()
                .position(|g| PolyModP::compose_mod(g, &f, h).is_zero())
                .ok_or_else(|| Error::Precondition(format!("factor {h} has no parent mod {p}")))?;
            links.push(par);
        }
        parents.push(links);
    }
    Ok(FactorTree {
        p,
        d: inst.d,
        levels: factors.iter().map(|l| l.iter().map(PolyModP::degree).collect()).collect(),
        parents,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeCount {
    pub cycle_type: Vec<usize>,
    pub count: u64,
    pub frequency: f64,
    /// exact reference frequency, when the wreath product is enumerable
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reference: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrobeniusStats {
    pub label: String,
    pub d: u32,
    pub n: u32,
    pub prime_count: usize,
    pub seed: u64,
    pub scan_start: u64,
    pub last_prime: u64,
    pub skipped_bad_primes: u64,
    pub counts: Vec<TypeCount>,
    /// the leaf type `[d^n]`: f^n - x0 irreducible mod p
    pub irreducible_fraction: f64,
    /// primes whose factor tree is not a wreath-product shape
    pub unrealizable: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tv_distance: Option<f64>,
}

impl FrobeniusStats {
    pub fn empirical(&self) -> BTreeMap<Vec<usize>, f64> {
        self.counts.iter().map(|c| (c.cycle_type.clone(), c.frequency)).collect()
    }
}

/// Factor trees at the first `prime_count` good primes above `start`.
pub fn scan_trees(inst: &IterInstance, n: u32, prime_count: usize, seed: u64, start: u64) -> Result<(Vec<FactorTree>, u64)> {
    let mut trees = Vec::with_capacity(prime_count);
    let mut skipped = 0;
    let mut p = start.max(3);
    while trees.len() < prime_count {
        p += 1;
        if p > SCAN_CAP {
            return Err(Error::InsufficientPrimes {
                found: trees.len(),
                wanted: prime_count,
                cap: SCAN_CAP,
            });
        }
        if !arith::is_prime_u64(p) {
            continue;
        }
        match factor_tree(inst, n, p, seed) {
            Ok(t) => trees.push(t),
            Err(Error::BadReduction(_)) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok((trees, skipped))
}

pub fn sample_distribution(inst: &IterInstance, n: u32, prime_count: usize, seed: u64) -> Result<FrobeniusStats> {
    if prime_count == 0 {
        return Err(Error::Precondition("prime_count must be positive".into()));
    }
    let (trees, skipped) = scan_trees(inst, n, prime_count, seed, SCAN_START)?;
    let reference = permgroup::leaf_type_distribution(inst.d as usize, n).ok();
    let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    let mut unrealizable = Vec::new();
    let full = vec![(inst.d as usize).pow(n)];
    let mut irreducible = 0u64;
    for t in &trees {
        let ty = t.leaf_type();
        let in_reference = reference.as_ref().map_or(true, |r| r.contains_key(&ty));
        if !t.is_consistent() || !in_reference {
            unrealizable.push(t.p);
        }
        if ty == full {
            irreducible += 1;
        }
        *counts.entry(ty).or_default() += 1;
    }
    let total = trees.len() as f64;
    let counts: Vec<TypeCount> = counts
        .into_iter()
        .map(|(cycle_type, count)| TypeCount {
            reference: reference
                .as_ref()
                .map(|r| arith::format_rational(&r.get(&cycle_type).cloned().unwrap_or_else(num_traits::Zero::zero))),
            cycle_type,
            count,
            frequency: count as f64 / total,
        })
        .collect();
    let mut stats = FrobeniusStats {
        label: "statistical".into(),
        d: inst.d,
        n,
        prime_count,
        seed,
        scan_start: SCAN_START,
        last_prime: trees.last().map_or(0, |t| t.p),
        skipped_bad_primes: skipped,
        counts,
        irreducible_fraction: irreducible as f64 / total,
        unrealizable,
        tv_distance: None,
    };
    if let Some(r) = &reference {
        stats.tv_distance = Some(tv_distance(&stats.empirical(), r));
    }
    Ok(stats)
}

/// Total-variation distance between an empirical and an exact distribution.
pub fn tv_distance(empirical: &BTreeMap<Vec<usize>, f64>, reference: &BTreeMap<Vec<usize>, Rational>) -> f64 {
    let mut keys: Vec<&Vec<usize>> = empirical.keys().chain(reference.keys()).collect();
    keys.sort();
    keys.dedup();
    0.5 * keys
        .into_iter()
        .map(|k| {
            let e = empirical.get(k).copied().unwrap_or(0.0);
            let r = reference.get(k).and_then(|q| q.to_f64()).unwrap_or(0.0);
            (e - r).abs()
        })
        .sum::<f64>()
}

/// TV distance against the exact wreath-product distribution for (d, n).
pub fn chebotarev_distance(empirical: &BTreeMap<Vec<usize>, f64>, d: usize, n: u32) -> Result<f64> {
    Ok(tv_distance(empirical, &permgroup::leaf_type_distribution(d, n)?))
}
