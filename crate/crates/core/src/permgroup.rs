//! Permutations, subgroup closure, the S_d generation check, and portraits of
//! automorphisms of the complete d-ary rooted tree.
//!
//! Points are 0-based internally and 1-based in cycle notation. Composition
//! `a.compose(&b)` applies `b` first.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::error::{Error, Result};

/// Largest degree accepted by [`closure`].
pub const MAX_CLOSURE_DEGREE: usize = 8;
/// Largest group order [`enumerate_wreath`] will walk.
pub const MAX_ENUMERATION: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(d: usize) -> Self {
        Perm { images: (0..d as u32).collect() }
    }

    /// From 0-based images.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &i in &images {
            let i = i as usize;
            if i >= d || seen[i] {
                return Err(Error::Parse(format!("not a permutation: {images:?}")));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    /// From 1-based images, the JSON array form.
    pub fn from_one_based(images: &[u32]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::Parse("images are 1-based".into()));
        }
        Perm::from_images(images.iter().map(|&i| i - 1).collect())
    }

    /// Parses `"(1 2)(3 4 5)"` on `{1..d}`; `"()"` or `""` is the identity.
    pub fn parse_cycles(d: usize, s: &str) -> Result<Self> {
        let mut images: Vec<u32> = (0..d as u32).collect();
        let mut seen = vec![false; d];
        let bad = |msg: &str| Error::Parse(format!("bad cycle notation {s:?}: {msg}"));
        let mut rest = s.trim();
        while !rest.is_empty() {
            let body_end = rest.find(')').ok_or_else(|| bad("missing ')'"))?;
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| bad("expected '('"))?;
            let body = &body[..body_end - 1];
            let pts = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| bad("non-numeric point")))
                .collect::<Result<Vec<_>>>()?;
            for &pt in &pts {
                if pt == 0 || pt > d {
                    return Err(bad("point out of range"));
                }
                if seen[pt - 1] {
                    return Err(bad("point repeated"));
                }
                seen[pt - 1] = true;
            }
            for (k, &pt) in pts.iter().enumerate() {
                images[pt - 1] = (pts[(k + 1) % pts.len()] - 1) as u32;
            }
            rest = rest[body_end + 1..].trim_start();
        }
        Ok(Perm { images })
    }

    /// Transposition of 0-based points `i` and `j`.
    pub fn transposition(d: usize, i: usize, j: usize) -> Self {
        let mut p = Perm::identity(d);
        p.images.swap(i, j);
        p
    }

    /// The cycle `(0 1 ... k-1)` on the first k points.
    pub fn cycle(d: usize, k: usize) -> Self {
        let mut p = Perm::identity(d);
        for i in 0..k {
            p.images[i] = ((i + 1) % k) as u32;
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    /// `self ∘ other`: `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm {
            images: other.images.iter().map(|&i| self.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize] = i as u32;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut j = self.apply(start);
            while j != start {
                seen[j] = true;
                cyc.push(j);
                j = self.apply(j);
            }
            out.push(cyc);
        }
        out
    }

    /// Cycle lengths, descending, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn is_transposition(&self) -> bool {
        let moved = self.images.iter().enumerate().filter(|(i, &j)| *i as u32 != j).count();
        moved == 2
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let pts: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "({})", pts.join(" "))?;
        }
        Ok(())
    }
}

fn check_degrees(d: usize, gens: &[Perm]) -> Result<()> {
    match gens.iter().find(|g| g.degree() != d) {
        Some(g) => Err(Error::ShapeMismatch(format!("{g} is not on {d} points"))),
        None => Ok(()),
    }
}

/// Subgroup of S_d generated by `gens`, by breadth-first multiplication.
pub fn closure(d: usize, gens: &[Perm], cap: Option<usize>) -> Result<HashSet<Perm>> {
    if d > MAX_CLOSURE_DEGREE {
        return Err(Error::Precondition(format!("closure supports d <= {MAX_CLOSURE_DEGREE}, got {d}")));
    }
    check_degrees(d, gens)?;
    let cap = cap.unwrap_or_else(|| factorial(d).to_usize().unwrap_or(usize::MAX));
    let id = Perm::identity(d);
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.compose(&x);
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return Err(Error::ClosureCapExceeded(cap));
                }
                queue.push_back(y);
            }
        }
    }
    Ok(seen)
}

/// Orbit of point `start` under the group generated by `gens`.
pub fn orbit(d: usize, gens: &[Perm], start: usize) -> Vec<usize> {
    let mut seen = vec![false; d];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(i) = stack.pop() {
        for g in gens {
            let j = g.apply(i);
            if !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    (0..d).filter(|&i| seen[i]).collect()
}

pub fn is_transitive(d: usize, gens: &[Perm]) -> bool {
    orbit(d, gens, 0).len() == d
}

pub fn factorial(d: usize) -> BigUint {
    (1..=d).fold(BigUint::one(), |acc, k| acc * k)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationVerdict {
    pub d: usize,
    pub m: usize,
    /// the closure of G contains a transposition
    pub has_transposition: bool,
    /// G is transitive on {1..d}
    pub transitive: bool,
    /// H fixes {m+1..d} and is transitive on {1..m}
    pub h_ok: bool,
    pub hypotheses_hold: bool,
    pub group_order: u64,
    /// closure of G is all of S_d
    pub conclusion_holds: bool,
}

/// Checks the three hypotheses on (G, H) and, separately, whether G = S_d.
pub fn gen_sd_check(d: usize, m: usize, g_gens: &[Perm], h_gens: &[Perm]) -> Result<GenerationVerdict> {
    if d < 3 || 2 * m <= d || m >= d || m.gcd(&d) != 1 {
        return Err(Error::Precondition(format!(
            "need d >= 3, d/2 < m < d and gcd(m, d) = 1, got d={d}, m={m}"
        )));
    }
    check_degrees(d, g_gens)?;
    check_degrees(d, h_gens)?;
    let g = closure(d, g_gens, None)?;
    if let Some(h) = h_gens.iter().find(|h| !g.contains(h)) {
        return Err(Error::Precondition(format!("H generator {h} is not in G")));
    }
    let has_transposition = g.iter().any(Perm::is_transposition);
    let transitive = is_transitive(d, g_gens);
    let fixes_tail = h_gens.iter().all(|h| (m..d).all(|i| h.apply(i) == i));
    let h_ok = fixes_tail && orbit(d, h_gens, 0).len() == m;
    let hypotheses_hold = has_transposition && transitive && h_ok;
    let group_order = g.len() as u64;
    Ok(GenerationVerdict {
        d,
        m,
        has_transposition,
        transitive,
        h_ok,
        hypotheses_hold,
        group_order,
        conclusion_holds: BigUint::from(group_order) == factorial(d),
    })
}

/// `(d!)^{(d^n - 1)/(d - 1)}`
pub fn wreath_order(d: usize, n: u32) -> BigUint {
    num_traits::pow(factorial(d), internal_nodes(d, n))
}

/// Number of internal nodes of the depth-n d-ary tree.
pub fn internal_nodes(d: usize, n: u32) -> usize {
    (0..n).map(|k| d.pow(k)).sum()
}

/// Index of the first node at `level` in level order.
fn level_offset(d: usize, level: u32) -> usize {
    internal_nodes(d, level)
}

/// A portrait: one label in S_d per internal node, nodes in level order with
/// children of a node ordered by their digit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreeAutomorphism {
    d: usize,
    n: u32,
    portrait: Vec<Perm>,
}

impl TreeAutomorphism {
    pub fn new(d: usize, n: u32, portrait: Vec<Perm>) -> Result<Self> {
        if portrait.len() != internal_nodes(d, n) {
            return Err(Error::ShapeMismatch(format!(
                "portrait has {} labels, tree ({d},{n}) has {} internal nodes",
                portrait.len(),
                internal_nodes(d, n)
            )));
        }
        check_degrees(d, &portrait)?;
        Ok(TreeAutomorphism { d, n, portrait })
    }

    pub fn identity(d: usize, n: u32) -> Self {
        TreeAutomorphism {
            d,
            n,
            portrait: vec![Perm::identity(d); internal_nodes(d, n)],
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn portrait(&self) -> &[Perm] {
        &self.portrait
    }

    /// Label at the node reached by the 0-based digit path `word`.
    pub fn label(&self, word: &[usize]) -> &Perm {
        &self.portrait[node_index(self.d, word)]
    }

    pub fn set_label(&mut self, word: &[usize], p: Perm) {
        let i = node_index(self.d, word);
        self.portrait[i] = p;
    }

    /// Image of a vertex given as a digit path of any length ≤ n.
    pub fn apply_word(&self, word: &[usize]) -> Vec<usize> {
        let mut node = 0usize;
        let mut out = Vec::with_capacity(word.len());
        for (k, &digit) in word.iter().enumerate() {
            out.push(self.portrait[node].apply(digit));
            node = level_offset(self.d, k as u32 + 1) + (node - level_offset(self.d, k as u32)) * self.d + digit;
        }
        out
    }

    /// Permutation of the d^n leaves, leaf index = base-d value of the path.
    pub fn leaf_action(&self) -> Perm {
        let leaves = self.d.pow(self.n);
        let mut images = Vec::with_capacity(leaves);
        let mut word = vec![0usize; self.n as usize];
        for leaf in 0..leaves {
            let mut x = leaf;
            for k in (0..self.n as usize).rev() {
                word[k] = x % self.d;
                x /= self.d;
            }
            let img = self.apply_word(&word);
            images.push(img.iter().fold(0usize, |acc, &dg| acc * self.d + dg) as u32);
        }
        Perm { images }
    }

    pub fn leaf_cycle_type(&self) -> Vec<usize> {
        self.leaf_action().cycle_type()
    }
}

fn node_index(d: usize, word: &[usize]) -> usize {
    level_offset(d, word.len() as u32) + word.iter().fold(0, |acc, &dg| acc * d + dg)
}

/// `a ∘ b`, acting by `b` first: `(a∘b)_u = a_{b(u)} ∘ b_u`.
pub fn compose_tree(a: &TreeAutomorphism, b: &TreeAutomorphism) -> Result<TreeAutomorphism> {
    if a.d != b.d || a.n != b.n {
        return Err(Error::ShapeMismatch(format!(
            "({},{}) vs ({},{})",
            a.d, a.n, b.d, b.n
        )));
    }
    let d = a.d;
    let mut portrait = Vec::with_capacity(a.portrait.len());
    for level in 0..a.n {
        let count = d.pow(level);
        let mut word = vec![0usize; level as usize];
        for idx in 0..count {
            let mut x = idx;
            for k in (0..level as usize).rev() {
                word[k] = x % d;
                x /= d;
            }
            let bu = b.apply_word(&word);
            portrait.push(a.label(&bu).compose(b.label(&word)));
        }
    }
    Ok(TreeAutomorphism { d, n: a.n, portrait })
}

/// All d! elements of S_d in lexicographic image order.
pub fn all_perms(d: usize) -> Vec<Perm> {
    fn rec(cur: &mut Vec<u32>, used: &mut [bool], out: &mut Vec<Perm>) {
        let d = used.len();
        if cur.len() == d {
            out.push(Perm { images: cur.clone() });
            return;
        }
        for i in 0..d {
            if !used[i] {
                used[i] = true;
                cur.push(i as u32);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(d), &mut vec![false; d], &mut out);
    out
}

fn check_enumerable(d: usize, n: u32) -> Result<u64> {
    if d < 2 {
        return Err(Error::Precondition(format!("need d >= 2, got {d}")));
    }
    let order = wreath_order(d, n);
    match order.to_u64() {
        Some(o) if o <= MAX_ENUMERATION => Ok(o),
        _ => Err(Error::Precondition(format!(
            "wreath product ({d},{n}) has order {order}, over {MAX_ENUMERATION}"
        ))),
    }
}

pub fn is_enumerable(d: usize, n: u32) -> bool {
    check_enumerable(d, n).is_ok()
}

/// Every element of the wreath product, each exactly once.
pub fn enumerate_wreath(d: usize, n: u32) -> Result<Vec<TreeAutomorphism>> {
    let order = check_enumerable(d, n)?;
    let sd = all_perms(d);
    let nodes = internal_nodes(d, n);
    let mut digits = vec![0usize; nodes];
    let mut out = Vec::with_capacity(order as usize);
    loop {
        out.push(TreeAutomorphism {
            d,
            n,
            portrait: digits.iter().map(|&i| sd[i].clone()).collect(),
        });
        let mut k = 0;
        loop {
            if k == nodes {
                return Ok(out);
            }
            digits[k] += 1;
            if digits[k] < sd.len() {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

/// Exact frequency of each leaf cycle type over the whole wreath product.
pub fn leaf_type_distribution(d: usize, n: u32) -> Result<BTreeMap<Vec<usize>, Rational>> {
    let all = enumerate_wreath(d, n)?;
    let total = all.len() as i64;
    let mut counts: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
    for a in &all {
        *counts.entry(a.leaf_cycle_type()).or_default() += 1;
    }
    Ok(counts
        .into_iter()
        .map(|(k, c)| (k, crate::arith::rat(c, total)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn c(d: usize, s: &str) -> Perm {
        Perm::parse_cycles(d, s).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let p = c(5, "(1 2 3)(4 5)");
        assert_eq!(p.images(), &[1, 2, 0, 4, 3]);
        assert_eq!(p.to_string(), "(1 2 3)(4 5)");
        assert_eq!(c(3, "()").to_string(), "()");
        assert!(Perm::parse_cycles(3, "(1 4)").is_err());
        assert!(Perm::parse_cycles(3, "(1 2)(2 3)").is_err());
        assert_eq!(Perm::from_one_based(&[2, 3, 1]).unwrap(), c(3, "(1 2 3)"));
    }

    #[test]
    fn composition_applies_right_first() {
        let a = c(3, "(1 2)");
        let b = c(3, "(2 3)");
        // b sends 1 -> 1, then a sends 1 -> 2
        assert_eq!(a.compose(&b).apply(0), 1);
        assert_eq!(a.compose(&b), c(3, "(1 2 3)"));
    }

    #[test]
    fn closure_examples() {
        assert_eq!(closure(3, &[c(3, "(1 2)"), c(3, "(1 2 3)")], None).unwrap().len(), 6);
        assert_eq!(closure(4, &[Perm::identity(4)], None).unwrap().len(), 1);
        assert_eq!(closure(4, &[], None).unwrap().len(), 1);
        assert_eq!(closure(5, &[c(5, "(1 2 3 4 5)"), c(5, "(1 2)")], None).unwrap().len(), 120);
        assert!(matches!(
            closure(5, &[c(5, "(1 2 3 4 5)"), c(5, "(1 2)")], Some(50)),
            Err(Error::ClosureCapExceeded(50))
        ));
    }

    #[test]
    fn generation_examples() {
        let v = gen_sd_check(3, 2, &[c(3, "(1 2 3)"), c(3, "(2 3)")], &[c(3, "(1 2)")]).unwrap();
        assert!(v.hypotheses_hold && v.conclusion_holds);

        let v = gen_sd_check(5, 3, &[c(5, "(1 2 3 4 5)"), c(5, "(4 5)")], &[c(5, "(1 2 3)")]).unwrap();
        assert!(v.hypotheses_hold && v.conclusion_holds);

        let v = gen_sd_check(5, 3, &[c(5, "(1 2 3 4 5)")], &[]).unwrap();
        assert!(!v.has_transposition && !v.hypotheses_hold);
        assert_eq!(v.group_order, 5);

        assert!(gen_sd_check(4, 2, &[], &[]).is_err());
        assert!(gen_sd_check(5, 3, &[c(5, "(1 2 3 4 5)")], &[c(5, "(1 2)")]).is_err());
    }

    #[test]
    fn wreath_orders() {
        assert_eq!(wreath_order(2, 2), BigUint::from(8u32));
        assert_eq!(wreath_order(2, 3), BigUint::from(128u32));
        assert_eq!(wreath_order(3, 2), BigUint::from(1296u32));
        assert_eq!(wreath_order(2, 0), BigUint::from(1u32));
    }

    #[test]
    fn leaf_types_by_hand() {
        let id = TreeAutomorphism::identity(2, 2);
        assert_eq!(id.leaf_cycle_type(), vec![1, 1, 1, 1]);
        assert!(id.leaf_action().is_identity());

        let swap = c(2, "(1 2)");
        let mut a = TreeAutomorphism::identity(2, 2);
        a.set_label(&[], swap.clone());
        assert_eq!(a.leaf_cycle_type(), vec![2, 2]);
        a.set_label(&[0], swap);
        assert_eq!(a.leaf_cycle_type(), vec![4]);
    }

    #[test]
    fn tree_composition_convention() {
        let swap = c(2, "(1 2)");
        let mut a = TreeAutomorphism::identity(2, 2);
        a.set_label(&[0], swap.clone());
        let mut b = TreeAutomorphism::identity(2, 2);
        b.set_label(&[], swap);
        let ab = compose_tree(&a, &b).unwrap();
        assert_eq!(ab.leaf_action(), a.leaf_action().compose(&b.leaf_action()));
        // b moves leaf 11 (index 3) to 01, then a flips under 0: 00
        assert_eq!(ab.leaf_action().apply(3), 0);
        assert!(compose_tree(&a, &TreeAutomorphism::identity(2, 3)).is_err());
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate_wreath(2, 2).unwrap().len(), 8);
        assert_eq!(enumerate_wreath(2, 3).unwrap().len(), 128);
        let all = enumerate_wreath(3, 2).unwrap();
        assert_eq!(all.len(), 1296);
        let distinct: HashSet<_> = all.iter().map(|a| a.leaf_action()).collect();
        assert_eq!(distinct.len(), 1296);
        assert!(enumerate_wreath(3, 3).is_err());
    }

    #[test]
    fn distributions() {
        let dist = leaf_type_distribution(2, 2).unwrap();
        assert_eq!(dist[&vec![1, 1, 1, 1]], rat(1, 8));
        assert_eq!(dist[&vec![2, 1, 1]], rat(2, 8));
        assert_eq!(dist[&vec![2, 2]], rat(3, 8));
        assert_eq!(dist[&vec![4]], rat(2, 8));
        let dist = leaf_type_distribution(3, 1).unwrap();
        assert_eq!(dist[&vec![1, 1, 1]], rat(1, 6));
        assert_eq!(dist[&vec![2, 1]], rat(3, 6));
        assert_eq!(dist[&vec![3]], rat(2, 6));
    }
}
