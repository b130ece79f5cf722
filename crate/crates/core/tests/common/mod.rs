//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's polynomial or certification code.

#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn qi(n: &BigInt) -> Q {
    Q::from_integer(n.clone())
}

/// Determinant by plain Gaussian elimination over the rationals.
pub fn det(mut a: Vec<Vec<Q>>) -> Q {
    let n = a.len();
    let mut sign = Q::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Q::zero();
        };
        if piv != col {
            a.swap(piv, col);
            sign = -sign;
        }
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let k = &a[r][col] / &a[col][col];
            for c in col..n {
                let sub = &k * &a[col][c];
                a[r][c] -= sub;
            }
        }
    }
    (0..n).fold(sign, |acc, i| acc * &a[i][i])
}

fn trim(mut c: Vec<Q>) -> Vec<Q> {
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    c
}

/// Sylvester resultant of two polynomials given low-to-high.
pub fn sylvester_resultant(f: &[Q], g: &[Q]) -> Q {
    let (f, g) = (trim(f.to_vec()), trim(g.to_vec()));
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    if size == 0 {
        return Q::one();
    }
    let mut rows = vec![vec![Q::zero(); size]; size];
    for i in 0..n {
        for (j, c) in f.iter().rev().enumerate() {
            rows[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in g.iter().rev().enumerate() {
            rows[n + i][i + j] = c.clone();
        }
    }
    det(rows)
}

/// `(-1)^(n(n-1)/2) Res(f, f') / lc(f)`
pub fn sylvester_disc(f: &[Q]) -> Q {
    let f = trim(f.to_vec());
    let n = f.len() - 1;
    let df: Vec<Q> = f.iter().enumerate().skip(1).map(|(i, c)| c * q(i as i64)).collect();
    let r = sylvester_resultant(&f, &df) / f.last().unwrap();
    if (n * (n - 1) / 2) % 2 == 1 {
        -r
    } else {
        r
    }
}

pub fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `f(g(x))` by Horner.
pub fn poly_compose(f: &[Q], g: &[Q]) -> Vec<Q> {
    let mut acc = vec![Q::zero()];
    for c in f.iter().rev() {
        acc = poly_mul(&acc, g);
        acc[0] += c;
    }
    trim(acc)
}

/// `x^d - b x^m`, low-to-high.
pub fn map_coeffs(d: usize, m: usize, b: &Q) -> Vec<Q> {
    let mut c = vec![Q::zero(); d + 1];
    c[d] = Q::one();
    c[m] = -b.clone();
    c
}

pub fn eval(c: &[Q], x: &Q) -> Q {
    c.iter().rev().fold(Q::zero(), |acc, k| acc * x + k)
}

pub fn pow(b: &BigInt, e: u64) -> BigInt {
    num_traits::pow(b.clone(), e as usize)
}

/// Exact `F_n` for the even family, straight from its definition
/// `F_n = (dtD)^{d^n} (f^n(η) - x0) / s` with `η = (d-1)b/d`.
pub fn even_f_oracle(d: u32, s: &BigInt, t: &BigInt, n: u32) -> BigInt {
    let (sb, tb) = (s.clone(), t.clone());
    let big_d = pow(&sb, d as u64 - 1) + pow(&tb, d as u64 - 1);
    let b = Q::new(pow(&sb, d as u64), &tb * &big_d);
    let x0 = Q::new(sb.clone(), tb.clone());
    let f = map_coeffs(d as usize, d as usize - 1, &b);
    let mut y = &b * q(d as i64 - 1) / q(d as i64);
    for _ in 0..n {
        y = eval(&f, &y);
    }
    let scale = BigInt::from(d) * &tb * &big_d;
    let v = qi(&pow(&scale, (d as u64).pow(n))) * (y - x0) / qi(&sb);
    assert!(v.is_integer(), "F_n oracle not integral");
    v.to_integer()
}

/// Exact `F_n` for the odd family from `F_n = (dt^2)^{d^n} (f^n(η)^2 - x0^2) / s^2`.
/// Squares are tracked directly: `f(x)^2 = (x^2)^(d-2) (x^2 - b)^2` and `η^2 = (d-2)b/d`.
pub fn odd_f_oracle(d: u32, s: &BigInt, t: &BigInt, n: u32) -> BigInt {
    let (sb, tb) = (s.clone(), t.clone());
    let x0 = Q::new(sb.clone(), tb.clone());
    let b = &x0 * &x0;
    let mut z = &b * q(d as i64 - 2) / q(d as i64);
    for _ in 0..n {
        z = num_traits::pow(z.clone(), d as usize - 2) * num_traits::pow(&z - &b, 2);
    }
    let scale = BigInt::from(d) * &tb * &tb;
    let v = qi(&pow(&scale, (d as u64).pow(n))) * (z - &b) / qi(&(&sb * &sb));
    assert!(v.is_integer(), "F_n oracle not integral");
    v.to_integer()
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    !n.is_negative() && {
        let r = n.sqrt();
        &r * &r == *n
    }
}

pub fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_odoni"))
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn odoni(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("spawn odoni")
}
