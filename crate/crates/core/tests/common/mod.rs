//! Slow reference implementations shared by the integration tests.
//!
//! Angular momenta are passed doubled (`2j`, `2m`). Racah sums are carried
//! out in exact rational arithmetic; the single square root is taken last.

#![allow(dead_code)]

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};

fn fact(n: i32) -> BigInt {
    assert!(n >= 0, "factorial of {n}");
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn fr(n: i32) -> BigRational {
    BigRational::from_integer(fact(n))
}

fn half(twice: i32) -> i32 {
    assert!(twice % 2 == 0, "odd doubled sum {twice}");
    twice / 2
}

fn triangle(a: i32, b: i32, c: i32) -> bool {
    (a + b + c) % 2 == 0 && c >= (a - b).abs() && c <= a + b
}

/// `Δ(abc)²`
fn delta_sq(a: i32, b: i32, c: i32) -> BigRational {
    fr(half(a + b - c)) * fr(half(a - b + c)) * fr(half(-a + b + c)) / fr(half(a + b + c) + 1)
}

fn sign(k: i32) -> i32 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn to_value(sgn: i32, sum: BigRational, radicand: BigRational) -> f64 {
    if sum.is_zero() {
        return 0.0;
    }
    f64::from(sgn) * sum.to_f64().unwrap() * radicand.to_f64().unwrap().sqrt()
}

/// Exact-sum 3j symbol.
pub fn three_j(j1: i32, j2: i32, j3: i32, m1: i32, m2: i32, m3: i32) -> f64 {
    if m1 + m2 + m3 != 0 || !triangle(j1, j2, j3) {
        return 0.0;
    }
    for (j, m) in [(j1, m1), (j2, m2), (j3, m3)] {
        if m.abs() > j || (j + m) % 2 != 0 {
            return 0.0;
        }
    }
    let radicand = delta_sq(j1, j2, j3)
        * fr(half(j1 + m1))
        * fr(half(j1 - m1))
        * fr(half(j2 + m2))
        * fr(half(j2 - m2))
        * fr(half(j3 + m3))
        * fr(half(j3 - m3));
    let mut sum = BigRational::zero();
    for k in 0..=half(j1 + j2 - j3) {
        let args = [
            k,
            half(j3 - j2 + m1) + k,
            half(j3 - j1 - m2) + k,
            half(j1 + j2 - j3) - k,
            half(j1 - m1) - k,
            half(j2 + m2) - k,
        ];
        if args.iter().any(|&a| a < 0) {
            continue;
        }
        let den = args.iter().fold(BigInt::one(), |acc, &a| acc * fact(a));
        sum += BigRational::new(BigInt::from(sign(k)), den);
    }
    to_value(sign(half(j1 - j2 - m3)), sum, radicand)
}

/// Exact-sum 6j symbol `{a b c; d e f}`.
pub fn six_j(a: i32, b: i32, c: i32, d: i32, e: i32, f: i32) -> f64 {
    let triads = [(a, b, c), (a, e, f), (d, b, f), (d, e, c)];
    if triads.iter().any(|&(x, y, z)| !triangle(x, y, z)) {
        return 0.0;
    }
    let radicand = triads
        .iter()
        .fold(BigRational::one(), |acc, &(x, y, z)| acc * delta_sq(x, y, z));
    let lo = triads.iter().map(|&(x, y, z)| half(x + y + z)).max().unwrap();
    let hi = [half(a + b + d + e), half(a + c + d + f), half(b + c + e + f)]
        .into_iter()
        .min()
        .unwrap();
    let mut sum = BigRational::zero();
    for t in lo..=hi {
        let mut den = BigInt::one();
        for &(x, y, z) in &triads {
            den *= fact(t - half(x + y + z));
        }
        den *= fact(half(a + b + d + e) - t) * fact(half(a + c + d + f) - t) * fact(half(b + c + e + f) - t);
        sum += BigRational::new(BigInt::from(sign(t)) * fact(t + 1), den);
    }
    to_value(1, sum, radicand)
}

/// `<j1 m1 j2 m2 | j m>`
pub fn cg(j1: i32, m1: i32, j2: i32, m2: i32, j: i32, m: i32) -> f64 {
    f64::from(sign(half(j1 - j2 + m))) * f64::from(j + 1).sqrt() * three_j(j1, j2, j, m1, m2, -m)
}

/// Fine-structure element `<J mJ|d_q|J' mJ'>` per unit reduced element.
pub fn fine_dipole(j: i32, mj: i32, jp: i32, mjp: i32, q: i32) -> f64 {
    f64::from(sign(half(jp - 2 + mj))) * f64::from(j + 1).sqrt() * three_j(jp, 2, j, mjp, 2 * q, -mj)
}

/// `<F m|d_q|F' m'>` per unit reduced element, built in the uncoupled
/// `|J mJ>|I mI>` basis.
#[allow(clippy::too_many_arguments)]
pub fn hyperfine_uncoupled(j: i32, jp: i32, i: i32, f: i32, m: i32, fp: i32, mp: i32, q: i32) -> f64 {
    let mut total = 0.0;
    for mi in (-i..=i).step_by(2) {
        let mj = m - mi;
        let mjp = mp - mi;
        if mj.abs() > j || mjp.abs() > jp {
            continue;
        }
        total += cg(j, mj, i, mi, f, m) * cg(jp, mjp, i, mi, fp, mp) * fine_dipole(j, mj, jp, mjp, q);
    }
    total
}
