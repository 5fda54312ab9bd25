//! Wigner 3j and 6j symbols.
//!
//! Both symbols are evaluated with the Racah single-sum formulas. Every
//! factorial ratio is formed in log space from a cached table and the
//! alternating sum is accumulated with Neumaier compensation. Arguments are
//! [`HalfInt`]s, so triangle and parity checks are exact integer tests.
//!
//! Phases follow the Condon-Shortley convention.

use std::sync::OnceLock;

use crate::error::AngularError;
use crate::halfint::HalfInt;

/// Largest `2j` accepted by the symbol routines.
const MAX_TWICE_J: i32 = 100;
const LN_FACT_LEN: usize = 4 * MAX_TWICE_J as usize + 8;

fn ln_factorial(n: i32) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = vec![0.0; LN_FACT_LEN];
        let mut prod = 1.0_f64;
        for k in 1..LN_FACT_LEN {
            // n! itself is representable up to 170!; past that, accumulate logs
            if k <= 170 {
                prod *= k as f64;
                t[k] = prod.ln();
            } else {
                t[k] = t[k - 1] + (k as f64).ln();
            }
        }
        t
    });
    debug_assert!(n >= 0);
    table[n as usize]
}

/// Neumaier-compensated sum.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

fn check_j(j: HalfInt) -> Result<(), AngularError> {
    if j.twice() < 0 {
        return Err(AngularError::NegativeJ(j));
    }
    if j.twice() > MAX_TWICE_J {
        return Err(AngularError::OutOfRange(j));
    }
    Ok(())
}

/// Whether (a, b, c) closes: integer perimeter and triangle inequality.
fn triangle(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
    let (a, b, c) = (a.twice(), b.twice(), c.twice());
    (a + b + c) % 2 == 0 && c <= a + b && c >= (a - b).abs()
}

/// ln Δ(abc) = ln[(a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)!]
fn ln_delta(a: HalfInt, b: HalfInt, c: HalfInt) -> f64 {
    let (a, b, c) = (a.twice(), b.twice(), c.twice());
    ln_factorial((a + b - c) / 2) + ln_factorial((a - b + c) / 2) + ln_factorial((-a + b + c) / 2)
        - ln_factorial((a + b + c) / 2 + 1)
}

/// Wigner 3j symbol `(j1 j2 j3; m1 m2 m3)`.
///
/// Returns exactly zero when the triad is not closed, when `m1 + m2 + m3 != 0`
/// or when some `|m| > j`. Mixed integer/half-integer `(j, m)` pairs and
/// negative `j` are rejected.
pub fn wigner3j(
    j1: HalfInt,
    j2: HalfInt,
    j3: HalfInt,
    m1: HalfInt,
    m2: HalfInt,
    m3: HalfInt,
) -> Result<f64, AngularError> {
    for (j, m) in [(j1, m1), (j2, m2), (j3, m3)] {
        check_j(j)?;
        if !j.same_parity(m) {
            return Err(AngularError::MixedParity { j, m });
        }
    }
    if (m1 + m2 + m3).twice() != 0 || !triangle(j1, j2, j3) {
        return Ok(0.0);
    }
    if m1.abs() > j1 || m2.abs() > j2 || m3.abs() > j3 {
        return Ok(0.0);
    }

    // all quantities below are integers once halved
    let h = |x: HalfInt| x.twice() / 2;
    let (a, b, c) = (j1 + j2 - j3, j1 - m1, j2 + m2);
    let (d, e) = (j3 - j2 + m1, j3 - j1 - m2);
    let k_min = 0.max(-h(d)).max(-h(e));
    let k_max = h(a).min(h(b)).min(h(c));
    if k_min > k_max {
        return Ok(0.0);
    }

    let ln_pre = 0.5
        * (ln_delta(j1, j2, j3)
            + ln_factorial(h(j1 + m1))
            + ln_factorial(h(j1 - m1))
            + ln_factorial(h(j2 + m2))
            + ln_factorial(h(j2 - m2))
            + ln_factorial(h(j3 + m3))
            + ln_factorial(h(j3 - m3)));

    let mut acc = CompensatedSum::default();
    for k in k_min..=k_max {
        let ln_den = ln_factorial(k)
            + ln_factorial(h(d) + k)
            + ln_factorial(h(e) + k)
            + ln_factorial(h(a) - k)
            + ln_factorial(h(b) - k)
            + ln_factorial(h(c) - k);
        let term = (ln_pre - ln_den).exp();
        acc.add(if k % 2 == 0 { term } else { -term });
    }

    let phase_exp = h(j1 - j2 - m3);
    let sign = if phase_exp.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Ok(sign * acc.value())
}

/// Wigner 6j symbol `{j1 j2 j3; j4 j5 j6}`; zero whenever one of the four
/// triads (j1 j2 j3), (j1 j5 j6), (j4 j2 j6), (j4 j5 j3) is not closed.
pub fn wigner6j(
    j1: HalfInt,
    j2: HalfInt,
    j3: HalfInt,
    j4: HalfInt,
    j5: HalfInt,
    j6: HalfInt,
) -> Result<f64, AngularError> {
    for j in [j1, j2, j3, j4, j5, j6] {
        check_j(j)?;
    }
    let triads = [(j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3)];
    if triads.iter().any(|&(a, b, c)| !triangle(a, b, c)) {
        return Ok(0.0);
    }

    let h = |x: HalfInt| x.twice() / 2;
    let alphas = triads.map(|(a, b, c)| h(a + b + c));
    let betas = [h(j1 + j2 + j4 + j5), h(j2 + j3 + j5 + j6), h(j3 + j1 + j6 + j4)];
    let t_min = *alphas.iter().max().unwrap();
    let t_max = *betas.iter().min().unwrap();
    if t_min > t_max {
        return Ok(0.0);
    }

    let ln_pre = 0.5 * triads.iter().map(|&(a, b, c)| ln_delta(a, b, c)).sum::<f64>();
    let mut acc = CompensatedSum::default();
    for t in t_min..=t_max {
        let ln_den: f64 = alphas.iter().map(|&a| ln_factorial(t - a)).sum::<f64>()
            + betas.iter().map(|&b| ln_factorial(b - t)).sum::<f64>();
        let term = (ln_pre + ln_factorial(t + 1) - ln_den).exp();
        acc.add(if t % 2 == 0 { term } else { -term });
    }
    Ok(acc.value())
}

/// Clebsch-Gordan coefficient `<j1 m1; j2 m2 | J M>`.
pub fn clebsch_gordan(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> Result<f64, AngularError> {
    let three_j = wigner3j(j1, j2, j, m1, m2, -m)?;
    if three_j == 0.0 {
        return Ok(0.0);
    }
    let exp = (j1 - j2 + m).twice() / 2;
    let sign = if exp.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Ok(sign * f64::from(j.multiplicity()).sqrt() * three_j)
}
