use std::f64::consts::PI;

use cprabi::dynamics::loss_rate;
use cprabi::{
    angular_momentum_x, evolve, feasibility_window, offresonant_shift, populations, rabi_params, rubidium87,
    ComplexRate, DynamicsError, EvolutionOperator, RabiParams, ShiftSet, ShiftSettings,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type M2 = [[Complex64; 2]; 2];

fn mul(a: &M2, b: &M2) -> M2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

/// `exp(A)` by scaling and squaring of a truncated Taylor series.
fn expm(a: &M2) -> M2 {
    let norm = a.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max);
    let mut s = 0;
    while norm / 2f64.powi(s) > 0.25 {
        s += 1;
    }
    let scale = 2f64.powi(-s);
    let a: M2 = a.map(|row| row.map(|x| x * scale));
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut result = [[one, zero], [zero, one]];
    let mut term = result;
    for k in 1..=30 {
        term = mul(&term, &a).map(|row| row.map(|x| x / k as f64));
        for r in 0..2 {
            for c in 0..2 {
                result[r][c] += term[r][c];
            }
        }
    }
    for _ in 0..s {
        result = mul(&result, &result);
    }
    result
}

fn hamiltonian(p: &RabiParams) -> M2 {
    [[p.omega_g_tilde, p.omega * 0.5], [p.omega_star * 0.5, p.omega_e_tilde]]
}

fn make_params(og: Complex64, oe: Complex64, om: Complex64, om_star: Complex64, flip_root: bool) -> RabiParams {
    let delta = oe - og;
    let root = (om * om_star + delta * delta).sqrt();
    RabiParams {
        omega_g_tilde: og,
        omega_e_tilde: oe,
        delta_tilde: delta,
        omega: om,
        omega_star: om_star,
        omega_r: if flip_root { -root } else { root },
    }
}

fn random_params(rng: &mut ChaCha8Rng) -> RabiParams {
    let mut c = |re: f64, im_max: f64| Complex64::new(rng.gen_range(-re..re), -rng.gen_range(0.0..im_max));
    let og = c(5.0, 1.0);
    let oe = c(5.0, 1.0);
    let om = c(3.0, 0.5);
    let om_star = c(3.0, 0.5);
    make_params(og, oe, om, om_star, rng.gen_bool(0.5))
}

fn max_diff(a: &M2, b: &M2) -> f64 {
    (0..4)
        .map(|k| (a[k / 2][k % 2] - b[k / 2][k % 2]).norm())
        .fold(0.0, f64::max)
}

#[test]
fn matches_matrix_exponential_on_random_parameters() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let p = random_params(&mut rng);
        let t = rng.gen_range(0.0..4.0);
        let expected = expm(&hamiltonian(&p).map(|row| row.map(|x| -Complex64::i() * x * t)));
        let got = evolve(&p, t).unwrap().matrix();
        let scale = expected.iter().flatten().map(|x| x.norm()).fold(1.0, f64::max);
        assert!(max_diff(&got, &expected) < 1e-10 * scale, "{p:?} T={t}");
    }
}

#[test]
fn matches_matrix_exponential_near_degenerate_root() {
    // Ω_R -> 0 uses the series branch
    let c = |re: f64, im: f64| Complex64::new(re, im);
    for eps in [0.0, 1e-12, 1e-9, 1e-7] {
        let p = make_params(c(0.3, 0.0), c(0.3, 0.0), c(eps, 0.0), c(eps, 0.0), false);
        for t in [0.0, 0.5, 3.0] {
            let expected = expm(&hamiltonian(&p).map(|row| row.map(|x| -Complex64::i() * x * t)));
            assert!(max_diff(&evolve(&p, t).unwrap().matrix(), &expected) < 1e-12);
        }
    }
}

#[test]
fn composition_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let p = random_params(&mut rng);
        let (t1, t2) = (rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0));
        let whole = evolve(&p, t1 + t2).unwrap();
        let parts = evolve(&p, t2).unwrap().then_after(&evolve(&p, t1).unwrap());
        let scale = whole.matrix().iter().flatten().map(|x| x.norm()).fold(1.0, f64::max);
        assert!(max_diff(&whole.matrix(), &parts.matrix()) < 1e-10 * scale);
        assert!((parts.duration - (t1 + t2)).abs() < 1e-15);
    }
}

fn undamped(rng: &mut ChaCha8Rng) -> RabiParams {
    let og = Complex64::new(rng.gen_range(-5.0..5.0), 0.0);
    let oe = Complex64::new(rng.gen_range(-5.0..5.0), 0.0);
    let om = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
    make_params(og, oe, om, om.conj(), false)
}

#[test]
fn undamped_evolution_is_unitary() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let p = undamped(&mut rng);
        let u = evolve(&p, rng.gen_range(0.0..20.0)).unwrap();
        let m = u.matrix();
        for a in 0..2 {
            for b in 0..2 {
                let dot: Complex64 = (0..2).map(|r| m[r][a].conj() * m[r][b]).sum();
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((dot - expected).norm() < 1e-12);
            }
        }
        assert!((u.determinant().norm() - 1.0).abs() < 1e-12);
        let (pg, pe) = populations(&u, Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)).unwrap();
        assert!((pg + pe - 1.0).abs() < 1e-12);
    }
}

#[test]
fn populations_bounded_with_dissipation() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..500 {
        let coupling = rng.gen_range(-3.0..3.0);
        let (ggg, gee): (f64, f64) = (rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0));
        let gge = rng.gen_range(-1.0..1.0) * (ggg * gee).sqrt();
        let og = Complex64::new(rng.gen_range(-5.0..5.0), -ggg / 2.0);
        let oe = Complex64::new(rng.gen_range(-5.0..5.0), -gee / 2.0);
        let om = Complex64::new(coupling, -gge);
        let p = make_params(og, oe, om, om, false);
        let u = evolve(&p, rng.gen_range(0.0..10.0)).unwrap();
        let theta = rng.gen_range(0.0..PI);
        let (pg, pe) = populations(&u, Complex64::new(theta.cos(), 0.0), Complex64::new(0.0, theta.sin())).unwrap();
        assert!(pg >= 0.0 && pe >= 0.0 && pg + pe <= 1.0 + 1e-12, "{pg} {pe}");
    }
}

#[test]
fn equal_decay_rates_damp_total_population() {
    let gamma = 0.37;
    let om = Complex64::new(1.3, 0.0);
    let p = make_params(
        Complex64::new(0.2, -gamma / 2.0),
        Complex64::new(-0.4, -gamma / 2.0),
        om,
        om,
        false,
    );
    for k in 0..50 {
        let t = 0.2 * f64::from(k);
        let u = evolve(&p, t).unwrap();
        let (pg, pe) = populations(&u, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        assert!((pg + pe - (-gamma * t).exp()).abs() < 1e-9);
    }
}

#[test]
fn resonant_rabi_formula_and_half_cycle() {
    let om = Complex64::new(2.5, 0.0);
    let p = make_params(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), om, om, false);
    let wr = p.omega_r.re;
    for k in 0..100 {
        let t = f64::from(k) * 0.05;
        let u = evolve(&p, t).unwrap();
        let (pg, pe) = populations(&u, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        assert!((pe - (wr * t / 2.0).sin().powi(2)).abs() < 1e-13);
        let lx = angular_momentum_x(&p, t).unwrap();
        assert!((lx - (pe - pg)).abs() < 1e-12);
    }
    let u = evolve(&p, PI / wr).unwrap();
    assert!(u.ugg.norm() < 1e-12 && u.uee.norm() < 1e-12);
    assert!((u.uge.norm() - 1.0).abs() < 1e-12 && (u.ueg.norm() - 1.0).abs() < 1e-12);
    assert!((angular_momentum_x(&p, PI / wr).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn identity_at_zero_time() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let u = evolve(&random_params(&mut rng), 0.0).unwrap();
        assert_eq!(u.matrix(), EvolutionOperator::identity().matrix());
    }
}

#[test]
fn rubidium_pair_transfers_after_half_period() {
    let rb = rubidium87();
    let (g, e) = rb.default_pair().unwrap();
    let s = ShiftSettings::default();
    let z = 40e-9;
    let shift = |a, b| offresonant_shift(a, b, &rb, z, 0.0, &s).unwrap().energy;
    let set = ShiftSet::new(
        ComplexRate::conservative(shift(&g, &g)),
        ComplexRate::conservative(shift(&e, &e)),
        ComplexRate::conservative(shift(&g, &e)),
        ComplexRate::conservative(shift(&e, &g)),
    )
    .unwrap();
    let p = rabi_params(&set, 0.0, 0.0);
    let half = PI / p.omega_r.re;
    let u = evolve(&p, half).unwrap();
    let (pg, pe) = populations(&u, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)).unwrap();
    assert!(pe > 1.0 - 1e-12 && pg < 1e-12, "{pg} {pe}");
    assert!((angular_momentum_x(&p, half).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn feasibility_examples() {
    let two_pi = 2.0 * PI;
    let near = feasibility_window(3e-6, 40e-9, two_pi).unwrap();
    assert!(near.feasible);
    assert!((near.gamma - 20.0 * PI * (40.0f64 / 3000.0).powi(2)).abs() < 1e-15);
    let far = feasibility_window(3e-6, 270e-9, two_pi * 1e-3).unwrap();
    assert!(far.feasible && far.ratio < 1.0);
    assert!(!feasibility_window(50e-9, 40e-9, two_pi).unwrap().feasible);
    assert!(!feasibility_window(1e-12, 100e-9, two_pi).unwrap().feasible);
    assert!(matches!(
        feasibility_window(3e-6, 30e-9, 1.0),
        Err(DynamicsError::Unanchored { .. })
    ));
}

proptest! {
    #[test]
    fn loss_rate_monotone_between_anchors(z1 in 40e-9..270e-9f64, z2 in 40e-9..270e-9f64, xi in 1e-7..1e-4f64) {
        let (lo, hi) = if z1 < z2 { (z1, z2) } else { (z2, z1) };
        prop_assume!(hi - lo > 1e-12);
        prop_assert!(loss_rate(xi, lo).unwrap() > loss_rate(xi, hi).unwrap());
    }
}
