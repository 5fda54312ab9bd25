//! Globally adaptive Gauss-Kronrod quadrature for exponentially decaying
//! integrands on `[0, ∞)`.
//!
//! The half-line is truncated at `U_max = max(50, 40 / decay_rate)`, where the
//! integrand is assumed to fall off at least like `e^{-decay_rate u}`. The
//! remaining tail is bounded by `|f(U_max)| / decay_rate` and added to the
//! error estimate. On `[0, U_max]` the interval with the largest local error
//! is bisected until the total error meets the tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::QuadratureError;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Result of a quadrature: value, absolute error estimate and the number of
/// integrand evaluations spent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 0.0,
            max_subdivisions: 1000,
        }
    }
}

impl QuadratureOptions {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// 21-point Kronrod rule with embedded 10-point Gauss rule.
fn gauss_kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Segment, QuadratureError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(QuadratureError::NonFinite { at: x })
        }
    };

    let fc = eval(center)?;
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    let mut abs_sum = fc.abs() * WGK[10];
    let mut values = [(0.0, 0.0); 10];
    for (k, slot) in values.iter_mut().enumerate() {
        let dx = half * XGK[k];
        let (lo, hi) = (eval(center - dx)?, eval(center + dx)?);
        *slot = (lo, hi);
        kronrod += WGK[k] * (lo + hi);
        abs_sum += WGK[k] * (lo.abs() + hi.abs());
        if k % 2 == 1 {
            gauss += WG[k / 2] * (lo + hi);
        }
    }

    let mean = 0.5 * kronrod;
    let mut asc = WGK[10] * (fc - mean).abs();
    for (k, &(lo, hi)) in values.iter().enumerate() {
        asc += WGK[k] * ((lo - mean).abs() + (hi - mean).abs());
    }

    let result = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    // QUADPACK error rescaling
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Segment {
        a,
        b,
        value: result,
        error: err,
    })
}

/// `∫_0^∞ f(u) du` for a smooth integrand decaying like `e^{-decay_rate u}`.
///
/// Fails on non-finite integrand values, on intervals shrinking below
/// floating-point resolution (a non-integrable endpoint singularity shows up
/// this way) and when the subdivision budget runs out.
pub fn integrate_semiinfinite<F>(
    f: F,
    decay_rate: f64,
    options: &QuadratureOptions,
) -> Result<QuadratureResult, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    if !(decay_rate > 0.0 && decay_rate.is_finite()) {
        return Err(QuadratureError::InvalidSetup(format!(
            "decay rate must be positive, got {decay_rate}"
        )));
    }
    if !(options.rel_tol >= 0.0 && options.abs_tol >= 0.0) || (options.rel_tol == 0.0 && options.abs_tol == 0.0) {
        return Err(QuadratureError::InvalidSetup(
            "tolerances must be non-negative and not both zero".into(),
        ));
    }
    let upper = 50f64.max(40.0 / decay_rate);
    let tail_value = f(upper);
    if !tail_value.is_finite() {
        return Err(QuadratureError::NonFinite { at: upper });
    }
    let tail = tail_value.abs() / decay_rate;

    let first = gauss_kronrod21(&f, 0.0, upper)?;
    let mut evaluations = 22;
    let mut total = first.value;
    let mut total_err = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut subdivisions = 0;

    let target = |value: f64| options.abs_tol.max(options.rel_tol * value.abs());
    while total_err + tail > target(total) {
        if subdivisions >= options.max_subdivisions {
            return Err(QuadratureError::NonConvergence {
                subdivisions,
                value: total,
                abs_error: total_err + tail,
            });
        }
        let worst = heap.pop().expect("heap never empties");
        let mid = 0.5 * (worst.a + worst.b);
        if (worst.b - worst.a) <= 4.0 * f64::EPSILON * upper || mid <= worst.a || mid >= worst.b {
            return Err(QuadratureError::Singular { at: worst.a });
        }
        let left = gauss_kronrod21(&f, worst.a, mid)?;
        let right = gauss_kronrod21(&f, mid, worst.b)?;
        evaluations += 42;
        subdivisions += 1;

        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);

        // refresh the running sums now and then to keep drift out of the estimate
        if subdivisions % 64 == 0 {
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.error).sum();
        }
    }

    let value: f64 = heap.iter().map(|s| s.value).sum();
    let err: f64 = heap.iter().map(|s| s.error).sum();
    Ok(QuadratureResult {
        value,
        abs_error_estimate: err + tail,
        evaluations: evaluations + 1,
    })
}
