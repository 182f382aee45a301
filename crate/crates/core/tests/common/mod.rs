//! Independent oracles shared by the integration tests.
//!
//! Nothing here calls into the library's numerics: quadrature, image sums,
//! finite differences and series are written out from their definitions so
//! that agreement with the library is a genuine cross-check.

// Reference constants are quoted to their published digits.
#![allow(clippy::excessive_precision)]

#![allow(dead_code)]

use std::f64::consts::PI;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

/// Gauss–Kronrod 7/15 abscissae on `[0, 1]` (the negative half by symmetry).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
/// Kronrod weights matching [`XGK`].
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
/// Gauss weights at `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let s = f(c - h * XGK[i]) + f(c + h * XGK[i]);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

fn gk_recursive(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64, whole: (f64, f64), tol: f64, depth: u32) -> f64 {
    let (val, err) = whole;
    // Below a few ulps of the panel value the estimate is pure rounding.
    if err <= tol || err <= 32.0 * f64::EPSILON * val.abs() || depth == 0 {
        return val;
    }
    let m = 0.5 * (a + b);
    let left = gk15(f, a, m);
    let right = gk15(f, m, b);
    gk_recursive(f, a, m, left, 0.5 * tol, depth - 1) + gk_recursive(f, m, b, right, 0.5 * tol, depth - 1)
}

/// `∫_a^b f` by recursive Gauss–Kronrod bisection to absolute tolerance
/// `tol` (the interval is pre-split into 16 pieces).
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let pieces = 16;
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            let lo = a + h * i as f64;
            let hi = if i + 1 == pieces { b } else { lo + h };
            let whole = gk15(&mut f, lo, hi);
            gk_recursive(&mut f, lo, hi, whole, tol / pieces as f64, 30)
        })
        .sum()
}

/// Dawson's integral `D(x) = ∫₀^x e^{(t−x)(t+x)} dt`.
pub fn dawson(x: f64) -> f64 {
    integrate(|t| ((t - x) * (t + x)).exp(), 0.0, x, 1e-17 * x.abs().max(1.0))
}

/// `erfi(x) = (2/√π) ∫₀^x e^{t²} dt` (moderate `x` only).
pub fn erfi(x: f64) -> f64 {
    let scale = (x * x).exp().max(1.0);
    2.0 / PI.sqrt() * integrate(|t| (t * t).exp(), 0.0, x, 1e-16 * scale)
}

/// `Li_s(x) = Σ_{k≥1} x^k/k^s` for `|x| < 1`.
pub fn polylog(s: i32, x: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = 1.0;
    for k in 1..10_000_000u64 {
        pow *= x;
        let term = pow / (k as f64).powi(s);
        sum += term;
        if term.abs() < 1e-19 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Physicists' Hermite polynomial from its explicit sum.
pub fn hermite(n: usize, x: f64) -> f64 {
    let mut sum = 0.0;
    let fact = |k: usize| (1..=k).map(|i| i as f64).product::<f64>();
    for m in 0..=n / 2 {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * fact(n) / (fact(m) * fact(n - 2 * m)) * (2.0 * x).powi((n - 2 * m) as i32);
    }
    sum
}

/// Fourth-order central difference `f'(x)`.
pub fn d1(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// Fourth-order central difference `f''(x)`.
pub fn d2(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h)) / (12.0 * h * h)
}

/// Periodic grid node `x_j = −π + 2πj/M`.
pub fn node(m: usize, j: usize) -> f64 {
    -PI + 2.0 * PI * j as f64 / m as f64
}

/// Periodic trapezoid `Σ h f(x_j) g(x_j)`.
pub fn inner(f: &[f64], g: &[f64]) -> f64 {
    let h = 2.0 * PI / f.len() as f64;
    f.iter().zip(g).map(|(a, b)| a * b).sum::<f64>() * h
}

/// Discrete `L²` norm.
pub fn norm(f: &[f64]) -> f64 {
    inner(f, f).sqrt()
}

/// `x` reduced to `[−π, π)`.
pub fn reduce(x: f64) -> f64 {
    (x + PI).rem_euclid(2.0 * PI) - PI
}

/// Whitham solution by direct image summation:
/// `W₀ = (1/t) Σ wₙ aₙ / Σ wₙ`, `aₙ = x + π − 2πn`, `wₙ = e^{−aₙ²/4νt}`,
/// evaluated relative to the frame shift `Δx` and mean `c`
/// (`W = c + W₀(x − Δx − ct)` at time `t`).
pub fn whitham(x: f64, nu: f64, t: f64) -> f64 {
    let xr = reduce(x);
    let a = |n: i64| xr + PI - 2.0 * PI * n as f64;
    let e = |n: i64| -a(n) * a(n) / (4.0 * nu * t);
    let emax = (-60..=60).map(e).fold(f64::NEG_INFINITY, f64::max);
    let (mut num, mut den) = (0.0, 0.0);
    for n in -60..=60 {
        let w = (e(n) - emax).exp();
        num += w * a(n);
        den += w;
    }
    num / den / t
}

/// `log ψ^W` (up to an additive constant) by direct image summation.
pub fn log_psi(x: f64, nu: f64, t: f64) -> f64 {
    let xr = reduce(x);
    let a = |n: i64| xr + PI - 2.0 * PI * n as f64;
    let e = |n: i64| -a(n) * a(n) / (4.0 * nu * t);
    let emax = (-60..=60).map(e).fold(f64::NEG_INFINITY, f64::max);
    emax + (-60..=60).map(|n| (e(n) - emax).exp()).sum::<f64>().ln()
}

/// Reproducible uniform draws in `[−1, 1)`.
pub struct Draws(SplitMix64);

impl Draws {
    pub fn new(seed: u64) -> Self {
        Draws(SplitMix64::seed_from_u64(seed))
    }

    pub fn next(&mut self) -> f64 {
        ((self.0.next_u64() >> 11) as f64) * (1.0 / (1u64 << 53) as f64) * 2.0 - 1.0
    }

    pub fn vec(&mut self, m: usize) -> Vec<f64> {
        (0..m).map(|_| self.next()).collect()
    }
}

/// `|a − b| ≤ tol·max(1, |b|)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}
