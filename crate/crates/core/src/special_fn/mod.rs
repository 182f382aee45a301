//! Overflow-safe scalar special functions.
//!
//! The eigenfunction expansions pair the imaginary error function with a
//! Gaussian and the fast-scale profiles with hyperbolic functions of large
//! argument.  Everything here is evaluated in a form that never forms the
//! overflowing intermediate: `erfi` is exposed primarily through the scaled
//! product `e^{-x²}·erfi(x)` (via Dawson's integral), `sech` is built from
//! `e^{-|x|}`, and `1 − tanh|x|` is computed without cancellation.
//!
//! The asymptotic tables used by the matched expansions live in [`tables`].

pub mod tables;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Crossover between the power series and the asymptotic series of Dawson's
/// integral.  At `|x| = 7` the asymptotic series' smallest term is `≈ e^{-49}`
/// and the power series' largest partial sum is `≈ e^{49}`, well inside the
/// `f32` and `f64` ranges.
const DAWSON_SWITCH: f64 = 7.0;

/// Dawson's integral `D(x) = e^{-x²} ∫₀ˣ e^{t²} dt`.
///
/// For `|x| ≤ 7` the all-positive series `∫₀ˣ e^{t²}dt = Σ x^{2k+1}/(k!(2k+1))`
/// is summed and multiplied by `e^{-x²}` (no cancellation), otherwise the
/// asymptotic series `D(x) ~ (1/2x) Σ (2k−1)!!/(2x²)^k` is truncated at its
/// smallest term.  Odd in `x`.
pub fn dawson<S: Real>(x: S) -> S {
    let ax = x.abs();
    if ax == S::zero() {
        return S::zero();
    }
    let value = if ax <= S::c(DAWSON_SWITCH) {
        let x2 = ax * ax;
        let mut power = ax; // x^{2k+1}/k!
        let mut sum = ax;
        let tol = S::unit_roundoff() * S::c(0.1);
        for k in 1..2000usize {
            let kk = S::from_usize_lossy(k);
            power = power * x2 / kk;
            let term = power / (S::c(2.0) * kk + S::one());
            sum = sum + term;
            if term < tol * sum && S::from_usize_lossy(k) > x2 {
                break;
            }
        }
        sum * (-x2).exp()
    } else {
        let inv = S::one() / (S::c(2.0) * ax * ax);
        let mut term = S::one();
        let mut sum = S::one();
        for k in 1..200usize {
            let next = term * S::from_usize_lossy(2 * k - 1) * inv;
            if next.abs() >= term.abs() {
                break;
            }
            term = next;
            sum = sum + term;
            if term < S::unit_roundoff() * S::c(0.1) * sum {
                break;
            }
        }
        sum / (S::c(2.0) * ax)
    };
    if x < S::zero() {
        -value
    } else {
        value
    }
}

/// Scaled imaginary error function `e^{-x²}·erfi(x) = (2/√π) D(x)`.
///
/// This is the primary entry point for `erfi`: it is finite for every finite
/// `x` and odd.
pub fn erfi_scaled<S: Real>(x: S) -> S {
    S::FRAC_2_SQRT_PI() * dawson(x)
}

/// Imaginary error function `erfi(x) = (2/√π)∫₀ˣ e^{t²}dt`.
///
/// Returns `±∞` once `e^{x²}` leaves the representable range; code inside
/// this crate uses [`erfi_scaled`] instead.
pub fn erfi<S: Real>(x: S) -> S {
    let scaled = erfi_scaled(x);
    let e = (x * x).exp();
    if e.is_infinite() {
        return if x > S::zero() { S::infinity() } else { S::neg_infinity() };
    }
    scaled * e
}

/// Number of terms used by the alternating-series accelerator; its error
/// decays like `5.8^{-n}`, so 32 terms are far below `f64` roundoff.
const CVZ_TERMS: usize = 32;

/// Polylogarithm `Li_s(x) = Σ_{k≥1} x^k / k^s` for `s ∈ {2, 3}` and
/// `x ∈ [−1, 0]`.
///
/// For `x ≥ −½` the defining series converges geometrically and is summed
/// directly.  Closer to `x = −1` the series is alternating with slowly
/// decaying terms, so it is summed with the Cohen–Rodriguez Villegas–Zagier
/// accelerator (the terms `|x|^k/k^s` form a totally monotone sequence).
pub fn polylog<S: Real>(s: u32, x: S) -> Result<S> {
    if s != 2 && s != 3 {
        return Err(Error::Domain(format!(
            "polylog order {s} not supported (only 2 and 3)"
        )));
    }
    if !(x >= -S::one() && x <= S::zero()) {
        return Err(Error::Domain(format!(
            "polylog argument {x:?} outside [-1, 0]"
        )));
    }
    if x == S::zero() {
        return Ok(S::zero());
    }
    let si = s as i32;
    if x >= S::c(-0.5) {
        let mut sum = S::zero();
        let mut power = S::one();
        for k in 1..400usize {
            power = power * x;
            let term = power / S::from_usize_lossy(k).powi(si);
            sum = sum + term;
            if term.abs() <= S::unit_roundoff() * S::c(0.01) * sum.abs() {
                break;
            }
        }
        return Ok(sum);
    }
    // Li_s(x) = −Σ_{k≥0} (−1)^k a_k with a_k = |x|^{k+1}/(k+1)^s.
    let ax = x.abs();
    let n = CVZ_TERMS;
    let nf = S::from_usize_lossy(n);
    let mut d = (S::c(3.0) + S::c(8.0).sqrt()).powi(n as i32);
    d = (d + S::one() / d) * S::c(0.5);
    let mut b = -S::one();
    let mut c = -d;
    let mut sum = S::zero();
    let mut power = S::one();
    for k in 0..n {
        power = power * ax;
        let kf = S::from_usize_lossy(k);
        let a_k = power / (kf + S::one()).powi(si);
        c = b - c;
        sum = sum + c * a_k;
        b = (kf + nf) * (kf - nf) * b / ((kf + S::c(0.5)) * (kf + S::one()));
    }
    Ok(-(sum / d))
}

/// Physicist's Hermite polynomial `H_n(x)` by the three-term recurrence
/// `H_{k+1} = 2x H_k − 2k H_{k−1}`.
///
/// `H₀ = 1`, `H₁ = 2x`, `H₂ = 2(2x² − 1)`, `H₃ = 4x(2x² − 3)`.  The matched
/// expansions use `n ≤ 3`; the recurrence is exact in rational arithmetic and
/// accurate to roundoff for the `n ≤ 8` range that is tested.
pub fn hermite<S: Real>(n: usize, x: S) -> S {
    let two = S::c(2.0);
    let mut prev = S::one();
    if n == 0 {
        return prev;
    }
    let mut cur = two * x;
    for k in 1..n {
        let next = two * x * cur - two * S::from_usize_lossy(k) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Derivative `H_n'(x) = 2n H_{n−1}(x)`.
pub fn hermite_derivative<S: Real>(n: usize, x: S) -> S {
    if n == 0 {
        S::zero()
    } else {
        S::c(2.0) * S::from_usize_lossy(n) * hermite(n - 1, x)
    }
}

/// `sech x = 2e^{-|x|}/(1 + e^{-2|x|})`; never overflows, even in `x`.
pub fn stable_sech<S: Real>(x: S) -> S {
    let e = (-x.abs()).exp();
    S::c(2.0) * e / (S::one() + e * e)
}

/// `1 − tanh|x| = 2e^{-2|x|}/(1 + e^{-2|x|})`, free of cancellation for large
/// `|x|`.
pub fn stable_tanh_defect<S: Real>(x: S) -> S {
    let e = (S::c(-2.0) * x.abs()).exp();
    S::c(2.0) * e / (S::one() + e)
}

/// `tanh x` evaluated through [`stable_tanh_defect`] so that the result is
/// exactly `±1` only when the defect underflows.
pub fn stable_tanh<S: Real>(x: S) -> S {
    let t = S::one() - stable_tanh_defect(x);
    if x < S::zero() {
        -t
    } else {
        t
    }
}
