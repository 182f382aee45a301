//! Real trigonometric interpolation of periodic grid data.
//!
//! A grid function on `x_j = −π + jh` is identified with its trigonometric
//! interpolant `u(x) = a₀ + Σ_k [a_k cos kx + b_k sin kx]` (the Nyquist mode,
//! for even `M`, contributes a cosine only).  Coefficients below `10⁻¹⁵` of
//! the largest are dropped, so smooth data with few active modes evaluate
//! cheaply at arbitrary points.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::grid::GridFunction;

/// Relative size below which Fourier modes are discarded.
const NEGLIGIBLE_MODE: f64 = 1e-15;

/// Truncated real Fourier series `a₀ + Σ_k [a_k cos kx + b_k sin kx]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigSeries {
    /// Constant term.
    pub mean: f64,
    /// Active modes `(k, a_k, b_k)`, `k ≥ 1`, ascending in `k`.
    pub modes: Vec<(usize, f64, f64)>,
}

/// Normalised DFT coefficients `c_k` with `u(x) = Σ_k c_k e^{ikx}` on the
/// grid (`k = 0..M`, indices above `M/2` are the negative wavenumbers).
pub fn dft_coefficients(u: &GridFunction) -> Vec<Complex64> {
    let m = u.len();
    let mut buf: Vec<Complex64> = u.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    buf.iter()
        .enumerate()
        .map(|(k, &c)| {
            // x_j = −π + jh contributes a phase e^{ikπ} = (−1)^k.
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            c * (sign / m as f64)
        })
        .collect()
}

impl TrigSeries {
    /// Interpolant of grid data.
    pub fn from_grid(u: &GridFunction) -> Self {
        let m = u.len();
        let c = dft_coefficients(u);
        let mut modes = Vec::new();
        for (k, ck) in c.iter().enumerate().take(m / 2 + 1).skip(1) {
            if 2 * k == m {
                modes.push((k, ck.re, 0.0));
            } else {
                modes.push((k, 2.0 * ck.re, -2.0 * ck.im));
            }
        }
        let scale = modes.iter().fold(c[0].re.abs(), |a, &(_, x, y)| a.max(x.abs()).max(y.abs()));
        modes.retain(|&(_, a, b)| a.abs().max(b.abs()) > NEGLIGIBLE_MODE * scale);
        Self { mean: c[0].re, modes }
    }

    /// Value at an arbitrary `x`.
    pub fn eval(&self, x: f64) -> f64 {
        let mut sum = self.mean;
        let (s1, c1) = x.sin_cos();
        // Rotate e^{ikx} incrementally, re-anchoring periodically to bound
        // the accumulated rounding.
        let mut k_cur = 0usize;
        let (mut ck, mut sk) = (1.0f64, 0.0f64);
        for &(k, a, b) in &self.modes {
            if k - k_cur > 8 || k % 64 == 0 {
                let (s, c) = (k as f64 * x).sin_cos();
                ck = c;
                sk = s;
            } else {
                while k_cur < k {
                    let nc = ck * c1 - sk * s1;
                    sk = sk * c1 + ck * s1;
                    ck = nc;
                    k_cur += 1;
                }
            }
            k_cur = k;
            sum += a * ck + b * sk;
        }
        sum
    }

    /// Derivative series.
    pub fn derivative(&self) -> Self {
        let modes = self.modes.iter().map(|&(k, a, b)| (k, k as f64 * b, -(k as f64) * a)).collect();
        Self { mean: 0.0, modes }
    }

    /// Periodic antiderivative of the zero-mean part, normalised to vanish
    /// at `x = 0`.  The constant term of `self` is ignored.
    pub fn antiderivative(&self) -> Self {
        let modes: Vec<_> = self
            .modes
            .iter()
            .map(|&(k, a, b)| (k, -b / k as f64, a / k as f64))
            .collect();
        let at_zero: f64 = modes.iter().map(|&(_, a, _)| a).sum();
        Self { mean: -at_zero, modes }
    }

    /// Samples on an `m`-point grid.
    pub fn sample(&self, m: usize) -> crate::error::Result<GridFunction> {
        GridFunction::from_fn(m, |x| self.eval(x))
    }

    /// Largest active wavenumber (0 for a constant).
    pub fn max_wavenumber(&self) -> usize {
        self.modes.last().map_or(0, |&(k, _, _)| k)
    }

    /// Upper bound `Σ k(|a_k| + |b_k|)` on `max|u'|`.
    pub fn derivative_bound(&self) -> f64 {
        self.modes.iter().map(|&(k, a, b)| k as f64 * (a.abs() + b.abs())).sum()
    }
}

/// Spectral derivative of grid data (Nyquist mode dropped).
pub fn spectral_derivative(u: &GridFunction) -> GridFunction {
    let m = u.len();
    let mut c = dft_coefficients(u);
    for (k, ck) in c.iter_mut().enumerate() {
        let kk = if 2 * k == m {
            0.0
        } else if k > m / 2 {
            k as f64 - m as f64
        } else {
            k as f64
        };
        *ck *= Complex64::new(0.0, kk);
    }
    inverse(c)
}

fn inverse(c: Vec<Complex64>) -> GridFunction {
    let m = c.len();
    let mut buf: Vec<Complex64> = c
        .into_iter()
        .enumerate()
        .map(|(k, ck)| if k % 2 == 0 { ck } else { -ck })
        .collect();
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
    GridFunction::new(buf.iter().map(|z| z.re).collect()).expect("inverse FFT of valid data")
}
