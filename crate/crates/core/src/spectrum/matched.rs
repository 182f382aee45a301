//! Matched-asymptotic eigenfunctions of the self-adjoint conjugate operator.
//!
//! With `ε² = 2νt`, the slow variable `ξ = (x − π)/ε` and the fast variable
//! `z = x/ε²` (layer at `x = 0`), the eigenfunctions `φ̃_n`, `n = 1..4`, of
//! `𝓛̃` with `λ_n ≈ −n/t` (`λ̂_n = ε²λ_n/ν ≈ −2n`) are, on `[0, π]`,
//!
//! * slow region: `S_n = H_{n−1}(ξ) e^{−ξ²/2}`;
//! * fast region: `C_n[P(z) + ε²P₁(z; λ̂_n)]` for odd `n` and `C_n Q(z)` for
//!   even `n`, with `P = sech(πz)`, `Q = sinh(πz) + πz sech(πz)` and
//!   `P₁ = (λ̂/2π²) cosh(πz) + (z²/2) sech(πz)`;
//! * gluing constants (from matching the growing fast mode to the slow tail,
//!   `E = e^{−π²/2ε²}`): `C_n = 4π² H_{n−1}(−π/ε) E/(ε²λ̂_n)` for odd `n`,
//!   `C_n = 2H_{n−1}(−π/ε) E` for even `n`; in particular
//!   `C₁ = −2π²E/ε²` and `C₂ = −4πE/ε`.
//!
//! The uniformly valid composite subtracts the overlap (the growing
//! exponential that both pieces share), leaving `S_n + C_n R_n(z)` with the
//! decaying remainder `R_n`.  The result is extended to `[−π, 0]` with the
//! parity of `n` about the layer (even for odd `n`, odd for even `n`) and
//! periodically to `ℝ`.

use crate::error::{Error, Result};
use crate::family::{conjugate_potential, FamilyParams};
use crate::grid::{reduce_angle, GridFunction};
use crate::special_fn::{hermite, stable_sech};

/// Largest `ε` accepted by the matched construction and the eigenvalue
/// predictions' stated regime.
pub const MATCHED_EPSILON: f64 = 0.25;

/// `P(z) = sech(πz)`.
pub fn fast_p(z: f64) -> f64 {
    stable_sech(std::f64::consts::PI * z)
}

/// `Q(z) = sinh(πz) + πz·sech(πz)`.
pub fn fast_q(z: f64) -> f64 {
    let pz = std::f64::consts::PI * z;
    pz.sinh() + pz * stable_sech(pz)
}

/// `P₁(z; λ̂) = (λ̂/2π²) cosh(πz) + (z²/2) sech(πz)`, the first correction
/// of the even fast solution (free multiple of `P` set to zero).
///
/// It satisfies `P₁'' + π²[2sech²(πz) − 1]P₁ = [1 + λ̂ − 2πz tanh(πz)] P`.
pub fn fast_p1(z: f64, lambda_hat: f64) -> f64 {
    let pi = std::f64::consts::PI;
    lambda_hat / (2.0 * pi * pi) * (pi * z).cosh() + 0.5 * z * z * stable_sech(pi * z)
}

/// Half-width `ε^{3/2}` of the fast interval.
pub fn matching_point(epsilon: f64) -> f64 {
    epsilon.powf(1.5)
}

/// Piecewise slow/fast approximation of `φ̃_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchedEigenfunction {
    /// Index `1..=4`.
    pub n: usize,
    /// `ε`.
    pub epsilon: f64,
    /// Leading rescaled eigenvalue `λ̂_n = −2n`.
    pub lambda_hat: f64,
    /// Gluing constant `C_n`.
    pub c_n: f64,
}

impl MatchedEigenfunction {
    /// Builds the approximation.
    ///
    /// # Errors
    /// [`Error::InvalidParameter`] unless `1 ≤ n ≤ 4`; [`Error::Regime`]
    /// for `ε > 0.25` or `ε ≤ 0`.
    pub fn new(n: usize, epsilon: f64) -> Result<Self> {
        if !(1..=4).contains(&n) {
            return Err(Error::InvalidParameter(format!("matched eigenfunctions exist for n = 1..4, got {n}")));
        }
        if !(epsilon > 0.0 && epsilon <= MATCHED_EPSILON) {
            return Err(Error::Regime(format!("matched eigenfunctions need 0 < eps <= {MATCHED_EPSILON}, got {epsilon}")));
        }
        let pi = std::f64::consts::PI;
        let lambda_hat = -2.0 * n as f64;
        let e = (-pi * pi / (2.0 * epsilon * epsilon)).exp();
        let h = hermite(n - 1, -pi / epsilon);
        let c_n = if n % 2 == 1 {
            4.0 * pi * pi * h * e / (epsilon * epsilon * lambda_hat)
        } else {
            2.0 * h * e
        };
        Ok(Self { n, epsilon, lambda_hat, c_n })
    }

    /// Fast interval `I_f = [−ε^{3/2}, ε^{3/2}]`.
    pub fn fast_interval(&self) -> (f64, f64) {
        let d = matching_point(self.epsilon);
        (-d, d)
    }

    /// Slow interval `I_s = [ε^{3/2}, 2π − ε^{3/2}]`.
    pub fn slow_interval(&self) -> (f64, f64) {
        let d = matching_point(self.epsilon);
        (d, 2.0 * std::f64::consts::PI - d)
    }

    /// `true` when `φ̃_n` is even about the layer.
    pub fn is_even(&self) -> bool {
        self.n % 2 == 1
    }

    fn reflect(&self, x: f64) -> (f64, f64) {
        let r = reduce_angle(x);
        if r >= 0.0 {
            (r, 1.0)
        } else if self.is_even() {
            (-r, 1.0)
        } else {
            (-r, -1.0)
        }
    }

    /// Slow piece `H_{n−1}((x−π)/ε) e^{−(x−π)²/2ε²}` for `x ∈ [0, π]`.
    pub fn slow_raw(&self, x: f64) -> f64 {
        let xi = (x - std::f64::consts::PI) / self.epsilon;
        hermite(self.n - 1, xi) * (-0.5 * xi * xi).exp()
    }

    /// Fast piece for `x ≥ 0` near the layer.
    pub fn fast_raw(&self, x: f64) -> f64 {
        let z = x / (self.epsilon * self.epsilon);
        if self.is_even() {
            self.c_n * (fast_p(z) + self.epsilon * self.epsilon * fast_p1(z, self.lambda_hat))
        } else {
            self.c_n * fast_q(z)
        }
    }

    /// Overlap shared by both pieces (the growing fast exponential).
    pub fn overlap_raw(&self, x: f64) -> f64 {
        let pi = std::f64::consts::PI;
        let z = x / (self.epsilon * self.epsilon);
        if self.is_even() {
            self.c_n * self.epsilon * self.epsilon * self.lambda_hat / (4.0 * pi * pi) * (pi * z).exp()
        } else {
            0.5 * self.c_n * (pi * z).exp()
        }
    }

    /// Decaying part of the fast piece, `fast − overlap`, without forming the
    /// growing exponential.
    fn fast_remainder(&self, x: f64) -> f64 {
        let pi = std::f64::consts::PI;
        let e2 = self.epsilon * self.epsilon;
        let z = x / e2;
        let s = stable_sech(pi * z);
        let r = if self.is_even() {
            s * (1.0 + 0.5 * e2 * z * z) + e2 * self.lambda_hat / (2.0 * pi * pi) * 0.5 * (-pi * z).exp()
        } else {
            -0.5 * (-pi * z).exp() + pi * z * s
        };
        self.c_n * r
    }

    /// Piecewise evaluation: fast piece on `I_f`, slow piece elsewhere
    /// (with parity and periodic extension).
    pub fn eval_piecewise(&self, x: f64) -> f64 {
        let (r, sgn) = self.reflect(x);
        if r <= matching_point(self.epsilon) {
            sgn * self.fast_raw(r)
        } else {
            sgn * self.slow_raw(r)
        }
    }

    /// Uniform composite `slow + fast − overlap`.
    pub fn eval(&self, x: f64) -> f64 {
        let (r, sgn) = self.reflect(x);
        sgn * (self.slow_raw(r) + self.fast_remainder(r))
    }

    /// Samples of the composite in the frame of `shift` (`x ↦ φ̃(x − shift)`).
    pub fn sample(&self, m: usize, shift: f64) -> Result<GridFunction> {
        GridFunction::from_fn(m, |x| self.eval(x - shift))
    }
}

/// Matching defect of the shooting problem for `φ̃_n` at trial eigenvalue
/// `lambda`: integrates `νφ'' = (V + λ)φ` from the layer (`x = 0`, initial
/// data from the parity of `n`) to `x = π` and returns the defect of the
/// parity condition required there, as the sine or cosine of the angle of
/// `(φ, εφ')`.  It vanishes exactly at eigenvalues and changes sign across
/// them.
pub fn parity_defect(n: usize, lambda: f64, p: &FamilyParams) -> Result<f64> {
    if !(1..=4).contains(&n) {
        return Err(Error::InvalidParameter(format!("parity defect defined for n = 1..4, got {n}")));
    }
    let eps = p.epsilon();
    let nu = p.nu;
    let pi = std::f64::consts::PI;
    let steps = ((pi / (eps * eps / 40.0)).ceil() as usize).max(2000);
    let h = pi / steps as f64;
    let centered = FamilyParams { dx: 0.0, c: 0.0, ..*p };
    let q = |x: f64| (conjugate_potential(x, &centered) + lambda) / nu;
    let (mut y, mut dy) = if n % 2 == 1 { (1.0, 0.0) } else { (0.0, 1.0) };
    let mut x = 0.0;
    for _ in 0..steps {
        let q0 = q(x);
        let qh = q(x + 0.5 * h);
        let q1 = q(x + h);
        let k1 = (dy, q0 * y);
        let k2 = (dy + 0.5 * h * k1.1, qh * (y + 0.5 * h * k1.0));
        let k3 = (dy + 0.5 * h * k2.1, qh * (y + 0.5 * h * k2.0));
        let k4 = (dy + h * k3.1, q1 * (y + h * k3.0));
        y += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        dy += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        x += h;
        let norm = (y * y + eps * eps * dy * dy).sqrt();
        if !(1e-100..=1e100).contains(&norm) {
            y /= norm;
            dy /= norm;
        }
    }
    let theta = (eps * dy).atan2(y);
    // Slow parity about π: H_{n−1} is even for odd n (φ'(π) = 0) and odd for
    // even n (φ(π) = 0).
    Ok(if n % 2 == 1 { theta.sin() } else { theta.cos() })
}

/// Leading eigenvalue `λ_n = −n/t` with its predicted correction magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictedEigenvalue {
    /// Index.
    pub n: usize,
    /// `−n/t`.
    pub lambda: f64,
    /// Size of the exponentially small correction.
    pub correction: f64,
}

/// `λ_n = −n/t`, `n = 0..4`, with correction bars
/// `[ε^{1/2}, ε^{−2}, ε^{−7/2}, ε^{−6}]·e^{−1/ε²}` for `n = 1..4` (zero for
/// `n = 0`, whose eigenvalue is exact).
///
/// The bars quote the stated orders as magnitudes; they are only asymptotic
/// statements for `ε ≤ 0.25` but are returned for any `ε > 0`.
///
/// # Errors
/// [`Error::InvalidParameter`] unless `ε > 0` and `t > 0`.
pub fn predicted_eigenvalues(epsilon: f64, t: f64) -> Result<Vec<PredictedEigenvalue>> {
    if !(epsilon > 0.0 && epsilon.is_finite() && t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("need eps > 0 and t > 0, got eps = {epsilon}, t = {t}")));
    }
    let e = (-1.0 / (epsilon * epsilon)).exp();
    let powers = [0.5, -2.0, -3.5, -6.0];
    Ok((0..=4)
        .map(|n| PredictedEigenvalue {
            n,
            lambda: if n == 0 { 0.0 } else { -(n as f64) / t },
            correction: if n == 0 { 0.0 } else { epsilon.powf(powers[n - 1]) * e },
        })
        .collect())
}
