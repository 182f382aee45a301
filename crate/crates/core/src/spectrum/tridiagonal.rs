//! Periodic (cyclic) tridiagonal matrices and their linear solves.

use crate::error::{Error, Result};

/// `M×M` matrix with `T[j][j−1] = lower[j]`, `T[j][j] = diag[j]`,
/// `T[j][j+1] = upper[j]`, indices taken modulo `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicTridiagonal {
    /// Coefficient of `v_{j−1}` in row `j`.
    pub lower: Vec<f64>,
    /// Diagonal.
    pub diag: Vec<f64>,
    /// Coefficient of `v_{j+1}` in row `j`.
    pub upper: Vec<f64>,
}

impl CyclicTridiagonal {
    /// Dimension.
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    /// `true` for the empty matrix.
    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// `T v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let m = self.len();
        (0..m)
            .map(|j| {
                self.lower[j] * v[(j + m - 1) % m] + self.diag[j] * v[j] + self.upper[j] * v[(j + 1) % m]
            })
            .collect()
    }

    /// Dense copy, row-major.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let m = self.len();
        let mut a = vec![vec![0.0; m]; m];
        for j in 0..m {
            a[j][(j + m - 1) % m] += self.lower[j];
            a[j][j] += self.diag[j];
            a[j][(j + 1) % m] += self.upper[j];
        }
        a
    }

    /// Largest absolute row sum (the ∞-norm).
    pub fn norm_inf(&self) -> f64 {
        (0..self.len())
            .map(|j| self.lower[j].abs() + self.diag[j].abs() + self.upper[j].abs())
            .fold(0.0, f64::max)
    }

    /// Factorises `T − σI` for repeated solves.
    pub fn shifted_factor(&self, sigma: f64) -> Result<CyclicFactor> {
        CyclicFactor::new(self, sigma)
    }
}

/// LU factors (partial pivoting) of a non-periodic tridiagonal matrix, in the
/// layout of LAPACK's `gttrf`.
#[derive(Debug, Clone)]
struct TridiagonalLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagonalLu {
    /// `dl[i] = A[i+1][i]`, `d[i] = A[i][i]`, `du[i] = A[i][i+1]`.
    fn new(mut dl: Vec<f64>, mut d: Vec<f64>, mut du: Vec<f64>) -> Result<Self> {
        let n = d.len();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    return Err(Error::Eigen("exactly singular tridiagonal factor".into()));
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        if n > 0 && d[n - 1] == 0.0 {
            // Singular to working precision: perturb so inverse iteration can
            // still proceed (the solution direction is the null vector).
            d[n - 1] = f64::EPSILON * d.iter().fold(0.0f64, |a, &x| a.max(x.abs())).max(f64::MIN_POSITIVE);
        }
        Ok(Self { dl, d, du, du2, swapped })
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

/// Factorisation of a shifted cyclic tridiagonal matrix via the
/// Sherman–Morrison corner correction.
#[derive(Debug, Clone)]
pub struct CyclicFactor {
    lu: TridiagonalLu,
    /// `T'⁻¹ u` for the rank-one corner update `u vᵀ`.
    z: Vec<f64>,
    v0: f64,
    vlast: f64,
    denom: f64,
}

impl CyclicFactor {
    fn new(t: &CyclicTridiagonal, sigma: f64) -> Result<Self> {
        let m = t.len();
        if m < 3 {
            return Err(Error::InvalidParameter("cyclic tridiagonal solve needs at least 3 rows".into()));
        }
        let mut d: Vec<f64> = t.diag.iter().map(|&x| x - sigma).collect();
        let alpha = t.lower[0]; // T[0][M−1]
        let beta = t.upper[m - 1]; // T[M−1][0]
        let gamma = if d[0] != 0.0 { -d[0] } else { 1.0 };
        d[0] -= gamma;
        d[m - 1] -= alpha * beta / gamma;
        let dl: Vec<f64> = (0..m - 1).map(|i| t.lower[i + 1]).collect();
        let du: Vec<f64> = (0..m - 1).map(|i| t.upper[i]).collect();
        let lu = TridiagonalLu::new(dl, d, du)?;
        let mut z = vec![0.0; m];
        z[0] = gamma;
        z[m - 1] = beta;
        lu.solve(&mut z);
        let v0 = 1.0;
        let vlast = alpha / gamma;
        let denom = 1.0 + v0 * z[0] + vlast * z[m - 1];
        Ok(Self { lu, z, v0, vlast, denom })
    }

    /// Solves `(T − σI) x = b` in place.
    pub fn solve(&self, b: &mut [f64]) {
        let m = b.len();
        self.lu.solve(b);
        let denom = if self.denom != 0.0 { self.denom } else { f64::EPSILON };
        let fact = (self.v0 * b[0] + self.vlast * b[m - 1]) / denom;
        for (bi, zi) in b.iter_mut().zip(&self.z) {
            *bi -= fact * zi;
        }
    }
}
