//! Quadrature rules: fixed Gauss–Legendre panels and an adaptive
//! Gauss–Kronrod integrator.

use gauss_quad::GaussLegendre;

use crate::error::{Error, Result};

/// Gauss–Legendre rule on `[−1, 1]` stored as `(node, weight)` pairs in
/// ascending node order.
#[derive(Debug, Clone)]
pub struct Panel {
    pairs: Vec<(f64, f64)>,
}

impl Panel {
    /// `n`-point rule (`n ≥ 2`).
    pub fn new(n: usize) -> Result<Self> {
        let rule = GaussLegendre::new(n)
            .map_err(|e| Error::Quadrature(format!("cannot build {n}-point Gauss-Legendre rule: {e}")))?;
        let mut pairs: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Self { pairs })
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    /// `false` for every constructed rule.
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        self.pairs.iter().map(move |&(x, w)| (mid + half * x, half * w))
    }

    /// `∫_a^b f`.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// Gauss–Kronrod 7/15 abscissae (non-negative half, Kronrod order).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
/// Kronrod weights matching [`XGK`].
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for the odd-indexed Kronrod abscissae (and the centre).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Maximum number of subintervals of [`adaptive`].
const MAX_SEGMENTS: usize = 20_000;

/// Adaptive Gauss–Kronrod (7/15) quadrature of `∫_a^b f` to
/// `max(abs_tol, rel_tol·|I|)`, bisecting the interval with the largest
/// error estimate.
///
/// # Errors
/// [`Error::Quadrature`] if the tolerance is not met within 20 000
/// subintervals or the integrand is not finite.
pub fn adaptive(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut segs = vec![{
        let (v, e) = gk15(&mut f, a, b);
        (a, b, v, e)
    }];
    loop {
        let total: f64 = segs.iter().map(|s| s.2).sum();
        let err: f64 = segs.iter().map(|s| s.3).sum();
        if !total.is_finite() || !err.is_finite() {
            return Err(Error::Quadrature(format!("non-finite integrand on [{a}, {b}]")));
        }
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(total);
        }
        if segs.len() >= MAX_SEGMENTS {
            return Err(Error::Quadrature(format!(
                "tolerance not met on [{a}, {b}]: estimate {total}, error {err}"
            )));
        }
        let (i, _) = segs
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, s)| if s.3 > best.1 { (i, s.3) } else { best });
        let (sa, sb, _, _) = segs.swap_remove(i);
        let mid = 0.5 * (sa + sb);
        let (v1, e1) = gk15(&mut f, sa, mid);
        let (v2, e2) = gk15(&mut f, mid, sb);
        segs.push((sa, mid, v1, e1));
        segs.push((mid, sb, v2, e2));
    }
}
