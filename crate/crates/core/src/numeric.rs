//! Grid numerics shared by the geometric modules: local polynomial
//! differentiation, cumulative quadrature and cubic interpolation.

use nalgebra::DMatrix;

/// Weights of a least-squares polynomial fit over a window of `width`
/// equally spaced samples, evaluated at window offset `pos`.
///
/// `weights[k][j]` applied to the window samples gives `h^k` times the
/// k-th derivative at `pos`.
#[derive(Clone, Debug)]
pub(crate) struct FitWeights {
    pub weights: Vec<Vec<f64>>,
}

impl FitWeights {
    pub fn new(width: usize, degree: usize, pos: usize, max_order: usize) -> Self {
        assert!(degree < width && max_order <= degree);
        // Offsets are scaled to [-1, 1] so the Vandermonde stays well
        // conditioned for large windows.
        let half = width as f64 / 2.0;
        let v = DMatrix::from_fn(width, degree + 1, |j, p| ((j as f64 - pos as f64) / half).powi(p as i32));
        let pinv = v.pseudo_inverse(1e-14).expect("Vandermonde pseudo-inverse");
        let mut weights = Vec::with_capacity(max_order + 1);
        let mut fact = 1.0;
        for k in 0..=max_order {
            if k > 0 {
                fact *= k as f64;
            }
            let s = fact / half.powi(k as i32);
            weights.push((0..width).map(|j| pinv[(k, j)] * s).collect());
        }
        FitWeights { weights }
    }
}

/// Derivative of `y` at `x[i]` from a degree-`degree` least-squares fit
/// through the `npt` nearest samples (window shifted at the ends).
pub(crate) fn local_derivative(x: &[f64], y: &[f64], i: usize, npt: usize, degree: usize) -> f64 {
    let m = x.len();
    let npt = npt.min(m);
    let degree = degree.min(npt - 1);
    let lo = i.saturating_sub(npt / 2).min(m - npt);
    let xs: Vec<f64> = (lo..lo + npt).map(|j| x[j] - x[i]).collect();
    let scale = xs.iter().fold(0.0f64, |a, b| a.max(b.abs())).max(f64::MIN_POSITIVE);
    let v = DMatrix::from_fn(npt, degree + 1, |r, p| (xs[r] / scale).powi(p as i32));
    let rhs = nalgebra::DVector::from_iterator(npt, (lo..lo + npt).map(|j| y[j]));
    let coef = if npt == degree + 1 { v.lu().solve(&rhs) } else { v.svd(true, true).solve(&rhs, 1e-14).ok() };
    match coef {
        Some(c) => c[1] / scale,
        None => f64::NAN,
    }
}

/// Derivative of `y` with respect to `x` at every sample, using 5-point
/// local quartic fits.
pub(crate) fn derivative_on_grid(x: &[f64], y: &[f64]) -> Vec<f64> {
    (0..x.len()).map(|i| local_derivative(x, y, i, 5, 4)).collect()
}

/// Cumulative integral of uniformly spaced samples with composite Simpson.
///
/// Even nodes use plain Simpson; odd nodes close the last three intervals
/// with the 3/8 rule. Node 1 uses the three-point formula
/// `h/12 (5f₀ + 8f₁ − f₂)`.
pub(crate) fn cumulative_simpson(f: &[f64], h: f64) -> Vec<f64> {
    let m = f.len();
    let mut out = vec![0.0; m];
    if m < 2 {
        return out;
    }
    if m == 2 {
        out[1] = 0.5 * h * (f[0] + f[1]);
        return out;
    }
    out[1] = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
    let mut even = 0.0;
    let mut i = 2;
    while i < m {
        even += h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
        out[i] = even;
        i += 2;
    }
    let mut i = 3;
    while i < m {
        out[i] = out[i - 3] + 3.0 * h / 8.0 * (f[i - 3] + 3.0 * f[i - 2] + 3.0 * f[i - 1] + f[i]);
        i += 2;
    }
    out
}

/// Local cubic Lagrange interpolation on a strictly increasing grid.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Stencil {
    pub start: usize,
    pub weights: [f64; 4],
    pub len: usize,
}

impl Stencil {
    pub fn locate(xs: &[f64], x: f64) -> Stencil {
        let m = xs.len();
        assert!(m >= 1);
        if m < 4 {
            // Linear fallback on tiny grids.
            let j = match xs.partition_point(|v| *v <= x) {
                0 => 0,
                k => (k - 1).min(m.saturating_sub(2)),
            };
            if m == 1 {
                return Stencil { start: 0, weights: [1.0, 0.0, 0.0, 0.0], len: 1 };
            }
            let t = (x - xs[j]) / (xs[j + 1] - xs[j]);
            return Stencil { start: j, weights: [1.0 - t, t, 0.0, 0.0], len: 2 };
        }
        let k = xs.partition_point(|v| *v <= x);
        let start = k.saturating_sub(2).min(m - 4);
        let mut weights = [0.0; 4];
        for a in 0..4 {
            let mut w = 1.0;
            for b in 0..4 {
                if a != b {
                    w *= (x - xs[start + b]) / (xs[start + a] - xs[start + b]);
                }
            }
            weights[a] = w;
        }
        Stencil { start, weights, len: 4 }
    }

    pub fn apply(&self, ys: &[f64]) -> f64 {
        (0..self.len).map(|a| self.weights[a] * ys[self.start + a]).sum()
    }

    pub fn apply_with<F: Fn(usize) -> f64>(&self, f: F) -> f64 {
        (0..self.len).map(|a| self.weights[a] * f(self.start + a)).sum()
    }
}

pub(crate) fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    Stencil::locate(xs, x).apply(ys)
}

pub(crate) fn linspace(a: f64, b: f64, m: usize) -> Vec<f64> {
    if m == 1 {
        return vec![a];
    }
    let h = (b - a) / (m - 1) as f64;
    (0..m).map(|i| if i == m - 1 { b } else { a + h * i as f64 }).collect()
}
