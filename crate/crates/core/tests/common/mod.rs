//! Closed forms used as oracles, written out independently of the library's
//! generators.
#![allow(dead_code)]

use lorentz_shape::{LorentzVector, SampledCurve};

pub fn v(x: &[f64]) -> LorentzVector {
    LorentzVector::new(x.to_vec()).unwrap()
}

pub fn sampled(t0: f64, t1: f64, m: usize, f: impl Fn(f64) -> Vec<f64>) -> SampledCurve {
    let t: Vec<f64> = (0..m).map(|i| t0 + (t1 - t0) * i as f64 / (m - 1) as f64).collect();
    let pts = t.iter().map(|s| v(&f(*s))).collect();
    SampledCurve::new(t, pts, "oracle").unwrap()
}

/// First example, spacelike in `E₁³` with `κ̃₁ = 0`, `κ̃₂ = a`.
pub mod example1 {
    use super::*;

    fn c(a: f64) -> f64 {
        (1.0 + a * a).sqrt()
    }

    pub fn alpha(a: f64, s: f64) -> Vec<f64> {
        let c = c(a);
        vec![(c * s).cosh() / (c * c), -(c * s).sinh() / (c * c), a * s / c]
    }

    pub fn d_alpha(a: f64, s: f64) -> Vec<f64> {
        let c = c(a);
        vec![(c * s).sinh() / c, -(c * s).cosh() / c, a / c]
    }

    /// Initial frame; `e₂` carries the sign that makes `det = (−1)ⁿ`.
    pub fn frame0(a: f64) -> Vec<LorentzVector> {
        let c = c(a);
        vec![v(&[0.0, -1.0 / c, a / c]), v(&[-1.0, 0.0, 0.0]), v(&[0.0, a / c, 1.0 / c])]
    }

    pub const EPS: [f64; 3] = [1.0, -1.0, 1.0];
}

/// Second example, timelike in `E₁⁴`, `z = (1/σ, 0, 0)`.
pub mod example2 {
    use super::*;
    const R2: f64 = std::f64::consts::SQRT_2;

    pub fn alpha(s: f64) -> Vec<f64> {
        let u = s * s.sinh() - s.cosh();
        let w = (s * s.cosh() - s.sinh()) / R2;
        vec![R2 * u, w, u, w]
    }

    /// Frame at `σ = 0`.
    pub fn frame0() -> Vec<LorentzVector> {
        vec![
            v(&[R2, 0.0, 1.0, 0.0]),
            v(&[0.0, 1.0 / R2, 0.0, 1.0 / R2]),
            v(&[1.0, 0.0, R2, 0.0]),
            v(&[0.0, -1.0 / R2, 0.0, 1.0 / R2]),
        ]
    }
}

pub fn sup(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, f64::max)
}
