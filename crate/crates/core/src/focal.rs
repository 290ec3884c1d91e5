//! Focal curvatures: the coordinates `m₁…m_{n−1}` of the osculating
//! hypersphere center `γ = α + m₁e₂ + … + m_{n−1}e_n` in the Frenet frame.

use crate::error::{Error, Result};
use crate::frenet::{spherical_reparam, FrenetField, ShapeSignature};
use crate::minkowski::LorentzVector;
use crate::numeric::derivative_on_grid;

/// Focal curvatures smaller than this in magnitude cannot be divided by.
pub const FOCAL_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct FocalCurvatures {
    eps: Vec<f64>,
    /// `m[i]` holds `m_{i+1}` per sample.
    m: Vec<Vec<f64>>,
    /// `dm[i]` holds `dm_{i+1}/ds` per sample.
    dm: Vec<Vec<f64>>,
    /// `sums[i]` holds `Σ_{j=2}^{i+2} εⱼ m_{j−1} m′_{j−1}` per sample.
    sums: Vec<Vec<f64>>,
    focal_points: Vec<LorentzVector>,
}

impl FocalCurvatures {
    pub fn m(&self, i: usize) -> &[f64] {
        &self.m[i - 1]
    }

    /// `dmᵢ/ds`.
    pub fn dm_ds(&self, i: usize) -> &[f64] {
        &self.dm[i - 1]
    }

    pub fn focal_points(&self) -> &[LorentzVector] {
        &self.focal_points
    }

    pub fn count(&self) -> usize {
        self.m.len()
    }

    /// `κ̃₁ = ε₁ m₁′`; needs no division, so it is available even when a
    /// higher focal curvature vanishes.
    pub fn ktilde1(&self) -> Vec<f64> {
        self.dm[0].iter().map(|d| self.eps[0] * d).collect()
    }
}

fn check_focal(v: f64, index: usize, order: usize) -> Result<()> {
    if v.abs() < FOCAL_TOL || !v.is_finite() {
        Err(Error::VanishingFocal { index, order })
    } else {
        Ok(())
    }
}

/// Solves `κᵢ m_{i−1} mᵢ = Σ_{j=2}^{i} εⱼ m_{j−1} m′_{j−1}` for `mᵢ`, starting
/// from `m₁ = ε₁/κ₁`; derivatives are with respect to arc length.
///
/// A curve spanning only `d < n` dimensions has `κ_d = … = 0` and no finite
/// `m_d, …`; the recursion then stops at `m_{d−1}`.
pub fn focal_from_curvatures(f: &FrenetField) -> Result<FocalCurvatures> {
    let n = f.span_dim();
    let len = f.len();
    let s = f.arc_length();
    let eps = f.eps().to_vec();
    for j in 1..n {
        if let Some(i) = f.kappa(j).iter().position(|k| *k == 0.0 || !k.is_finite()) {
            return Err(Error::VanishingCurvature { index: i, value: f.kappa(j)[i] });
        }
    }
    let mut m: Vec<Vec<f64>> = vec![f.kappa(1).iter().map(|k| eps[0] / k).collect()];
    let mut dm: Vec<Vec<f64>> = vec![derivative_on_grid(s, &m[0])];
    let mut sums: Vec<Vec<f64>> = Vec::new();
    let mut acc = vec![0.0; len];
    for i in 2..n {
        let prev = &m[i - 2];
        let dprev = &dm[i - 2];
        for j in 0..len {
            acc[j] += eps[i - 1] * prev[j] * dprev[j];
        }
        let mut mi = Vec::with_capacity(len);
        for j in 0..len {
            check_focal(prev[j], j, i - 1)?;
            mi.push(acc[j] / (f.kappa(i)[j] * prev[j]));
        }
        sums.push(acc.clone());
        dm.push(derivative_on_grid(s, &mi));
        m.push(mi);
    }
    let focal_points = (0..len)
        .map(|j| {
            let mut g = f.points()[j].clone();
            for (i, mi) in m.iter().enumerate() {
                g.axpy(mi[j], &f.frame(j)[i + 1]);
            }
            g
        })
        .collect();
    Ok(FocalCurvatures { eps, m, dm, sums, focal_points })
}

/// `κ̃₁ = ε₁m₁′`, `κ̃ᵢ = ε₁m₁ (ε₂m₁m₁′ + … + εᵢm_{i−1}m′_{i−1}) / (m_{i−1}mᵢ)`,
/// on the `σ` grid of `f`.
pub fn pshape_from_focal(fc: &FocalCurvatures, f: &FrenetField) -> Result<ShapeSignature> {
    let sp = spherical_reparam(f)?;
    let eps1 = fc.eps[0];
    let len = f.len();
    let mut comps = vec![fc.ktilde1()];
    for i in 2..f.dim() {
        let mut c = Vec::with_capacity(len);
        if i > fc.count() {
            // κᵢ ≡ 0 beyond the span of the curve; so is κ̃ᵢ.
            comps.push(vec![0.0; len]);
            continue;
        }
        for j in 0..len {
            let a = fc.m[i - 2][j];
            let b = fc.m[i - 1][j];
            check_focal(a, j, i - 1)?;
            check_focal(b, j, i)?;
            c.push(eps1 * fc.m[0][j] * fc.sums[i - 2][j] / (a * b));
        }
        comps.push(c);
    }
    ShapeSignature::new(sp.sigma, comps, f.e1_character())
}
