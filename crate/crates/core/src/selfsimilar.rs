//! Self-similar curves: constant p-shape curvatures.
//!
//! With constant `κ̃`, the frame equations in `σ` have a constant band matrix
//! `M`, and `M²` splits `E₁ⁿ` into invariant 2-planes (plus a line when `n`
//! is odd). The one Lorentzian plane carries a boost (`sinh`/`cosh`), the
//! spacelike planes rotations, and the line a pure dilation. The curve is
//!
//! ```text
//! hyperbolic, e₁ timelike:   (a₁/b₁) e^{κ̃₁σ} (sinh θ₁, cosh θ₁)
//! hyperbolic, e₂ timelike:  −(a₁/b₁) e^{κ̃₁σ} (cosh θ₁, sinh θ₁)
//! elliptic:                  (aᵢ/bᵢ) e^{κ̃₁σ} (sin θᵢ, −cos θᵢ)
//! odd-n tail:                a_{k+1} e^{κ̃₁σ}
//! ```
//!
//! with `θ₁ = λσ − asinh(κ̃₁/b₁)`, `b₁ = √(λ² − κ̃₁²)`,
//! `θᵢ = ωᵢσ + atan2(κ̃₁, ωᵢ)`, `bᵢ = √(ωᵢ² + κ̃₁²)`.
//! The squared amplitudes `Aᵢ = aᵢ²` solve the linear system `eⱼ·eⱼ = εⱼ`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::curve::SampledCurve;
use crate::error::{Error, Result};
use crate::frenet::{frame_det, frame_matrix, frenet, orientation_sign, pshape};
use crate::matching::{recover_similarity, MatchOptions};
use crate::minkowski::{LorentzVector, Matrix};
use crate::numeric::linspace;

/// Relative tolerance for pairing eigenvalues of `M²`.
pub const PAIRING_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CausalCase {
    E1Timelike,
    E2Timelike,
}

impl CausalCase {
    pub fn eps(self, n: usize) -> Vec<f64> {
        let mut e = vec![1.0; n];
        match self {
            CausalCase::E1Timelike => e[0] = -1.0,
            CausalCase::E2Timelike => e[1] = -1.0,
        }
        e
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfSimilarSpec {
    pub dim: usize,
    pub ktilde: Vec<f64>,
    pub case: CausalCase,
}

impl SelfSimilarSpec {
    pub fn new(ktilde: Vec<f64>, case: CausalCase) -> Result<Self> {
        let s = SelfSimilarSpec { dim: ktilde.len() + 1, ktilde, case };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::InfeasibleSpec("dimension must be at least 2".into()));
        }
        if self.ktilde.len() + 1 != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim - 1, found: self.ktilde.len() });
        }
        if let Some(i) = self.ktilde.iter().position(|k| !k.is_finite() || *k == 0.0) {
            return Err(Error::InfeasibleSpec(format!("ktilde{} must be finite and nonzero", i + 1)));
        }
        Ok(())
    }

    pub fn eps(&self) -> Vec<f64> {
        self.case.eps(self.dim)
    }
}

/// The constant frame matrix `M` for `z = (1, κ̃₂, …, κ̃_{n−1})`.
pub fn build_m(spec: &SelfSimilarSpec) -> Result<Matrix> {
    spec.validate()?;
    let mut z = vec![1.0];
    z.extend_from_slice(&spec.ktilde[1..]);
    Ok(frame_matrix(&spec.eps(), &z))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockKind {
    Hyperbolic,
    Elliptic,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Block {
    pub kind: BlockKind,
    /// Eigenvalue of `M²` (double).
    pub m2_eigenvalue: f64,
    /// `λ = √ν` for the hyperbolic block, `ω = √−ν` for elliptic ones.
    pub rate: f64,
    pub a: f64,
    pub b: f64,
    /// `θ(0)`.
    pub phase: f64,
}

impl Block {
    pub fn theta(&self, sigma: f64) -> f64 {
        self.rate * sigma + self.phase
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenStructure {
    pub spec: SelfSimilarSpec,
    /// All eigenvalues of `M²`, ascending.
    pub eigenvalues: Vec<f64>,
    /// Hyperbolic block first, then elliptic blocks by decreasing `ω`.
    pub blocks: Vec<Block>,
    /// `a_{k+1}` for odd `n`.
    pub tail: Option<f64>,
    /// Max residual of the linear system for `aᵢ²`.
    pub norm_residual: f64,
    /// The last coordinate is negated so that the frame satisfies the
    /// orientation convention.
    pub mirrored: bool,
}

/// Coefficients `(A, B)` of `eⱼ = A h + B h′` per block, where `h` is the
/// block's component of `e₁` and `h″ = s h`.
fn frame_coefficients(spec: &SelfSimilarSpec, blocks: &[(f64, f64)]) -> Vec<Vec<(f64, f64)>> {
    let n = spec.dim;
    let eps = spec.eps();
    let mut z = vec![1.0];
    z.extend_from_slice(&spec.ktilde[1..]);
    blocks
        .iter()
        .map(|&(s2, a0)| {
            let mut out = Vec::with_capacity(n);
            let mut prev = (0.0, 0.0);
            let mut cur = (a0, 0.0);
            for j in 0..n {
                out.push(cur);
                if j == n - 1 {
                    break;
                }
                // D(A h + B Dh) = B s h + A Dh
                let (da, db) = (cur.1 * s2, cur.0);
                let (ep, zp) = if j >= 1 { (eps[j - 1], z[j - 1]) } else { (0.0, 0.0) };
                let den = eps[j + 1] * z[j];
                let next = ((da + ep * zp * prev.0) / den, (db + ep * zp * prev.1) / den);
                prev = cur;
                cur = next;
            }
            out
        })
        .collect()
}

pub fn eigenstructure(spec: &SelfSimilarSpec) -> Result<EigenStructure> {
    let m = build_m(spec)?;
    let n = spec.dim;
    let eps = spec.eps();
    let m2 = m.mul(&m);
    let nm2 = m2.to_nalgebra();
    let scale = nm2.norm().max(1.0);
    let tol = PAIRING_TOL * scale;

    let ev = nm2.complex_eigenvalues();
    if let Some(c) = ev.iter().find(|c| c.im.abs() > tol) {
        return Err(Error::InfeasibleSpec(format!("M^2 has a complex eigenvalue {c}")));
    }
    let mut vals: Vec<f64> = ev.iter().map(|c| c.re).collect();
    vals.sort_by(f64::total_cmp);

    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for v in &vals {
        match clusters.last_mut() {
            Some(c) if (v - c[c.len() - 1]).abs() <= tol => c.push(*v),
            _ => clusters.push(vec![*v]),
        }
    }
    let mut pairs = Vec::new();
    let mut singles = 0;
    for c in &clusters {
        let mean = c.iter().sum::<f64>() / c.len() as f64;
        match c.len() {
            2 if mean.abs() > tol => pairs.push(mean),
            1 if n % 2 == 1 && mean.abs() <= tol => singles += 1,
            _ => {
                return Err(Error::DegenerateEigenvalues(format!("cluster of {} eigenvalues near {mean:.6e}", c.len())))
            }
        }
    }
    if pairs.len() != n / 2 || singles != n % 2 {
        return Err(Error::DegenerateEigenvalues(format!("eigenvalues {vals:?} do not pair up")));
    }

    // Classify each invariant plane by the signature of diag(ε) on it.
    let g = DMatrix::from_diagonal(&DVector::from_vec(eps.clone()));
    let mut hyperbolic = Vec::new();
    let mut elliptic = Vec::new();
    for nu in &pairs {
        let shifted = &nm2 - DMatrix::identity(n, n) * *nu;
        let svd = shifted.svd(false, true);
        let vt = svd.v_t.expect("requested V");
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|a, b| svd.singular_values[*a].total_cmp(&svd.singular_values[*b]));
        let basis = DMatrix::from_fn(n, 2, |r, c| vt[(idx[c], r)]);
        let gram = basis.transpose() * &g * &basis;
        if gram.determinant() < 0.0 {
            hyperbolic.push(*nu);
        } else {
            elliptic.push(*nu);
        }
    }
    if hyperbolic.len() != 1 {
        return Err(Error::InfeasibleSpec(format!(
            "expected one Lorentzian invariant plane, found {}",
            hyperbolic.len()
        )));
    }
    let k1 = spec.ktilde[0];
    let lam2 = hyperbolic[0];
    if !(lam2 > 0.0) {
        return Err(Error::InfeasibleSpec(format!("hyperbolic block has lambda^2 = {lam2:.6e} <= 0")));
    }
    if !(lam2 > k1 * k1) {
        return Err(Error::InfeasibleSpec(format!("lambda1^2 = {lam2:.6} must exceed ktilde1^2 = {:.6}", k1 * k1)));
    }
    if let Some(nu) = elliptic.iter().find(|nu| **nu >= 0.0) {
        return Err(Error::InfeasibleSpec(format!("spacelike invariant plane with lambda^2 = {nu:.6e} >= 0")));
    }
    elliptic.sort_by(f64::total_cmp);
    let lam = lam2.sqrt();
    let omegas: Vec<f64> = elliptic.iter().rev().map(|nu| (-nu).sqrt()).rev().collect();

    // (s, initial A) per block: h″ = s h.
    let mut kinds: Vec<(f64, f64)> = vec![(lam2, 1.0)];
    kinds.extend(omegas.iter().map(|w| (-w * w, 1.0)));
    if n % 2 == 1 {
        kinds.push((0.0, k1));
    }
    let coef = frame_coefficients(spec, &kinds);
    let nb = kinds.len();
    let mut sys = DMatrix::zeros(n, nb);
    for (bi, c) in coef.iter().enumerate() {
        for (j, (a, b)) in c.iter().enumerate() {
            sys[(j, bi)] = if bi == 0 {
                let q = a * a - lam2 * b * b;
                match spec.case {
                    CausalCase::E1Timelike => -q,
                    CausalCase::E2Timelike => q,
                }
            } else if bi <= omegas.len() {
                let w = omegas[bi - 1];
                a * a + w * w * b * b
            } else {
                a * a
            };
        }
    }
    let rhs = DVector::from_vec(eps.clone());
    let sol = sys
        .clone()
        .svd(true, true)
        .solve(&rhs, 1e-13)
        .map_err(|e| Error::InfeasibleSpec(format!("amplitude system: {e}")))?;
    let resid = (&sys * &sol - &rhs).amax();
    let size = sol.amax().max(1.0);
    if !(resid <= 1e-9 * size) {
        return Err(Error::InfeasibleSpec(format!("amplitude equations have no solution (residual {resid:.3e})")));
    }
    if let Some(i) = sol.iter().position(|a| !(*a > 0.0)) {
        return Err(Error::InfeasibleSpec(format!("squared amplitude a{}^2 = {:.6e} is not positive", i + 1, sol[i])));
    }
    let amp: Vec<f64> = sol.iter().map(|a| a.sqrt()).collect();

    let b1 = (lam2 - k1 * k1).sqrt();
    let mut blocks = vec![Block {
        kind: BlockKind::Hyperbolic,
        m2_eigenvalue: lam2,
        rate: lam,
        a: amp[0],
        b: b1,
        phase: -(k1 / b1).asinh(),
    }];
    for (i, w) in omegas.iter().enumerate() {
        blocks.push(Block {
            kind: BlockKind::Elliptic,
            m2_eigenvalue: -w * w,
            rate: *w,
            a: amp[i + 1],
            b: (w * w + k1 * k1).sqrt(),
            phase: k1.atan2(*w),
        });
    }
    let tail = (n % 2 == 1).then(|| amp[nb - 1]);
    let mut es =
        EigenStructure { spec: spec.clone(), eigenvalues: vals, blocks, tail, norm_residual: resid, mirrored: false };
    let frame = es.frame(0.0);
    es.mirrored = frame_det(&frame) * orientation_sign(n) < 0.0;
    Ok(es)
}

impl EigenStructure {
    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    /// Closed-form point at `σ`.
    pub fn point(&self, sigma: f64) -> LorentzVector {
        let k1 = self.spec.ktilde[0];
        let e = (k1 * sigma).exp();
        let mut x = Vec::with_capacity(self.dim());
        for blk in &self.blocks {
            let r = blk.a / blk.b * e;
            let th = blk.theta(sigma);
            match (blk.kind, self.spec.case) {
                (BlockKind::Hyperbolic, CausalCase::E1Timelike) => x.extend([r * th.sinh(), r * th.cosh()]),
                (BlockKind::Hyperbolic, CausalCase::E2Timelike) => x.extend([-r * th.cosh(), -r * th.sinh()]),
                (BlockKind::Elliptic, _) => x.extend([r * th.sin(), -r * th.cos()]),
            }
        }
        if let Some(a) = self.tail {
            x.push(a * e);
        }
        self.finish(x)
    }

    /// Closed-form Frenet frame at `σ`.
    pub fn frame(&self, sigma: f64) -> Vec<LorentzVector> {
        let n = self.dim();
        let k1 = self.spec.ktilde[0];
        let mut kinds: Vec<(f64, f64)> = self.blocks.iter().map(|b| (b.m2_eigenvalue, 1.0)).collect();
        if self.tail.is_some() {
            kinds.push((0.0, k1));
        }
        let coef = frame_coefficients(&self.spec, &kinds);
        // (h, h′) for each block.
        let mut hs: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
        for blk in &self.blocks {
            let (a, r) = (blk.a, blk.rate);
            let t = r * sigma;
            hs.push(match (blk.kind, self.spec.case) {
                (BlockKind::Hyperbolic, CausalCase::E1Timelike) => {
                    (vec![a * t.cosh(), a * t.sinh()], vec![a * r * t.sinh(), a * r * t.cosh()])
                }
                (BlockKind::Hyperbolic, CausalCase::E2Timelike) => {
                    (vec![-a * t.sinh(), -a * t.cosh()], vec![-a * r * t.cosh(), -a * r * t.sinh()])
                }
                (BlockKind::Elliptic, _) => (vec![a * t.cos(), a * t.sin()], vec![-a * r * t.sin(), a * r * t.cos()]),
            });
        }
        if let Some(a) = self.tail {
            hs.push((vec![a], vec![0.0]));
        }
        (0..n)
            .map(|j| {
                let mut x = Vec::with_capacity(n);
                for (bi, (h, dh)) in hs.iter().enumerate() {
                    let (ca, cb) = coef[bi][j];
                    x.extend(h.iter().zip(dh).map(|(u, v)| ca * u + cb * v));
                }
                self.finish(x)
            })
            .collect()
    }

    fn finish(&self, mut x: Vec<f64>) -> LorentzVector {
        if self.mirrored {
            let last = x.len() - 1;
            x[last] = -x[last];
        }
        LorentzVector::new(x).expect("dim >= 2")
    }

    /// `(bᵢ²/aᵢ²)Qᵢ` for each block and `x²/a_{k+1}²` for the tail; each equals
    /// `e^{2κ̃₁σ}` on the curve.
    fn block_forms(&self, x: &LorentzVector) -> (Vec<f64>, Option<f64>) {
        let mut forms = Vec::with_capacity(self.blocks.len());
        for (i, blk) in self.blocks.iter().enumerate() {
            let (u, v) = (x[2 * i], x[2 * i + 1]);
            let q = match (blk.kind, self.spec.case) {
                (BlockKind::Hyperbolic, CausalCase::E1Timelike) => -u * u + v * v,
                (BlockKind::Hyperbolic, CausalCase::E2Timelike) => u * u - v * v,
                (BlockKind::Elliptic, _) => u * u + v * v,
            };
            forms.push(blk.b * blk.b / (blk.a * blk.a) * q);
        }
        let tail = self.tail.map(|a| {
            let t = x[x.dim() - 1];
            t * t / (a * a)
        });
        (forms, tail)
    }

    /// Value of the quadratic hypersurface equation at `x`, normalized by
    /// `e^{2κ̃₁σ}`.
    pub fn hypersurface_value(&self, x: &LorentzVector, sigma: f64) -> f64 {
        let n = self.dim();
        let k1 = self.spec.ktilde[0];
        let norm = (2.0 * k1 * sigma).exp();
        if n == 3 && self.spec.case == CausalCase::E1Timelike {
            let k2 = self.spec.ktilde[1];
            let lhs = k2 * k2 / (k1 * k1) * (-x[0] * x[0] + x[1] * x[1]);
            let rhs = x[2] * x[2] / (1.0 - k1 * k1 - k2 * k2);
            return (lhs - rhs) / norm;
        }
        let (forms, tail) = self.block_forms(x);
        let k = forms.len();
        match tail {
            Some(t) => (forms.iter().sum::<f64>() - k as f64 * t) / norm,
            None if k == 1 => forms[0] / norm - 1.0,
            None => (forms[..k - 1].iter().sum::<f64>() - (k - 1) as f64 * forms[k - 1]) / norm,
        }
    }
}

/// Samples the closed form at `m` uniform values of `σ`.
pub fn generate(spec: &SelfSimilarSpec, sigma_range: (f64, f64), m: usize) -> Result<SampledCurve> {
    let es = eigenstructure(spec)?;
    let grid = linspace(sigma_range.0, sigma_range.1, m);
    let points = grid.iter().map(|s| es.point(*s)).collect();
    SampledCurve::new(grid, points, format!("selfsim{}", spec.dim))
}

/// Max normalized residual of the quadratic hypersurface equation over
/// the samples of `c`, whose parameter must be `σ`.
pub fn hypersurface_residual(c: &SampledCurve, spec: &SelfSimilarSpec) -> Result<f64> {
    let es = eigenstructure(spec)?;
    if c.dim() != spec.dim {
        return Err(Error::DimensionMismatch { expected: spec.dim, found: c.dim() });
    }
    Ok(c.params().iter().zip(c.points()).map(|(s, x)| es.hypersurface_value(x, *s).abs()).fold(0.0, f64::max))
}

#[derive(Clone, Debug, Serialize)]
pub struct ShiftCheck {
    pub shift: f64,
    pub matched: bool,
    pub residual: Option<f64>,
    pub mu: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelfSimilarReport {
    /// `max |κ̃ᵢ(σ) − κ̃ᵢ|` per curvature, over confident samples.
    pub max_deviation: Vec<f64>,
    pub transitivity: Vec<ShiftCheck>,
}

impl SelfSimilarReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_deviation.iter().all(|d| *d <= tol) && self.transitivity.iter().all(|s| s.matched)
    }
}

/// Fractions of the `σ` extent used as shifts in the transitivity check.
pub const SHIFT_FRACTIONS: [f64; 3] = [0.1, 0.2, 0.3];

/// Checks that `c` has the constant invariants of `spec`, and that `c`
/// maps onto its own shifted copies by p-similarities.
pub fn verify_selfsimilar(c: &SampledCurve, spec: &SelfSimilarSpec, opts: &MatchOptions) -> Result<SelfSimilarReport> {
    spec.validate()?;
    if c.dim() != spec.dim {
        return Err(Error::DimensionMismatch { expected: spec.dim, found: c.dim() });
    }
    let c = c.resample_uniform();
    let f = frenet(&c)?;
    let sig = pshape(&f)?;
    let range = sig.confident_range();
    let max_deviation = (1..spec.dim)
        .map(|i| sig.ktilde(i)[range.clone()].iter().map(|k| (k - spec.ktilde[i - 1]).abs()).fold(0.0, f64::max))
        .collect();
    let total = sig.sigma()[sig.len() - 1];
    let mut transitivity = Vec::new();
    for frac in SHIFT_FRACTIONS {
        let target = frac * total;
        let k = sig.sigma().partition_point(|s| *s < target);
        let shifted = c.slice(k..c.len())?;
        let shift = sig.sigma()[k];
        let check = match recover_similarity(&c, &shifted, opts) {
            Ok(r) => ShiftCheck { shift, matched: true, residual: r.residual, mu: r.recovered.map(|f| f.mu()) },
            Err(Error::NoMatch { .. }) => ShiftCheck { shift, matched: false, residual: None, mu: None },
            Err(Error::ResidualTooLarge { residual, .. }) => {
                ShiftCheck { shift, matched: false, residual: Some(residual), mu: None }
            }
            Err(e) => return Err(e),
        };
        transitivity.push(check);
    }
    Ok(SelfSimilarReport { max_deviation, transitivity })
}
