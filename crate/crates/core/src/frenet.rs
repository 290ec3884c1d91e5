//! Frenet frames, curvatures, spherical arc length and p-shape curvatures.
//!
//! Conventions: `κⱼ > 0` for `j ≤ n−2` (enforced by the sign of `e_{j+1}`),
//! and `e_n` is fixed by `det(e₁,…,e_n) = (−1)ⁿ`, which is the orientation
//! the frames of the worked examples in the literature satisfy. `κ_{n−1}`
//! keeps its sign.

use std::ops::Range;

use crate::curve::{
    arc_length_on_jet, derivatives_with, tangent_character, JetOptions, SampledCurve, BOUNDARY_SAMPLES,
};
use crate::error::{Error, Result};
use crate::minkowski::{causal_classify, CausalCharacter, LorentzVector, Matrix, LIGHTLIKE_TOL};
use crate::numeric::{cumulative_simpson, derivative_on_grid, local_derivative, Stencil};

/// Lower bound on `κ₁·L` (`L` the total arc length) for `σ` to exist.
pub const KAPPA_MIN: f64 = 1e-8;

/// Relative size below which a Gram–Schmidt residual counts as zero.
pub const DEGENERATE_TOL: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq)]
pub struct FrenetOptions {
    pub jet: JetOptions,
    pub kappa_min: f64,
    pub degenerate_tol: f64,
}

impl Default for FrenetOptions {
    fn default() -> Self {
        FrenetOptions { jet: JetOptions::default(), kappa_min: KAPPA_MIN, degenerate_tol: DEGENERATE_TOL }
    }
}

/// Frenet apparatus of a sampled curve, on the uniform grid the
/// derivatives were taken on.
#[derive(Clone, Debug)]
pub struct FrenetField {
    dim: usize,
    params: Vec<f64>,
    points: Vec<LorentzVector>,
    arc_length: Vec<f64>,
    speed: Vec<f64>,
    frames: Vec<Vec<LorentzVector>>,
    eps: Vec<f64>,
    curvatures: Vec<Vec<f64>>,
    span_dim: usize,
}

impl FrenetField {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn points(&self) -> &[LorentzVector] {
        &self.points
    }

    pub fn arc_length(&self) -> &[f64] {
        &self.arc_length
    }

    /// `‖α′(t)‖`.
    pub fn speed(&self) -> &[f64] {
        &self.speed
    }

    /// Frame `e₁…e_n` at sample `i`.
    pub fn frame(&self, i: usize) -> &[LorentzVector] {
        &self.frames[i]
    }

    /// `εᵢ = eᵢ·eᵢ`, constant along the curve.
    pub fn eps(&self) -> &[f64] {
        &self.eps
    }

    /// `curvatures()[j]` holds `κ_{j+1}` at every sample.
    pub fn curvatures(&self) -> &[Vec<f64>] {
        &self.curvatures
    }

    pub fn kappa(&self, j: usize) -> &[f64] {
        &self.curvatures[j - 1]
    }

    /// Dimension of the span of the derivatives: `n` for generic curves,
    /// less when the curve lies in a lower-dimensional affine subspace and
    /// the frame was completed arbitrarily.
    pub fn span_dim(&self) -> usize {
        self.span_dim
    }

    pub fn e1_character(&self) -> CausalCharacter {
        CausalCharacter::from_sign(self.eps[0])
    }

    /// Samples away from the one-sided derivative windows.
    pub fn confident_range(&self) -> Range<usize> {
        BOUNDARY_SAMPLES..self.len() - BOUNDARY_SAMPLES
    }

    /// `max |eᵢ·eⱼ − εᵢδᵢⱼ|` over all samples.
    pub fn orthonormality_residual(&self) -> f64 {
        self.frames.iter().map(|f| frame_residual(f, &self.eps)).fold(0.0, f64::max)
    }

    /// Frame at an arbitrary parameter, by cubic interpolation of the
    /// sampled frames followed by metric Gram–Schmidt.
    pub fn frame_at_param(&self, t: f64) -> Result<Vec<LorentzVector>> {
        let st = Stencil::locate(&self.params, t);
        let raw: Vec<LorentzVector> = (0..self.dim)
            .map(|i| {
                let comps = (0..self.dim).map(|k| st.apply_with(|j| self.frames[j][i][k])).collect();
                LorentzVector::new(comps).expect("dim >= 2")
            })
            .collect();
        orthonormalize(&raw, &self.eps).ok_or(Error::LightlikeFrameVector { index: st.start, vector: 0 })
    }
}

/// `max |eᵢ·eⱼ − εᵢδᵢⱼ|` for one frame.
pub fn frame_residual(frame: &[LorentzVector], eps: &[f64]) -> f64 {
    let mut r: f64 = 0.0;
    for i in 0..frame.len() {
        for j in i..frame.len() {
            let target = if i == j { eps[i] } else { 0.0 };
            r = r.max((frame[i].dot(&frame[j]) - target).abs());
        }
    }
    r
}

/// Metric Gram–Schmidt in frame order, keeping the prescribed signs.
/// Returns `None` if a residual turns lightlike or changes character.
pub fn orthonormalize(frame: &[LorentzVector], eps: &[f64]) -> Option<Vec<LorentzVector>> {
    let mut out: Vec<LorentzVector> = Vec::with_capacity(frame.len());
    for (k, v) in frame.iter().enumerate() {
        let mut w = v.clone();
        for (e, ep) in out.iter().zip(eps) {
            let c = ep * w.dot(e);
            w.axpy(-c, e);
        }
        let q = w.dot(&w);
        if q * eps[k] <= LIGHTLIKE_TOL * w.euclidean_norm_sq() {
            return None;
        }
        out.push(w.scaled(1.0 / q.abs().sqrt()));
    }
    Some(out)
}

/// Band matrix of the frame equations in `σ`:
/// `e₁′ = ε₂z₁e₂`, `eᵢ′ = −ε_{i−1}z_{i−1}e_{i−1} + ε_{i+1}zᵢe_{i+1}`, with the
/// frame stored as rows. `z` has `n−1` entries.
pub fn frame_matrix(eps: &[f64], z: &[f64]) -> Matrix {
    let n = eps.len();
    assert_eq!(z.len() + 1, n);
    let mut m = Matrix::zeros(n);
    for j in 0..n - 1 {
        m[(j, j + 1)] = eps[j + 1] * z[j];
        m[(j + 1, j)] = -eps[j] * z[j];
    }
    m
}

/// Vector orthogonal (in the Lorentz product) to all of `vs`: the
/// generalized cross product of the rows `I*v`.
fn lorentz_complement(vs: &[LorentzVector]) -> LorentzVector {
    let n = vs.len() + 1;
    let mut u = vec![0.0; n];
    let mut minor = vec![0.0; (n - 1) * (n - 1)];
    for (k, uk) in u.iter_mut().enumerate() {
        for (r, v) in vs.iter().enumerate() {
            let mut c = 0;
            for col in 0..n {
                if col == k {
                    continue;
                }
                let val = if col == 0 { -v[0] } else { v[col] };
                minor[r * (n - 1) + c] = val;
                c += 1;
            }
        }
        let d = Matrix::from_row_major(n - 1, minor.clone()).expect("square minor").det();
        *uk = if k % 2 == 0 { d } else { -d };
    }
    LorentzVector::new(u).expect("dim >= 2")
}

pub(crate) fn frame_det(frame: &[LorentzVector]) -> f64 {
    Matrix::from_columns(frame).expect("square frame").det()
}

/// Sign `det(e₁,…,e_n)` must have.
pub fn orientation_sign(n: usize) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

struct SampleFrame {
    frame: Vec<LorentzVector>,
    eps: Vec<f64>,
    kappa: Vec<f64>,
    /// First derivative level whose residual vanished, if any.
    degenerate_level: Option<usize>,
}

/// `span` is the parameter extent of the curve; `|α′|/span^{k}` sets the
/// floor below which the `k+1`-th derivative counts as zero.
fn sample_frame(ders: &[&LorentzVector], i: usize, tol: f64, span: f64, stop_at: Option<usize>) -> Result<SampleFrame> {
    let n = ders.len();
    let floor = |k: usize| ders[k].euclidean_norm().max(ders[0].euclidean_norm() / span.powi(k as i32));
    let v = ders[0].norm();
    let mut frame = Vec::with_capacity(n);
    let mut eps = Vec::with_capacity(n);
    let mut r: Vec<f64> = Vec::with_capacity(n);
    let mut kappa = vec![0.0; n - 1];
    let last = stop_at.unwrap_or(n + 1);
    for k in 0..n - 1 {
        let level = k + 1;
        if level >= last {
            return Ok(SampleFrame { frame, eps, kappa, degenerate_level: Some(level) });
        }
        let mut w = ders[k].clone();
        for (e, ep) in frame.iter().zip(&eps) {
            let c = ep * w.dot(e);
            w.axpy(-c, e);
        }
        if level >= 2 && w.euclidean_norm() <= tol * floor(k) {
            return Ok(SampleFrame { frame, eps, kappa, degenerate_level: Some(level) });
        }
        let ch = causal_classify(&w, LIGHTLIKE_TOL);
        if ch == CausalCharacter::Lightlike {
            return Err(Error::LightlikeFrameVector { index: i, vector: level });
        }
        let ep = ch.sign();
        let nw = w.norm();
        let s = if k == 0 { 1.0 } else { ep * r[k - 1].signum() };
        frame.push(w.scaled(s / nw));
        eps.push(ep);
        r.push(s * nw);
        if k >= 1 {
            kappa[k - 1] = ep * r[k] / (r[k - 1] * v);
        }
    }
    if n >= last {
        return Ok(SampleFrame { frame, eps, kappa, degenerate_level: Some(n) });
    }
    let (en, ep) = close_frame(&frame, n, i)?;
    let proj = ders[n - 1].dot(&en);
    if proj.abs() <= tol * floor(n - 1) {
        return Ok(SampleFrame { frame, eps, kappa, degenerate_level: Some(n) });
    }
    let rn = ep * proj;
    kappa[n - 2] = ep * rn / (r[n - 2] * v);
    frame.push(en);
    eps.push(ep);
    Ok(SampleFrame { frame, eps, kappa, degenerate_level: None })
}

/// Last frame vector from the first `n−1`, oriented by the det rule.
fn close_frame(frame: &[LorentzVector], n: usize, i: usize) -> Result<(LorentzVector, f64)> {
    let u = lorentz_complement(frame);
    let ch = causal_classify(&u, LIGHTLIKE_TOL);
    if ch == CausalCharacter::Lightlike {
        return Err(Error::LightlikeFrameVector { index: i, vector: n });
    }
    let mut en = u.scaled(1.0 / u.norm());
    let mut full = frame.to_vec();
    full.push(en.clone());
    if frame_det(&full) * orientation_sign(n) < 0.0 {
        en = en.scaled(-1.0);
    }
    Ok((en, ch.sign()))
}

/// Completes `e₁…e_{l−1}` to a pseudo-orthonormal frame using coordinate
/// axes in the given order.
fn complete_frame(
    partial: &[LorentzVector],
    eps: &[f64],
    axes: &[usize],
    n: usize,
    i: usize,
) -> Result<(Vec<LorentzVector>, Vec<f64>)> {
    let mut frame = partial.to_vec();
    let mut eps = eps.to_vec();
    for &a in axes {
        if frame.len() == n - 1 {
            break;
        }
        let mut w = LorentzVector::axis(n, a);
        for (e, ep) in frame.iter().zip(&eps) {
            let c = ep * w.dot(e);
            w.axpy(-c, e);
        }
        let q = w.dot(&w);
        if q.abs() <= 1e-6 * w.euclidean_norm_sq() {
            return Err(Error::DegenerateJet { index: i, detail: "frame completion lost rank".into() });
        }
        frame.push(w.scaled(1.0 / q.abs().sqrt()));
        eps.push(q.signum());
    }
    let (en, ep) = close_frame(&frame, n, i)?;
    frame.push(en);
    eps.push(ep);
    Ok((frame, eps))
}

/// Axis order for frame completion: greedily the axis whose projection off
/// the current span is least null.
fn completion_axes(partial: &[LorentzVector], eps: &[f64], n: usize) -> Vec<usize> {
    let mut frame = partial.to_vec();
    let mut eps = eps.to_vec();
    let mut chosen = Vec::new();
    while frame.len() < n - 1 {
        let mut best: Option<(usize, f64, LorentzVector)> = None;
        for a in 0..n {
            if chosen.contains(&a) {
                continue;
            }
            let mut w = LorentzVector::axis(n, a);
            for (e, ep) in frame.iter().zip(&eps) {
                let c = ep * w.dot(e);
                w.axpy(-c, e);
            }
            let score = w.dot(&w).abs() / w.euclidean_norm_sq().max(f64::MIN_POSITIVE);
            if best.as_ref().map_or(true, |b| score > b.1 + 1e-12) {
                best = Some((a, score, w));
            }
        }
        let (a, _, w) = best.expect("axis available");
        let q = w.dot(&w);
        frame.push(w.scaled(1.0 / q.abs().sqrt()));
        eps.push(q.signum());
        chosen.push(a);
    }
    chosen
}

pub fn frenet(c: &SampledCurve) -> Result<FrenetField> {
    frenet_with(c, &FrenetOptions::default())
}

/// Frenet frames by Lorentzian Gram–Schmidt on `α′ … α⁽ⁿ⁾`, with curvatures
/// read off the leading coefficients of the derivatives.
///
/// Curves whose derivatives span only an `l`-dimensional subspace at every
/// sample (`l ≥ 2`) get `κ_l = … = κ_{n−1} = 0` and a frame completed by a
/// fixed choice of complement.
pub fn frenet_with(c: &SampledCurve, opts: &FrenetOptions) -> Result<FrenetField> {
    let n = c.dim();
    let jet = derivatives_with(c, n, &opts.jet)?;
    let m = jet.len();
    tangent_character(&jet.orders[0])?;
    let arc_length = arc_length_on_jet(&jet)?;
    let speed: Vec<f64> = jet.orders[0].iter().map(|v| v.norm()).collect();
    let span = jet.params[m - 1] - jet.params[0];

    let ders_at = |i: usize| -> Vec<&LorentzVector> { (1..=n).map(|k| jet.derivative(k, i)).collect() };

    let mut samples = Vec::with_capacity(m);
    for i in 0..m {
        samples.push(sample_frame(&ders_at(i), i, opts.degenerate_tol, span, None)?);
    }

    let levels: Vec<Option<usize>> = samples.iter().map(|s| s.degenerate_level).collect();
    let min_level = levels.iter().filter_map(|l| *l).min();
    let mut span_dim = n;
    if let Some(level) = min_level {
        if level <= 2 {
            let i = levels.iter().position(|l| *l == Some(level)).unwrap();
            return Err(Error::DegenerateJet {
                index: i,
                detail: "second derivative is parallel to the tangent".into(),
            });
        }
        if let Some(i) = levels.iter().position(|l| l.is_none()) {
            return Err(Error::DegenerateJet {
                index: i,
                detail: format!("derivatives span {} dimensions only on part of the curve", level - 1),
            });
        }
        // Truncate every sample at the common level and complete.
        span_dim = level - 1;
        for (i, s) in samples.iter_mut().enumerate() {
            if s.degenerate_level != Some(level) {
                *s = sample_frame(&ders_at(i), i, opts.degenerate_tol, span, Some(level))?;
            }
        }
        let mid = m / 2;
        let axes = completion_axes(&samples[mid].frame, &samples[mid].eps, n);
        for (i, s) in samples.iter_mut().enumerate() {
            let (frame, eps) = complete_frame(&s.frame, &s.eps, &axes, n, i)?;
            s.frame = frame;
            s.eps = eps;
            for k in level - 1..n {
                s.kappa[k - 1] = 0.0;
            }
        }
    }

    let eps = samples[0].eps.clone();
    for (i, s) in samples.iter().enumerate() {
        if let Some(k) = s.eps.iter().zip(&eps).position(|(a, b)| a != b) {
            return Err(Error::LightlikeFrameVector { index: i, vector: k + 1 });
        }
    }

    let mut curvatures = vec![Vec::with_capacity(m); n - 1];
    let mut frames = Vec::with_capacity(m);
    for s in samples {
        for (j, k) in s.kappa.iter().enumerate() {
            curvatures[j].push(*k);
        }
        frames.push(s.frame);
    }

    Ok(FrenetField {
        dim: n,
        params: jet.params.clone(),
        points: jet.points.clone(),
        arc_length,
        speed,
        frames,
        eps,
        curvatures,
        span_dim,
    })
}

#[derive(Clone, Debug)]
pub struct SphericalParam {
    /// `σ(sᵢ) = ∫ κ₁ ds`, zero at the first sample.
    pub sigma: Vec<f64>,
    /// `dα/dσ = e₁/κ₁`.
    pub dalpha_dsigma: Vec<LorentzVector>,
}

pub fn spherical_reparam(f: &FrenetField) -> Result<SphericalParam> {
    spherical_reparam_with(f, KAPPA_MIN)
}

pub fn spherical_reparam_with(f: &FrenetField, kappa_min: f64) -> Result<SphericalParam> {
    let k1 = f.kappa(1);
    let total = f.arc_length[f.len() - 1];
    for (i, k) in k1.iter().enumerate() {
        if !(k * total > kappa_min) {
            return Err(Error::VanishingCurvature { index: i, value: k * total });
        }
    }
    let integrand: Vec<f64> = k1.iter().zip(&f.speed).map(|(k, v)| k * v).collect();
    let h = (f.params[f.len() - 1] - f.params[0]) / (f.len() - 1) as f64;
    let sigma = cumulative_simpson(&integrand, h);
    if let Some(i) = sigma.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::VanishingCurvature { index: i + 1, value: k1[i + 1] * total });
    }
    let dalpha_dsigma = f.frames.iter().zip(k1).map(|(fr, k)| fr[0].scaled(1.0 / k)).collect();
    Ok(SphericalParam { sigma, dalpha_dsigma })
}

/// Per-sample spherical parameter and p-shape curvatures; the complete
/// similarity invariant of the curve.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeSignature {
    dim: usize,
    sigma: Vec<f64>,
    components: Vec<Vec<f64>>,
    e1: CausalCharacter,
}

impl ShapeSignature {
    pub fn new(sigma: Vec<f64>, components: Vec<Vec<f64>>, e1: CausalCharacter) -> Result<Self> {
        let dim = components.len() + 1;
        if dim < 2 {
            return Err(Error::InvalidInput("signature needs at least one curvature".into()));
        }
        for c in &components {
            crate::error::check_dim(sigma.len(), c.len())?;
        }
        if let Some(i) = sigma.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::NonMonotoneParameter { index: i + 1 });
        }
        Ok(ShapeSignature { dim, sigma, components, e1 })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    /// `components()[i]` holds `κ̃_{i+1}`.
    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    pub fn ktilde(&self, i: usize) -> &[f64] {
        &self.components[i - 1]
    }

    pub fn e1_character(&self) -> CausalCharacter {
        self.e1
    }

    pub fn confident_range(&self) -> Range<usize> {
        BOUNDARY_SAMPLES..self.len() - BOUNDARY_SAMPLES
    }

    /// `κ̃ᵢ(σ)` by cubic interpolation.
    pub fn value_at(&self, i: usize, sigma: f64) -> f64 {
        crate::numeric::interpolate(&self.sigma, &self.components[i - 1], sigma)
    }
}

/// `κ̃₁ = −(1/κ₁) dκ₁/dσ`, `κ̃ᵢ = κᵢ/κ₁`.
pub fn pshape(f: &FrenetField) -> Result<ShapeSignature> {
    let sp = spherical_reparam(f)?;
    pshape_on(f, &sp)
}

pub(crate) fn pshape_on(f: &FrenetField, sp: &SphericalParam) -> Result<ShapeSignature> {
    let k1 = f.kappa(1);
    let dk1 = derivative_on_grid(&sp.sigma, k1);
    let mut comps = vec![dk1.iter().zip(k1).map(|(d, k)| -d / k).collect::<Vec<_>>()];
    for j in 2..f.dim {
        comps.push(f.kappa(j).iter().zip(k1).map(|(k, k1)| k / k1).collect());
    }
    ShapeSignature::new(sp.sigma.clone(), comps, f.e1_character())
}

/// Max residual of the structure equation for the scaled frame
/// `Xᵢ = eᵢ/κ₁`: `dX/dσ = (κ̃₁I + M(σ))X`, with `M` the frame matrix built
/// from `z = (1, κ̃₂, …)`. Residuals are scaled by `κ₁` so they are
/// relative to `|X|`; boundary samples are skipped.
pub fn structure_residual(f: &FrenetField, sig: &ShapeSignature) -> f64 {
    let n = f.dim;
    let k1 = f.kappa(1);
    let sigma = sig.sigma();
    // dX/dσ for every component of every scaled frame vector.
    let mut dx = vec![vec![vec![0.0; f.len()]; n]; n];
    for (i, dxi) in dx.iter_mut().enumerate() {
        for (a, dxia) in dxi.iter_mut().enumerate() {
            let y: Vec<f64> = (0..f.len()).map(|j| f.frames[j][i][a] / k1[j]).collect();
            for (j, d) in dxia.iter_mut().enumerate() {
                *d = local_derivative(sigma, &y, j, 5, 4);
            }
        }
    }
    let mut worst: f64 = 0.0;
    for j in f.confident_range() {
        let mut z = vec![1.0];
        z.extend((2..n).map(|i| sig.ktilde(i)[j]));
        let m = frame_matrix(&f.eps, &z);
        let kt1 = sig.ktilde(1)[j];
        for (i, dxi) in dx.iter().enumerate() {
            for (a, dxia) in dxi.iter().enumerate() {
                let mut rhs = kt1 * f.frames[j][i][a] / k1[j];
                for l in 0..n {
                    rhs += m[(i, l)] * f.frames[j][l][a] / k1[j];
                }
                worst = worst.max(((dxia[j] - rhs) * k1[j]).abs());
            }
        }
    }
    worst
}
