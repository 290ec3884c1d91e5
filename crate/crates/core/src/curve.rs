//! Sampled curves, derivative jets and arc length.

use crate::error::{check_dim, Error, Result};
use crate::minkowski::{causal_classify, CausalCharacter, LorentzVector, PSimilarity, LIGHTLIKE_TOL};
use crate::numeric::{cumulative_simpson, linspace, FitWeights, Stencil};

pub const MIN_SAMPLES: usize = 7;

/// Number of samples at each end whose derivatives come from one-sided
/// windows; they are excluded from invariant statistics.
pub const BOUNDARY_SAMPLES: usize = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct SampledCurve {
    dim: usize,
    params: Vec<f64>,
    points: Vec<LorentzVector>,
    label: String,
}

impl SampledCurve {
    pub fn new(params: Vec<f64>, points: Vec<LorentzVector>, label: impl Into<String>) -> Result<Self> {
        check_dim(params.len(), points.len())?;
        if params.len() < MIN_SAMPLES {
            return Err(Error::TooFewSamples { needed: MIN_SAMPLES, found: params.len() });
        }
        let dim = points[0].dim();
        if dim < 2 {
            return Err(Error::InvalidInput(format!("Minkowski space needs n >= 2, got {dim}")));
        }
        for p in &points {
            check_dim(dim, p.dim())?;
        }
        for (i, t) in params.iter().enumerate() {
            if !t.is_finite() || !points[i].is_finite() {
                return Err(Error::InvalidInput(format!("non-finite value at sample {i}")));
            }
            if i > 0 && *t <= params[i - 1] {
                return Err(Error::NonMonotoneParameter { index: i });
            }
        }
        Ok(SampledCurve { dim, params, points, label: label.into() })
    }

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

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Nominal grid step `(t_last − t_0)/(m − 1)`.
    pub fn step(&self) -> f64 {
        (self.params[self.len() - 1] - self.params[0]) / (self.len() - 1) as f64
    }

    pub fn is_uniform(&self) -> bool {
        let h = self.step();
        self.params.iter().enumerate().all(|(i, t)| (t - (self.params[0] + h * i as f64)).abs() <= 1e-7 * h)
    }

    /// Same curve on a uniform grid with the same endpoints and sample
    /// count, by local cubic interpolation. Uniform curves are returned
    /// unchanged.
    pub fn resample_uniform(&self) -> SampledCurve {
        if self.is_uniform() {
            return self.clone();
        }
        let grid = linspace(self.params[0], self.params[self.len() - 1], self.len());
        let points = grid.iter().map(|t| self.interpolate(*t)).collect();
        SampledCurve { dim: self.dim, params: grid, points, label: self.label.clone() }
    }

    /// Point at parameter `t` by local cubic interpolation.
    pub fn interpolate(&self, t: f64) -> LorentzVector {
        let st = Stencil::locate(&self.params, t);
        let comps = (0..self.dim).map(|k| st.apply_with(|j| self.points[j][k])).collect();
        LorentzVector::new(comps).expect("dim >= 2")
    }

    /// Image of the curve under `f`, on the same parameter grid.
    pub fn transform(&self, f: &PSimilarity) -> Result<SampledCurve> {
        let points = self.points.iter().map(|p| f.apply(p)).collect::<Result<Vec<_>>>()?;
        Ok(SampledCurve { dim: self.dim, params: self.params.clone(), points, label: self.label.clone() })
    }

    /// Samples with index in `range`.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Result<SampledCurve> {
        SampledCurve::new(self.params[range.clone()].to_vec(), self.points[range].to_vec(), self.label.clone())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JetOptions {
    /// Degree of the local polynomial fit.
    pub degree: usize,
    /// Window width in samples; `None` picks about a fifth of the curve.
    pub window: Option<usize>,
}

impl Default for JetOptions {
    fn default() -> Self {
        JetOptions { degree: 10, window: None }
    }
}

impl JetOptions {
    /// Effective (window, degree) for `m` samples and derivatives up to
    /// `order`.
    pub fn resolve(&self, m: usize, order: usize) -> Result<(usize, usize)> {
        let needed = 2 * order + 1;
        if m < needed.max(MIN_SAMPLES) {
            return Err(Error::TooFewSamples { needed: needed.max(MIN_SAMPLES), found: m });
        }
        let width = self.window.unwrap_or(2 * (m / 10) + 1).max(self.degree + 3).min(m);
        if self.window.is_some_and(|w| w < needed) {
            return Err(Error::InvalidInput(format!("derivative window must hold at least {needed} samples")));
        }
        let degree = self.degree.min(width - 3).max(order);
        if degree >= width {
            return Err(Error::TooFewSamples { needed: degree + 1, found: width });
        }
        Ok((width, degree))
    }
}

/// Derivatives `α′ … α⁽ᵏ⁾` at every sample of a uniform grid.
#[derive(Clone, Debug)]
pub struct DerivativeJet {
    /// Uniform grid the derivatives live on.
    pub params: Vec<f64>,
    /// Curve points on that grid.
    pub points: Vec<LorentzVector>,
    /// `orders[k-1][i]` is the k-th derivative at sample `i`.
    pub orders: Vec<Vec<LorentzVector>>,
}

impl DerivativeJet {
    pub fn order(&self) -> usize {
        self.orders.len()
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn derivative(&self, k: usize, i: usize) -> &LorentzVector {
        &self.orders[k - 1][i]
    }
}

pub fn derivatives(c: &SampledCurve, order: usize) -> Result<DerivativeJet> {
    derivatives_with(c, order, &JetOptions::default())
}

/// Local least-squares polynomial derivatives on the uniform resampling of
/// `c`. Windows are centered in the interior and shifted at the ends.
pub fn derivatives_with(c: &SampledCurve, order: usize, opts: &JetOptions) -> Result<DerivativeJet> {
    if order == 0 {
        return Err(Error::InvalidInput("derivative order must be positive".into()));
    }
    let c = c.resample_uniform();
    let m = c.len();
    let n = c.dim();
    let (width, degree) = opts.resolve(m, order)?;
    let h = c.step();
    let half = width / 2;
    let center = FitWeights::new(width, degree, half, order);
    let mut orders = vec![Vec::with_capacity(m); order];
    for i in 0..m {
        let lo = i.saturating_sub(half).min(m - width);
        let pos = i - lo;
        let edge;
        let w = if pos == half {
            &center
        } else {
            edge = FitWeights::new(width, degree, pos, order);
            &edge
        };
        for k in 1..=order {
            let scale = h.powi(k as i32);
            let mut d = vec![0.0; n];
            for (j, wj) in w.weights[k].iter().enumerate() {
                let p = &c.points()[lo + j];
                for (a, da) in d.iter_mut().enumerate() {
                    *da += wj * p[a];
                }
            }
            for da in d.iter_mut() {
                *da /= scale;
            }
            orders[k - 1].push(LorentzVector::new(d).expect("dim >= 2"));
        }
    }
    Ok(DerivativeJet { params: c.params().to_vec(), points: c.points().to_vec(), orders })
}

/// Causal character of the tangent, required to be the same non-null
/// character at every sample.
pub(crate) fn tangent_character(tangents: &[LorentzVector]) -> Result<CausalCharacter> {
    let mut first = None;
    for (i, t) in tangents.iter().enumerate() {
        let c = causal_classify(t, LIGHTLIKE_TOL);
        if c == CausalCharacter::Lightlike {
            return Err(Error::LightlikeTangent { index: i });
        }
        match first {
            None => first = Some(c),
            Some(f) if f != c => return Err(Error::LightlikeTangent { index: i }),
            _ => {}
        }
    }
    Ok(first.expect("non-empty curve"))
}

/// Arc length on the uniform grid of `jet`.
pub(crate) fn arc_length_on_jet(jet: &DerivativeJet) -> Result<Vec<f64>> {
    tangent_character(&jet.orders[0])?;
    let speed: Vec<f64> = jet.orders[0].iter().map(|v| v.norm()).collect();
    let h = (jet.params[jet.len() - 1] - jet.params[0]) / (jet.len() - 1) as f64;
    Ok(cumulative_simpson(&speed, h))
}

/// `s(tᵢ) = ∫_{t₀}^{tᵢ} ‖α′‖ dt`, by composite Simpson quadrature.
pub fn arc_length(c: &SampledCurve) -> Result<Vec<f64>> {
    let jet = derivatives(c, 1)?;
    let s = arc_length_on_jet(&jet)?;
    if c.is_uniform() {
        return Ok(s);
    }
    Ok(c.params().iter().map(|t| crate::numeric::interpolate(&jet.params, &s, *t)).collect())
}
