//! Deciding whether two curves are p-similar and recovering the map.
//!
//! Curves with equal p-shape signatures are congruent under a p-similarity
//! fixed by one pair of corresponding frames: `μ = κ₁/κ₁*`, `A` sends the
//! frame of the first curve to that of the second, and `b` matches the
//! points. The sup-norm residual over the common range guards against a
//! spurious single-point fit.

use serde::Serialize;
use serde_json::json;

use crate::curve::SampledCurve;
use crate::error::{Error, Result};
use crate::frenet::{frenet_with, pshape, FrenetField, FrenetOptions, ShapeSignature};
use crate::minkowski::{CausalCharacter, LorentzVector, Matrix, Orientation, PSimilarity};
use crate::numeric::{interpolate, linspace, Stencil};

pub const DEFAULT_THRESHOLD: f64 = 1e-4;
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-5;

#[derive(Clone, Debug)]
pub struct MatchOptions {
    /// Largest signature distance accepted as a match.
    pub threshold: f64,
    /// Largest congruence residual accepted.
    pub residual_tol: f64,
    /// `σ` on each curve that corresponds to the shared origin.
    pub anchors: (f64, f64),
    /// Shared `σ` (relative to the anchors) where frames are aligned;
    /// defaults to the middle of the common range.
    pub align_at: Option<f64>,
    pub frenet: FrenetOptions,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions {
            threshold: DEFAULT_THRESHOLD,
            residual_tol: DEFAULT_RESIDUAL_TOL,
            anchors: (0.0, 0.0),
            align_at: None,
            frenet: FrenetOptions::default(),
        }
    }
}

/// Confident `σ` range of a signature, shifted by an anchor.
fn confident_span(s: &ShapeSignature, anchor: f64) -> (f64, f64) {
    let r = s.confident_range();
    (s.sigma()[r.start] - anchor, s.sigma()[r.end - 1] - anchor)
}

fn overlap(a: &ShapeSignature, b: &ShapeSignature, anchors: (f64, f64)) -> Result<(f64, f64)> {
    if a.dim() != b.dim() {
        return Err(Error::IncompatibleDimension(format!("dimensions {} and {}", a.dim(), b.dim())));
    }
    if a.e1_character() != b.e1_character() {
        return Err(Error::IncompatibleDimension(format!(
            "tangents are {:?} and {:?}",
            a.e1_character(),
            b.e1_character()
        )));
    }
    let (a0, a1) = confident_span(a, anchors.0);
    let (b0, b1) = confident_span(b, anchors.1);
    let (lo, hi) = (a0.max(b0), a1.min(b1));
    if !(hi > lo) {
        return Err(Error::DisjointRanges);
    }
    Ok((lo, hi))
}

/// `max |κ̃ᵢ − κ̃ᵢ*|` over a common `σ` grid covering the overlap of the
/// confident parts of both signatures.
pub fn signature_distance(a: &ShapeSignature, b: &ShapeSignature) -> Result<f64> {
    signature_distance_anchored(a, b, (0.0, 0.0))
}

/// As [`signature_distance`], comparing `κ̃(anchors.0 + u)` with
/// `κ̃*(anchors.1 + u)`.
pub fn signature_distance_anchored(a: &ShapeSignature, b: &ShapeSignature, anchors: (f64, f64)) -> Result<f64> {
    let (lo, hi) = overlap(a, b, anchors)?;
    let count = a.confident_range().len().max(b.confident_range().len()).max(2);
    let mut worst: f64 = 0.0;
    for u in linspace(lo, hi, count) {
        for i in 1..a.dim() {
            let d = a.value_at(i, anchors.0 + u) - b.value_at(i, anchors.1 + u);
            worst = worst.max(d.abs());
        }
    }
    Ok(worst)
}

#[derive(Clone, Debug)]
pub struct MatchReport {
    pub matched: bool,
    pub recovered: Option<PSimilarity>,
    pub signature_distance: f64,
    pub residual: Option<f64>,
    pub orientation: Option<Orientation>,
    /// Shared `σ` at which the frames were aligned.
    pub aligned_at: Option<f64>,
    /// Causal character of the tangents.
    pub e1: CausalCharacter,
}

#[derive(Serialize)]
struct ConventionJson {
    mu: f64,
    #[serde(rename = "A")]
    a: Vec<f64>,
}

impl MatchReport {
    /// JSON form: `{matched, mu, A (row-major), b, signature_distance,
    /// residual, orientation}`. For timelike tangents the report also carries
    /// `negated_convention`, the same map written with `(−μ, −A)`.
    pub fn to_json(&self) -> serde_json::Value {
        let f = self.recovered.as_ref();
        let mut v = json!({
            "matched": self.matched,
            "mu": f.map(|f| f.mu()),
            "A": f.map(|f| f.matrix().row_major().to_vec()),
            "b": f.map(|f| f.translation().as_slice().to_vec()),
            "signature_distance": self.signature_distance,
            "residual": self.residual,
            "orientation": self.orientation,
        });
        if let (Some(f), CausalCharacter::Timelike) = (f, self.e1) {
            let alt = ConventionJson { mu: -f.mu(), a: f.matrix().row_major().iter().map(|x| -x).collect() };
            v["negated_convention"] = serde_json::to_value(alt).expect("plain data");
        }
        v
    }
}

struct Analyzed {
    field: FrenetField,
    sig: ShapeSignature,
}

fn analyze(c: &SampledCurve, opts: &FrenetOptions) -> Result<Analyzed> {
    let field = frenet_with(c, opts)?;
    let sig = pshape(&field)?;
    Ok(Analyzed { field, sig })
}

/// Frame, `κ₁` and point at spherical parameter `sigma`.
fn state_at(a: &Analyzed, sigma: f64) -> Result<(Vec<LorentzVector>, f64, LorentzVector)> {
    let sg = a.sig.sigma();
    let t = interpolate(sg, a.field.params(), sigma);
    let frame = a.field.frame_at_param(t)?;
    let k1 = interpolate(sg, a.field.kappa(1), sigma);
    Ok((frame, k1, point_at_sigma(a, sigma)))
}

fn point_at_sigma(a: &Analyzed, sigma: f64) -> LorentzVector {
    let st = Stencil::locate(a.sig.sigma(), sigma);
    let pts = a.field.points();
    let comps = (0..a.field.dim()).map(|k| st.apply_with(|j| pts[j][k])).collect();
    LorentzVector::new(comps).expect("dim >= 2")
}

/// `A` with `A eᵢ = eᵢ*`: `A = E* D Eᵀ I*`, columns of `E` the frame vectors
/// and `D = diag(ε)`.
fn frame_alignment(from: &[LorentzVector], to: &[LorentzVector], eps: &[f64]) -> Result<Matrix> {
    let n = from.len();
    let e = Matrix::from_columns(from)?;
    let es = Matrix::from_columns(to)?;
    Ok(es.mul(&Matrix::diagonal(eps)).mul(&e.transpose()).mul(&Matrix::metric(n)))
}

fn attempt(c1: &SampledCurve, c2: &SampledCurve, opts: &MatchOptions) -> Result<MatchReport> {
    let a = analyze(c1, &opts.frenet)?;
    let b = analyze(c2, &opts.frenet)?;
    let distance = signature_distance_anchored(&a.sig, &b.sig, opts.anchors)?;
    let e1 = a.sig.e1_character();
    if !(distance <= opts.threshold) {
        return Ok(MatchReport {
            matched: false,
            recovered: None,
            signature_distance: distance,
            residual: None,
            orientation: None,
            aligned_at: None,
            e1,
        });
    }
    let (lo, hi) = overlap(&a.sig, &b.sig, opts.anchors)?;
    let u0 = opts.align_at.unwrap_or(0.5 * (lo + hi));
    if !(lo..=hi).contains(&u0) {
        return Err(Error::InvalidInput(format!("alignment point {u0} outside common range [{lo}, {hi}]")));
    }
    let (fa, ka, pa) = state_at(&a, opts.anchors.0 + u0)?;
    let (fb, kb, pb) = state_at(&b, opts.anchors.1 + u0)?;
    let mu = ka / kb;
    let m = frame_alignment(&fa, &fb, a.field.eps())?;
    let mut t = m.mul_vec(&pa).scaled(-mu);
    t.axpy(1.0, &pb);
    let f = PSimilarity::new(mu, m, t)?;

    let mut residual: f64 = 0.0;
    let sa = a.sig.sigma();
    for j in a.field.confident_range() {
        let u = sa[j] - opts.anchors.0;
        if u < lo || u > hi {
            continue;
        }
        let image = f.apply(&a.field.points()[j])?;
        let target = point_at_sigma(&b, opts.anchors.1 + u);
        residual = residual.max(image.euclidean_distance(&target));
    }
    let orientation = f.orientation();
    Ok(MatchReport {
        matched: residual <= opts.residual_tol,
        recovered: Some(f),
        signature_distance: distance,
        residual: Some(residual),
        orientation: Some(orientation),
        aligned_at: Some(u0),
        e1,
    })
}

/// Like [`recover_similarity`] but reports non-matches instead of failing.
pub fn match_curves(c1: &SampledCurve, c2: &SampledCurve, opts: &MatchOptions) -> Result<MatchReport> {
    attempt(c1, c2, opts)
}

/// The p-similarity `f` with `f(c1) = c2`.
pub fn recover_similarity(c1: &SampledCurve, c2: &SampledCurve, opts: &MatchOptions) -> Result<MatchReport> {
    let r = attempt(c1, c2, opts)?;
    match (r.matched, r.residual) {
        (true, _) => Ok(r),
        (false, None) => Err(Error::NoMatch { distance: r.signature_distance, threshold: opts.threshold }),
        (false, Some(residual)) => Err(Error::ResidualTooLarge { residual, tolerance: opts.residual_tol }),
    }
}
