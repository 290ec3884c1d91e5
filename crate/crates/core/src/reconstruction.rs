//! Curves from prescribed p-shape curvatures.
//!
//! The frame solves `dW/dσ = M(σ)W` (rows of `W` are `e₁…e_n`) and the curve
//! is `α(σ) = x₀ + ∫ (1/κ₁) e₁ dσ` with `κ₁(σ) = κ₁(σ₀) e^{−∫z₁}`.

use std::fmt;
use std::sync::Arc;

use crate::curve::SampledCurve;
use crate::error::{check_dim, Error, Result};
use crate::frenet::{
    frame_det, frame_matrix, frame_residual, frenet, orientation_sign, orthonormalize, spherical_reparam,
};
use crate::frenet::{pshape_on, FrenetField};
use crate::minkowski::{LorentzVector, Matrix};
use crate::numeric::{cumulative_simpson, interpolate, Stencil};

pub const DEFAULT_STEP: f64 = 1e-3;

/// Tolerance on the initial frame.
pub const FRAME_TOL: f64 = 1e-10;

/// Bound on the pseudo-orthonormality residual after each correction.
pub const CORRECTED_TOL: f64 = 1e-9;

/// A prescribed curvature function of `σ`.
#[derive(Clone)]
pub enum ZFunction {
    Constant(f64),
    /// `c/σ`.
    Reciprocal(f64),
    /// Tabulated values with local cubic interpolation.
    Table {
        sigma: Arc<Vec<f64>>,
        values: Arc<Vec<f64>>,
    },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for ZFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZFunction::Constant(c) => write!(f, "Constant({c})"),
            ZFunction::Reciprocal(c) => write!(f, "Reciprocal({c})"),
            ZFunction::Table { sigma, .. } => write!(f, "Table({} samples)", sigma.len()),
            ZFunction::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl ZFunction {
    pub fn table(sigma: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_dim(sigma.len(), values.len())?;
        if sigma.len() < 2 {
            return Err(Error::TooFewSamples { needed: 2, found: sigma.len() });
        }
        if let Some(i) = sigma.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::NonMonotoneParameter { index: i + 1 });
        }
        Ok(ZFunction::Table { sigma: Arc::new(sigma), values: Arc::new(values) })
    }

    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        ZFunction::Custom(Arc::new(f))
    }

    pub fn eval(&self, sigma: f64) -> f64 {
        match self {
            ZFunction::Constant(c) => *c,
            ZFunction::Reciprocal(c) => c / sigma,
            ZFunction::Table { sigma: xs, values } => interpolate(xs, values, sigma),
            ZFunction::Custom(f) => f(sigma),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReconstructionSpec {
    /// `z₁…z_{n−1}`.
    pub z: Vec<ZFunction>,
    /// Point at the start of the range.
    pub x0: LorentzVector,
    /// Pseudo-orthonormal frame `e₁⁰…e_n⁰` at `frame_sigma`.
    pub frame: Vec<LorentzVector>,
    pub sigma_range: (f64, f64),
    /// Where `frame` is given; defaults to the start of the range. The
    /// frame is first carried to the range start.
    pub frame_sigma: Option<f64>,
    /// `κ₁` at the start of the range; fixes the similarity scale.
    pub initial_kappa1: f64,
    pub step: f64,
}

impl ReconstructionSpec {
    pub fn new(z: Vec<ZFunction>, x0: LorentzVector, frame: Vec<LorentzVector>, sigma_range: (f64, f64)) -> Self {
        ReconstructionSpec { z, x0, frame, sigma_range, frame_sigma: None, initial_kappa1: 1.0, step: DEFAULT_STEP }
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn with_frame_sigma(mut self, sigma: f64) -> Self {
        self.frame_sigma = Some(sigma);
        self
    }

    pub fn with_initial_kappa1(mut self, kappa1: f64) -> Self {
        self.initial_kappa1 = kappa1;
        self
    }

    pub fn dim(&self) -> usize {
        self.frame.len()
    }

    /// Checks the spec and returns the frame signs `εᵢ`.
    pub fn validate(&self) -> Result<Vec<f64>> {
        let n = self.frame.len();
        if n < 2 {
            return Err(Error::InvalidInput("frame needs at least two vectors".into()));
        }
        for e in &self.frame {
            check_dim(n, e.dim())?;
        }
        check_dim(n, self.x0.dim())?;
        check_dim(n - 1, self.z.len())?;
        let eps: Vec<f64> = self.frame.iter().map(|e| e.dot(e).signum()).collect();
        let residual = frame_residual(&self.frame, &eps);
        if !(residual <= FRAME_TOL) {
            return Err(Error::InvalidInput(format!(
                "initial frame is not pseudo-orthonormal (residual {residual:.3e})"
            )));
        }
        if eps.iter().filter(|e| **e < 0.0).count() != 1 {
            return Err(Error::InvalidInput("initial frame needs exactly one timelike vector".into()));
        }
        if frame_det(&self.frame) * orientation_sign(n) < 0.0 {
            return Err(Error::InvalidInput(format!(
                "initial frame must have det(e1..en) = {:+}",
                orientation_sign(n)
            )));
        }
        let (a, b) = self.sigma_range;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidInput(format!("bad sigma range [{a}, {b}]")));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::InvalidInput(format!("step must be positive, got {}", self.step)));
        }
        if !(self.initial_kappa1.is_finite() && self.initial_kappa1 > 0.0) {
            return Err(Error::InvalidInput("initial kappa1 must be positive".into()));
        }
        if self.frame_sigma.is_some_and(|s| !s.is_finite()) {
            return Err(Error::InvalidInput("frame sigma must be finite".into()));
        }
        Ok(eps)
    }
}

/// Frames along the `σ` grid, with conservation diagnostics.
#[derive(Clone, Debug)]
pub struct FrameTrajectory {
    pub sigma: Vec<f64>,
    pub frames: Vec<Vec<LorentzVector>>,
    pub eps: Vec<f64>,
    /// Largest `max |eᵢ·eⱼ − εᵢδᵢⱼ|` after an RK4 step, before correction.
    pub max_drift: f64,
    /// Largest residual after correction.
    pub max_residual: f64,
}

fn frame_rhs(eps: &[f64], z: &[ZFunction], sigma: f64, w: &Matrix) -> Result<Matrix> {
    let mut zs = Vec::with_capacity(z.len());
    zs.push(1.0);
    for f in &z[1..] {
        let v = f.eval(sigma);
        if !v.is_finite() {
            return Err(Error::NonFinite { sigma });
        }
        zs.push(v);
    }
    Ok(frame_matrix(eps, &zs).mul(w))
}

fn rows_to_matrix(frame: &[LorentzVector]) -> Matrix {
    let n = frame.len();
    Matrix::from_row_major(n, frame.iter().flat_map(|e| e.as_slice().to_vec()).collect()).expect("square")
}

fn matrix_to_rows(w: &Matrix) -> Vec<LorentzVector> {
    w.rows().into_iter().map(|r| LorentzVector::new(r).expect("dim >= 2")).collect()
}

fn axpy_matrix(w: &Matrix, a: f64, k: &Matrix) -> Matrix {
    let n = w.dim();
    let data = w.row_major().iter().zip(k.row_major()).map(|(x, y)| x + a * y).collect();
    Matrix::from_row_major(n, data).expect("square")
}

struct Stepper<'a> {
    eps: &'a [f64],
    z: &'a [ZFunction],
    max_drift: f64,
    max_residual: f64,
}

impl Stepper<'_> {
    /// One RK4 step followed by metric Gram–Schmidt.
    fn step(&mut self, sigma: f64, h: f64, frame: &[LorentzVector]) -> Result<Vec<LorentzVector>> {
        let w = rows_to_matrix(frame);
        let k1 = frame_rhs(self.eps, self.z, sigma, &w)?;
        let k2 = frame_rhs(self.eps, self.z, sigma + 0.5 * h, &axpy_matrix(&w, 0.5 * h, &k1))?;
        let k3 = frame_rhs(self.eps, self.z, sigma + 0.5 * h, &axpy_matrix(&w, 0.5 * h, &k2))?;
        let k4 = frame_rhs(self.eps, self.z, sigma + h, &axpy_matrix(&w, h, &k3))?;
        let n = w.dim();
        let data = (0..n * n)
            .map(|i| {
                w.row_major()[i]
                    + h / 6.0
                        * (k1.row_major()[i] + 2.0 * k2.row_major()[i] + 2.0 * k3.row_major()[i] + k4.row_major()[i])
            })
            .collect();
        let next = matrix_to_rows(&Matrix::from_row_major(n, data).expect("square"));
        if !next.iter().all(|e| e.is_finite()) {
            return Err(Error::NonFinite { sigma: sigma + h });
        }
        self.max_drift = self.max_drift.max(frame_residual(&next, self.eps));
        let mut fixed = next;
        for _ in 0..3 {
            fixed = orthonormalize(&fixed, self.eps).ok_or(Error::FrameDrift { sigma: sigma + h })?;
            if frame_residual(&fixed, self.eps) <= CORRECTED_TOL {
                break;
            }
        }
        let r = frame_residual(&fixed, self.eps);
        if r > CORRECTED_TOL {
            return Err(Error::FrameDrift { sigma: sigma + h });
        }
        self.max_residual = self.max_residual.max(r);
        Ok(fixed)
    }
}

fn grid(a: f64, b: f64, step: f64) -> Vec<f64> {
    let count = (((b - a) / step) - 1e-9).ceil().max(1.0) as usize;
    crate::numeric::linspace(a, b, count + 1)
}

/// Integrates the frame equations with RK4 and projection.
pub fn integrate_frame(spec: &ReconstructionSpec) -> Result<FrameTrajectory> {
    let eps = spec.validate()?;
    let mut stepper = Stepper { eps: &eps, z: &spec.z, max_drift: 0.0, max_residual: 0.0 };
    let (a, b) = spec.sigma_range;
    let mut frame = spec.frame.clone();
    if let Some(s0) = spec.frame_sigma {
        if s0 != a {
            let pre = grid(0.0, (a - s0).abs(), spec.step);
            let dir = (a - s0).signum();
            for w in pre.windows(2) {
                frame = stepper.step(s0 + dir * w[0], dir * (w[1] - w[0]), &frame)?;
            }
        }
    }
    let sigma = grid(a, b, spec.step);
    let mut frames = Vec::with_capacity(sigma.len());
    frames.push(frame.clone());
    for w in sigma.windows(2) {
        frame = stepper.step(w[0], w[1] - w[0], &frame)?;
        frames.push(frame.clone());
    }
    Ok(FrameTrajectory {
        sigma,
        frames,
        eps: eps.clone(),
        max_drift: stepper.max_drift,
        max_residual: stepper.max_residual,
    })
}

#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub curve: SampledCurve,
    pub trajectory: FrameTrajectory,
    /// `κ₁` along the grid.
    pub kappa1: Vec<f64>,
}

/// `α(σ) = x₀ + ∫ e^{∫z₁} e₁ dσ / κ₁(σ₀)`, both integrals by composite
/// Simpson on the frame grid. The curve is parametrized by `σ`.
pub fn reconstruct(spec: &ReconstructionSpec) -> Result<Reconstruction> {
    let traj = integrate_frame(spec)?;
    let sigma = &traj.sigma;
    let h = sigma[1] - sigma[0];
    let z1: Vec<f64> = sigma
        .iter()
        .map(|s| {
            let v = spec.z[0].eval(*s);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::NonFinite { sigma: *s })
            }
        })
        .collect::<Result<_>>()?;
    let int_z1 = cumulative_simpson(&z1, h);
    let speed: Vec<f64> = int_z1.iter().map(|i| i.exp() / spec.initial_kappa1).collect();
    let n = spec.dim();
    let mut comps = Vec::with_capacity(n);
    for k in 0..n {
        let f: Vec<f64> = traj.frames.iter().zip(&speed).map(|(fr, v)| v * fr[0][k]).collect();
        comps.push(cumulative_simpson(&f, h));
    }
    let points = (0..sigma.len())
        .map(|i| {
            let v = (0..n).map(|k| spec.x0[k] + comps[k][i]).collect();
            LorentzVector::new(v).expect("dim >= 2")
        })
        .collect();
    let kappa1 = speed.iter().map(|v| 1.0 / v).collect();
    let curve = SampledCurve::new(sigma.clone(), points, "reconstruction")?;
    Ok(Reconstruction { curve, trajectory: traj, kappa1 })
}

pub fn reconstruct_curve(spec: &ReconstructionSpec) -> Result<SampledCurve> {
    Ok(reconstruct(spec)?.curve)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoundTripReport {
    /// Largest Euclidean distance between the input and the reconstruction.
    pub max_deviation: f64,
    pub sigma_range: (f64, f64),
    pub samples_compared: usize,
}

/// Signature of `c`, reconstruction from it with `c`'s own point, frame and
/// `κ₁` at the first confident sample, and the largest pointwise deviation.
pub fn round_trip(c: &SampledCurve) -> Result<RoundTripReport> {
    let f = frenet(c)?;
    round_trip_field(&f)
}

pub fn round_trip_field(f: &FrenetField) -> Result<RoundTripReport> {
    let sp = spherical_reparam(f)?;
    let sig = pshape_on(f, &sp)?;
    let range = f.confident_range();
    let (i0, i1) = (range.start, range.end - 1);
    let sig_grid = sig.sigma()[i0..=i1].to_vec();
    let z = (1..f.dim())
        .map(|i| ZFunction::table(sig_grid.clone(), sig.ktilde(i)[i0..=i1].to_vec()))
        .collect::<Result<Vec<_>>>()?;
    let (a, b) = (sig_grid[0], sig_grid[sig_grid.len() - 1]);
    let spec = ReconstructionSpec::new(z, f.points()[i0].clone(), f.frame(i0).to_vec(), (a, b))
        .with_initial_kappa1(f.kappa(1)[i0])
        .with_step(DEFAULT_STEP.min((b - a) / 100.0));
    let rec = reconstruct(&spec)?;
    let rc = &rec.curve;
    let mut worst: f64 = 0.0;
    for j in i0..=i1 {
        let st = Stencil::locate(rc.params(), sp.sigma[j]);
        let p: Vec<f64> = (0..f.dim()).map(|k| st.apply_with(|l| rc.points()[l][k])).collect();
        let p = LorentzVector::new(p)?;
        worst = worst.max(p.euclidean_distance(&f.points()[j]));
    }
    Ok(RoundTripReport { max_deviation: worst, sigma_range: (a, b), samples_compared: i1 - i0 + 1 })
}

/// Standard pseudo-orthonormal frame with the given signs, oriented by the
/// Frenet convention: the timelike slot gets axis 0, the others the
/// spatial axes in order, and the last vector is flipped if needed.
pub fn standard_frame(eps: &[f64]) -> Result<Vec<LorentzVector>> {
    let n = eps.len();
    if n < 2 || eps.iter().filter(|e| **e < 0.0).count() != 1 {
        return Err(Error::InvalidInput("signs need exactly one -1 and n >= 2".into()));
    }
    let mut next_space = 1;
    let mut frame: Vec<LorentzVector> = eps
        .iter()
        .map(|e| {
            if *e < 0.0 {
                LorentzVector::axis(n, 0)
            } else {
                next_space += 1;
                LorentzVector::axis(n, next_space - 1)
            }
        })
        .collect();
    if frame_det(&frame) * orientation_sign(n) < 0.0 {
        frame[n - 1] = frame[n - 1].scaled(-1.0);
    }
    Ok(frame)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_boost_flow_in_the_plane() {
        // n = 2: e1' = e2, e2' = e1 for a timelike e1; e1(σ) = cosh σ e1⁰ + sinh σ e2⁰.
        let frame = standard_frame(&[-1.0, 1.0]).unwrap();
        let spec = ReconstructionSpec::new(vec![ZFunction::Constant(0.0)], LorentzVector::zeros(2), frame, (0.0, 1.0));
        let traj = integrate_frame(&spec).unwrap();
        for (s, fr) in traj.sigma.iter().zip(&traj.frames) {
            assert!((fr[0][0] - s.cosh()).abs() < 1e-12);
            assert!((fr[0][1] - s.sinh()).abs() < 1e-12);
        }
        assert!(traj.max_residual <= CORRECTED_TOL);
    }

    #[test]
    fn bad_frames_are_rejected() {
        let mut frame = standard_frame(&[-1.0, 1.0, 1.0]).unwrap();
        frame[1] = frame[1].scaled(1.001);
        let z = vec![ZFunction::Constant(0.0), ZFunction::Constant(1.0)];
        let spec = ReconstructionSpec::new(z.clone(), LorentzVector::zeros(3), frame, (0.0, 1.0));
        assert!(matches!(integrate_frame(&spec), Err(Error::InvalidInput(_))));

        let mut frame = standard_frame(&[-1.0, 1.0, 1.0]).unwrap();
        frame[2] = frame[2].scaled(-1.0);
        let spec = ReconstructionSpec::new(z, LorentzVector::zeros(3), frame, (0.0, 1.0));
        assert!(matches!(integrate_frame(&spec), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn standard_frames_are_oriented() {
        for eps in [vec![-1.0, 1.0], vec![1.0, -1.0], vec![-1.0, 1.0, 1.0], vec![1.0, -1.0, 1.0, 1.0]] {
            let f = standard_frame(&eps).unwrap();
            assert!(frame_residual(&f, &eps) == 0.0);
            assert_eq!(frame_det(&f), orientation_sign(eps.len()));
        }
    }

    #[test]
    fn blow_up_is_reported() {
        let frame = standard_frame(&[-1.0, 1.0, 1.0]).unwrap();
        let z = vec![ZFunction::Constant(0.0), ZFunction::Reciprocal(1.0)];
        let spec = ReconstructionSpec::new(z, LorentzVector::zeros(3), frame, (-0.5, 0.5)).with_step(0.25);
        assert!(matches!(integrate_frame(&spec), Err(Error::NonFinite { .. })));
    }
}
