//! Closed-form test curves.

use serde::{Deserialize, Serialize};

use crate::curve::{SampledCurve, MIN_SAMPLES};
use crate::error::{Error, Result};
use crate::minkowski::LorentzVector;
use crate::numeric::linspace;
use crate::selfsimilar::{eigenstructure, CausalCase, EigenStructure, SelfSimilarSpec};

/// One additive term of a coordinate function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Term {
    /// `c tᵖ`
    Power { coeff: f64, power: u32 },
    /// `c sin(ωt + φ)`
    Sin { coeff: f64, freq: f64, phase: f64 },
    /// `c sinh(rt)`
    Sinh { coeff: f64, rate: f64 },
    /// `c cosh(rt)`
    Cosh { coeff: f64, rate: f64 },
    /// `c e^{rt}`
    Exp { coeff: f64, rate: f64 },
}

impl Term {
    /// `k`-th derivative at `t`.
    pub fn derivative(&self, t: f64, k: u32) -> f64 {
        match *self {
            Term::Power { coeff, power } => {
                if k > power {
                    return 0.0;
                }
                let fall: f64 = (power - k + 1..=power).map(f64::from).product();
                coeff * fall * t.powi((power - k) as i32)
            }
            Term::Sin { coeff, freq, phase } => {
                let arg = freq * t + phase + f64::from(k) * std::f64::consts::FRAC_PI_2;
                coeff * freq.powi(k as i32) * arg.sin()
            }
            Term::Sinh { coeff, rate } | Term::Cosh { coeff, rate } => {
                let odd = matches!(self, Term::Sinh { .. }) != (k % 2 == 1);
                let v = if odd { (rate * t).sinh() } else { (rate * t).cosh() };
                coeff * rate.powi(k as i32) * v
            }
            Term::Exp { coeff, rate } => coeff * rate.powi(k as i32) * (rate * t).exp(),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.derivative(t, 0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnalyticCurve {
    /// The spacelike curve with `z = (0, 1)`, `ε = (1, −1, 1)` and
    /// `κ̃₂ = a`, parametrized by `σ`.
    Example1 {
        a: f64,
    },
    /// The timelike curve in `E₁⁴` with `z = (1/σ, 0, 0)`.
    Example2,
    /// `(sinh s, cosh s)`.
    UnitHyperbola,
    SelfSimilar(SelfSimilarSpec),
    /// Each coordinate is a sum of terms.
    Custom(Vec<Vec<Term>>),
}

impl AnalyticCurve {
    pub fn selfsim2(k1: f64) -> Self {
        AnalyticCurve::SelfSimilar(SelfSimilarSpec { dim: 2, ktilde: vec![k1], case: CausalCase::E1Timelike })
    }

    pub fn selfsim3(k1: f64, k2: f64) -> Self {
        AnalyticCurve::SelfSimilar(SelfSimilarSpec { dim: 3, ktilde: vec![k1, k2], case: CausalCase::E1Timelike })
    }

    pub fn selfsim4(k1: f64, k2: f64, k3: f64) -> Self {
        AnalyticCurve::SelfSimilar(SelfSimilarSpec { dim: 4, ktilde: vec![k1, k2, k3], case: CausalCase::E1Timelike })
    }

    pub fn dim(&self) -> usize {
        match self {
            AnalyticCurve::Example1 { .. } => 3,
            AnalyticCurve::Example2 => 4,
            AnalyticCurve::UnitHyperbola => 2,
            AnalyticCurve::SelfSimilar(s) => s.dim,
            AnalyticCurve::Custom(c) => c.len(),
        }
    }

    pub fn name(&self) -> String {
        match self {
            AnalyticCurve::Example1 { a } => format!("example1(a={a})"),
            AnalyticCurve::Example2 => "example2".into(),
            AnalyticCurve::UnitHyperbola => "unit_hyperbola".into(),
            AnalyticCurve::SelfSimilar(s) => {
                let k: Vec<String> = s.ktilde.iter().map(|k| k.to_string()).collect();
                format!("selfsim{}({})", s.dim, k.join(","))
            }
            AnalyticCurve::Custom(_) => "custom".into(),
        }
    }

    /// Checks the parameters and returns an evaluator.
    pub fn evaluator(&self) -> Result<Evaluator<'_>> {
        match self {
            AnalyticCurve::Example1 { a } if !a.is_finite() || *a == 0.0 => {
                Err(Error::InfeasibleParameters(format!("example1 needs a finite nonzero a, got {a}")))
            }
            AnalyticCurve::SelfSimilar(s) => match eigenstructure(s) {
                Ok(es) => Ok(Evaluator { curve: self, selfsim: Some(es) }),
                Err(Error::InfeasibleSpec(msg) | Error::DegenerateEigenvalues(msg)) => {
                    Err(Error::InfeasibleParameters(msg))
                }
                Err(e) => Err(e),
            },
            AnalyticCurve::Custom(c) if c.len() < 2 => {
                Err(Error::InfeasibleParameters("custom curves need at least 2 coordinates".into()))
            }
            _ => Ok(Evaluator { curve: self, selfsim: None }),
        }
    }

    pub fn point(&self, t: f64) -> Result<LorentzVector> {
        Ok(self.evaluator()?.point(t))
    }
}

pub struct Evaluator<'a> {
    curve: &'a AnalyticCurve,
    selfsim: Option<EigenStructure>,
}

impl Evaluator<'_> {
    pub fn point(&self, t: f64) -> LorentzVector {
        let x = match self.curve {
            AnalyticCurve::Example1 { a } => {
                let c = (1.0 + a * a).sqrt();
                vec![(c * t).cosh() / (c * c), -(c * t).sinh() / (c * c), a * t / c]
            }
            AnalyticCurve::Example2 => {
                let (sh, ch) = (t.sinh(), t.cosh());
                let u = t * sh - ch;
                let v = (t * ch - sh) / std::f64::consts::SQRT_2;
                vec![std::f64::consts::SQRT_2 * u, v, u, v]
            }
            AnalyticCurve::UnitHyperbola => vec![t.sinh(), t.cosh()],
            AnalyticCurve::SelfSimilar(_) => return self.selfsim.as_ref().expect("built with eigenstructure").point(t),
            AnalyticCurve::Custom(c) => c.iter().map(|terms| terms.iter().map(|x| x.eval(t)).sum()).collect(),
        };
        LorentzVector::new(x).expect("dim >= 2")
    }
}

/// Evaluates `gen` at `m` uniform parameters on `t_range`.
pub fn sample_analytic(gen: &AnalyticCurve, t_range: (f64, f64), m: usize) -> Result<SampledCurve> {
    if m < MIN_SAMPLES {
        return Err(Error::TooFewSamples { needed: MIN_SAMPLES, found: m });
    }
    if !(t_range.0 < t_range.1) {
        return Err(Error::InvalidInput(format!("empty parameter range {t_range:?}")));
    }
    let ev = gen.evaluator()?;
    let t = linspace(t_range.0, t_range.1, m);
    let points = t.iter().map(|s| ev.point(*s)).collect();
    SampledCurve::new(t, points, gen.name())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example1_origin() {
        let x = AnalyticCurve::Example1 { a: 1.0 }.point(0.0).unwrap();
        let want = LorentzVector::new(vec![0.5, 0.0, 0.0]).unwrap();
        assert!(x.euclidean_distance(&want) < 1e-15);
    }

    #[test]
    fn example2_origin() {
        let x = AnalyticCurve::Example2.point(0.0).unwrap();
        let r2 = std::f64::consts::SQRT_2;
        assert_eq!(x.as_slice(), &[-r2, 0.0, -1.0, 0.0]);
    }

    #[test]
    fn unit_hyperbola_origin() {
        assert_eq!(AnalyticCurve::UnitHyperbola.point(0.0).unwrap().as_slice(), &[0.0, 1.0]);
    }

    #[test]
    fn infeasible_selfsim3() {
        let r = sample_analytic(&AnalyticCurve::selfsim3(0.3, 1.5), (0.0, 1.0), 11);
        assert!(matches!(r, Err(Error::InfeasibleParameters(_))));
    }

    #[test]
    fn term_derivatives() {
        let h = 1e-5;
        for term in [
            Term::Power { coeff: 2.0, power: 3 },
            Term::Sin { coeff: 0.5, freq: 2.0, phase: 0.3 },
            Term::Sinh { coeff: 1.5, rate: 0.7 },
            Term::Cosh { coeff: -1.0, rate: 1.3 },
            Term::Exp { coeff: 0.2, rate: -0.4 },
        ] {
            for k in 0..3 {
                let fd = (term.derivative(0.4 + h, k) - term.derivative(0.4 - h, k)) / (2.0 * h);
                assert!((fd - term.derivative(0.4, k + 1)).abs() < 1e-8, "{term:?} k={k}");
            }
        }
    }
}
