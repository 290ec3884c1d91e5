//! Lorentzian linear algebra on E₁ⁿ: the inner product of signature
//! (−,+,…,+), causal characters, angles and the pseudo-similarity group.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

/// Relative tolerance for lightlike classification.
pub const LIGHTLIKE_TOL: f64 = 1e-9;

/// Max-norm tolerance for `AᵀI*A = I*` and `det A = 1`.
pub const PSEUDO_ORTHOGONAL_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LorentzVector(Vec<f64>);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CausalCharacter {
    Timelike,
    Spacelike,
    Lightlike,
}

impl CausalCharacter {
    /// Sign of `x·x` for a unit vector of this character.
    pub fn sign(self) -> f64 {
        match self {
            CausalCharacter::Timelike => -1.0,
            CausalCharacter::Spacelike => 1.0,
            CausalCharacter::Lightlike => 0.0,
        }
    }

    pub fn from_sign(eps: f64) -> Self {
        if eps < 0.0 {
            CausalCharacter::Timelike
        } else {
            CausalCharacter::Spacelike
        }
    }
}

impl LorentzVector {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.len() < 2 {
            return Err(Error::InvalidInput(format!("Minkowski space needs n >= 2, got {}", components.len())));
        }
        Ok(LorentzVector(components))
    }

    pub fn zeros(n: usize) -> Self {
        LorentzVector(vec![0.0; n])
    }

    /// Unit vector along coordinate axis `k` (axis 0 is timelike).
    pub fn axis(n: usize, k: usize) -> Self {
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        LorentzVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Unchecked Lorentz product. Panics on dimension mismatch; use
    /// [`inner`] for the checked version.
    pub fn dot(&self, other: &LorentzVector) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in dot");
        let mut acc = -self.0[0] * other.0[0];
        for i in 1..self.0.len() {
            acc += self.0[i] * other.0[i];
        }
        acc
    }

    /// `‖x‖ = √|x·x|`.
    pub fn norm(&self) -> f64 {
        self.dot(self).abs().sqrt()
    }

    pub fn euclidean_norm_sq(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn euclidean_norm(&self) -> f64 {
        self.euclidean_norm_sq().sqrt()
    }

    pub fn causal(&self) -> CausalCharacter {
        causal_classify(self, LIGHTLIKE_TOL)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// `self += a·x`
    pub fn axpy(&mut self, a: f64, x: &LorentzVector) {
        for (s, v) in self.0.iter_mut().zip(&x.0) {
            *s += a * v;
        }
    }

    pub fn scaled(&self, a: f64) -> LorentzVector {
        LorentzVector(self.0.iter().map(|c| a * c).collect())
    }

    pub fn euclidean_distance(&self, other: &LorentzVector) -> f64 {
        (self - other).euclidean_norm()
    }
}

impl fmt::Display for LorentzVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Index<usize> for LorentzVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for LorentzVector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for &LorentzVector {
    type Output = LorentzVector;
    fn add(self, rhs: &LorentzVector) -> LorentzVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in add");
        LorentzVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LorentzVector {
    type Output = LorentzVector;
    fn sub(self, rhs: &LorentzVector) -> LorentzVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in sub");
        LorentzVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<f64> for &LorentzVector {
    type Output = LorentzVector;
    fn mul(self, rhs: f64) -> LorentzVector {
        self.scaled(rhs)
    }
}

impl Neg for &LorentzVector {
    type Output = LorentzVector;
    fn neg(self) -> LorentzVector {
        self.scaled(-1.0)
    }
}

/// `xᵀI*y = −x₀y₀ + Σ xᵢyᵢ`.
pub fn inner(x: &LorentzVector, y: &LorentzVector) -> Result<f64> {
    check_dim(x.dim(), y.dim())?;
    Ok(x.dot(y))
}

/// Classify `x` by the sign of `x·x`, with `tol` relative to `‖x‖²_E`.
pub fn causal_classify(x: &LorentzVector, tol: f64) -> CausalCharacter {
    let q = x.dot(x);
    let scale = tol * x.euclidean_norm_sq();
    if q < -scale {
        CausalCharacter::Timelike
    } else if q > scale {
        CausalCharacter::Spacelike
    } else {
        CausalCharacter::Lightlike
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleKind {
    Hyperbolic,
    Circular,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Angle {
    pub value: f64,
    pub kind: AngleKind,
}

/// Angle between two non-lightlike vectors.
///
/// Timelike pairs must share a timecone (`x·y < 0`). Spacelike pairs give a
/// circular angle when `|x·y| < ‖x‖‖y‖` and a hyperbolic one when
/// `|x·y| > ‖x‖‖y‖`; in the latter case `θ = arccosh(|x·y| / ‖x‖‖y‖)`.
pub fn angle_between(x: &LorentzVector, y: &LorentzVector) -> Result<Angle> {
    check_dim(x.dim(), y.dim())?;
    let cx = x.causal();
    let cy = y.causal();
    if cx == CausalCharacter::Lightlike || cy == CausalCharacter::Lightlike {
        return Err(Error::LightlikeInput);
    }
    let p = x.dot(y);
    let nn = x.norm() * y.norm();
    match (cx, cy) {
        (CausalCharacter::Timelike, CausalCharacter::Timelike) => {
            if p >= 0.0 {
                return Err(Error::CaseUndefined("timelike vectors lie in opposite timecones".into()));
            }
            Ok(Angle { value: (-p / nn).max(1.0).acosh(), kind: AngleKind::Hyperbolic })
        }
        (CausalCharacter::Spacelike, CausalCharacter::Spacelike) => {
            let r = p / nn;
            if (r.abs() - 1.0).abs() <= LIGHTLIKE_TOL {
                Err(Error::CaseUndefined("spacelike pair with |x·y| = ‖x‖‖y‖".into()))
            } else if r.abs() < 1.0 {
                Ok(Angle { value: r.acos(), kind: AngleKind::Circular })
            } else {
                Ok(Angle { value: r.abs().acosh(), kind: AngleKind::Hyperbolic })
            }
        }
        _ => Err(Error::CaseUndefined("one vector is timelike and the other spacelike".into())),
    }
}

/// Dense row-major square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// `I* = diag(−1, 1, …, 1)`.
    pub fn metric(n: usize) -> Self {
        let mut m = Matrix::identity(n);
        m[(0, 0)] = -1.0;
        m
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = Matrix::zeros(d.len());
        for (i, v) in d.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            check_dim(n, r.len())?;
            data.extend_from_slice(r);
        }
        Ok(Matrix { n, data })
    }

    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        check_dim(n * n, data.len())?;
        Ok(Matrix { n, data })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[LorentzVector]) -> Result<Self> {
        let n = cols.len();
        let mut m = Matrix::zeros(n);
        for (j, c) in cols.iter().enumerate() {
            check_dim(n, c.dim())?;
            for i in 0..n {
                m[(i, j)] = c[i];
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row_major(&self) -> &[f64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> LorentzVector {
        LorentzVector((0..self.n).map(|i| self[(i, j)]).collect())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n, "dimension mismatch in matmul");
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &LorentzVector) -> LorentzVector {
        assert_eq!(self.n, v.dim(), "dimension mismatch in matvec");
        LorentzVector(
            self.data.chunks(self.n).map(|row| row.iter().zip(v.as_slice()).map(|(a, b)| a * b).sum()).collect(),
        )
    }

    pub fn scaled(&self, a: f64) -> Matrix {
        Matrix { n: self.n, data: self.data.iter().map(|x| a * x).collect() }
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> f64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for c in 0..n {
            let p = (c..n).max_by(|&i, &j| a[i * n + c].abs().total_cmp(&a[j * n + c].abs())).unwrap();
            if a[p * n + c] == 0.0 {
                return 0.0;
            }
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = a[c * n + c];
            det *= piv;
            for i in c + 1..n {
                let f = a[i * n + c] / piv;
                for j in c..n {
                    a[i * n + j] -= f * a[c * n + j];
                }
            }
        }
        det
    }

    /// `max |AᵀI*A − I*|`.
    pub fn pseudo_orthogonality_residual(&self) -> f64 {
        let g = Matrix::metric(self.n);
        self.transpose().mul(&g).mul(self).max_abs_diff(&g)
    }

    /// Inverse of a pseudo-orthogonal matrix, `I*AᵀI*`.
    pub fn pseudo_orthogonal_inverse(&self) -> Matrix {
        let g = Matrix::metric(self.n);
        g.mul(&self.transpose()).mul(&g)
    }

    pub(crate) fn to_nalgebra(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_row_slice(self.n, self.n, &self.data)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Preserving,
    Reversing,
}

/// `f(x) = μAx + b` with `AᵀI*A = I*` and `det A = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PSimilarity {
    mu: f64,
    a: Matrix,
    b: LorentzVector,
}

impl PSimilarity {
    pub fn new(mu: f64, a: Matrix, b: LorentzVector) -> Result<Self> {
        if !(mu.is_finite() && mu != 0.0) {
            return Err(Error::InvalidInput(format!("scale must be finite and nonzero, got {mu}")));
        }
        check_dim(a.dim(), b.dim())?;
        let residual = a.pseudo_orthogonality_residual();
        let det = a.det();
        if !(residual <= PSEUDO_ORTHOGONAL_TOL && (det - 1.0).abs() <= PSEUDO_ORTHOGONAL_TOL) {
            return Err(Error::NotPseudoOrthogonal { residual, det });
        }
        Ok(PSimilarity { mu, a, b })
    }

    pub fn identity(n: usize) -> Self {
        PSimilarity { mu: 1.0, a: Matrix::identity(n), b: LorentzVector::zeros(n) }
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Similarity ratio `|μ|`.
    pub fn ratio(&self) -> f64 {
        self.mu.abs()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn translation(&self) -> &LorentzVector {
        &self.b
    }

    pub fn apply(&self, x: &LorentzVector) -> Result<LorentzVector> {
        check_dim(self.dim(), x.dim())?;
        let mut y = self.a.mul_vec(x).scaled(self.mu);
        y.axpy(1.0, &self.b);
        Ok(y)
    }

    /// Induced map on displacement vectors, `u ↦ μAu`.
    pub fn apply_linear(&self, u: &LorentzVector) -> Result<LorentzVector> {
        check_dim(self.dim(), u.dim())?;
        Ok(self.a.mul_vec(u).scaled(self.mu))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &PSimilarity) -> Result<PSimilarity> {
        check_dim(self.dim(), other.dim())?;
        let mut b = self.a.mul_vec(&other.b).scaled(self.mu);
        b.axpy(1.0, &self.b);
        Ok(PSimilarity { mu: self.mu * other.mu, a: self.a.mul(&other.a), b })
    }

    pub fn inverse(&self) -> PSimilarity {
        let ai = self.a.pseudo_orthogonal_inverse();
        let b = ai.mul_vec(&self.b).scaled(-1.0 / self.mu);
        PSimilarity { mu: 1.0 / self.mu, a: ai, b }
    }

    pub fn orientation(&self) -> Orientation {
        let n = self.dim();
        if (n % 2 == 1 && self.mu > 0.0) || n % 2 == 0 {
            Orientation::Preserving
        } else {
            Orientation::Reversing
        }
    }
}

/// Boost of the given rapidity in the plane of axes 0 and `axis`.
pub fn boost(n: usize, axis: usize, rapidity: f64) -> Matrix {
    assert!(axis >= 1 && axis < n, "boost axis must be spatial");
    let mut m = Matrix::identity(n);
    let (c, s) = (rapidity.cosh(), rapidity.sinh());
    m[(0, 0)] = c;
    m[(axis, axis)] = c;
    m[(0, axis)] = s;
    m[(axis, 0)] = s;
    m
}

/// Rotation by `angle` in the spatial plane of axes `i` and `j`.
pub fn rotation(n: usize, i: usize, j: usize, angle: f64) -> Matrix {
    assert!(i >= 1 && j >= 1 && i < n && j < n && i != j, "rotation axes must be distinct spatial axes");
    let mut m = Matrix::identity(n);
    let (c, s) = (angle.cos(), angle.sin());
    m[(i, i)] = c;
    m[(j, j)] = c;
    m[(i, j)] = -s;
    m[(j, i)] = s;
    m
}

/// Largest rapidity used by [`random_pseudo_orthogonal`].
pub const MAX_RANDOM_RAPIDITY: f64 = 0.5;

/// Reproducible random element of the orthochronous proper Lorentz group:
/// a product of boosts along every spatial axis and rotations in every
/// spatial plane, with parameters drawn from a seeded ChaCha stream.
pub fn random_pseudo_orthogonal(n: usize, seed: u64) -> Matrix {
    assert!(n >= 2, "Minkowski space needs n >= 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = Matrix::identity(n);
    for axis in 1..n {
        let r = rng.gen_range(-MAX_RANDOM_RAPIDITY..=MAX_RANDOM_RAPIDITY);
        a = boost(n, axis, r).mul(&a);
    }
    for i in 1..n {
        for j in i + 1..n {
            let t = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            a = rotation(n, i, j, t).mul(&a);
        }
    }
    a
}

/// Random p-similarity with the given scale; the translation has
/// components in `[-1, 1]`.
pub fn random_similarity(n: usize, mu: f64, seed: u64) -> PSimilarity {
    let a = random_pseudo_orthogonal(n, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let b = LorentzVector((0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect());
    PSimilarity::new(mu, a, b).expect("random generator produces valid similarities")
}
