//! Similarity geometry of non-null curves in Minkowski space `E₁ⁿ`.
//!
//! Curves are sampled point sequences. From them the crate computes the
//! Frenet frame and curvatures, the spherical arc length `σ` and the
//! p-shape curvatures `κ̃ᵢ(σ)`, which are invariant under the similarity
//! group `x ↦ μAx + b` with `A` pseudo-orthogonal. The same invariants drive
//! reconstruction (integrating the frame equations back to a curve),
//! matching (deciding whether two curves are similar and recovering the
//! map) and the closed forms for self-similar curves, whose invariants are
//! constant.

// `!(a < b)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod curve;
pub mod error;
pub mod focal;
pub mod frenet;
pub mod io;
pub mod matching;
pub mod minkowski;
mod numeric;
pub mod reconstruction;
pub mod selfsimilar;

pub use analytic::{sample_analytic, AnalyticCurve, Term};
pub use curve::{arc_length, derivatives, DerivativeJet, SampledCurve};
pub use error::{Error, Result};
pub use focal::{focal_from_curvatures, pshape_from_focal, FocalCurvatures};
pub use frenet::{frenet, pshape, spherical_reparam, FrenetField, ShapeSignature};
pub use matching::{match_curves, recover_similarity, signature_distance, MatchOptions, MatchReport};
pub use minkowski::{
    angle_between, causal_classify, inner, CausalCharacter, LorentzVector, Matrix, Orientation, PSimilarity,
};
pub use reconstruction::{integrate_frame, reconstruct, reconstruct_curve, ReconstructionSpec, ZFunction};
pub use selfsimilar::{
    build_m, eigenstructure, generate, hypersurface_residual, verify_selfsimilar, CausalCase, EigenStructure,
    SelfSimilarSpec,
};
