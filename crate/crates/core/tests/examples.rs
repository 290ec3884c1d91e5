//! Worked examples: the two reconstructed curves, the self-similar closed
//! forms, and hand-checkable cases for every module.

mod common;

use common::{example1, example2, sampled, sup, v};
use lorentz_shape::focal::{focal_from_curvatures, pshape_from_focal};
use lorentz_shape::frenet::{frame_residual, spherical_reparam, structure_residual};
use lorentz_shape::io::{load_curve, write_signature, Format};
use lorentz_shape::minkowski::{boost, random_similarity, CausalCharacter};
use lorentz_shape::reconstruction::{integrate_frame, round_trip, standard_frame};
use lorentz_shape::selfsimilar::{BlockKind, SHIFT_FRACTIONS};
use lorentz_shape::{
    arc_length, build_m, derivatives, eigenstructure, frenet, generate, hypersurface_residual, inner, match_curves,
    pshape, reconstruct, recover_similarity, sample_analytic, signature_distance, verify_selfsimilar, AnalyticCurve,
    CausalCase, Error, LorentzVector, MatchOptions, Matrix, PSimilarity, ReconstructionSpec, SelfSimilarSpec,
    ZFunction,
};

fn ex1_curve(a: f64, m: usize) -> lorentz_shape::SampledCurve {
    sampled(0.0, 2.0, m, |s| example1::alpha(a, s))
}

fn ex1_spec(a: f64, range: (f64, f64)) -> ReconstructionSpec {
    ReconstructionSpec::new(
        vec![ZFunction::Constant(0.0), ZFunction::Constant(a)],
        v(&example1::alpha(a, 0.0)),
        example1::frame0(a),
        range,
    )
}

fn ex2_spec() -> ReconstructionSpec {
    ReconstructionSpec::new(
        vec![ZFunction::Reciprocal(1.0), ZFunction::Constant(0.0), ZFunction::Constant(0.0)],
        v(&example2::alpha(0.5)),
        example2::frame0(),
        (0.5, 1.5),
    )
    .with_frame_sigma(0.0)
    .with_initial_kappa1(2.0)
}

fn spec(k: &[f64]) -> SelfSimilarSpec {
    SelfSimilarSpec::new(k.to_vec(), CausalCase::E1Timelike).unwrap()
}

// Minkowski basics.

#[test]
fn initial_tangent_of_example1_is_unit_spacelike() {
    for a in [0.5, 1.0, 2.0] {
        let f = example1::frame0(a);
        assert!((inner(&f[0], &f[0]).unwrap() - 1.0).abs() < 1e-15);
        assert!(frame_residual(&f, &example1::EPS) < 1e-15);
        assert!((Matrix::from_columns(&f).unwrap().det() + 1.0).abs() < 1e-14);
    }
}

#[test]
fn dilation_scales_lorentz_norm() {
    let f = PSimilarity::new(2.0, Matrix::identity(3), LorentzVector::zeros(3)).unwrap();
    let u = v(&[0.0, 3.0, 4.0]);
    assert!((f.apply_linear(&u).unwrap().norm() - 10.0).abs() < 1e-12);
}

#[test]
fn boosts_keep_null_vectors_null() {
    let f = PSimilarity::new(1.0, boost(2, 1, 1.0), LorentzVector::zeros(2)).unwrap();
    let x = f.apply(&v(&[1.0, 1.0])).unwrap();
    assert_eq!(x.causal(), CausalCharacter::Lightlike);
}

// Curve model.

#[test]
fn example1_first_derivative_matches_closed_form() {
    let c = ex1_curve(1.0, 2001);
    let jet = derivatives(&c, 3).unwrap();
    let err =
        sup((0..c.len()).map(|i| jet.derivative(1, i).euclidean_distance(&v(&example1::d_alpha(1.0, c.params()[i])))));
    assert!(err <= 1e-7, "{err:e}");
}

#[test]
fn arc_length_examples() {
    let h = sampled(0.0, 1.0, 1001, |s| vec![s.sinh(), s.cosh()]);
    let s = arc_length(&h).unwrap();
    assert!((s[s.len() - 1] - 1.0).abs() < 1e-9);

    let h3 = sampled(0.0, 1.0, 1001, |s| vec![3.0 * s.sinh(), 3.0 * s.cosh()]);
    let s3 = arc_length(&h3).unwrap();
    assert!(s.iter().zip(&s3).all(|(a, b)| (3.0 * a - b).abs() < 1e-9));

    let line = sampled(0.0, 2.0, 101, |t| vec![t, 0.0, 0.0]);
    let sl = arc_length(&line).unwrap();
    assert!((sl[sl.len() - 1] - 2.0).abs() < 1e-12);
}

#[test]
fn arc_length_rejects_null_tangent() {
    let c = sampled(0.0, 1.0, 101, |t| vec![t, t]);
    assert!(matches!(arc_length(&c), Err(Error::LightlikeTangent { .. })));
}

#[test]
fn csv_with_duplicate_parameter_is_rejected() {
    let mut text = String::from("t,x0,x1\n");
    for t in [0.0, 0.1, 0.2, 0.2, 0.3, 0.4, 0.5, 0.6] {
        text.push_str(&format!("{t},{},1\n", t * 0.5));
    }
    assert!(matches!(load_curve(text.as_bytes(), Format::Csv), Err(Error::NonMonotoneParameter { index: 3 })));
}

#[test]
fn sample_analytic_points() {
    let x = AnalyticCurve::Example2.point(0.0).unwrap();
    assert!(x.euclidean_distance(&v(&example2::alpha(0.0))) < 1e-15);
    let c = sample_analytic(&AnalyticCurve::Example1 { a: 1.0 }, (0.0, 1.0), 11).unwrap();
    assert!((c.points()[0][0] - 0.5).abs() < 1e-15);
    assert!(matches!(sample_analytic(&AnalyticCurve::UnitHyperbola, (0.0, 1.0), 6), Err(Error::TooFewSamples { .. })));
}

// Frenet invariants.

#[test]
fn unit_hyperbola_frame() {
    let c = sampled(-1.0, 1.0, 801, |s| vec![s.sinh(), s.cosh()]);
    let f = frenet(&c).unwrap();
    assert_eq!(f.eps(), &[-1.0, 1.0]);
    assert_eq!(f.e1_character(), CausalCharacter::Timelike);
    assert!(f.kappa(1).iter().all(|k| (k - 1.0).abs() < 1e-9));
    let sig = pshape(&f).unwrap();
    assert!(sig.ktilde(1).iter().all(|k| k.abs() < 1e-6));
    let sp = spherical_reparam(&f).unwrap();
    assert!(sp.sigma.iter().zip(f.arc_length()).all(|(a, b)| (a - b).abs() < 1e-9));
}

#[test]
fn example1_frame_at_origin() {
    let a = 1.0;
    let f = frenet(&ex1_curve(a, 2001)).unwrap();
    assert_eq!(f.eps(), &example1::EPS);
    for (got, want) in f.frame(0).iter().zip(example1::frame0(a)) {
        assert!(got.euclidean_distance(&want) < 1e-8, "{got} vs {want}");
    }
    assert!(f.orthonormality_residual() <= 1e-6);
}

#[test]
fn example1_tangent_in_sigma_has_length_one_over_kappa1() {
    let f = frenet(&ex1_curve(1.0, 2001)).unwrap();
    let sp = spherical_reparam(&f).unwrap();
    for (d, k) in sp.dalpha_dsigma.iter().zip(f.kappa(1)) {
        assert!((d.norm() - 1.0 / k).abs() < 1e-7);
    }
}

#[test]
fn example1_pshape_is_zero_and_a() {
    for a in [0.5, 1.0, 1.7] {
        let sig = pshape(&frenet(&ex1_curve(a, 1001)).unwrap()).unwrap();
        let r = sig.confident_range();
        assert!(sup(sig.ktilde(1)[r.clone()].iter().map(|k| k.abs())) < 1e-5);
        assert!(sup(sig.ktilde(2)[r].iter().map(|k| (k - a).abs())) < 1e-5);
    }
}

#[test]
fn example2_pshape_is_reciprocal() {
    let c = sampled(0.5, 2.0, 1501, example2::alpha);
    let f = frenet(&c).unwrap();
    assert_eq!(f.span_dim(), 2);
    assert_eq!(f.e1_character(), CausalCharacter::Timelike);
    let sig = pshape(&f).unwrap();
    for j in sig.confident_range() {
        let s = c.params()[j];
        assert!((sig.sigma()[j] - (s - 0.5)).abs() < 1e-9);
        assert!((sig.ktilde(1)[j] - 1.0 / s).abs() < 1e-4);
        assert_eq!(sig.ktilde(2)[j], 0.0);
        assert_eq!(sig.ktilde(3)[j], 0.0);
    }
}

#[test]
fn timelike_line_is_degenerate() {
    let c = sampled(0.0, 1.0, 101, |t| vec![t, 0.0, 0.0]);
    assert!(matches!(frenet(&c), Err(Error::DegenerateJet { .. })));
}

#[test]
fn structure_equation_holds() {
    for c in [ex1_curve(1.0, 1001), generate(&spec(&[0.3, 0.5, 0.4]), (0.0, 2.0), 1001).unwrap()] {
        let f = frenet(&c).unwrap();
        let sig = pshape(&f).unwrap();
        assert!(structure_residual(&f, &sig) <= 1e-4);
    }
}

#[test]
fn signature_csv_header() {
    let sig = pshape(&frenet(&ex1_curve(1.0, 101)).unwrap()).unwrap();
    let mut buf = Vec::new();
    write_signature(&mut buf, &sig).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("sigma,ktilde1,ktilde2\n"));
    assert_eq!(text.lines().count(), 102);
}

// Focal curvatures.

#[test]
fn focal_recursion_reproduces_curvatures() {
    // Forward formula: κᵢ = (Σ_{j=2}^{i} εⱼ m_{j−1} m′_{j−1}) / (m_{i−1} mᵢ).
    let c = generate(&spec(&[0.3, 0.5, 0.4]), (0.0, 2.0), 1001).unwrap();
    let f = frenet(&c).unwrap();
    let fc = focal_from_curvatures(&f).unwrap();
    let eps = f.eps();
    for j in f.confident_range() {
        assert!((eps[0] / fc.m(1)[j] - f.kappa(1)[j]).abs() < 1e-9);
        let mut acc = 0.0;
        for i in 2..4 {
            acc += eps[i - 1] * fc.m(i - 1)[j] * fc.dm_ds(i - 1)[j];
            let k = acc / (fc.m(i - 1)[j] * fc.m(i)[j]);
            assert!((k - f.kappa(i)[j]).abs() < 1e-6 * f.kappa(i)[j].abs().max(1.0));
        }
    }
}

#[test]
fn example1_focal_ktilde1_vanishes() {
    let f = frenet(&ex1_curve(1.0, 1001)).unwrap();
    let fc = focal_from_curvatures(&f).unwrap();
    let r = f.confident_range();
    assert!(sup(fc.ktilde1()[r].iter().map(|k| k.abs())) < 1e-5);
    // m₂ is zero for this curve, so the higher p-shape curvature has no
    // focal expression.
    assert!(matches!(pshape_from_focal(&fc, &f), Err(Error::VanishingFocal { .. })));
}

#[test]
fn example2_focal_ktilde1_is_reciprocal() {
    let c = sampled(0.5, 2.0, 1501, example2::alpha);
    let f = frenet(&c).unwrap();
    let fc = focal_from_curvatures(&f).unwrap();
    assert_eq!(fc.count(), 1);
    let sig = pshape_from_focal(&fc, &f).unwrap();
    for j in sig.confident_range() {
        assert!((sig.ktilde(1)[j] - 1.0 / c.params()[j]).abs() < 1e-4);
    }
}

#[test]
fn focal_and_direct_pshape_agree_on_example1_first_component() {
    let f = frenet(&ex1_curve(1.0, 1001)).unwrap();
    let direct = pshape(&f).unwrap();
    let fc = focal_from_curvatures(&f).unwrap();
    let r = f.confident_range();
    let d = sup(fc.ktilde1()[r.clone()].iter().zip(&direct.ktilde(1)[r]).map(|(a, b)| (a - b).abs()));
    assert!(d < 1e-5);
}

// Reconstruction.

#[test]
fn example1_frame_trajectory() {
    let a: f64 = 1.0;
    let c = (1.0 + a * a).sqrt();
    let traj = integrate_frame(&ex1_spec(a, (0.0, 1.0))).unwrap();
    for (s, fr) in traj.sigma.iter().zip(&traj.frames) {
        let want = v(&[(c * s).sinh() / c, -(c * s).cosh() / c, a / c]);
        assert!(fr[0].euclidean_distance(&want) < 1e-7);
    }
    assert!(traj.max_residual <= 1e-9);
}

#[test]
fn example2_frame_trajectory() {
    let r2 = std::f64::consts::SQRT_2;
    let traj = integrate_frame(&ex2_spec()).unwrap();
    for (s, fr) in traj.sigma.iter().zip(&traj.frames) {
        let want = v(&[r2 * s.cosh(), s.sinh() / r2, s.cosh(), s.sinh() / r2]);
        assert!(fr[0].euclidean_distance(&want) < 1e-7);
    }
}

#[test]
fn reconstructions_of_both_examples() {
    let rec = reconstruct(&ex1_spec(1.0, (0.0, 1.0))).unwrap();
    for (s, p) in rec.curve.params().iter().zip(rec.curve.points()) {
        assert!(p.euclidean_distance(&v(&example1::alpha(1.0, *s))) <= 1e-6);
    }
    let rec = reconstruct(&ex2_spec()).unwrap();
    for (s, p) in rec.curve.params().iter().zip(rec.curve.points()) {
        assert!(p.euclidean_distance(&v(&example2::alpha(*s))) <= 1e-6);
    }
}

#[test]
fn zero_invariants_in_the_plane_give_a_boost_flow() {
    let eps = [-1.0, 1.0];
    let spec = ReconstructionSpec::new(
        vec![ZFunction::Constant(0.0)],
        LorentzVector::zeros(2),
        standard_frame(&eps).unwrap(),
        (0.0, 1.0),
    );
    let traj = integrate_frame(&spec).unwrap();
    for (s, fr) in traj.sigma.iter().zip(&traj.frames) {
        assert!(fr[0].euclidean_distance(&v(&[s.cosh(), s.sinh()])) < 1e-10);
    }
}

#[test]
fn reconstruction_rejects_non_orthonormal_frame() {
    let spec = ReconstructionSpec::new(
        vec![ZFunction::Constant(0.0), ZFunction::Constant(1.0)],
        LorentzVector::zeros(3),
        vec![v(&[0.0, 1.0, 0.0]), v(&[1.0, 0.0, 0.0]), v(&[0.0, 0.5, 1.0])],
        (0.0, 1.0),
    );
    assert!(matches!(reconstruct(&spec), Err(Error::InvalidInput(_))));
}

#[test]
fn constant_invariants_reconstruct_the_closed_form_up_to_similarity() {
    let s = spec(&[0.3, 0.5]);
    let gen = generate(&s, (0.0, 2.0), 2001).unwrap();
    let z = vec![ZFunction::Constant(0.3), ZFunction::Constant(0.5)];
    let frame = standard_frame(&s.eps()).unwrap();
    let rec = reconstruct(&ReconstructionSpec::new(z, LorentzVector::zeros(3), frame, (0.0, 2.0))).unwrap();
    let m = recover_similarity(&gen, &rec.curve, &MatchOptions::default()).unwrap();
    assert!(m.residual.unwrap() <= 1e-5);
}

#[test]
fn round_trips() {
    let r = round_trip(&ex1_curve(1.0, 1001)).unwrap();
    assert!(r.max_deviation <= 1e-5, "{}", r.max_deviation);
    let h = sampled(0.0, 1.0, 1001, |s| vec![s.sinh(), s.cosh()]);
    assert!(round_trip(&h).unwrap().max_deviation <= 1e-6);
    let g = generate(&spec(&[0.3, 0.5]), (0.0, 2.0), 1001).unwrap();
    assert!(round_trip(&g).unwrap().max_deviation <= 1e-5);
}

#[test]
fn reconstruction_reproduces_sigma_grid() {
    let rec = reconstruct(&ex1_spec(1.0, (0.0, 2.0)).with_step(2e-3)).unwrap();
    let f = frenet(&rec.curve).unwrap();
    let sp = spherical_reparam(&f).unwrap();
    for (a, b) in sp.sigma.iter().zip(rec.curve.params()) {
        assert!((a - b).abs() < 1e-6);
    }
}

#[test]
fn different_initial_frames_give_similar_curves() {
    let z = || vec![ZFunction::Constant(0.2), ZFunction::custom(|s| 0.8 + 0.3 * s.sin())];
    let eps = [1.0, -1.0, 1.0];
    let f0 = standard_frame(&eps).unwrap();
    let g = random_similarity(3, 1.0, 99);
    let f1: Vec<_> = f0.iter().map(|e| g.apply_linear(e).unwrap()).collect();
    let a = reconstruct(&ReconstructionSpec::new(z(), LorentzVector::zeros(3), f0, (0.0, 2.0))).unwrap();
    let b = reconstruct(&ReconstructionSpec::new(z(), v(&[1.0, -2.0, 0.5]), f1, (0.0, 2.0)).with_initial_kappa1(0.4))
        .unwrap();
    let m = recover_similarity(&a.curve, &b.curve, &MatchOptions::default()).unwrap();
    assert!(m.residual.unwrap() <= 1e-6);
    assert!((m.recovered.unwrap().mu() - 2.5).abs() < 1e-6);
}

// Matching.

#[test]
fn signature_distance_examples() {
    let s1 = pshape(&frenet(&ex1_curve(1.0, 801)).unwrap()).unwrap();
    let s2 = pshape(&frenet(&ex1_curve(1.1, 801)).unwrap()).unwrap();
    assert_eq!(signature_distance(&s1, &s1).unwrap(), 0.0);
    assert!(signature_distance(&s1, &s2).unwrap() >= 0.1 - 1e-6);
    let h = pshape(&frenet(&sampled(0.0, 1.0, 101, |s| vec![s.sinh(), s.cosh()])).unwrap()).unwrap();
    assert!(matches!(signature_distance(&s1, &h), Err(Error::IncompatibleDimension(_))));
}

#[test]
fn recover_identity_and_known_map() {
    let c = ex1_curve(1.0, 2001);
    let m = recover_similarity(&c, &c, &MatchOptions::default()).unwrap();
    let f = m.recovered.unwrap();
    assert!((f.mu() - 1.0).abs() < 1e-12);
    assert!(f.matrix().max_abs_diff(&Matrix::identity(3)) < 1e-9);
    assert!(m.residual.unwrap() < 1e-9);

    let g = random_similarity(3, 1.7, 5);
    let m = recover_similarity(&c, &c.transform(&g).unwrap(), &MatchOptions::default()).unwrap();
    let f = m.recovered.unwrap();
    assert!((f.mu() - 1.7).abs() < 1e-6);
    assert!(m.residual.unwrap() <= 1e-6);
    assert!(f.matrix().max_abs_diff(g.matrix()) < 1e-6);
}

#[test]
fn different_shapes_do_not_match() {
    let (a, b) = (ex1_curve(1.0, 801), ex1_curve(2.0, 801));
    assert!(matches!(recover_similarity(&a, &b, &MatchOptions::default()), Err(Error::NoMatch { .. })));
    let r = match_curves(&a, &b, &MatchOptions::default()).unwrap();
    assert!(!r.matched && r.recovered.is_none());
}

#[test]
fn timelike_report_carries_both_conventions() {
    let c = generate(&spec(&[0.3, 0.5]), (0.0, 2.0), 801).unwrap();
    let r = match_curves(&c, &c.transform(&random_similarity(3, 2.0, 3)).unwrap(), &MatchOptions::default()).unwrap();
    let j = r.to_json();
    assert_eq!(j["matched"], true);
    let mu = j["mu"].as_f64().unwrap();
    assert_eq!(j["negated_convention"]["mu"].as_f64().unwrap(), -mu);
}

// Self-similar curves.

#[test]
fn m_squared_for_n3_and_n4() {
    let (k2, k3) = (0.5, 0.4);
    let m = build_m(&spec(&[0.3, k2])).unwrap();
    let want =
        Matrix::from_rows(&[vec![1.0, 0.0, k2], vec![0.0, 1.0 - k2 * k2, 0.0], vec![-k2, 0.0, -k2 * k2]]).unwrap();
    assert!(m.mul(&m).max_abs_diff(&want) < 1e-15);

    let m = build_m(&spec(&[0.3, k2, k3])).unwrap();
    let m2 = m.mul(&m);
    assert!(
        m2.max_abs_diff(
            &Matrix::from_rows(&[
                vec![1.0, 0.0, k2, 0.0],
                vec![0.0, 1.0 - k2 * k2, 0.0, k2 * k3],
                vec![-k2, 0.0, -k2 * k2 - k3 * k3, 0.0],
                vec![0.0, k2 * k3, 0.0, -k3 * k3],
            ])
            .unwrap()
        ) < 1e-15
    );
}

#[test]
fn n3_eigenvalues_and_amplitudes() {
    let (k1, k2) = (0.3, 0.5);
    let es = eigenstructure(&spec(&[k1, k2])).unwrap();
    assert_eq!(es.blocks.len(), 1);
    assert_eq!(es.blocks[0].kind, BlockKind::Hyperbolic);
    assert!((es.blocks[0].m2_eigenvalue - (1.0 - k2 * k2)).abs() < 1e-12);
    assert!((es.blocks[0].a - (1.0 / (1.0 - k2 * k2)).sqrt()).abs() < 1e-12);
    assert!((es.tail.unwrap() - (k2 * k2 / (k1 * k1 * (1.0 - k2 * k2))).sqrt()).abs() < 1e-12);
    assert!((es.blocks[0].a - 1.1547).abs() < 1e-4 && (es.tail.unwrap() - 1.9245).abs() < 1e-4);
}

#[test]
fn n4_eigenvalues() {
    let (k2, k3) = (0.5, 0.4);
    let es = eigenstructure(&spec(&[0.3, k2, k3])).unwrap();
    let p = 1.0 - k2 * k2 - k3 * k3;
    let root = (p * p + 4.0 * k3 * k3).sqrt();
    let l1 = 0.5 * (p - root);
    let l2 = 0.5 * (p + root);
    let mut got: Vec<f64> = es.blocks.iter().map(|b| b.m2_eigenvalue).collect();
    got.sort_by(f64::total_cmp);
    assert!((got[0] - l1).abs() < 1e-12 && (got[1] - l2).abs() < 1e-12);
    // The positive root carries the Lorentzian plane.
    let hyp = es.blocks.iter().find(|b| b.kind == BlockKind::Hyperbolic).unwrap();
    assert!((hyp.m2_eigenvalue - l2).abs() < 1e-12);
}

#[test]
fn infeasible_and_invalid_specs() {
    let r = eigenstructure(&SelfSimilarSpec { dim: 3, ktilde: vec![0.3, 1.5], case: CausalCase::E1Timelike });
    assert!(matches!(r, Err(Error::InfeasibleSpec(_))));
    // λ₁² = 1 − κ̃₂² must exceed κ̃₁².
    let r = eigenstructure(&SelfSimilarSpec { dim: 3, ktilde: vec![0.9, 0.5], case: CausalCase::E1Timelike });
    assert!(matches!(r, Err(Error::InfeasibleSpec(_))));
    assert!(SelfSimilarSpec::new(vec![0.0], CausalCase::E1Timelike).is_err());
}

#[test]
fn hypersurface_membership() {
    for k in [&[0.5][..], &[0.3, 0.5], &[0.3, 0.5, 0.4], &[0.2, 0.5, 0.4, 0.3]] {
        let s = spec(k);
        let c = generate(&s, (0.0, 2.0), 201).unwrap();
        assert!(hypersurface_residual(&c, &s).unwrap() <= 1e-9, "{k:?}");
    }
    let s = SelfSimilarSpec::new(vec![0.3, 0.5, 0.4], CausalCase::E2Timelike).unwrap();
    let c = generate(&s, (0.0, 2.0), 201).unwrap();
    assert!(hypersurface_residual(&c, &s).unwrap() <= 1e-9);
    // A curve that is not self-similar is far from every such surface.
    let s = spec(&[0.3, 0.5]);
    assert!(hypersurface_residual(&ex1_curve(1.0, 201), &s).unwrap() > 1e-2);
}

#[test]
fn verify_self_similar_curve_and_shifted_copies() {
    let s = spec(&[0.3, 0.5]);
    let c = generate(&s, (0.0, 2.0), 2001).unwrap();
    let rep = verify_selfsimilar(&c, &s, &MatchOptions::default()).unwrap();
    assert!(rep.max_deviation.iter().all(|d| *d <= 1e-5), "{:?}", rep.max_deviation);
    assert_eq!(rep.transitivity.len(), SHIFT_FRACTIONS.len());
    for t in &rep.transitivity {
        assert!(t.matched && t.residual.unwrap() <= 1e-5, "{t:?}");
    }
    assert!(rep.passed(1e-5));
}

#[test]
fn shifted_copy_is_similar() {
    let s = spec(&[0.3, 0.5]);
    let c = generate(&s, (0.0, 2.0), 2001).unwrap();
    let k = c.params().partition_point(|t| *t < 0.2);
    let shifted = c.slice(k..c.len()).unwrap();
    let m = recover_similarity(&c, &shifted, &MatchOptions::default()).unwrap();
    assert!(m.matched && m.residual.unwrap() <= 1e-5);
}

#[test]
fn sampled_generators_are_self_similar() {
    for gen in [AnalyticCurve::selfsim2(0.5), AnalyticCurve::selfsim3(0.3, 0.5), AnalyticCurve::selfsim4(0.3, 0.5, 0.4)]
    {
        let c = sample_analytic(&gen, (0.0, 2.0), 1001).unwrap();
        let AnalyticCurve::SelfSimilar(s) = &gen else { unreachable!() };
        let sig = pshape(&frenet(&c).unwrap()).unwrap();
        let r = sig.confident_range();
        for (i, k) in s.ktilde.iter().enumerate() {
            assert!(sup(sig.ktilde(i + 1)[r.clone()].iter().map(|x| (x - k).abs())) <= 1e-5);
        }
    }
}
