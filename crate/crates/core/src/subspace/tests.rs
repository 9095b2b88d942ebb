use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::catalog::{product, sphere, spd, torus, trivial};
use crate::numkernel::Tolerance;
use crate::sympair::{GroupMap, PairMorphism};
use crate::symspace::sym_morphism;

fn tol() -> Tolerance<f64> {
    Tolerance::default()
}

fn s2() -> SymmetricSpace<f64> {
    SymmetricSpace::new(Arc::new(sphere(2, &tol()).unwrap()))
}

fn spd2() -> SymmetricSpace<f64> {
    SymmetricSpace::new(Arc::new(spd(2, &tol()).unwrap()))
}

fn equator(m: &SymmetricSpace<f64>) -> ReflectionSubspace<f64> {
    ReflectionSubspace::fixed_points(m, Matrix::diag(&[1.0, -1.0, 1.0]), "equator").unwrap()
}

fn phi() -> f64 {
    0.5 * (1.0 + 5f64.sqrt())
}

fn dense_line() -> (SymmetricSpace<f64>, ReflectionSubspace<f64>, LinearSubspace<f64>) {
    let m = SymmetricSpace::new(Arc::new(torus(&tol()).unwrap()));
    let n = LinearSubspace::span(2, &[vec![1.0, phi()]], &tol());
    let big = ReflectionSubspace::generated(&m, n.clone(), "dense line")
        .unwrap()
        .with_lattice(LineLattice::new(std::f64::consts::PI, 10_000))
        .unwrap();
    (m, big, n)
}

fn second_factor_is_base(m: &SymmetricSpace<f64>) -> ReflectionSubspace<f64> {
    let mut cs = Vec::new();
    for i in 3..6 {
        for j in 3..6 {
            cs.push(AffineConstraint {
                weights: Matrix::unit(6, i, j),
                value: if i == j { 1.0 } else { 0.0 },
            });
        }
    }
    ReflectionSubspace::algebraic(m, cs, "S2 x {b}").unwrap()
}

#[test]
fn extraction_of_trivial_subspaces() {
    for m in [s2(), spd2()] {
        let whole = lts_of_subspace(&ReflectionSubspace::whole(&m)).unwrap();
        assert_eq!(whole.subspace.dim(), m.dim());
        assert_eq!(whole.unknown, 0);
        let point = lts_of_subspace(&ReflectionSubspace::base_only(&m)).unwrap();
        assert_eq!(point.subspace.dim(), 0);
    }
}

#[test]
fn equator_extraction_matches_oracles() {
    let m = s2();
    let eq = equator(&m);
    let got = lts_of_subspace(&eq).unwrap().subspace;
    // derivative of the reflection on g- is diag(1, -1) in this basis
    assert!(got.same_span(&LinearSubspace::coordinate(2, &[0]), &tol()));
    // brute force over rays: only the e0 direction stays inside on the grid
    let mut inside = Vec::new();
    for k in 0..180 {
        let a = (k as f64).to_radians();
        let u = [a.cos(), a.sin()];
        let all = CERTIFICATION_GRID
            .iter()
            .all(|&t| eq.membership(&m.exp_point(&[t * u[0], t * u[1]]).unwrap()).unwrap().is_member());
        if all {
            inside.push(k);
        }
    }
    assert_eq!(inside, vec![0]);
}

#[test]
fn algebraic_constraints_must_hold_at_base() {
    let m = spd2();
    let c = AffineConstraint {
        weights: Matrix::unit(2, 0, 0),
        value: 2.0,
    };
    assert!(matches!(
        ReflectionSubspace::algebraic(&m, vec![c], "bad"),
        Err(SubspaceError::NotPointed(_))
    ));
}

#[test]
fn fixed_points_reject_non_automorphisms() {
    let m = s2();
    let shear = Matrix::from_f64(3, 3, &[1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
    assert!(matches!(
        ReflectionSubspace::fixed_points(&m, shear, "x"),
        Err(SubspaceError::BadAutomorphism(_))
    ));
}

#[test]
fn generated_membership_examples() {
    let m = spd2();
    let b = m.base_point();
    let zero = generate_integral(&LinearSubspace::zero(3), &m).unwrap();
    assert!(zero.membership(&b).unwrap().is_member());
    assert_eq!(zero.membership(&m.exp_point(&[0.1, 0.0, 0.0]).unwrap()).unwrap(), Membership::NonMember);
    let full = generate_integral(&LinearSubspace::full(3), &m).unwrap();
    assert!(full.membership(&m.exp_point(&[0.4, -0.3, 0.9]).unwrap()).unwrap().is_member());

    let diag = generate_integral(&LinearSubspace::coordinate(3, &[0, 1]), &m).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..100 {
        let mut v: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.5..1.5)).collect();
        if i % 2 == 0 {
            v[2] = 0.0;
        }
        let direct = v[2] == 0.0;
        assert_eq!(diag.membership(&m.exp_point(&v).unwrap()).unwrap().is_member(), direct);
    }
}

#[test]
fn generated_rejects_non_subsystems() {
    // span{E11, E12+E21} is not closed: [[E11, S], S] has an E22 part
    let m = spd2();
    let seed = LinearSubspace::coordinate(3, &[0, 2]);
    assert!(matches!(generate_integral(&seed, &m), Err(SubspaceError::SeedNotSubsystem)));
}

#[test]
fn generated_membership_outside_chart_is_unknown() {
    let m = s2();
    let n = generate_integral(&LinearSubspace::coordinate(2, &[0]), &m).unwrap();
    let far = m.exp_point(&[std::f64::consts::FRAC_PI_2, 0.0]).unwrap();
    assert_eq!(n.membership(&far).unwrap(), Membership::Unknown);
}

#[test]
fn roundtrip_examples() {
    let m = spd2();
    assert!(lts_roundtrip_check(&LinearSubspace::zero(3), &m));
    assert!(lts_roundtrip_check(&LinearSubspace::full(3), &m));
    assert!(lts_roundtrip_check(&LinearSubspace::coordinate(3, &[0, 1]), &m));
    assert!(!lts_roundtrip_check(&LinearSubspace::coordinate(3, &[0, 2]), &m));
    let s = s2();
    assert!(lts_roundtrip_check(&LinearSubspace::coordinate(2, &[1]), &s));
}

#[test]
fn roundtrip_of_dense_line_without_lattice() {
    let (m, _, n) = dense_line();
    // t = 2 on the unit direction leaves the chart and wraps onto another sheet
    let v = n.basis()[0].clone();
    let w = scaled(2.0, &v);
    let x = m.exp_point(&w).unwrap();
    let chart_only = generate_integral(&n, &m).unwrap();
    assert_eq!(chart_only.membership(&x).unwrap(), Membership::NonMember);
    assert!(!in_normal_chart(&m, &w, &x));
    let e = lts_of_subspace(&chart_only).unwrap();
    assert!(e.subspace.same_span(&n, &tol()) && e.unknown > 0);
    assert!(lts_roundtrip_check(&n, &m));
}

#[test]
fn chart_split_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let m = s2();
    let r = exp_chart_split(
        &ReflectionSubspace::whole(&m),
        &LinearSubspace::full(2),
        &ChartOptions::default(),
        &mut rng,
        &[],
    )
    .unwrap();
    assert_eq!((r.radius, r.halvings), (1.0, 0));

    let eq = equator(&m);
    let n = lts_of_subspace(&eq).unwrap().subspace;
    let opts = ChartOptions {
        initial_radius: 0.5,
        ..ChartOptions::default()
    };
    let r = exp_chart_split(&eq, &n, &opts, &mut rng, &[]).unwrap();
    assert_eq!(r.radius, 0.5);
    assert!(r.max_violation < 1e-12);

    let (_, line, n) = dense_line();
    let probes = lattice::transverse_witnesses(&[0.0, 1.0], 10_000);
    match exp_chart_split(&line, &n, &ChartOptions::default(), &mut rng, &probes) {
        Err(SubspaceError::ChartSplit { floor, witness }) => {
            assert_eq!(floor, 1e-3);
            assert!(witness[0].hypot(witness[1]) < 1e-3);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn split_complement_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let m = s2();
    let point = ReflectionSubspace::base_only(&m);
    let r = split_complement_criterion(&point, &LinearSubspace::zero(2), &LinearSubspace::full(2), 1.0, 100, &mut rng, &[])
        .unwrap();
    assert!(r.holds);

    let eq = equator(&m);
    let n = LinearSubspace::coordinate(2, &[0]);
    let f = LinearSubspace::coordinate(2, &[1]);
    let r = split_complement_criterion(&eq, &n, &f, 1.0, 200, &mut rng, &[]).unwrap();
    assert!(r.holds && r.unknown == 0);

    assert!(matches!(
        split_complement_criterion(&eq, &n, &n, 1.0, 10, &mut rng, &[]),
        Err(SubspaceError::NotComplement)
    ));

    let (_, line, n) = dense_line();
    let f = n.complement(&tol());
    let probes = lattice::transverse_witnesses(&f.basis()[0], 10_000);
    let r = split_complement_criterion(&line, &n, &f, 0.5, 50, &mut rng, &probes).unwrap();
    assert!(!r.holds);
    let w = r.witness.unwrap();
    assert!(w[0].hypot(w[1]) < 0.5 && w[0].hypot(w[1]) > 0.0);
}

#[test]
fn chart_split_implies_complement_split() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let m = s2();
    let eq = equator(&m);
    let n = lts_of_subspace(&eq).unwrap().subspace;
    let rep = exp_chart_split(&eq, &n, &ChartOptions::default(), &mut rng, &[]).unwrap();
    let r = split_complement_criterion(&eq, &n, &n.complement(&tol()), rep.radius, 200, &mut rng, &[]).unwrap();
    assert!(r.holds);
}

#[test]
fn preimage_examples() {
    let sp = Arc::new(sphere::<f64>(2, &tol()).unwrap());
    let sq = Arc::new(product(&sp, &sp, &tol()).unwrap());
    let (m1, m2) = (SymmetricSpace::new(sp.clone()), SymmetricSpace::new(sq.clone()));

    let id = sym_morphism(PairMorphism::identity(sp.clone()).unwrap());
    let eq = equator(&m1);
    let r = preimage_subspace(&id, &eq).unwrap();
    assert!(r.extracted.same_span(&lts_of_subspace(&eq).unwrap().subspace, &tol()));

    let diag = sym_morphism(PairMorphism::new(sp.clone(), sq.clone(), GroupMap::Diagonal).unwrap());
    let r = preimage_subspace(&diag, &ReflectionSubspace::whole(&m2)).unwrap();
    assert_eq!(r.extracted.dim(), 2);
    let r = preimage_subspace(&diag, &second_factor_is_base(&m2)).unwrap();
    assert_eq!((r.extracted.dim(), r.algebraic.dim()), (0, 0));
}

#[test]
fn kernel_examples() {
    let sp = Arc::new(sphere::<f64>(2, &tol()).unwrap());
    let sq = Arc::new(product(&sp, &sp, &tol()).unwrap());
    let id = sym_morphism(PairMorphism::identity(sp.clone()).unwrap());
    assert_eq!(kernel_subspace(&id).unwrap().extracted.dim(), 0);

    let proj = sym_morphism(PairMorphism::new(sq.clone(), sp.clone(), GroupMap::Project { offset: 0, size: 3 }).unwrap());
    let k = kernel_subspace(&proj).unwrap();
    // product g- coordinates are (first factor, second factor)
    assert!(k.extracted.same_span(&LinearSubspace::coordinate(4, &[2, 3]), &tol()));
    let m2 = SymmetricSpace::new(sq.clone());
    let x = m2.exp_point(&[0.0, 0.0, 0.7, -0.4]).unwrap();
    assert!(k.subspace.membership(&x).unwrap().is_member());

    let pt = Arc::new(trivial::<f64>(&tol()).unwrap());
    let c = sym_morphism(PairMorphism::new(sq, pt, GroupMap::Trivial).unwrap());
    assert_eq!(kernel_subspace(&c).unwrap().extracted.dim(), 4);
}

#[test]
fn generated_subspaces_are_mu_closed() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let m = spd2();
    let seed = LinearSubspace::coordinate(3, &[0, 1]);
    let n = generate_integral(&seed, &m).unwrap();
    let r = mu_closure_check(&n, &seed, 1.0, 100, &mut rng).unwrap();
    assert_eq!((r.failures, r.unknown), (0, 0));
    let s = s2();
    let eq = equator(&s);
    let r = mu_closure_check(&eq, &LinearSubspace::coordinate(2, &[0]), 2.0, 100, &mut rng).unwrap();
    assert_eq!(r.failures, 0);
}

#[test]
fn dense_line_membership() {
    let (m, line, _) = dense_line();
    assert!(line.membership(&m.base_point()).unwrap().is_member());
    // numerators stay within the search budget
    for (p, q) in lattice::golden_convergents(5_000).iter().skip(3) {
        let w = lattice::density_witness(p, q).coords();
        assert!(line.membership(&m.exp_point(&w).unwrap()).unwrap().is_member());
    }
    assert_eq!(line.membership(&m.exp_point(&[0.0, 1.0]).unwrap()).unwrap(), Membership::Unknown);
}

#[test]
fn descriptor_roundtrip() {
    let m = s2();
    for n in [equator(&m), ReflectionSubspace::base_only(&m)] {
        let d = n.to_descriptor().unwrap();
        let json = serde_json::to_string(&d).unwrap();
        let back: SubspaceDescriptor<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
        let n2 = ReflectionSubspace::from_descriptor(&m, &back).unwrap();
        assert!(lts_of_subspace(&n2)
            .unwrap()
            .subspace
            .same_span(&lts_of_subspace(&n).unwrap().subspace, &tol()));
    }
    let (t, line, _) = dense_line();
    let json = serde_json::to_value(line.to_descriptor().unwrap()).unwrap();
    assert_eq!(json["kind"], "generated");
    let back = ReflectionSubspace::from_descriptor(&t, &serde_json::from_value(json).unwrap()).unwrap();
    assert!(matches!(back.kind(), SubspaceKind::Generated { lattice: Some(_), .. }));
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn lines_in_rank_one_spaces_roundtrip(a in -3.0f64..3.0) {
            let m = s2();
            let seed = LinearSubspace::span(2, &[vec![a.cos(), a.sin()]], &tol());
            prop_assert!(lts_roundtrip_check(&seed, &m));
            let n = generate_integral(&seed, &m).unwrap();
            let ext = lts_of_subspace(&n).unwrap();
            prop_assert!(m.lts_of_pair().unwrap().is_subsystem(&ext.subspace, &tol()));
        }

        #[test]
        fn fixed_point_extraction_is_a_subsystem(a in -3.0f64..3.0) {
            // reflection across a line through the pole, conjugated by a rotation about e2
            let m = s2();
            let (c, s) = (a.cos(), a.sin());
            let r = Matrix::from_f64(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0]);
            let p = r.matmul(&Matrix::diag(&[1.0, -1.0, 1.0])).matmul(&r.transpose());
            let eq = ReflectionSubspace::fixed_points(&m, p, "rotated").unwrap();
            let ext = lts_of_subspace(&eq).unwrap();
            prop_assert_eq!(ext.subspace.dim(), 1);
            prop_assert!(m.lts_of_pair().unwrap().is_subsystem(&ext.subspace, &tol()));
        }
    }
}
