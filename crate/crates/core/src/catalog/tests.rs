use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::quotient::{quotient_theorem_pipeline, QuotientError};
use crate::subspace::{kernel_subspace, lts_of_subspace, lts_roundtrip_check, preimage_subspace};
use crate::verify::{verify_model, SuiteBounds};

fn tol() -> Tolerance<f64> {
    Tolerance::default()
}

#[test]
fn parse_names_and_defaults() {
    assert_eq!("sphere".parse::<ModelSpec>().unwrap(), ModelSpec::Sphere { n: 2 });
    assert_eq!("sphere(3)".parse::<ModelSpec>().unwrap(), ModelSpec::Sphere { n: 3 });
    assert_eq!(ModelSpec::from_parts("grassmann", "k=2,n=5").unwrap(), ModelSpec::Grassmann { k: 2, n: 5 });
    let p: ModelSpec = "product(sphere(2),spd(2))".parse().unwrap();
    assert_eq!(p.to_string(), "product(sphere(2),spd(2))");
    assert_eq!(p.to_string().parse::<ModelSpec>().unwrap(), p);
    assert_eq!("torus_abelian".parse::<ModelSpec>().unwrap(), ModelSpec::TorusAbelian);
}

#[test]
fn parse_errors() {
    assert!(matches!("klein".parse::<ModelSpec>(), Err(CatalogError::UnknownModel(_))));
    assert!(matches!(ModelSpec::from_parts("grassmann", "3,3"), Err(CatalogError::BadParams { .. })));
    assert!(matches!(ModelSpec::from_parts("grassmann", "0,3"), Err(CatalogError::BadParams { .. })));
    assert!(matches!(ModelSpec::from_parts("sphere", "0"), Err(CatalogError::BadParams { .. })));
    assert!(matches!(ModelSpec::from_parts("spd", "x"), Err(CatalogError::BadParams { .. })));
    assert!(matches!(ModelSpec::from_parts("torus_abelian", "2"), Err(CatalogError::BadParams { .. })));
    assert!("sphere(2".parse::<ModelSpec>().is_err());
}

#[test]
fn dimensions_match_closed_forms() {
    for n in 1..=4 {
        let m = build_model::<f64>("spd", &n.to_string(), &tol()).unwrap();
        assert_eq!(m.space.dim(), n * (n + 1) / 2);
        assert_eq!(m.pair.dim(), n * n);
        let s = build_model::<f64>("sphere", &n.to_string(), &tol()).unwrap();
        assert_eq!(s.space.dim(), n);
    }
    for (k, n) in [(1, 3), (1, 4), (2, 4), (2, 5)] {
        let m = build_model::<f64>("grassmann", &format!("{k},{n}"), &tol()).unwrap();
        assert_eq!(m.space.dim(), k * (n - k));
    }
    let t = build_model::<f64>("torus_abelian", "", &tol()).unwrap();
    assert_eq!(t.space.dim(), 2);
    assert_eq!(t.space.lts_of_pair().unwrap().scale(), 0.0);
    let p = build_model::<f64>("product", "", &tol()).unwrap();
    assert_eq!(p.space.dim(), 4);
}

#[test]
fn every_default_model_passes_the_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let bounds = SuiteBounds {
        samples: 30,
        ..SuiteBounds::default()
    };
    for m in all_models::<f64>(&tol()).unwrap() {
        let r = verify_model(&m, &bounds, &mut rng).unwrap();
        assert!(r.passed(), "{}: {:?}", m.name, r.failures());
        assert!(m.pair.algebra().check(&tol()).passed());
    }
}

#[test]
fn larger_models_pass_the_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let bounds = SuiteBounds {
        samples: 10,
        ..SuiteBounds::default()
    };
    for name in ["sphere(3)", "spd(3)", "grassmann(2,4)", "grassmann(1,4)", "product(sphere(2),spd(2))"] {
        let m = build_spec::<f64>(&name.parse().unwrap(), &tol()).unwrap();
        let r = verify_model(&m, &bounds, &mut rng).unwrap();
        assert!(r.passed(), "{name}: {:?}", r.failures());
    }
}

#[test]
fn sphere_equator_is_one_dimensional_fixed_eigenspace() {
    let m = build_model::<f64>("sphere", "2", &tol()).unwrap();
    let eq = &m.designated_subspaces[0];
    assert_eq!(eq.name, "equator");
    let e = lts_of_subspace(&eq.subspace).unwrap();
    assert_eq!(e.subspace.dim(), 1);
    assert!(e.subspace.same_span(&eq.lts, &tol()));
    assert!(lts_roundtrip_check(&eq.lts, &m.space));
}

#[test]
fn grassmann_hyperplane_is_a_smaller_grassmannian() {
    let m = build_model::<f64>("grassmann", "1,4", &tol()).unwrap();
    let h = m.designated_subspaces.iter().find(|s| s.name == "hyperplane").unwrap();
    // lines in R^3 inside lines in R^4
    assert_eq!(h.lts.dim(), 2);
    assert!(lts_of_subspace(&h.subspace).unwrap().subspace.same_span(&h.lts, &tol()));
}

#[test]
fn designated_morphisms_satisfy_the_preimage_law() {
    let m = build_model::<f64>("product", "", &tol()).unwrap();
    assert_eq!(m.designated_morphisms.len(), 3);
    for f in &m.designated_morphisms {
        let r = preimage_subspace(&f.morphism, &f.target_subspace).unwrap();
        assert!(r.extracted.same_span(&r.algebraic, &tol()), "{}", f.name);
        let k = kernel_subspace(&f.morphism).unwrap();
        assert!(k.extracted.same_span(&k.algebraic, &tol()), "{}", f.name);
    }
    let dims: Vec<usize> = m
        .designated_morphisms
        .iter()
        .map(|f| preimage_subspace(&f.morphism, &f.target_subspace).unwrap().extracted.dim())
        .collect();
    // equator x S^2, the equator, all of S^2
    assert_eq!(dims, [3, 1, 2]);
}

#[test]
fn designated_ideals_behave_as_declared() {
    for m in all_models::<f64>(&tol()).unwrap() {
        for i in &m.designated_ideals {
            let mut rng = ChaCha8Rng::seed_from_u64(42);
            let r = quotient_theorem_pipeline(&m.space, &i.n, &i.gate, &mut rng);
            let got = match r {
                Ok(_) => QuotientOutcome::Quotient,
                Err(QuotientError::GateRejected { .. }) => QuotientOutcome::GateRejected,
                Err(QuotientError::NotFaithful { .. }) => QuotientOutcome::NotFaithful,
                Err(e) => panic!("{} / {}: {e}", m.name, i.name),
            };
            assert_eq!(got, i.expected, "{} / {}", m.name, i.name);
        }
    }
}

#[test]
fn single_precision_models_build() {
    let t = Tolerance::<f32>::default();
    for m in all_models::<f32>(&t).unwrap() {
        assert!(m.space.lts_of_pair().unwrap().check_lts_axioms(&t).passed(), "{}", m.name);
    }
}

#[test]
fn metadata_names_the_global_form() {
    let m = build_model::<f64>("sphere", "2", &tol()).unwrap();
    assert_eq!(m.metadata.global_form, "RP^2");
    let p = build_model::<f64>("product", "", &tol()).unwrap();
    assert_eq!(p.metadata.global_form, "RP^2 x RP^2");
}
