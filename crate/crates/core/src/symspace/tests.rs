use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::catalog::{grassmann, product, sphere, spd, torus};
use crate::numkernel::{mat_exp, Matrix, Tolerance};
use crate::sympair::{GroupMap, PairMorphism};

fn tol() -> Tolerance<f64> {
    Tolerance::default()
}

fn space(p: MatrixSymmetricPair<f64>) -> SymmetricSpace<f64> {
    SymmetricSpace::new(Arc::new(p))
}

fn spd2() -> SymmetricSpace<f64> {
    space(spd(2, &tol()).unwrap())
}

fn s2() -> SymmetricSpace<f64> {
    space(sphere(2, &tol()).unwrap())
}

fn all_spaces() -> Vec<SymmetricSpace<f64>> {
    let sp = sphere(2, &tol()).unwrap();
    vec![
        space(sp.clone()),
        spd2(),
        space(grassmann(1, 3, &tol()).unwrap()),
        space(torus(&tol()).unwrap()),
        space(product(&sp, &sp, &tol()).unwrap()),
    ]
}

fn rand_vec(rng: &mut ChaCha8Rng, n: usize, r: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-r..r)).collect()
}

fn random_point(m: &SymmetricSpace<f64>, rng: &mut ChaCha8Rng) -> SymPoint<f64> {
    // products of exponentials reach beyond a single normal chart
    let a = m.exp_point(&rand_vec(rng, m.dim(), 0.5)).unwrap();
    let b = m.exp_point(&rand_vec(rng, m.dim(), 0.5)).unwrap();
    m.mu(&a, &b).unwrap()
}

#[test]
fn base_point_is_identity() {
    for m in all_spaces() {
        let b = m.base_point();
        let id = Matrix::identity(m.pair().ambient_n());
        assert_eq!(b.rep(), &id);
        assert_eq!(b.cartan(), &id);
    }
}

#[test]
fn mu_examples() {
    let m = spd2();
    let x = m.point(Matrix::diag(&[2.0, 1.0])).unwrap();
    assert!(x.cartan().dist(&Matrix::diag(&[4.0, 1.0])) < 1e-15);
    let y = m.mu(&x, &m.base_point()).unwrap();
    assert!(y.cartan().dist(&Matrix::diag(&[16.0, 1.0])) < 1e-13);
    assert!(m.mu(&x, &x).unwrap().same_point(&x, &tol()));
    let z = m.exp_point(&[0.3, -0.2, 0.5]).unwrap();
    let inv = crate::numkernel::inverse(z.cartan()).unwrap();
    assert!(m.mu(&m.base_point(), &z).unwrap().cartan().dist(&inv) < 1e-13);
}

#[test]
fn mu_rejects_foreign_points() {
    let (a, b) = (s2(), spd2());
    assert_eq!(
        a.mu(&a.base_point(), &b.base_point()).unwrap_err(),
        SymError::PairMismatch
    );
}

#[test]
fn exp_point_examples() {
    let m = spd2();
    assert!(m.exp_point(&[0.0; 3]).unwrap().same_point(&m.base_point(), &tol()));
    let p = m.exp_point(&[1.0, 0.0, 0.0]).unwrap();
    assert!(p.cartan().dist(&Matrix::diag(&[1f64.exp().powi(2), 1.0])) < 1e-12);

    // quarter turn in g- of the sphere: Cartan image is a half turn in the (0,2) plane
    let s = s2();
    let p = s.exp_point(&[FRAC_PI_2, 0.0]).unwrap();
    let a = 2.0 * FRAC_PI_2;
    let want = Matrix::from_f64(3, 3, &[a.cos(), 0.0, a.sin(), 0.0, 1.0, 0.0, -a.sin(), 0.0, a.cos()]);
    assert!(p.cartan().dist(&want) < 1e-14);
    assert!(p.invariant_residual().unwrap() < 1e-14);
}

#[test]
fn log_point_examples() {
    let m = spd2();
    assert!(m.log_point(&m.base_point()).unwrap().iter().all(|x| x.abs() < 1e-15));
    let p = m.point(Matrix::diag(&[1f64.exp(), 1.0])).unwrap();
    let v = m.log_point(&p).unwrap();
    assert!(crate::numkernel::dist_vec(&v, &[1.0, 0.0, 0.0]) < 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for m in all_spaces() {
        for _ in 0..20 {
            let v = rand_vec(&mut rng, m.dim(), 0.2 / (m.dim() as f64).sqrt());
            let back = m.log_point(&m.exp_point(&v).unwrap()).unwrap();
            assert!(crate::numkernel::dist_vec(&v, &back) < 1e-12);
        }
    }
    // antipodal region of the sphere is outside the principal chart
    assert!(matches!(s2().log_point(&s2().exp_point(&[FRAC_PI_2, 0.0]).unwrap()), Err(SymError::OutOfChart(_))));
}

#[test]
fn one_param_examples() {
    let m = spd2();
    let v = [0.2, -0.4, 0.3];
    assert!(m.one_param(&v, 0.0).unwrap().same_point(&m.base_point(), &tol()));
    assert!(m.one_param(&v, 1.0).unwrap().same_point(&m.exp_point(&v).unwrap(), &tol()));
    let two = m.mu(&m.one_param(&v, 1.0).unwrap(), &m.one_param(&v, 0.0).unwrap()).unwrap();
    assert!(two.same_point(&m.exp_point(&[0.4, -0.8, 0.6]).unwrap(), &tol()));
    for (s, t) in [(0.3, -0.7), (1.1, 0.4)] {
        let lhs = m.one_param(&v, 2.0 * s - t).unwrap();
        let rhs = m.mu(&m.one_param(&v, s).unwrap(), &m.one_param(&v, t).unwrap()).unwrap();
        assert!(lhs.same_point(&rhs, &tol()));
    }
}

#[test]
fn translation_examples() {
    let m = s2();
    let v = [0.4, -0.3];
    let x = m.exp_point(&[0.1, 0.5]).unwrap();
    assert!(m.translation(&v, 0.0, &x).unwrap().same_point(&x, &tol()));
    assert!(m.translation(&[0.0, 0.0], 0.7, &x).unwrap().same_point(&x, &tol()));
    let at = m.one_param(&v, 0.6).unwrap();
    let moved = m.translation(&v, -1.1, &at).unwrap();
    assert!(moved.same_point(&m.one_param(&v, -0.5).unwrap(), &tol()));
    let path = OneParamSubspace {
        base: m.base_point(),
        direction: v.to_vec(),
    };
    assert!(path.at(&m, 0.6).unwrap().same_point(&at, &tol()));
}

#[test]
fn tau_examples() {
    let m = spd2();
    let x = m.exp_point(&[0.1, 0.2, -0.3]).unwrap();
    assert!(m.tau_action(&Matrix::identity(2), &x).unwrap().same_point(&x, &tol()));
    let g = Matrix::from_f64(2, 2, &[1.0, 2.0, 0.0, 3.0]);
    assert!(m
        .tau_action(&g, &m.base_point())
        .unwrap()
        .same_point(&m.point(g.clone()).unwrap(), &tol()));
    // tau_g^2 = mu_{gK} mu_K when sigma(g) = g^{-1}
    let v = [0.3, -0.1, 0.25];
    let g = mat_exp(&m.pair().minus_matrix(&v)).unwrap();
    let gk = m.point(g.clone()).unwrap();
    let lhs = m.tau_action(&g, &m.tau_action(&g, &x).unwrap()).unwrap();
    let rhs = m.mu(&gk, &m.mu(&m.base_point(), &x).unwrap()).unwrap();
    assert!(lhs.same_point(&rhs, &tol()));
}

#[test]
fn trotter_sum_examples() {
    let m = spd2();
    let (d1, d2) = ([0.3, -0.2, 0.0], [0.5, 0.1, 0.0]);
    let want = m.exp_point(&[0.8, -0.1, 0.0]).unwrap();
    for k in [1, 5, 32] {
        assert!(m.trotter_sum_sym(&d1, &d2, k).unwrap().distance(&want) < 1e-12);
    }
    let (x, y) = ([1.0, 0.0, 0.0], [0.0, 0.0, 1.0]);
    let target = m.exp_point(&[1.0, 0.0, 1.0]).unwrap();
    assert!(m.trotter_sum_sym(&x, &y, 1024).unwrap().distance(&target) < 1e-2);
    assert!(m.trotter_sum_sym(&x, &[0.0; 3], 1).unwrap().distance(&m.exp_point(&x).unwrap()) < 1e-13);
}

#[test]
fn trotter_sum_matches_sequential_symmetries() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for m in all_spaces() {
        let x = rand_vec(&mut rng, m.dim(), 1.0);
        let y = rand_vec(&mut rng, m.dim(), 1.0);
        for k in [1, 2, 7] {
            let fast = m.trotter_sum_sym(&x, &y, k).unwrap();
            let slow = m.trotter_sum_naive(&x, &y, k).unwrap();
            assert!(fast.distance(&slow) < 1e-11, "{} k={k}", m.pair().label());
        }
    }
}

#[test]
fn trotter_sum_error_decreases() {
    let m = spd2();
    let (x, y) = ([1.0, 0.0, 0.0], [0.0, 0.0, 1.0]);
    let target = m.exp_point(&[1.0, 0.0, 1.0]).unwrap();
    let errs: Vec<f64> = (4..=12)
        .map(|e| m.trotter_sum_sym(&x, &y, 1 << e).unwrap().distance(&target))
        .collect();
    for w in errs.windows(2) {
        assert!(w[1] < w[0] * 1.1);
    }
}

#[test]
fn trotter_sum_first_order_rate() {
    let m = spd2();
    let (x, y) = ([1.0, 0.0, 0.0], [0.0, 0.0, 1.0]);
    let target = m.exp_point(&[1.0, 0.0, 1.0]).unwrap();
    let errs: Vec<f64> = (6..=10)
        .map(|e| m.trotter_sum_sym(&x, &y, 1 << e).unwrap().distance(&target))
        .collect();
    for w in errs.windows(2) {
        let r = w[1] / w[0];
        assert!((0.4..=0.6).contains(&r), "{errs:?}");
    }
}

#[test]
fn trotter_bracket_examples() {
    let m = spd2();
    let (x, y, z) = ([1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]);
    let zero = [0.0; 3];
    assert!(m.trotter_bracket_sym(&zero, &y, &z, 4, 4).unwrap().distance(&m.base_point()) < 1e-13);
    // [[E11, E12+E21], E11] = -(E12+E21)
    let target = m.exp_point(&[0.0, 0.0, -1.0]).unwrap();
    let err = |k, l| m.trotter_bracket_sym(&x, &y, &z, k, l).unwrap().distance(&target);
    let diag: Vec<f64> = [8, 16, 32].iter().map(|&k| err(k, k)).collect();
    assert!(diag[0] > diag[1] && diag[1] > diag[2], "{diag:?}");
    // independent scipy evaluation of the same approximant
    assert!((diag[0] - 3.7602648532696).abs() < 1e-9);
    assert!((diag[2] - 2.2032062793365).abs() < 1e-9);
    // the inner limit needs l >> sqrt(k)
    assert!(err(8, 64) < 0.75 && err(8, 256) < 0.44);
    assert!(err(32, 1024) < 0.13);
}

#[test]
fn trotter_bracket_on_sphere_approaches_curvature() {
    let m = s2();
    let (x, y) = ([1.0, 0.0], [0.0, 1.0]);
    let lts = m.lts_of_pair().unwrap();
    let target = m.exp_point(&lts.bracket(&x, &y, &y).unwrap()).unwrap();
    let err = |k, l| m.trotter_bracket_sym(&x, &y, &y, k, l).unwrap().distance(&target);
    let (e8, e32, far) = (err(8, 8), err(32, 32), err(32, 1024));
    assert!(far < e32 && e32 < e8, "{e8} {e32} {far}");
}

#[test]
fn trotter_bracket_matches_sequential_symmetries() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for m in all_spaces() {
        let v: Vec<Vec<f64>> = (0..3).map(|_| rand_vec(&mut rng, m.dim(), 1.0)).collect();
        for (k, l) in [(1, 1), (2, 1), (2, 3)] {
            let fast = m.trotter_bracket_sym(&v[0], &v[1], &v[2], k, l).unwrap();
            let slow = m.trotter_bracket_naive(&v[0], &v[1], &v[2], k, l).unwrap();
            assert!(fast.distance(&slow) < 1e-10, "{} ({k},{l})", m.pair().label());
        }
    }
}

#[test]
fn chain_identity_examples() {
    let m = spd2();
    let r = m.chain_identity_check(&[vec![0.3, -0.2, 0.1]], &[vec![0.0; 3]]).unwrap();
    assert!(r < 1e-13);
    let r = m.chain_identity_check(&vec![vec![0.0; 3]; 2], &vec![vec![0.0; 3]; 2]).unwrap();
    assert_eq!(r, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for m in all_spaces() {
        for _ in 0..20 {
            let xs: Vec<Vec<f64>> = (0..3).map(|_| rand_vec(&mut rng, m.dim(), 0.5)).collect();
            let ys: Vec<Vec<f64>> = (0..3).map(|_| rand_vec(&mut rng, m.dim(), 0.5)).collect();
            let r = m.chain_identity_check(&xs, &ys).unwrap();
            assert!(r < 1e-9, "{} {r:e}", m.pair().label());
        }
    }
}

#[test]
fn lts_of_pair_examples() {
    let t = space(torus(&tol()).unwrap()).lts_of_pair().unwrap();
    assert_eq!(t.scale(), 0.0);
    let s = s2().lts_of_pair().unwrap();
    let curv = crate::lts::LieTripleSystem::<f64>::curvature(2);
    // so(3) gives the curvature bracket with the opposite sign
    let neg: Vec<f64> = curv.tensor().iter().map(|x| -x).collect();
    let neg = crate::lts::LieTripleSystem::new(2, neg, "neg").unwrap();
    assert!(s.tensor_distance(&neg).unwrap() < 1e-14);
    let p = spd2().lts_of_pair().unwrap();
    let to_mat = |v: &[f64]| Matrix::<f64>::from_f64(2, 2, &[v[0], v[2], v[2], v[1]]);
    for (i, j, k) in [(0, 2, 0), (2, 1, 2), (0, 1, 2)] {
        let e = |a: usize| crate::numkernel::unit_vector::<f64>(3, a);
        let w = to_mat(&e(i)).commutator(&to_mat(&e(j))).commutator(&to_mat(&e(k)));
        let got = p.bracket(&e(i), &e(j), &e(k)).unwrap();
        assert!(to_mat(&got).dist(&w) < 1e-14);
    }
}

#[test]
fn sym_morphism_examples() {
    let sp = Arc::new(sphere::<f64>(2, &tol()).unwrap());
    let sq = Arc::new(product(&sp, &sp, &tol()).unwrap());
    let (m1, m2) = (SymmetricSpace::new(sp.clone()), SymmetricSpace::new(sq.clone()));
    let id = sym_morphism(PairMorphism::identity(sp.clone()).unwrap());
    let x = m1.exp_point(&[0.3, 0.4]).unwrap();
    assert!(id.apply(&x).unwrap().same_point(&x, &tol()));
    let proj = sym_morphism(PairMorphism::new(sq.clone(), sp.clone(), GroupMap::Project { offset: 0, size: 3 }).unwrap());
    let img = proj.apply(&m2.exp_point(&[0.3, 0.4, -1.0, 0.2]).unwrap()).unwrap();
    assert!(img.same_point(&x, &tol()));
    let diag = sym_morphism(PairMorphism::new(sp, sq, GroupMap::Diagonal).unwrap());
    assert!(diag.apply(&m1.base_point()).unwrap().same_point(&m2.base_point(), &tol()));
}

#[test]
fn exp_is_functorial_through_morphisms() {
    let sp = Arc::new(sphere::<f64>(2, &tol()).unwrap());
    let sq = Arc::new(product(&sp, &sp, &tol()).unwrap());
    let maps = [
        PairMorphism::new(sp.clone(), sq.clone(), GroupMap::Diagonal).unwrap(),
        PairMorphism::new(sq.clone(), sp.clone(), GroupMap::Project { offset: 3, size: 3 }).unwrap(),
        PairMorphism::identity(sq.clone()).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for f in maps {
        let f = sym_morphism(f);
        let (src, dst) = (f.source(), f.target());
        let a = f.tangent_map();
        for _ in 0..50 {
            let v = rand_vec(&mut rng, src.dim(), 1.0);
            let lhs = f.apply(&src.exp_point(&v).unwrap()).unwrap();
            let rhs = dst.exp_point(&a.matvec(&v)).unwrap();
            assert!(lhs.distance(&rhs) < 1e-12);
        }
    }
}

#[test]
fn reflection_space_axioms_on_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for m in all_spaces() {
        for _ in 0..30 {
            let (x, y, z) = (random_point(&m, &mut rng), random_point(&m, &mut rng), random_point(&m, &mut rng));
            let rel = |a: &SymPoint<f64>, b: &SymPoint<f64>| a.distance(b) / b.cartan().frobenius_norm().max(1.0);
            assert!(rel(&m.mu(&x, &m.mu(&x, &y).unwrap()).unwrap(), &y) < 1e-8);
            assert!(rel(&m.mu(&x, &x).unwrap(), &x) < 1e-8);
            let lhs = m.mu(&x, &m.mu(&y, &z).unwrap()).unwrap();
            let rhs = m.mu(&m.mu(&x, &y).unwrap(), &m.mu(&x, &z).unwrap()).unwrap();
            assert!(rel(&lhs, &rhs) < 1e-8, "{} {:e} {:e}", m.pair().label(), rel(&lhs, &rhs), lhs.cartan().frobenius_norm());
            assert!(x.invariant_residual().unwrap() < 1e-8);
        }
    }
}

#[test]
fn symmetry_at_base_has_derivative_minus_identity() {
    let h = 1e-4;
    for m in all_spaces() {
        let b = m.base_point();
        for i in 0..m.dim() {
            let e = crate::numkernel::unit_vector::<f64>(m.dim(), i);
            let f = |s: f64| m.log_point(&m.mu(&b, &m.exp_point(&crate::numkernel::scaled(s, &e)).unwrap()).unwrap()).unwrap();
            let d = crate::numkernel::scaled(1.0 / (2.0 * h), &crate::numkernel::sub(&f(h), &f(-h)));
            let want = crate::numkernel::scaled(-1.0, &e);
            assert!(crate::numkernel::dist_vec(&d, &want) < 1e-8);
        }
    }
}

#[test]
fn tangent_product_is_two_v_minus_w() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for m in all_spaces() {
        let u = rand_vec(&mut rng, m.dim(), 1.0);
        let w = rand_vec(&mut rng, m.dim(), 1.0);
        let f = |eps: f64| {
            let p = m
                .mu(&m.exp_point(&crate::numkernel::scaled(eps, &u)).unwrap(), &m.exp_point(&crate::numkernel::scaled(eps, &w)).unwrap())
                .unwrap();
            crate::numkernel::scaled(1.0 / eps, &m.log_point(&p).unwrap())
        };
        let want: Vec<f64> = u.iter().zip(&w).map(|(a, b)| 2.0 * a - b).collect();
        let eps = 1e-2;
        let rich: Vec<f64> = f(eps / 2.0).iter().zip(f(eps)).map(|(a, b)| (4.0 * a - b) / 3.0).collect();
        assert!(crate::numkernel::dist_vec(&f(eps), &want) < 1e-2);
        assert!(crate::numkernel::dist_vec(&rich, &want) < 1e-6, "{}", m.pair().label());
    }
}

#[test]
fn single_precision_space() {
    let t = Tolerance::<f32>::default();
    let m = SymmetricSpace::new(Arc::new(spd::<f32>(2, &t).unwrap()));
    let v = [0.1f32, -0.05, 0.08];
    let back = m.log_point(&m.exp_point(&v).unwrap()).unwrap();
    assert!(crate::numkernel::dist_vec(&v, &back) < 1e-5);
    let x = m.exp_point(&v).unwrap();
    assert!(m.mu(&x, &x).unwrap().same_point(&x, &t));
}

mod props {
    use super::*;
    use proptest::prelude::*;

    fn coords(n: usize) -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-0.5f64..0.5, n)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn symmetries_are_involutive_automorphisms(a in coords(3), b in coords(3), c in coords(3)) {
            let m = spd2();
            let (x, y, z) = (m.exp_point(&a).unwrap(), m.exp_point(&b).unwrap(), m.exp_point(&c).unwrap());
            prop_assert!(m.mu(&x, &m.mu(&x, &y).unwrap()).unwrap().same_point(&y, &tol()));
            let lhs = m.mu(&x, &m.mu(&y, &z).unwrap()).unwrap();
            let rhs = m.mu(&m.mu(&x, &y).unwrap(), &m.mu(&x, &z).unwrap()).unwrap();
            prop_assert!(lhs.same_point(&rhs, &tol().loose()));
        }

        #[test]
        fn exp_log_roundtrip_on_sphere(v in coords(2)) {
            let m = s2();
            let back = m.log_point(&m.exp_point(&v).unwrap()).unwrap();
            prop_assert!(crate::numkernel::dist_vec(&v, &back) < 1e-12);
        }

        #[test]
        fn fast_and_sequential_trotter_agree(x in coords(2), y in coords(2), k in 1u64..6) {
            let m = s2();
            let d = m.trotter_sum_sym(&x, &y, k).unwrap().distance(&m.trotter_sum_naive(&x, &y, k).unwrap());
            prop_assert!(d < 1e-12);
        }
    }
}
