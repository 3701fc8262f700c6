//! Property tests. Tensors are drawn from a seeded ChaCha stream so that
//! shrinking acts on the seed and the dimension.

use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use legendrian_pinching::canonical::canonical3;
use legendrian_pinching::curvature::{algebraic_curvature, simons_gap, simons_rhs};
use legendrian_pinching::g2::{almost_complex, cross, nearly_kahler_defect};
use legendrian_pinching::linalg::random_orthogonal;
use legendrian_pinching::pinching::{beta_chain_check, kappa_gap_xyz, newton_gap, pinching_report};
use legendrian_pinching::report::random_mu;
use legendrian_pinching::spectrum::{cubic_form, theta, ThetaOptions};
use legendrian_pinching::tensor::SymCubic;

fn traceless(n: usize, seed: u64) -> SymCubic {
    SymCubic::random_traceless(n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs().max(b.abs()))
}

/// Slices `A_i = sigma(e_i, ., .)` built from the dense array.
fn slices(s: &SymCubic) -> Vec<DMatrix<f64>> {
    let n = s.dim();
    let d = s.to_dense();
    (0..n)
        .map(|i| DMatrix::from_fn(n, n, |j, k| d[(i * n + j) * n + k]))
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn unit7() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, 7)
        .prop_filter("nonzero", |v| dot(v, v) > 1e-2)
        .prop_map(|v| {
            let r = dot(&v, &v).sqrt();
            v.into_iter().map(|x| x / r).collect()
        })
}

/// A unit vector tangent to `S^6` at `p`.
fn tangent(p: &[f64], w: &[f64]) -> Option<Vec<f64>> {
    let c = dot(p, w);
    let v: Vec<f64> = w.iter().zip(p).map(|(a, b)| a - c * b).collect();
    let r = dot(&v, &v).sqrt();
    (r > 1e-3).then(|| v.into_iter().map(|x| x / r).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn invariants_match_matrix_oracle(n in 2usize..7, seed in any::<u64>()) {
        let s = SymCubic::random_gaussian(n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let a = slices(&s);
        let mut gram = 0.0;
        let mut comm = 0.0;
        for i in 0..n {
            for j in 0..n {
                gram += (&a[i] * &a[j]).trace().powi(2);
                comm += (&a[i] * &a[j] - &a[j] * &a[i]).norm_squared();
            }
        }
        let norm_sq: f64 = a.iter().map(|m| m.norm_squared()).sum();
        let inv = s.invariants();
        prop_assert!(rel(inv.norm_sq, norm_sq) < 1e-12);
        prop_assert!(rel(inv.gram, gram) < 1e-12);
        prop_assert!(rel(inv.comm, comm) < 1e-12);
    }

    #[test]
    fn traceless_projection_is_orthogonal(n in 2usize..7, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = SymCubic::random_gaussian(n, &mut rng).unwrap();
        let p = s.traceless_part();
        prop_assert!(p.is_traceless(1e-12));
        prop_assert!(p.traceless_part().max_abs_diff(&p) < 1e-13);
        let other = SymCubic::random_traceless(n, &mut rng).unwrap();
        let removed = s.add(&p.scaled(-1.0));
        prop_assert!(removed.dot(&other).abs() < 1e-11);
    }

    #[test]
    fn invariants_and_theta_are_rotation_invariant(n in 2usize..6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = SymCubic::random_traceless(n, &mut rng).unwrap();
        let q = random_orthogonal(n, &mut rng);
        let r = s.rotated(&q);
        let (a, b) = (s.invariants(), r.invariants());
        prop_assert!(rel(a.norm_sq, b.norm_sq) < 1e-12);
        prop_assert!(rel(a.gram, b.gram) < 1e-11);
        prop_assert!(rel(a.comm, b.comm) < 1e-11);
        let opts = ThetaOptions::default();
        let (ta, tb) = (theta(&s, &opts).unwrap().theta, theta(&r, &opts).unwrap().theta);
        prop_assert!(rel(ta, tb) < 1e-9, "{ta} vs {tb}");
    }

    #[test]
    fn text_round_trip_is_exact(n in 2usize..6, seed in any::<u64>()) {
        let s = SymCubic::random_gaussian(n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(SymCubic::from_text(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn theta_dominates_random_directions(n in 2usize..6, seed in any::<u64>(), dirs in prop::collection::vec(prop::collection::vec(-1.0..1.0f64, 5), 20)) {
        let s = traceless(n, seed);
        let spec = theta(&s, &ThetaOptions::default()).unwrap();
        prop_assert!(rel(cubic_form(&s, &spec.e1).unwrap(), spec.theta) < 1e-12);
        prop_assert!(spec.lagrange_residual < 1e-8);
        for d in dirs {
            let x = &d[..n];
            let r = dot(x, x).sqrt();
            if r < 1e-3 { continue; }
            let x: Vec<f64> = x.iter().map(|v| v / r).collect();
            prop_assert!(cubic_form(&s, &x).unwrap() <= spec.theta + 1e-10);
        }
    }

    #[test]
    fn simons_contraction_and_homogeneity(n in 2usize..6, seed in any::<u64>(), c in 0.1..3.0f64) {
        let s = traceless(n, seed);
        let g = simons_gap(&s);
        prop_assert!(rel(s.dot(&simons_rhs(&s).unwrap()), g) < 1e-11);
        // (n+1)|s|^2 is quadratic, the other two terms quartic
        let inv = s.invariants();
        let scaled = simons_gap(&s.scaled(c));
        let expected = (n as f64 + 1.0) * c * c * inv.norm_sq - c.powi(4) * (inv.gram + inv.comm);
        prop_assert!(rel(scaled, expected) < 1e-11);
    }

    #[test]
    fn curvature_has_algebraic_symmetries(n in 2usize..6, seed in any::<u64>()) {
        let r = algebraic_curvature(&traceless(n, seed)).unwrap();
        prop_assert!(r.symmetry_residual() < 1e-12);
        prop_assert!(r.bianchi_residual() < 1e-12);
    }

    #[test]
    fn canonical_form_reconstructs(seed in any::<u64>()) {
        let s = traceless(3, seed);
        let c = canonical3(&s).unwrap();
        let scale = 1.0 + s.max_abs();
        prop_assert!(c.reconstruct().max_abs_diff(&s) < 1e-8 * scale);
        prop_assert!(rel(c.norm_sq(), s.norm_sq()) < 1e-9);
        prop_assert!(rel(c.gram(), s.invariants().gram) < 1e-9);
        let t = theta(&s, &ThetaOptions::default()).unwrap().theta;
        prop_assert!(rel(c.theta(), t) < 1e-9);
    }

    #[test]
    fn kappa_gap_is_nonnegative(x in 0.0..10.0f64, y in 0.0..10.0f64, z in 0.0..10.0f64, kappa in 1.4..20.0f64) {
        let g = kappa_gap_xyz(x, y, z, kappa).unwrap();
        prop_assert!(g >= -1e-9 * (1.0 + x + y + z).powi(2), "gap {g}");
    }

    #[test]
    fn newton_gap_is_nonnegative_and_cubic(a in prop::collection::vec(0.0..5.0f64, 2..10), c in 0.1..4.0f64) {
        let g = newton_gap(&a).unwrap();
        let sum: f64 = a.iter().sum();
        prop_assume!(sum > 1e-6);
        prop_assert!(g >= -1e-12 * (1.0 + sum.powi(3)));
        let ca: Vec<f64> = a.iter().map(|v| c * v).collect();
        prop_assert!(rel(newton_gap(&ca).unwrap(), c.powi(3) * g) < 1e-10);
    }

    #[test]
    fn newton_gap_vanishes_on_constant_tuples(m in 2usize..12, c in 0.01..10.0f64) {
        prop_assert!(newton_gap(&vec![c; m]).unwrap().abs() < 1e-12 * (1.0 + c.powi(3) * (m as f64).powi(3)));
    }

    #[test]
    fn beta_chain_holds(n in 3usize..9, seed in any::<u64>()) {
        let mu = random_mu(n, &mut ChaCha8Rng::seed_from_u64(seed));
        let b = beta_chain_check(&mu, n).unwrap();
        prop_assert!(b.passes, "{b:?}");
        prop_assert!(b.beta >= b.cs_bound - 1e-9);
    }

    #[test]
    fn pinching_report_is_consistent(n in 2usize..6, seed in any::<u64>()) {
        let r = pinching_report(&traceless(n, seed)).unwrap();
        prop_assert!(r.is_consistent(), "{:?}", r.violations);
        prop_assert!(r.beta <= r.norm_sq + 1e-9 * (1.0 + r.norm_sq));
    }

    #[test]
    fn cross_product_identities(x in prop::collection::vec(-2.0..2.0f64, 7), y in prop::collection::vec(-2.0..2.0f64, 7)) {
        let c = cross(&x, &y).unwrap();
        let lagrange = dot(&x, &x) * dot(&y, &y) - dot(&x, &y).powi(2);
        prop_assert!((dot(&c, &c) - lagrange).abs() < 1e-10);
        prop_assert!(dot(&c, &x).abs() < 1e-12);
        prop_assert!(dot(&c, &y).abs() < 1e-12);
        let back = cross(&y, &x).unwrap();
        prop_assert!(c.iter().zip(&back).all(|(a, b)| (a + b).abs() < 1e-14));
    }

    #[test]
    fn almost_complex_structure(p in unit7(), w in prop::collection::vec(-1.0..1.0f64, 7), w2 in prop::collection::vec(-1.0..1.0f64, 7)) {
        let (Some(v), Some(u)) = (tangent(&p, &w), tangent(&p, &w2)) else { return Ok(()) };
        let jv = almost_complex(&p, &v).unwrap();
        prop_assert!(dot(&jv, &p).abs() < 1e-12);
        prop_assert!((dot(&jv, &jv) - 1.0).abs() < 1e-12);
        let jju = almost_complex(&p, &almost_complex(&p, &u).unwrap()).unwrap();
        prop_assert!(jju.iter().zip(&u).all(|(a, b)| (a + b).abs() < 1e-12));
        let ju = almost_complex(&p, &u).unwrap();
        prop_assert!((dot(&jv, &ju) - dot(&v, &u)).abs() < 1e-12);
    }

    #[test]
    fn nearly_kahler_along_great_circles(p in unit7(), w in prop::collection::vec(-1.0..1.0f64, 7), t in 0.0..6.3f64) {
        let Some(v) = tangent(&p, &w) else { return Ok(()) };
        prop_assert!(nearly_kahler_defect(&p, &v, t, 1e-4).unwrap() <= 1e-4);
    }
}
